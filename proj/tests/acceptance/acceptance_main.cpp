// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "onreg/divergence.hpp"
#include "onreg/entropy.hpp"
#include "onreg/errors.hpp"
#include "onreg/experiment.hpp"
#include "onreg/lipschitz.hpp"
#include "onreg/protocol.hpp"
#include "onreg/registry.hpp"
#include "onreg/relu.hpp"
#include "onreg/rng.hpp"

using namespace onreg;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& title, const Verdict& v, double seconds) {
  std::printf("[%s] %2d %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), seconds,
              v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++g_failures;
}

void run(int id, const std::string& title, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, title, v, s);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Verdict one_relu_bound() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  // Hand example: d = 1, w* = 1, x = 1, 1.
  {
    OneReluLearner learner(1);
    HypothesisEnvironment env({{1.0}, {1.0}}, [](std::span<const double> x) { return relu(x[0]); });
    const Transcript tr = run_game(learner, env, Loss::power(2.0), 2);
    if (tr.cumulative_loss != 1.0) {
      v.pass = false;
      v.detail += "hand example gave " + fmt("%.17g", tr.cumulative_loss) + "; ";
    }
  }
  const std::size_t dims[] = {1, 10, 50};
  constexpr int kGames = 1000;
  constexpr std::size_t kT = 10000;
  int violations = 0;
  double worst_slack = 1e300;
  for (std::size_t d : dims) {
#pragma omp parallel for reduction(+ : violations) reduction(min : worst_slack) schedule(dynamic, 8)
    for (int g = 0; g < kGames; ++g) {
      RandomReluEnvironment env(d, kT, derive_seed(kSeed, d * 100000 + static_cast<std::size_t>(g)));
      OneReluLearner learner(d, false);
      const Transcript tr = run_game(learner, env, Loss::power(2.0), kT);
      const double bound = dot(env.w_star(), env.w_star());
      if (tr.horizon() != kT || tr.cumulative_loss > bound + 1e-9) ++violations;
      worst_slack = std::min(worst_slack, bound - tr.cumulative_loss);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (violations > 0) v.pass = false;
  if (seconds >= 30.0) {
    v.pass = false;
    v.detail += "runtime " + fmt("%.1f", seconds) + "s >= 30s; ";
  }
  v.detail += std::to_string(violations) + " violations over 3000 games; min slack " +
              fmt("%.3g", worst_slack);
  return v;
}

Verdict check_mistake_bound() {
  const auto start = std::chrono::steady_clock::now();
  const double eps_list[] = {1.0, 0.5, 0.25, 0.125};
  constexpr int kSequences = 100;
  constexpr std::size_t kT = 1000;
  int violations = 0;
  int uncertified = 0;
  double max_ratio = 0.0;
  for (double L : {1.0, 2.0}) {
    for (std::size_t d : {std::size_t{1}, std::size_t{2}}) {
#pragma omp parallel for reduction(+ : violations, uncertified) reduction(max : max_ratio) schedule(dynamic)
      for (int s = 0; s < 2 * kSequences; ++s) {
        const std::uint64_t seed = derive_seed(kSeed + 2, static_cast<std::uint64_t>(s) * 10 +
                                                               static_cast<std::uint64_t>(L) * 3 + d);
        std::unique_ptr<Environment> env;
        if (s < kSequences) {
          env = std::make_unique<ExtremalAdversary>(L, d, kT, seed);
        } else {
          env = std::make_unique<RandomLipschitzEnvironment>(L, d, kT, seed);
        }
        EnvelopeLearner learner(L, d);
        const Transcript tr = run_game(learner, *env, Loss::power(1.0), kT);
        if (!certify_realizable(tr, *env->witness())) ++uncertified;
        for (double eps : eps_list) {
          const double count = static_cast<double>(count_rounds_above(tr, eps));
          const double bound = envelope_mistake_bound(L, d, eps);
          max_ratio = std::max(max_ratio, count / bound);
          if (count > bound) ++violations;
        }
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Verdict v;
  v.pass = violations == 0 && uncertified == 0 && seconds < 120.0;
  v.detail = std::to_string(violations) + " violations, " + std::to_string(uncertified) +
             " uncertified transcripts over 800 sequences x 4 eps; max count/bound " +
             fmt("%.3f", max_ratio);
  return v;
}

Verdict supercritical_constant_check() {
  // Independent recomputation: c_{1,2} = 8^-1 ((3/4)^1 - (1/4)^1) = 1/16,
  // C' = 2^-2 * 2^1 / (1/16) = 8.
  const double oracle = 0.25 * 2.0 / ((0.75 - 0.25) / 8.0);
  Verdict v;
  if (std::abs(supercritical_constant(1, 2.0) - oracle) > 1e-12 || oracle != 8.0) {
    return {false, "constant mismatch: " + fmt("%.17g", supercritical_constant(1, 2.0))};
  }
  const Loss loss = Loss::power(2.0);
  double worst = 0.0;
  int tested = 0;
  int over = 0;
  auto check = [&](Environment& env, std::size_t T) {
    EnvelopeLearner learner(1.0, 1);
    const Transcript tr = run_game(learner, env, loss, T);
    worst = std::max(worst, tr.cumulative_loss);
    ++tested;
    if (tr.cumulative_loss > oracle) ++over;
  };
  for (int s = 0; s < 50; ++s) {
    ExtremalAdversary adv(1.0, 1, 4000, derive_seed(kSeed + 3, static_cast<std::uint64_t>(s)));
    check(adv, 4000);
    RandomLipschitzEnvironment rnd(1.0, 1, 4000, derive_seed(kSeed + 4, static_cast<std::uint64_t>(s)));
    check(rnd, 4000);
  }
  for (bool scaled : {true, false}) {
    DyadicAdversary dy(1.0, 1, 1u << 14, {scaled});
    check(dy, 1u << 14);
  }
  GridAdversary grid(1.0, 1, 2.0, 4096);
  check(grid, 4096);
  v.pass = over == 0;
  v.detail = std::to_string(over) + " of " + std::to_string(tested) +
             " sequences above 8; worst cumulative l2 loss " + fmt("%.4f", worst);
  return v;
}

struct DyadicSweep {
  std::vector<double> log_t;
  std::vector<double> loss;
  int over_bound = 0;
  int uncertified = 0;
};

DyadicSweep run_dyadic_sweep() {
  DyadicSweep sweep;
  for (int e = 4; e <= 14; ++e) {
    const std::size_t T = std::size_t{1} << e;
    DyadicAdversary adv(1.0, 1, T);
    EnvelopeLearner learner(1.0, 1);
    const Transcript tr = run_game(learner, adv, Loss::power(1.0), T);
    sweep.log_t.push_back(std::log(static_cast<double>(T)));
    sweep.loss.push_back(tr.cumulative_loss);
    if (tr.cumulative_loss > critical_upper_bound(1.0, 1, T)) ++sweep.over_bound;
    if (!certify_realizable(tr, *adv.witness())) ++sweep.uncertified;
  }
  return sweep;
}

Verdict critical_log_growth(const DyadicSweep& sweep) {
  const LinearFit fit = fit_line(sweep.log_t, sweep.loss);
  Verdict v;
  v.pass = sweep.over_bound == 0 && fit.slope > 0.0 && fit.r2 >= 0.9;
  v.detail = "loss " + fmt("%.3f", sweep.loss.front()) + " (T=16) .. " +
             fmt("%.3f", sweep.loss.back()) + " (T=16384); " + std::to_string(sweep.over_bound) +
             " above 8(1+ln T); fit slope " + fmt("%.4f", fit.slope) + ", R^2 " +
             fmt("%.4f", fit.r2);
  return v;
}

int g_grid_uncertified = 0;
int g_grid_transcripts = 0;

Verdict subcritical_growth() {
  Verdict v;
  std::string failures;
  int forced_violations = 0;
  for (const LearnerEntry& entry : learner_registry()) {
    for (std::size_t T : {16, 64, 256, 1024}) {
      CellParams p;
      p.L = 1.0;
      p.d = 2;
      p.q = 1.0;
      p.T = T;
      const Loss loss = Loss::power(1.0);
      GridAdversary adv(1.0, 2, 1.0, T);
      auto learner = entry.make(p, loss);
      const Transcript tr = run_game(*learner, adv, loss, T);
      ++g_grid_transcripts;
      if (!certify_realizable(tr, *adv.witness())) ++g_grid_uncertified;
      if (tr.cumulative_loss < adv.forced_loss() - 1e-9) ++forced_violations;
      const double required = 2.0 * std::sqrt(static_cast<double>(T)) - 1e-6;
      if (tr.cumulative_loss < required) {
        v.pass = false;
        failures += " " + entry.name + "@T=" + std::to_string(T) + ":" +
                    fmt("%.3f", tr.cumulative_loss) + "<" + fmt("%.3f", required);
      }
    }
  }
  if (forced_violations) v.pass = false;
  v.detail = std::to_string(forced_violations) + " runs below the forced T(Delta/2)^q; ";
  v.detail += failures.empty() ? "all learners reach 2 sqrt(T)" : "below 2 sqrt(T):" + failures;
  return v;
}

Verdict cover_split_and_drop() {
  constexpr int kClasses = 200;
  int split_violations = 0;
  int drop_failures = 0;
  int nodes = 0;
  int eps_tested = 0;
#pragma omp parallel for reduction(+ : split_violations, drop_failures, nodes, eps_tested) schedule(dynamic)
  for (int i = 0; i < kClasses; ++i) {
    Rng rng = make_rng(kSeed + 6, static_cast<std::uint64_t>(i));
    const std::size_t n = 2 + uniform_index(rng, 11);
    const std::size_t m = 1 + uniform_index(rng, 5);
    const Loss loss = Loss::power(i % 2 == 0 ? 1.0 : 2.0);
    const FiniteClass cls = random_finite_class(rng, n, m, loss, 2 + uniform_index(rng, 4));
    for (int attempt = 0; attempt < 6; ++attempt) {
      // Version space reached by up to two random restrictions.
      RowSet u = cls.all();
      const std::size_t steps = uniform_index(rng, 3);
      for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t x = uniform_index(rng, m);
        const auto labels = cls.labels_at(u, x);
        u = cls.restrict(u, x, labels[uniform_index(rng, labels.size())]);
      }
      std::vector<NodeQuery> options;
      for (std::size_t x = 0; x < m; ++x) {
        const auto labels = cls.labels_at(u, x);
        for (std::size_t a = 0; a < labels.size(); ++a) {
          for (std::size_t b = a + 1; b < labels.size(); ++b) options.push_back({x, labels[a], labels[b]});
        }
      }
      if (options.empty()) continue;
      const NodeQuery node = options[uniform_index(rng, options.size())];
      ++nodes;
      const double gap = loss(node.s0, node.s1);
      const SplitReport r =
          check_cover_split(cls, u, node, admissible_eps_grid(gap, loss.c(), 5));
      split_violations += static_cast<int>(r.violations.size());
      eps_tested += static_cast<int>(r.tested);
      const double phi = entropy_potential(cls, u).value;
      const double phi0 = entropy_potential(cls, cls.restrict(u, node.x, node.s0)).value;
      const double phi1 = entropy_potential(cls, cls.restrict(u, node.x, node.s1)).value;
      const double target = phi - gap / (4.0 * loss.c()) + 1e-9;
      if (!(phi0 <= target || phi1 <= target)) ++drop_failures;
    }
  }
  Verdict v;
  v.pass = split_violations == 0 && drop_failures == 0 && nodes > 0;
  v.detail = std::to_string(nodes) + " nodes, " + std::to_string(eps_tested) + " scales: " +
             std::to_string(split_violations) + " split violations, " +
             std::to_string(drop_failures) + " nodes without a dropping child";
  return v;
}

Verdict sandwich() {
  Verdict v;
  const FiniteClass cube = cube_class();
  const double cube_phi = entropy_potential(cube, cube.all()).value;
  const double cube_d = online_dim_lower_bound(cube, 2);
  if (cube_d != 2.0 || 4.0 * cube.loss().c() * cube_phi != 8.0) {
    v.pass = false;
    v.detail += "cube fixture gave (" + fmt("%.17g", cube_d) + ", " +
                fmt("%.17g", 4.0 * cube_phi) + "); ";
  }
  std::vector<FiniteClass> classes = {cube, separated_grid_class(1.0, 1),
                                      separated_grid_class(1.0, 2), divergence_class(1)};
  Rng rng = make_rng(kSeed + 7, 0);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + uniform_index(rng, 7);
    const std::size_t m = 1 + uniform_index(rng, 4);
    const Loss loss = i % 3 == 0 ? Loss::power(2.0) : i % 3 == 1 ? Loss::power(1.0) : Loss::clipped_squared();
    classes.push_back(random_finite_class(rng, n, m, loss, 2 + uniform_index(rng, 3)));
  }
  int violations = 0;
  double max_ratio = 0.0;
  for (const FiniteClass& cls : classes) {
    const double phi = entropy_potential(cls, cls.all()).value;
    const double bound = 4.0 * cls.loss().c() * phi;
    const double d = online_dim_lower_bound(cls, 4);
    if (d > bound + 1e-9) ++violations;
    if (bound > 0) max_ratio = std::max(max_ratio, d / bound);
  }
  if (violations) v.pass = false;
  v.detail += std::to_string(violations) + " violations of D <= 4c Phi over " +
              std::to_string(classes.size()) + " classes (depth 4); max D/(4c Phi) " +
              fmt("%.3f", max_ratio) + "; cube (D, 4c Phi) = (" + fmt("%g", cube_d) + ", " +
              fmt("%g", 4.0 * cube_phi) + ")";
  return v;
}

int g_interval_uncertified = 0;
int g_interval_transcripts = 0;

Verdict classification_unlearnability() {
  Verdict v;
  std::string problems;
  for (std::size_t D : {3, 6, 10}) {
    for (const LearnerEntry& entry : learner_registry()) {
      CellParams p;
      p.d = 1;
      p.depth = D;
      const Loss loss = Loss::zero_one();
      IntervalAdversary adv(D);
      auto learner = entry.make(p, loss);
      const Transcript tr = run_game(*learner, adv, loss, 1000);
      const std::size_t mistakes = count_rounds_above(tr, 0.5);
      ++g_interval_transcripts;
      const TwoReluParams w = adv.witness_params();
      const bool certified = certify_realizable(tr, *adv.witness()) && w.within_unit_box();
      if (!certified) ++g_interval_uncertified;
      if (mistakes != D || tr.horizon() != D || !certified) {
        v.pass = false;
        problems += " " + entry.name + "@D=" + std::to_string(D) + ":" + std::to_string(mistakes) +
                    (certified ? "" : "(uncertified)");
      }
    }
  }
  v.detail = problems.empty() ? "every learner makes exactly D mistakes; witnesses certify"
                              : "mismatches:" + problems;
  return v;
}

Verdict realizability(const DyadicSweep& sweep) {
  // Extra dyadic runs in the textbook-increment mode and for d = 2.
  int extra = 0, extra_bad = 0;
  for (bool scaled : {false, true}) {
    for (std::size_t d : {std::size_t{1}, std::size_t{2}}) {
      for (double L : {1.0, 2.0}) {
        DyadicAdversary adv(L, d, 2048, {scaled});
        EnvelopeLearner learner(L, d);
        const Transcript tr = run_game(learner, adv, Loss::power(static_cast<double>(d)), 2048);
        ++extra;
        if (!certify_realizable(tr, *adv.witness())) ++extra_bad;
      }
    }
  }
  const int total = static_cast<int>(sweep.loss.size()) + extra + g_grid_transcripts +
                    g_interval_transcripts;
  const int bad = sweep.uncertified + extra_bad + g_grid_uncertified + g_interval_uncertified;
  Verdict v;
  v.pass = bad == 0 && g_grid_transcripts > 0 && g_interval_transcripts > 0;
  v.detail = std::to_string(bad) + " of " + std::to_string(total) +
             " adversary transcripts (dyadic, grid, interval) fail certification at tol 1e-9";
  return v;
}

Verdict check_divergence() {
  Verdict v;
  for (std::size_t K = 1; K <= 3; ++K) {
    const DivergenceExample ex = divergence_example(K);
    const double two_k = std::ldexp(1.0, -static_cast<int>(K));
    const double phi_oracle = static_cast<double>(K) - (1.0 - two_k);
    const double donl_oracle = 1.0 - two_k;
    if (ex.phi_partial != phi_oracle || ex.donl_bound != donl_oracle) {
      v.pass = false;
      v.detail += "K=" + std::to_string(K) + " closed forms differ; ";
    }
  }
  const FiniteClass cls = divergence_class(2);
  const DivergenceExample ex = divergence_example(2);
  const double brute_partial = entropy_integral(cls, cls.all(), 0.125, cls.diameter()).value;
  const double brute_full = entropy_potential(cls, cls.all()).value;
  const double err = std::max(std::abs(brute_partial - ex.phi_partial),
                              std::abs(brute_full - ex.phi_truncated));
  if (err > 1e-12) v.pass = false;
  v.detail += "K=1..3 closed forms exact; K=2 brute force (" + std::to_string(cls.size()) +
              " rows) phi_partial " + fmt("%.15g", brute_partial) + ", max error " +
              fmt("%.3g", err);
  return v;
}

Verdict deep_constant() {
  Verdict v;
  const double hand = deep_lipschitz_constant(2, 2, 1, 1.0, 0.0);
  if (hand != 6.0) {
    v.pass = false;
    v.detail += "hand value " + fmt("%.17g", hand) + " != 6; ";
  }
  const std::vector<Activation> activations = {relu_activation(), tanh_activation(),
                                               softplus_activation()};
  int violations = 0;
  long pairs = 0;
  double max_ratio = 0.0;
  for (std::size_t L : {2, 3}) {
    for (std::size_t k : {1, 2, 3}) {
      for (std::size_t d : {1, 2, 5}) {
        for (std::size_t a = 0; a < activations.size(); ++a) {
          const Activation& act = activations[a];
          const double K = deep_lipschitz_constant(L, k, d, act.lipschitz, act.at_zero);
          Rng rng = make_rng(kSeed + 11, L * 1000 + k * 100 + d * 10 + a);
          for (int i = 0; i < 10000; ++i) {
            const DeepNetParams p = random_deep_params(rng, L, k, d);
            DeepNetParams p2 = p;
            if (i % 2 == 0) {
              p2 = random_deep_params(rng, L, k, d);
            } else {
              // Small perturbation, kept inside the box.
              auto theta = p.flatten();
              const double scale = std::pow(10.0, -uniform(rng, 1.0, 6.0));
              for (double& t : theta) t = std::clamp(t + scale * uniform(rng, -1.0, 1.0), -1.0, 1.0);
              p2 = DeepNetParams::unflatten(L, k, d, theta);
            }
            const auto t1 = p.flatten();
            const auto t2 = p2.flatten();
            double dist = 0.0;
            for (std::size_t j = 0; j < t1.size(); ++j) dist += std::abs(t1[j] - t2[j]);
            Point x(d);
            for (double& c : x) c = uniform(rng, -1.0, 1.0);
            const double diff = std::abs(eval_deep(p, act, x) - eval_deep(p2, act, x));
            ++pairs;
            if (diff > K * dist + 1e-12) ++violations;
            if (dist > 0) max_ratio = std::max(max_ratio, diff / (K * dist));
          }
        }
      }
    }
  }
  if (violations) v.pass = false;
  v.detail += std::to_string(violations) + " violations over " + std::to_string(pairs) +
              " pairs (18 configurations x relu/tanh/softplus); max |dh|/(K|dtheta|_1) " +
              fmt("%.3f", max_ratio) + "; K(2,2,1,relu) = " + fmt("%g", hand);
  return v;
}

}  // namespace

int main() {
  std::printf("acceptance run, seed %llu, %d OpenMP threads\n",
              static_cast<unsigned long long>(kSeed), omp_get_max_threads());
  run(1, "one-ReLU cumulative loss <= |w*|^2", one_relu_bound);
  run(2, "envelope eps-mistake bound (8L/eps)^d", check_mistake_bound);
  run(3, "supercritical q=2,d=1 loss <= 8", supercritical_constant_check);
  DyadicSweep sweep;
  run(4, "critical q=d=1 logarithmic growth", [&] {
    sweep = run_dyadic_sweep();
    return critical_log_growth(sweep);
  });
  run(5, "subcritical q=1,d=2 grid loss >= 2 sqrt(T)", subcritical_growth);
  run(6, "cover splitting and potential drop", cover_split_and_drop);
  run(7, "online dimension <= 4c Phi (depth <= 4)", sandwich);
  run(8, "interval adversary forces D mistakes", classification_unlearnability);
  run(9, "adversary transcripts certify at 1e-9", [&] { return realizability(sweep); });
  run(10, "divergence example closed forms", check_divergence);
  run(11, "deep-net parameter Lipschitz constant", deep_constant);
  std::printf("%d of 11 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
