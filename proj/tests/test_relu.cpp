#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "onreg/errors.hpp"
#include "onreg/protocol.hpp"
#include "onreg/relu.hpp"
#include "onreg/rng.hpp"

using namespace onreg;

namespace {

// Independent recursion for K = (1 + max_l M_l)(1 + L_s S).
double oracle_deep_constant(std::size_t L, std::size_t k, std::size_t d, double Ls, double s0) {
  std::vector<double> M = {1.0};
  M.push_back(std::abs(s0) + Ls * (static_cast<double>(d) * M[0] + 1.0));
  for (std::size_t l = 2; l <= L - 1; ++l) {
    M.push_back(std::abs(s0) + Ls * (static_cast<double>(k) * M.back() + 1.0));
  }
  double S = 0.0;
  for (std::size_t s = 0; s <= L - 2; ++s) S += std::pow(Ls * static_cast<double>(k), static_cast<double>(s));
  return (1.0 + *std::max_element(M.begin(), M.end())) * (1.0 + Ls * S);
}

}  // namespace

TEST(KRelu, Examples) {
  EXPECT_EQ(eval_krelu(KReluParams({1.0}, {{1.0, 0.0}}), std::vector<double>{1.0, 0.0}), 1.0);
  const KReluParams cancel({1.0, -1.0}, {{0.6, 0.8}, {0.6, 0.8}});
  Rng rng = make_rng(21, 0);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(eval_krelu(cancel, uniform_in_ball(rng, 2)), 0.0);
  }
  const KReluParams clipped({1.0, 1.0}, {{1.0, 0.0}, {1.0, 0.0}});
  EXPECT_EQ(eval_krelu(clipped, std::vector<double>{1.0, 0.0}), 1.0);
}

TEST(KRelu, Validation) {
  EXPECT_THROW(KReluParams({2.0}, {{1.0}}), DomainError);
  EXPECT_THROW(KReluParams({1.0}, {{1.0, 1.0}}), DomainError);
  const KReluParams p({1.0}, {{1.0, 0.0}});
  EXPECT_THROW(eval_krelu(p, std::vector<double>{1.0, 1.0}), DomainError);
}

TEST(OneRelu, HandExampleWeightsAndPotential) {
  OneReluLearner learner(1);
  HypothesisEnvironment env({{1.0}, {1.0}}, [](std::span<const double> x) { return relu(x[0]); });
  const Transcript tr = run_game(learner, env, Loss::power(2.0), 10);
  EXPECT_EQ(tr.cumulative_loss, 1.0);
  ASSERT_EQ(learner.weight_history().size(), 3u);
  EXPECT_EQ(learner.weight_history()[1], std::vector<double>{1.0});
  const std::vector<double> phi = potential_trace(learner.weight_history(), std::vector<double>{1.0});
  EXPECT_EQ(phi[0], 1.0);
  EXPECT_EQ(phi[1], 0.0);
}

TEST(OneRelu, ZeroTargetStaysAtZero) {
  Rng rng = make_rng(22, 0);
  std::vector<Point> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(uniform_in_ball(rng, 3));
  OneReluLearner learner(3);
  HypothesisEnvironment env(xs, [](std::span<const double>) { return 0.0; });
  const Transcript tr = run_game(learner, env, Loss::power(2.0), 1000);
  EXPECT_EQ(tr.cumulative_loss, 0.0);
  for (double phi : potential_trace(learner.weight_history(), std::vector<double>(3, 0.0))) {
    EXPECT_EQ(phi, 0.0);
  }
}

TEST(OneRelu, TelescopingAndTotalBound) {
  for (std::size_t d : {1, 4, 20}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RandomReluEnvironment env(d, 2000, seed);
      OneReluLearner learner(d);
      const Transcript tr = run_game(learner, env, Loss::power(2.0), 2000);
      const double wstar_sq = dot(env.w_star(), env.w_star());
      EXPECT_LE(wstar_sq, 1.0 + 1e-12);
      EXPECT_LE(tr.cumulative_loss, wstar_sq + 1e-9);
      const auto phi = potential_trace(learner.weight_history(), env.w_star());
      ASSERT_EQ(phi.size(), tr.horizon() + 1);
      for (std::size_t t = 0; t < tr.horizon(); ++t) {
        EXPECT_LE(phi[t + 1], phi[t] - tr.rounds[t].loss + 1e-9);
      }
      EXPECT_TRUE(certify_realizable(tr, *env.witness()));
    }
  }
}

TEST(OneRelu, UpdateClaimHoldsOnRandomTriples) {
  // -2 alpha (w_t - w) . x <= -2 alpha^2 with alpha = ReLU(w_t.x) - ReLU(w.x).
  Rng rng = make_rng(23, 0);
  for (int i = 0; i < 100000; ++i) {
    const std::size_t d = 1 + uniform_index(rng, 5);
    const auto wt = uniform_in_ball(rng, d);
    const auto w = uniform_in_ball(rng, d);
    const auto x = uniform_in_ball(rng, d);
    const double alpha = relu(dot(wt, x)) - relu(dot(w, x));
    double diff = 0.0;
    for (std::size_t j = 0; j < d; ++j) diff += (wt[j] - w[j]) * x[j];
    ASSERT_LE(-2.0 * alpha * diff, -2.0 * alpha * alpha + 1e-12);
  }
}

TEST(Ball, SamplesStayInUnitBall) {
  Rng rng = make_rng(24, 0);
  for (std::size_t d : {1, 2, 7, 50}) {
    double max_norm = 0.0;
    double mean_norm = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const double n = norm2(uniform_in_ball(rng, d));
      max_norm = std::max(max_norm, n);
      mean_norm += n / 5000;
    }
    EXPECT_LE(max_norm, 1.0 + 1e-12);
    // E|x| = d/(d+1) for the uniform ball.
    EXPECT_NEAR(mean_norm, static_cast<double>(d) / static_cast<double>(d + 1), 0.02);
  }
}

TEST(DeepNet, ParameterLayout) {
  const DeepNetParams p = zero_deep_params(3, 2, 5);
  EXPECT_EQ(p.parameter_count(), 2u * 5 + 1 * 4 + 3 * 2 + 1);
  Rng rng = make_rng(25, 0);
  const DeepNetParams r = random_deep_params(rng, 3, 2, 5);
  const auto theta = r.flatten();
  EXPECT_EQ(theta.size(), r.parameter_count());
  const DeepNetParams back = DeepNetParams::unflatten(3, 2, 5, theta);
  EXPECT_EQ(back.flatten(), theta);
  EXPECT_NO_THROW(back.validate());
  std::vector<double> bad = theta;
  bad[0] = 1.5;
  EXPECT_THROW(DeepNetParams::unflatten(3, 2, 5, bad).validate(), DomainError);
}

TEST(DeepNet, ZeroParametersGiveZero) {
  const DeepNetParams p = zero_deep_params(3, 3, 2);
  Rng rng = make_rng(26, 0);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(eval_deep(p, relu_activation(), std::vector<double>{uniform(rng, -1, 1), uniform(rng, -1, 1)}), 0.0);
  }
}

TEST(DeepNet, DepthTwoMatchesDirectEvaluation) {
  Rng rng = make_rng(27, 0);
  for (int i = 0; i < 200; ++i) {
    const DeepNetParams p = random_deep_params(rng, 2, 3, 2);
    const std::vector<double> x = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    double s = p.c;
    for (std::size_t j = 0; j < 3; ++j) {
      s += p.a[j] * relu(p.W[0][j * 2] * x[0] + p.W[0][j * 2 + 1] * x[1] + p.b[0][j]);
    }
    EXPECT_NEAR(eval_deep(p, relu_activation(), x), std::clamp(s, 0.0, 1.0), 1e-15);
  }
}

TEST(DeepNet, ConstantExamples) {
  EXPECT_DOUBLE_EQ(deep_lipschitz_constant(2, 2, 1, 1.0, 0.0), 6.0);
  EXPECT_DOUBLE_EQ(deep_lipschitz_constant(2, 1, 1, 1.0, 0.0), 6.0);
  for (std::size_t L : {2, 3, 4}) {
    for (std::size_t k : {1, 2, 3}) {
      for (std::size_t d : {1, 2, 5}) {
        for (const Activation& a : {relu_activation(), tanh_activation(), softplus_activation(),
                                    sigmoid_activation()}) {
          EXPECT_NEAR(deep_lipschitz_constant(L, k, d, a.lipschitz, a.at_zero),
                      oracle_deep_constant(L, k, d, a.lipschitz, a.at_zero), 1e-9);
        }
      }
    }
  }
}

TEST(DeepNet, ConstantIsMonotoneInActivationLipschitz) {
  double previous = 0.0;
  for (double Ls = 0.1; Ls <= 3.0; Ls += 0.1) {
    const double K = deep_lipschitz_constant(3, 2, 2, Ls, 0.5);
    EXPECT_GE(K, previous);
    previous = K;
  }
}

TEST(DeepNet, ActivationDeclarations) {
  EXPECT_NEAR(softplus_activation().f(0.0), std::log(2.0), 1e-15);
  EXPECT_EQ(softplus_activation().at_zero, std::log(2.0));
  EXPECT_EQ(sigmoid_activation().f(0.0), 0.5);
  EXPECT_EQ(sigmoid_activation().lipschitz, 0.25);
  EXPECT_EQ(tanh_activation().f(0.0), 0.0);
}

TEST(DeepNet, ParameterLipschitzOnRandomPairs) {
  Rng rng = make_rng(28, 0);
  for (std::size_t L : {2, 3}) {
    for (std::size_t k : {1, 2, 3}) {
      for (std::size_t d : {1, 2, 5}) {
        const Activation act = relu_activation();
        const double K = deep_lipschitz_constant(L, k, d, act.lipschitz, act.at_zero);
        for (int i = 0; i < 500; ++i) {
          const DeepNetParams p = random_deep_params(rng, L, k, d);
          const DeepNetParams q = random_deep_params(rng, L, k, d);
          const auto a = p.flatten(), b = q.flatten();
          double dist = 0.0;
          for (std::size_t j = 0; j < a.size(); ++j) dist += std::abs(a[j] - b[j]);
          std::vector<double> x(d);
          for (double& c : x) c = uniform(rng, -1, 1);
          EXPECT_LE(std::abs(eval_deep(p, act, x) - eval_deep(q, act, x)), K * dist + 1e-12);
        }
      }
    }
  }
}

TEST(TwoRelu, WitnessExamples) {
  const TwoReluParams f = two_relu_witness(0.5, 0.25);
  EXPECT_EQ(f(0.5), 0.0);
  EXPECT_EQ(f(0.0), 0.25);
  EXPECT_NEAR(f(0.4), 0.1, 1e-15);
  EXPECT_TRUE(f.within_unit_box());
  // Matches ReLU(theta - x) - ReLU(theta - x - eps) on [-1, 1].
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + i / 100.0;
    EXPECT_NEAR(f(x), relu(0.5 - x) - relu(0.25 - x), 1e-15);
  }
  EXPECT_THROW(two_relu_witness(-1.0, 0.25), DomainError);
  EXPECT_THROW(two_relu_witness(1.5, 0.25), DomainError);
  EXPECT_THROW(two_relu_witness(0.0, 0.0), DomainError);
}

TEST(Interval, FirstQueryAndShrinkingInterval) {
  IntervalAdversary adv(3);
  EXPECT_EQ(adv.eps(), 1.0 / 32.0);
  Transcript history;
  const auto x = adv.next_instance(history);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0], 0.0);
  EXPECT_DOUBLE_EQ(adv.hi() - adv.lo(), 2.0 - adv.eps());
}

TEST(Interval, IntervalLengthHalvesEachRound) {
  for (double prediction : {0.0, 1.0 / 64, 0.7}) {
    IntervalAdversary adv(5);
    const double eps = adv.eps();
    ConstantLearner learner(prediction);
    Transcript tr;
    for (std::size_t t = 1; t <= 5; ++t) {
      tr = run_game(learner, adv, Loss::zero_one(), 1);
      EXPECT_NEAR(adv.hi() - adv.lo(), std::ldexp(1.0, -static_cast<int>(t) + 1) - eps, 1e-15);
      EXPECT_GT(adv.hi() - adv.lo(), 0.0);
    }
    EXPECT_FALSE(adv.next_instance(tr).has_value());
  }
}

TEST(Interval, EveryRoundIsAMistakeAndWitnessCertifies) {
  for (std::size_t D : {1, 3, 6, 10}) {
    for (double prediction : {0.0, 0.5, 1.0}) {
      IntervalAdversary adv(D);
      ConstantLearner learner(prediction);
      const Transcript tr = run_game(learner, adv, Loss::zero_one(), 100);
      EXPECT_EQ(tr.horizon(), D);
      EXPECT_EQ(tr.cumulative_loss, static_cast<double>(D));
      EXPECT_TRUE(adv.witness_params().within_unit_box());
      EXPECT_TRUE(certify_realizable(tr, *adv.witness()));
    }
  }
}
