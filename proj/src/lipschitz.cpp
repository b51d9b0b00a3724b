#include "onreg/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "onreg/errors.hpp"
#include "onreg/io.hpp"

namespace onreg {

namespace {

void require_in_cube(std::span<const double> x, std::size_t d, double tol) {
  if (x.size() != d) {
    throw DomainError("instance has dimension " + std::to_string(x.size()) + ", expected " +
                      std::to_string(d));
  }
  for (double v : x) {
    if (!(std::abs(v) <= 1.0 + tol)) {
      throw DomainError("instance coordinate " + format_double(v) + " lies outside [-1,1]");
    }
  }
}

void require_lipschitz_params(double L, std::size_t d) {
  if (!(L >= 1.0) || !std::isfinite(L)) throw DomainError("Lipschitz constant must be >= 1");
  if (d < 1) throw DomainError("dimension must be >= 1");
}

double ipow(double base, std::size_t exponent) {
  double r = 1.0;
  for (std::size_t i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

EnvelopeState::EnvelopeState(double L, std::size_t d) : L_(L), d_(d) {
  if (!(L > 0.0)) throw DomainError("Lipschitz constant must be positive");
  if (d < 1) throw DomainError("dimension must be >= 1");
}

void EnvelopeState::add(std::span<const double> x, double y) {
  if (x.size() != d_) throw DomainError("anchor has the wrong dimension");
  xs_.insert(xs_.end(), x.begin(), x.end());
  ys_.push_back(y);
}

kernels::Bounds EnvelopeState::bounds(std::span<const double> x) const {
  return kernels::envelope_bounds(anchors(), L_, x);
}

EnvelopePrediction envelope_predict(const EnvelopeState& state, std::span<const double> x,
                                    double tol) {
  require_in_cube(x, state.d(), tol);
  const kernels::Bounds b = state.bounds(x);
  if (b.lower > b.upper + tol) {
    throw NonRealizableError("Lipschitz envelopes crossed: lower " + format_double(b.lower) +
                             " > upper " + format_double(b.upper));
  }
  return {0.5 * (b.lower + b.upper), std::max(0.0, b.upper - b.lower)};
}

EnvelopeLearner::EnvelopeLearner(double L, std::size_t d) : state_(L, d) {
  require_lipschitz_params(L, d);
}

double EnvelopeLearner::predict(std::span<const double> x, const Transcript&) {
  return envelope_predict(state_, x).y_hat;
}

void EnvelopeLearner::update(std::span<const double> x, double y) { state_.add(x, y); }

McShaneExtension::McShaneExtension(std::vector<double> xs, std::vector<double> ys, std::size_t d,
                                   double L, double tol) {
  if (xs.size() != ys.size() * d) throw DomainError("anchor coordinates do not match labels");
  auto state = std::make_shared<EnvelopeState>(L, d);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    state->add(std::span<const double>(xs).subspan(i * d, d), ys[i]);
  }
  if (auto bad = kernels::first_lipschitz_violation(state->anchors(), L, tol)) {
    throw PreconditionError("anchors " + std::to_string(bad->first) + " and " +
                            std::to_string(bad->second) + " are not " + format_double(L) +
                            "-Lipschitz compatible (labels " + format_double(ys[bad->first]) +
                            " and " + format_double(ys[bad->second]) + ")");
  }
  anchors_ = std::move(state);
}

double McShaneExtension::operator()(std::span<const double> x) const {
  return std::max(0.0, anchors_->bounds(x).upper);
}

Hypothesis McShaneExtension::as_hypothesis() const {
  return [self = *this](std::span<const double> x) { return self(x); };
}

McShaneExtension mcshane_extend(const std::vector<Point>& xs, const std::vector<double>& ys,
                                double L) {
  const std::size_t d = xs.empty() ? 1 : xs.front().size();
  std::vector<double> flat;
  for (const Point& p : xs) {
    if (p.size() != d) throw DomainError("anchors have mixed dimensions");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return McShaneExtension(std::move(flat), ys, d, L);
}

double envelope_potential(const EnvelopeState& state, double q, std::size_t grid_resolution) {
  const auto d = static_cast<double>(state.d());
  if (!(q > d)) throw DomainError("width potential needs q > d");
  if (grid_resolution < 2) throw DomainError("grid resolution must be at least 2");
  return kernels::width_power_integral(state.anchors(), state.L(), q - d,
                                       kernels::GridSpec{state.d(), grid_resolution});
}

double envelope_width_constant(std::size_t d, double q) {
  const auto dd = static_cast<double>(d);
  if (!(q > dd)) throw DomainError("width constant needs q > d");
  return std::pow(8.0, -dd) * (std::pow(0.75, q - dd) - std::pow(0.25, q - dd));
}

double supercritical_constant(std::size_t d, double q) {
  return std::pow(2.0, -q) * std::pow(2.0, static_cast<double>(d)) / envelope_width_constant(d, q);
}

double supercritical_bound(double L, std::size_t d, double q) {
  return supercritical_constant(d, q) * ipow(L, d);
}

double envelope_mistake_bound(double L, std::size_t d, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  return ipow(8.0 * L / eps, d);
}

double critical_upper_bound(double L, std::size_t d, std::size_t T) {
  if (T == 0) return 0.0;
  return ipow(8.0 * L, d) * (1.0 + std::log(static_cast<double>(T)));
}

double critical_lower_constant(std::size_t d) {
  const double two_d = ipow(2.0, d);
  const double K = std::log(1.0 + two_d / (two_d - 1.0)) +
                   2.0 * static_cast<double>(d) * std::numbers::ln2;
  return 1.0 / ipow(2.0, 3 * d) / K;
}

std::optional<Hypothesis> AnchoredEnvironment::witness() const {
  return McShaneExtension(answered_.xs(), answered_.ys(), answered_.d(), answered_.L())
      .as_hypothesis();
}

// ---------------------------------------------------------------------------

DyadicAdversary::DyadicAdversary(double L, std::size_t d, std::size_t T, DyadicOptions options)
    : AnchoredEnvironment(L, d), L_(L), d_(d), T_(T), options_(options) {
  require_lipschitz_params(L, d);
  std::size_t covered = 0;
  levels_ = 0;
  while (covered < T || levels_ == 0) {
    covered += cubes_at(levels_);
    ++levels_;
  }
  if (options_.scale_increments) scale_ = 1.0 / std::sqrt(static_cast<double>(levels_));
}

double DyadicAdversary::side(std::size_t level) const {
  return std::ldexp(1.0, -static_cast<int>(level)) / L_;
}

std::size_t DyadicAdversary::per_axis(std::size_t level) const {
  return static_cast<std::size_t>(std::floor(std::ldexp(L_, static_cast<int>(level) + 1)));
}

std::size_t DyadicAdversary::cubes_at(std::size_t level) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < d_; ++i) n *= per_axis(level);
  return n;
}

double DyadicAdversary::delta(std::size_t level) const {
  return std::ldexp(1.0, -static_cast<int>(level) - 2) * scale_;
}

std::size_t DyadicAdversary::projected_rounds() const {
  return static_cast<std::size_t>(
      std::count_if(info_.begin(), info_.end(), [](const RoundInfo& r) { return r.projected; }));
}

std::optional<Point> DyadicAdversary::next_instance(const Transcript&) {
  if (emitted_ >= T_) return std::nullopt;
  while (index_in_level_ >= cubes_at(level_)) {
    ++level_;
    index_in_level_ = 0;
  }
  // Lexicographic lattice order: the first coordinate varies slowest.
  const std::size_t n = per_axis(level_);
  current_coords_.assign(d_, 0);
  std::size_t rest = index_in_level_;
  for (std::size_t i = d_; i-- > 0;) {
    current_coords_[i] = rest % n;
    rest /= n;
  }
  const double a = side(level_);
  Point x(d_);
  for (std::size_t i = 0; i < d_; ++i) {
    x[i] = -1.0 + (static_cast<double>(current_coords_[i]) + 0.5) * a;
  }
  ++index_in_level_;
  ++emitted_;
  return x;
}

double DyadicAdversary::parent_value(std::size_t level, const std::vector<std::size_t>& coords) const {
  std::vector<std::size_t> c = coords;
  for (std::size_t j = level; j-- > 0;) {
    for (auto& k : c) k /= 2;
    const auto it = values_.find({j, c});
    if (it != values_.end()) return it->second;
  }
  return 0.5;
}

double DyadicAdversary::reveal_label(std::span<const double> x, double y_hat) {
  const double base = parent_value(level_, current_coords_);
  const double step = delta(level_);
  const kernels::Bounds feasible = answered_.bounds(x);
  const double up_raw = base + step;
  const double down_raw = base - step;
  const double up = std::clamp(up_raw, feasible.lower, feasible.upper);
  const double down = std::clamp(down_raw, feasible.lower, feasible.upper);
  const double y = std::abs(up - y_hat) >= std::abs(down - y_hat) ? up : down;
  values_[{level_, current_coords_}] = y;
  info_.push_back({level_, step, up != up_raw || down != down_raw});
  record(x, y);
  return y;
}

// ---------------------------------------------------------------------------

GridAdversary::GridAdversary(double L, std::size_t d, double q, std::size_t T)
    : AnchoredEnvironment(L, d), q_(q) {
  require_lipschitz_params(L, d);
  if (!(q >= 1.0)) throw DomainError("grid adversary needs q >= 1");
  if (static_cast<double>(T) < ipow(2.0 * L, d)) {
    throw DomainError("grid adversary needs T >= (2L)^d so that the gap stays <= 1");
  }
  // Largest m with m^d <= T, computed without trusting pow() rounding.
  m_ = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(T), 1.0 / static_cast<double>(d))));
  while (m_ > 1 && ipow(static_cast<double>(m_), d) > static_cast<double>(T)) --m_;
  while (ipow(static_cast<double>(m_ + 1), d) <= static_cast<double>(T)) ++m_;
  delta_ = 2.0 * L * std::pow(static_cast<double>(T), -1.0 / static_cast<double>(d));
  const std::size_t axis = m_ + 1;
  std::vector<std::size_t> k(d, 0);
  for (std::size_t t = 0; t < T; ++t) {
    Point p(d);
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = -1.0 + 2.0 * static_cast<double>(k[i]) / static_cast<double>(m_);
    }
    points_.push_back(std::move(p));
    for (std::size_t i = d; i-- > 0;) {
      if (++k[i] < axis) break;
      k[i] = 0;
    }
  }
}

std::optional<Point> GridAdversary::next_instance(const Transcript&) {
  if (next_ >= points_.size()) return std::nullopt;
  return points_[next_++];
}

double GridAdversary::reveal_label(std::span<const double> x, double y_hat) {
  const double y = std::abs(y_hat - delta_) >= std::abs(y_hat) ? delta_ : 0.0;
  record(x, y);
  return y;
}

double GridAdversary::forced_loss() const {
  return static_cast<double>(points_.size()) * std::pow(delta_ / 2.0, q_);
}

// ---------------------------------------------------------------------------

ExtremalAdversary::ExtremalAdversary(double L, std::size_t d, std::size_t T, std::uint64_t seed)
    : AnchoredEnvironment(L, d), T_(T), rng_(make_rng(seed, 0)) {
  require_lipschitz_params(L, d);
}

std::optional<Point> ExtremalAdversary::next_instance(const Transcript&) {
  if (emitted_ >= T_) return std::nullopt;
  ++emitted_;
  Point x(answered_.d());
  for (double& v : x) v = uniform(rng_, -1.0, 1.0);
  return x;
}

double ExtremalAdversary::reveal_label(std::span<const double> x, double y_hat) {
  const kernels::Bounds b = answered_.bounds(x);
  const double y = std::abs(b.upper - y_hat) >= std::abs(b.lower - y_hat) ? b.upper : b.lower;
  record(x, y);
  return y;
}

// ---------------------------------------------------------------------------

RandomLipschitzEnvironment::RandomLipschitzEnvironment(double L, std::size_t d, std::size_t T,
                                                       std::uint64_t seed,
                                                       std::size_t anchor_count)
    : d_(d), T_(T), rng_(make_rng(seed, 0)) {
  require_lipschitz_params(L, d);
  Rng anchor_rng = make_rng(seed, 1);
  EnvelopeState anchors(L, d);
  Point x(d);
  for (std::size_t i = 0; i < anchor_count; ++i) {
    for (double& v : x) v = uniform(anchor_rng, -1.0, 1.0);
    const kernels::Bounds b = anchors.bounds(x);
    anchors.add(x, uniform(anchor_rng, b.lower, b.upper));
  }
  target_ = McShaneExtension(anchors.xs(), anchors.ys(), d, L).as_hypothesis();
}

std::optional<Point> RandomLipschitzEnvironment::next_instance(const Transcript&) {
  if (emitted_ >= T_) return std::nullopt;
  ++emitted_;
  Point x(d_);
  for (double& v : x) v = uniform(rng_, -1.0, 1.0);
  return x;
}

double RandomLipschitzEnvironment::reveal_label(std::span<const double> x, double) {
  return target_(x);
}

}  // namespace onreg
