#pragma once

// L-Lipschitz regression on [-1,1]^d (sup norm) with labels in [0,1]: the
// envelope learner, McShane extensions, and the lower-bound adversaries.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "onreg/kernels.hpp"
#include "onreg/protocol.hpp"
#include "onreg/rng.hpp"

namespace onreg {

/// Anchor list (x_s, y_s) observed so far; lower/upper envelopes are evaluated
/// lazily by a full scan.
class EnvelopeState {
 public:
  EnvelopeState(double L, std::size_t d);

  void add(std::span<const double> x, double y);
  kernels::AnchorView anchors() const noexcept { return {xs_, ys_, d_}; }
  kernels::Bounds bounds(std::span<const double> x) const;

  double L() const noexcept { return L_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t size() const noexcept { return ys_.size(); }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& ys() const noexcept { return ys_; }

 private:
  double L_;
  std::size_t d_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

struct EnvelopePrediction {
  double y_hat = 0.5;
  double width = 1.0;
};

/// Midpoint of the envelopes at x and their gap. Throws DomainError when x is
/// outside [-1,1]^d and NonRealizableError when lower(x) > upper(x) + tol.
EnvelopePrediction envelope_predict(const EnvelopeState& state, std::span<const double> x,
                                    double tol = kRealizableTol);

class EnvelopeLearner final : public Learner {
 public:
  EnvelopeLearner(double L, std::size_t d);

  double predict(std::span<const double> x, const Transcript& history) override;
  void update(std::span<const double> x, double y) override;
  std::string name() const override { return "envelope"; }

  const EnvelopeState& state() const noexcept { return state_; }

 private:
  EnvelopeState state_;
};

/// x -> clip_[0,1](min_i (y_i + L|x - x_i|_inf)).
class McShaneExtension {
 public:
  /// Throws PreconditionError naming the first anchor pair (i, j) with
  /// |y_i - y_j| > L|x_i - x_j|_inf + tol.
  McShaneExtension(std::vector<double> xs, std::vector<double> ys, std::size_t d, double L,
                   double tol = kRealizableTol);

  double operator()(std::span<const double> x) const;
  Hypothesis as_hypothesis() const;

 private:
  std::shared_ptr<const EnvelopeState> anchors_;
};

McShaneExtension mcshane_extend(const std::vector<Point>& xs, const std::vector<double>& ys,
                                double L);

/// Midpoint-rule approximation of the integral over [-1,1]^d of W(x)^(q-d),
/// W = upper - lower. Throws DomainError when q <= d or grid_resolution < 2.
double envelope_potential(const EnvelopeState& state, double q, std::size_t grid_resolution);

/// c_{d,q} = 8^-d ((3/4)^(q-d) - (1/4)^(q-d)) for q > d.
double envelope_width_constant(std::size_t d, double q);
/// C'_{d,q} = 2^-q 2^d / c_{d,q}; the envelope learner's cumulative l_q loss is
/// at most C'_{d,q} L^d when q > d.
double supercritical_constant(std::size_t d, double q);
double supercritical_bound(double L, std::size_t d, double q);
/// (8L/eps)^d: bound on the number of rounds with |y_hat - y| > eps.
double envelope_mistake_bound(double L, std::size_t d, double eps);
/// 8^d L^d (1 + ln T) for q = d.
double critical_upper_bound(double L, std::size_t d, std::size_t T);
/// c_d = 2^-3d / K_d with K_d = ln(1 + 2^d/(2^d - 1)) + 2d ln 2; any learner
/// suffers at least c_d L^d ln(1 + T/L^d) for q = d.
double critical_lower_constant(std::size_t d);

/// Environment that remembers its answers and offers their McShane extension
/// as the realizing witness.
class AnchoredEnvironment : public Environment {
 public:
  AnchoredEnvironment(double L, std::size_t d) : answered_(L, d) {}

  LabelRange label_range() const override { return {0.0, 1.0, {}}; }
  std::optional<Hypothesis> witness() const override;
  const EnvelopeState& answered() const noexcept { return answered_; }

 protected:
  void record(std::span<const double> x, double y) { answered_.add(x, y); }

  EnvelopeState answered_;
};

struct DyadicOptions {
  /// When true, increments are delta_j = 2^(-j-2) / sqrt(J_T) where J_T is the
  /// number of levels the horizon touches, and every candidate label is
  /// projected into the envelope of earlier answers so the transcript stays
  /// L-Lipschitz. When false the textbook increments 2^(-j-2) are used and
  /// candidates are still projected.
  bool scale_increments = true;
};

/// Multiscale adversary for q = d: queries cube centres level by level and
/// answers v(parent) +/- delta_j, whichever (after projection) is farther from
/// the prediction; ties go to +.
class DyadicAdversary final : public AnchoredEnvironment {
 public:
  struct RoundInfo {
    std::size_t level = 0;
    double delta = 0.0;
    bool projected = false;
  };

  DyadicAdversary(double L, std::size_t d, std::size_t T, DyadicOptions options = {});

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  std::string name() const override { return "dyadic"; }

  /// Side a_j = 2^-j / L and per-axis count floor(2 / a_j).
  double side(std::size_t level) const;
  std::size_t per_axis(std::size_t level) const;
  std::size_t cubes_at(std::size_t level) const;
  double delta(std::size_t level) const;
  std::size_t levels_touched() const noexcept { return levels_; }
  const std::vector<RoundInfo>& rounds() const noexcept { return info_; }
  std::size_t projected_rounds() const;

 private:
  using CubeId = std::pair<std::size_t, std::vector<std::size_t>>;

  double parent_value(std::size_t level, const std::vector<std::size_t>& coords) const;

  double L_;
  std::size_t d_;
  std::size_t T_;
  DyadicOptions options_;
  std::size_t levels_ = 1;
  double scale_ = 1.0;
  std::size_t emitted_ = 0;
  std::size_t level_ = 0;
  std::size_t index_in_level_ = 0;
  std::vector<std::size_t> current_coords_;
  std::map<CubeId, double> values_;
  std::vector<RoundInfo> info_;
};

/// Separated-grid adversary for q < d: T points of the grid {-1 + 2k/m}^d with
/// m = floor(T^(1/d)), labelled 0 or Delta = 2L T^(-1/d), whichever is
/// farther from the prediction (ties answer Delta).
class GridAdversary final : public AnchoredEnvironment {
 public:
  GridAdversary(double L, std::size_t d, double q, std::size_t T);

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  std::string name() const override { return "grid"; }

  double gap() const noexcept { return delta_; }
  std::size_t grid_side() const noexcept { return m_; }
  /// T (Delta/2)^q: loss forced on any learner.
  double forced_loss() const;
  const std::vector<Point>& points() const noexcept { return points_; }

 private:
  double q_;
  std::size_t m_;
  double delta_;
  std::vector<Point> points_;
  std::size_t next_ = 0;
};

/// Uniformly random queries; answers whichever end of its own feasible
/// envelope is farther from the prediction (ties answer the upper end).
class ExtremalAdversary final : public AnchoredEnvironment {
 public:
  ExtremalAdversary(double L, std::size_t d, std::size_t T, std::uint64_t seed);

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  std::string name() const override { return "extremal"; }

 private:
  std::size_t T_;
  Rng rng_;
  std::size_t emitted_ = 0;
};

/// Random L-Lipschitz target (McShane extension of random compatible anchors)
/// queried at uniformly random points.
class RandomLipschitzEnvironment final : public Environment {
 public:
  RandomLipschitzEnvironment(double L, std::size_t d, std::size_t T, std::uint64_t seed,
                             std::size_t anchor_count = 8);

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  LabelRange label_range() const override { return {0.0, 1.0, {}}; }
  std::string name() const override { return "random_lipschitz"; }
  std::optional<Hypothesis> witness() const override { return target_; }

 private:
  std::size_t d_;
  std::size_t T_;
  Rng rng_;
  Hypothesis target_;
  std::size_t emitted_ = 0;
};

}  // namespace onreg
