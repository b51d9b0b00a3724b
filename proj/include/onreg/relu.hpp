#pragma once

// ReLU hypothesis classes: shallow k-ReLU sums, deep clipped networks, the
// one-ReLU online learner, and the two-ReLU threshold adversary.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onreg/protocol.hpp"
#include "onreg/rng.hpp"

namespace onreg {

inline double relu(double t) { return t > 0.0 ? t : 0.0; }

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

/// h(x) = clip_[-1,1](sum_j a_j ReLU(w_j . x)) with a in [-1,1]^k, |w_j|_2 <= 1.
struct KReluParams {
  std::vector<double> a;
  std::vector<std::vector<double>> w;

  KReluParams(std::vector<double> a, std::vector<std::vector<double>> w);
  std::size_t k() const noexcept { return a.size(); }
  std::size_t d() const noexcept { return w.empty() ? 0 : w.front().size(); }
};

/// Throws DomainError when |x|_2 > 1 + tol.
double eval_krelu(const KReluParams& params, std::span<const double> x, double tol = 1e-9);

/// Online learner for y = ReLU(w* . x), |w*|_2 <= 1, no bias: starts at w = 0,
/// predicts ReLU(w . x) and steps w <- w - (y_hat - y) x.
class OneReluLearner final : public Learner {
 public:
  explicit OneReluLearner(std::size_t d, bool keep_history = true);

  double predict(std::span<const double> x, const Transcript& history) override;
  void update(std::span<const double> x, double y) override;
  std::string name() const override { return "one_relu"; }

  const std::vector<double>& weights() const noexcept { return w_; }
  /// w_1, w_2, ..., w_{T+1} (empty when history keeping is off).
  const std::vector<std::vector<double>>& weight_history() const noexcept { return history_; }

 private:
  std::vector<double> w_;
  bool keep_history_;
  std::vector<std::vector<double>> history_;
};

/// phi_t = |w_t - w*|_2^2 for every recorded weight vector.
std::vector<double> potential_trace(const std::vector<std::vector<double>>& weights,
                                    std::span<const double> w_star);

/// Labels random unit-ball instances with ReLU(w* . x) for a random w* in the ball.
class RandomReluEnvironment final : public Environment {
 public:
  RandomReluEnvironment(std::size_t d, std::size_t T, std::uint64_t seed);

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  std::string name() const override { return "random_relu"; }
  std::optional<Hypothesis> witness() const override;

  const std::vector<double>& w_star() const noexcept { return w_star_; }

 private:
  std::size_t d_;
  std::size_t T_;
  Rng rng_;
  std::vector<double> w_star_;
  std::size_t emitted_ = 0;
};

/// Scalar activation with its declared Lipschitz constant and |sigma(0)|.
struct Activation {
  std::string name;
  std::function<double(double)> f;
  double lipschitz = 1.0;
  double at_zero = 0.0;
};

Activation relu_activation();
Activation tanh_activation();
Activation softplus_activation();
Activation sigmoid_activation();

/// Depth-L, width-k network on R^d:
///   z_0 = x, z_l = sigma(W_l z_{l-1} + b_l) for l = 1..L-1,
///   h(x) = clip_[0,1](<a, z_{L-1}> + c).
/// Every entry lies in [-1,1].
struct DeepNetParams {
  std::size_t depth = 2;
  std::size_t width = 1;
  std::size_t d = 1;
  std::vector<std::vector<double>> W;  // W[l-1] is row-major k x (d or k)
  std::vector<std::vector<double>> b;  // b[l-1] has k entries
  std::vector<double> a;
  double c = 0.0;

  /// kd + (L-2)k^2 + Lk + 1
  std::size_t parameter_count() const noexcept;
  /// Parameters in a fixed order (W_1, b_1, ..., W_{L-1}, b_{L-1}, a, c).
  std::vector<double> flatten() const;
  static DeepNetParams unflatten(std::size_t depth, std::size_t width, std::size_t d,
                                 std::span<const double> theta);
  /// Throws DomainError when shapes are inconsistent or an entry leaves [-1,1].
  void validate() const;
};

DeepNetParams zero_deep_params(std::size_t depth, std::size_t width, std::size_t d);
DeepNetParams random_deep_params(Rng& rng, std::size_t depth, std::size_t width, std::size_t d);

double eval_deep(const DeepNetParams& params, const Activation& sigma, std::span<const double> x);

/// K = (1 + max_l M_l)(1 + L_sigma S), with M_0 = 1,
/// M_1 = |sigma(0)| + L_sigma (d M_0 + 1), M_l = |sigma(0)| + L_sigma (k M_{l-1} + 1),
/// S = sum_{s=0}^{L-2} (L_sigma k)^s.
double deep_lipschitz_constant(std::size_t depth, std::size_t width, std::size_t d,
                               double L_sigma, double sigma0);

/// f(x) = a1 ReLU(w1 x + b1) + a2 ReLU(w2 x + b2) + b on the real line.
struct TwoReluParams {
  double w1 = 0.0, w2 = 0.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0, b = 0.0;

  double operator()(double x) const;
  bool within_unit_box() const noexcept;
};

/// Parameters of ReLU(theta - x) - ReLU(theta - x - eps): value eps for
/// x <= theta - eps and 0 for x >= theta. Needs theta in [-1 + eps, 1].
TwoReluParams two_relu_witness(double theta, double eps);

/// Threshold adversary under 0/1 loss on labels {0, eps}, eps = 2^-(D+2).
/// Queries x = (lo + hi - eps)/2 of the current interval of thresholds;
/// answers eps (keeping [x + eps, hi]) when the prediction is 0 and 0
/// (keeping [lo, x]) otherwise. Halts after D rounds.
class IntervalAdversary final : public Environment {
 public:
  explicit IntervalAdversary(std::size_t depth);

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  LabelRange label_range() const override { return {0.0, eps_, {0.0, eps_}}; }
  std::string name() const override { return "interval"; }
  /// f_{eps,theta} with theta the midpoint of the surviving interval.
  std::optional<Hypothesis> witness() const override;

  double eps() const noexcept { return eps_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  TwoReluParams witness_params() const;

 private:
  std::size_t depth_;
  double eps_;
  double lo_;
  double hi_;
  double x_ = 0.0;
  std::size_t round_ = 0;
};

}  // namespace onreg
