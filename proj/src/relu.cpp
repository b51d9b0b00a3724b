#include "onreg/relu.hpp"

#include <algorithm>
#include <cmath>

#include "onreg/errors.hpp"
#include "onreg/io.hpp"

namespace onreg {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("dimension mismatch in inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// ---------------------------------------------------------------------------

KReluParams::KReluParams(std::vector<double> a_in, std::vector<std::vector<double>> w_in)
    : a(std::move(a_in)), w(std::move(w_in)) {
  if (a.size() != w.size()) throw DomainError("k-ReLU needs one output weight per neuron");
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(std::abs(a[j]) <= 1.0)) throw DomainError("output weights must lie in [-1,1]");
    if (w[j].size() != w.front().size()) throw DomainError("neuron weights have mixed dimensions");
    if (norm2(w[j]) > 1.0 + 1e-12) {
      throw DomainError("neuron " + std::to_string(j) + " has |w|_2 > 1");
    }
  }
}

double eval_krelu(const KReluParams& params, std::span<const double> x, double tol) {
  if (x.size() != params.d()) throw DomainError("instance has the wrong dimension");
  if (norm2(x) > 1.0 + tol) throw DomainError("instance lies outside the unit ball");
  double s = 0.0;
  for (std::size_t j = 0; j < params.k(); ++j) s += params.a[j] * relu(dot(params.w[j], x));
  return std::clamp(s, -1.0, 1.0);
}

// ---------------------------------------------------------------------------

OneReluLearner::OneReluLearner(std::size_t d, bool keep_history)
    : w_(d, 0.0), keep_history_(keep_history) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (keep_history_) history_.push_back(w_);
}

double OneReluLearner::predict(std::span<const double> x, const Transcript&) {
  return relu(dot(w_, x));
}

void OneReluLearner::update(std::span<const double> x, double y) {
  const double alpha = relu(dot(w_, x)) - y;
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= alpha * x[i];
  if (keep_history_) history_.push_back(w_);
}

std::vector<double> potential_trace(const std::vector<std::vector<double>>& weights,
                                    std::span<const double> w_star) {
  std::vector<double> phi;
  phi.reserve(weights.size());
  for (const auto& w : weights) {
    if (w.size() != w_star.size()) throw DomainError("weight dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += (w[i] - w_star[i]) * (w[i] - w_star[i]);
    phi.push_back(s);
  }
  return phi;
}

RandomReluEnvironment::RandomReluEnvironment(std::size_t d, std::size_t T, std::uint64_t seed)
    : d_(d), T_(T), rng_(make_rng(seed, 0)) {
  Rng target_rng = make_rng(seed, 1);
  w_star_ = uniform_in_ball(target_rng, d);
}

std::optional<Point> RandomReluEnvironment::next_instance(const Transcript&) {
  if (emitted_ >= T_) return std::nullopt;
  ++emitted_;
  return uniform_in_ball(rng_, d_);
}

double RandomReluEnvironment::reveal_label(std::span<const double> x, double) {
  return relu(dot(w_star_, x));
}

std::optional<Hypothesis> RandomReluEnvironment::witness() const {
  return [w = w_star_](std::span<const double> x) { return relu(dot(w, x)); };
}

// ---------------------------------------------------------------------------

Activation relu_activation() { return {"relu", [](double t) { return relu(t); }, 1.0, 0.0}; }

Activation tanh_activation() { return {"tanh", [](double t) { return std::tanh(t); }, 1.0, 0.0}; }

Activation softplus_activation() {
  return {"softplus", [](double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); },
          1.0, std::log(2.0)};
}

Activation sigmoid_activation() {
  return {"sigmoid", [](double t) { return 1.0 / (1.0 + std::exp(-t)); }, 0.25, 0.5};
}

std::size_t DeepNetParams::parameter_count() const noexcept {
  return width * d + (depth - 2) * width * width + depth * width + 1;
}

std::vector<double> DeepNetParams::flatten() const {
  std::vector<double> theta;
  theta.reserve(parameter_count());
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    theta.insert(theta.end(), W[l].begin(), W[l].end());
    theta.insert(theta.end(), b[l].begin(), b[l].end());
  }
  theta.insert(theta.end(), a.begin(), a.end());
  theta.push_back(c);
  return theta;
}

DeepNetParams DeepNetParams::unflatten(std::size_t depth, std::size_t width, std::size_t d,
                                       std::span<const double> theta) {
  DeepNetParams p = zero_deep_params(depth, width, d);
  if (theta.size() != p.parameter_count()) throw DomainError("parameter vector has wrong length");
  std::size_t pos = 0;
  auto take = [&](std::vector<double>& dst) {
    std::copy_n(theta.begin() + static_cast<std::ptrdiff_t>(pos), dst.size(), dst.begin());
    pos += dst.size();
  };
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    take(p.W[l]);
    take(p.b[l]);
  }
  take(p.a);
  p.c = theta[pos];
  return p;
}

void DeepNetParams::validate() const {
  if (depth < 2 || width < 1 || d < 1) throw DomainError("deep net needs L >= 2, k >= 1, d >= 1");
  if (W.size() != depth - 1 || b.size() != depth - 1 || a.size() != width) {
    throw DomainError("deep net layer count does not match its depth");
  }
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    if (W[l].size() != width * (l == 0 ? d : width) || b[l].size() != width) {
      throw DomainError("deep net layer " + std::to_string(l + 1) + " has the wrong shape");
    }
  }
  for (double v : flatten()) {
    if (!(std::abs(v) <= 1.0)) throw DomainError("deep net parameters must lie in [-1,1]");
  }
}

DeepNetParams zero_deep_params(std::size_t depth, std::size_t width, std::size_t d) {
  if (depth < 2 || width < 1 || d < 1) throw DomainError("deep net needs L >= 2, k >= 1, d >= 1");
  DeepNetParams p;
  p.depth = depth;
  p.width = width;
  p.d = d;
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    p.W.emplace_back(width * (l == 0 ? d : width), 0.0);
    p.b.emplace_back(width, 0.0);
  }
  p.a.assign(width, 0.0);
  return p;
}

DeepNetParams random_deep_params(Rng& rng, std::size_t depth, std::size_t width, std::size_t d) {
  DeepNetParams p = zero_deep_params(depth, width, d);
  std::vector<double> theta(p.parameter_count());
  for (double& v : theta) v = uniform(rng, -1.0, 1.0);
  return DeepNetParams::unflatten(depth, width, d, theta);
}

double eval_deep(const DeepNetParams& params, const Activation& sigma, std::span<const double> x) {
  if (x.size() != params.d) throw DomainError("instance has the wrong dimension");
  std::vector<double> z(x.begin(), x.end());
  std::vector<double> next(params.width);
  for (std::size_t l = 0; l + 1 < params.depth; ++l) {
    const std::size_t in = z.size();
    for (std::size_t r = 0; r < params.width; ++r) {
      double s = params.b[l][r];
      for (std::size_t i = 0; i < in; ++i) s += params.W[l][r * in + i] * z[i];
      next[r] = sigma.f(s);
    }
    z = next;
  }
  double out = params.c;
  for (std::size_t r = 0; r < params.width; ++r) out += params.a[r] * z[r];
  return std::clamp(out, 0.0, 1.0);
}

double deep_lipschitz_constant(std::size_t depth, std::size_t width, std::size_t d,
                               double L_sigma, double sigma0) {
  if (depth < 2 || width < 1 || d < 1) throw DomainError("deep net needs L >= 2, k >= 1, d >= 1");
  if (!(L_sigma > 0.0)) throw DomainError("activation Lipschitz constant must be positive");
  const double k = static_cast<double>(width);
  const double s0 = std::abs(sigma0);
  double M = 1.0;
  double M_bar = M;
  for (std::size_t l = 1; l <= depth - 1; ++l) {
    const double fan_in = l == 1 ? static_cast<double>(d) : k;
    M = s0 + L_sigma * (fan_in * M + 1.0);
    M_bar = std::max(M_bar, M);
  }
  double S = 0.0;
  double term = 1.0;
  for (std::size_t s = 0; s + 2 <= depth; ++s) {
    S += term;
    term *= L_sigma * k;
  }
  return (1.0 + M_bar) * (1.0 + L_sigma * S);
}

// ---------------------------------------------------------------------------

double TwoReluParams::operator()(double x) const {
  return a1 * relu(w1 * x + b1) + a2 * relu(w2 * x + b2) + b;
}

bool TwoReluParams::within_unit_box() const noexcept {
  for (double v : {w1, w2, b1, b2, a1, a2, b}) {
    if (!(std::abs(v) <= 1.0)) return false;
  }
  return true;
}

TwoReluParams two_relu_witness(double theta, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0,1]");
  if (!(theta >= -1.0 + eps && theta <= 1.0)) {
    throw DomainError("theta " + format_double(theta) + " lies outside [-1+eps, 1]");
  }
  return {-1.0, -1.0, theta, theta - eps, 1.0, -1.0, 0.0};
}

IntervalAdversary::IntervalAdversary(std::size_t depth)
    : depth_(depth),
      eps_(std::ldexp(1.0, -static_cast<int>(depth) - 2)),
      lo_(-1.0 + eps_),
      hi_(1.0) {
  if (depth < 1) throw DomainError("interval adversary needs depth >= 1");
}

std::optional<Point> IntervalAdversary::next_instance(const Transcript&) {
  if (round_ >= depth_) return std::nullopt;
  x_ = (lo_ + hi_ - eps_) / 2.0;
  return Point{x_};
}

double IntervalAdversary::reveal_label(std::span<const double>, double y_hat) {
  ++round_;
  if (y_hat == 0.0) {
    lo_ = x_ + eps_;
    return eps_;
  }
  hi_ = x_;
  return 0.0;
}

TwoReluParams IntervalAdversary::witness_params() const {
  return two_relu_witness((lo_ + hi_) / 2.0, eps_);
}

std::optional<Hypothesis> IntervalAdversary::witness() const {
  return [f = witness_params()](std::span<const double> x) { return f(x[0]); };
}

}  // namespace onreg
