#include "onreg/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "onreg/errors.hpp"
#include "onreg/io.hpp"

namespace onreg {

bool LabelRange::contains(double y) const {
  if (!std::isfinite(y)) return false;
  if (!values.empty()) return std::find(values.begin(), values.end(), y) != values.end();
  return y >= lo && y <= hi;
}

Transcript run_game(Learner& learner, Environment& env, const Loss& loss, std::size_t max_T) {
  Transcript transcript;
  transcript.rounds.reserve(std::min<std::size_t>(max_T, 1u << 16));
  const LabelRange range = env.label_range();
  for (std::size_t t = 1; t <= max_T; ++t) {
    std::optional<Point> x = env.next_instance(transcript);
    if (!x) break;
    const double y_hat = learner.predict(*x, transcript);
    const double y = env.reveal_label(*x, y_hat);
    if (!range.contains(y)) {
      throw ProtocolError(t, "environment '" + env.name() + "' revealed label " +
                                 format_double(y) + " outside its declared range");
    }
    if (!loss.accepts(y)) {
      throw ProtocolError(t, "label " + format_double(y) + " is outside the domain of " +
                                 loss.describe());
    }
    const double round_loss = loss(y_hat, y);
    learner.update(*x, y);
    transcript.cumulative_loss += round_loss;
    transcript.rounds.push_back({std::move(*x), y_hat, y, round_loss});
    if (learner.precondition_violated()) transcript.precondition_flag = true;
  }
  return transcript;
}

bool certify_realizable(const Transcript& transcript, const Hypothesis& h, double tol) {
  return std::all_of(transcript.rounds.begin(), transcript.rounds.end(), [&](const Round& r) {
    return std::abs(h(r.x) - r.y) <= tol;
  });
}

std::size_t count_rounds_above(const Transcript& transcript, double eps) {
  return static_cast<std::size_t>(std::count_if(transcript.rounds.begin(),
                                                transcript.rounds.end(),
                                                [eps](const Round& r) { return r.loss > eps; }));
}

EliminationLearner::EliminationLearner(std::vector<Hypothesis> net, Loss loss, double eps)
    : net_(std::move(net)), loss_(std::move(loss)), eps_(eps) {
  if (net_.empty()) throw DomainError("elimination learner needs a nonempty net");
  if (!(eps > 0.0)) throw DomainError("elimination learner needs eps > 0");
}

double EliminationLearner::predict(std::span<const double> x, const Transcript&) {
  return net_[active_](x);
}

void EliminationLearner::update(std::span<const double> x, double y) {
  if (degraded_) return;
  if (loss_(net_[active_](x), y) <= eps_) return;
  ++eliminated_;
  if (active_ + 1 < net_.size()) {
    ++active_;
  } else {
    degraded_ = true;
  }
}

HypothesisEnvironment::HypothesisEnvironment(std::vector<Point> xs, Hypothesis h, LabelRange range,
                                             std::string name)
    : xs_(std::move(xs)), h_(std::move(h)), range_(std::move(range)), name_(std::move(name)) {}

std::optional<Point> HypothesisEnvironment::next_instance(const Transcript&) {
  if (next_ >= xs_.size()) return std::nullopt;
  return xs_[next_++];
}

double HypothesisEnvironment::reveal_label(std::span<const double> x, double) { return h_(x); }

ReplayEnvironment::ReplayEnvironment(std::vector<Point> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) throw DomainError("replay needs one label per instance");
}

std::optional<Point> ReplayEnvironment::next_instance(const Transcript& history) {
  next_ = history.horizon();
  if (next_ >= xs_.size()) return std::nullopt;
  return xs_[next_];
}

double ReplayEnvironment::reveal_label(std::span<const double>, double) { return ys_[next_]; }

}  // namespace onreg
