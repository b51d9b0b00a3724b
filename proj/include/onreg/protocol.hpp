#pragma once

// The realizable online game: in round t the environment emits x_t, the
// learner predicts y_hat_t, the environment (having seen y_hat_t) reveals y_t,
// and the learner updates on (x_t, y_t).

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onreg/losses.hpp"

namespace onreg {

using Point = std::vector<double>;
using Hypothesis = std::function<double(std::span<const double>)>;

inline constexpr double kRealizableTol = 1e-9;

struct Round {
  Point x;
  double y_hat = 0.0;
  double y = 0.0;
  double loss = 0.0;
};

struct Transcript {
  std::vector<Round> rounds;
  double cumulative_loss = 0.0;
  /// Set when the learner reported that one of its preconditions was violated
  /// during the game (e.g. an elimination learner ran out of net members).
  bool precondition_flag = false;

  std::size_t horizon() const noexcept { return rounds.size(); }
};

class Learner {
 public:
  virtual ~Learner() = default;
  /// Must be a deterministic function of the history seen so far.
  virtual double predict(std::span<const double> x, const Transcript& history) = 0;
  virtual void update(std::span<const double> x, double y) = 0;
  virtual std::string name() const = 0;
  /// True once the learner has detected a violated precondition.
  virtual bool precondition_violated() const { return false; }
};

/// Closed interval of admissible labels; a label set of finitely many values
/// is described by `values` instead.
struct LabelRange {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> values;

  bool contains(double y) const;
};

class Environment {
 public:
  virtual ~Environment() = default;
  /// Next instance, or nullopt to halt.
  virtual std::optional<Point> next_instance(const Transcript& history) = 0;
  virtual double reveal_label(std::span<const double> x, double y_hat) = 0;
  virtual LabelRange label_range() const { return {}; }
  virtual std::string name() const = 0;
  /// A hypothesis consistent with every label revealed so far, when the
  /// environment can construct one.
  virtual std::optional<Hypothesis> witness() const { return std::nullopt; }
};

/// Plays up to `max_T` rounds. Throws ProtocolError when the environment
/// reveals a label outside its declared range or outside the loss's domain.
Transcript run_game(Learner& learner, Environment& env, const Loss& loss, std::size_t max_T);

/// True iff |h(x_t) - y_t| <= tol in every round.
bool certify_realizable(const Transcript& transcript, const Hypothesis& h,
                        double tol = kRealizableTol);

/// Predicts with the lowest-index surviving net member and eliminates it as
/// soon as its loss in a round exceeds eps. If every member is eliminated the
/// learner keeps predicting with the last member and reports the violated
/// precondition.
class EliminationLearner final : public Learner {
 public:
  EliminationLearner(std::vector<Hypothesis> net, Loss loss, double eps);

  double predict(std::span<const double> x, const Transcript& history) override;
  void update(std::span<const double> x, double y) override;
  std::string name() const override { return "elimination"; }
  bool precondition_violated() const override { return degraded_; }

  std::size_t active_index() const noexcept { return active_; }
  std::size_t eliminated_count() const noexcept { return eliminated_; }

 private:
  std::vector<Hypothesis> net_;
  Loss loss_;
  double eps_;
  std::size_t active_ = 0;
  std::size_t eliminated_ = 0;
  bool degraded_ = false;
};

class ConstantLearner final : public Learner {
 public:
  explicit ConstantLearner(double value, std::string name = "constant")
      : value_(value), name_(std::move(name)) {}

  double predict(std::span<const double>, const Transcript&) override { return value_; }
  void update(std::span<const double>, double) override {}
  std::string name() const override { return name_; }

 private:
  double value_;
  std::string name_;
};

/// Emits a fixed instance list and labels it with a fixed hypothesis, ignoring
/// the learner's predictions.
class HypothesisEnvironment final : public Environment {
 public:
  HypothesisEnvironment(std::vector<Point> xs, Hypothesis h, LabelRange range = {},
                        std::string name = "hypothesis");

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  LabelRange label_range() const override { return range_; }
  std::string name() const override { return name_; }
  std::optional<Hypothesis> witness() const override { return h_; }

 private:
  std::vector<Point> xs_;
  Hypothesis h_;
  LabelRange range_;
  std::string name_;
  std::size_t next_ = 0;
};

/// Replays recorded (x_t, y_t) pairs.
class ReplayEnvironment final : public Environment {
 public:
  ReplayEnvironment(std::vector<Point> xs, std::vector<double> ys);

  std::optional<Point> next_instance(const Transcript& history) override;
  double reveal_label(std::span<const double> x, double y_hat) override;
  std::string name() const override { return "replay"; }

 private:
  std::vector<Point> xs_;
  std::vector<double> ys_;
  std::size_t next_ = 0;
};

/// Number of rounds whose loss exceeds `eps`.
std::size_t count_rounds_above(const Transcript& transcript, double eps);

// Transcript CSV: t,x,y_hat,y,loss,cum_loss with x's coordinates joined by ';'.
std::string transcript_to_csv(const Transcript& transcript);
void write_transcript_csv(const Transcript& transcript, const std::string& path);
Transcript parse_transcript_csv(std::string_view text);

}  // namespace onreg
