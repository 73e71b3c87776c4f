#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace umbilic {

/// Parameter point (u, v) on a chart.
struct ChartPoint {
  double u = 0.0;
  double v = 0.0;
};

/// A quantity could not be evaluated: division by (near) zero, a function
/// argument outside its real domain, or a degenerate immersion.
class SingularEvaluation : public std::runtime_error {
 public:
  explicit SingularEvaluation(std::string reason, double offending_value = 0.0,
                              std::optional<ChartPoint> point = std::nullopt)
      : std::runtime_error(compose(reason, offending_value, point)),
        reason_(std::move(reason)),
        offending_value_(offending_value),
        point_(point) {}

  const std::string& reason() const { return reason_; }
  double offending_value() const { return offending_value_; }
  const std::optional<ChartPoint>& point() const { return point_; }

  /// Same error, annotated with where it happened.
  SingularEvaluation at(ChartPoint p, const std::string& context = {}) const {
    std::string r = context.empty() ? reason_ : context + ": " + reason_;
    return SingularEvaluation(std::move(r), offending_value_, p);
  }

 private:
  static std::string compose(const std::string& reason, double value,
                             const std::optional<ChartPoint>& point) {
    std::string msg = "singular evaluation: " + reason + " (value " + std::to_string(value) + ")";
    if (point) {
      msg += " at (u, v) = (" + std::to_string(point->u) + ", " + std::to_string(point->v) + ")";
    }
    return msg;
  }

  std::string reason_;
  double offending_value_;
  std::optional<ChartPoint> point_;
};

/// Bad user input: unknown preset, invalid parameter, malformed file.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace umbilic
