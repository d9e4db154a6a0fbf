#include "rpslab/tail_model.hpp"

#include <cmath>
#include <utility>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/numeric.hpp"

namespace rpslab {

TailModel::TailModel(LogRule rule, double support_floor, bool monotone_certified,
                     std::string label, std::optional<LogInverse> log_inverse)
    : rule_(std::move(rule)),
      floor_(support_floor),
      log_floor_(support_floor > 0.0 ? std::log(support_floor) : -inf),
      certified_(monotone_certified),
      label_(std::move(label)),
      log_inverse_(std::move(log_inverse)) {
  if (!rule_) fail(ErrorKind::tail_model, "tail model '" + label_ + "' has no rule");
  if (!(support_floor >= 0.0) || !std::isfinite(support_floor)) {
    fail(ErrorKind::tail_model, "support floor must be finite and >= 0");
  }
}

TailModel TailModel::power(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorKind::argument, "power tail needs b > 0");
  return TailModel(
      [b](double s) { return std::min(1.0, std::exp(-b * s)); }, 1.0, true,
      "power(b=" + shortest(b) + ")", [b](double level) { return -std::log(level) / b; });
}

TailModel TailModel::subgaussian() {
  return TailModel(
      [](double s) {
        // u^2/2 = exp(2s)/2; guard the overflow of exp(2s) explicitly.
        if (s > 354.0) return 0.0;
        return std::min(1.0, 2.0 * std::exp(-0.5 * std::exp(2.0 * s)));
      },
      0.0, true, "subgaussian",
      [](double level) {
        if (level >= 1.0) return -inf;
        return 0.5 * std::log(2.0 * std::log(2.0 / level));
      });
}

TailModel TailModel::log_sqrt() {
  return TailModel([](double s) { return s <= 1.0 ? 1.0 : 1.0 / std::sqrt(s); }, std::exp(1.0),
                   true, "log_sqrt",
                   [](double level) { return std::max(1.0, 1.0 / (level * level)); });
}

TailModel TailModel::inverse_log() {
  return TailModel([](double s) { return s <= 1.0 ? 1.0 : 1.0 / s; }, std::exp(1.0), true,
                   "inverse_log", [](double level) { return std::max(1.0, 1.0 / level); });
}

TailModel TailModel::point_mass(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    fail(ErrorKind::argument, "point mass needs a finite value >= 0");
  }
  const double log_value = value > 0.0 ? std::log(value) : -inf;
  // Above the floor everything is 0, so the rule never sees s < log_value.
  return TailModel([](double) { return 0.0; }, value, true, "point_mass(" + shortest(value) + ")",
                   [log_value](double) { return log_value; });
}

TailModel TailModel::from_linear(std::function<double(double)> rule, double support_floor,
                                 std::string label) {
  if (!rule) fail(ErrorKind::tail_model, "tail model '" + label + "' has no rule");
  return TailModel([rule = std::move(rule)](double s) { return rule(std::exp(s)); },
                   support_floor, false, std::move(label));
}

double TailModel::at_log(double log_u) const {
  if (std::isnan(log_u)) fail(ErrorKind::tail_model, "tail evaluated at NaN");
  if (log_u < log_floor_) return 1.0;
  const double v = rule_(log_u);
  if (!(v >= 0.0 && v <= 1.0)) {
    fail(ErrorKind::tail_model, "tail '" + label_ + "' returned " + shortest(v) +
                                    " outside [0,1] at ln u=" + shortest(log_u));
  }
  return v;
}

double TailModel::operator()(double u) const {
  if (u < floor_) return 1.0;
  return at_log(u > 0.0 ? std::log(u) : -inf);
}

namespace {
constexpr int dense_points = 128 * 16;
constexpr int sparse_points = 4000;
}  // namespace

void TailModel::certify() const {
  if (certified_) return;
  const double start = std::isfinite(log_floor_) ? log_floor_ : -40.0;
  double previous = at_log(start);
  if (previous > 1.0) fail(ErrorKind::tail_model, "T(u0) > 1 for '" + label_ + "'");
  // Step 1/16 in ln u over the first 128 units, then offsets 128 * 2^(j/4)
  // that reach ~1e300 in ln u.
  auto point = [&](int i) {
    return i <= dense_points ? start + i / 16.0 : start + 128.0 * std::exp2((i - dense_points) / 4.0);
  };
  for (int i = 1; i <= dense_points + sparse_points; ++i) {
    const double s = point(i);
    const double v = at_log(s);
    if (v > previous + 1e-12) {
      fail(ErrorKind::tail_model, "tail '" + label_ + "' increases near ln u=" + shortest(s));
    }
    previous = v;
  }
}

double inverse_tail_sample_log(const TailModel& tail, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    fail(ErrorKind::argument, "uniform level must lie in (0,1), got " + shortest(level));
  }
  const double floor = tail.support_floor();
  const double log_floor = floor > 0.0 ? std::log(floor) : -inf;
  if (const auto& inverse = tail.log_inverse()) {
    return std::max(log_floor, (*inverse)(level));
  }
  if (tail(floor) <= level) return log_floor;

  // Bracket in ln u, then bisect; a rise in T while expanding is a model defect.
  double lo = std::isfinite(log_floor) ? log_floor : -745.0;
  double t_lo = tail.at_log(lo);
  if (t_lo <= level) return lo;
  double step = 1.0;
  double hi = lo + step;
  double t_hi = tail.at_log(hi);
  while (t_hi > level) {
    if (t_hi > t_lo + 1e-12) {
      fail(ErrorKind::tail_model, "non-monotone tail '" + tail.label() + "' detected while bracketing");
    }
    lo = hi;
    t_lo = t_hi;
    step *= 2.0;
    hi = lo + step;
    if (hi > 1e300) fail(ErrorKind::tail_model, "tail '" + tail.label() + "' never falls to level");
    t_hi = tail.at_log(hi);
  }
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double t_mid = tail.at_log(mid);
    if (t_mid > t_lo + 1e-12 || t_mid + 1e-12 < t_hi) {
      fail(ErrorKind::tail_model, "non-monotone tail '" + tail.label() + "' detected while bisecting");
    }
    if (t_mid <= level) {
      hi = mid;
      t_hi = t_mid;
    } else {
      lo = mid;
      t_lo = t_mid;
    }
  }
  return hi;
}

double inverse_tail_sample(const TailModel& tail, double level) {
  return std::exp(inverse_tail_sample_log(tail, level));
}

}  // namespace rpslab
