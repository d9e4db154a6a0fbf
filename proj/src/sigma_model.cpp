#include "rpslab/sigma_model.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/numeric.hpp"

namespace rpslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) fail(ErrorKind::argument, message);
}

double log_of_nonnegative(double v) { return v == 0.0 ? -inf : std::log(v); }

const char* extension_name(family::Extension e) {
  switch (e) {
    case family::Extension::repeat_last: return "repeat_last";
    case family::Extension::geometric_extrapolate: return "geometric";
    case family::Extension::error_beyond_end: return "error";
  }
  return "?";
}

}  // namespace

SigmaModel::SigmaModel(Family family, Asymptotics asymptotics, std::string label)
    : family_(std::move(family)), asymptotics_(asymptotics), label_(std::move(label)) {}

SigmaModel SigmaModel::constant(double c) {
  require(std::isfinite(c) && c >= 0.0, "Constant(c) needs finite c >= 0, got " + shortest(c));
  Asymptotics a;
  a.root_limsup = c > 0.0 ? 1.0 : 0.0;
  return SigmaModel(family::Constant{c}, a, "constant");
}

SigmaModel SigmaModel::geometric(double a) {
  require(std::isfinite(a) && a > 0.0, "Geometric(a) needs finite a > 0, got " + shortest(a));
  Asymptotics as;
  as.root_limsup = 1.0 / a;
  return SigmaModel(family::Geometric{a}, as, "geometric");
}

SigmaModel SigmaModel::factorial_power(double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0,
          "FactorialPower(alpha) needs finite alpha >= 0, got " + shortest(alpha));
  Asymptotics a;
  if (alpha == 0.0) {
    a.root_limsup = 1.0;
  } else {
    // (n!)^(1/n) ~ n/e, so n ln n / (alpha ln n!) -> 1/alpha and
    // n^alpha (n!)^(-alpha/n) -> e^alpha.
    a.root_limsup = 0.0;
    a.order = 1.0 / alpha;
    a.paper_type = std::exp(alpha);
  }
  return SigmaModel(family::FactorialPower{alpha}, a, "factorial_power");
}

SigmaModel SigmaModel::super_geometric(double theta) {
  require(std::isfinite(theta) && theta >= 0.0,
          "SuperGeometric(theta) needs finite theta >= 0, got " + shortest(theta));
  Asymptotics a;
  if (theta == 0.0) {
    a.root_limsup = 1.0;
  } else {
    a.root_limsup = 0.0;
    a.order = 1.0 / theta;
    a.paper_type = 1.0;
  }
  return SigmaModel(family::SuperGeometric{theta}, a, "super_geometric");
}

SigmaModel SigmaModel::explicit_list(std::vector<double> values, family::Extension extension) {
  require(!values.empty(), "ExplicitList needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]) && values[i] >= 0.0,
            "ExplicitList value at n=" + std::to_string(i) + " must be finite and >= 0");
  }
  if (extension == family::Extension::geometric_extrapolate) {
    require(values.size() >= 2, "geometric extension needs at least two values");
    require(values[values.size() - 1] > 0.0 && values[values.size() - 2] > 0.0,
            "geometric extension needs the last two values to be positive");
  }
  return SigmaModel(family::ExplicitList{std::move(values), extension}, {}, "explicit");
}

SigmaModel SigmaModel::custom(std::function<double(std::uint64_t)> rule, Asymptotics asymptotics,
                              std::string label) {
  require(static_cast<bool>(rule), "CustomRule needs a callable rule");
  return SigmaModel(family::CustomRule{std::move(rule)}, asymptotics, std::move(label));
}

SigmaModel SigmaModel::root_sum_squares(const SigmaModel& first, const SigmaModel& second) {
  Asymptotics a;
  const auto& fa = first.asymptotics();
  const auto& sa = second.asymptotics();
  if (fa.root_limsup && sa.root_limsup) a.root_limsup = std::max(*fa.root_limsup, *sa.root_limsup);
  // The larger sequence dominates: its order wins, and at equal order the
  // larger type wins.
  if (fa.order && sa.order) {
    a.order = std::max(*fa.order, *sa.order);
    if (*fa.order > *sa.order) {
      a.paper_type = fa.paper_type;
    } else if (*sa.order > *fa.order) {
      a.paper_type = sa.paper_type;
    } else if (fa.paper_type && sa.paper_type) {
      a.paper_type = std::max(*fa.paper_type, *sa.paper_type);
    }
  }
  return SigmaModel(family::RootSumSquares{std::make_shared<const SigmaModel>(first),
                                           std::make_shared<const SigmaModel>(second)},
                    a, "root_sum_squares");
}

SigmaModel SigmaModel::scaled(double c) const {
  require(std::isfinite(c) && c > 0.0, "scale factor must be finite and > 0, got " + shortest(c));
  SigmaModel copy = *this;
  copy.log_scale_ += std::log(c);
  return copy;
}

SigmaModel SigmaModel::with_power_prefactor(double p) const {
  require(std::isfinite(p), "power prefactor must be finite");
  SigmaModel copy = *this;
  copy.power_prefactor_ += p;
  return copy;
}

SigmaModel SigmaModel::numeric_only() const {
  SigmaModel copy = *this;
  copy.asymptotics_ = {};
  return copy;
}

double SigmaModel::log_base(std::uint64_t n) const {
  const double nd = static_cast<double>(n);
  return std::visit(
      overloaded{
          [](const family::Constant& f) { return log_of_nonnegative(f.c); },
          [nd](const family::Geometric& f) { return -nd * std::log(f.a); },
          [nd](const family::FactorialPower& f) {
            return f.alpha == 0.0 ? 0.0 : -f.alpha * boost::math::lgamma(nd + 1.0);
          },
          [nd, n](const family::SuperGeometric& f) {
            return (n <= 1 || f.theta == 0.0) ? 0.0 : -f.theta * nd * std::log(nd);
          },
          [n](const family::ExplicitList& f) {
            const std::size_t size = f.values.size();
            if (n < size) return log_of_nonnegative(f.values[n]);
            switch (f.extension) {
              case family::Extension::repeat_last:
                return log_of_nonnegative(f.values.back());
              case family::Extension::geometric_extrapolate: {
                const double last = std::log(f.values[size - 1]);
                const double prev = std::log(f.values[size - 2]);
                return last + static_cast<double>(n - (size - 1)) * (last - prev);
              }
              case family::Extension::error_beyond_end:
                break;
            }
            fail(ErrorKind::model_evaluation, "index n=" + std::to_string(n) +
                                                  " is beyond the explicit list of length " +
                                                  std::to_string(size));
          },
          [n](const family::CustomRule& f) {
            const double v = f.rule(n);
            if (!std::isfinite(v) || v < 0.0) {
              fail(ErrorKind::model_evaluation,
                   "custom rule returned " + shortest(v) + " at n=" + std::to_string(n));
            }
            return log_of_nonnegative(v);
          },
          [n](const family::RootSumSquares& f) {
            const double a = f.first->log_sigma_at(n);
            const double b = f.second->log_sigma_at(n);
            return 0.5 * log_add_exp(2.0 * a, 2.0 * b);
          },
      },
      family_);
}

double SigmaModel::log_sigma_at(std::uint64_t n) const {
  double v = log_base(n);
  if (v == -inf) return v;
  v += log_scale_;
  if (power_prefactor_ != 0.0 && n > 1) v += power_prefactor_ * std::log(static_cast<double>(n));
  return v;
}

double SigmaModel::sigma_at(std::uint64_t n) const { return std::exp(log_sigma_at(n)); }

std::string SigmaModel::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const family::Constant& f) { out << "constant(c=" << shortest(f.c) << ")"; },
                 [&](const family::Geometric& f) { out << "geometric(a=" << shortest(f.a) << ")"; },
                 [&](const family::FactorialPower& f) {
                   out << "factorial_power(alpha=" << shortest(f.alpha) << ")";
                 },
                 [&](const family::SuperGeometric& f) {
                   out << "super_geometric(theta=" << shortest(f.theta) << ")";
                 },
                 [&](const family::ExplicitList& f) {
                   out << "explicit(values=[";
                   for (std::size_t i = 0; i < f.values.size(); ++i) {
                     out << (i ? "," : "") << shortest(f.values[i]);
                   }
                   out << "],extension=" << extension_name(f.extension) << ")";
                 },
                 [&](const family::CustomRule&) { out << label_ << "()"; },
                 [&](const family::RootSumSquares& f) {
                   out << "root_sum_squares(" << f.first->describe() << "," << f.second->describe()
                       << ")";
                 },
             },
             family_);
  if (log_scale_ != 0.0) out << "*exp(" << shortest(log_scale_) << ")";
  if (power_prefactor_ != 0.0) out << "*n^" << shortest(power_prefactor_);
  return out.str();
}

}  // namespace rpslab
