#include "rpslab/coeff_samplers.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "rpslab/counter_rng.hpp"
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

using counter_rng::Stream;

double standard_normal_quantile(double u) {
  static const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(unit, u);
}

double log_abs_of(double x) { return x == 0.0 ? -inf : std::log(std::abs(x)); }

}  // namespace

CoefficientModel::CoefficientModel(Family family, std::string id)
    : family_(std::move(family)), id_(std::move(id)) {}

CoefficientModel CoefficientModel::complex_gaussian(SigmaModel beta, SigmaModel gamma) {
  std::string id = "complex_gaussian(beta=" + beta.describe() + ",gamma=" + gamma.describe() + ")";
  return CoefficientModel(coeff::ComplexGaussian{std::move(beta), std::move(gamma)}, std::move(id));
}

CoefficientModel CoefficientModel::isotropic_gaussian(const SigmaModel& sigma) {
  const SigmaModel half = sigma.scaled(std::numbers::sqrt2 / 2.0);
  CoefficientModel model = complex_gaussian(half, half);
  model.id_ = "isotropic_gaussian(sigma=" + sigma.describe() + ")";
  return model;
}

CoefficientModel CoefficientModel::scaled_iid(SigmaModel sigma, std::optional<TailModel> base_tail,
                                              BaseSampler sampler, PhaseRule phase) {
  if (sampler == BaseSampler::inverse_tail && !base_tail) {
    fail(ErrorKind::validation, "inverse_tail base sampler needs a base tail model");
  }
  if (base_tail) base_tail->certify();
  std::ostringstream id;
  id << "scaled_iid(sigma=" << sigma.describe() << ",sampler="
     << (sampler == BaseSampler::inverse_tail ? "inverse_tail" : "half_normal");
  if (base_tail) id << ",tail=" << base_tail->label();
  id << ",phase=" << (phase == PhaseRule::uniform ? "uniform" : "rademacher") << ")";
  return CoefficientModel(coeff::ScaledIID{std::move(sigma), std::move(base_tail), sampler, phase},
                          id.str());
}

CoefficientModel CoefficientModel::mixture(std::vector<std::pair<double, SigmaModel>> branches) {
  if (branches.empty()) fail(ErrorKind::validation, "mixture needs at least one branch");
  double total = 0.0;
  std::ostringstream id;
  id << "mixture(";
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const double p = branches[i].first;
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorKind::validation, "mixture probability " + shortest(p) + " outside [0,1]");
    }
    total += p;
    id << (i ? ";" : "") << shortest(p) << ":" << branches[i].second.describe();
  }
  if (std::abs(total - 1.0) > 1e-12) {
    fail(ErrorKind::validation, "mixture probabilities sum to " + shortest(total) + ", not 1");
  }
  id << ")";
  return CoefficientModel(coeff::DeterministicMixture{std::move(branches)}, id.str());
}

CoefficientModel CoefficientModel::deterministic(SigmaModel sigma) {
  CoefficientModel model = mixture({{1.0, std::move(sigma)}});
  const auto& branch = std::get<coeff::DeterministicMixture>(model.family_).branches.front();
  model.id_ = "deterministic(sigma=" + branch.second.describe() + ")";
  return model;
}

CoefficientModel CoefficientModel::common_factor(TailModel tau_tail) {
  tau_tail.certify();
  std::string id = "common_factor(tau=" + tau_tail.label() + ")";
  return CoefficientModel(coeff::CommonFactor{std::move(tau_tail)}, std::move(id));
}

SigmaModel CoefficientModel::scale_sequence() const {
  return std::visit(
      overloaded{
          [](const coeff::ComplexGaussian& f) { return SigmaModel::root_sum_squares(f.beta, f.gamma); },
          [](const coeff::ScaledIID& f) { return f.sigma; },
          [](const coeff::DeterministicMixture& f) {
            if (f.branches.size() != 1) {
              fail(ErrorKind::argument, "a mixture of several branches has no single scale sequence");
            }
            return f.branches.front().second;
          },
          [](const coeff::CommonFactor&) { return SigmaModel::constant(1.0); },
      },
      family_);
}

SampleSeries sample(const CoefficientModel& model, std::uint64_t seed, std::size_t n_terms) {
  if (n_terms < 1) fail(ErrorKind::argument, "n_terms must be >= 1");
  SampleSeries series;
  series.seed = seed;
  series.model_id = model.id();
  series.coefficients.resize(n_terms);
  series.log_abs.resize(n_terms);
  auto& xi = series.coefficients;
  auto& log_abs = series.log_abs;

  std::visit(
      overloaded{
          [&](const coeff::ComplexGaussian& f) {
            for (std::size_t k = 0; k < n_terms; ++k) {
              const double g1 = standard_normal_quantile(counter_rng::uniform(seed, k, Stream::real_part));
              const double g2 = standard_normal_quantile(counter_rng::uniform(seed, k, Stream::imag_part));
              const double lb = f.beta.log_sigma_at(k);
              const double lg = f.gamma.log_sigma_at(k);
              xi[k] = {std::exp(lb) * g1, std::exp(lg) * g2};
              const double a = lb == -inf ? -inf : lb + log_abs_of(g1);
              const double b = lg == -inf ? -inf : lg + log_abs_of(g2);
              log_abs[k] = 0.5 * log_add_exp(2.0 * a, 2.0 * b);
            }
          },
          [&](const coeff::ScaledIID& f) {
            for (std::size_t k = 0; k < n_terms; ++k) {
              const double u = counter_rng::uniform(seed, k, Stream::magnitude);
              const double log_m = f.sampler == BaseSampler::inverse_tail
                                       ? inverse_tail_sample_log(*f.base_tail, u)
                                       : log_abs_of(standard_normal_quantile(0.5 + 0.5 * u));
              const double ls = f.sigma.log_sigma_at(k);
              const double la = (ls == -inf || log_m == -inf) ? -inf : ls + log_m;
              const double v = counter_rng::uniform(seed, k, Stream::phase);
              const double magnitude = std::exp(la);
              if (f.phase == PhaseRule::uniform) {
                xi[k] = std::polar(magnitude, 2.0 * std::numbers::pi * v);
              } else {
                xi[k] = {v < 0.5 ? -magnitude : magnitude, 0.0};
              }
              log_abs[k] = la;
            }
          },
          [&](const coeff::DeterministicMixture& f) {
            const double u = counter_rng::uniform(seed, counter_rng::global_index, Stream::branch);
            std::size_t chosen = f.branches.size() - 1;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < f.branches.size(); ++i) {
              cumulative += f.branches[i].first;
              if (u < cumulative) {
                chosen = i;
                break;
              }
            }
            const SigmaModel& sigma = f.branches[chosen].second;
            for (std::size_t k = 0; k < n_terms; ++k) {
              log_abs[k] = sigma.log_sigma_at(k);
              xi[k] = {std::exp(log_abs[k]), 0.0};
            }
          },
          [&](const coeff::CommonFactor& f) {
            const double u = counter_rng::uniform(seed, counter_rng::global_index, Stream::common_factor);
            const double log_tau = inverse_tail_sample_log(f.tau_tail, u);
            const double tau = std::exp(log_tau);
            for (std::size_t k = 0; k < n_terms; ++k) {
              xi[k] = {tau, 0.0};
              log_abs[k] = log_tau;
            }
          },
      },
      model.family());
  return series;
}

SampleSeries series_from_coefficients(std::vector<std::complex<double>> coefficients,
                                      std::string model_id) {
  SampleSeries series;
  series.model_id = std::move(model_id);
  series.log_abs.reserve(coefficients.size());
  for (const auto& c : coefficients) {
    const double m = std::abs(c);
    series.log_abs.push_back(m == 0.0 ? -inf : std::log(m));
  }
  series.coefficients = std::move(coefficients);
  return series;
}

}  // namespace rpslab
