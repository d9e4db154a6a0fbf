#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rpslab/sigma_model.hpp"
#include "rpslab/tail_model.hpp"

namespace rpslab {

enum class BaseSampler { inverse_tail, half_normal };
enum class PhaseRule { uniform, rademacher };

namespace coeff {

/// xi_k = eta_k + i zeta_k with eta_k ~ N(0, beta_k^2), zeta_k ~ N(0, gamma_k^2).
struct ComplexGaussian {
  SigmaModel beta;
  SigmaModel gamma;
};

/// xi_k = sigma_k * m_k * phase_k with i.i.d. nonnegative base magnitudes m_k.
struct ScaledIID {
  SigmaModel sigma;
  std::optional<TailModel> base_tail;
  BaseSampler sampler = BaseSampler::inverse_tail;
  PhaseRule phase = PhaseRule::uniform;
};

/// One branch is drawn per realization; then xi_k = sigma_k of that branch.
struct DeterministicMixture {
  std::vector<std::pair<double, SigmaModel>> branches;
};

/// A single tau per realization; xi_k = tau for every k.
struct CommonFactor {
  TailModel tau_tail;
};

}  // namespace coeff

class CoefficientModel {
 public:
  using Family = std::variant<coeff::ComplexGaussian, coeff::ScaledIID, coeff::DeterministicMixture,
                              coeff::CommonFactor>;

  static CoefficientModel complex_gaussian(SigmaModel beta, SigmaModel gamma);
  /// beta = gamma = sigma / sqrt(2), so E|xi_k|^2 = sigma_k^2.
  static CoefficientModel isotropic_gaussian(const SigmaModel& sigma);
  static CoefficientModel scaled_iid(SigmaModel sigma, std::optional<TailModel> base_tail,
                                     BaseSampler sampler, PhaseRule phase);
  static CoefficientModel mixture(std::vector<std::pair<double, SigmaModel>> branches);
  /// Single-branch mixture: xi_k = sigma_k exactly.
  static CoefficientModel deterministic(SigmaModel sigma);
  static CoefficientModel common_factor(TailModel tau_tail);

  const Family& family() const noexcept { return family_; }
  const std::string& id() const noexcept { return id_; }

  /// The per-index scale sigma_k used for truncation planning.
  SigmaModel scale_sequence() const;

 private:
  CoefficientModel(Family family, std::string id);

  Family family_;
  std::string id_;
};

/// One truncated realization. `log_abs[k]` is ln|xi_k| computed without
/// passing through the linear value, so it stays exact where
/// `coefficients[k]` has underflowed to 0 or overflowed to inf.
struct SampleSeries {
  std::uint64_t seed = 0;
  std::string model_id;
  std::vector<std::complex<double>> coefficients;
  std::vector<double> log_abs;

  std::size_t n_terms() const noexcept { return coefficients.size(); }
};

SampleSeries sample(const CoefficientModel& model, std::uint64_t seed, std::size_t n_terms);

/// Builds a series from explicit coefficients (deterministic inputs, tests).
SampleSeries series_from_coefficients(std::vector<std::complex<double>> coefficients,
                                      std::string model_id = "explicit");

}  // namespace rpslab
