#include <cmath>
#include <sstream>

#include "rpslab/coeff_samplers.hpp"
#include "rpslab/series_io.hpp"
#include "support.hpp"

using namespace rpslab;
using testing::error_kind;

TEST_CASE("mixture realizations follow the branch probabilities") {
  const auto model = CoefficientModel::mixture(
      {{0.5, SigmaModel::constant(1)}, {0.5, SigmaModel::geometric(2)}});
  int ones = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto s = sample(model, seed, 4);
    const bool all_one = s.coefficients[3] == std::complex<double>(1.0, 0.0);
    if (all_one) {
      ++ones;
      for (const auto& c : s.coefficients) CHECK(c == std::complex<double>(1.0, 0.0));
    } else {
      CHECK(s.coefficients[0].real() == 1.0);
      CHECK(s.coefficients[1].real() == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(s.coefficients[2].real() == doctest::Approx(0.25).epsilon(1e-15));
      CHECK(s.coefficients[3].real() == doctest::Approx(0.125).epsilon(1e-15));
    }
  }
  CHECK(std::abs(ones / 2000.0 - 0.5) < 0.04);
}

TEST_CASE("common factor repeats one draw") {
  const auto model = CoefficientModel::common_factor(TailModel::log_sqrt());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample(model, seed, 3);
    CHECK(s.log_abs[0] >= 1.0);  // tau >= e
    CHECK(s.log_abs[0] == s.log_abs[1]);
    CHECK(s.log_abs[1] == s.log_abs[2]);
    CHECK(s.coefficients[0] == s.coefficients[2]);
  }
}

TEST_CASE("zero variance Gaussian gives zeros") {
  const auto s = sample(CoefficientModel::complex_gaussian(SigmaModel::constant(0), SigmaModel::constant(0)), 9, 5);
  for (const auto& c : s.coefficients) CHECK(c == std::complex<double>(0.0, 0.0));
  for (double l : s.log_abs) CHECK(l == -INFINITY);
}

TEST_CASE("Gaussian moments") {
  const auto model = CoefficientModel::isotropic_gaussian(SigmaModel::constant(1));
  const auto s = sample(model, 123, 200000);
  double m2 = 0.0, re = 0.0;
  for (const auto& c : s.coefficients) {
    m2 += std::norm(c);
    re += c.real();
  }
  CHECK(m2 / 200000 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(re / 200000) < 0.01);
}

TEST_CASE("log magnitudes are exact where linear values underflow") {
  const auto model = CoefficientModel::deterministic(SigmaModel::factorial_power(0.5));
  const auto s = sample(model, 0, 1000);
  CHECK(s.coefficients[999] == std::complex<double>(0.0, 0.0));
  CHECK(s.log_abs[999] == doctest::Approx(-0.5 * std::lgamma(1000.0)).epsilon(1e-13));
}

TEST_CASE("prefix stability and determinism") {
  const auto model = CoefficientModel::isotropic_gaussian(SigmaModel::geometric(1.1));
  const auto short_s = sample(model, 77, 100);
  const auto long_s = sample(model, 77, 1000);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(short_s.coefficients[k] == long_s.coefficients[k]);
    CHECK(short_s.log_abs[k] == long_s.log_abs[k]);
  }
  const auto other = sample(model, 78, 100);
  CHECK(other.coefficients[5] != short_s.coefficients[5]);
}

TEST_CASE("construction-time validation") {
  CHECK(error_kind([] {
          CoefficientModel::scaled_iid(SigmaModel::constant(1), std::nullopt, BaseSampler::inverse_tail,
                                       PhaseRule::uniform);
        }) == ErrorKind::validation);
  CHECK(error_kind([] {
          CoefficientModel::mixture({{0.3, SigmaModel::constant(1)}, {0.3, SigmaModel::constant(2)}});
        }) == ErrorKind::validation);
}

TEST_CASE("scaled iid samples with the base tail") {
  const auto model = CoefficientModel::scaled_iid(SigmaModel::constant(1), TailModel::power(2),
                                                  BaseSampler::inverse_tail, PhaseRule::rademacher);
  const auto s = sample(model, 5, 20000);
  int above = 0;
  for (std::size_t k = 0; k < s.n_terms(); ++k) {
    CHECK(s.coefficients[k].imag() == 0.0);
    if (std::abs(s.coefficients[k]) > 2.0) ++above;
  }
  CHECK(above / 20000.0 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("binary and csv round trip") {
  const auto s = sample(CoefficientModel::isotropic_gaussian(SigmaModel::factorial_power(0.5)), 4, 300);
  std::stringstream bin;
  write_series_binary(bin, s);
  const auto back = read_series_binary(bin);
  CHECK(back.seed == 4);
  CHECK(back.model_id == s.model_id);
  REQUIRE(back.n_terms() == 300);
  for (std::size_t k = 0; k < 300; ++k) {
    CHECK(back.coefficients[k] == s.coefficients[k]);
    CHECK(back.log_abs[k] == s.log_abs[k]);
  }
  std::ostringstream csv;
  write_series_csv(csv, series_from_coefficients({{1.0, 0.0}, {0.5, -0.25}}));
  CHECK(csv.str() == "k,re,im\n0,1,0\n1,0.5,-0.25\n");

  std::stringstream junk("NOTMAGIC........");
  CHECK_THROWS(read_series_binary(junk));
}
