#include <algorithm>
#include <cmath>

#include "rpslab/empirical_lab.hpp"
#include "rpslab/theory_engine.hpp"
#include "support.hpp"

using namespace rpslab;
using testing::error_kind;

namespace {

SampleSeries constant_series(std::size_t n, std::complex<double> c) {
  return series_from_coefficients(std::vector<std::complex<double>>(n, c));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Brute-force sup of |xi_n|^(1/n) over [lo, hi], straight from the coefficients.
double brute_sup_root(const SampleSeries& s, std::size_t lo, std::size_t hi) {
  double best = 0.0;
  for (std::size_t n = lo; n <= hi; ++n) best = std::max(best, std::pow(std::abs(s.coefficients[n]), 1.0 / n));
  return best;
}

}  // namespace

TEST_CASE("root sequence") {
  for (double v : empirical_root_sequence(constant_series(10, 1.0))) CHECK(v == 1.0);
  std::vector<std::complex<double>> halves;
  for (int k = 0; k < 40; ++k) halves.emplace_back(std::ldexp(1.0, -k), 0.0);
  for (double v : empirical_root_sequence(series_from_coefficients(halves))) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  const auto seq = empirical_root_sequence(series_from_coefficients({0.0, 5.0, 0.0, 0.0}));
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(seq[1] == 0.0);
  CHECK(seq[2] == 0.0);
}

TEST_CASE("empirical radius of a Gaussian series") {
  const auto model = CoefficientModel::isotropic_gaussian(SigmaModel::constant(1));
  int within = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = sample(model, seed, 2000);
    const auto r = empirical_radius(s);
    CHECK(r.window_lo == 1500);
    CHECK(r.window_hi == 1999);
    CHECK(r.estimate == doctest::Approx(1.0 / brute_sup_root(s, 1500, 1999)).epsilon(1e-12));
    if (r.estimate >= 0.98 && r.estimate <= 1.02) ++within;
  }
  CHECK(within >= 190);
}

TEST_CASE("empirical radius of the mixture and common factor") {
  const auto mix = CoefficientModel::mixture({{0.5, SigmaModel::constant(1)}, {0.5, SigmaModel::geometric(2)}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double r = empirical_radius(sample(mix, seed, 512)).estimate;
    CHECK((std::abs(r - 1.0) < 1e-12 || std::abs(r - 2.0) < 1e-12));
  }
  // tau = exp(1/U^2): estimate 1/tau^(1/1500) is near 1 unless U is small.
  const auto cf = sample(CoefficientModel::common_factor(TailModel::log_sqrt()), 3, 2000);
  const double tau_log = cf.log_abs[0];
  CHECK(empirical_radius(cf).estimate == doctest::Approx(std::exp(-tau_log / 1500)).epsilon(1e-12));
}

TEST_CASE("empirical radius errors") {
  CHECK(error_kind([] { empirical_radius(constant_series(63, 1.0)); }) == ErrorKind::insufficient_terms);
  std::vector<std::complex<double>> c(100, 0.0);
  c[10] = 1.0;
  CHECK(error_kind([&] { empirical_radius(series_from_coefficients(c)); }) == ErrorKind::degenerate_series);
  CHECK(error_kind([] { empirical_radius(constant_series(100, 1.0), 1.5); }) == ErrorKind::argument);
}

TEST_CASE("coefficient order") {
  const auto f = sample(CoefficientModel::deterministic(SigmaModel::factorial_power(1)), 0, 4096);
  const auto e = empirical_order_coefficient(f);
  CHECK(e.estimate >= 0.95);
  CHECK(e.estimate <= 1.05);
  CHECK(e.raw_tail_sup > e.estimate);

  const auto sg = sample(CoefficientModel::deterministic(SigmaModel::super_geometric(1)), 0, 4096);
  CHECK(empirical_order_coefficient(sg).estimate == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> est;
  const auto planar = CoefficientModel::isotropic_gaussian(SigmaModel::factorial_power(0.5));
  for (std::uint64_t seed = 0; seed < 50; ++seed) est.push_back(empirical_order_coefficient(sample(planar, seed, 4096)).estimate);
  const double m = median(est);
  CHECK(m >= 1.9);
  CHECK(m <= 2.1);
}

TEST_CASE("coefficient order skipping rule") {
  CHECK(error_kind([] { empirical_order_coefficient(constant_series(255, 0.5)); }) == ErrorKind::insufficient_terms);
  CHECK(error_kind([] { empirical_order_coefficient(constant_series(512, 1.0)); }) == ErrorKind::unreliable_estimate);
  CHECK(error_kind([] { empirical_order_coefficient(constant_series(512, 0.0)); }) == ErrorKind::unreliable_estimate);

  auto s = sample(CoefficientModel::deterministic(SigmaModel::factorial_power(1)), 0, 1024);
  for (std::size_t n = 800; n < 810; ++n) {
    s.coefficients[n] = 1.0;
    s.log_abs[n] = 0.0;
  }
  const auto e = empirical_order_coefficient(s);
  CHECK(e.skipped_unit == 10);
  CHECK(e.skipped_zero == 0);
}

TEST_CASE("growth fits on deterministic series") {
  const auto fp1 = SigmaModel::factorial_power(1);
  const auto exp_series = sample(CoefficientModel::deterministic(fp1), 0, 300);
  const auto order = empirical_order(exp_series, fp1, {4, 6, 8, 10, 12});
  CHECK(order.estimate == doctest::Approx(1.0).epsilon(0.1));
  CHECK(order.loglog_slope == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& p : order.points) CHECK(std::log(p.max_modulus) == doctest::Approx(p.r).epsilon(1e-9));
  const auto type = empirical_type(exp_series, fp1, 1, {6, 8, 10, 12});
  CHECK(type.estimate == doctest::Approx(1.0).epsilon(0.05));

  const auto fph = SigmaModel::factorial_power(0.5);
  const auto planar = sample(CoefficientModel::deterministic(fph), 0, 400);
  const auto o2 = empirical_order(planar, fph, {4, 5, 6, 7, 8});
  CHECK(o2.estimate >= 1.9);
  CHECK(o2.estimate <= 2.1);
  const auto t2 = empirical_type(planar, fph, 2, {4, 5, 6, 7});
  CHECK(t2.estimate >= 0.45);
  CHECK(t2.estimate <= 0.55);
}

TEST_CASE("growth fits on Gaussian realizations") {
  const auto fph = SigmaModel::factorial_power(0.5);
  const auto model = CoefficientModel::isotropic_gaussian(fph);
  std::vector<double> est;
  for (std::uint64_t seed = 0; seed < 50; ++seed) est.push_back(empirical_order(sample(model, seed, 400), fph, {4, 5, 6, 7, 8}).estimate);
  const double m = median(est);
  CHECK(m >= 1.85);
  CHECK(m <= 2.15);
}

TEST_CASE("growth fit errors") {
  std::vector<std::complex<double>> one(300, 0.0);
  one[0] = 1.0;
  const auto fp1 = SigmaModel::factorial_power(1);
  const std::string msg = testing::error_message([&] { empirical_order(series_from_coefficients(one), fp1, {4, 5, 6}); });
  CHECK(msg.find("r=4") != std::string::npos);
  CHECK(error_kind([&] { empirical_order(series_from_coefficients(one), fp1, {4, 5, 6}); }) == ErrorKind::grid_too_small);
  CHECK(error_kind([&] { empirical_type(constant_series(300, 0.0), fp1, 1, {4, 5, 6}); }) == ErrorKind::degenerate_series);
  CHECK(error_kind([&] { empirical_order(constant_series(300, 1.0), SigmaModel::constant(1), {0.2, 0.3, 0.4}); }) ==
        ErrorKind::not_entire);
  CHECK(error_kind([&] { empirical_order(constant_series(300, 1.0), fp1, {4, 5}); }) == ErrorKind::argument);
  CHECK(error_kind([&] { empirical_order(constant_series(300, 1.0), fp1, {4, 6, 5}); }) == ErrorKind::argument);
  const auto short_series = sample(CoefficientModel::deterministic(fp1), 0, 10);
  CHECK(error_kind([&] { empirical_order(short_series, fp1, {4, 5, 6}); }) == ErrorKind::insufficient_terms);
}

TEST_CASE("cross-estimator agreement on 1/sqrt(k!)") {
  const auto fph = SigmaModel::factorial_power(0.5);
  const auto s = sample(CoefficientModel::deterministic(fph), 0, 4096);
  const double growth = empirical_order(s, fph, {4, 5, 6, 7, 8}).estimate;
  const double coef = empirical_order_coefficient(s).estimate;
  const double analytic = order_of(fph).value;
  CHECK(testing::close_rel(growth, coef, 0.1));
  CHECK(testing::close_rel(growth, analytic, 0.1));
  CHECK(testing::close_rel(coef, analytic, 0.1));
}
