#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "rpslab/config.hpp"
#include "rpslab/experiment.hpp"
#include "rpslab/json_io.hpp"
#include "support.hpp"

using namespace rpslab;

namespace {

std::vector<SigmaModel> builtin_families(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> a(1.05, 8.0), alpha(0.2, 2.0), theta(0.2, 2.0), c(0.1, 10.0);
  return {SigmaModel::constant(c(gen)), SigmaModel::geometric(a(gen)), SigmaModel::geometric(1.0 / a(gen)),
          SigmaModel::factorial_power(alpha(gen)), SigmaModel::super_geometric(theta(gen))};
}

double median_radius(const CoefficientModel& model, std::size_t replicates, std::size_t n_terms,
                     double* median_gap = nullptr) {
  std::vector<double> est, gaps;
  for (std::uint64_t seed = 0; seed < replicates; ++seed) {
    const auto r = empirical_radius(sample(model, 500 + seed, n_terms));
    est.push_back(r.estimate);
    gaps.push_back(r.stability_gap);
  }
  std::sort(est.begin(), est.end());
  std::sort(gaps.begin(), gaps.end());
  if (median_gap) *median_gap = quantile_sorted(gaps, 0.5);
  return quantile_sorted(est, 0.5);
}

}  // namespace

TEST_CASE("radius scaling invariance") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> scale(-6.0, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    for (const auto& m : builtin_families(gen)) {
      const double c = std::exp(scale(gen));
      CAPTURE(m.describe());
      CAPTURE(c);
      CHECK(radius_of(m.scaled(c)).value == radius_of(m).value);
      const auto w = radius_of(m.numeric_only());
      const auto ws = radius_of(m.scaled(c).numeric_only());
      if (std::isinf(w.value)) {
        CHECK(std::isinf(ws.value));
      } else {
        // c^(1/n) over the window [2048, 4096] moves the estimate by at most |ln c|/2048.
        CHECK(std::abs(std::log(ws.value / w.value)) <= std::abs(std::log(c)) / 2048 + 1e-12);
      }
    }
  }
}

TEST_CASE("polynomial prefactor leaves the order unchanged") {
  for (const auto& m : {SigmaModel::factorial_power(0.5), SigmaModel::factorial_power(1),
                        SigmaModel::super_geometric(0.5), SigmaModel::super_geometric(1)}) {
    const double base = order_of(m).value;
    for (double p : {1.0, 2.0}) {
      CAPTURE(m.describe());
      CAPTURE(p);
      const double w = order_of(m.with_power_prefactor(p).numeric_only()).value;
      CHECK(std::abs(w - base) <= 0.02 * base);
    }
  }
}

TEST_CASE("monotone comparison") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> a(0.3, 6.0), lift(1.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a1 = a(gen), a2 = a(gen);
    const auto small = SigmaModel::geometric(std::max(a1, a2));
    const auto big = SigmaModel::geometric(std::min(a1, a2));
    CHECK(radius_of(big).value <= radius_of(small).value);
    CHECK(radius_of(big.numeric_only()).value <= radius_of(small.numeric_only()).value);
    const auto lifted = small.scaled(lift(gen)).with_power_prefactor(1.0).numeric_only();
    CHECK(radius_of(lifted).value <= radius_of(small.numeric_only()).value);
  }
  CHECK(radius_of(SigmaModel::factorial_power(0.5)).value >= radius_of(SigmaModel::constant(2)).value);
}

TEST_CASE("type identity") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> alpha(0.2, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = SigmaModel::factorial_power(alpha(gen));
    for (bool numeric : {false, true}) {
      const auto s = numeric ? m.numeric_only() : m;
      const double rho = order_of(s).value;
      const double paper = paper_type_of(s, rho).value;
      const double levin = levin_type_of(paper, rho);
      CHECK(testing::close_rel(levin * std::exp(1.0) * rho, std::pow(paper, rho), 1e-12));
    }
  }
}

TEST_CASE("condition monotonicity in Q") {
  const std::vector<double> qs{1.05, 1.5, 2, 4, 10};
  for (const auto& tail : {TailModel::power(0.5), TailModel::power(2), TailModel::subgaussian(), TailModel::log_sqrt(),
                           TailModel::inverse_log()}) {
    CAPTURE(tail.label());
    const auto v = check_tail_summability(tail, qs);
    bool seen = false;
    for (const auto& pv : v.verdicts) {
      const bool conv = std::holds_alternative<Converges>(pv.verdict);
      if (seen) CHECK(conv);
      seen = seen || conv;
    }
  }
}

TEST_CASE("summability and log moment agree on power tails") {
  for (double b : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto tail = TailModel::power(b);
    const bool conv = check_tail_summability(tail, {1.1, 2, 10}).all_converge();
    const bool finite = std::isfinite(log_moment(tail, MomentVariant::log_e_plus_nu));
    CHECK(conv == finite);
    CHECK(conv);
  }
  CHECK(check_tail_summability(TailModel::log_sqrt(), {1.1, 2, 10}).all_diverge());
  CHECK(log_moment(TailModel::log_sqrt(), MomentVariant::log_e_plus_nu) == INFINITY);
}

TEST_CASE("prefix stability") {
  for (const auto& model : {CoefficientModel::isotropic_gaussian(SigmaModel::factorial_power(0.5)),
                            CoefficientModel::common_factor(TailModel::log_sqrt()),
                            CoefficientModel::mixture({{0.5, SigmaModel::constant(1)}, {0.5, SigmaModel::geometric(2)}}),
                            CoefficientModel::scaled_iid(SigmaModel::constant(1), TailModel::power(1),
                                                         BaseSampler::inverse_tail, PhaseRule::uniform)}) {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
      const auto a = sample(model, seed, 64);
      const auto b = sample(model, seed, 4096);
      for (std::size_t k = 0; k < 64; ++k) {
        CHECK(a.coefficients[k] == b.coefficients[k]);
        CHECK(a.log_abs[k] == b.log_abs[k]);
      }
    }
  }
}

TEST_CASE("seed determinism across worker counts") {
  ExperimentConfig c;
  c.model = CoefficientModel::isotropic_gaussian(SigmaModel::factorial_power(0.5));
  c.estimator = Estimator::order_coefficient;
  c.n_terms = 1024;
  c.replicates = 24;
  c.base_seed = 9;
  const std::string one = dump(to_json(run_experiment(c, 1)));
  for (std::size_t w : {2u, 3u, 8u}) CHECK(dump(to_json(run_experiment(c, w))) == one);
}

TEST_CASE("root-test consistency for Gaussian coefficients") {
  for (const auto& sigma : {SigmaModel::constant(1), SigmaModel::constant(5), SigmaModel::geometric(2),
                            SigmaModel::geometric(0.8)}) {
    CAPTURE(sigma.describe());
    const double expected = radius_of(sigma).value;
    const double m = median_radius(CoefficientModel::isotropic_gaussian(sigma), 100, 2000);
    CHECK(std::abs(m - expected) <= 0.03 * expected);
  }
}

TEST_CASE("window-growth stability") {
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (const std::string name : {"gaussian_radius", "mixture_radius", "common_factor_radius"}) {
    CAPTURE(name);
    auto config = build_experiment(ConfigFile::load(testing::source_path("configs/" + name + ".cfg")));
    const auto small = run_experiment(config, workers);
    config.n_terms *= 2;
    const auto large = run_experiment(config, workers);
    CHECK(std::abs(large.summary.median - small.summary.median) <= small.summary.stability_gap);
  }
}

TEST_CASE("counterexample sensitivity: divergent condition alongside radius one") {
  ExperimentConfig c;
  c.model = CoefficientModel::common_factor(TailModel::log_sqrt());
  c.replicates = 200;
  c.base_seed = 3700000;
  c.conditions.push_back({TailModel::log_sqrt(), {1.5, 2, 4}, "diverges"});
  const auto rep = run_experiment(c);
  CHECK(rep.conditions[0].verdict.all_diverge());
  CHECK(std::abs(rep.summary.median - 1.0) < 0.02);
}
