#include "rpslab/summability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"

namespace rpslab {

namespace {

constexpr double monotone_slack = 1e-12;

double block_integral(const std::function<double(double)>& f, double a, double b) {
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-10, &error);
}

double checked_term(const std::function<double(double)>& term, double x) {
  const double v = term(x);
  if (!(v >= 0.0 && v <= 1.0)) {
    fail(ErrorKind::model_evaluation,
         "term " + shortest(v) + " at index " + shortest(x) + " lies outside [0,1]");
  }
  return v;
}

}  // namespace

const char* verdict_name(const SeriesVerdict& verdict) noexcept {
  switch (verdict.index()) {
    case 0: return "converges";
    case 1: return "diverges";
    default: return "inconclusive";
  }
}

BlockScan scan_blocks(const std::function<double(double)>& f, double start, double first_width,
                      double base, bool monotone, double limit) {
  BlockScan scan;
  std::vector<double> blocks;
  double a = start;
  double width = first_width;
  double f_a = f(a);
  while (true) {
    const double b = a + width;
    const double f_b = f(b);
    double s;
    if (monotone) {
      if (f_b > f_a + monotone_slack) {
        fail(ErrorKind::tail_model, "terms increase between " + shortest(a) + " and " + shortest(b));
      }
      s = f_a == 0.0 ? 0.0 : std::clamp(block_integral(f, a, b), width * f_b, width * f_a);
    } else {
      s = block_integral(f, a, b);
    }
    blocks.push_back(s);
    scan.total += s;
    scan.reached = b;

    const double running = base + scan.total;
    if (running > divergence_threshold) {
      scan.outcome = BlockScan::Outcome::threshold;
      return scan;
    }
    if (s == 0.0 && f_b == 0.0) {
      scan.outcome = BlockScan::Outcome::converged;
      return scan;
    }
    const std::size_t i = blocks.size() - 1;
    if (i >= 1 && std::abs(s) <= 0.5 * std::abs(blocks[i - 1]) &&
        std::abs(s) <= 1e-16 * std::max(std::abs(running), 1e-300)) {
      // Later blocks shrink at least geometrically: their sum is below s.
      scan.total += std::abs(s);
      scan.outcome = BlockScan::Outcome::converged;
      return scan;
    }
    if (b > limit) break;
    a = b;
    f_a = f_b;
    width *= 2.0;
  }

  // Harmonic comparison on block indices: S_i >= c / i with c not decaying.
  const std::size_t count = blocks.size();
  auto min_scaled = [&](std::size_t lo, std::size_t hi) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi && j <= count; ++j) {
      m = std::min(m, static_cast<double>(j) * blocks[j - 1]);
    }
    return m;
  };
  const double last = min_scaled(count / 10, count);
  const double previous = min_scaled(count / 100, count / 10 - 1);
  scan.harmonic_constant = last;
  if (std::isfinite(last) && std::isfinite(previous) && last > 0.0 && last >= 0.9 * previous) {
    scan.outcome = BlockScan::Outcome::harmonic;
  }
  return scan;
}

SeriesVerdict classify_series(const std::function<double(double)>& term, std::uint64_t max_terms) {
  if (max_terms < 1) fail(ErrorKind::argument, "max_terms must be >= 1");
  double partial = 0.0;
  double previous = 1.0;
  for (std::uint64_t k = 1; k <= max_terms; ++k) {
    const double v = checked_term(term, static_cast<double>(k));
    if (v > previous + monotone_slack) {
      fail(ErrorKind::tail_model, "terms increase at index " + std::to_string(k));
    }
    previous = v;
    partial += v;
    if (partial > divergence_threshold) {
      return Diverges{{DivergenceWitness::Kind::threshold, partial, 0.0, static_cast<double>(k)}};
    }
    if (v == 0.0) return Converges{partial, 0.0};
  }

  const double start = static_cast<double>(max_terms);
  const double last_term = previous;
  const auto f = [&](double x) { return checked_term(term, x); };
  // sum_{k>K} a(k) >= int_{K+1}^{X} a >= int_K^X a - a(K), so the running
  // total seen by the scan is a certified lower bound on the whole sum.
  const double base = partial - last_term;
  const BlockScan scan = scan_blocks(f, start, start, base, true);
  const double lower = std::max(partial, base + scan.total);
  switch (scan.outcome) {
    case BlockScan::Outcome::converged:
      if (scan.total < 1.0) return Converges{partial, scan.total};
      return Inconclusive{partial, max_terms};
    case BlockScan::Outcome::threshold:
      return Diverges{{DivergenceWitness::Kind::threshold, lower, 0.0, scan.reached}};
    case BlockScan::Outcome::harmonic:
      return Diverges{{DivergenceWitness::Kind::harmonic, lower, scan.harmonic_constant, scan.reached}};
    case BlockScan::Outcome::exhausted:
      break;
  }
  return Inconclusive{partial, max_terms};
}

}  // namespace rpslab
