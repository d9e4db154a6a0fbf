#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpslab/coeff_samplers.hpp"
#include "rpslab/experiment.hpp"
#include "rpslab/sigma_model.hpp"
#include "rpslab/tail_model.hpp"
#include "rpslab/theory_engine.hpp"

namespace rpslab {

/// Line-oriented configuration: `[section]` headers, `key = value` pairs,
/// `#` or `;` comments. Numbers accept "inf". Errors are Error(config) and
/// carry the line number or the section/key at fault.
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    const Entry& require(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::uint64_t integer(const std::string& key) const;
    std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    /// Rejects keys outside `allowed`, naming the first offender.
    void only(const std::vector<std::string>& allowed) const;
  };

  static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
  static ConfigFile load(const std::string& path);

  const std::vector<Section>& sections() const noexcept { return sections_; }
  const Section* find(const std::string& name) const;
  const Section& require(const std::string& name) const;
  /// Sections named `prefix.<suffix>`, in file order.
  std::vector<const Section*> with_prefix(const std::string& prefix) const;
  const std::string& origin() const noexcept { return origin_; }

 private:
  std::string origin_;
  std::vector<Section> sections_;
};

SigmaModel build_sigma(const ConfigFile::Section& s);
TailModel build_tail(const ConfigFile::Section& s);
CoefficientModel build_model(const ConfigFile& cfg);

struct MomentSpec {
  std::string name;
  TailModel tail;
  MomentVariant variant = MomentVariant::log_e_plus_nu;
};

struct TheoryConditionSpec {
  std::string name;
  std::string kind;  // tail_summability | order_upper | order_lower
  TailModel tail;
  std::vector<double> grid;
};

struct TheoryConfig {
  SigmaModel sigma = SigmaModel::constant(1.0);
  Window window;
  std::vector<TheoryConditionSpec> conditions;
  std::vector<MomentSpec> moments;
};

struct SweepConfig {
  CoefficientModel model = CoefficientModel::isotropic_gaussian(SigmaModel::constant(1.0));
  std::uint64_t seed = 0;
  std::vector<double> r_grid;
  std::optional<double> rho;  // fixed exponent for the fitted line; else fitted
  GrowthPolicy growth;
};

TheoryConfig build_theory(const ConfigFile& cfg);
ExperimentConfig build_experiment(const ConfigFile& cfg);
SweepConfig build_sweep(const ConfigFile& cfg);

}  // namespace rpslab
