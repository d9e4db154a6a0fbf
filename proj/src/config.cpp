#include "rpslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/numeric.hpp"

namespace rpslab {

namespace {

using Section = ConfigFile::Section;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::config, msg); }

std::string where(const Section& s, const std::string& key) {
  return "[" + s.name + "] key '" + key + "' (line " + std::to_string(s.require(key).line) + ")";
}

double parse_number(const std::string& raw, const std::string& context) {
  const std::string v = trim(raw);
  if (v == "inf" || v == "+inf") return inf;
  if (v == "-inf") return -inf;
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || std::isnan(out)) {
    config_error(context + ": '" + v + "' is not a number");
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

// Library errors raised while building (bad parameters) are configuration
// errors from the CLI's point of view.
template <class F>
auto guarded(const Section& s, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    config_error("[" + s.name + "] (line " + std::to_string(s.line) + "): " + e.what());
  }
}

std::string suffix(const Section& s) {
  const auto dot = s.name.find('.');
  return dot == std::string::npos ? s.name : s.name.substr(dot + 1);
}

ConditionSpec experiment_condition(const Section& s) {
  s.only({"tail", "b", "value", "q", "expect"});
  return {build_tail(s), s.numbers("q"), s.text("expect")};
}

Target build_target(const Section& s) {
  s.only({"statistic", "center", "centers", "expected", "alternative", "tolerance", "relative",
          "min_fraction", "fraction", "source"});
  Target t;
  t.name = suffix(s);
  const std::string stat = s.text("statistic");
  if (stat == "median") {
    t.statistic = Statistic::median;
    t.centers = {s.number("center")};
  } else if (stat == "fraction_within") {
    t.statistic = Statistic::fraction_within;
    t.centers = s.numbers("centers");
    t.min_fraction = s.number_or("min_fraction", 1.0);
  } else if (stat == "fraction_nearest") {
    t.statistic = Statistic::fraction_nearest;
    t.centers = {s.number("expected"), s.number("alternative")};
    t.fraction = s.number("fraction");
  } else {
    config_error(where(s, "statistic") + ": unknown statistic '" + stat + "'");
  }
  t.tolerance = s.number("tolerance");
  t.relative = s.flag_or("relative", false);
  const std::string src = s.text_or("source", "analytic");
  if (src == "analytic") {
    t.source = TargetSource::analytic;
  } else if (src == "paper_example") {
    t.source = TargetSource::paper_example;
  } else {
    config_error(where(s, "source") + ": expected analytic or paper_example");
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

const ConfigFile::Entry& Section::require(const std::string& key) const {
  const auto it = entries.find(key);
  if (it == entries.end()) {
    config_error("[" + name + "] (line " + std::to_string(line) + "): missing key '" + key + "'");
  }
  return it->second;
}

std::string Section::text(const std::string& key) const { return require(key).value; }

std::string Section::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double Section::number(const std::string& key) const {
  return parse_number(require(key).value, where(*this, key));
}

double Section::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t Section::integer(const std::string& key) const {
  const std::string v = trim(require(key).value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    config_error(where(*this, key) + ": '" + v + "' is not a nonnegative integer");
  }
  return out;
}

std::uint64_t Section::integer_or(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Section::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = text(key);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  config_error(where(*this, key) + ": '" + v + "' is not a boolean");
}

std::vector<double> Section::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_number(item, where(*this, key)));
  return out;
}

void Section::only(const std::vector<std::string>& allowed) const {
  for (const auto& [key, entry] : entries) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      config_error("[" + name + "] line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = origin + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') config_error(at + "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) config_error(at + "empty section name");
      if (cfg.find(name)) config_error(at + "duplicate section [" + name + "]");
      cfg.sections_.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(at + "expected 'key = value'");
    if (cfg.sections_.empty()) config_error(at + "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_error(at + "empty key");
    auto& entries = cfg.sections_.back().entries;
    if (entries.count(key)) config_error(at + "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const Section* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const Section& ConfigFile::require(const std::string& name) const {
  if (const auto* s = find(name)) return *s;
  config_error(origin_ + ": missing section [" + name + "]");
}

std::vector<const Section*> ConfigFile::with_prefix(const std::string& prefix) const {
  std::vector<const Section*> out;
  for (const auto& s : sections_) {
    if (s.name.rfind(prefix + ".", 0) == 0) out.push_back(&s);
  }
  return out;
}

// ---------------------------------------------------------------------------

SigmaModel build_sigma(const Section& s) {
  const std::string fam = s.text("family");
  return guarded(s, [&] {
    SigmaModel m = SigmaModel::constant(1.0);
    if (fam == "constant") {
      s.only({"family", "c", "weight", "scale", "power_prefactor"});
      m = SigmaModel::constant(s.number("c"));
    } else if (fam == "geometric") {
      s.only({"family", "a", "weight", "scale", "power_prefactor"});
      m = SigmaModel::geometric(s.number("a"));
    } else if (fam == "factorial_power") {
      s.only({"family", "alpha", "weight", "scale", "power_prefactor"});
      m = SigmaModel::factorial_power(s.number("alpha"));
    } else if (fam == "super_geometric") {
      s.only({"family", "theta", "weight", "scale", "power_prefactor"});
      m = SigmaModel::super_geometric(s.number("theta"));
    } else if (fam == "list") {
      s.only({"family", "values", "extension", "weight", "scale", "power_prefactor"});
      const std::string ext = s.text_or("extension", "error_beyond_end");
      family::Extension e = family::Extension::error_beyond_end;
      if (ext == "repeat_last") {
        e = family::Extension::repeat_last;
      } else if (ext == "geometric_extrapolate") {
        e = family::Extension::geometric_extrapolate;
      } else if (ext != "error_beyond_end") {
        config_error(where(s, "extension") + ": unknown extension '" + ext + "'");
      }
      m = SigmaModel::explicit_list(s.numbers("values"), e);
    } else {
      config_error(where(s, "family") + ": unknown family '" + fam + "'");
    }
    if (s.has("scale")) m = m.scaled(s.number("scale"));
    if (s.has("power_prefactor")) m = m.with_power_prefactor(s.number("power_prefactor"));
    return m;
  });
}

TailModel build_tail(const Section& s) {
  const std::string kind = s.text("tail");
  return guarded(s, [&] {
    if (kind == "power") return TailModel::power(s.number("b"));
    if (kind == "subgaussian") return TailModel::subgaussian();
    if (kind == "log_sqrt") return TailModel::log_sqrt();
    if (kind == "inverse_log") return TailModel::inverse_log();
    if (kind == "point_mass") return TailModel::point_mass(s.number("value"));
    config_error(where(s, "tail") + ": unknown tail '" + kind + "'");
  });
}

CoefficientModel build_model(const ConfigFile& cfg) {
  const Section& m = cfg.require("model");
  const std::string kind = m.text("kind");
  if (kind == "isotropic_gaussian" || kind == "deterministic") {
    m.only({"kind"});
    const SigmaModel sigma = build_sigma(cfg.require("sigma"));
    return kind == "deterministic" ? CoefficientModel::deterministic(sigma)
                                   : CoefficientModel::isotropic_gaussian(sigma);
  }
  if (kind == "complex_gaussian") {
    m.only({"kind"});
    return CoefficientModel::complex_gaussian(build_sigma(cfg.require("sigma.beta")),
                                              build_sigma(cfg.require("sigma.gamma")));
  }
  if (kind == "mixture") {
    m.only({"kind"});
    std::vector<std::pair<double, SigmaModel>> branches;
    for (const auto* b : cfg.with_prefix("branch")) branches.emplace_back(b->number("weight"), build_sigma(*b));
    if (branches.empty()) config_error("[model] mixture needs at least one [branch.<name>] section");
    return guarded(m, [&] { return CoefficientModel::mixture(std::move(branches)); });
  }
  if (kind == "common_factor") {
    m.only({"kind", "tail", "b", "value"});
    return CoefficientModel::common_factor(build_tail(m));
  }
  if (kind == "scaled_iid") {
    m.only({"kind", "tail", "b", "value", "sampler", "phase"});
    const std::string sampler = m.text_or("sampler", "inverse_tail");
    const std::string phase = m.text_or("phase", "uniform");
    if (sampler != "inverse_tail" && sampler != "half_normal") {
      config_error(where(m, "sampler") + ": expected inverse_tail or half_normal");
    }
    if (phase != "uniform" && phase != "rademacher") {
      config_error(where(m, "phase") + ": expected uniform or rademacher");
    }
    std::optional<TailModel> tail;
    if (m.has("tail")) tail = build_tail(m);
    const SigmaModel sigma = build_sigma(cfg.require("sigma"));
    return guarded(m, [&] {
      return CoefficientModel::scaled_iid(
          sigma, tail, sampler == "half_normal" ? BaseSampler::half_normal : BaseSampler::inverse_tail,
          phase == "rademacher" ? PhaseRule::rademacher : PhaseRule::uniform);
    });
  }
  config_error(where(m, "kind") + ": unknown model kind '" + kind + "'");
}

TheoryConfig build_theory(const ConfigFile& cfg) {
  TheoryConfig t;
  t.sigma = build_sigma(cfg.require("sigma"));
  if (const auto* w = cfg.find("window")) {
    w->only({"n_min", "n_max"});
    t.window.n_min = w->integer_or("n_min", t.window.n_min);
    t.window.n_max = w->integer_or("n_max", t.window.n_max);
    if (t.window.n_min < 2 || t.window.n_max < 2 * t.window.n_min) {
      config_error("[window] needs n_min >= 2 and n_max >= 2 n_min");
    }
  }
  for (const auto* s : cfg.with_prefix("condition")) {
    s->only({"kind", "tail", "b", "value", "grid"});
    const std::string kind = s->text("kind");
    if (kind != "tail_summability" && kind != "order_upper" && kind != "order_lower") {
      config_error(where(*s, "kind") + ": expected tail_summability, order_upper or order_lower");
    }
    t.conditions.push_back({suffix(*s), kind, build_tail(*s), s->numbers("grid")});
  }
  for (const auto* s : cfg.with_prefix("moment")) {
    s->only({"tail", "b", "value", "variant"});
    const std::string v = s->text_or("variant", "log_e_plus_nu");
    MomentVariant variant = MomentVariant::log_e_plus_nu;
    if (v == "log_e_plus_tau") {
      variant = MomentVariant::log_e_plus_tau;
    } else if (v == "log_over_loglog") {
      variant = MomentVariant::log_over_loglog;
    } else if (v != "log_e_plus_nu") {
      config_error(where(*s, "variant") + ": unknown moment variant '" + v + "'");
    }
    t.moments.push_back({suffix(*s), build_tail(*s), variant});
  }
  return t;
}

ExperimentConfig build_experiment(const ConfigFile& cfg) {
  const Section& e = cfg.require("experiment");
  e.only({"name", "replicates", "base_seed", "n_terms", "window_fraction", "estimator", "r_grid",
          "rho", "eps", "multiplier"});
  ExperimentConfig c;
  c.name = e.text_or("name", "experiment");
  c.model = build_model(cfg);
  c.replicates = e.integer("replicates");
  c.base_seed = e.integer_or("base_seed", 0);
  c.n_terms = e.integer_or("n_terms", c.n_terms);
  c.window_fraction = e.number_or("window_fraction", c.window_fraction);
  const std::string est = e.text_or("estimator", "radius");
  if (est == "radius") {
    c.estimator = Estimator::radius;
  } else if (est == "order_coefficient") {
    c.estimator = Estimator::order_coefficient;
  } else if (est == "growth_order") {
    c.estimator = Estimator::growth_order;
  } else if (est == "growth_type") {
    c.estimator = Estimator::growth_type;
  } else {
    config_error(where(e, "estimator") + ": unknown estimator '" + est + "'");
  }
  if (e.has("r_grid")) c.r_grid = e.numbers("r_grid");
  c.rho = e.number_or("rho", 0.0);
  c.growth.eps = e.number_or("eps", c.growth.eps);
  c.growth.confidence_multiplier = e.number_or("multiplier", c.growth.confidence_multiplier);
  for (const auto* s : cfg.with_prefix("target")) c.targets.push_back(build_target(*s));
  for (const auto* s : cfg.with_prefix("condition")) c.conditions.push_back(experiment_condition(*s));
  try {
    c.validate();
  } catch (const Error& err) {
    config_error(cfg.origin() + ": " + err.what());
  }
  return c;
}

SweepConfig build_sweep(const ConfigFile& cfg) {
  const Section& s = cfg.require("sweep");
  s.only({"seed", "r_grid", "rho", "eps", "multiplier"});
  SweepConfig c;
  c.model = build_model(cfg);
  c.seed = s.integer_or("seed", 0);
  c.r_grid = s.numbers("r_grid");
  if (s.has("rho")) c.rho = s.number("rho");
  c.growth.eps = s.number_or("eps", c.growth.eps);
  c.growth.confidence_multiplier = s.number_or("multiplier", c.growth.confidence_multiplier);
  if (c.r_grid.size() < 3) {
    config_error(where(s, "r_grid") + ": a fit needs at least 3 grid points, got " +
                 std::to_string(c.r_grid.size()));
  }
  for (std::size_t i = 1; i < c.r_grid.size(); ++i) {
    if (!(c.r_grid[i] > c.r_grid[i - 1])) config_error(where(s, "r_grid") + ": must be strictly increasing");
  }
  if (c.r_grid.front() <= 0.0 || !std::isfinite(c.r_grid.back())) {
    config_error(where(s, "r_grid") + ": radii must be finite and > 0");
  }
  if (c.rho && (!(*c.rho > 0.0) || !std::isfinite(*c.rho))) {
    config_error(where(s, "rho") + ": must be finite and > 0");
  }
  return c;
}

}  // namespace rpslab
