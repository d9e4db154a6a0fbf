#include "rpslab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "rpslab/config.hpp"
#include "rpslab/empirical_lab.hpp"
#include "rpslab/errors.hpp"
#include "rpslab/experiment.hpp"
#include "rpslab/format.hpp"
#include "rpslab/hashing.hpp"
#include "rpslab/json_io.hpp"
#include "rpslab/series_eval.hpp"
#include "rpslab/series_io.hpp"

namespace rpslab {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::string format = "both";
  std::size_t n_terms = 0;
};

class Outputs {
 public:
  Outputs(std::string subcommand, const Options& opt) : subcommand_(std::move(subcommand)), opt_(opt) {
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec) fail(ErrorKind::config, "cannot create output directory " + opt.out + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = fs::path(opt_.out) / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) fail(ErrorKind::config, "cannot write " + path.string());
    files_.push_back({{"name", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void finish(std::optional<std::uint64_t> base_seed) {
    Json m;
    m["subcommand"] = subcommand_;
    m["config"] = opt_.config;
    m["output_dir"] = opt_.out;
    m["base_seed"] = base_seed ? Json(*base_seed) : Json(nullptr);
    m["workers"] = opt_.workers;
    m["code_version"] = RPSLAB_VERSION;
    m["files"] = files_;
    const fs::path path = fs::path(opt_.out) / "manifest.json";
    std::ofstream f(path, std::ios::binary);
    f << dump(m);
    if (!f) fail(ErrorKind::config, "cannot write " + path.string());
  }

 private:
  std::string subcommand_;
  const Options& opt_;
  Json files_ = Json::array();
};

bool want_json(const Options& o) { return o.format != "csv"; }
bool want_csv(const Options& o) { return o.format != "json"; }

std::string moment_variant_name(MomentVariant v) {
  switch (v) {
    case MomentVariant::log_e_plus_nu: return "log_e_plus_nu";
    case MomentVariant::log_e_plus_tau: return "log_e_plus_tau";
    case MomentVariant::log_over_loglog: return "log_over_loglog";
  }
  return "?";
}

int cmd_theory(const Options& opt, std::ostream& out) {
  const TheoryConfig cfg = build_theory(ConfigFile::load(opt.config));
  Outputs files("theory", opt);

  const Characteristics ch = characterize(cfg.sigma, cfg.window);
  Json cj;
  cj["sigma"] = cfg.sigma.describe();
  cj["window"] = {{"n_min", cfg.window.n_min}, {"n_max", cfg.window.n_max}};
  const Json body = to_json(ch);
  for (const auto& [k, v] : body.items()) cj[k] = v;
  files.write("characteristics.json", dump(cj));

  Json vj;
  Json conds = Json::array();
  for (const auto& c : cfg.conditions) {
    ConditionVerdict v = c.kind == "tail_summability"
                             ? check_tail_summability(c.tail, c.grid)
                             : check_order_conditions(
                                   [&c](double, double log_u) { return c.tail.at_log(log_u); }, c.grid,
                                   c.kind == "order_upper" ? OrderDirection::upper : OrderDirection::lower);
    Json j;
    j["name"] = c.name;
    j["tail"] = c.tail.label();
    const Json body = to_json(v);
    for (const auto& [k, val] : body.items()) j[k] = val;
    conds.push_back(std::move(j));
  }
  vj["conditions"] = std::move(conds);
  Json moments = Json::array();
  for (const auto& m : cfg.moments) {
    Json j;
    j["name"] = m.name;
    j["tail"] = m.tail.label();
    j["variant"] = moment_variant_name(m.variant);
    try {
      const double v = log_moment(m.tail, m.variant);
      j["value"] = json_number(v);
      j["finite"] = std::isfinite(v);
    } catch (const InconclusiveError& e) {
      j["value"] = "inconclusive";
      j["partial_value"] = json_number(e.partial_value());
    }
    moments.push_back(std::move(j));
  }
  vj["moments"] = std::move(moments);
  files.write("verdicts.json", dump(vj));
  files.finish(std::nullopt);

  out << "radius " << shortest(ch.radius.value);
  if (ch.order) out << ", order " << shortest(ch.order->value);
  if (ch.paper_type) out << ", paper_type " << shortest(ch.paper_type->value);
  if (ch.levin_type) out << ", levin_type " << shortest(ch.levin_type->value);
  out << "\n";
  return exit_pass;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  ExperimentConfig cfg = build_experiment(ConfigFile::load(opt.config));
  if (opt.seed) cfg.base_seed = *opt.seed;
  Outputs files("verify", opt);
  const ExperimentReport rep = run_experiment(cfg, opt.workers);
  if (want_json(opt)) files.write("report.json", dump(to_json(rep)));
  if (want_csv(opt)) files.write("replicates.csv", replicates_csv(rep));
  files.finish(cfg.base_seed);

  out << rep.name << ": median " << shortest(rep.summary.median) << ", " << rep.summary.failed
      << " replicate errors\n";
  for (const auto& t : rep.targets) {
    out << "  target " << t.target.name << " observed " << shortest(t.observed) << " -> "
        << (t.pass ? "pass" : "fail") << "\n";
  }
  for (const auto& c : rep.conditions) {
    out << "  condition " << c.verdict.condition_id << " expected " << c.expected << " -> "
        << (c.pass ? "pass" : "fail") << "\n";
  }
  if (rep.error_budget_exceeded) return exit_replicate_budget;
  return rep.passed() ? exit_pass : exit_acceptance_fail;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  SweepConfig cfg = build_sweep(ConfigFile::load(opt.config));
  if (opt.seed) cfg.seed = *opt.seed;
  Outputs files("sweep", opt);
  const SigmaModel scale = cfg.model.scale_sequence();
  std::size_t n_terms = 2;
  for (double r : cfg.r_grid) {
    n_terms = std::max(n_terms, truncation_bound(scale, r, cfg.growth.eps,
                                                 cfg.growth.confidence_multiplier).truncation);
  }
  const SampleSeries series = sample(cfg.model, cfg.seed, n_terms);
  const GrowthFit order = empirical_order(series, scale, cfg.r_grid, cfg.growth);
  std::optional<GrowthFit> type;
  if (cfg.rho) type = empirical_type(series, scale, *cfg.rho, cfg.r_grid, cfg.growth);
  const GrowthFit& line = type ? *type : order;
  const double rho = cfg.rho ? *cfg.rho : order.estimate;

  if (want_csv(opt)) files.write("sweep.csv", sweep_csv(line, rho));
  if (want_json(opt)) {
    Json j;
    j["model"] = cfg.model.id();
    j["seed"] = cfg.seed;
    j["n_terms"] = n_terms;
    j["order_fit"] = to_json(order);
    if (type) {
      j["rho"] = json_number(*cfg.rho);
      j["type_fit"] = to_json(*type);
    }
    files.write("sweep_fit.json", dump(j));
  }
  files.finish(cfg.seed);
  out << "order " << shortest(order.estimate) << " (log-log slope " << shortest(order.loglog_slope) << ")";
  if (type) out << ", type " << shortest(type->estimate) << " at rho " << shortest(*cfg.rho);
  out << "\n";
  return exit_pass;
}

int cmd_sample(const Options& opt, std::ostream& out) {
  const ConfigFile file = ConfigFile::load(opt.config);
  const CoefficientModel model = build_model(file);
  std::uint64_t seed = 0;
  std::size_t n_terms = opt.n_terms;
  if (const auto* s = file.find("sample")) {
    s->only({"seed", "n_terms"});
    seed = s->integer_or("seed", 0);
    if (n_terms == 0) n_terms = s->integer_or("n_terms", 0);
  }
  if (opt.seed) seed = *opt.seed;
  if (n_terms == 0) fail(ErrorKind::config, "sample needs n_terms ([sample] n_terms or --n-terms)");
  Outputs files("sample", opt);
  const SampleSeries series = sample(model, seed, n_terms);
  if (want_csv(opt)) {
    std::ostringstream csv;
    write_series_csv(csv, series);
    files.write("series.csv", csv.str());
  }
  if (want_json(opt)) {
    std::ostringstream bin(std::ios::binary);
    write_series_binary(bin, series);
    files.write("series.bin", bin.str());
  }
  files.finish(seed);
  out << "sampled " << n_terms << " terms of " << model.id() << " with seed " << seed << "\n";
  return exit_pass;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::config:
    case ErrorKind::validation:
    case ErrorKind::argument:
      return exit_config_error;
    default:
      return exit_numerical_error;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random power series laboratory"};
  app.set_version_flag("--version", std::string(RPSLAB_VERSION));
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub, bool seeded, bool parallel) {
    sub->add_option("--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    if (seeded) sub->add_option("--seed", opt.seed, "base seed override");
    if (parallel) sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* theory = app.add_subcommand("theory", "deterministic characteristics and condition verdicts");
  common(theory, false, false);
  auto* verify = app.add_subcommand("verify", "run a seeded Monte Carlo experiment");
  common(verify, true, true);
  auto* sweep = app.add_subcommand("sweep", "max-modulus growth table and fit");
  common(sweep, true, false);
  auto* samp = app.add_subcommand("sample", "write one realization of a coefficient model");
  common(samp, true, false);
  samp->add_option("--n-terms", opt.n_terms, "number of coefficients");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_config_error;
  }

  try {
    if (*theory) return cmd_theory(opt, out);
    if (*verify) return cmd_verify(opt, out);
    if (*sweep) return cmd_sweep(opt, out);
    return cmd_sample(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_numerical_error;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace rpslab
