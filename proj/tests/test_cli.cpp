#include <sstream>

#include "json.hpp"
#include "rpslab/cli.hpp"
#include "support.hpp"

using namespace rpslab;
using testing::read_file;
using testing::scratch_dir;
using testing::source_path;
using testing::write_file;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json load_json(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

}  // namespace

TEST_CASE("theory subcommand") {
  const auto dir = scratch_dir("cli_theory");
  const auto r = cli({"theory", "--config", source_path("configs/theory_factorial_half.cfg"), "--out", dir.string()});
  REQUIRE(r.code == exit_pass);
  const auto ch = load_json(dir / "characteristics.json");
  CHECK(ch["radius"]["value"] == "inf");
  CHECK(ch["order"]["value"] == 2.0);
  CHECK(ch["paper_type"]["value"].get<double>() == doctest::Approx(1.6487).epsilon(1e-4));
  CHECK(ch["levin_type"]["value"] == 0.5);
  const auto v = load_json(dir / "verdicts.json");
  CHECK(v["conditions"][2]["verdicts"][0]["verdict"] == "diverges");
  CHECK(v["moments"][1]["value"] == "inf");

  const auto c = cli({"theory", "--config", source_path("configs/theory_constant.cfg"), "--out", dir.string()});
  REQUIRE(c.code == exit_pass);
  const auto k = load_json(dir / "characteristics.json");
  CHECK(k["radius"]["value"] == 1.0);
  CHECK(!k.contains("order"));
}

TEST_CASE("config errors exit 2 and name the key") {
  const auto dir = scratch_dir("cli_config");
  write_file(dir / "bad.cfg", "[sigma]\nalpha = 0.5\n");
  const auto r = cli({"theory", "--config", (dir / "bad.cfg").string(), "--out", dir.string()});
  CHECK(r.code == exit_config_error);
  CHECK(r.err.find("family") != std::string::npos);

  write_file(dir / "grid.cfg", "[sweep]\nr_grid = 4\n[model]\nkind = deterministic\n[sigma]\nfamily = factorial_power\nalpha = 1\n");
  CHECK(cli({"sweep", "--config", (dir / "grid.cfg").string(), "--out", dir.string()}).code == exit_config_error);
  CHECK(cli({"verify"}).code == exit_config_error);
  CHECK(cli({"bogus"}).code == exit_config_error);
  CHECK(cli({"verify", "--config", (dir / "nope.cfg").string()}).code == exit_config_error);
}

TEST_CASE("numerical-domain errors exit 4 with the module message") {
  const auto dir = scratch_dir("cli_numeric");
  write_file(dir / "const.cfg", "[sweep]\nr_grid = 4, 5, 6\n[model]\nkind = deterministic\n[sigma]\nfamily = list\nvalues = 1, 0, 0, 0\nextension = repeat_last\n");
  const auto r = cli({"sweep", "--config", (dir / "const.cfg").string(), "--out", dir.string()});
  CHECK(r.code == exit_numerical_error);
  write_file(dir / "tiny.cfg",
             "[sweep]\nr_grid = 4, 5, 6\n[model]\nkind = deterministic\n[sigma]\nfamily = factorial_power\nalpha = 1\nscale = 1e-9\n");
  const auto t = cli({"sweep", "--config", (dir / "tiny.cfg").string(), "--out", dir.string()});
  CHECK(t.code == exit_numerical_error);
  CHECK(t.err.find("r=4") != std::string::npos);
}

TEST_CASE("verify exit codes") {
  const auto dir = scratch_dir("cli_verify");
  const std::string base =
      "[experiment]\nreplicates = 20\nn_terms = 600\n[model]\nkind = isotropic_gaussian\n[sigma]\nfamily = constant\nc = 1\n";
  write_file(dir / "ok.cfg", base + "[target.m]\nstatistic = median\ncenter = 1\ntolerance = 0.05\n");
  write_file(dir / "zero.cfg", base + "[target.m]\nstatistic = median\ncenter = 1\ntolerance = 0\n");
  write_file(dir / "budget.cfg",
             "[experiment]\nreplicates = 20\nn_terms = 10\n[model]\nkind = isotropic_gaussian\n[sigma]\nfamily = constant\nc = 1\n");
  const auto ok = cli({"verify", "--config", (dir / "ok.cfg").string(), "--out", (dir / "ok").string()});
  CHECK(ok.code == exit_pass);
  CHECK(std::filesystem::exists(dir / "ok" / "report.json"));
  CHECK(std::filesystem::exists(dir / "ok" / "replicates.csv"));
  CHECK(cli({"verify", "--config", (dir / "zero.cfg").string(), "--out", (dir / "zero").string()}).code ==
        exit_acceptance_fail);
  CHECK(cli({"verify", "--config", (dir / "budget.cfg").string(), "--out", (dir / "budget").string()}).code ==
        exit_replicate_budget);

  const auto j = cli({"verify", "--config", (dir / "ok.cfg").string(), "--out", (dir / "json").string(), "--format", "json"});
  CHECK(j.code == exit_pass);
  CHECK(!std::filesystem::exists(dir / "json" / "replicates.csv"));
  CHECK(cli({"verify", "--config", (dir / "ok.cfg").string(), "--format", "xml"}).code == exit_config_error);
}

TEST_CASE("manifest lists every file with its hash and is written last") {
  const auto dir = scratch_dir("cli_manifest");
  const auto r = cli({"sweep", "--config", source_path("configs/sweep_exponential.cfg"), "--out", dir.string()});
  REQUIRE(r.code == exit_pass);
  const auto m = load_json(dir / "manifest.json");
  CHECK(m["subcommand"] == "sweep");
  REQUIRE(m["files"].size() == 2);
  for (const auto& f : m["files"]) {
    const std::string content = read_file(dir / f["name"].get<std::string>());
    CHECK(f["bytes"] == content.size());
    CHECK(f["sha256"].get<std::string>().size() == 64);
  }
  const auto t_manifest = std::filesystem::last_write_time(dir / "manifest.json");
  CHECK(t_manifest >= std::filesystem::last_write_time(dir / "sweep.csv"));
}

TEST_CASE("sweep of e^z matches the closed form") {
  const auto dir = scratch_dir("cli_sweep");
  REQUIRE(cli({"sweep", "--config", source_path("configs/sweep_exponential.cfg"), "--out", dir.string()}).code == exit_pass);
  std::istringstream csv(read_file(dir / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    double r = 0, m = 0, lnm = 0;
    char comma = 0;
    std::istringstream row(line);
    row >> r >> comma >> m >> comma >> lnm;
    CHECK(std::abs(lnm - r) <= 0.01 * r);
    ++rows;
  }
  CHECK(rows == 9);
}

TEST_CASE("byte-for-byte reproducibility") {
  const auto a = scratch_dir("cli_repro_a");
  const auto b = scratch_dir("cli_repro_b");
  REQUIRE(cli({"sweep", "--config", source_path("configs/sweep_planar.cfg"), "--out", a.string()}).code == exit_pass);
  REQUIRE(cli({"sweep", "--config", source_path("configs/sweep_planar.cfg"), "--out", b.string()}).code == exit_pass);
  CHECK(read_file(a / "sweep.csv") == read_file(b / "sweep.csv"));
  CHECK(read_file(a / "sweep_fit.json") == read_file(b / "sweep_fit.json"));

  const auto c = scratch_dir("cli_repro_c");
  const auto d = scratch_dir("cli_repro_d");
  const std::string cfg = source_path("configs/planar_order.cfg");
  REQUIRE(cli({"verify", "--config", cfg, "--out", c.string(), "--workers", "1"}).code == exit_pass);
  REQUIRE(cli({"verify", "--config", cfg, "--out", d.string(), "--workers", "4"}).code == exit_pass);
  CHECK(read_file(c / "report.json") == read_file(d / "report.json"));
  CHECK(read_file(c / "replicates.csv") == read_file(d / "replicates.csv"));
}

TEST_CASE("sample subcommand") {
  const auto dir = scratch_dir("cli_sample");
  const auto r = cli({"sample", "--config", source_path("configs/sweep_planar.cfg"), "--out", dir.string(), "--n-terms", "16"});
  REQUIRE(r.code == exit_pass);
  CHECK(read_file(dir / "series.csv").rfind("k,re,im\n", 0) == 0);
  CHECK(read_file(dir / "series.bin").rfind("RPSSER01", 0) == 0);
}

TEST_CASE("bundled fixture configs pass") {
  for (const char* name : {"mixture_radius", "common_factor_radius"}) {
    CAPTURE(name);
    const auto dir = scratch_dir(std::string("cli_") + name);
    const auto r = cli({"verify", "--config", source_path(std::string("configs/") + name + ".cfg"), "--out", dir.string()});
    CHECK(r.code == exit_pass);
  }
}
