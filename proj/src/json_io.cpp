#include "rpslab/json_io.hpp"

#include <cmath>
#include <sstream>

#include "rpslab/format.hpp"

namespace rpslab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return shortest(x);
}

Json to_json(const Quantity& q) {
  Json p;
  p["kind"] = q.provenance.kind == ProvenanceKind::analytic ? "analytic" : "windowed";
  if (q.provenance.kind == ProvenanceKind::windowed) {
    p["window"] = {{"n_min", q.provenance.window.n_min}, {"n_max", q.provenance.window.n_max}};
    p["residual_spread"] = json_number(q.provenance.residual_spread);
    p["tolerance"] = json_number(q.provenance.tolerance());
    if (q.provenance.raw_tail_sup) p["raw_tail_sup"] = json_number(*q.provenance.raw_tail_sup);
  }
  Json j;
  j["value"] = json_number(q.value);
  j["provenance"] = std::move(p);
  return j;
}

Json to_json(const Characteristics& c) {
  Json j;
  j["radius"] = to_json(c.radius);
  if (c.order) j["order"] = to_json(*c.order);
  if (c.paper_type) j["paper_type"] = to_json(*c.paper_type);
  if (c.levin_type) j["levin_type"] = to_json(*c.levin_type);
  return j;
}

Json to_json(const SeriesVerdict& v) {
  Json j;
  j["verdict"] = verdict_name(v);
  if (const auto* c = std::get_if<Converges>(&v)) {
    j["partial_sum"] = json_number(c->partial_sum);
    j["remainder_bound"] = json_number(c->remainder_bound);
  } else if (const auto* d = std::get_if<Diverges>(&v)) {
    const auto& w = d->witness;
    Json wj;
    wj["kind"] = w.kind == DivergenceWitness::Kind::threshold ? "threshold" : "harmonic";
    wj["lower_bound"] = json_number(w.lower_bound);
    wj["harmonic_constant"] = json_number(w.harmonic_constant);
    wj["reached_index"] = json_number(w.reached_index);
    j["witness"] = std::move(wj);
  } else if (const auto* i = std::get_if<Inconclusive>(&v)) {
    j["partial_sum"] = json_number(i->partial_sum);
    j["terms_used"] = i->terms_used;
  }
  return j;
}

Json to_json(const ConditionVerdict& v) {
  Json j;
  j["condition"] = v.condition_id;
  j["parameter"] = v.parameter_name;
  Json list = Json::array();
  for (const auto& pv : v.verdicts) {
    Json e;
    e["value"] = json_number(pv.parameter);
    const Json body = to_json(pv.verdict);
    for (const auto& [k, val] : body.items()) e[k] = val;
    list.push_back(std::move(e));
  }
  j["verdicts"] = std::move(list);
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.name;
  j["model"] = r.model_id;
  j["estimator"] = to_string(r.estimator);
  j["replicates"] = r.replicates;
  j["n_terms"] = r.n_terms;
  j["passed"] = r.passed();

  Json s;
  s["succeeded"] = r.summary.succeeded;
  s["failed"] = r.summary.failed;
  s["median"] = json_number(r.summary.median);
  s["q1"] = json_number(r.summary.q1);
  s["q3"] = json_number(r.summary.q3);
  s["iqr"] = json_number(r.summary.iqr);
  s["min"] = json_number(r.summary.min);
  s["max"] = json_number(r.summary.max);
  s["stability_gap"] = json_number(r.summary.stability_gap);
  s["error_budget_exceeded"] = r.error_budget_exceeded;
  j["summary"] = std::move(s);

  Json targets = Json::array();
  for (const auto& t : r.targets) {
    Json tj;
    tj["name"] = t.target.name;
    tj["statistic"] = to_string(t.target.statistic);
    Json centers = Json::array();
    for (double c : t.target.centers) centers.push_back(json_number(c));
    tj["centers"] = std::move(centers);
    tj["tolerance"] = json_number(t.target.tolerance);
    tj["relative"] = t.target.relative;
    if (t.target.statistic == Statistic::fraction_within) tj["min_fraction"] = json_number(t.target.min_fraction);
    if (t.target.statistic == Statistic::fraction_nearest) tj["fraction"] = json_number(t.target.fraction);
    tj["source"] = to_string(t.target.source);
    tj["observed"] = json_number(t.observed);
    tj["verdict"] = t.pass ? "pass" : "fail";
    targets.push_back(std::move(tj));
  }
  j["targets"] = std::move(targets);

  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    Json cj = to_json(c.verdict);
    cj["expected"] = c.expected;
    cj["verdict"] = c.pass ? "pass" : "fail";
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);

  Json prov;
  prov["config_hash"] = r.config_hash;
  prov["base_seed"] = r.base_seed;
  prov["seed_policy"] = "base_seed + replicate_index";
  prov["code_version"] = r.code_version;
  j["provenance"] = std::move(prov);
  return j;
}

Json to_json(const GrowthFit& fit) {
  Json j;
  j["estimate"] = json_number(fit.estimate);
  j["coefficient"] = json_number(fit.coefficient);
  j["intercept"] = json_number(fit.intercept);
  j["fit_residual"] = json_number(fit.fit_residual);
  j["loglog_slope"] = json_number(fit.loglog_slope);
  Json pts = Json::array();
  for (const auto& p : fit.points) {
    pts.push_back({{"r", json_number(p.r)},
                   {"max_modulus", json_number(p.max_modulus)},
                   {"truncation", p.truncation},
                   {"angular_points", p.angular_points}});
  }
  j["points"] = std::move(pts);
  return j;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string replicates_csv(const ExperimentReport& r) {
  std::ostringstream o;
  o << "index,seed,estimate,stability_gap,fit_residual,skipped,error\n";
  for (const auto& x : r.results) {
    o << x.index << ',' << x.seed << ',' << (x.estimate ? shortest(*x.estimate) : "") << ','
      << shortest(x.stability_gap) << ',' << shortest(x.fit_residual) << ',' << x.skipped << ','
      << csv_field(x.error) << '\n';
  }
  return o.str();
}

std::string sweep_csv(const GrowthFit& fit, double rho) {
  std::ostringstream o;
  o << "r,max_modulus,ln_max_modulus,ln_ln_max_modulus,fitted_ln_max_modulus\n";
  for (const auto& p : fit.points) {
    const double ln_m = std::log(p.max_modulus);
    o << shortest(p.r) << ',' << shortest(p.max_modulus) << ',' << shortest(ln_m) << ','
      << shortest(std::log(ln_m)) << ','
      << shortest(fit.coefficient * std::pow(p.r, rho) + fit.intercept) << '\n';
  }
  return o.str();
}

}  // namespace rpslab
