// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <cmath>
#include <sstream>

#include "invacheck/version.hpp"

namespace invacheck::cli {

namespace {

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (double c : v) a.push_back(num(c));
  return a;
}

json mat_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const ShapeReport& r) {
  json j;
  j["target"] = r.target;
  j["verdict"] = to_string(r.verdict);
  j["certainty"] = to_string(r.certainty);
  j["min_eigenvalue_seen"] = num(r.min_eigenvalue_seen);
  j["max_eigenvalue_seen"] = num(r.max_eigenvalue_seen);
  j["samples_used"] = r.samples_used;
  j["invalid_samples"] = r.invalid_samples;
  if (r.witness) {
    j["witness"] = {{"point", vec_json(r.witness->point)},
                    {"min_eigenvalue", num(r.witness->min_eigenvalue)},
                    {"max_eigenvalue", num(r.witness->max_eigenvalue)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const Certificate& c) {
  json j;
  switch (c.kind) {
    case Certificate::Kind::HMatrix:
      j["kind"] = "H";
      j["H"] = mat_json(c.H);
      break;
    case Certificate::Kind::Beta:
      j["kind"] = "beta";
      j["beta"] = c.value;
      break;
    case Certificate::Kind::Alpha:
      j["kind"] = "alpha";
      j["alpha"] = c.value;
      break;
  }
  j["mode"] = to_string(c.mode);
  return j;
}

json to_json(const CheckVerdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["exactness"] = to_string(v.exactness);
  j["certificate"] = v.certificate ? to_json(*v.certificate) : json(nullptr);
  j["residual_minima"] = json::array();
  for (double r : v.residual_minima) j["residual_minima"].push_back(num(r));
  j["counterexample"] = v.counterexample ? vec_json(*v.counterexample) : json(nullptr);
  j["hypotheses"] = json::array();
  for (const auto& h : v.hypotheses) j["hypotheses"].push_back(to_json(h));
  if (v.boundary) {
    json b;
    b["overall_max"] = num(v.boundary->overall_max);
    b["maximizer"] = vec_json(v.boundary->maximizer);
    b["faces"] = json::array();
    for (const auto& f : v.boundary->faces) {
      json fj;
      fj["face"] = f.face;
      fj["empty"] = f.empty;
      fj["max_value"] = f.empty ? json(nullptr) : num(f.max_value);
      fj["maximizer"] = vec_json(f.maximizer);
      fj["samples"] = f.samples;
      b["faces"].push_back(std::move(fj));
    }
    j["boundary"] = std::move(b);
  } else {
    j["boundary"] = nullptr;
  }
  j["domain_flag"] = v.domain_flag;
  j["notes"] = v.notes;
  return j;
}

json to_json(const EscapeReport& r) {
  json j;
  j["escaped"] = r.escaped;
  j["domain_event"] = r.domain_event;
  j["step"] = r.step;
  j["time"] = num(r.time);
  j["start"] = vec_json(r.start);
  j["point"] = vec_json(r.point);
  j["margin"] = num(r.margin);
  return j;
}

json to_json(const FalsifyOutcome& o) {
  json j;
  j["samples"] = o.samples;
  j["domain_events"] = o.domain_events;
  j["escape"] = o.escape ? to_json(*o.escape) : json(nullptr);
  return j;
}

json make_report(const std::string& command, const ProblemSpec& spec, std::uint64_t seed,
                 const std::optional<CheckVerdict>& verdict,
                 const std::optional<FalsifyOutcome>& oracle,
                 const std::vector<ShapeReport>& probes,
                 const std::optional<CheckVerdict>& epsilon_check,
                 const std::vector<std::string>& extra_notes) {
  json j;
  j["tool"] = "invacheck";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["problem"] = spec.echo;
  j["verdict"] = verdict ? to_json(*verdict) : json(nullptr);
  j["oracle_crosscheck"] = oracle ? to_json(*oracle) : json(nullptr);
  if (!probes.empty()) {
    j["probes"] = json::array();
    for (const auto& p : probes) j["probes"].push_back(to_json(p));
  } else {
    j["probes"] = nullptr;
  }
  j["epsilon_check"] = epsilon_check ? to_json(*epsilon_check) : json(nullptr);
  j["notes"] = extra_notes;
  return j;
}

std::string summarize(const json& report, double wall_seconds) {
  std::ostringstream os;
  os << "invacheck " << report["version"].get<std::string>() << " — "
     << report["command"].get<std::string>() << " (seed " << report["seed"] << ")\n";
  const json& v = report["verdict"];
  if (!v.is_null()) {
    os << "verdict: " << v["status"].get<std::string>() << " ("
       << v["exactness"].get<std::string>() << ")\n";
    if (v.contains("residual_minima") && !v["residual_minima"].empty()) {
      os << "residual minima:";
      for (const auto& r : v["residual_minima"]) os << " " << r.dump();
      os << "\n";
    }
    if (!v["counterexample"].is_null()) os << "counterexample: " << v["counterexample"].dump() << "\n";
    for (const auto& nline : v["notes"]) os << "note: " << nline.get<std::string>() << "\n";
  }
  const json& oc = report["oracle_crosscheck"];
  if (!oc.is_null()) {
    os << "oracle: " << oc["samples"] << " samples, " << oc["domain_events"] << " domain events, "
       << (oc["escape"].is_null() ? "no escape" : "ESCAPE FOUND") << "\n";
  }
  if (!report["probes"].is_null()) {
    for (const auto& p : report["probes"])
      os << "probe " << p["target"].get<std::string>() << ": " << p["verdict"].get<std::string>()
         << " (" << p["certainty"].get<std::string>() << ")\n";
  }
  for (const auto& nline : report["notes"]) os << "note: " << nline.get<std::string>() << "\n";
  os << "wall time: " << wall_seconds << " s\n";
  return os.str();
}

}  // namespace invacheck::cli
