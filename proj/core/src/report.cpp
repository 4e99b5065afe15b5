#include "jel/report.hpp"

#include <cmath>

namespace jel {

using nlohmann::json;

json certificate_to_json(const Certificate& c) {
  return json{{"max_row_form", c.max_row_form}, {"weight_mass", c.weight_mass},
              {"inner_ok", c.inner_ok},         {"outer_ok", c.outer_ok},
              {"eps_used", c.eps_used},         {"logdet", c.logdet}};
}

Certificate certificate_from_json(const json& j) {
  Certificate c;
  c.max_row_form = j.at("max_row_form").get<double>();
  c.weight_mass = j.at("weight_mass").get<double>();
  c.inner_ok = j.at("inner_ok").get<bool>();
  c.outer_ok = j.at("outer_ok").get<bool>();
  c.eps_used = j.at("eps_used").get<double>();
  c.logdet = j.at("logdet").get<double>();
  return c;
}

json RunReport::to_json() const {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["algorithm"] = algorithm;
  j["config"] = config;
  j["instance"] = json{{"n", n}, {"d", d}, {"source", source}};
  j["wall_time_ms"] = wall_time_ms;
  j["iterations"] = iterations;
  j["residuals"] = residuals;
  j["certificate"] = certificate ? certificate_to_json(*certificate) : json(nullptr);
  if (space) {
    j["space"] = json{{"words_used", space->words_used},
                      {"bound", space->bound},
                      {"within_bound", space->within_bound}};
  } else {
    j["space"] = json(nullptr);
  }
  j["seeds"] = json{{"master", seed}};
  std::vector<std::vector<double>> qrows(static_cast<std::size_t>(quadratic.rows()));
  for (Eigen::Index i = 0; i < quadratic.rows(); ++i)
    qrows[static_cast<std::size_t>(i)].assign(quadratic.row(i).begin(),
                                              quadratic.row(i).end());
  j["result"] = json{{"quadratic", qrows},
                     {"weights", std::vector<double>(weights.begin(), weights.end())}};
  return j;
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.config = j.at("config");
  r.n = j.at("instance").at("n").get<Eigen::Index>();
  r.d = j.at("instance").at("d").get<Eigen::Index>();
  r.source = j.at("instance").at("source").get<std::string>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.residuals = j.at("residuals").get<std::vector<double>>();
  if (!j.at("certificate").is_null()) r.certificate = certificate_from_json(j.at("certificate"));
  if (!j.at("space").is_null()) {
    SpaceReport s;
    s.words_used = j.at("space").at("words_used").get<long>();
    s.bound = j.at("space").at("bound").get<long>();
    s.within_bound = j.at("space").at("within_bound").get<bool>();
    r.space = s;
  }
  r.seed = j.at("seeds").at("master").get<std::uint64_t>();
  const auto& qrows = j.at("result").at("quadratic");
  const auto dd = static_cast<Eigen::Index>(qrows.size());
  r.quadratic.resize(dd, dd);
  for (Eigen::Index i = 0; i < dd; ++i) {
    const auto row = qrows.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
    require(static_cast<Eigen::Index>(row.size()) == dd, "report: ragged quadratic");
    for (Eigen::Index jj = 0; jj < dd; ++jj) r.quadratic(i, jj) = row[static_cast<std::size_t>(jj)];
  }
  const auto wv = j.at("result").at("weights").get<std::vector<double>>();
  r.weights = Eigen::Map<const Vec>(wv.data(), static_cast<Eigen::Index>(wv.size()));
  return r;
}

namespace {

bool all_finite(const json& j) {
  if (j.is_number_float()) return std::isfinite(j.get<double>());
  if (j.is_array() || j.is_object()) {
    for (const auto& v : j)
      if (!all_finite(v)) return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> validate_report_json(const json& j) {
  const std::pair<const char*, const char*> required[] = {
      {"schema_version", "number"}, {"algorithm", "string"}, {"config", "object"},
      {"instance", "object"},       {"wall_time_ms", "number"}, {"iterations", "number"},
      {"residuals", "array"},       {"seeds", "object"},     {"result", "object"},
  };
  for (const auto& [key, type] : required) {
    if (!j.contains(key)) return std::string("missing field: ") + key;
    const auto& v = j.at(key);
    const std::string t = type;
    const bool ok = (t == "number" && v.is_number()) || (t == "string" && v.is_string()) ||
                    (t == "object" && v.is_object()) || (t == "array" && v.is_array());
    if (!ok) return std::string("field has wrong type: ") + key;
  }
  if (!j.contains("certificate")) return std::string("missing field: certificate");
  if (!j.contains("space")) return std::string("missing field: space");
  for (const char* key : {"n", "d", "source"})
    if (!j.at("instance").contains(key)) return std::string("instance missing: ") + key;
  if (!j.at("result").contains("quadratic") || !j.at("result").contains("weights"))
    return std::string("result missing quadratic/weights");
  if (!all_finite(j)) return std::string("non-finite numeric field");
  return std::nullopt;
}

}  // namespace jel
