#pragma once

#include "jel/fixed_point.hpp"
#include "jel/streaming.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace jel {

inline constexpr int kReportSchemaVersion = 1;

/// Machine-diffable run record. Serializes losslessly: doubles round-trip
/// bit-exactly through the JSON layer.
struct RunReport {
  std::string algorithm;
  nlohmann::json config;  // config echo
  Eigen::Index n = 0, d = 0;
  std::string source;  // input path or "generated:<kind>"
  double wall_time_ms = 0.0;
  int iterations = 0;
  std::vector<double> residuals;
  std::optional<Certificate> certificate;
  std::optional<SpaceReport> space;
  std::uint64_t seed = 0;
  Eigen::MatrixXd quadratic;
  Vec weights;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);
};

nlohmann::json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

/// Structural validation against the shipped report schema: required
/// fields present with the right types, all numerics finite.
/// Returns an explanation for the first violation, or nullopt when valid.
std::optional<std::string> validate_report_json(const nlohmann::json& j);

}  // namespace jel
