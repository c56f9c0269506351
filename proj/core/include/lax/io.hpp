#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lax/flow.hpp"

namespace lax {

using Json = nlohmann::json;

// Schema violation; carries the offending field path for diagnostics.
class ConfigError : public LaxError {
 public:
  explicit ConfigError(const std::string& path, const std::string& what)
      : LaxError("config error at " + path + ": " + what) {}
};

// Complex numbers serialize as {re, im}; matrices as row-major nested
// arrays of such records.
Json complex_to_json(Complex v);
Complex complex_from_json(const Json& j, const std::string& path);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& path);

Json lax_config_to_json(const LaxConfig& cfg);
Json lax_element_to_json(const LaxElement& l);
LaxElement lax_element_from_json(ConfigPtr cfg, const Json& j);
Json m_operator_to_json(const MOperator& m);
Json flow_state_to_json(const FlowState& s);

// Single-writer CSV emitter with locale-independent, reproducible
// formatting (%.17g round-trip).
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);
  static std::string num(Complex v);  // "re<sep>im" is two columns; this is "re+imi"

 private:
  std::ofstream out_;
  size_t width_;
};

}  // namespace lax
