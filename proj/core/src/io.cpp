#include "lax/io.hpp"

#include <cstdio>

namespace lax {

Json complex_to_json(Complex v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw ConfigError(path, "expected a {re, im} record");
  if (!j["re"].is_number() || !j["im"].is_number())
    throw ConfigError(path, "re/im must be numbers");
  return {j["re"].get<double>(), j["im"].get<double>()};
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nested array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw ConfigError(path + "[" + std::to_string(i) + "]", "ragged matrix rows");
    for (int c = 0; c < cols; ++c)
      m(i, c) = complex_from_json(j[i][c], path + "[" + std::to_string(i) + "][" +
                                               std::to_string(c) + "]");
  }
  return m;
}

Json lax_config_to_json(const LaxConfig& cfg) {
  Json j;
  j["algebra"] = {{"family", std::string(1, "ABCD"[static_cast<int>(cfg.alg.family)])},
                  {"n", cfg.alg.rank}};
  j["punctures"] = Json::array();
  for (const auto& p : cfg.punctures) {
    Json e = complex_to_json(p.z);
    e["mult"] = p.mult;
    j["punctures"].push_back(e);
  }
  j["tyurin"] = Json::array();
  for (const auto& t : cfg.tyurin) {
    Json e = complex_to_json(t.z);
    e["h"] = Json::array();
    for (int i = 0; i < t.h.diag.size(); ++i) e["h"].push_back(t.h.diag(i));
    e["conjugator"] = matrix_to_json(t.conjugator);
    j["tyurin"].push_back(e);
  }
  return j;
}

Json lax_element_to_json(const LaxElement& l) {
  Json j;
  j["config"] = lax_config_to_json(*l.cfg);
  j["constant"] = matrix_to_json(l.constant);
  j["at_puncture"] = Json::array();
  for (const auto& block : l.at_puncture) {
    Json b = Json::array();
    for (const auto& m : block) b.push_back(matrix_to_json(m));
    j["at_puncture"].push_back(b);
  }
  j["at_tyurin"] = Json::array();
  for (const auto& block : l.at_tyurin) {
    Json b = Json::array();
    for (const auto& m : block) b.push_back(matrix_to_json(m));
    j["at_tyurin"].push_back(b);
  }
  return j;
}

LaxElement lax_element_from_json(ConfigPtr cfg, const Json& j) {
  LaxElement l = LaxElement::zero(cfg);
  l.constant = matrix_from_json(j.at("constant"), "constant");
  auto read_blocks = [&](const char* key, std::vector<std::vector<Matrix>>& dst) {
    const Json& src = j.at(key);
    if (src.size() != dst.size()) throw ConfigError(key, "block count mismatch");
    for (size_t i = 0; i < dst.size(); ++i) {
      if (src[i].size() != dst[i].size())
        throw ConfigError(std::string(key) + "[" + std::to_string(i) + "]",
                          "pole depth mismatch");
      for (size_t r = 0; r < dst[i].size(); ++r)
        dst[i][r] = matrix_from_json(src[i][r], key);
    }
  };
  read_blocks("at_puncture", l.at_puncture);
  read_blocks("at_tyurin", l.at_tyurin);
  return l;
}

Json m_operator_to_json(const MOperator& m) {
  Json j;
  j["puncture"] = m.a.puncture_index;
  j["m"] = m.a.m;
  j["at_p"] = Json::array();
  for (const auto& c : m.at_p) j["at_p"].push_back(matrix_to_json(c));
  j["tyurin"] = Json::array();
  for (size_t g = 0; g < m.nu.size(); ++g) {
    Json e;
    e["nu"] = complex_to_json(m.nu[g]);
    e["coeffs"] = Json::array();
    for (const auto& c : m.at_tyurin[g]) e["coeffs"].push_back(matrix_to_json(c));
    j["tyurin"].push_back(e);
  }
  j["matching_residual"] = m.matching_residual;
  j["tangency_residual"] = m.tangency_residual;
  return j;
}

Json flow_state_to_json(const FlowState& s) {
  Json j;
  j["t"] = s.t;
  j["element"] = lax_element_to_json(s.l);
  return j;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), width_(columns.size()) {
  if (!out_) throw LaxError("CsvWriter: cannot open " + path);
  for (size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw LaxError("CsvWriter: column count mismatch");
  for (size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::num(Complex v) {
  return num(v.real()) + (v.imag() < 0 ? "-" : "+") + num(std::abs(v.imag())) + "i";
}

}  // namespace lax
