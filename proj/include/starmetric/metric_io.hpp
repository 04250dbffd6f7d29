#pragma once

// Reading and writing metric files.
//
// Matrix format: whitespace-separated n×n matrix, one row per line, with an
// optional first line "labels: a b c ...". Blank lines and '#' comments are
// ignored.
//
// JSON format: {"points": ["a", ...], "distances": [[0, 1, "3/2"], ...]}.
// Numeric literals keep their source text so decimals convert exactly.

#include <json.hpp>

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/metric.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

enum class MetricFormat { matrix, json };

MetricFormat parse_format_name(std::string_view name);
MetricSpace parse_metric(std::string_view text, MetricFormat format);
std::string write_metric(const MetricSpace& m, MetricFormat format);

// ---------------------------------------------------------------------------

namespace detail {

/// SAX handler that builds a DOM in which every number is replaced by its
/// literal text, so "0.1" survives as the string "0.1" rather than a double.
class LiteralNumberSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  using json = nlohmann::json;

  bool null() override { return put(nullptr); }
  bool boolean(bool val) override { return put(val); }
  bool number_integer(number_integer_t val) override { return put(std::to_string(val)); }
  bool number_unsigned(number_unsigned_t val) override { return put(std::to_string(val)); }
  bool number_float(number_float_t, const string_t& s) override { return put(s); }
  bool string(string_t& val) override { return put(val); }
  bool binary(binary_t&) override { return put(nullptr); }

  bool start_object(std::size_t) override {
    return open(json::object());
  }
  bool key(string_t& val) override {
    key_ = val;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(json::array()); }
  bool end_array() override { return close(); }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    error_ = "JSON syntax error at byte " + std::to_string(position) + ": " + ex.what();
    return false;
  }

  const json& root() const { return root_; }
  const std::string& error() const { return error_; }

 private:
  bool put(json value) {
    if (stack_.empty()) {
      root_ = std::move(value);
    } else if (stack_.back()->is_array()) {
      stack_.back()->push_back(std::move(value));
    } else {
      (*stack_.back())[key_] = std::move(value);
    }
    return true;
  }

  bool open(json container) {
    json* slot = nullptr;
    if (stack_.empty()) {
      root_ = std::move(container);
      slot = &root_;
    } else if (stack_.back()->is_array()) {
      stack_.back()->push_back(std::move(container));
      slot = &stack_.back()->back();
    } else {
      slot = &((*stack_.back())[key_] = std::move(container));
    }
    stack_.push_back(slot);
    return true;
  }

  bool close() {
    stack_.pop_back();
    return true;
  }

  json root_;
  std::vector<json*> stack_;
  std::string key_;
  std::string error_;
};

inline MetricSpace parse_matrix_text(std::string_view text) {
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (!seen_content && first.rfind("labels:", 0) == 0) {
      seen_content = true;
      std::string rest = first.substr(7);
      if (!rest.empty()) labels.push_back(rest);
      for (std::string label; tokens >> label;) labels.push_back(label);
      if (labels.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty labels header");
      continue;
    }
    seen_content = true;
    std::vector<Rational> row;
    std::string token = first;
    do {
      try {
        row.push_back(parse_rational(token));
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } while (tokens >> token);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no matrix rows found");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size()) {
      throw ParseError("matrix row " + std::to_string(r) + " has " +
                       std::to_string(rows[r].size()) + " entries, expected " +
                       std::to_string(rows.size()));
    }
  }
  if (!labels.empty() && labels.size() != rows.size()) {
    throw ParseError("labels header names " + std::to_string(labels.size()) + " sites but matrix has " +
                     std::to_string(rows.size()) + " rows");
  }
  return MetricSpace::from_rows(rows, std::move(labels));
}

inline MetricSpace parse_json_text(std::string_view text) {
  LiteralNumberSax sax;
  if (!nlohmann::json::sax_parse(text, &sax)) throw ParseError(sax.error());
  const auto& root = sax.root();
  if (!root.is_object()) throw ParseError("JSON metric must be an object");
  if (!root.contains("distances") || !root["distances"].is_array()) {
    throw ParseError("JSON metric needs a \"distances\" array");
  }
  std::vector<std::string> labels;
  if (root.contains("points")) {
    if (!root["points"].is_array()) throw ParseError("\"points\" must be an array of strings");
    for (const auto& p : root["points"]) {
      if (!p.is_string()) throw ParseError("\"points\" must be an array of strings");
      labels.push_back(p.get<std::string>());
    }
  }
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : root["distances"]) {
    if (!row.is_array()) throw ParseError("each distances row must be an array");
    std::vector<Rational> parsed;
    for (const auto& entry : row) {
      if (!entry.is_string()) throw ParseError("distance entries must be numbers or \"p/q\" strings");
      parsed.push_back(parse_rational(entry.get<std::string>()));
    }
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) throw ParseError("empty distances array");
  if (!labels.empty() && labels.size() != rows.size()) {
    throw ParseError("\"points\" has " + std::to_string(labels.size()) + " names but distances has " +
                     std::to_string(rows.size()) + " rows");
  }
  return MetricSpace::from_rows(rows, std::move(labels));
}

inline bool default_labels(const MetricSpace& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.labels()[i] != std::to_string(i)) return false;
  }
  return true;
}

}  // namespace detail

inline MetricFormat parse_format_name(std::string_view name) {
  if (name == "matrix") return MetricFormat::matrix;
  if (name == "json") return MetricFormat::json;
  throw ParseError("unknown metric format '" + std::string(name) + "'");
}

inline MetricSpace parse_metric(std::string_view text, MetricFormat format) {
  return format == MetricFormat::json ? detail::parse_json_text(text)
                                      : detail::parse_matrix_text(text);
}

inline std::string write_metric(const MetricSpace& m, MetricFormat format) {
  const std::size_t n = m.size();
  if (format == MetricFormat::json) {
    nlohmann::ordered_json out;
    out["points"] = m.labels();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& x = m(i, j);
        if (x.get_den() == 1 && x.get_num().fits_slong_p()) {
          row.push_back(x.get_num().get_si());
        } else {
          row.push_back(to_fraction_string(x));
        }
      }
      rows.push_back(std::move(row));
    }
    out["distances"] = std::move(rows);
    return out.dump(1) + "\n";
  }
  std::string out;
  if (!detail::default_labels(m)) {
    out += "labels:";
    for (const auto& label : m.labels()) out += " " + label;
    out += "\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out += ' ';
      out += to_fraction_string(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace starmetric
