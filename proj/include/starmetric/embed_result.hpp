#pragma once

// Star files, schema 1:
//
//   {
//     "schema": 1,
//     "lambda_star": "8/5",
//     "lambda_star_decimal": "1.6000000000000000000",
//     "sites": ["a", "b", ...],
//     "hub_edges": {"a": {"exact": "1/2", "decimal": "0.5000..."}, ...},
//     "input_digest": "sha256:...",
//     "timing": {"seconds": 0.0012},
//     "search": {...}
//   }
//
// Exact fields are authoritative; decimals are for people.

#include <json.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/metric.hpp"
#include "starmetric/metric_io.hpp"
#include "starmetric/parametric.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

inline constexpr int kStarSchemaVersion = 1;

struct EmbedResult {
  StarEmbedding star;
  std::string input_digest;
  double seconds = 0.0;
  SearchStats stats;
};

inline nlohmann::ordered_json exact_and_decimal(const Rational& x) {
  nlohmann::ordered_json out;
  out["exact"] = to_fraction_string(x);
  out["decimal"] = to_decimal_string(x);
  return out;
}

inline std::string write_embed_result(const EmbedResult& r) {
  nlohmann::ordered_json out;
  out["schema"] = kStarSchemaVersion;
  out["lambda_star"] = to_fraction_string(r.star.lambda_star);
  out["lambda_star_decimal"] = to_decimal_string(r.star.lambda_star);
  out["sites"] = r.star.labels;
  nlohmann::ordered_json hubs = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < r.star.labels.size(); ++v) {
    hubs[r.star.labels[v]] = exact_and_decimal(r.star.hub_len[v]);
  }
  out["hub_edges"] = std::move(hubs);
  out["input_digest"] = r.input_digest;
  out["timing"] = {{"seconds", r.seconds}};
  out["search"] = {{"kernel", r.stats.kernel},
                   {"vertices", r.stats.vertex_count},
                   {"iterations", r.stats.iterations},
                   {"probes", r.stats.probes},
                   {"max_envelope_breakpoints", r.stats.max_envelope_breakpoints}};
  return out.dump(2) + "\n";
}

namespace detail {

inline Rational exact_field(const nlohmann::json& value, const std::string& what) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_object() && value.contains("exact") && value["exact"].is_string()) {
    return parse_rational(value["exact"].get<std::string>());
  }
  throw ParseError(what + " must be a number, a \"p/q\" string or {\"exact\": ...}");
}

}  // namespace detail

/// Reads a star file, ordering hub lengths by `labels`. Every label must
/// appear in "hub_edges" and nothing else may.
inline StarEmbedding parse_star(std::string_view text, const std::vector<std::string>& labels) {
  detail::LiteralNumberSax sax;
  if (!nlohmann::json::sax_parse(text, &sax)) throw ParseError(sax.error());
  const auto& root = sax.root();
  if (!root.is_object()) throw ParseError("star file must be a JSON object");
  if (root.contains("schema")) {
    const auto& schema = root["schema"];
    if (!schema.is_string() || schema.get<std::string>() != std::to_string(kStarSchemaVersion)) {
      throw ParseError("unsupported star file schema");
    }
  }
  if (!root.contains("lambda_star")) throw ParseError("star file has no \"lambda_star\"");
  if (!root.contains("hub_edges") || !root["hub_edges"].is_object()) {
    throw ParseError("star file has no \"hub_edges\" object");
  }
  const auto& hubs = root["hub_edges"];
  if (hubs.size() != labels.size()) {
    throw ParseError("star file lists " + std::to_string(hubs.size()) + " hub edges for " +
                     std::to_string(labels.size()) + " sites");
  }
  StarEmbedding star;
  star.labels = labels;
  star.lambda_star = detail::exact_field(root["lambda_star"], "\"lambda_star\"");
  for (const auto& label : labels) {
    if (!hubs.contains(label)) throw ParseError("star file has no hub edge for site '" + label + "'");
    star.hub_len.push_back(detail::exact_field(hubs[label], "hub edge '" + label + "'"));
  }
  return star;
}

}  // namespace starmetric
