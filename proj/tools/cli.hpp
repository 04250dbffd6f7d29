#pragma once

// starmetric command line: embed, lambda, verify, gen, bench, oracle.
//
// Exit codes: 0 ok, 1 domain violation (bad metric, infeasible star, oracle
// disagreement), 2 parse or I/O error.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "starmetric/starmetric.hpp"

namespace starmetric::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kInputError = 2 };

/// Raised for unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << text;
  if (!file) throw IoError("write to '" + path + "' failed");
}

inline std::string sha256_digest(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  hex << "sha256:";
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

/// --format wins; otherwise a .json extension means JSON and anything else
/// the matrix format.
inline MetricFormat resolve_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_format_name(flag);
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? MetricFormat::json : MetricFormat::matrix;
}

struct LoadedMetric {
  MetricSpace metric;
  std::string digest;
};

inline LoadedMetric load_metric(const std::string& path, const std::string& format) {
  std::string text = read_input(path);
  MetricSpace m = parse_metric(text, resolve_format(format, path));
  return LoadedMetric{std::move(m), sha256_digest(text)};
}

inline std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ParseError("bad list item '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty list '" + text + "'");
  return out;
}

struct Options {
  std::string input;
  std::string star;
  std::string format;
  std::string output;
  std::string tol = "1/1000000000";
  std::uint64_t seed = 1;
  std::string model = "shortest_path";
  std::size_t n = 0;
  std::string sizes = "32,64,128";
  std::string seeds = "1";
};

inline int cmd_embed(const Options& o, std::ostream& out) {
  LoadedMetric in = load_metric(o.input, o.format);
  EmbedResult r;
  const auto t0 = std::chrono::steady_clock::now();
  r.star = embed(in.metric, &r.stats);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.input_digest = in.digest;
  write_output(o.output, write_embed_result(r), out);
  return kOk;
}

inline int cmd_lambda(const Options& o, std::ostream& out) {
  LoadedMetric in = load_metric(o.input, o.format);
  const Rational lam = lambda_star(LambdaGraph(in.metric));
  write_output(o.output, to_fraction_string(lam) + "\n" + to_decimal_string(lam) + "\n", out);
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  LoadedMetric in = load_metric(o.input, o.format);
  const StarEmbedding star = parse_star(read_input(o.star), in.metric.labels());
  const VerificationReport report = verify_star(in.metric, star);
  std::ostringstream text;
  text << "lambda " << to_fraction_string(star.lambda_star) << "\n";
  for (const auto& v : report.violations) text << describe(v, in.metric.labels()) << "\n";
  text << (report.feasible() ? "feasible" : "infeasible: " + std::to_string(report.violations.size()) +
                                                " violation(s)")
       << "\n";
  write_output(o.output, text.str(), out);
  return report.feasible() ? kOk : kViolation;
}

inline int cmd_gen(const Options& o, std::ostream& out) {
  const MetricSpace m = gen_random_metric(o.n, o.seed, parse_model_name(o.model));
  write_output(o.output, write_metric(m, resolve_format(o.format, o.output)), out);
  return kOk;
}

inline int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  const auto sizes = parse_list(o.sizes);
  const auto seeds = parse_list(o.seeds);
  const MetricModel model = parse_model_name(o.model);
  std::ostringstream csv;
  csv << "n,seed,model,seconds,lambda_star,iterations,max_breakpoints\n";
  for (std::uint64_t seed : seeds) {
    for (std::uint64_t n : sizes) {
      const MetricSpace m = gen_random_metric(n, seed, model);
      SearchStats stats;
      const auto t0 = std::chrono::steady_clock::now();
      const StarEmbedding star = embed(m, &stats);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      csv << n << ',' << seed << ',' << model_name(model) << ',' << std::setprecision(6) << seconds << ','
          << to_fraction_string(star.lambda_star) << ',' << stats.iterations << ','
          << stats.max_envelope_breakpoints << '\n';
      err << "n=" << n << " seed=" << seed << " " << seconds << "s\n";
    }
  }
  write_output(o.output, csv.str(), out);
  return kOk;
}

inline int cmd_oracle(const Options& o, std::ostream& out) {
  LoadedMetric in = load_metric(o.input, o.format);
  const Rational tol = parse_rational(o.tol);
  if (tol <= 0) throw ParseError("--tol must be positive");
  const LambdaGraph g(in.metric);
  const Rational parametric = lambda_star(g);
  std::size_t probes = 0;
  const Rational bisected = bisect_lambda(g, tol, &probes);
  bool agree = abs(Rational(bisected - parametric)) <= tol;

  std::ostringstream text;
  text << "parametric " << to_fraction_string(parametric) << " " << to_decimal_string(parametric) << "\n";
  text << "bisection " << to_fraction_string(bisected) << " " << to_decimal_string(bisected) << " probes "
       << probes << "\n";
  if (in.metric.size() <= kMaxOracleSites) {
    const Rational exact = exact_lambda_by_cycles(g);
    text << "cycles " << to_fraction_string(exact) << " " << to_decimal_string(exact) << "\n";
    agree = agree && exact == parametric;
  } else {
    text << "cycles skipped (n > " << kMaxOracleSites << ")\n";
  }
  text << (agree ? "agree" : "DISAGREE") << "\n";
  write_output(o.output, text.str(), out);
  return agree ? kOk : kViolation;
}

/// Runs one command line. Diagnostics go to `err`, results to `out` unless
/// --output names a file.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-dilation star embeddings of finite metric spaces"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "input format (default: from extension)")
        ->check(CLI::IsMember({"matrix", "json"}));
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "output path (default: stdout)"); };

  auto* embed_cmd = app.add_subcommand("embed", "compute the minimum-dilation star");
  embed_cmd->add_option("input", o.input, "metric file, or - for stdin")->required();
  add_format(embed_cmd);
  add_output(embed_cmd);

  auto* lambda_cmd = app.add_subcommand("lambda", "print the optimal dilation");
  lambda_cmd->add_option("input", o.input, "metric file, or - for stdin")->required();
  add_format(lambda_cmd);
  add_output(lambda_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "check a star file against a metric");
  verify_cmd->add_option("metric", o.input, "metric file")->required();
  verify_cmd->add_option("star", o.star, "star file written by embed")->required();
  add_format(verify_cmd);
  add_output(verify_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "write a random metric");
  gen_cmd->add_option("n", o.n, "number of sites")->required();
  gen_cmd->add_option("--seed", o.seed, "random seed");
  gen_cmd->add_option("--model", o.model, "shortest_path or rounded_euclidean")
      ->check(CLI::IsMember({"shortest_path", "rounded_euclidean"}));
  gen_cmd->add_option("--format", o.format, "output format (default: from extension)")
      ->check(CLI::IsMember({"matrix", "json"}));
  add_output(gen_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "time embed over a size sweep, CSV out");
  bench_cmd->add_option("--sizes", o.sizes, "comma-separated site counts");
  bench_cmd->add_option("--seeds", o.seeds, "comma-separated seeds");
  bench_cmd->add_option("--seed", o.seeds, "single seed (same as --seeds)");
  bench_cmd->add_option("--model", o.model, "shortest_path or rounded_euclidean")
      ->check(CLI::IsMember({"shortest_path", "rounded_euclidean"}));
  add_output(bench_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "cross-check lambda against bisection and cycle enumeration");
  oracle_cmd->add_option("input", o.input, "metric file, or - for stdin")->required();
  oracle_cmd->add_option("--tol", o.tol, "bisection tolerance P/Q");
  add_format(oracle_cmd);
  add_output(oracle_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*embed_cmd) return cmd_embed(o, out);
    if (*lambda_cmd) return cmd_lambda(o, out);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*gen_cmd) return cmd_gen(o, out);
    if (*bench_cmd) return cmd_bench(o, out, err);
    if (*oracle_cmd) return cmd_oracle(o, out);
  } catch (const MetricViolation& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kViolation;
  }
  return kInputError;
}

}  // namespace starmetric::cli
