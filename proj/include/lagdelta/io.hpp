#pragma once

// JSON and CSV encodings. Indices are 1-based in every file format.

#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>
#include <string>

#include "lagdelta/delta.hpp"
#include "lagdelta/equality.hpp"
#include "lagdelta/inequality.hpp"
#include "lagdelta/quadratic_forms.hpp"
#include "lagdelta/tensor.hpp"

namespace lagdelta::io {

using json = nlohmann::ordered_json;

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline json rational_json(const Rational& r) {
  return json{{"num", numerator_string(r)}, {"den", denominator_string(r)}, {"value", to_double(r)}};
}

inline json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// ---- CubicForm: {"n": int, "entries": [{"idx": [A,B,C], "value": v}, ...]}

// Nonzero canonical entries only, sorted by index.
inline json to_json(const CubicForm& h) {
  json entries = json::array();
  for (const auto& [idx, value] : h.canonical_entries()) {
    if (value == 0.0) continue;
    entries.push_back(json{{"idx", {idx[0], idx[1], idx[2]}}, {"value", value}});
  }
  return json{{"n", h.n()}, {"entries", entries}};
}

// Parses a tensor; idx must be sorted and appear at most once.
inline CubicForm cubic_form_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    if (n < 1 || n > kMaxDimension) fail(ErrorCode::ParseError, "n outside [1, 12]");
    std::map<Triple, double> raw;
    for (const auto& e : j.at("entries")) {
      const auto& idx = e.at("idx");
      if (!idx.is_array() || idx.size() != 3) fail(ErrorCode::ParseError, "idx must have three entries");
      Triple t{idx[0].get<int>(), idx[1].get<int>(), idx[2].get<int>()};
      if (!(t[0] <= t[1] && t[1] <= t[2])) {
        fail(ErrorCode::ParseError, "idx must be sorted ascending");
      }
      if (raw.count(t)) fail(ErrorCode::ConflictingEntry, "duplicate idx in tensor file");
      raw[t] = e.at("value").get<double>();
    }
    return symmetrize(raw, n);
  } catch (const json::exception& ex) {
    fail(ErrorCode::ParseError, ex.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    fail(ErrorCode::ParseError, path + ": " + ex.what());
  }
}

// "2,2" or "(2,2)" -> block sizes.
inline std::vector<int> parse_blocks(std::string text) {
  std::vector<int> out;
  for (char& ch : text)
    if (ch == '(' || ch == ')' || ch == ' ') ch = ',';
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad partition entry '" + item + "'");
    }
  }
  if (out.empty()) fail(ErrorCode::ParseError, "empty partition");
  return out;
}

// "1/6", "0.25", "-3" -> exact rational (decimals are read exactly).
inline Rational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  static const std::regex fraction(R"(([+-]?)(\d+)/(\d+))");
  static const std::regex decimal(R"(([+-]?)(\d*)(?:\.(\d*))?)");
  // cpp_int reads a leading 0 as octal
  auto integer = [](std::string digits) {
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    return digits.empty() ? cpp_int(0) : cpp_int(digits);
  };
  std::smatch m;
  Rational out;
  if (std::regex_match(text, m, fraction)) {
    cpp_int den = integer(m[3]);
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + text + "'");
    out = Rational(integer(m[2])) / Rational(den);
  } else if (std::regex_match(text, m, decimal) && m[2].length() + m[3].length() > 0) {
    cpp_int den = 1;
    for (long i = 0; i < m[3].length(); ++i) den *= 10;
    out = Rational(integer(m[2].str() + m[3].str())) / Rational(den);
  } else {
    fail(ErrorCode::ParseError, "bad number '" + text + "'");
  }
  return m[1] == "-" ? Rational(-out) : out;
}

// ---- optimizer options

inline json to_json(const OptimizerOptions& o) {
  return json{{"restarts", o.restarts}, {"max_iters", o.max_iters}, {"tol", o.tol}, {"seed", o.seed}};
}

inline OptimizerOptions optimizer_options_from_json(const json& j, OptimizerOptions base = {}) {
  try {
    if (j.contains("restarts")) base.restarts = j.at("restarts").get<int>();
    if (j.contains("max_iters")) base.max_iters = j.at("max_iters").get<int>();
    if (j.contains("tol")) base.tol = j.at("tol").get<double>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::ParseError, ex.what());
  }
  if (base.restarts < 0 || base.max_iters < 1 || !(base.tol > 0)) {
    fail(ErrorCode::ParseError, "optimizer options out of range");
  }
  return base;
}

// ---- delta and inequality reports

inline json to_json(const DeltaResult& d) {
  return json{{"value", d.value},
              {"tau_total", d.tau_total},
              {"tau_blocks", d.tau_blocks},
              {"certified_lower", d.certified_lower},
              {"converged", d.converged},
              {"best_start", d.best_start},
              {"assignment", d.assignment},
              {"frame", matrix_json(d.frame.matrix())}};
}

inline json to_json(const InequalityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr{{"bound", to_string(row.source)}, {"verdict", to_string(row.verdict)}};
    if (row.coefficients) {
      jr["a"] = rational_json(row.coefficients->a);
      jr["b"] = rational_json(row.coefficients->b);
      jr["applicable"] = row.coefficients->applicable;
      jr["rhs"] = row.rhs;
      jr["gap"] = row.gap;
    } else {
      jr["a"] = nullptr;
      jr["b"] = nullptr;
      jr["applicable"] = false;
      jr["rhs"] = nullptr;
      jr["gap"] = nullptr;
    }
    if (!row.note.empty()) jr["note"] = row.note;
    rows.push_back(jr);
  }
  return json{{"n", r.partition.n()},
              {"partition", r.partition.blocks()},
              {"c", r.c},
              {"hsq", r.hsq},
              {"delta", to_json(r.delta)},
              {"optimal_bound", to_string(r.optimal)},
              {"sharp", r.sharp},
              {"bounds", rows}};
}

inline const char* kReportCsvHeader = "bound,partition,a_num,a_den,b_num,b_den,rhs,delta,gap,verdict";

inline std::string to_csv(const InequalityReport& r) {
  std::ostringstream os;
  os << kReportCsvHeader << "\n";
  for (const auto& row : r.rows) {
    os << to_string(row.source) << ",\"" << r.partition.to_string() << "\",";
    if (row.coefficients) {
      os << numerator_string(row.coefficients->a) << "," << denominator_string(row.coefficients->a) << ","
         << numerator_string(row.coefficients->b) << "," << denominator_string(row.coefficients->b) << ","
         << format_double(row.rhs) << "," << format_double(r.delta.value) << "," << format_double(row.gap);
    } else {
      os << ",,,,," << format_double(r.delta.value) << ",";
    }
    os << "," << to_string(row.verdict) << "\n";
  }
  return os.str();
}

// ---- quadratic-form bundle

inline json to_json(const QuadraticFormBundle& b) {
  json j{{"n", b.partition.n()},
         {"partition", b.partition.blocks()},
         {"case", to_string(b.form)},
         {b.form == FormCase::StatementII ? "t" : "ell", b.ell},
         {"C", b.C}};
  if (b.C_exact) j["C_exact"] = rational_json(*b.C_exact);
  j["M"] = matrix_json(b.M);
  j["Mprime"] = matrix_json(b.Mprime);
  j["minors"] = b.minors;
  if (b.minors_exact) {
    json exact = json::array();
    for (const auto& d : *b.minors_exact) exact.push_back(to_string(d));
    j["minors_exact"] = exact;
  }
  j["critical_C"] = rational_json(b.critical_C);
  j["binding_critical_C"] = rational_json(binding_critical_C(b.partition));
  const PsdVerdict v = psd_verdict(b);
  j["psd"] = v.psd;
  j["psd_by_minors"] = v.psd_by_minors;
  j["min_eigenvalue"] = v.min_eigenvalue;
  return j;
}

// ---- equality parameters

// {"theorem": 1, "n": 5, "partition": [2,2], "lambda": [5],
//  "blocks": [{"entries": [{"idx": [1,1,2], "value": 0.5}, ...]}, ...]}
// Block entries use local 1-based indices; missing blocks are zero.

inline std::vector<CubicForm> inblock_from_json(const json& j, const PartitionSpec& P) {
  std::vector<CubicForm> out;
  for (int i = 1; i <= P.k(); ++i) out.emplace_back(P.size(i));
  if (!j.contains("blocks")) return out;
  const auto& blocks = j.at("blocks");
  if (blocks.size() > static_cast<std::size_t>(P.k())) fail(ErrorCode::ParseError, "more in-block arrays than blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    json local = blocks[i];
    local["n"] = P.size(static_cast<int>(i) + 1);
    if (!local.contains("entries")) local["entries"] = json::array();
    out[i] = cubic_form_from_json(local);
  }
  return out;
}

inline EqualityParamsT1 params_t1_from_json(const json& j, const PartitionSpec& P) {
  EqualityParamsT1 p{P, {}, inblock_from_json(j, P)};
  try {
    if (j.contains("lambda")) p.lambda = j.at("lambda").get<std::vector<double>>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::ParseError, ex.what());
  }
  return p;
}

inline EqualityParamsT2 params_t2_from_json(const json& j, const PartitionSpec& P) {
  return EqualityParamsT2{P, inblock_from_json(j, P)};
}

inline json to_json(const Violation& v) {
  return json{{"bullet", v.bullet}, {"indices", v.indices}, {"residual", v.residual}, {"what", v.what}};
}

}  // namespace lagdelta::io
