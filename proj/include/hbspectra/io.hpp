#pragma once

// File formats: matrix CSV, heat-bath spec JSON, triple bundle JSON, and the
// JSON renderings of reports and decompositions.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hbspectra/error.hpp"
#include "hbspectra/heatbath.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/rational.hpp"
#include "hbspectra/sicanon.hpp"
#include "hbspectra/spectral.hpp"
#include "hbspectra/transfer.hpp"

namespace hbspectra {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Matrix CSV: header row of column state labels, then one row of entries
// per state. Entries are "p/q" or decimal strings.

struct LabelledMatrix {
  std::vector<std::string> labels;  // column labels
  RMatrix matrix;
};

namespace detail {

// Fields containing commas or quotes are double-quoted, with inner quotes
// doubled. Contingency and lifted labels contain commas.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        cell += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"' && trim(cell).empty()) {
      cell.clear();
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.emplace_back(was_quoted ? cell : std::string(trim(cell)));
      cell.clear();
      was_quoted = false;
    } else if (!was_quoted || c != ' ') {
      if (was_quoted) throw ParseError("text after closing quote in CSV line: " + line);
      cell += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote in CSV line: " + line);
  out.emplace_back(was_quoted ? cell : std::string(trim(cell)));
  return out;
}
}  // namespace detail

inline LabelledMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    rows.push_back(detail::split_csv_line(line));
  }
  if (rows.empty()) throw ParseError("matrix CSV is empty");
  LabelledMatrix out;
  out.labels = rows.front();
  const std::size_t cols = out.labels.size();
  out.matrix = RMatrix(rows.size() - 1, cols);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw ParseError("matrix CSV row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " entries, expected " + std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) out.matrix(i - 1, j) = parse_rational(rows[i][j]);
  }
  return out;
}

inline LabelledMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const RMatrix& m) {
  for (std::size_t j = 0; j < labels.size(); ++j) out << (j ? "," : "") << detail::csv_field(labels[j]);
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << to_string(m(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Rationals in JSON are strings.

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline Json rationals_to_json(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(to_string(v));
  return arr;
}

inline std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

inline Json matrix_to_json(const RMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    rows.push_back(rationals_to_json(std::vector<Rational>(m.row(i).begin(), m.row(i).end())));
  return rows;
}

inline RMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a matrix as an array of rows");
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : j) rows.push_back(rationals_from_json(r));
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ParseError("ragged matrix in JSON");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Heat-bath spec JSON:
//   {"states":[...], "pi":["2/3","1/3"], "labels":[{"id":"a","rho":"1/2","blocks":[[0,1],[2]]}]}

inline HeatBathSpec spec_from_json(const Json& j) {
  try {
    HeatBathSpec spec;
    for (const auto& s : j.at("states")) spec.states.push_back(s.get<std::string>());
    spec.pi = rationals_from_json(j.at("pi"));
    if (j.contains("labels")) {
      for (const auto& l : j.at("labels")) {
        LabelPartition label;
        label.id = l.at("id").get<std::string>();
        label.rho = rational_from_json(l.at("rho"));
        for (const auto& block : l.at("blocks")) {
          std::vector<std::size_t> b;
          for (const auto& x : block) {
            if (!x.is_number_integer() || x.get<long long>() < 0) throw ParseError("block entries must be state indices");
            b.push_back(x.get<std::size_t>());
          }
          label.blocks.push_back(std::move(b));
        }
        spec.labels.push_back(std::move(label));
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed heat-bath spec: ") + e.what());
  }
}

inline Json spec_to_json(const HeatBathSpec& spec) {
  Json j;
  j["states"] = spec.states;
  j["pi"] = rationals_to_json(spec.pi);
  Json labels = Json::array();
  for (const auto& l : spec.labels) {
    Json lj;
    lj["id"] = l.id;
    lj["rho"] = to_string(l.rho);
    lj["blocks"] = l.blocks;
    labels.push_back(std::move(lj));
  }
  j["labels"] = std::move(labels);
  return j;
}

inline Json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

inline HeatBathSpec read_spec(const std::filesystem::path& path) { return spec_from_json(parse_json_file(path)); }

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const ValidationReport& report) {
  Json j;
  j["valid"] = report.ok();
  Json vs = Json::array();
  for (const auto& v : report.violations) {
    Json vj;
    vj["axiom"] = v.axiom;
    if (!v.label.empty()) vj["label"] = v.label;
    vj["message"] = v.message;
    if (v.witness) vj["witness"] = *v.witness;
    vs.push_back(std::move(vj));
  }
  j["violations"] = std::move(vs);
  return j;
}

inline Json to_json(const SpectralReport& r) {
  Json j;
  j["eigenvalues"] = r.eigenvalues;
  j["lambda_1"] = r.lambda_1 ? Json(*r.lambda_1) : Json(nullptr);
  j["lambda_min"] = r.lambda_min;
  j["lambda_star"] = r.lambda_star;
  j["psd"] = r.psd;
  j["tolerance"] = r.tolerance;
  j["certificate"] = to_string(r.certificate);
  j["is_ergodic"] = r.is_ergodic;
  if (r.mixing_bound) {
    j["mixing_bound"] = {{"epsilon", r.mixing_bound->epsilon}, {"tau_upper", r.mixing_bound->tau_upper}};
  } else {
    j["mixing_bound"] = nullptr;
  }
  return j;
}

inline Json to_json(const SiDecomposition& d) {
  Json j;
  j["permutation"] = d.permutation;
  Json blocks = Json::array();
  for (const auto& b : d.blocks) blocks.push_back({{"states", b.states}, {"pi", rationals_to_json(b.pi)}});
  j["blocks"] = std::move(blocks);
  Json p = Json::array();
  for (const auto& row : d.coupling) p.push_back(rationals_to_json(row));
  j["ephemeral"] = {{"states", d.ephemeral}, {"p", std::move(p)}};
  j["k"] = d.k();
  j["t"] = d.t();
  return j;
}

inline Json to_json(const SiClass& c) {
  Json j;
  j["verdict"] = to_string(c.kind);
  if (c.is_si()) {
    j["t"] = c.zero_columns;
    j["r"] = c.rank;
  }
  return j;
}

inline Json to_json(const FiniteConvergenceReport& r) {
  Json j;
  j["settles"] = r.settles;
  j["m"] = r.settles ? Json(r.m) : Json(nullptr);
  j["spectrum_binary"] = r.spectrum_binary;
  Json blocks = Json::array();
  for (const auto& b : r.recurrent_blocks) blocks.push_back({{"states", b.states}, {"pi", rationals_to_json(b.pi)}});
  j["recurrent_blocks"] = std::move(blocks);
  j["strict_form"] = r.strict_form;
  return j;
}

inline Json to_json(const TransferReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["psd_method"] = r.psd_method;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

// ---------------------------------------------------------------------------
// Triple bundle JSON:
//   {"omega": {"states":[...], "pi":[...]}, "omega_prime": {"states":[...], "mu":[...]},
//    "R": "R.csv", "T": "T.csv"}
// R and T are CSV paths relative to the bundle, or inline arrays of rows.

struct TransferBundle {
  TargetDistribution pi;
  TargetDistribution mu;
  RMatrix R;
  RMatrix T;
};

namespace detail {

inline RMatrix bundle_matrix(const Json& ref, const std::filesystem::path& base, const std::vector<std::string>& expected_cols) {
  if (ref.is_string()) {
    LabelledMatrix lm = read_matrix_csv(base / ref.get<std::string>());
    if (lm.labels != expected_cols) throw ParseError("CSV header of '" + ref.get<std::string>() + "' does not match the state labels");
    return std::move(lm.matrix);
  }
  return matrix_from_json(ref);
}

}  // namespace detail

inline TransferBundle bundle_from_json(const Json& j, const std::filesystem::path& base) {
  try {
    const Json& omega = j.at("omega");
    const Json& prime = j.at("omega_prime");
    std::vector<std::string> states = omega.at("states").get<std::vector<std::string>>();
    std::vector<std::string> lifted = prime.at("states").get<std::vector<std::string>>();
    TargetDistribution pi(StateSpace(states), rationals_from_json(omega.at("pi")));
    TargetDistribution mu(StateSpace(lifted), rationals_from_json(prime.at("mu")));
    RMatrix r = detail::bundle_matrix(j.at("R"), base, lifted);
    RMatrix t = detail::bundle_matrix(j.at("T"), base, lifted);
    return {std::move(pi), std::move(mu), std::move(r), std::move(t)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed triple bundle: ") + e.what());
  }
}

inline TransferBundle read_bundle(const std::filesystem::path& path) {
  return bundle_from_json(parse_json_file(path), path.parent_path());
}

/// Writes bundle.json plus R.csv and T.csv into `dir`.
inline void write_bundle(const std::filesystem::path& dir, const TargetDistribution& pi, const TargetDistribution& mu,
                         const RMatrix& r, const RMatrix& t) {
  std::filesystem::create_directories(dir);
  Json j;
  j["omega"] = {{"states", pi.space().labels()}, {"pi", rationals_to_json(pi.probs())}};
  j["omega_prime"] = {{"states", mu.space().labels()}, {"mu", rationals_to_json(mu.probs())}};
  j["R"] = "R.csv";
  j["T"] = "T.csv";
  std::ofstream(dir / "bundle.json") << j.dump(2) << '\n';
  std::ofstream r_out(dir / "R.csv");
  write_matrix_csv(r_out, mu.space().labels(), r);
  std::ofstream t_out(dir / "T.csv");
  write_matrix_csv(t_out, mu.space().labels(), t);
}

}  // namespace hbspectra
