// Copyright 2026 The estalg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "estalg/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "estalg/error.hpp"

namespace estalg::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw InputError(field + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(field + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number, got " + std::string(j.type_name()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(field, "not finite");
  return v;
}

long long integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) {
    field_error(field, "expected an integer, got " + std::string(j.type_name()));
  }
  return j.get<long long>();
}

std::string indexed(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

classical::Rational rational(const json& j, const std::string& field) {
  if (j.is_number_integer()) return classical::Rational(j.get<long>());
  if (!j.is_array() || j.size() != 2) field_error(field, "expected [num, den]");
  const long long num = integer(j[0], indexed(field, 0));
  const long long den = integer(j[1], indexed(field, 1));
  if (den == 0) field_error(indexed(field, 1), "zero denominator");
  classical::Rational q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  q.canonicalize();
  return q;
}

json rational_to_json(const classical::Rational& q) {
  return json::array({json::parse(q.get_num().get_str()), json::parse(q.get_den().get_str())});
}

classical::Polynomial polynomial(const json& j, int n_vars, const std::string& field) {
  if (j.is_string()) {
    field_error(field, "\"" + j.get<std::string>() +
                           "\" is not a polynomial; only polynomial coefficients are supported "
                           "(a list of {\"coeff\": [num, den], \"powers\": [...]} terms)");
  }
  if (!j.is_array()) field_error(field, "expected a list of polynomial terms");
  classical::Polynomial p(n_vars);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tf = indexed(field, t);
    const auto c = rational(require(j[t], "coeff", tf), tf + ".coeff");
    const json& pw = require(j[t], "powers", tf);
    if (!pw.is_array() || pw.size() != static_cast<std::size_t>(n_vars)) {
      field_error(tf + ".powers", "expected " + std::to_string(n_vars) + " exponents");
    }
    classical::MultiIndex powers(n_vars);
    for (int i = 0; i < n_vars; ++i) {
      const long long e = integer(pw[i], indexed(tf + ".powers", i));
      if (e < 0 || e > classical::kDegreeGuard) {
        field_error(indexed(tf + ".powers", i), "exponent out of range");
      }
      powers[i] = static_cast<int>(e);
    }
    p.add_term(powers, c);
  }
  return p;
}

std::vector<classical::Polynomial> polynomial_list(const json& j, int n_vars,
                                                   const std::string& field) {
  if (!j.is_array()) field_error(field, "expected a list of polynomials");
  std::vector<classical::Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(polynomial(j[i], n_vars, indexed(field, i)));
  return out;
}

std::vector<double> split_doubles(const std::string& line, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
      throw InputError(where + ": bad number '" + cell + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
  if (!out) throw InputError(path.string() + ": write failed");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty list of rows");
  const std::size_t n = j.size();
  if (n > static_cast<std::size_t>(kMaxDim)) field_error(field, "dimension exceeds 64");
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string rf = indexed(field, r);
    if (!j[r].is_array() || j[r].size() != n) {
      field_error(rf, "expected a row of " + std::to_string(n) + " entries");
    }
    for (std::size_t c = 0; c < n; ++c) {
      const std::string ef = indexed(rf, c);
      const json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = Complex(number(e, ef), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(number(e[0], indexed(ef, 0)), number(e[1], indexed(ef, 1)));
      } else {
        field_error(ef, "expected [re, im]");
      }
    }
  }
  return m;
}

QuantumModel quantum_model_from_json(const json& j) {
  if (!j.is_object()) field_error("model", "expected an object");
  const long long dim = integer(require(j, "dim", "model"), "model.dim");
  if (dim < 1 || dim > kMaxDim) field_error("model.dim", "must lie in 1..64");
  const json& lj = require(j, "L", "model");
  if (!lj.is_array()) field_error("model.L", "expected a list of matrices");
  std::vector<Operator> ls;
  for (std::size_t k = 0; k < lj.size(); ++k) {
    Matrix m = matrix_from_json(lj[k], indexed("model.L", k));
    if (m.rows() != dim) field_error(indexed("model.L", k), "dimension does not match model.dim");
    ls.emplace_back(std::move(m));
  }
  Matrix h = matrix_from_json(require(j, "H", "model"), "model.H");
  if (h.rows() != dim) field_error("model.H", "dimension does not match model.dim");

  QuantumModel out{ModelSpec(std::move(ls), Operator(std::move(h))), std::nullopt, {}, std::nullopt};
  if (auto it = j.find("rho0"); it != j.end()) {
    Matrix rho = matrix_from_json(*it, "model.rho0");
    if (rho.rows() != dim) field_error("model.rho0", "dimension does not match model.dim");
    try {
      check_density(rho, static_cast<int>(dim));
    } catch (const Error& e) {
      field_error("model.rho0", e.what());
    }
    out.rho0 = std::move(rho);
  }
  if (auto it = j.find("observables"); it != j.end()) {
    if (!it->is_object()) field_error("model.observables", "expected an object of named matrices");
    for (const auto& [name, value] : it->items()) {
      Matrix x = matrix_from_json(value, "model.observables." + name);
      if (x.rows() != dim) {
        field_error("model.observables." + name, "dimension does not match model.dim");
      }
      out.observables.push_back({name, std::move(x)});
    }
  }
  if (auto it = j.find("scheme"); it != j.end()) {
    out.scheme = scheme_from_json(*it);
    out.scheme->check_against(out.spec);
  }
  return out;
}

json model_to_json(const ModelSpec& g) {
  json ls = json::array();
  for (const auto& l : g.couplings()) ls.push_back(matrix_to_json(l.matrix()));
  return json{{"dim", g.dim()}, {"L", ls}, {"H", matrix_to_json(g.hamiltonian().matrix())}};
}

MeasurementScheme scheme_from_json(const json& j) {
  if (!j.is_object()) field_error("scheme", "expected an object");
  const json& oj = require(j, "observed", "scheme");
  const json& tj = require(j, "theta", "scheme");
  if (!oj.is_array()) field_error("scheme.observed", "expected a list of 1-based channel indices");
  if (!tj.is_array()) field_error("scheme.theta", "expected a list of phases");
  if (oj.size() != tj.size()) field_error("scheme.theta", "length differs from scheme.observed");
  std::vector<int> observed;
  std::vector<double> theta;
  for (std::size_t i = 0; i < oj.size(); ++i) {
    const long long c = integer(oj[i], indexed("scheme.observed", i));
    if (c < 1) field_error(indexed("scheme.observed", i), "channel indices are 1-based");
    observed.push_back(static_cast<int>(c - 1));
    theta.push_back(number(tj[i], indexed("scheme.theta", i)));
  }
  return MeasurementScheme(std::move(observed), std::move(theta));
}

json scheme_to_json(const MeasurementScheme& scheme) {
  json observed = json::array();
  for (int c : scheme.observed()) observed.push_back(c + 1);
  return json{{"observed", observed}, {"theta", scheme.theta()}};
}

std::uint64_t model_hash(const ModelSpec& g, const MeasurementScheme& scheme) {
  const std::string text = json{{"model", model_to_json(g)}, {"scheme", scheme_to_json(scheme)}}.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

classical::ClassicalModel classical_model_from_json(const json& j) {
  if (!j.is_object()) field_error("classical", "expected an object");
  const long long n = integer(require(j, "n_vars", "classical"), "classical.n_vars");
  if (n < 1 || n > 16) field_error("classical.n_vars", "must lie in 1..16");
  const int nv = static_cast<int>(n);
  auto v = polynomial_list(require(j, "v", "classical"), nv, "classical.v");
  auto h = polynomial_list(require(j, "h", "classical"), nv, "classical.h");
  if (v.size() != static_cast<std::size_t>(nv)) {
    field_error("classical.v", "expected one drift component per variable");
  }
  const auto g = rational(require(j, "gamma0", "classical"), "classical.gamma0");
  if (sgn(g) <= 0) field_error("classical.gamma0", "must be positive");
  return classical::ClassicalModel(nv, std::move(v), std::move(h), g);
}

json polynomial_to_json(const classical::Polynomial& p) {
  json terms = json::array();
  for (const auto& [powers, c] : p.terms()) {
    terms.push_back(json{{"coeff", rational_to_json(c)}, {"powers", powers}});
  }
  return terms;
}

json classical_model_to_json(const classical::ClassicalModel& m) {
  json v = json::array();
  json h = json::array();
  for (const auto& p : m.drift()) v.push_back(polynomial_to_json(p));
  for (const auto& p : m.observation()) h.push_back(polynomial_to_json(p));
  return json{{"n_vars", m.n_vars()}, {"v", v}, {"h", h}, {"gamma0", rational_to_json(m.gamma0())}};
}

json closure_to_json(const ClosureReport& report) {
  json out{{"outcome", report.finite() ? "finite" : "cap_exceeded"},
           {"dimension", report.dimension},
           {"growth_trace", report.growth_trace},
           {"tolerance", report.tolerance},
           {"bracket_count", report.bracket_count}};
  if (report.finite() && report.basis) {
    const auto& sc = report.basis->structure;
    const std::size_t n = sc.dimension();
    json c = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json ci = json::array();
      for (std::size_t k = 0; k < n; ++k) {
        json cij = json::array();
        for (std::size_t l = 0; l < n; ++l) cij.push_back(sc(i, k, l));
        ci.push_back(std::move(cij));
      }
      c.push_back(std::move(ci));
    }
    out["structure_constants"] = std::move(c);
  }
  return out;
}

json theorem_to_json(const TheoremReport& r) {
  return json{{"dim_ops", r.dim_ops},
              {"dim_superops", r.dim_superops},
              {"kernel_dim", r.kernel_dim},
              {"ops_finite", r.ops_finite},
              {"superops_finite", r.superops_finite},
              {"forward_inclusion_defect", r.forward_inclusion_defect},
              {"backward_inclusion_defect", r.backward_inclusion_defect},
              {"pass", r.pass}};
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

json table_to_json(const Table& table) {
  json cols = json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    json values = json::array();
    for (const auto& row : table.rows) values.push_back(row[c]);
    cols[table.columns[c]] = std::move(values);
  }
  return json{{"columns", table.columns}, {"data", cols}};
}

Table record_table(const TrajectoryRecord& record) {
  Table t;
  t.columns.push_back("t");
  const std::size_t m = record.channels();
  for (std::size_t a = 0; a < m; ++a) t.columns.push_back("dY_" + std::to_string(a + 1));
  for (std::size_t a = 0; a < m; ++a) t.columns.push_back("dW_" + std::to_string(a + 1));
  for (std::size_t n = 0; n < record.steps; ++n) {
    std::vector<double> row{record.time(n)};
    for (std::size_t a = 0; a < m; ++a) row.push_back(record.dy[a][n]);
    for (std::size_t a = 0; a < m; ++a) row.push_back(record.dw[a][n]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

json record_sidecar(const TrajectoryRecord& record, std::uint64_t hash) {
  return json{{"seed", record.seed},
              {"dt", record.dt},
              {"T", record.horizon()},
              {"steps", record.steps},
              {"channels", record.channels()},
              {"model_hash", hex64(hash)}};
}

TrajectoryRecord record_from_csv(const std::string& csv, const json* sidecar,
                                 const std::string& source) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ":1: empty record file");
  std::size_t cols = 1;
  for (char c : line) cols += (c == ',');
  if (line.rfind("t,", 0) != 0 || cols % 2 != 1) {
    throw InputError(source + ":1: expected header t,dY_1..dY_m,dW_1..dW_m");
  }
  const std::size_t m = (cols - 1) / 2;
  TrajectoryRecord rec;
  rec.dy.assign(m, {});
  rec.dw.assign(m, {});
  std::vector<double> times;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto row = split_doubles(line, where);
    if (row.size() != cols) throw InputError(where + ": expected " + std::to_string(cols) + " fields");
    times.push_back(row[0]);
    for (std::size_t a = 0; a < m; ++a) {
      rec.dy[a].push_back(row[1 + a]);
      rec.dw[a].push_back(row[1 + m + a]);
    }
  }
  rec.steps = times.size();
  if (rec.steps == 0) throw InputError(source + ": record has no rows");
  if (sidecar) {
    rec.dt = number(require(*sidecar, "dt", "sidecar"), "sidecar.dt");
    rec.seed = require(*sidecar, "seed", "sidecar").get<std::uint64_t>();
  } else if (rec.steps > 1) {
    rec.dt = times[1] - times[0];
  } else {
    throw InputError(source + ": cannot infer dt from a single row without a sidecar");
  }
  if (!(rec.dt > 0.0)) throw InputError(source + ": dt must be positive");
  return rec;
}

std::filesystem::path sidecar_path(const std::filesystem::path& record) {
  std::filesystem::path p = record;
  p += ".json";
  return p;
}

}  // namespace estalg::io
