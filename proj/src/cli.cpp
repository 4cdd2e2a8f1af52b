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

#include "estalg/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "estalg/classical.hpp"
#include "estalg/error.hpp"
#include "estalg/identities.hpp"
#include "estalg/io.hpp"
#include "estalg/lie_engine.hpp"
#include "estalg/presets.hpp"
#include "estalg/qfilter.hpp"

namespace estalg::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

struct Options {
  std::string model;
  std::string scheme;
  std::string preset;
  std::string out;
  std::string format = "json";
  double tol = kDefaultClosureTol;
  std::size_t cap = 0;

  // simulate
  double dt = 1e-3;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  std::size_t ensemble = 0;
  std::string picture = "density";
  std::string form = "ito";
  std::string ito_scheme = "kraus";
  std::string record;

  // verify
  std::string dims = "2,3,4";
  std::size_t seeds = 10;
  double verify_tol = 1e-12;
  std::string k_form = "derived";
};

json load_model_document(const Options& o, presets::Kind kind) {
  if (!o.preset.empty() && !o.model.empty()) throw InputError("give either --model or --preset, not both");
  if (!o.preset.empty()) {
    auto p = presets::find(o.preset);
    if (p.kind != kind) {
      throw InputError("--preset " + o.preset + ": wrong kind of model for this command");
    }
    return p.document;
  }
  if (o.model.empty()) throw InputError("one of --model or --preset is required");
  return io::read_json_file(o.model);
}

io::QuantumModel load_quantum(const Options& o, MeasurementScheme& scheme) {
  io::QuantumModel q = io::quantum_model_from_json(load_model_document(o, presets::Kind::kQuantum));
  if (!o.scheme.empty()) {
    scheme = io::scheme_from_json(io::read_json_file(o.scheme));
  } else if (q.scheme) {
    scheme = *q.scheme;
  } else {
    scheme = MeasurementScheme::complete(q.spec.channels());
  }
  scheme.check_against(q.spec);
  return q;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

KForm parse_k_form(const std::string& s) {
  if (s == "derived") return KForm::kDerived;
  if (s == "paper-2.3") return KForm::kPaperInline;
  return KForm::kPaperComplete;
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long d = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || d < 1 || d > kMaxDim) {
      throw InputError("--dims: '" + item + "' is not a dimension in 1..64");
    }
    dims.push_back(static_cast<int>(d));
  }
  if (dims.empty()) throw InputError("--dims: empty list");
  return dims;
}

unsigned ensemble_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ESTALG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 1) {
      throw InputError("ESTALG_THREADS must be a positive integer");
    }
    n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string render(const io::Table& t, const std::string& format) {
  return format == "csv" ? io::table_to_csv(t) : dump(io::table_to_json(t));
}

int cmd_closure(const Options& o, std::ostream& out) {
  MeasurementScheme scheme;
  const auto q = load_quantum(o, scheme);
  const ModelSpec& g = q.spec;
  const bool complete = scheme.is_complete(g.channels());

  json rep{{"model_hash", io::hex64(io::model_hash(g, scheme))}, {"complete_homodyne", complete}};
  const ClosureReport sup = estimation_algebra(g, scheme, o.tol, o.cap);
  rep["estimation_algebra"] = io::closure_to_json(sup);
  bool capped = !sup.finite();
  if (complete) {
    const ClosureReport ops = operator_algebra(g, scheme, o.tol, o.cap);
    rep["operator_algebra"] = io::closure_to_json(ops);
    capped = capped || !ops.finite();
    rep["theorem"] = io::theorem_to_json(verify_theorem_main(g, scheme, o.tol, o.cap));
  }
  emit(o.out, dump(rep), out);
  return capped ? kCapExceeded : kOk;
}

std::vector<NamedObservable> default_observables(int d) {
  std::vector<NamedObservable> obs;
  for (int k = 0; k < d; ++k) obs.push_back({"P" + std::to_string(k), matrix_unit(d, k, k).matrix()});
  return obs;
}

io::Table filter_table(const FilterTable& ft, std::span<const NamedObservable> obs) {
  io::Table t;
  t.columns = {"t", "sigma_I"};
  for (const auto& x : obs) {
    t.columns.push_back("re_" + x.name);
    t.columns.push_back("im_" + x.name);
  }
  for (std::size_t n = 0; n < ft.t.size(); ++n) {
    std::vector<double> row{ft.t[n], ft.sigma_i[n]};
    for (std::size_t j = 0; j < obs.size(); ++j) {
      row.push_back(ft.pi[j][n].real());
      row.push_back(ft.pi[j][n].imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  MeasurementScheme scheme;
  const auto q = load_quantum(o, scheme);
  const ModelSpec& g = q.spec;
  const int d = g.dim();
  const Matrix rho0 = q.rho0 ? *q.rho0 : Matrix(Matrix::Identity(d, d) / static_cast<double>(d));
  const auto observables = q.observables.empty() ? default_observables(d) : q.observables;

  FilterOptions fo;
  fo.picture = o.picture == "pure" ? Picture::kPure : Picture::kDensity;
  fo.ito_scheme = o.ito_scheme == "euler"      ? ItoScheme::kEulerMaruyama
                 : o.ito_scheme == "milstein" ? ItoScheme::kMilstein
                                              : ItoScheme::kKraus;
  fo.form = o.form == "strat" ? Calculus::kStratonovich : Calculus::kIto;
  const std::uint64_t hash = io::model_hash(g, scheme);
  const std::string ext = o.format == "csv" ? ".csv" : ".json";
  if (!o.out.empty()) fs::create_directories(o.out);

  if (o.ensemble > 0) {
    if (o.form == "both") throw InputError("--ensemble runs a single --form (ito or strat)");
    if (!o.record.empty()) throw InputError("--ensemble generates its own records; drop --record");
    const auto s = run_ensemble(g, scheme, rho0, observables, o.horizon, o.dt, o.seed, o.ensemble,
                                fo, ensemble_threads());
    io::Table t;
    t.columns = {"t"};
    for (const auto& x : observables) {
      t.columns.push_back("mean_" + x.name);
      t.columns.push_back("stderr_" + x.name);
      t.columns.push_back("unconditional_" + x.name);
    }
    for (std::size_t n = 0; n < s.t.size(); ++n) {
      std::vector<double> row{s.t[n]};
      for (std::size_t j = 0; j < observables.size(); ++j) {
        row.push_back(s.mean[j][n]);
        row.push_back(s.std_error[j][n]);
        row.push_back(unconditional_expectation(g, rho0, observables[j].matrix, s.t[n]).real());
      }
      t.rows.push_back(std::move(row));
    }
    emit(o.out.empty() ? "" : (fs::path(o.out) / ("ensemble" + ext)).string(), render(t, o.format), out);
    return kOk;
  }

  TrajectoryRecord record;
  if (!o.record.empty()) {
    const fs::path side = io::sidecar_path(o.record);
    std::optional<json> meta;
    if (fs::exists(side)) meta = io::read_json_file(side);
    record = io::record_from_csv(io::read_text_file(o.record), meta ? &*meta : nullptr, o.record);
    if (meta && meta->contains("model_hash") && (*meta)["model_hash"] != io::hex64(hash)) {
      err << "warning: record was generated from a different model or scheme\n";
    }
  } else {
    record = generate_record(g, scheme, rho0, o.horizon, o.dt, o.seed);
    if (!o.out.empty()) {
      const fs::path rp = fs::path(o.out) / "record.csv";
      io::write_text_file(rp, io::table_to_csv(io::record_table(record)));
      io::write_text_file(io::sidecar_path(rp), dump(io::record_sidecar(record, hash)));
    }
  }

  const FilterModel model(g, scheme);
  io::Table table;
  if (o.form == "both") {
    FilterOptions ito = fo;
    ito.form = Calculus::kIto;
    FilterOptions strat = fo;
    strat.form = Calculus::kStratonovich;
    const FilterTable a = run_filter(record, model, rho0, observables, ito);
    const FilterTable b = run_filter(record, model, rho0, observables, strat);
    table = filter_table(a, observables);
    table.columns.push_back("strat_sigma_I");
    for (const auto& x : observables) {
      table.columns.push_back("strat_re_" + x.name);
      table.columns.push_back("strat_im_" + x.name);
    }
    for (const auto& x : observables) table.columns.push_back("discrepancy_" + x.name);
    for (std::size_t n = 0; n < table.rows.size(); ++n) {
      auto& row = table.rows[n];
      row.push_back(b.sigma_i[n]);
      for (std::size_t j = 0; j < observables.size(); ++j) {
        row.push_back(b.pi[j][n].real());
        row.push_back(b.pi[j][n].imag());
      }
      for (std::size_t j = 0; j < observables.size(); ++j) {
        row.push_back(std::abs(a.pi[j][n] - b.pi[j][n]));
      }
    }
  } else {
    const FilterTable ft = run_filter(record, model, rho0, observables, fo);
    table = filter_table(ft, observables);
    if (ft.positivity.repairs > 0) {
      err << "note: positivity repaired on " << ft.positivity.repairs << " steps\n";
    }
  }
  emit(o.out.empty() ? "" : (fs::path(o.out) / ("filter" + ext)).string(), render(table, o.format), out);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  IdentitySuiteOptions vo;
  vo.dims = parse_dims(o.dims);
  vo.seeds = o.seeds;
  vo.seed = o.seed;
  vo.tol = o.verify_tol;
  vo.k_form = parse_k_form(o.k_form);
  const auto results = run_identity_suite(vo);
  bool pass = true;
  json ids = json::array();
  for (const auto& r : results) {
    pass = pass && r.pass;
    ids.push_back(json{{"name", r.name},
                       {"cases", r.cases},
                       {"max_defect", r.max_defect},
                       {"threshold", r.threshold},
                       {"pass", r.pass}});
  }
  json rep{{"dims", vo.dims}, {"seeds", vo.seeds},   {"seed", vo.seed},
           {"k_form", o.k_form}, {"identities", ids}, {"pass", pass}};
  emit(o.out, dump(rep), out);
  return pass ? kOk : kVerifyFailed;
}

int cmd_classical(const Options& o, std::ostream& out) {
  using namespace classical;
  const ClassicalModel m = io::classical_model_from_json(load_model_document(o, presets::Kind::kClassical));
  const std::size_t cap = o.cap == 0 ? 40 : o.cap;

  json gauge = json::array();
  for (const auto& row : gauge_field(m)) {
    json r = json::array();
    for (const auto& f : row) r.push_back(f.to_string());
    gauge.push_back(std::move(r));
  }
  const PolyDiffOp gen = dmz_generator(m);
  const BenesVerdict benes = benes_class(m);
  json rep{{"model", io::classical_model_to_json(m)},
           {"dmz_generator", gen.to_string()},
           {"gauge_field", gauge},
           {"phi", potential_phi(m).to_string()},
           {"is_exact", is_exact(m)},
           {"completed_square_holds", completed_square(m) == gen},
           {"benes_class", {{"is_benes", benes.is_benes}, {"reasons", benes.reasons}}}};

  const ClassicalClosureReport c = classical_closure(m, cap);
  json basis = json::array();
  for (const auto& b : c.basis) basis.push_back(b.to_string());
  rep["closure"] = {{"outcome", c.finite() ? "finite" : "cap_exceeded"},
                    {"dimension", c.dimension},
                    {"growth_trace", c.growth_trace},
                    {"bracket_count", c.bracket_count},
                    {"cap", cap},
                    {"basis", basis}};
  emit(o.out, dump(rep), out);
  return c.finite() ? kOk : kCapExceeded;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum and classical estimation algebras and filters", "estalg"};
  app.require_subcommand(1);
  auto add_model = [&](CLI::App* c) {
    c->add_option("--model", o.model, "Model JSON file");
    c->add_option("--preset", o.preset, "Embedded model (" + [] {
      std::string s;
      for (const auto& n : presets::names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }() + ")");
    c->add_option("--out", o.out, "Output path (stdout if absent)");
  };

  auto* closure = app.add_subcommand("closure", "Operator and super-operator estimation algebras");
  add_model(closure);
  closure->add_option("--scheme", o.scheme, "Measurement scheme JSON file");
  closure->add_option("--tol", o.tol, "Independence tolerance")->check(CLI::PositiveNumber);
  closure->add_option("--cap", o.cap, "Dimension cap (default: ambient dimension)")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Generate or replay a record and run the filter");
  add_model(simulate);
  simulate->add_option("--scheme", o.scheme, "Measurement scheme JSON file");
  simulate->add_option("--dt", o.dt, "Time step")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", o.horizon, "Final time T")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--ensemble", o.ensemble, "Number of trajectories (0: single record)");
  simulate->add_option("--picture", o.picture)->check(CLI::IsMember({"density", "pure"}));
  simulate->add_option("--form", o.form)->check(CLI::IsMember({"ito", "strat", "both"}));
  simulate->add_option("--ito-scheme", o.ito_scheme)->check(CLI::IsMember({"euler", "milstein", "kraus"}));
  simulate->add_option("--record", o.record, "Replay this record CSV")->check(CLI::ExistingFile);
  simulate->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  simulate->get_option("--out")->description("Output directory (filter to stdout if absent)");
  o.format = "csv";

  auto* verify = app.add_subcommand("verify", "Identity suite over seeded random models");
  verify->add_option("--dims", o.dims, "Comma-separated dimensions");
  verify->add_option("--seeds", o.seeds, "Models per dimension")->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--tol", o.verify_tol, "Pass threshold")->check(CLI::PositiveNumber);
  verify->add_option("--k-form", o.k_form)
      ->check(CLI::IsMember({"derived", "paper-2.3", "paper-eq-Kcomplete"}));
  verify->add_option("--out", o.out, "Output path (stdout if absent)");

  auto* classical = app.add_subcommand("classical", "Classical polynomial estimation algebra");
  add_model(classical);
  classical->add_option("--cap", o.cap, "Dimension cap (default 40)")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store{"estalg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*closure) return cmd_closure(o, out);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*verify) return cmd_verify(o, out);
    return cmd_classical(o, out);
  } catch (const FilterDegeneracy& e) {
    err << "error: " << e.what() << "\n";
    return kFilterDegeneracy;
  } catch (const NumericalBlowUp& e) {
    err << "error: " << e.what() << "\n";
    return kFilterDegeneracy;
  } catch (const DegreeGuardError& e) {
    err << "error: " << e.what() << "\n";
    return kDegreeGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace estalg::cli
