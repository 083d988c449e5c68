// hbspectra: command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 property falsified,
// 3 I/O or parse error, 4 internal error.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hbspectra/hbspectra.hpp"

namespace {

using namespace hbspectra;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitFalsified = 2;
constexpr int kExitParse = 3;
constexpr int kExitInternal = 4;

// What a subcommand produces: machine-readable results plus the text shown
// without --json.
struct Outcome {
  Json inputs = Json::object();
  Json results = Json::object();
  std::ostringstream text;
  int exit_code = kExitOk;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, ',')) out.emplace_back(detail::trim(cell));
  return out;
}

std::vector<std::uint64_t> parse_margins(const std::string& s, const char* what) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split_list(s)) {
    if (!detail::all_digits(tok)) throw ParseError(std::string(what) + ": expected comma-separated integers, got '" + s + "'");
    out.push_back(std::stoull(tok));
  }
  if (out.empty()) throw ParseError(std::string(what) + " is empty");
  return out;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

Json matrix_json(const StateSpace& space, const RMatrix& m) {
  return {{"states", space.labels()}, {"entries", matrix_to_json(m)}};
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << content;
}

bool is_json_path(const fs::path& p) { return p.extension() == ".json"; }

// ---------------------------------------------------------------------------
// Chain input: a heat-bath spec JSON or a matrix CSV.

struct ChainInput {
  std::optional<StochasticMatrix> chain;
  std::optional<TargetDistribution> pi;
  std::string kind;
};

ChainInput load_chain(const fs::path& path, const std::string& pi_flag, Outcome& out) {
  ChainInput in;
  if (is_json_path(path)) {
    const HeatBathSpec spec = read_spec(path);
    const ValidationReport report = validate_spec(spec);
    if (!report.ok()) {
      out.results["validation"] = to_json(report);
      throw ValidationError("spec fails validation: " + report.violations.front().message);
    }
    in.kind = "spec";
    in.chain = build_chain(spec);
    in.pi = spec.target();
    return in;
  }
  in.kind = "matrix";
  LabelledMatrix lm = read_matrix_csv(path);
  if (!lm.matrix.is_square()) throw ValidationError("matrix is not square");
  const StateSpace space(lm.labels);
  if (check_stochastic(lm.matrix) != Stochasticity::stochastic) throw ValidationError("matrix is not row-stochastic");
  std::vector<Rational> probs;
  if (!pi_flag.empty()) {
    for (const auto& tok : split_list(pi_flag)) probs.push_back(parse_rational(tok));
    out.inputs["pi"] = "given";
  } else {
    auto stationary = stationary_distribution(lm.matrix);
    if (!stationary) throw ValidationError("chain is not irreducible; pass --pi to fix the target distribution");
    probs = std::move(*stationary);
    out.inputs["pi"] = "stationary";
  }
  in.pi = TargetDistribution(space, std::move(probs));
  in.chain = StochasticMatrix(space, std::move(lm.matrix));
  return in;
}

// ---------------------------------------------------------------------------
// Subcommands

struct ValidateArgs {
  std::string spec;
};

void cmd_validate(const ValidateArgs& a, Outcome& out) {
  out.inputs["spec"] = a.spec;
  const HeatBathSpec spec = read_spec(a.spec);
  const ValidationReport report = validate_spec(spec);
  out.results = to_json(report);
  if (report.ok()) {
    out.text << "valid: " << spec.states.size() << " states, " << spec.labels.size() << " labels\n";
    return;
  }
  out.text << "invalid: " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) {
    out.text << "  " << v.axiom;
    if (!v.label.empty()) out.text << " [" << v.label << "]";
    out.text << ": " << v.message;
    if (v.witness && *v.witness < spec.states.size()) out.text << " (state '" << spec.states[*v.witness] << "')";
    out.text << '\n';
  }
  out.exit_code = kExitValidation;
}

struct BuildArgs {
  std::string spec;
  std::string out;
  bool lazy = false;
};

void cmd_build(const BuildArgs& a, bool json, Outcome& out) {
  out.inputs["spec"] = a.spec;
  out.inputs["lazy"] = a.lazy;
  const HeatBathSpec spec = read_spec(a.spec);
  require_valid(spec);
  StochasticMatrix chain = build_chain(spec);
  if (a.lazy) chain = lazify(chain);
  std::ostringstream csv;
  write_matrix_csv(csv, chain.space().labels(), chain.matrix());
  if (!a.out.empty()) {
    write_text_file(a.out, csv.str());
    out.inputs["out"] = a.out;
    out.text << "wrote " << chain.size() << "x" << chain.size() << " chain to " << a.out << '\n';
  } else if (!json) {
    out.text << csv.str();
  }
  out.results["chain"] = matrix_json(chain.space(), chain.matrix());
}

struct SpectrumArgs {
  std::string input;
  std::string pi;
  double eps = 0.01;
  double tol = 1e-9;
  std::string eigs_out;
};

void cmd_spectrum(const SpectrumArgs& a, Outcome& out) {
  out.inputs["input"] = a.input;
  out.inputs["eps"] = a.eps;
  out.inputs["tol"] = a.tol;
  if (!(a.eps > 0.0 && a.eps < 1.0)) throw ValidationError("--eps must lie in (0, 1)");
  if (!(a.tol >= 0.0)) throw ValidationError("--tol must be nonnegative");
  const ChainInput in = load_chain(a.input, a.pi, out);
  out.inputs["kind"] = in.kind;
  if (!check_reversible(*in.chain, *in.pi))
    throw ValidationError("chain is not reversible with respect to its target distribution");

  SpectralReport report = certify_psd(*in.chain, *in.pi, a.tol);
  std::string refused;
  if (!report.is_ergodic) {
    refused = "chain is not ergodic";
  } else {
    try {
      report = with_mixing_bound(std::move(report), *in.pi, a.eps);
    } catch (const ValidationError& e) {
      refused = e.what();
    }
  }
  out.results["states"] = in.pi->space().labels();
  out.results["spectrum"] = to_json(report);
  if (!refused.empty()) out.results["mixing_bound_refused"] = refused;

  if (!a.eigs_out.empty()) {
    std::ostringstream csv;
    csv << "index,eigenvalue\n" << std::setprecision(17);
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) csv << i << ',' << report.eigenvalues[i] << '\n';
    write_text_file(a.eigs_out, csv.str());
  }

  auto& t = out.text;
  t << "states        " << in.pi->size() << '\n';
  t << "eigenvalues  ";
  for (double v : report.eigenvalues) t << ' ' << fmt(v);
  t << '\n';
  t << "lambda_1      " << (report.lambda_1 ? fmt(*report.lambda_1) : std::string("n/a")) << '\n';
  t << "lambda_min    " << fmt(report.lambda_min) << '\n';
  t << "lambda_star   " << fmt(report.lambda_star) << '\n';
  t << "psd           " << (report.psd ? "yes" : "NO") << " (" << to_string(report.certificate) << ", tol "
    << fmt(report.tolerance) << ")\n";
  t << "ergodic       " << (report.is_ergodic ? "yes" : "no") << '\n';
  if (report.mixing_bound)
    t << "tau(" << fmt(a.eps) << ") <=   " << fmt(report.mixing_bound->tau_upper) << '\n';
  else
    t << "mixing bound  refused: " << refused << '\n';

  if (!report.psd) {
    out.exit_code = kExitFalsified;
    std::cerr << "hbspectra: negative eigenvalue " << fmt(report.lambda_min) << " beyond tolerance\n";
  }
}

struct SiArgs {
  std::string matrix;
};

void print_si_class(std::ostream& t, const SiClass& c) {
  t << "verdict       " << to_string(c.kind) << '\n';
  if (c.is_si()) {
    t << "rank          " << c.rank << '\n';
    t << "zero columns  " << c.zero_columns << '\n';
  }
}

void cmd_si(const std::string& action, const SiArgs& a, Outcome& out) {
  out.inputs["matrix"] = a.matrix;
  out.inputs["action"] = action;
  const LabelledMatrix lm = read_matrix_csv(a.matrix);
  if (!lm.matrix.is_square()) throw ValidationError("matrix is not square");
  const StateSpace space(lm.labels);
  out.results["states"] = lm.labels;
  auto& t = out.text;

  if (action == "classify") {
    const SiClass c = si_classify(lm.matrix);
    out.results["class"] = to_json(c);
    if (c.kind == SiClass::Kind::not_idempotent) {
      const auto w = idempotence_witness(lm.matrix);
      out.results["class"]["witness"] = {{"row", w->row}, {"squared_row", rationals_to_json(w->squared_row)}};
    }
    print_si_class(t, c);
    return;
  }

  if (action == "decompose") {
    const SiClass c = si_classify(lm.matrix);
    if (!c.is_si()) throw ValidationError(std::string("matrix is not SI (") + to_string(c.kind) + ")");
    const SiDecomposition d = si_decompose(lm.matrix);
    const SiEquivalence eq = reversible_si_equivalence(lm.matrix);
    out.results["decomposition"] = to_json(d);
    Json ej{{"no_zero_columns", eq.no_zero_columns}, {"direct_sum", eq.direct_sum}, {"reversible", eq.reversible}};
    ej["witness"] = eq.witness ? rationals_to_json(*eq.witness) : Json(nullptr);
    out.results["equivalence"] = std::move(ej);

    t << "k = " << d.k() << " block(s), t = " << d.t() << " ephemeral state(s)\n";
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
      t << "  block " << b << ':';
      for (std::size_t i = 0; i < d.blocks[b].states.size(); ++i)
        t << ' ' << space.label(d.blocks[b].states[i]) << '=' << to_string(d.blocks[b].pi[i]);
      t << '\n';
    }
    for (std::size_t e = 0; e < d.ephemeral.size(); ++e) {
      t << "  ephemeral " << space.label(d.ephemeral[e]) << ": p =";
      for (const auto& v : d.coupling[e]) t << ' ' << to_string(v);
      t << '\n';
    }
    t << "reversible    " << (eq.reversible ? "yes" : "no") << '\n';
    return;
  }

  // settle
  if (check_stochastic(lm.matrix) != Stochasticity::stochastic) throw ValidationError("matrix is not row-stochastic");
  const FiniteConvergenceReport r = settle_analysis(lm.matrix);
  out.results["convergence"] = to_json(r);
  if (r.settles) {
    t << "settles at m = " << r.m << '\n';
    t << "spectrum in {0,1}  " << (r.spectrum_binary ? "yes" : "no") << '\n';
    t << "recurrent blocks   " << r.recurrent_blocks.size() << '\n';
    t << "strict form        " << (r.strict_form ? "yes" : "no") << '\n';
  } else {
    t << "does not settle within " << lm.matrix.rows() << " steps\n";
  }
}

struct ModelArgs {
  std::string graph;
  std::size_t q = 2;
  std::string w;
  std::optional<double> beta;
  std::string rows;
  std::string cols;
  bool verify = false;
  std::string out;
};

Rational model_weight(const ModelArgs& a, Outcome& out) {
  if (!a.w.empty() && a.beta) throw ValidationError("pass only one of --w and --beta");
  if (!a.w.empty()) {
    out.inputs["w"] = a.w;
    return parse_rational(a.w);
  }
  if (!a.beta) throw ValidationError("--w (or --beta) is required");
  const Rational w = approximate_rational(std::exp(*a.beta));
  std::cerr << "hbspectra: warning: --beta " << *a.beta << " replaced by the rational w = " << to_string(w)
            << "; pass --w for exact results\n";
  out.inputs["beta"] = *a.beta;
  out.inputs["w"] = to_string(w);
  return w;
}

Graph load_graph(const ModelArgs& a, Outcome& out) {
  if (a.graph.empty()) throw ValidationError("--graph is required");
  out.inputs["graph"] = a.graph;
  std::ifstream in(a.graph);
  if (!in) throw ParseError("cannot open '" + a.graph + "'");
  return Graph::parse_edge_list(in);
}

void emit_spec(const HeatBathSpec& spec, const ModelArgs& a, bool json, Outcome& out) {
  const Json sj = spec_to_json(spec);
  if (!a.out.empty()) {
    write_text_file(a.out, sj.dump(2) + "\n");
    out.inputs["out"] = a.out;
    out.text << "wrote spec with " << spec.states.size() << " states and " << spec.labels.size() << " labels to "
             << a.out << '\n';
  } else if (!json) {
    out.text << sj.dump(2) << '\n';
  }
  out.results["states"] = spec.states.size();
  out.results["labels"] = spec.labels.size();
  out.results["spec"] = sj;
}

void cmd_model(const std::string& kind, const ModelArgs& a, bool json, Outcome& out) {
  out.inputs["model"] = kind;
  if (kind == "contingency") {
    ContingencyInstance inst{parse_margins(a.rows, "--rows"), parse_margins(a.cols, "--cols")};
    out.inputs["rows"] = inst.rows;
    out.inputs["cols"] = inst.cols;
    emit_spec(build_contingency_chain(inst), a, json, out);
    return;
  }

  const Graph g = load_graph(a, out);
  out.inputs["q"] = a.q;
  if (kind == "sw") {
    const Rational w = model_weight(a, out);
    const SwendsenWangTriple sw = build_swendsen_wang(g, a.q, w);
    const TransferReport report = verify_transfer_conditions(sw.R, sw.T, sw.pi, sw.mu);
    out.results["omega_size"] = sw.pi.size();
    out.results["omega_prime_size"] = sw.mu.size();
    out.results["transfer"] = to_json(report);
    out.text << "|Omega| = " << sw.pi.size() << ", |Omega'| = " << sw.mu.size() << '\n';
    out.text << "transfer conditions  " << (report.ok() ? "all pass" : "FAIL") << '\n';
    if (!a.out.empty()) {
      write_bundle(a.out, sw.pi, sw.mu, sw.R, sw.T);
      out.inputs["out"] = a.out;
      out.text << "wrote triple bundle to " << a.out << '\n';
    }
    if (a.verify) {
      const bool equal = direct_swendsen_wang(g, a.q, w).matrix() == sw.P.matrix();
      out.results["verify"] = equal ? "equal" : "differ";
      out.text << "RTR* = direct: " << (equal ? "equal" : "DIFFER") << '\n';
      if (!equal) throw PropertyFalsified("RTR* differs from the directly summed Swendsen-Wang matrix");
    }
    return;
  }

  SpinSystem sys;
  if (kind == "potts") {
    sys = potts(g, a.q, model_weight(a, out));
  } else if (kind == "ising") {
    sys = ising(g, model_weight(a, out));
  } else {
    sys = proper_colourings(g, a.q);
  }
  const HeatBathSpec spec = build_spin_heatbath(sys);
  if (a.verify) {
    const bool equal = build_chain(spec).matrix() == spin_heatbath_direct(sys);
    out.results["verify"] = equal ? "equal" : "differ";
    std::cerr << "heat-bath partition = direct: " << (equal ? "equal" : "DIFFER") << '\n';
    if (!equal) throw PropertyFalsified("partition-built chain differs from the entrywise single-site update");
  }
  emit_spec(spec, a, json, out);
}

struct TransferArgs {
  std::string bundle;
  std::string out;
  double tol = 1e-9;
};

void cmd_transfer(const TransferArgs& a, Outcome& out) {
  out.inputs["bundle"] = a.bundle;
  const TransferBundle b = read_bundle(a.bundle);
  const TransferReport report = verify_transfer_conditions(b.R, b.T, b.pi, b.mu, a.tol);
  out.results["transfer"] = to_json(report);
  for (const auto& c : report.checks) {
    out.text << std::left << std::setw(20) << c.name << (c.passed ? "pass" : "FAIL");
    if (!c.detail.empty()) out.text << "  " << c.detail;
    out.text << '\n';
  }
  if (!report.ok()) {
    out.exit_code = kExitValidation;
    return;
  }
  const StochasticMatrix p = compose_transfer(b.R, b.T, b.pi, b.mu, a.tol);
  const SpectralReport spectrum = certify_psd(p, b.pi, a.tol);
  out.results["chain"] = matrix_json(p.space(), p.matrix());
  out.results["spectrum"] = to_json(spectrum);
  out.text << "P = R T R* on " << p.size() << " states, lambda_min = " << fmt(spectrum.lambda_min) << '\n';
  if (!a.out.empty()) {
    std::ostringstream csv;
    write_matrix_csv(csv, p.space().labels(), p.matrix());
    write_text_file(a.out, csv.str());
    out.inputs["out"] = a.out;
    out.text << "wrote P to " << a.out << '\n';
  }
}

struct SimulateArgs {
  std::string spec;
  std::size_t steps = 0;
  std::optional<std::uint64_t> seed;
  std::string start;
  std::string out;
};

void cmd_simulate(const SimulateArgs& a, bool json, Outcome& out) {
  out.inputs["spec"] = a.spec;
  if (!a.seed) throw ValidationError("--seed is required");
  const HeatBathSpec spec = read_spec(a.spec);
  require_valid(spec);
  const StateSpace space = spec.space();
  const std::size_t start = a.start.empty() ? 0 : space.index_of(a.start);
  out.inputs["steps"] = a.steps;
  out.inputs["seed"] = *a.seed;
  out.inputs["start"] = space.label(start);

  const HeatBathSampler sampler(spec);
  const auto path = sampler.trajectory({*a.seed, a.steps, start});
  std::ostringstream csv;
  write_trajectory_csv(csv, path, space);
  const auto freq = occupation(path, space.size());
  const auto pi = spec.target().to_double();

  out.results["final_state"] = space.label(path.back());
  out.results["occupation"] = freq;
  out.results["tv_occupation_to_pi"] = tv_distance(freq, pi);
  if (!a.out.empty()) {
    write_text_file(a.out, csv.str());
    out.inputs["out"] = a.out;
    out.text << "wrote " << path.size() << " states to " << a.out << '\n';
    out.text << "tv(occupation, pi) = " << fmt(tv_distance(freq, pi)) << '\n';
  } else if (!json) {
    out.text << csv.str();
  }
}

// ---------------------------------------------------------------------------

void emit(const std::string& command, const Outcome& out, bool json, const std::optional<Json>& error,
          std::chrono::steady_clock::duration elapsed) {
  if (!json) {
    std::cout << out.text.str();
    return;
  }
  Json report;
  report["schema"] = "hbspectra/1";
  report["command"] = command;
  report["inputs"] = out.inputs;
  report["results"] = out.results;
  if (error) report["error"] = *error;
  report["exit_code"] = out.exit_code;
  report["timing"] = {{"elapsed_ms", std::chrono::duration<double, std::milli>(elapsed).count()}};
  std::cout << report.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-bath chains: construction, spectra, SI canonical forms, lifted chains"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Emit a RunReport JSON document");

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check a heat-bath spec");
  validate->add_option("spec", validate_args.spec, "Spec JSON")->required();

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "Write the transition matrix of a spec as CSV");
  build->add_option("spec", build_args.spec, "Spec JSON")->required();
  build->add_option("--out", build_args.out, "Output CSV path (default: stdout)");
  build->add_flag("--lazy", build_args.lazy, "Lazify: (I + P) / 2");

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues, PSD certificate and mixing bound");
  spectrum->add_option("input", spectrum_args.input, "Spec JSON or matrix CSV")->required();
  spectrum->add_option("--pi", spectrum_args.pi, "Target distribution for a matrix input, comma-separated");
  spectrum->add_option("--eps", spectrum_args.eps, "Mixing-time accuracy")->capture_default_str();
  spectrum->add_option("--tol", spectrum_args.tol, "Negative-eigenvalue tolerance")->capture_default_str();
  spectrum->add_option("--eigs-out", spectrum_args.eigs_out, "Write eigenvalues as CSV");

  std::string si_action;
  SiArgs si_args;
  auto* si = app.add_subcommand("si", "Stochastic idempotent matrices");
  si->add_option("action", si_action, "classify | decompose | settle")
      ->required()
      ->check(CLI::IsMember({"classify", "decompose", "settle"}));
  si->add_option("matrix", si_args.matrix, "Matrix CSV")->required();

  std::string model_kind;
  ModelArgs model_args;
  auto* model = app.add_subcommand("model", "Build a model chain");
  model->add_option("kind", model_kind, "potts | ising | coloring | contingency | sw")
      ->required()
      ->check(CLI::IsMember({"potts", "ising", "coloring", "contingency", "sw"}));
  model->add_option("--graph", model_args.graph, "Edge list file");
  model->add_option("--q", model_args.q, "Number of spin values")->capture_default_str();
  model->add_option("--w", model_args.w, "Rational e^beta");
  model->add_option("--beta", model_args.beta, "Inverse temperature (approximated by a rational w)");
  model->add_option("--rows", model_args.rows, "Row sums, comma-separated");
  model->add_option("--cols", model_args.cols, "Column sums, comma-separated");
  model->add_flag("--verify", model_args.verify, "Cross-check against the direct construction");
  model->add_option("--out", model_args.out, "Output path (spec JSON, or bundle directory for sw)");

  TransferArgs transfer_args;
  auto* transfer = app.add_subcommand("transfer", "Check and compose a lifted triple R, T, R*");
  transfer->add_option("bundle", transfer_args.bundle, "Triple bundle JSON")->required();
  transfer->add_option("--out", transfer_args.out, "Write P as CSV");
  transfer->add_option("--tol", transfer_args.tol, "Negative-eigenvalue tolerance")->capture_default_str();

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Seeded heat-bath trajectory");
  simulate->add_option("spec", simulate_args.spec, "Spec JSON")->required();
  simulate->add_option("--steps", simulate_args.steps, "Number of steps")->required();
  simulate->add_option("--seed", simulate_args.seed, "RNG seed")->required();
  simulate->add_option("--start", simulate_args.start, "Start state label (default: first state)");
  simulate->add_option("--out", simulate_args.out, "Trajectory CSV path (default: stdout)");

  for (auto* sub : {validate, build, spectrum, si, model, transfer, simulate})
    sub->add_flag("--json", json, "Emit a RunReport JSON document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Outcome out;
  std::optional<Json> error;
  const auto t0 = std::chrono::steady_clock::now();
  auto fail = [&](int code, const char* kind, const std::string& message) {
    out.exit_code = code;
    error = Json{{"kind", kind}, {"message", message}};
    std::cerr << "hbspectra: " << message << '\n';
  };

  try {
    if (sub == validate) cmd_validate(validate_args, out);
    else if (sub == build) cmd_build(build_args, json, out);
    else if (sub == spectrum) cmd_spectrum(spectrum_args, out);
    else if (sub == si) cmd_si(si_action, si_args, out);
    else if (sub == model) cmd_model(model_kind, model_args, json, out);
    else if (sub == transfer) cmd_transfer(transfer_args, out);
    else cmd_simulate(simulate_args, json, out);
  } catch (const ValidationError& e) {
    fail(kExitValidation, "validation", e.what());
  } catch (const PropertyFalsified& e) {
    fail(kExitFalsified, "property-falsified", e.what());
  } catch (const ParseError& e) {
    fail(kExitParse, "parse", e.what());
  } catch (const fs::filesystem_error& e) {
    fail(kExitParse, "io", e.what());
  } catch (const std::exception& e) {
    fail(kExitInternal, "internal", e.what());
  }

  emit(command, out, json, error, std::chrono::steady_clock::now() - t0);
  return out.exit_code;
}
