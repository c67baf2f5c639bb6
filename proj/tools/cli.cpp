#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <CLI11.hpp>

#include "men/classify3.hpp"
#include "men/inference.hpp"
#include "men/io.hpp"

namespace men::cli {
namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string probability_text(double p) { return num(std::clamp(p, 0.0, 1.0)); }

std::string set_text(const QubitSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
  return out + "}";
}

std::string edge_list(const MenGraph& g) {
  std::string out = "nodes " + std::to_string(g.num_nodes()) + "\nedges " + std::to_string(g.edge_count()) + "\n";
  for (const auto& [i, j] : g.edges()) out += std::to_string(i) + " " + std::to_string(j) + "\n";
  return out;
}

std::string zero_warning(bool warn) {
  return warn ? "warning: ZeroAmplitudeWarning: amplitudes at or below the zero threshold; verdicts use the robust "
                "slice-rank test\n"
              : "";
}

struct Loaded {
  FileKind kind;
  std::optional<PureState> state;
  std::optional<MenModel> model;
  int num_qubits() const { return state ? state->num_qubits() : model->num_qubits(); }
};

Loaded load(const std::string& path, const ToleranceConfig& tol) {
  const std::string text = read_text_file(path);
  if (detect_kind(text) == FileKind::state) return {FileKind::state, state_from_json(text), std::nullopt};
  return {FileKind::model, std::nullopt, model_from_json(text, tol)};
}

PureState load_state(const std::string& path) {
  const std::string text = read_text_file(path);
  if (detect_kind(text) != FileKind::state) throw Error(ErrorCode::FileFormat, path + " is not a state file");
  return state_from_json(text);
}

Assignment parse_or_usage(const std::string& text, int n) {
  try {
    return parse_assignment(text, n);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidAssignment) throw UsageError(e.what());
    throw;
  }
}

double model_probability(const MenModel& model, const Assignment& x) {
  const QueryResult r = model.graph.is_path() ? chain_marginal_ratio(model, x) : marginal_ratio(model, x);
  return std::exp(r.log_value + 2.0 * model.log_reference_modulus);
}

struct Options {
  std::string input;
  std::string output;
  std::string check;
  std::string assign;
  std::string query;
  std::string evidence;
  std::string sizes = "500,1000,2000";
  double tolerance = ToleranceConfig{}.rel_eps;
  bool dot = false;
  bool ratio = false;
  bool no_timing = false;
  int qubit = 0;
  int outcome = 0;
  int samples = 256;
  int repetitions = 9;
  std::uint64_t seed = 7;
};

void cmd_graph(const Options& o, std::ostream& out, std::ostream& err) {
  ToleranceConfig tol;
  tol.rel_eps = o.tolerance;
  tol.validate();
  const PureState psi = load_state(o.input);
  const GraphExtraction g = build_graph(psi, tol);
  err << zero_warning(g.zero_amplitude_warning);
  out << (o.dot ? export_dot(g.graph) : edge_list(g.graph));
}

void cmd_extract(const Options& o, std::ostream& out) {
  const MenModel model = extract_men(load_state(o.input));
  write_text_file(o.output, model_to_json(model));
  out << edge_list(model.graph) << "reference " << model.reference.to_string() << "\n"
      << "reference_modulus " << num(model.reference_modulus) << "\n";
}

void cmd_reconstruct(const Options& o, std::ostream& out) {
  const MenModel model = model_from_json(read_text_file(o.input));
  const PureState psi = reconstruct_state(model);
  write_text_file(o.output, state_to_json(psi));
  out << "qubits " << psi.num_qubits() << "\n";
  if (!o.check.empty()) out << "fidelity " << num(fidelity_up_to_phase(psi, load_state(o.check))) << "\n";
}

void cmd_marginal(const Options& o, std::ostream& out) {
  const Loaded in = load(o.input, {});
  const Assignment x = parse_or_usage(o.assign, in.num_qubits());
  if (in.state) {
    const double p = marginal_probability(*in.state, x);
    if (!o.ratio) {
      out << "probability " << probability_text(p) << "\n";
      return;
    }
    const double p0 = std::norm(in.state->amplitude(Assignment::zeros(in.num_qubits())));
    if (p0 <= 0.0) throw Error(ErrorCode::ZeroReferenceAmplitude, "a(x0) vanishes");
    out << "ratio " << num(p / p0) << "\n";
    return;
  }
  const MenModel& model = *in.model;
  if (o.ratio) {
    const QueryResult r = model.graph.is_path() ? chain_marginal_ratio(model, x) : marginal_ratio(model, x);
    out << "ratio " << num(r.value) << "\n";
  } else {
    out << "probability " << probability_text(model_probability(model, x)) << "\n";
  }
}

void cmd_conditional(const Options& o, std::ostream& out) {
  const Loaded in = load(o.input, {});
  const Assignment q = parse_or_usage(o.query, in.num_qubits());
  const Assignment e = parse_or_usage(o.evidence, in.num_qubits());
  const double p = in.state ? conditional_probability(*in.state, q, e) : conditional_probability(*in.model, q, e);
  out << "probability " << probability_text(p) << "\n";
}

void cmd_mle(const Options& o, std::ostream& out) {
  const Loaded in = load(o.input, {});
  MleResult r;
  if (in.state) {
    r = mle_brute_force(*in.state);
  } else if (in.model->graph.is_path()) {
    r = mle_chain(*in.model);
  } else {
    r = mle_brute_force(reconstruct_state(*in.model));
  }
  out << "assignment " << r.assignment.to_string() << "\nprobability " << probability_text(r.probability) << "\n";
}

void cmd_measure(const Options& o, std::ostream& out, std::ostream& err) {
  const PureState psi = load_state(o.input);
  const GraphExtraction prior = build_graph(psi);
  const MeasurementUpdate u = measure_and_update(psi, prior.graph, o.qubit, o.outcome);
  write_text_file(o.output, state_to_json(u.collapsed));
  out << "probability " << probability_text(u.probability) << "\n";
  err << zero_warning(u.zero_amplitude_warning);
  out << edge_list(u.graph);
  out << "contained " << (u.edges_contained ? "yes" : "no") << "\n";
}

void cmd_classify(const Options& o, std::ostream& out) {
  const Classification c = classify_with_census(load_state(o.input), o.samples, o.seed);
  out << "class " << c.cls.to_string() << "\n";
  if (c.census) out << c.census->to_text();
}

void cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const PureState psi = load_state(o.input);
  if (psi.num_qubits() > 6) throw Error(ErrorCode::EnumerationBoundExceeded, "verify supports n <= 6");
  const GraphExtraction g = build_graph(psi);
  err << zero_warning(g.zero_amplitude_warning);
  out << edge_list(g.graph);
  const PerfectMapReport map = verify_perfect_map(psi, g.graph, {}, 6);
  out << "perfect_map " << (map.passed() ? "pass" : "fail") << " partitions " << map.partitions_checked
      << " mismatches " << map.mismatches.size() << "\n";
  for (const auto& m : map.mismatches) {
    out << "  mismatch A=" << set_text(m.a) << " B=" << set_text(m.b) << " C=" << set_text(m.c)
        << " separable=" << (m.separable ? "yes" : "no") << " separated=" << (m.separated ? "yes" : "no") << "\n";
  }
  const GraphoidReport axioms = check_graphoid_axioms(psi, {}, 6);
  for (GraphoidAxiom a : kGraphoidAxioms) {
    out << "axiom " << axiom_name(a) << " instances " << axioms.instances[static_cast<std::size_t>(a)]
        << " violations " << axioms.violation_count(a) << "\n";
  }
}

void cmd_bench(const Options& o, std::ostream& out) {
  std::vector<int> sizes;
  std::stringstream ss(o.sizes);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      sizes.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--sizes expects comma-separated integers, got '" + item + "'");
    }
  }
  BenchOptions options;
  options.repetitions = o.repetitions;
  options.timing = !o.no_timing;
  out << bench_chains(sizes, o.seed, options).to_text();
  out << "# quoted prefix count 6(n-m)+2m-1 is printed alongside the measured prefix_marginal count (m = n/2)\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markovian entanglement network tools", "men"};
  app.require_subcommand(1);
  Options o;

  auto* graph = app.add_subcommand("graph", "Print the network graph of a state");
  graph->add_option("state", o.input)->required();
  graph->add_flag("--dot", o.dot, "Emit DOT text");
  graph->add_option("--tolerance", o.tolerance, "Relative tolerance for vanishing minors")
      ->check(CLI::PositiveNumber);

  auto* extract = app.add_subcommand("extract", "Extract a network model from a state");
  extract->add_option("state", o.input)->required();
  extract->add_option("-o,--output", o.output)->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild a state from a model");
  reconstruct->add_option("model", o.input)->required();
  reconstruct->add_option("-o,--output", o.output)->required();
  reconstruct->add_option("--check", o.check, "Original state; prints the fidelity");

  auto* marginal = app.add_subcommand("marginal", "Marginal probability (or ratio to the reference)");
  marginal->add_option("file", o.input)->required();
  marginal->add_option("--assign", o.assign)->required();
  marginal->add_flag("--ratio", o.ratio);

  auto* conditional = app.add_subcommand("conditional", "Conditional probability");
  conditional->add_option("file", o.input)->required();
  conditional->add_option("--query", o.query)->required();
  conditional->add_option("--evidence", o.evidence)->required();

  auto* mle = app.add_subcommand("mle", "Most likely assignment");
  mle->add_option("file", o.input)->required();

  auto* measure = app.add_subcommand("measure", "Measure one qubit and rebuild the graph");
  measure->add_option("state", o.input)->required();
  measure->add_option("--qubit", o.qubit)->required();
  measure->add_option("--outcome", o.outcome)->required()->check(CLI::Range(0, 1));
  measure->add_option("-o,--output", o.output)->required();

  auto* classify = app.add_subcommand("classify", "Classify a 3-qubit state");
  classify->add_option("state", o.input)->required();
  classify->add_option("--samples", o.samples)->check(CLI::NonNegativeNumber);
  classify->add_option("--seed", o.seed);

  auto* verify = app.add_subcommand("verify", "Perfect-map and graphoid-axiom report (n <= 6)");
  verify->add_option("state", o.input)->required();

  auto* bench = app.add_subcommand("bench", "Chain inference timing and operation counts");
  bench->add_option("--sizes", o.sizes);
  bench->add_option("--seed", o.seed);
  bench->add_option("--repetitions", o.repetitions)->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", o.no_timing, "Leave the wall-clock column empty");

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(graph)) cmd_graph(o, out, err);
    if (app.got_subcommand(extract)) cmd_extract(o, out);
    if (app.got_subcommand(reconstruct)) cmd_reconstruct(o, out);
    if (app.got_subcommand(marginal)) cmd_marginal(o, out);
    if (app.got_subcommand(conditional)) cmd_conditional(o, out);
    if (app.got_subcommand(mle)) cmd_mle(o, out);
    if (app.got_subcommand(measure)) cmd_measure(o, out, err);
    if (app.got_subcommand(classify)) cmd_classify(o, out);
    if (app.got_subcommand(verify)) cmd_verify(o, out, err);
    if (app.got_subcommand(bench)) cmd_bench(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    const std::string_view name = error_name(e.code());
    const std::string detail = std::string(e.what()).substr(name.size() + 2);
    err << "error: " << name << ": " << error_summary(e.code()) << " (" << detail << ")\n";
    return kExitDomain;
  }
  return 0;
}

}  // namespace men::cli
