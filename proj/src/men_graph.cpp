#include "men/men_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "chain_detail.hpp"

namespace men {
namespace {

using cd = std::complex<double>;

constexpr int kExhaustiveAuditQubits = 10;
constexpr int kSampledAuditContexts = 64;
constexpr int kMaxDenseQubits = 26;

/// Relative amplitude for a basis index (n <= 63).
cd relative_amplitude_index(const MenModel& model, std::uint64_t index, std::uint64_t ref_index) {
  const int n = model.num_qubits();
  cd product(1.0, 0.0);
  for (int i = 1; i <= n; ++i) {
    const auto& table = model.potentials[static_cast<std::size_t>(i - 1)];
    std::size_t key = (index & qubit_bit(i, n)) ? 1 : 0;
    for (int j : table.neighbors) {
      const std::uint64_t source = j < i ? index : ref_index;
      key = (key << 1) | ((source & qubit_bit(j, n)) ? 1 : 0);
    }
    product *= table.values[key];
  }
  return product;
}

bool close_relative(cd x, cd y, const ToleranceConfig& tol) {
  return std::abs(x - y) <= tol.abs_eps + tol.rel_eps * std::max(std::abs(x), std::abs(y));
}

}  // namespace

// MenGraph ------------------------------------------------------------------

MenGraph::MenGraph(int num_nodes) : adjacency_(static_cast<std::size_t>(std::max(num_nodes, 0))) {
  if (num_nodes < 0) throw Error(ErrorCode::InvalidModel, "negative node count");
}

MenGraph::MenGraph(int num_nodes, const std::vector<Edge>& edges) : MenGraph(num_nodes) {
  for (const auto& [i, j] : edges) add_edge(i, j);
}

MenGraph MenGraph::path(int num_nodes) {
  MenGraph g(num_nodes);
  for (int i = 1; i < num_nodes; ++i) g.add_edge(i, i + 1);
  return g;
}

MenGraph MenGraph::complete(int num_nodes) {
  MenGraph g(num_nodes);
  for (int i = 1; i <= num_nodes; ++i) {
    for (int j = i + 1; j <= num_nodes; ++j) g.add_edge(i, j);
  }
  return g;
}

void MenGraph::check_node(int i) const {
  if (i < 1 || i > num_nodes()) {
    throw Error(ErrorCode::InvalidModel, "node " + std::to_string(i) + " outside 1.." + std::to_string(num_nodes()));
  }
}

void MenGraph::add_edge(int i, int j) {
  check_node(i);
  check_node(j);
  if (i == j) throw Error(ErrorCode::InvalidModel, "self-loop on node " + std::to_string(i));
  auto insert = [](std::vector<int>& list, int v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
  };
  insert(adjacency_[static_cast<std::size_t>(i - 1)], j);
  insert(adjacency_[static_cast<std::size_t>(j - 1)], i);
}

bool MenGraph::has_edge(int i, int j) const {
  check_node(i);
  check_node(j);
  const auto& list = adjacency_[static_cast<std::size_t>(i - 1)];
  return std::binary_search(list.begin(), list.end(), j);
}

std::vector<Edge> MenGraph::edges() const {
  std::vector<Edge> out;
  for (int i = 1; i <= num_nodes(); ++i) {
    for (int j : adjacency_[static_cast<std::size_t>(i - 1)]) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t MenGraph::edge_count() const {
  std::size_t degree_sum = 0;
  for (const auto& list : adjacency_) degree_sum += list.size();
  return degree_sum / 2;
}

const std::vector<int>& MenGraph::neighbors(int i) const {
  check_node(i);
  return adjacency_[static_cast<std::size_t>(i - 1)];
}

bool MenGraph::is_path() const {
  const int n = num_nodes();
  if (n < 1) return false;
  if (edge_count() != static_cast<std::size_t>(n - 1)) return false;
  for (int i = 1; i < n; ++i) {
    if (!has_edge(i, i + 1)) return false;
  }
  return true;
}

bool MenGraph::is_subgraph_of(const MenGraph& other) const {
  if (other.num_nodes() != num_nodes()) return false;
  for (const auto& [i, j] : edges()) {
    if (!other.has_edge(i, j)) return false;
  }
  return true;
}

// Tables and model ----------------------------------------------------------

std::size_t QFunctionTable::key_of(const Assignment& x) const {
  std::size_t key = static_cast<std::size_t>(x[node]);
  for (int j : neighbors) key = (key << 1) | static_cast<std::size_t>(x[j]);
  return key;
}

std::string QFunctionTable::key_string(std::size_t key) const {
  const std::size_t width = neighbors.size() + 1;
  std::string s(width, '0');
  for (std::size_t k = 0; k < width; ++k) {
    if (key & (std::size_t{1} << (width - 1 - k))) s[k] = '1';
  }
  return s;
}

cd MenModel::pinned_q(int i, const Assignment& x) const {
  const auto& table = potentials[static_cast<std::size_t>(i - 1)];
  std::size_t key = static_cast<std::size_t>(x[i]);
  for (int j : table.neighbors) {
    key = (key << 1) | static_cast<std::size_t>(j < i ? x[j] : reference[j]);
  }
  return table.values[key];
}

void MenModel::set_log_reference_modulus(double log_modulus) {
  log_reference_modulus = log_modulus;
  reference_modulus = std::exp(log_modulus);
}

// Extraction ------------------------------------------------------------------

cd q_value(const PureState& psi, const QubitSet& m, const Assignment& x_m, const Assignment& ctx,
           const Assignment& x0, const ToleranceConfig& tol) {
  const int n = psi.num_qubits();
  const QubitSet set = normalize_set(m, n);
  if (x_m.num_qubits() != n || ctx.num_qubits() != n || x0.num_qubits() != n) {
    throw Error(ErrorCode::InvalidAssignment, "assignments must range over all n qubits");
  }
  Assignment numerator(n);
  Assignment denominator(n);
  bool at_reference = true;
  for (int q = 1; q <= n; ++q) {
    const bool in_m = std::binary_search(set.begin(), set.end(), q);
    if (in_m) {
      numerator.bind(q, x_m[q]);
      denominator.bind(q, x0[q]);
      at_reference = at_reference && x_m[q] == x0[q];
    } else {
      numerator.bind(q, ctx[q]);
      denominator.bind(q, ctx[q]);
    }
  }
  if (at_reference) return {1.0, 0.0};
  const cd below = psi.amplitude(denominator);
  if (std::abs(below) <= tol.zero_amp_threshold) {
    throw Error(ErrorCode::ZeroReferenceAmplitude, "a(" + denominator.to_string() + ") is below threshold");
  }
  return psi.amplitude(numerator) / below;
}

GraphExtraction build_graph(const PureState& psi, const ToleranceConfig& tol, ZeroAmplitudePolicy policy) {
  const int n = psi.num_qubits();
  GraphExtraction out{MenGraph(n), psi.min_modulus() <= tol.zero_amp_threshold};
  if (out.zero_amplitude_warning && policy == ZeroAmplitudePolicy::reject) {
    throw Error(ErrorCode::ZeroAmplitude, "graph construction requires all-nonzero amplitudes");
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      QubitSet rest;
      for (int k = 1; k <= n; ++k) {
        if (k != i && k != j) rest.push_back(k);
      }
      if (!conditionally_separable(psi, {i}, {j}, rest, tol, SeparabilityMode::robust).separable) {
        out.graph.add_edge(i, j);
      }
    }
  }
  return out;
}

MenModel extract_men(const PureState& psi, const ToleranceConfig& tol) {
  const int n = psi.num_qubits();
  if (psi.min_modulus() <= tol.zero_amp_threshold) {
    throw Error(ErrorCode::ZeroAmplitude, "network extraction requires all-nonzero amplitudes");
  }
  MenModel model;
  model.graph = build_graph(psi, tol).graph;
  model.reference = Assignment::zeros(n);

  for (int i = 1; i <= n; ++i) {
    QFunctionTable table;
    table.node = i;
    table.neighbors = model.graph.neighbors(i);
    const std::size_t k = table.neighbors.size();
    table.values.resize(std::size_t{2} << k);
    for (std::size_t key = 0; key < table.values.size(); ++key) {
      if ((key >> k) == 0) {
        table.values[key] = {1.0, 0.0};
        continue;
      }
      std::uint64_t index = qubit_bit(i, n);
      for (std::size_t t = 0; t < k; ++t) {
        if (key & (std::size_t{1} << (k - 1 - t))) index |= qubit_bit(table.neighbors[t], n);
      }
      table.values[key] = psi[index] / psi[index & ~qubit_bit(i, n)];
    }
    model.potentials.push_back(std::move(table));
  }

  // q(x_i | x_{N-i}) must depend on x_U(i) only.
  auto audit = [&](std::uint64_t index) {
    for (int i = 1; i <= n; ++i) {
      const std::uint64_t bit = qubit_bit(i, n);
      if (!(index & bit)) continue;
      const auto& table = model.potentials[static_cast<std::size_t>(i - 1)];
      std::size_t key = 1;
      for (int j : table.neighbors) key = (key << 1) | ((index & qubit_bit(j, n)) ? 1 : 0);
      const cd full = psi[index] / psi[index & ~bit];
      if (!close_relative(full, table.values[key], tol)) {
        throw Error(ErrorCode::InconsistentGraph, "q for qubit " + std::to_string(i) + " at context " +
                                                      assignment_of(index, n).to_string() +
                                                      " depends on non-neighbours");
      }
    }
  };
  if (n <= kExhaustiveAuditQubits) {
    for (std::uint64_t index = 0; index < psi.dimension(); ++index) audit(index);
  } else {
    std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(n));
    std::uniform_int_distribution<std::uint64_t> pick(0, psi.dimension() - 1);
    for (int s = 0; s < kSampledAuditContexts; ++s) audit(pick(rng));
  }

  model.set_log_reference_modulus(-0.5 * log_normalization(model));
  return model;
}

cd relative_amplitude(const MenModel& model, const Assignment& x) {
  cd product(1.0, 0.0);
  for (int i = 1; i <= model.num_qubits(); ++i) product *= model.pinned_q(i, x);
  return product;
}

double log_normalization(const MenModel& model) {
  const int n = model.num_qubits();
  if (model.graph.is_path()) {
    // Forward sweep over chain factors with rescaled 2-entry messages.
    double log_scale = 0.0;
    std::array<double, 2> message{};
    for (int x = 0; x < 2; ++x) message[static_cast<std::size_t>(x)] = std::norm(detail::chain_q(model, 1, 0, x));
    for (int i = 2; i <= n; ++i) {
      std::array<double, 2> next{};
      for (int x = 0; x < 2; ++x) {
        for (int prev = 0; prev < 2; ++prev) {
          next[static_cast<std::size_t>(x)] +=
              message[static_cast<std::size_t>(prev)] * std::norm(detail::chain_q(model, i, prev, x));
        }
      }
      const double scale = std::max(next[0], next[1]);
      message = {next[0] / scale, next[1] / scale};
      log_scale += std::log(scale);
    }
    return log_scale + std::log(message[0] + message[1]);
  }
  if (n > kMaxDenseQubits) {
    throw Error(ErrorCode::EnumerationBoundExceeded, "normalization of a non-chain model with n > 26");
  }
  const std::uint64_t ref = index_of(model.reference, n);
  double sum = 0.0;
  for (std::uint64_t index = 0; index < (std::uint64_t{1} << n); ++index) {
    sum += std::norm(relative_amplitude_index(model, index, ref));
  }
  return std::log(sum);
}

PureState reconstruct_state(const MenModel& model) {
  const int n = model.num_qubits();
  if (n > kMaxDenseQubits) throw Error(ErrorCode::EnumerationBoundExceeded, "dense state with n > 26");
  const std::uint64_t ref = index_of(model.reference, n);
  ComplexVector<double> v(static_cast<Eigen::Index>(std::uint64_t{1} << n));
  for (std::uint64_t index = 0; index < (std::uint64_t{1} << n); ++index) {
    v(static_cast<Eigen::Index>(index)) = model.reference_modulus * relative_amplitude_index(model, index, ref);
  }
  if (std::abs(v.norm() - 1.0) > norm_tolerance<double>()) {
    throw Error(ErrorCode::InvalidModel, "reference modulus does not normalize the state");
  }
  return PureState::normalized(n, std::move(v));
}

void validate_model(const MenModel& model, const ToleranceConfig& tol) {
  const int n = model.num_qubits();
  if (n < 1) throw Error(ErrorCode::InvalidModel, "model has no qubits");
  if (static_cast<int>(model.potentials.size()) != n) throw Error(ErrorCode::InvalidModel, "one table per node");
  if (model.reference.num_qubits() != n || !model.reference.is_full()) {
    throw Error(ErrorCode::InvalidModel, "reference must bind every qubit");
  }
  for (int i = 1; i <= n; ++i) {
    const auto& table = model.potentials[static_cast<std::size_t>(i - 1)];
    if (table.node != i) throw Error(ErrorCode::InvalidModel, "table order must follow node index");
    if (table.neighbors != model.graph.neighbors(i)) {
      throw Error(ErrorCode::InvalidModel, "neighbours of node " + std::to_string(i) + " differ from graph");
    }
    const std::size_t k = table.neighbors.size();
    if (table.values.size() != (std::size_t{2} << k)) throw Error(ErrorCode::InvalidModel, "table size");
    for (std::size_t key = 0; key < table.values.size(); ++key) {
      const cd value = table.values[key];
      if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) ||
          std::abs(value) <= tol.zero_amp_threshold) {
        throw Error(ErrorCode::InvalidModel, "q(" + table.key_string(key) + ") of node " + std::to_string(i) +
                                                 " is zero or non-finite");
      }
      if (static_cast<int>(key >> k) == model.reference[i] && value != cd(1.0, 0.0)) {
        throw Error(ErrorCode::InvalidModel, "q at the reference bit of node " + std::to_string(i) + " must be 1");
      }
    }
  }
  if (model.graph.is_path() || n <= kMaxDenseQubits) {
    const double expected = -0.5 * log_normalization(model);
    if (std::abs(expected - model.log_reference_modulus) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw Error(ErrorCode::InvalidModel, "reference modulus does not match the normalization");
    }
  }
}

MenModel random_markov_model(const MenGraph& graph, std::uint64_t seed, double zero_amp_threshold) {
  const int n = graph.num_nodes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> modulus(0.2, 5.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  auto draw = [&] {
    const double r = modulus(rng);
    return std::polar(r, phase(rng));
  };

  // node[i][x]: node potential; edge[{j,i}][xj][xi] with j < i, equal to 1 whenever xi = 0.
  std::vector<std::array<cd, 2>> node(static_cast<std::size_t>(n) + 1, {cd(1.0), cd(1.0)});
  std::map<Edge, std::array<std::array<cd, 2>, 2>> edge;
  for (int i = 1; i <= n; ++i) {
    const auto& nb = graph.neighbors(i);
    if (nb.empty() || nb.front() > i) node[static_cast<std::size_t>(i)][1] = draw();
    for (int j : nb) {
      if (j >= i) break;
      std::array<std::array<cd, 2>, 2> psi{};
      psi[0][0] = psi[1][0] = cd(1.0);
      psi[0][1] = draw();
      psi[1][1] = draw();
      edge[{j, i}] = psi;
    }
  }

  MenModel model;
  model.graph = graph;
  model.reference = Assignment::zeros(n);
  for (int i = 1; i <= n; ++i) {
    QFunctionTable table;
    table.node = i;
    table.neighbors = graph.neighbors(i);
    const std::size_t k = table.neighbors.size();
    table.values.resize(std::size_t{2} << k);
    for (std::size_t key = 0; key < table.values.size(); ++key) {
      const int xi = static_cast<int>(key >> k);
      if (xi == 0) {
        table.values[key] = cd(1.0);
        continue;
      }
      cd value = node[static_cast<std::size_t>(i)][1] / node[static_cast<std::size_t>(i)][0];
      for (std::size_t t = 0; t < k; ++t) {
        const int j = table.neighbors[t];
        const int xj = (key & (std::size_t{1} << (k - 1 - t))) ? 1 : 0;
        if (j < i) {
          const auto& psi = edge.at({j, i});
          value *= psi[static_cast<std::size_t>(xj)][1] / psi[static_cast<std::size_t>(xj)][0];
        } else {
          const auto& psi = edge.at({i, j});
          value *= psi[1][static_cast<std::size_t>(xj)] / psi[0][static_cast<std::size_t>(xj)];
        }
      }
      if (std::abs(value) <= zero_amp_threshold) {
        throw Error(ErrorCode::InvalidModel, "threshold exceeds the drawn potential range");
      }
      table.values[key] = value;
    }
    model.potentials.push_back(std::move(table));
  }
  model.set_log_reference_modulus(-0.5 * log_normalization(model));
  return model;
}

// Separation and verification -------------------------------------------------

bool node_separation(const MenGraph& g, const QubitSet& a, const QubitSet& b, const QubitSet& c) {
  const int n = g.num_nodes();
  const QubitSet sa = normalize_set(a, n);
  const QubitSet sb = normalize_set(b, n);
  const QubitSet sc = normalize_set(c, n);
  QubitSet all = sa;
  all.insert(all.end(), sb.begin(), sb.end());
  all.insert(all.end(), sc.begin(), sc.end());
  normalize_set(all, n);

  std::vector<char> blocked(static_cast<std::size_t>(n) + 1, 0);
  std::vector<char> target(static_cast<std::size_t>(n) + 1, 0);
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int q : sc) blocked[static_cast<std::size_t>(q)] = 1;
  for (int q : sb) target[static_cast<std::size_t>(q)] = 1;
  std::deque<int> frontier(sa.begin(), sa.end());
  for (int q : sa) seen[static_cast<std::size_t>(q)] = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (int v : g.neighbors(u)) {
      const auto vi = static_cast<std::size_t>(v);
      if (blocked[vi] || seen[vi]) continue;
      if (target[vi]) return false;
      seen[vi] = 1;
      frontier.push_back(v);
    }
  }
  return true;
}

PerfectMapReport verify_perfect_map(const PureState& psi, const MenGraph& g, const ToleranceConfig& tol,
                                    int max_qubits) {
  const int n = psi.num_qubits();
  if (n > max_qubits) {
    throw Error(ErrorCode::EnumerationBoundExceeded, std::to_string(n) + " qubits exceeds bound " +
                                                         std::to_string(max_qubits));
  }
  if (g.num_nodes() != n) throw Error(ErrorCode::InvalidPartition, "graph and state sizes differ");
  PerfectMapReport report;
  report.zero_amplitude_warning = psi.min_modulus() <= tol.zero_amp_threshold;
  int labelings = 1;
  for (int q = 0; q < n; ++q) labelings *= 3;
  for (int code = 0; code < labelings; ++code) {
    QubitSet a, b, c;
    int rest = code;
    for (int q = 1; q <= n; ++q) {
      const int role = rest % 3;
      rest /= 3;
      (role == 0 ? a : role == 1 ? b : c).push_back(q);
    }
    if (a.empty() || b.empty()) continue;
    ++report.partitions_checked;
    const bool separable = conditionally_separable(psi, a, b, c, tol, SeparabilityMode::robust).separable;
    const bool separated = node_separation(g, a, b, c);
    if (separable != separated) report.mismatches.push_back({a, b, c, separable, separated});
  }
  return report;
}

std::string_view axiom_name(GraphoidAxiom axiom) {
  switch (axiom) {
    case GraphoidAxiom::symmetry: return "symmetry";
    case GraphoidAxiom::decomposition: return "decomposition";
    case GraphoidAxiom::intersection: return "intersection";
    case GraphoidAxiom::strong_union: return "strong-union";
    case GraphoidAxiom::transitivity: return "transitivity";
  }
  return "unknown";
}

int GraphoidReport::violation_count(GraphoidAxiom axiom) const {
  return static_cast<int>(
      std::count_if(violations.begin(), violations.end(), [axiom](const AxiomViolation& v) { return v.axiom == axiom; }));
}

GraphoidReport check_graphoid_axioms(const PureState& psi, const ToleranceConfig& tol, int n_bound) {
  const int n = psi.num_qubits();
  if (n > n_bound) {
    throw Error(ErrorCode::EnumerationBoundExceeded, std::to_string(n) + " qubits exceeds bound " +
                                                         std::to_string(n_bound));
  }
  auto set_of = [n](std::uint32_t mask) {
    QubitSet s;
    for (int q = 1; q <= n; ++q) {
      if (mask & (1u << (q - 1))) s.push_back(q);
    }
    return s;
  };
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bool> memo;
  auto indep = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    auto [it, inserted] = memo.try_emplace({a, b, c}, false);
    if (inserted) {
      it->second = conditionally_separable(psi, set_of(a), set_of(b), set_of(c), tol).separable;
    }
    return it->second;
  };

  GraphoidReport report;
  report.instances.assign(std::size(kGraphoidAxioms), 0);
  auto record = [&](GraphoidAxiom axiom, bool holds, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                    std::uint32_t d) {
    ++report.instances[static_cast<std::size_t>(axiom)];
    if (!holds) report.violations.push_back({axiom, set_of(a), set_of(b), set_of(c), set_of(d)});
  };

  int labelings = 1;
  for (int q = 0; q < n; ++q) labelings *= 5;
  for (int code = 0; code < labelings; ++code) {
    std::uint32_t a = 0, b = 0, c = 0, d = 0;
    int rest = code;
    for (int q = 0; q < n; ++q) {
      switch (rest % 5) {
        case 0: a |= 1u << q; break;
        case 1: b |= 1u << q; break;
        case 2: c |= 1u << q; break;
        case 3: d |= 1u << q; break;
        default: break;
      }
      rest /= 5;
    }
    if (!a || !b) continue;
    if (!d) {
      record(GraphoidAxiom::symmetry, indep(a, b, c) == indep(b, a, c), a, b, c, d);
      continue;
    }
    if (indep(a, b | d, c)) {
      record(GraphoidAxiom::decomposition, indep(a, b, c) && indep(a, d, c), a, b, c, d);
    }
    if (indep(a, b, c | d) && indep(a, d, b | c)) {
      record(GraphoidAxiom::intersection, indep(a, b | d, c), a, b, c, d);
    }
    if (indep(a, b, c)) {
      record(GraphoidAxiom::strong_union, indep(a, b, c | d), a, b, c, d);
      if ((d & (d - 1)) == 0) {
        record(GraphoidAxiom::transitivity, indep(a, d, c) || indep(b, d, c), a, b, c, d);
      }
    }
  }
  return report;
}

std::string export_dot(const MenGraph& g) {
  std::ostringstream out;
  out << "graph men {\n";
  for (int i = 1; i <= g.num_nodes(); ++i) out << "  q" << i << ";\n";
  for (const auto& [i, j] : g.edges()) out << "  q" << i << " -- q" << j << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace men
