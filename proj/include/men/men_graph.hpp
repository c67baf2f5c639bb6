#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "men/assignment.hpp"
#include "men/separability.hpp"
#include "men/state.hpp"

namespace men {

using Edge = std::pair<int, int>;

/// Undirected graph over qubits 1..n; edges mark conditional entanglement.
class MenGraph {
 public:
  explicit MenGraph(int num_nodes = 0);
  MenGraph(int num_nodes, const std::vector<Edge>& edges);

  static MenGraph path(int num_nodes);
  static MenGraph complete(int num_nodes);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  /// Sorted edges with i < j.
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;
  /// U(i), ascending.
  const std::vector<int>& neighbors(int i) const;

  /// True for the path 1-2-...-n (a single node counts).
  bool is_path() const;
  bool is_subgraph_of(const MenGraph& other) const;

  friend bool operator==(const MenGraph&, const MenGraph&) = default;

 private:
  void check_node(int i) const;

  std::vector<std::vector<int>> adjacency_;
};

/// q(x_i | x_U(i)) for one node, keyed by (node bit, neighbour bits ascending), node bit most significant.
struct QFunctionTable {
  int node = 0;
  std::vector<int> neighbors;
  std::vector<std::complex<double>> values;

  std::size_t size() const { return values.size(); }
  /// Key of (x_i, x_U(i)) read out of `x` (qubits of U(i) and i must be bound).
  std::size_t key_of(const Assignment& x) const;
  /// Bit-string form of a key, e.g. "101".
  std::string key_string(std::size_t key) const;
};

struct MenModel {
  MenGraph graph;
  std::vector<QFunctionTable> potentials;  // potentials[i - 1] belongs to node i
  Assignment reference;
  double reference_modulus = 0.0;
  double log_reference_modulus = 0.0;

  int num_qubits() const { return graph.num_nodes(); }
  /// q(x_i | x_{U-(i)}, x0_{U+(i)}): lower neighbours from x, higher ones pinned at the reference.
  std::complex<double> pinned_q(int i, const Assignment& x) const;
  /// Sets both modulus fields from log|a(x0)|.
  void set_log_reference_modulus(double log_modulus);
};

/// a(x_M, ctx) / a(x0_M, ctx); exactly 1 when x_M equals the reference on M.
std::complex<double> q_value(const PureState& psi, const QubitSet& m, const Assignment& x_m, const Assignment& ctx,
                             const Assignment& x0, const ToleranceConfig& tol = {});

enum class ZeroAmplitudePolicy { warn, reject };

struct GraphExtraction {
  MenGraph graph;
  bool zero_amplitude_warning = false;
};

/// Edge {i,j} iff i and j are conditionally entangled given all other qubits (robust mode).
GraphExtraction build_graph(const PureState& psi, const ToleranceConfig& tol = {},
                            ZeroAmplitudePolicy policy = ZeroAmplitudePolicy::warn);

/// Graph, neighbour-context q tables and reference modulus of an all-nonzero state.
MenModel extract_men(const PureState& psi, const ToleranceConfig& tol = {});

/// Π_i q(x_i | x_{U-(i)}, x0_{U+(i)}) = a(x) / a(x0).
std::complex<double> relative_amplitude(const MenModel& model, const Assignment& x);

/// log Σ_x |Π_i q(x_i | x_{U-(i)}, x0_{U+(i)})|^2. Linear sweep on chains, exhaustive otherwise.
double log_normalization(const MenModel& model);

/// Rebuilds the state with the reference amplitude's phase fixed to positive real.
PureState reconstruct_state(const MenModel& model);

/// Throws InvalidModel when tables, neighbour lists or the reference modulus are inconsistent.
void validate_model(const MenModel& model, const ToleranceConfig& tol = {});

/// Random model on `graph` built from pairwise edge potentials with moduli in [0.2, 5] and uniform
/// phases (reference all-zeros). Tables are consistent at every context.
MenModel random_markov_model(const MenGraph& graph, std::uint64_t seed, double zero_amp_threshold = 1e-6);

/// Every path from A to B passes through C.
bool node_separation(const MenGraph& g, const QubitSet& a, const QubitSet& b, const QubitSet& c);

struct PartitionMismatch {
  QubitSet a, b, c;
  bool separable = false;  // conditionally_separable(A, B | C)
  bool separated = false;  // node_separation(g, A, B, C)
};

struct PerfectMapReport {
  int partitions_checked = 0;
  std::vector<PartitionMismatch> mismatches;
  bool zero_amplitude_warning = false;
  bool passed() const { return mismatches.empty(); }
};

/// Compares conditional separability against node separation over every split of N into
/// nonempty A, B and a (possibly empty) C. Throws EnumerationBoundExceeded above `max_qubits`.
PerfectMapReport verify_perfect_map(const PureState& psi, const MenGraph& g, const ToleranceConfig& tol = {},
                                    int max_qubits = 6);

enum class GraphoidAxiom { symmetry, decomposition, intersection, strong_union, transitivity };
inline constexpr GraphoidAxiom kGraphoidAxioms[] = {GraphoidAxiom::symmetry, GraphoidAxiom::decomposition,
                                                    GraphoidAxiom::intersection, GraphoidAxiom::strong_union,
                                                    GraphoidAxiom::transitivity};
std::string_view axiom_name(GraphoidAxiom axiom);

struct AxiomViolation {
  GraphoidAxiom axiom;
  QubitSet a, b, c, d;  // d holds V for transitivity
};

struct GraphoidReport {
  std::vector<int> instances;  // indexed by GraphoidAxiom
  std::vector<AxiomViolation> violations;
  int violation_count(GraphoidAxiom axiom) const;
  bool passed() const { return violations.empty(); }
};

/// Exhaustive check of the five axioms with the general I(A,B|C) predicate (robust mode).
GraphoidReport check_graphoid_axioms(const PureState& psi, const ToleranceConfig& tol = {}, int n_bound = 4);

/// DOT text: nodes q1..qn, then edges in lexicographic order.
std::string export_dot(const MenGraph& g);

}  // namespace men
