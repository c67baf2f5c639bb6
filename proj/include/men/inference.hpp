#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "men/assignment.hpp"
#include "men/men_graph.hpp"
#include "men/state.hpp"

namespace men {

/// Marginal ratio p(x_M)/p(x0). Long chains overflow `value`; `log_value` stays finite.
struct QueryResult {
  double value = 0.0;
  double log_value = 0.0;
  /// Multiplications + additions + modulus squares performed.
  std::int64_t op_count = 0;
};

struct MleResult {
  Assignment assignment;
  double probability = 0.0;
  double log_probability = 0.0;
  std::int64_t op_count = 0;
};

/// Brute-force Σ |a|^2 over all completions of `x_m`.
double marginal_probability(const PureState& psi, const Assignment& x_m);

/// Brute-force p(query | evidence) from amplitudes.
double conditional_probability(const PureState& psi, const Assignment& query, const Assignment& evidence);

/// Σ over completions of |Π_i q(x_i | x_{U-(i)}, x0_{U+(i)})|^2, for any graph (exhaustive).
QueryResult marginal_ratio(const MenModel& model, const Assignment& x_m);

/// Ratio of marginal ratios; uses the chain sweep when the graph is a path.
double conditional_probability(const MenModel& model, const Assignment& query, const Assignment& evidence);

/// Prefix factors times a right-to-left sweep of suffix sums. x_m must bind exactly 1..m.
QueryResult chain_prefix_marginal_ratio(const MenModel& model, const Assignment& x_m);

/// Left-to-right elimination with a 2-entry message; any subset of bound qubits.
QueryResult chain_marginal_ratio(const MenModel& model, const Assignment& x_m);

/// Operation count quoted for the prefix decomposition: 6(n-m) + 2m - 1.
std::int64_t quoted_prefix_op_count(int n, int m);

/// argmax |a(x)|^2; near-ties (1e-12 relative) go to the lexicographically smallest assignment.
MleResult mle_brute_force(const PureState& psi);

/// Max-product dynamic programming along the chain, same tie rule as mle_brute_force.
MleResult mle_chain(const MenModel& model);

struct MeasurementUpdate {
  double probability = 0.0;
  PureState collapsed;
  MenGraph graph;
  bool zero_amplitude_warning = false;
  /// edges(graph) ⊆ edges(prior) minus the edges touching the measured qubit.
  bool edges_contained = false;
};

MeasurementUpdate measure_and_update(const PureState& psi, const MenGraph& prior, int qubit, int outcome,
                                     const ToleranceConfig& tol = {});

/// Path model 1-...-n with pinned q moduli in [0.2, 5] and uniform phases.
MenModel random_chain_model(int n, std::uint64_t seed, double zero_amp_threshold = 1e-6);

struct BenchRow {
  int size = 0;
  std::string task;
  std::optional<double> wall_ns_median;
  std::int64_t op_count = 0;
  std::optional<bool> oracle_agreement;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// "size,task,wall_ns_median,op_count,oracle_agreement" plus one line per row.
  std::string to_text() const;
};

struct BenchOptions {
  int repetitions = 9;
  bool timing = true;
  /// Oracle columns are filled up to this size; brute-force rows are added up to brute_force_limit.
  int oracle_limit = 12;
  int brute_force_limit = 14;
};

BenchReport bench_chains(const std::vector<int>& sizes, std::uint64_t seed, const BenchOptions& options = {});

/// Median per-call wall time of chain_marginal_ratio on random_chain_model(n, seed).
double time_chain_marginal_ns(int n, std::uint64_t seed, int repetitions);

}  // namespace men
