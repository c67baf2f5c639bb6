#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "men/men_graph.hpp"
#include "men/state.hpp"

namespace men {

/// Edge-set shapes of a 3-node graph, in report order.
enum class TopologyShape { empty, edge12, edge13, edge23, chain1, chain2, chain3, triangle };
inline constexpr std::size_t kTopologyShapeCount = 8;

/// "empty", "edge(1,2)", "chain(center=2)", "triangle".
std::string_view shape_name(TopologyShape shape);
/// Throws WrongArity unless the graph has 3 nodes.
TopologyShape shape_of(const MenGraph& g);

struct TopologyCensus {
  std::array<int, kTopologyShapeCount> counts{};
  int bases_sampled = 0;
  int bases_rejected_for_zeros = 0;

  int count(TopologyShape shape) const { return counts[static_cast<std::size_t>(shape)]; }
  int accepted() const { return bases_sampled - bases_rejected_for_zeros; }
  bool has_chain() const;
  /// "shape,count" table in report order, then sampled and rejected totals.
  std::string to_text() const;
};

struct TripartiteClass {
  enum class Tag { fully_separable, biseparable, w_like, ghz_like };
  Tag tag = Tag::fully_separable;
  int separated_qubit = 0;  // 1..3 for biseparable, 0 otherwise

  static TripartiteClass fully_separable() { return {Tag::fully_separable, 0}; }
  static TripartiteClass biseparable(int qubit) { return {Tag::biseparable, qubit}; }
  static TripartiteClass w_like() { return {Tag::w_like, 0}; }
  static TripartiteClass ghz_like() { return {Tag::ghz_like, 0}; }

  /// "fully-separable", "biseparable(1)", "W-like", "GHZ-like".
  std::string to_string() const;
  friend bool operator==(const TripartiteClass&, const TripartiteClass&) = default;
};

/// ghz, w, bell12_0, bell13_0, bell23_0, product. Unknown names throw UnknownState.
PureState canonical_state(std::string_view name);

/// Candidate local bases for the census, in evaluation order:
/// 64 structured rotation triples, then state-adapted bases, then `samples` Haar draws.
std::vector<LocalBasisChange> census_bases(const PureState& psi, int samples, std::uint64_t seed,
                                           const ToleranceConfig& tol = {});

TopologyCensus topology_census(const PureState& psi, int samples = 256, std::uint64_t seed = 7,
                               const ToleranceConfig& tol = {});

struct Classification {
  TripartiteClass cls;
  /// Present only for fully entangled states.
  std::optional<TopologyCensus> census;
};

Classification classify_with_census(const PureState& psi, int samples = 256, std::uint64_t seed = 7,
                                    const ToleranceConfig& tol = {});
TripartiteClass classify(const PureState& psi, int samples = 256, std::uint64_t seed = 7,
                         const ToleranceConfig& tol = {});

struct InvarianceReport {
  TripartiteClass reference;
  int trials = 0;
  std::vector<std::pair<int, TripartiteClass>> changes;  // (trial index, class found)
  bool passed() const { return changes.empty(); }
};

/// Re-classifies psi after `trials` random local basis changes.
InvarianceReport class_invariance_check(const PureState& psi, int trials, std::uint64_t seed, int samples = 256,
                                        const ToleranceConfig& tol = {});

}  // namespace men
