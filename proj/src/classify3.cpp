#include "men/classify3.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "men/separability.hpp"

namespace men {
namespace {

using cd = std::complex<double>;

constexpr std::array<double, 4> kAngles = {0.0, std::numbers::pi / 8, std::numbers::pi / 5, std::numbers::pi / 3};

void require_three(const PureState& psi) {
  if (psi.num_qubits() != 3) {
    throw Error(ErrorCode::WrongArity, "expected 3 qubits, got " + std::to_string(psi.num_qubits()));
  }
}

Matrix2c<double> row_unitary(cd s, cd t) {
  const double norm = std::sqrt(std::norm(s) + std::norm(t));
  s /= norm;
  t /= norm;
  Matrix2c<double> u;
  u << s, t, -std::conj(t), std::conj(s);
  return u;
}

/// Rows (s, t) for which s psi_{x_k=0} + t psi_{x_k=1} is a product of the other two qubits.
std::vector<std::pair<cd, cd>> product_directions(const PureState& psi, int k, const ToleranceConfig& tol) {
  const QubitSet others = complement({k}, 3);
  Eigen::Matrix2cd m0, m1;
  for (int b = 0; b < 2; ++b) {
    for (int c = 0; c < 2; ++c) {
      Assignment x(3);
      x.bind(others[0], b);
      x.bind(others[1], c);
      x.bind(k, 0);
      m0(b, c) = psi.amplitude(x);
      x.bind(k, 1);
      m1(b, c) = psi.amplitude(x);
    }
  }
  // det(s m0 + m1) = a s^2 + b s + c
  const cd a = m0.determinant();
  const cd b = m0(0, 0) * m1(1, 1) + m0(1, 1) * m1(0, 0) - m0(0, 1) * m1(1, 0) - m0(1, 0) * m1(0, 1);
  const cd c = m1.determinant();
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  std::vector<std::pair<cd, cd>> rows;
  if (scale <= tol.abs_eps) return rows;
  const double eps = 1e-12 * scale;
  if (std::abs(a) <= eps) {
    rows.emplace_back(1.0, 0.0);
    if (std::abs(b) > eps) rows.emplace_back(-c / b, 1.0);
  } else {
    const cd root = std::sqrt(b * b - 4.0 * a * c);
    rows.emplace_back((-b + root) / (2.0 * a), 1.0);
    rows.emplace_back((-b - root) / (2.0 * a), 1.0);
  }
  return rows;
}

TopologyShape shape_from_edges(bool e12, bool e13, bool e23) {
  const int count = int(e12) + int(e13) + int(e23);
  switch (count) {
    case 0:
      return TopologyShape::empty;
    case 1:
      return e12 ? TopologyShape::edge12 : e13 ? TopologyShape::edge13 : TopologyShape::edge23;
    case 2:
      return !e23 ? TopologyShape::chain1 : !e13 ? TopologyShape::chain2 : TopologyShape::chain3;
    default:
      return TopologyShape::triangle;
  }
}

}  // namespace

std::string_view shape_name(TopologyShape shape) {
  switch (shape) {
    case TopologyShape::empty:
      return "empty";
    case TopologyShape::edge12:
      return "edge(1,2)";
    case TopologyShape::edge13:
      return "edge(1,3)";
    case TopologyShape::edge23:
      return "edge(2,3)";
    case TopologyShape::chain1:
      return "chain(center=1)";
    case TopologyShape::chain2:
      return "chain(center=2)";
    case TopologyShape::chain3:
      return "chain(center=3)";
    case TopologyShape::triangle:
      return "triangle";
  }
  return "?";
}

TopologyShape shape_of(const MenGraph& g) {
  if (g.num_nodes() != 3) throw Error(ErrorCode::WrongArity, "topology shapes need 3 nodes");
  return shape_from_edges(g.has_edge(1, 2), g.has_edge(1, 3), g.has_edge(2, 3));
}

bool TopologyCensus::has_chain() const {
  return count(TopologyShape::chain1) + count(TopologyShape::chain2) + count(TopologyShape::chain3) > 0;
}

std::string TopologyCensus::to_text() const {
  std::string out = "shape,count\n";
  for (std::size_t s = 0; s < kTopologyShapeCount; ++s) {
    out += std::string(shape_name(static_cast<TopologyShape>(s))) + "," + std::to_string(counts[s]) + "\n";
  }
  out += "sampled," + std::to_string(bases_sampled) + "\n";
  out += "rejected," + std::to_string(bases_rejected_for_zeros) + "\n";
  return out;
}

std::string TripartiteClass::to_string() const {
  switch (tag) {
    case Tag::fully_separable:
      return "fully-separable";
    case Tag::biseparable:
      return "biseparable(" + std::to_string(separated_qubit) + ")";
    case Tag::w_like:
      return "W-like";
    case Tag::ghz_like:
      return "GHZ-like";
  }
  return "?";
}

PureState canonical_state(std::string_view name) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  auto bell = [&](std::uint64_t i, std::uint64_t j) {
    v(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(j)) = 1.0 / std::sqrt(2.0);
  };
  if (name == "ghz") {
    bell(0, 7);
  } else if (name == "w") {
    v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
  } else if (name == "bell12_0") {
    bell(0, 6);
  } else if (name == "bell13_0") {
    bell(0, 5);
  } else if (name == "bell23_0") {
    bell(0, 3);
  } else if (name == "product") {
    v(0) = 1.0;
  } else {
    throw Error(ErrorCode::UnknownState, std::string(name));
  }
  return PureState::normalized(3, std::move(v));
}

std::vector<LocalBasisChange> census_bases(const PureState& psi, int samples, std::uint64_t seed,
                                           const ToleranceConfig& tol) {
  require_three(psi);
  std::vector<LocalBasisChange> bases;
  for (double t1 : kAngles) {
    for (double t2 : kAngles) {
      for (double t3 : kAngles) bases.push_back({rotation(t1), rotation(t2), rotation(t3)});
    }
  }
  for (int k = 1; k <= 3; ++k) {
    for (const auto& [s, t] : product_directions(psi, k, tol)) {
      const Matrix2c<double> adapted = row_unitary(s, t);
      for (double ta : kAngles) {
        for (double tb : kAngles) {
          LocalBasisChange change(3);
          const QubitSet others = complement({k}, 3);
          change[static_cast<std::size_t>(k - 1)] = adapted;
          change[static_cast<std::size_t>(others[0] - 1)] = rotation(ta);
          change[static_cast<std::size_t>(others[1] - 1)] = rotation(tb);
          bases.push_back(std::move(change));
        }
      }
    }
  }
  for (int idx = 0; idx < samples; ++idx) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx)};
    std::mt19937_64 rng(seq);
    LocalBasisChange change;
    for (int q = 0; q < 3; ++q) change.push_back(random_unitary<double>(rng));
    bases.push_back(std::move(change));
  }
  return bases;
}

TopologyCensus topology_census(const PureState& psi, int samples, std::uint64_t seed, const ToleranceConfig& tol) {
  require_three(psi);
  TopologyCensus census;
  for (const auto& change : census_bases(psi, samples, seed, tol)) {
    ++census.bases_sampled;
    const PureState rotated = apply_local_basis_change(psi, change);
    if (rotated.min_modulus() <= tol.zero_amp_threshold) {
      ++census.bases_rejected_for_zeros;
      continue;
    }
    ++census.counts[static_cast<std::size_t>(shape_of(build_graph(rotated, tol).graph))];
  }
  return census;
}

Classification classify_with_census(const PureState& psi, int samples, std::uint64_t seed,
                                    const ToleranceConfig& tol) {
  require_three(psi);
  std::vector<int> separable;
  for (int q = 1; q <= 3; ++q) {
    if (is_separable(psi, {q}, tol).separable) separable.push_back(q);
  }
  if (separable.size() >= 2) return {TripartiteClass::fully_separable(), std::nullopt};
  if (separable.size() == 1) return {TripartiteClass::biseparable(separable.front()), std::nullopt};

  TopologyCensus census = topology_census(psi, samples, seed, tol);
  if (census.accepted() == 0) {
    throw Error(ErrorCode::AllBasesRejected, std::to_string(census.bases_sampled) + " bases sampled");
  }
  const bool any_incomplete = census.count(TopologyShape::triangle) < census.accepted();
  return {any_incomplete ? TripartiteClass::ghz_like() : TripartiteClass::w_like(), std::move(census)};
}

TripartiteClass classify(const PureState& psi, int samples, std::uint64_t seed, const ToleranceConfig& tol) {
  return classify_with_census(psi, samples, seed, tol).cls;
}

InvarianceReport class_invariance_check(const PureState& psi, int trials, std::uint64_t seed, int samples,
                                        const ToleranceConfig& tol) {
  InvarianceReport report{classify(psi, samples, seed, tol), trials, {}};
  for (int trial = 0; trial < trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), 0x9e37u};
    std::mt19937_64 rng(seq);
    LocalBasisChange change;
    for (int q = 0; q < 3; ++q) change.push_back(random_unitary<double>(rng));
    const TripartiteClass found = classify(apply_local_basis_change(psi, change), samples, seed, tol);
    if (!(found == report.reference)) report.changes.emplace_back(trial, found);
  }
  return report;
}

}  // namespace men
