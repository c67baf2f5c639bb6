#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "men/assignment.hpp"
#include "men/error.hpp"

namespace men {

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

template <typename Real>
constexpr Real norm_tolerance() {
  return std::max(Real(1e-9), Real(64) * std::numeric_limits<Real>::epsilon());
}

/// Dense pure state of n qubits. Immutable once built; unit norm is checked on construction.
template <typename Real>
class BasicPureState {
 public:
  using Scalar = std::complex<Real>;
  using Vector = ComplexVector<Real>;

  BasicPureState() = default;

  /// Throws InvalidState unless `amplitudes` has 2^n finite entries with unit norm (within 1e-9).
  /// The accepted vector is renormalized to remove residual rounding.
  BasicPureState(int num_qubits, Vector amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > 30) {
      throw Error(ErrorCode::InvalidState, "qubit count must lie in 1..30");
    }
    if (static_cast<std::uint64_t>(amplitudes_.size()) != std::uint64_t{1} << num_qubits) {
      throw Error(ErrorCode::InvalidState, "expected 2^n amplitudes");
    }
    if (!amplitudes_.allFinite()) throw Error(ErrorCode::InvalidState, "non-finite amplitude");
    const Real norm = amplitudes_.norm();
    if (std::abs(norm - Real(1)) > norm_tolerance<Real>()) {
      throw Error(ErrorCode::InvalidState, "norm " + std::to_string(norm) + " differs from 1");
    }
    amplitudes_ /= norm;
  }

  /// Scales `amplitudes` to unit norm; throws InvalidState for a zero or non-finite vector.
  static BasicPureState normalized(int num_qubits, Vector amplitudes) {
    const Real norm = amplitudes.norm();
    if (!(norm > Real(0)) || !std::isfinite(norm)) {
      throw Error(ErrorCode::InvalidState, "cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return BasicPureState(num_qubits, std::move(amplitudes));
  }

  static BasicPureState basis(int num_qubits, std::uint64_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << num_qubits));
    v(static_cast<Eigen::Index>(index)) = Scalar(1);
    return BasicPureState(num_qubits, std::move(v));
  }

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dimension() const { return static_cast<std::uint64_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }

  Scalar operator[](std::uint64_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  Scalar amplitude(const Assignment& x) const { return (*this)[index_of(x, num_qubits_)]; }

  Real min_modulus() const { return amplitudes_.cwiseAbs().minCoeff(); }

 private:
  int num_qubits_ = 0;
  Vector amplitudes_;
};

using PureState = BasicPureState<double>;

/// One 2x2 matrix per qubit; entry k acts on qubit k+1.
template <typename Real>
using BasicLocalBasisChange = std::vector<Matrix2c<Real>>;
using LocalBasisChange = BasicLocalBasisChange<double>;

template <typename Real>
struct BasicMeasurement {
  Real probability;
  BasicPureState<Real> collapsed;
};
using Measurement = BasicMeasurement<double>;

/// phi occupies qubits 1..m of the result, chi the rest.
template <typename Real>
BasicPureState<Real> tensor_product(const BasicPureState<Real>& phi, const BasicPureState<Real>& chi) {
  const int n = phi.num_qubits() + chi.num_qubits();
  ComplexVector<Real> out(static_cast<Eigen::Index>(std::uint64_t{1} << n));
  const auto chi_dim = static_cast<Eigen::Index>(chi.dimension());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(phi.dimension()); ++i) {
    out.segment(i * chi_dim, chi_dim) = phi.amplitudes()(i) * chi.amplitudes();
  }
  return BasicPureState<Real>(n, std::move(out));
}

/// phi occupies the qubits listed in `phi_qubits` of an n-qubit result; chi fills the complement,
/// both in ascending qubit order.
template <typename Real>
BasicPureState<Real> tensor_product(const BasicPureState<Real>& phi, const BasicPureState<Real>& chi,
                                    const QubitSet& phi_qubits) {
  const int n = phi.num_qubits() + chi.num_qubits();
  const QubitSet m = normalize_set(phi_qubits, n);
  if (static_cast<int>(m.size()) != phi.num_qubits()) {
    throw Error(ErrorCode::InvalidPartition, "qubit set size does not match the first factor");
  }
  const QubitSet rest = complement(m, n);
  const auto phi_off = subsystem_offsets(m, n);
  const auto chi_off = subsystem_offsets(rest, n);
  ComplexVector<Real> out(static_cast<Eigen::Index>(std::uint64_t{1} << n));
  for (std::size_t i = 0; i < phi_off.size(); ++i) {
    for (std::size_t j = 0; j < chi_off.size(); ++j) {
      out(static_cast<Eigen::Index>(phi_off[i] | chi_off[j])) = phi[i] * chi[j];
    }
  }
  return BasicPureState<Real>(n, std::move(out));
}

template <typename Real>
bool is_unitary(const Matrix2c<Real>& u, Real tolerance = norm_tolerance<Real>()) {
  return (u * u.adjoint() - Matrix2c<Real>::Identity()).cwiseAbs().maxCoeff() <= tolerance;
}

/// (U_1 ⊗ ... ⊗ U_n) psi. Throws InvalidUnitary for a non-unitary factor.
template <typename Real>
BasicPureState<Real> apply_local_basis_change(const BasicPureState<Real>& psi,
                                              const BasicLocalBasisChange<Real>& change) {
  const int n = psi.num_qubits();
  if (static_cast<int>(change.size()) != n) {
    throw Error(ErrorCode::InvalidUnitary, "need one matrix per qubit");
  }
  ComplexVector<Real> v = psi.amplitudes();
  for (int q = 1; q <= n; ++q) {
    const auto& u = change[static_cast<std::size_t>(q - 1)];
    if (!is_unitary(u)) throw Error(ErrorCode::InvalidUnitary, "matrix for qubit " + std::to_string(q));
    const std::uint64_t bit = qubit_bit(q, n);
    for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
      if (i & bit) continue;
      const auto i0 = static_cast<Eigen::Index>(i);
      const auto i1 = static_cast<Eigen::Index>(i | bit);
      const std::complex<Real> a0 = v(i0);
      const std::complex<Real> a1 = v(i1);
      v(i0) = u(0, 0) * a0 + u(0, 1) * a1;
      v(i1) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  return BasicPureState<Real>::normalized(n, std::move(v));
}

/// Projects qubit `qubit` onto `outcome`. The collapsed state keeps all n qubits.
template <typename Real>
BasicMeasurement<Real> measure_qubit(const BasicPureState<Real>& psi, int qubit, int outcome,
                                     Real zero_amp_threshold = Real(1e-6)) {
  const int n = psi.num_qubits();
  if (qubit < 1 || qubit > n) throw Error(ErrorCode::InvalidAssignment, "qubit out of range");
  if (outcome != 0 && outcome != 1) throw Error(ErrorCode::InvalidAssignment, "outcome must be 0 or 1");
  const std::uint64_t bit = qubit_bit(qubit, n);
  ComplexVector<Real> v = psi.amplitudes();
  Real probability = 0;
  for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
    const bool keep = ((i & bit) != 0) == (outcome == 1);
    if (keep) {
      probability += std::norm(v(static_cast<Eigen::Index>(i)));
    } else {
      v(static_cast<Eigen::Index>(i)) = 0;
    }
  }
  if (probability < zero_amp_threshold * zero_amp_threshold) {
    throw Error(ErrorCode::ZeroProbabilityOutcome,
                "qubit " + std::to_string(qubit) + " outcome " + std::to_string(outcome));
  }
  return {probability, BasicPureState<Real>::normalized(n, std::move(v))};
}

/// |<psi|chi>|, clamped to [0, 1].
template <typename Real>
Real fidelity_up_to_phase(const BasicPureState<Real>& psi, const BasicPureState<Real>& chi) {
  if (psi.num_qubits() != chi.num_qubits()) {
    throw Error(ErrorCode::InvalidState, "fidelity of states with different qubit counts");
  }
  return std::clamp(std::abs(psi.amplitudes().dot(chi.amplitudes())), Real(0), Real(1));
}

namespace detail {

template <typename Real>
ComplexVector<Real> gaussian_vector(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<Real> normal(0, 1);
  ComplexVector<Real> v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const Real re = normal(rng);
    const Real im = normal(rng);
    v(i) = {re, im};
  }
  return v;
}

}  // namespace detail

/// Rotation-invariant random state: independent standard normal real and imaginary parts, normalized.
template <typename Real = double>
BasicPureState<Real> random_state(int num_qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto v = detail::gaussian_vector<Real>(static_cast<Eigen::Index>(std::uint64_t{1} << num_qubits), rng);
  return BasicPureState<Real>::normalized(num_qubits, std::move(v));
}

/// Random state with every |a(x)| > zero_amp_threshold, resampled until that holds.
template <typename Real = double>
BasicPureState<Real> random_nonzero_state(int num_qubits, std::uint64_t seed, Real zero_amp_threshold = Real(1e-6)) {
  std::mt19937_64 rng(seed);
  for (;;) {
    auto v = detail::gaussian_vector<Real>(static_cast<Eigen::Index>(std::uint64_t{1} << num_qubits), rng);
    auto psi = BasicPureState<Real>::normalized(num_qubits, std::move(v));
    if (psi.min_modulus() > zero_amp_threshold) return psi;
  }
}

template <typename Real>
struct BasicProductState {
  BasicPureState<Real> state;
  std::vector<QubitSet> partition;
};
using ProductState = BasicProductState<double>;

/// Tensor product of independent random states, one per block of `partition` (which must cover 1..n).
template <typename Real = double>
BasicProductState<Real> random_product_state(std::vector<QubitSet> partition, std::uint64_t seed) {
  int n = 0;
  for (const auto& block : partition) {
    if (block.empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
    n += static_cast<int>(block.size());
  }
  QubitSet all;
  for (auto& block : partition) {
    block = normalize_set(block, n);
    all.insert(all.end(), block.begin(), block.end());
  }
  if (static_cast<int>(normalize_set(all, n).size()) != n) {
    throw Error(ErrorCode::InvalidPartition, "blocks must cover 1..n");
  }
  std::mt19937_64 rng(seed);
  ComplexVector<Real> v = ComplexVector<Real>::Ones(static_cast<Eigen::Index>(std::uint64_t{1} << n));
  for (const auto& block : partition) {
    auto factor = detail::gaussian_vector<Real>(static_cast<Eigen::Index>(std::uint64_t{1} << block.size()), rng);
    factor /= factor.norm();
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      v(static_cast<Eigen::Index>(i)) *= factor(static_cast<Eigen::Index>(extract_bits(i, block, n)));
    }
  }
  return {BasicPureState<Real>::normalized(n, std::move(v)), std::move(partition)};
}

/// Haar-random single-qubit unitary from uniform variates:
/// e^{ia} [[e^{ib} cos f, e^{ic} sin f], [-e^{-ic} sin f, e^{-ib} cos f]] with sin^2 f uniform.
template <typename Real>
Matrix2c<Real> random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<Real> unit(0, 1);
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  const Real alpha = two_pi * unit(rng);
  const Real psi = two_pi * unit(rng);
  const Real chi = two_pi * unit(rng);
  const Real phi = std::asin(std::sqrt(unit(rng)));
  const std::complex<Real> global = std::polar(Real(1), alpha);
  Matrix2c<Real> u;
  u(0, 0) = global * std::polar(std::cos(phi), psi);
  u(0, 1) = global * std::polar(std::sin(phi), chi);
  u(1, 0) = -global * std::polar(std::sin(phi), -chi);
  u(1, 1) = global * std::polar(std::cos(phi), -psi);
  return u;
}

/// Real rotation [[cos t, -sin t], [sin t, cos t]].
template <typename Real>
Matrix2c<Real> rotation(Real angle) {
  Matrix2c<Real> u;
  u << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return u;
}

template <typename Real>
Matrix2c<Real> hadamard() {
  const Real h = Real(1) / std::sqrt(Real(2));
  Matrix2c<Real> u;
  u << h, h, h, -h;
  return u;
}

template <typename Real = double>
BasicLocalBasisChange<Real> random_local_basis_change(int num_qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BasicLocalBasisChange<Real> change;
  for (int q = 0; q < num_qubits; ++q) change.push_back(random_unitary<Real>(rng));
  return change;
}

}  // namespace men
