#pragma once

#include <complex>
#include <optional>
#include <utility>

#include "men/assignment.hpp"
#include "men/state.hpp"

namespace men {

struct SeparabilityVerdict {
  bool separable = true;
  /// Diagonal corners of the first violating 2x2 minor (lexicographic scan order); set iff !separable.
  std::optional<std::pair<Assignment, Assignment>> witness;
  double max_minor_magnitude = 0.0;
  /// Some amplitude of the examined state is at or below zero_amp_threshold, where the
  /// fixed-reference and all-minors definitions can disagree.
  bool zero_amplitude_warning = false;
};

enum class SeparabilityMode { strict, robust };

/// True when a*d - b*c vanishes within abs_eps + rel_eps * (product of the two largest moduli).
bool minor_vanishes(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                    std::complex<double> d, const ToleranceConfig& tol);

/// Full assignment of the largest-modulus amplitude (smallest index on ties).
Assignment argmax_modulus_assignment(const PureState& psi);

/// All-zeros when that amplitude exceeds the zero threshold, otherwise the argmax-modulus assignment.
Assignment default_reference(const PureState& psi, const ToleranceConfig& tol = {});

/// Cross-product identity of M against its complement, anchored at the reference x0.
bool a_independent(const PureState& psi, const QubitSet& m, const Assignment& x0, const ToleranceConfig& tol = {});

/// Rank-one test of the 2^|M| x 2^|M̄| reshaped amplitude matrix (every 2x2 minor).
SeparabilityVerdict is_separable(const PureState& psi, const QubitSet& m, const ToleranceConfig& tol = {});

struct Factors {
  PureState phi;  // over M, ascending qubit order
  PureState chi;  // over the complement
};

/// Splits a separable state into unit-norm factors anchored at the maximum-modulus amplitude.
Factors extract_factors(const PureState& psi, const QubitSet& m, const ToleranceConfig& tol = {});

/// I(A,B|C): A and B separable for every fixed realization of C and of the remaining qubits.
/// Strict mode checks the fixed-reference identity (reference defaults to all-zeros);
/// robust mode checks that each 2^|A| x 2^|B| slice has rank at most one.
SeparabilityVerdict conditionally_separable(const PureState& psi, const QubitSet& a, const QubitSet& b,
                                            const QubitSet& c, const ToleranceConfig& tol = {},
                                            SeparabilityMode mode = SeparabilityMode::robust,
                                            const std::optional<Assignment>& reference = std::nullopt);

}  // namespace men
