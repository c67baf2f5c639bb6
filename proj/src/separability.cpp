#include "men/separability.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace men {
namespace {

using cd = std::complex<double>;

struct MinorScan {
  bool violated = false;
  std::uint64_t first_corner = 0;
  std::uint64_t second_corner = 0;
  double max_minor = 0.0;
};

/// Scans every 2x2 minor of the slice with the given row/column offsets around `base`.
void scan_slice(const PureState& psi, std::uint64_t base, const std::vector<std::uint64_t>& rows,
                const std::vector<std::uint64_t>& cols, const ToleranceConfig& tol, MinorScan& scan) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t i2 = i + 1; i2 < rows.size(); ++i2) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const cd a = psi[base | rows[i] | cols[j]];
        const cd c = psi[base | rows[i2] | cols[j]];
        for (std::size_t j2 = j + 1; j2 < cols.size(); ++j2) {
          const cd b = psi[base | rows[i] | cols[j2]];
          const cd d = psi[base | rows[i2] | cols[j2]];
          const double det = std::abs(a * d - b * c);
          scan.max_minor = std::max(scan.max_minor, det);
          if (!scan.violated && !minor_vanishes(a, b, c, d, tol)) {
            scan.violated = true;
            scan.first_corner = base | rows[i] | cols[j];
            scan.second_corner = base | rows[i2] | cols[j2];
          }
        }
      }
    }
  }
}

SeparabilityVerdict to_verdict(const MinorScan& scan, int n) {
  SeparabilityVerdict v;
  v.separable = !scan.violated;
  v.max_minor_magnitude = scan.max_minor;
  if (scan.violated) {
    v.witness = std::make_pair(assignment_of(scan.first_corner, n), assignment_of(scan.second_corner, n));
  }
  return v;
}

QubitSet checked_bipartition(const PureState& psi, const QubitSet& m) {
  QubitSet set = normalize_set(m, psi.num_qubits());
  if (set.empty() || static_cast<int>(set.size()) == psi.num_qubits()) {
    throw Error(ErrorCode::InvalidPartition, "M must be a nonempty proper subset of the qubits");
  }
  return set;
}

}  // namespace

bool minor_vanishes(cd a, cd b, cd c, cd d, const ToleranceConfig& tol) {
  std::array<double, 4> mods{std::abs(a), std::abs(b), std::abs(c), std::abs(d)};
  std::partial_sort(mods.begin(), mods.begin() + 2, mods.end(), std::greater<>());
  return std::abs(a * d - b * c) <= tol.abs_eps + tol.rel_eps * mods[0] * mods[1];
}

Assignment argmax_modulus_assignment(const PureState& psi) {
  Eigen::Index best = 0;
  psi.amplitudes().cwiseAbs().maxCoeff(&best);
  return assignment_of(static_cast<std::uint64_t>(best), psi.num_qubits());
}

Assignment default_reference(const PureState& psi, const ToleranceConfig& tol) {
  if (std::abs(psi[0]) > tol.zero_amp_threshold) return Assignment::zeros(psi.num_qubits());
  return argmax_modulus_assignment(psi);
}

bool a_independent(const PureState& psi, const QubitSet& m, const Assignment& x0, const ToleranceConfig& tol) {
  const int n = psi.num_qubits();
  const QubitSet set = checked_bipartition(psi, m);
  const QubitSet rest = complement(set, n);
  const std::uint64_t ref = index_of(x0, n);
  const std::uint64_t m_mask = qubit_mask(set, n);
  const std::uint64_t ref_m = ref & m_mask;
  const std::uint64_t ref_rest = ref & ~m_mask;
  const auto rows = subsystem_offsets(set, n);
  const auto cols = subsystem_offsets(rest, n);
  const cd anchor = psi[ref];
  for (std::uint64_t r : rows) {
    for (std::uint64_t c : cols) {
      if (!minor_vanishes(psi[r | c], psi[ref_m | c], psi[r | ref_rest], anchor, tol)) return false;
    }
  }
  return true;
}

SeparabilityVerdict is_separable(const PureState& psi, const QubitSet& m, const ToleranceConfig& tol) {
  const int n = psi.num_qubits();
  const QubitSet set = checked_bipartition(psi, m);
  MinorScan scan;
  scan_slice(psi, 0, subsystem_offsets(set, n), subsystem_offsets(complement(set, n), n), tol, scan);
  return to_verdict(scan, n);
}

Factors extract_factors(const PureState& psi, const QubitSet& m, const ToleranceConfig& tol) {
  const int n = psi.num_qubits();
  const QubitSet set = checked_bipartition(psi, m);
  if (!is_separable(psi, set, tol).separable) {
    throw Error(ErrorCode::NotSeparable, "minor test failed for the requested split");
  }
  const std::uint64_t ref = index_of(argmax_modulus_assignment(psi), n);
  const cd anchor = psi[ref];
  if (std::abs(anchor) <= tol.zero_amp_threshold) {
    throw Error(ErrorCode::DegenerateState, "largest amplitude is below threshold");
  }
  const QubitSet rest = complement(set, n);
  const std::uint64_t m_mask = qubit_mask(set, n);
  const auto rows = subsystem_offsets(set, n);
  const auto cols = subsystem_offsets(rest, n);

  // alpha: reference column, beta: reference row.
  ComplexVector<double> alpha(static_cast<Eigen::Index>(rows.size()));
  ComplexVector<double> beta(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) alpha(static_cast<Eigen::Index>(i)) = psi[rows[i] | (ref & ~m_mask)];
  for (std::size_t j = 0; j < cols.size(); ++j) beta(static_cast<Eigen::Index>(j)) = psi[(ref & m_mask) | cols[j]];

  // c_alpha * c_beta = 1 / a(x0) and |c_alpha| ||alpha|| = |c_beta| ||beta||.
  const double c_alpha = std::sqrt(beta.norm() / (alpha.norm() * std::abs(anchor)));
  const cd c_beta = 1.0 / (anchor * c_alpha);
  return {PureState::normalized(static_cast<int>(set.size()), c_alpha * alpha),
          PureState::normalized(static_cast<int>(rest.size()), c_beta * beta)};
}

SeparabilityVerdict conditionally_separable(const PureState& psi, const QubitSet& a, const QubitSet& b,
                                            const QubitSet& c, const ToleranceConfig& tol, SeparabilityMode mode,
                                            const std::optional<Assignment>& reference) {
  const int n = psi.num_qubits();
  const QubitSet sa = normalize_set(a, n);
  const QubitSet sb = normalize_set(b, n);
  const QubitSet sc = normalize_set(c, n);
  if (sa.empty() || sb.empty()) throw Error(ErrorCode::InvalidPartition, "A and B must be nonempty");
  QubitSet all = sa;
  all.insert(all.end(), sb.begin(), sb.end());
  all.insert(all.end(), sc.begin(), sc.end());
  normalize_set(all, n);  // throws on overlap

  QubitSet ab = sa;
  ab.insert(ab.end(), sb.begin(), sb.end());
  std::sort(ab.begin(), ab.end());
  const auto rows = subsystem_offsets(sa, n);
  const auto cols = subsystem_offsets(sb, n);
  const auto contexts = subsystem_offsets(complement(ab, n), n);

  MinorScan scan;
  if (mode == SeparabilityMode::robust) {
    for (std::uint64_t ctx : contexts) scan_slice(psi, ctx, rows, cols, tol, scan);
  } else {
    const std::uint64_t ref = index_of(reference.value_or(Assignment::zeros(n)), n);
    const std::uint64_t ref_a = ref & qubit_mask(sa, n);
    const std::uint64_t ref_b = ref & qubit_mask(sb, n);
    for (std::uint64_t ctx : contexts) {
      const cd anchor = psi[ctx | ref_a | ref_b];
      for (std::uint64_t r : rows) {
        for (std::uint64_t col : cols) {
          const cd x = psi[ctx | r | col];
          const cd y = psi[ctx | ref_a | col];
          const cd z = psi[ctx | r | ref_b];
          scan.max_minor = std::max(scan.max_minor, std::abs(x * anchor - y * z));
          if (!scan.violated && !minor_vanishes(x, y, z, anchor, tol)) {
            scan.violated = true;
            scan.first_corner = ctx | r | col;
            scan.second_corner = ctx | ref_a | ref_b;
          }
        }
      }
    }
  }
  SeparabilityVerdict v = to_verdict(scan, n);
  v.zero_amplitude_warning = psi.min_modulus() <= tol.zero_amp_threshold;
  return v;
}

}  // namespace men
