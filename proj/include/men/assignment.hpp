#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace men {

/// Qubits are numbered 1..n. Qubit 1 is the most significant bit of a basis index.
using QubitSet = std::vector<int>;

struct ToleranceConfig {
  double rel_eps = 1e-9;
  double abs_eps = 1e-12;
  double zero_amp_threshold = 1e-6;

  /// Throws InvalidQuery unless every field is strictly positive.
  void validate() const;
};

/// Full or partial map from qubit indices 1..n to bits.
class Assignment {
 public:
  Assignment() = default;
  /// All qubits unbound.
  explicit Assignment(int num_qubits);

  static Assignment zeros(int num_qubits);
  /// Full assignment whose MSB-first index is `index`.
  static Assignment from_index(std::uint64_t index, int num_qubits);
  /// "0101" binds qubit k to character k; '*' leaves it unbound.
  static Assignment from_bits(std::string_view bits);

  int num_qubits() const { return static_cast<int>(bits_.size()); }
  bool is_bound(int qubit) const;
  bool is_full() const;
  bool empty() const;
  int bound_count() const;

  /// Throws MissingBinding when `qubit` is unbound.
  int operator[](int qubit) const;
  /// Raw access without binding check: -1 when unbound.
  int raw(int qubit) const { return bits_[static_cast<std::size_t>(qubit - 1)]; }

  void bind(int qubit, int bit);
  void unbind(int qubit);

  QubitSet domain() const;
  /// Bits for bound qubits, '*' for unbound ones.
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  void check_qubit(int qubit) const;

  std::vector<std::int8_t> bits_;
};

/// MSB-first basis index of a full assignment.
std::uint64_t index_of(const Assignment& x, int num_qubits);
/// Inverse of index_of.
Assignment assignment_of(std::uint64_t index, int num_qubits);

/// Bit weight of a qubit inside an n-qubit basis index.
constexpr std::uint64_t qubit_bit(int qubit, int num_qubits) {
  return std::uint64_t{1} << (num_qubits - qubit);
}

/// Bitmask of a qubit set inside an n-qubit basis index.
std::uint64_t qubit_mask(const QubitSet& qubits, int num_qubits);

/// Sorted, range-checked copy of `qubits`; throws InvalidPartition on duplicates or out-of-range indices.
QubitSet normalize_set(QubitSet qubits, int num_qubits);

/// All qubits of 1..n not in `qubits`.
QubitSet complement(const QubitSet& qubits, int num_qubits);

/// Offsets into an n-qubit amplitude vector for each assignment of `qubits`,
/// listed in lexicographic order of the sub-assignment (first qubit most significant).
std::vector<std::uint64_t> subsystem_offsets(const QubitSet& qubits, int num_qubits);

/// Sub-assignment of `qubits` read out of a basis index, packed MSB-first.
std::uint64_t extract_bits(std::uint64_t index, const QubitSet& qubits, int num_qubits);

/// Parses "1=0,3=1". Duplicates, malformed items and bits other than 0/1 throw InvalidAssignment;
/// indices outside 1..n throw InvalidQuery.
Assignment parse_assignment(std::string_view text, int num_qubits);

}  // namespace men
