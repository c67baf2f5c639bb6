#include "men/assignment.hpp"

#include <algorithm>
#include <charconv>

#include "men/error.hpp"

namespace men {

void ToleranceConfig::validate() const {
  if (!(rel_eps > 0.0) || !(abs_eps > 0.0) || !(zero_amp_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidQuery, "tolerances must be strictly positive");
  }
}

Assignment::Assignment(int num_qubits) : bits_(static_cast<std::size_t>(num_qubits), -1) {
  if (num_qubits < 0) throw Error(ErrorCode::InvalidAssignment, "negative qubit count");
}

Assignment Assignment::zeros(int num_qubits) {
  Assignment x(num_qubits);
  std::fill(x.bits_.begin(), x.bits_.end(), 0);
  return x;
}

Assignment Assignment::from_index(std::uint64_t index, int num_qubits) {
  if (num_qubits > 63 || (num_qubits < 63 && index >> num_qubits) != 0) {
    throw Error(ErrorCode::InvalidAssignment, "basis index out of range");
  }
  Assignment x(num_qubits);
  for (int q = 1; q <= num_qubits; ++q) {
    x.bits_[static_cast<std::size_t>(q - 1)] = (index & qubit_bit(q, num_qubits)) ? 1 : 0;
  }
  return x;
}

Assignment Assignment::from_bits(std::string_view bits) {
  Assignment x(static_cast<int>(bits.size()));
  for (std::size_t k = 0; k < bits.size(); ++k) {
    switch (bits[k]) {
      case '0': x.bits_[k] = 0; break;
      case '1': x.bits_[k] = 1; break;
      case '*': break;
      default: throw Error(ErrorCode::InvalidAssignment, "bit-string contains '" + std::string(1, bits[k]) + "'");
    }
  }
  return x;
}

void Assignment::check_qubit(int qubit) const {
  if (qubit < 1 || qubit > num_qubits()) {
    throw Error(ErrorCode::InvalidAssignment,
                "qubit " + std::to_string(qubit) + " outside 1.." + std::to_string(num_qubits()));
  }
}

bool Assignment::is_bound(int qubit) const {
  check_qubit(qubit);
  return bits_[static_cast<std::size_t>(qubit - 1)] >= 0;
}

bool Assignment::is_full() const {
  return std::none_of(bits_.begin(), bits_.end(), [](std::int8_t b) { return b < 0; });
}

bool Assignment::empty() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::int8_t b) { return b < 0; });
}

int Assignment::bound_count() const {
  return static_cast<int>(std::count_if(bits_.begin(), bits_.end(), [](std::int8_t b) { return b >= 0; }));
}

int Assignment::operator[](int qubit) const {
  check_qubit(qubit);
  const int bit = bits_[static_cast<std::size_t>(qubit - 1)];
  if (bit < 0) throw Error(ErrorCode::MissingBinding, "qubit " + std::to_string(qubit) + " is unbound");
  return bit;
}

void Assignment::bind(int qubit, int bit) {
  check_qubit(qubit);
  if (bit != 0 && bit != 1) throw Error(ErrorCode::InvalidAssignment, "bit must be 0 or 1");
  bits_[static_cast<std::size_t>(qubit - 1)] = static_cast<std::int8_t>(bit);
}

void Assignment::unbind(int qubit) {
  check_qubit(qubit);
  bits_[static_cast<std::size_t>(qubit - 1)] = -1;
}

QubitSet Assignment::domain() const {
  QubitSet out;
  for (int q = 1; q <= num_qubits(); ++q) {
    if (bits_[static_cast<std::size_t>(q - 1)] >= 0) out.push_back(q);
  }
  return out;
}

std::string Assignment::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b < 0 ? '*' : static_cast<char>('0' + b));
  return s;
}

std::uint64_t index_of(const Assignment& x, int num_qubits) {
  if (x.num_qubits() != num_qubits) {
    throw Error(ErrorCode::InvalidAssignment, "assignment size does not match qubit count");
  }
  if (num_qubits > 63) throw Error(ErrorCode::InvalidAssignment, "too many qubits for a basis index");
  std::uint64_t index = 0;
  for (int q = 1; q <= num_qubits; ++q) {
    if (x[q]) index |= qubit_bit(q, num_qubits);
  }
  return index;
}

Assignment assignment_of(std::uint64_t index, int num_qubits) {
  return Assignment::from_index(index, num_qubits);
}

std::uint64_t qubit_mask(const QubitSet& qubits, int num_qubits) {
  std::uint64_t mask = 0;
  for (int q : qubits) mask |= qubit_bit(q, num_qubits);
  return mask;
}

QubitSet normalize_set(QubitSet qubits, int num_qubits) {
  std::sort(qubits.begin(), qubits.end());
  if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end()) {
    throw Error(ErrorCode::InvalidPartition, "duplicate qubit in set");
  }
  if (!qubits.empty() && (qubits.front() < 1 || qubits.back() > num_qubits)) {
    throw Error(ErrorCode::InvalidPartition, "qubit index outside 1.." + std::to_string(num_qubits));
  }
  return qubits;
}

QubitSet complement(const QubitSet& qubits, int num_qubits) {
  QubitSet out;
  for (int q = 1; q <= num_qubits; ++q) {
    if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) out.push_back(q);
  }
  return out;
}

std::vector<std::uint64_t> subsystem_offsets(const QubitSet& qubits, int num_qubits) {
  const std::size_t k = qubits.size();
  std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t sub = 0; sub < offsets.size(); ++sub) {
    std::uint64_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (sub & (std::size_t{1} << (k - 1 - j))) off |= qubit_bit(qubits[j], num_qubits);
    }
    offsets[sub] = off;
  }
  return offsets;
}

std::uint64_t extract_bits(std::uint64_t index, const QubitSet& qubits, int num_qubits) {
  std::uint64_t out = 0;
  for (int q : qubits) out = (out << 1) | ((index & qubit_bit(q, num_qubits)) ? 1u : 0u);
  return out;
}

Assignment parse_assignment(std::string_view text, int num_qubits) {
  Assignment x(num_qubits);
  std::vector<bool> seen(static_cast<std::size_t>(num_qubits) + 1, false);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidAssignment, "expected index=bit, got '" + std::string(item) + "'");
    }
    int qubit = 0;
    int bit = 0;
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    auto r1 = std::from_chars(key.data(), key.data() + key.size(), qubit);
    auto r2 = std::from_chars(value.data(), value.data() + value.size(), bit);
    if (r1.ec != std::errc() || r1.ptr != key.data() + key.size() || r2.ec != std::errc() ||
        r2.ptr != value.data() + value.size() || (bit != 0 && bit != 1)) {
      throw Error(ErrorCode::InvalidAssignment, "expected index=bit, got '" + std::string(item) + "'");
    }
    if (qubit < 1 || qubit > num_qubits) {
      throw Error(ErrorCode::InvalidQuery,
                  "qubit " + std::to_string(qubit) + " outside 1.." + std::to_string(num_qubits));
    }
    if (seen[static_cast<std::size_t>(qubit)]) {
      throw Error(ErrorCode::InvalidAssignment, "qubit " + std::to_string(qubit) + " bound twice");
    }
    seen[static_cast<std::size_t>(qubit)] = true;
    x.bind(qubit, bit);
    pos = end + 1;
  }
  return x;
}

}  // namespace men
