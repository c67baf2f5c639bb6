#include "men/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "chain_detail.hpp"

namespace men {
namespace {

using cd = std::complex<double>;

constexpr double kZeroEvidence = 1e-300;
constexpr double kTieTolerance = 1e-12;

void require_size(const Assignment& x, int n, const char* what) {
  if (x.num_qubits() != n) {
    throw Error(ErrorCode::InvalidQuery, std::string(what) + " has " + std::to_string(x.num_qubits()) +
                                             " qubits, expected " + std::to_string(n));
  }
}

void require_chain(const MenModel& model) {
  if (!model.graph.is_path()) throw Error(ErrorCode::NotAChain, "graph is not the path 1-2-...-n");
}

Assignment merge_disjoint(const Assignment& query, const Assignment& evidence) {
  Assignment joint = evidence;
  for (int q : query.domain()) {
    if (evidence.is_bound(q)) {
      throw Error(ErrorCode::InvalidQuery, "qubit " + std::to_string(q) + " appears in query and evidence");
    }
    joint.bind(q, query[q]);
  }
  return joint;
}

std::array<int, 2> allowed_bits(const Assignment& x, int q) {
  const int bit = x.raw(q);
  return bit < 0 ? std::array<int, 2>{0, 1} : std::array<int, 2>{bit, -1};
}

}  // namespace

double marginal_probability(const PureState& psi, const Assignment& x_m) {
  const int n = psi.num_qubits();
  require_size(x_m, n, "assignment");
  std::uint64_t mask = 0;
  std::uint64_t pattern = 0;
  for (int q : x_m.domain()) {
    mask |= qubit_bit(q, n);
    if (x_m[q]) pattern |= qubit_bit(q, n);
  }
  double sum = 0.0;
  for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
    if ((i & mask) == pattern) sum += std::norm(psi[i]);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double conditional_probability(const PureState& psi, const Assignment& query, const Assignment& evidence) {
  const int n = psi.num_qubits();
  require_size(query, n, "query");
  require_size(evidence, n, "evidence");
  const Assignment joint = merge_disjoint(query, evidence);
  const double p_evidence = marginal_probability(psi, evidence);
  if (p_evidence < kZeroEvidence) throw Error(ErrorCode::ZeroEvidenceProbability, evidence.to_string());
  if (query.empty()) return 1.0;
  return marginal_probability(psi, joint) / p_evidence;
}

QueryResult marginal_ratio(const MenModel& model, const Assignment& x_m) {
  const int n = model.num_qubits();
  require_size(x_m, n, "assignment");
  const QubitSet free = complement(x_m.domain(), n);
  if (free.size() > 40) throw Error(ErrorCode::EnumerationBoundExceeded, "too many unbound qubits");
  Assignment x = x_m;
  QueryResult out;
  double sum = 0.0;
  const std::uint64_t completions = std::uint64_t{1} << free.size();
  for (std::uint64_t c = 0; c < completions; ++c) {
    for (std::size_t t = 0; t < free.size(); ++t) {
      x.bind(free[t], static_cast<int>((c >> (free.size() - 1 - t)) & 1));
    }
    sum += std::norm(relative_amplitude(model, x));
    out.op_count += (n - 1) + 1 + 1;  // product, modulus square, accumulate
  }
  out.value = sum;
  out.log_value = std::log(sum);
  return out;
}

double conditional_probability(const MenModel& model, const Assignment& query, const Assignment& evidence) {
  const int n = model.num_qubits();
  require_size(query, n, "query");
  require_size(evidence, n, "evidence");
  const Assignment joint = merge_disjoint(query, evidence);
  auto ratio = [&](const Assignment& x) {
    return model.graph.is_path() ? chain_marginal_ratio(model, x) : marginal_ratio(model, x);
  };
  const QueryResult evidence_ratio = ratio(evidence);
  const double log_p_evidence = evidence_ratio.log_value + 2.0 * model.log_reference_modulus;
  if (!(log_p_evidence >= std::log(kZeroEvidence))) {
    throw Error(ErrorCode::ZeroEvidenceProbability, evidence.to_string());
  }
  if (query.empty()) return 1.0;
  return std::exp(ratio(joint).log_value - evidence_ratio.log_value);
}

QueryResult chain_prefix_marginal_ratio(const MenModel& model, const Assignment& x_m) {
  require_chain(model);
  const int n = model.num_qubits();
  require_size(x_m, n, "assignment");
  const int m = x_m.bound_count();
  for (int q = 1; q <= m; ++q) {
    if (!x_m.is_bound(q)) throw Error(ErrorCode::NotAPrefix, "bound qubits must be 1..m");
  }

  QueryResult out;
  double log_value = 0.0;

  // Prefix: Π_{i<=m} |q(x_i | x_{i-1}, x0_{i+1})|^2.
  for (int i = 1; i <= m; ++i) {
    log_value += std::log(std::norm(detail::chain_q(model, i, i > 1 ? x_m[i - 1] : 0, x_m[i])));
    out.op_count += i == 1 ? 1 : 2;
  }

  if (m < n) {
    // Right-to-left suffix sums: beta(x_{j-1}) = Σ_{x_j} |q(x_j | x_{j-1}, x0_{j+1})|^2 beta_next(x_j).
    std::array<double, 2> beta{1.0, 1.0};
    for (int j = n; j >= m + 2; --j) {
      std::array<double, 2> next{};
      for (int prev = 0; prev < 2; ++prev) {
        for (int x = 0; x < 2; ++x) {
          next[static_cast<std::size_t>(prev)] +=
              std::norm(detail::chain_q(model, j, prev, x)) * beta[static_cast<std::size_t>(x)];
        }
      }
      out.op_count += 10;
      const double scale = std::max(next[0], next[1]);
      beta = {next[0] / scale, next[1] / scale};
      log_value += std::log(scale);
    }
    const int anchor = m >= 1 ? x_m[m] : 0;
    double suffix = 0.0;
    for (int x = 0; x < 2; ++x) {
      suffix += std::norm(detail::chain_q(model, m + 1, anchor, x)) * beta[static_cast<std::size_t>(x)];
    }
    out.op_count += 5;
    log_value += std::log(suffix);
    if (m >= 1) out.op_count += 1;  // prefix × suffix
  }
  out.log_value = log_value;
  out.value = std::exp(log_value);
  return out;
}

QueryResult chain_marginal_ratio(const MenModel& model, const Assignment& x_m) {
  require_chain(model);
  const int n = model.num_qubits();
  require_size(x_m, n, "assignment");

  QueryResult out;
  double log_scale = 0.0;
  std::array<double, 2> alpha{0.0, 0.0};
  for (int x : allowed_bits(x_m, 1)) {
    if (x < 0) continue;
    alpha[static_cast<std::size_t>(x)] = std::norm(detail::chain_q(model, 1, 0, x));
    out.op_count += 1;
  }
  for (int i = 2; i <= n; ++i) {
    std::array<double, 2> next{0.0, 0.0};
    const auto prevs = allowed_bits(x_m, i - 1);
    const int prev_count = prevs[1] < 0 ? 1 : 2;
    for (int x : allowed_bits(x_m, i)) {
      if (x < 0) continue;
      for (int prev : prevs) {
        if (prev < 0) continue;
        next[static_cast<std::size_t>(x)] +=
            alpha[static_cast<std::size_t>(prev)] * std::norm(detail::chain_q(model, i, prev, x));
        out.op_count += 2;
      }
      out.op_count += prev_count - 1;
    }
    const double scale = std::max(next[0], next[1]);
    alpha = {next[0] / scale, next[1] / scale};
    log_scale += std::log(scale);
  }
  out.op_count += x_m.is_bound(n) ? 0 : 1;
  out.log_value = log_scale + std::log(alpha[0] + alpha[1]);
  out.value = std::exp(out.log_value);
  return out;
}

std::int64_t quoted_prefix_op_count(int n, int m) {
  return 6 * static_cast<std::int64_t>(n - m) + 2 * static_cast<std::int64_t>(m) - 1;
}

MleResult mle_brute_force(const PureState& psi) {
  const Eigen::VectorXd probs = psi.amplitudes().cwiseAbs2();
  const double best = probs.maxCoeff();
  MleResult out;
  out.op_count = 2 * static_cast<std::int64_t>(psi.dimension());
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) >= best * (1.0 - kTieTolerance)) {
      out.assignment = assignment_of(static_cast<std::uint64_t>(i), psi.num_qubits());
      out.probability = probs(i);
      out.log_probability = std::log(probs(i));
      break;
    }
  }
  return out;
}

MleResult mle_chain(const MenModel& model) {
  require_chain(model);
  const int n = model.num_qubits();
  MleResult out;

  // score[i][prev][x] = log |q(x_i = x | x_{i-1} = prev, x0_{i+1})|^2 ; best[i][prev] = best suffix from node i.
  std::vector<std::array<std::array<double, 2>, 2>> score(static_cast<std::size_t>(n) + 2);
  std::vector<std::array<double, 2>> best(static_cast<std::size_t>(n) + 2, {0.0, 0.0});
  for (int i = n; i >= 1; --i) {
    const int prev_count = i == 1 ? 1 : 2;
    auto& s = score[static_cast<std::size_t>(i)];
    for (int prev = 0; prev < prev_count; ++prev) {
      double top = -std::numeric_limits<double>::infinity();
      for (int x = 0; x < 2; ++x) {
        s[static_cast<std::size_t>(prev)][static_cast<std::size_t>(x)] =
            std::log(std::norm(detail::chain_q(model, i, prev, x)));
        top = std::max(top, s[static_cast<std::size_t>(prev)][static_cast<std::size_t>(x)] +
                                best[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(x)]);
      }
      best[static_cast<std::size_t>(i)][static_cast<std::size_t>(prev)] = top;
      out.op_count += 2 + 2 + 1;  // modulus squares, additions, comparison
    }
  }

  out.assignment = Assignment(n);
  int prev = 0;
  for (int i = 1; i <= n; ++i) {
    const double target = best[static_cast<std::size_t>(i)][static_cast<std::size_t>(prev)];
    for (int x = 0; x < 2; ++x) {
      const double value = score[static_cast<std::size_t>(i)][static_cast<std::size_t>(prev)][static_cast<std::size_t>(x)] +
                           best[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(x)];
      if (value >= target - kTieTolerance) {
        out.assignment.bind(i, x);
        prev = x;
        break;
      }
    }
  }
  out.log_probability = best[1][0] + 2.0 * model.log_reference_modulus;
  out.probability = std::exp(out.log_probability);
  return out;
}

MeasurementUpdate measure_and_update(const PureState& psi, const MenGraph& prior, int qubit, int outcome,
                                     const ToleranceConfig& tol) {
  if (prior.num_nodes() != psi.num_qubits()) {
    throw Error(ErrorCode::InvalidPartition, "graph and state sizes differ");
  }
  auto measured = measure_qubit(psi, qubit, outcome, tol.zero_amp_threshold);
  auto rebuilt = build_graph(measured.collapsed, tol);
  bool contained = true;
  for (const auto& [i, j] : rebuilt.graph.edges()) {
    if (i == qubit || j == qubit || !prior.has_edge(i, j)) contained = false;
  }
  return {measured.probability, std::move(measured.collapsed), std::move(rebuilt.graph),
          rebuilt.zero_amplitude_warning, contained};
}

MenModel random_chain_model(int n, std::uint64_t seed, double zero_amp_threshold) {
  if (n < 1) throw Error(ErrorCode::InvalidModel, "chain needs at least one qubit");
  return random_markov_model(MenGraph::path(n), seed, zero_amp_threshold);
}

}  // namespace men
