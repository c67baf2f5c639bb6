#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "men/inference.hpp"

namespace men {
namespace {

constexpr double kOracleRelTol = 1e-10;

volatile double g_sink = 0.0;

// `work` approximates the cost of one call so that each sample spans roughly 1e5 units.
double median_call_ns(std::int64_t work, int repetitions, const std::function<double()>& call) {
  const int inner = static_cast<int>(std::max<std::int64_t>(1, 100000 / std::max<std::int64_t>(work, 1)));
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(repetitions));
  for (int r = 0; r < std::max(repetitions, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    double acc = 0.0;
    for (int k = 0; k < inner; ++k) acc += call();
    const auto stop = std::chrono::steady_clock::now();
    g_sink = g_sink + acc;
    samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count() / inner);
  }
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2), samples.end());
  return samples[samples.size() / 2];
}

bool close_rel(double x, double y) { return std::abs(x - y) <= kOracleRelTol * std::max(std::abs(x), std::abs(y)); }

Assignment odd_qubits_set(int n) {
  Assignment x(n);
  for (int q = 1; q <= n; q += 2) x.bind(q, 1);
  return x;
}

Assignment prefix_ones(int n, int m) {
  Assignment x(n);
  for (int q = 1; q <= m; ++q) x.bind(q, 1);
  return x;
}

bool ratio_matches_oracle(const MenModel& model, const PureState& psi, const QueryResult& r, const Assignment& x) {
  const double p = r.value * model.reference_modulus * model.reference_modulus;
  return close_rel(p, marginal_probability(psi, x));
}

std::string format_row(const BenchRow& row) {
  char wall[64] = "";
  if (row.wall_ns_median) std::snprintf(wall, sizeof wall, "%.0f", *row.wall_ns_median);
  std::string oracle;
  if (row.oracle_agreement) oracle = *row.oracle_agreement ? "yes" : "no";
  return std::to_string(row.size) + "," + row.task + "," + wall + "," + std::to_string(row.op_count) + "," + oracle;
}

}  // namespace

std::string BenchReport::to_text() const {
  std::string out = "size,task,wall_ns_median,op_count,oracle_agreement\n";
  for (const auto& row : rows) out += format_row(row) + "\n";
  return out;
}

double time_chain_marginal_ns(int n, std::uint64_t seed, int repetitions) {
  const MenModel model = random_chain_model(n, seed);
  const Assignment x = odd_qubits_set(n);
  return median_call_ns(n, repetitions, [&] { return chain_marginal_ratio(model, x).log_value; });
}

BenchReport bench_chains(const std::vector<int>& sizes, std::uint64_t seed, const BenchOptions& options) {
  BenchReport report;
  for (int n : sizes) {
    if (n < 1) throw Error(ErrorCode::InvalidQuery, "bench size must be positive");
    const MenModel model = random_chain_model(n, seed);
    const bool with_oracle = n <= options.oracle_limit;
    const std::optional<PureState> psi =
        n <= std::max(options.oracle_limit, options.brute_force_limit) ? std::optional(reconstruct_state(model))
                                                                        : std::nullopt;
    auto timed = [&](const std::function<double()>& call, std::int64_t work) -> std::optional<double> {
      if (!options.timing) return std::nullopt;
      return median_call_ns(work, options.repetitions, call);
    };

    const Assignment odd = odd_qubits_set(n);
    const QueryResult marginal = chain_marginal_ratio(model, odd);
    report.rows.push_back({n, "chain_marginal", timed([&] { return chain_marginal_ratio(model, odd).log_value; }, n),
                           marginal.op_count,
                           with_oracle ? std::optional(ratio_matches_oracle(model, *psi, marginal, odd)) : std::nullopt});

    const int m = n / 2;
    const Assignment prefix = prefix_ones(n, m);
    const QueryResult prefix_result = chain_prefix_marginal_ratio(model, prefix);
    report.rows.push_back(
        {n, "prefix_marginal", timed([&] { return chain_prefix_marginal_ratio(model, prefix).log_value; }, n),
         prefix_result.op_count,
         with_oracle ? std::optional(ratio_matches_oracle(model, *psi, prefix_result, prefix)) : std::nullopt});
    report.rows.push_back({n, "prefix_marginal(quoted)", std::nullopt, quoted_prefix_op_count(n, m), std::nullopt});

    const MleResult mle = mle_chain(model);
    std::optional<bool> mle_agrees;
    if (with_oracle) {
      const MleResult brute = mle_brute_force(*psi);
      mle_agrees = brute.assignment == mle.assignment && std::abs(brute.probability - mle.probability) <= 1e-12;
    }
    report.rows.push_back({n, "mle_chain", timed([&] { return mle_chain(model).log_probability; }, n), mle.op_count,
                           mle_agrees});

    if (n <= options.brute_force_limit) {
      const QueryResult brute = marginal_ratio(model, odd);
      report.rows.push_back(
          {n, "marginal_brute", timed([&] { return marginal_ratio(model, odd).value; }, brute.op_count), brute.op_count, std::nullopt});
      const MleResult brute_mle = mle_brute_force(*psi);
      report.rows.push_back({n, "mle_brute", timed([&] { return mle_brute_force(*psi).probability; }, brute_mle.op_count),
                             brute_mle.op_count, std::nullopt});
    }
  }
  return report;
}

}  // namespace men
