// One PASS/FAIL line per acceptance criterion; exit status 1 when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "men/classify3.hpp"
#include "men/inference.hpp"
#include "men/io.hpp"
#include "men/separability.hpp"

using namespace men;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::vector<QubitSet> proper_subsets(int n) {
  std::vector<QubitSet> out;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    QubitSet s;
    for (int q = 1; q <= n; ++q) {
      if (mask & (std::uint64_t{1} << (q - 1))) s.push_back(q);
    }
    out.push_back(s);
  }
  return out;
}

/// Labels each qubit 0 (A), 1 (B) or 2 (C) from a base-3 code.
void split3(int code, int n, QubitSet& a, QubitSet& b, QubitSet& c) {
  a.clear();
  b.clear();
  c.clear();
  for (int q = 1; q <= n; ++q, code /= 3) (code % 3 == 0 ? a : code % 3 == 1 ? b : c).push_back(q);
}

MenGraph random_graph(int n, std::mt19937_64& rng, bool need_missing_edge) {
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    MenGraph g(n);
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (coin(rng)) g.add_edge(i, j);
      }
    }
    const std::size_t full = static_cast<std::size_t>(n * (n - 1) / 2);
    if (!need_missing_edge || g.edge_count() < full) return g;
  }
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Verdict criterion1() {
  Verdict v;
  const auto start = Clock::now();
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    PureState psi = random_state(n, seed);
    QubitSet split;
    if (seed % 2) {
      const int cut = 1 + static_cast<int>((seed / 2) % static_cast<std::uint64_t>(n - 1));
      for (int q = 1; q <= cut; ++q) split.push_back(q);
      psi = random_product_state({split, complement(split, n)}, seed).state;
    }
    const Assignment x0 = argmax_modulus_assignment(psi);
    for (const auto& m : proper_subsets(n)) {
      ++cases;
      v.require(a_independent(psi, m, x0) == is_separable(psi, m).separable,
                "disagreement at seed " + std::to_string(seed));
    }
    if (!split.empty()) v.require(is_separable(psi, split).separable, "product split not separable");
  }
  const PureState bell = PureState::normalized(2, Eigen::Vector4cd(1, 0, 0, 1));
  v.require(!is_separable(bell, {1}).separable && !a_independent(bell, {1}, Assignment::zeros(2)), "Bell separable");
  const double t = seconds_since(start);
  v.require(t < 30.0, "runtime over 30 s");
  v.detail = std::to_string(cases) + " bipartitions, " + std::to_string(t) + " s" + (v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion2() {
  Verdict v;
  double worst = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    std::mt19937_64 rng(seed);
    QubitSet m;
    for (int q = 1; q <= n; ++q) {
      if (std::bernoulli_distribution(0.5)(rng)) m.push_back(q);
    }
    if (m.empty()) m.push_back(1);
    if (static_cast<int>(m.size()) == n) m.pop_back();
    const auto product = random_product_state({m, complement(m, n)}, seed);
    const Factors f = extract_factors(product.state, m);
    worst = std::min(worst, fidelity_up_to_phase(tensor_product(f.phi, f.chi, m), product.state));
  }
  v.require(worst >= 1.0 - 1e-9, "fidelity below 1 - 1e-9");
  char buf[80];
  std::snprintf(buf, sizeof buf, "100 product states, min fidelity %.15f", worst);
  v.detail = buf + (v.pass ? std::string() : "; " + v.detail);
  return v;
}

Verdict criterion3() {
  Verdict v;
  std::mt19937_64 rng(3);
  int detected = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MenGraph g = random_graph(4, rng, true);
    const PureState psi = reconstruct_state(random_markov_model(g, seed));
    QubitSet a, b, c;
    for (int code = 0; code < 81; ++code) {
      split3(code, 4, a, b, c);
      if (a.empty() || b.empty() || !conditionally_separable(psi, a, b, c).separable) continue;
      ++detected;
      for (std::uint64_t xa = 0; xa < (1u << a.size()); ++xa) {
        for (std::uint64_t xbc = 0; xbc < (1u << (b.size() + c.size())); ++xbc) {
          Assignment query(4), evidence(4), baseline(4);
          for (std::size_t t = 0; t < a.size(); ++t) query.bind(a[t], static_cast<int>((xa >> t) & 1));
          for (std::size_t t = 0; t < b.size(); ++t) {
            evidence.bind(b[t], static_cast<int>((xbc >> t) & 1));
            baseline.bind(b[t], 0);
          }
          for (std::size_t t = 0; t < c.size(); ++t) {
            const int bit = static_cast<int>((xbc >> (b.size() + t)) & 1);
            evidence.bind(c[t], bit);
            baseline.bind(c[t], bit);
          }
          worst = std::max(worst, std::abs(conditional_probability(psi, query, evidence) -
                                           conditional_probability(psi, query, baseline)));
        }
      }
    }
  }
  v.require(detected > 0, "no conditional separability detected");
  v.require(worst <= 1e-8, "conditional probabilities differ");
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d separabilities on 100 states, max |p(a|b,c) - p(a|b0,c)| %.3e", detected, worst);
  v.detail = buf + (v.pass ? std::string() : "; " + v.detail);
  return v;
}

Verdict criterion4() {
  Verdict v;
  std::mt19937_64 rng(4);
  int partitions = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 2);
    const MenGraph g = random_graph(n, rng, false);
    const PureState psi = reconstruct_state(random_markov_model(g, seed));
    const PerfectMapReport r = verify_perfect_map(psi, g);
    partitions += r.partitions_checked;
    v.require(r.passed(), "perfect map fails at seed " + std::to_string(seed));
  }
  std::vector<int> instances(5, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GraphoidReport r = check_graphoid_axioms(random_nonzero_state(4, seed));
    for (std::size_t k = 0; k < 5; ++k) instances[k] += r.instances[k];
    v.require(r.passed(), "graphoid axiom fails at seed " + std::to_string(seed));
  }
  // Generic states make most premises false, so product states supply instances for every axiom.
  std::vector<int> product_instances(5, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GraphoidReport r = check_graphoid_axioms(random_product_state({{1}, {2}, {3}, {4}}, seed).state);
    for (std::size_t k = 0; k < 5; ++k) product_instances[k] += r.instances[k];
    v.require(r.passed(), "graphoid axiom fails on product state " + std::to_string(seed));
  }
  for (int count : product_instances) v.require(count > 0, "an axiom has no instance");
  std::string detail = std::to_string(partitions) + " partitions over 50 graphs; axiom instances generic/product";
  for (std::size_t k = 0; k < 5; ++k) {
    detail += " " + std::string(axiom_name(kGraphoidAxioms[k])) + "=" + std::to_string(instances[k]) + "/" +
              std::to_string(product_instances[k]);
  }
  v.detail = detail + (v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion5() {
  Verdict v;
  double worst_fidelity = 1.0, worst_modulus = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const PureState psi = random_nonzero_state(n, seed);
    const MenModel model = extract_men(psi);
    worst_fidelity = std::min(worst_fidelity, fidelity_up_to_phase(reconstruct_state(model), psi));
    double sum = 0.0;
    for (std::uint64_t i = 0; i < psi.dimension(); ++i) sum += std::norm(relative_amplitude(model, assignment_of(i, n)));
    const double formula = 1.0 / std::sqrt(sum);
    worst_modulus = std::max(worst_modulus, std::abs(model.reference_modulus - formula));
    worst_modulus = std::max(worst_modulus, std::abs(model.reference_modulus - std::abs(psi[index_of(model.reference, n)])));
  }
  v.require(worst_fidelity >= 1.0 - 1e-9, "reconstruction fidelity below 1 - 1e-9");
  v.require(worst_modulus <= 1e-9, "reference modulus off");
  char buf[120];
  std::snprintf(buf, sizeof buf, "min fidelity %.15f, max modulus error %.3e", worst_fidelity, worst_modulus);
  v.detail = buf + (v.pass ? std::string() : "; " + v.detail);
  return v;
}

Verdict criterion6() {
  Verdict v;
  double worst = 0.0;
  std::mt19937_64 rng(6);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 11);
    const MenModel model = random_chain_model(n, seed);
    const PureState psi = reconstruct_state(model);
    const double scale = 2.0 * model.log_reference_modulus;
    Assignment any(n), prefix(n);
    const int m = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(n));
    for (int q = 1; q <= n; ++q) {
      const int pick = std::uniform_int_distribution<int>(0, 2)(rng);
      if (pick < 2) any.bind(q, pick);
      if (q <= m) prefix.bind(q, pick % 2);
    }
    worst = std::max(worst, relative_gap(std::exp(chain_marginal_ratio(model, any).log_value + scale),
                                         marginal_probability(psi, any)));
    worst = std::max(worst, relative_gap(std::exp(chain_prefix_marginal_ratio(model, prefix).log_value + scale),
                                         marginal_probability(psi, prefix)));
  }
  v.require(worst <= 1e-10, "chain inference differs from brute force");

  bool affine = true;
  for (int m = 1; m <= 4; ++m) {
    std::vector<std::int64_t> counts;
    for (int n = 8; n <= 16; ++n) {
      Assignment x(n);
      for (int q = 1; q <= m; ++q) x.bind(q, 1);
      counts.push_back(chain_prefix_marginal_ratio(random_chain_model(n, 1), x).op_count);
    }
    for (std::size_t k = 2; k < counts.size(); ++k) affine = affine && counts[k] - 2 * counts[k - 1] + counts[k - 2] == 0;
  }
  const MenModel sixteen = random_chain_model(16, 1);
  std::vector<std::int64_t> by_m;
  for (int m = 1; m < 16; ++m) {
    Assignment x(16);
    for (int q = 1; q <= m; ++q) x.bind(q, 0);
    by_m.push_back(chain_prefix_marginal_ratio(sixteen, x).op_count);
  }
  for (std::size_t k = 2; k < by_m.size(); ++k) affine = affine && by_m[k] - 2 * by_m[k - 1] + by_m[k - 2] == 0;
  v.require(affine, "prefix op_count not affine");

  // Median of three timing ratios, each a median over repeated calls.
  std::vector<double> ratios;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double t1000 = time_chain_marginal_ns(1000, 1, 15);
    const double t2000 = time_chain_marginal_ns(2000, 1, 15);
    ratios.push_back(t2000 / t1000);
  }
  std::sort(ratios.begin(), ratios.end());
  const double ratio = ratios[1];
  v.require(ratio >= 1.5 && ratio <= 3.0, "timing ratio outside [1.5, 3.0]");

  bool mle_ok = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MenModel model = random_chain_model(10, seed);
    const MleResult chain = mle_chain(model);
    const MleResult brute = mle_brute_force(reconstruct_state(model));
    mle_ok = mle_ok && chain.assignment == brute.assignment && std::abs(chain.probability - brute.probability) <= 1e-12;
  }
  v.require(mle_ok, "mle_chain differs from brute force");

  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel error %.3e, prefix op_count affine %s, time ratio 2000/1000 %.3f",
                worst, affine ? "yes" : "no", ratio);
  v.detail = buf + (v.pass ? std::string() : "; " + v.detail);
  return v;
}

Verdict criterion7() {
  Verdict v;
  const auto start = Clock::now();
  const struct {
    const char* name;
    TripartiteClass expected;
  } cases[] = {{"ghz", TripartiteClass::ghz_like()},          {"w", TripartiteClass::w_like()},
               {"bell12_0", TripartiteClass::biseparable(3)}, {"bell13_0", TripartiteClass::biseparable(2)},
               {"bell23_0", TripartiteClass::biseparable(1)}, {"product", TripartiteClass::fully_separable()}};
  for (const auto& c : cases) {
    const PureState psi = canonical_state(c.name);
    const Classification got = classify_with_census(psi, 256, 7);
    v.require(got.cls == c.expected, std::string(c.name) + " classified " + got.cls.to_string());
    const InvarianceReport inv = class_invariance_check(psi, 20, 7, 256);
    v.require(inv.passed(), std::string(c.name) + " changes class under a local basis change");
  }
  const TopologyCensus ghz = topology_census(canonical_state("ghz"), 256, 7);
  v.require(ghz.has_chain() && ghz.count(TopologyShape::triangle) > 0, "GHZ census lacks a chain or a triangle");
  const TopologyCensus w = topology_census(canonical_state("w"), 256, 7);
  v.require(w.accepted() > 0 && w.count(TopologyShape::triangle) == w.accepted(), "W census has a non-triangle");
  const double t = seconds_since(start);
  v.require(t < 60.0, "runtime over 60 s");
  int ghz_chains = 0;
  for (auto s : {TopologyShape::chain1, TopologyShape::chain2, TopologyShape::chain3}) ghz_chains += ghz.count(s);
  char buf[160];
  std::snprintf(buf, sizeof buf, "6 canonical states, GHZ chains %d triangles %d, W triangles %d/%d, %.2f s",
                ghz_chains, ghz.count(TopologyShape::triangle), w.count(TopologyShape::triangle), w.accepted(), t);
  v.detail = buf + (v.pass ? std::string() : "; " + v.detail);
  return v;
}

Verdict criterion8() {
  Verdict v;
  int violations = 0, removed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 3 + static_cast<int>(seed % 2);
    const PureState psi = random_nonzero_state(n, seed);
    const MenGraph prior = build_graph(psi).graph;
    const int qubit = 1 + static_cast<int>((seed / 2) % static_cast<std::uint64_t>(n));
    const MeasurementUpdate u = measure_and_update(psi, prior, qubit, static_cast<int>(seed % 3 == 0));
    bool ok = u.edges_contained;
    for (const auto& [i, j] : u.graph.edges()) ok = ok && prior.has_edge(i, j) && i != qubit && j != qubit;
    violations += !ok;
    removed += static_cast<int>(prior.edge_count() - u.graph.edge_count());
  }
  v.require(violations == 0, "new edges after measurement");
  v.detail = "100 states, violations " + std::to_string(violations) + ", edges removed " + std::to_string(removed);
  return v;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string read_or_empty(const std::filesystem::path& p) {
  return std::filesystem::exists(p) ? read_text_file(p) : std::string();
}

Verdict criterion9() {
  Verdict v;
  const std::filesystem::path golden = MEN_GOLDEN_DIR;
  const std::filesystem::path work = MEN_WORK_DIR;
  std::filesystem::create_directories(work);
  std::ifstream manifest(golden / "cases.txt");
  v.require(static_cast<bool>(manifest), "cannot read golden manifest");
  int cases = 0;
  std::vector<std::string> subcommands;
  for (std::string line; std::getline(manifest, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto bar1 = line.find('|');
    const auto bar2 = line.find('|', bar1 + 1);
    const std::string name = line.substr(0, bar1);
    const int expected_exit = std::stoi(line.substr(bar1 + 1, bar2 - bar1 - 1));
    std::string text = bar2 == std::string::npos ? "" : line.substr(bar2 + 1);
    text = replace_all(replace_all(text, "@DATA@", MEN_TEST_DATA_DIR), "@WORK@", work.string());
    std::vector<std::string> args{"men"};
    std::istringstream words(text);
    for (std::string w; words >> w;) args.push_back(w);
    if (args.size() > 1) subcommands.push_back(args[1]);

    const auto out_file = work / (name + ".out");
    std::string seen[2][3];
    for (int pass = 0; pass < 2; ++pass) {
      std::filesystem::remove(out_file);
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      v.require(code == expected_exit, name + " exit code " + std::to_string(code));
      seen[pass][0] = out.str();
      seen[pass][1] = err.str();
      seen[pass][2] = read_or_empty(out_file);
    }
    const char* kinds[] = {"stdout", "stderr", "file"};
    for (int k = 0; k < 3; ++k) {
      v.require(seen[0][k] == seen[1][k], name + " " + kinds[k] + " differs between runs");
      v.require(seen[0][k] == read_or_empty(golden / (name + "." + kinds[k])), name + " " + kinds[k] + " differs from golden");
    }
    ++cases;
  }
  std::sort(subcommands.begin(), subcommands.end());
  subcommands.erase(std::unique(subcommands.begin(), subcommands.end()), subcommands.end());
  const std::vector<std::string> all{"bench", "classify", "conditional", "extract", "graph",
                                     "marginal", "measure", "mle", "reconstruct", "verify"};
  v.require(subcommands == all, "a subcommand has no golden case");
  v.detail = std::to_string(cases) + " golden cases over " + std::to_string(subcommands.size()) + " subcommands" +
             (v.pass ? "" : "; " + v.detail);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    all = all && v.pass;
    std::printf("[%s] criterion %zu: %s\n", v.pass ? "PASS" : "FAIL", k + 1, v.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
