#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "men/assignment.hpp"
#include "men/state.hpp"
#include "oracles.hpp"

using namespace men;

namespace {

const double kSqrtHalf = 1.0 / std::sqrt(2.0);

PureState plus() { return oracle::from_vector({1, 1}); }

}  // namespace

TEST(Indexing, MsbFirst) {
  EXPECT_EQ(index_of(Assignment::from_bits("000"), 3), 0u);
  EXPECT_EQ(index_of(Assignment::from_bits("101"), 3), 5u);
  EXPECT_EQ(index_of(Assignment::from_bits("01"), 2), 1u);
}

TEST(Indexing, PartialAssignmentIsMissingBinding) {
  try {
    index_of(Assignment::from_bits("1*1"), 3);
    FAIL() << "expected MissingBinding";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingBinding);
  }
}

TEST(Indexing, RoundTripProperty) {
  for (int n = 1; n <= 8; ++n) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      ASSERT_EQ(index_of(assignment_of(i, n), n), i);
    }
  }
}

TEST(Indexing, ParseAssignment) {
  const Assignment x = parse_assignment("1=0,3=1", 3);
  EXPECT_EQ(x.to_string(), "0*1");
  EXPECT_TRUE(parse_assignment("", 2).empty());
  EXPECT_THROW(parse_assignment("1=0,1=1", 3), Error);
  EXPECT_THROW(parse_assignment("1:0", 3), Error);
  try {
    parse_assignment("4=0", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidQuery);
  }
}

TEST(Tolerance, RejectsNonPositive) {
  ToleranceConfig tol;
  tol.abs_eps = 0.0;
  EXPECT_THROW(tol.validate(), Error);
  EXPECT_NO_THROW(ToleranceConfig{}.validate());
}

TEST(PureStateType, RejectsBadInput) {
  EXPECT_THROW(PureState(2, Eigen::VectorXcd::Ones(3)), Error);
  EXPECT_THROW(PureState(1, Eigen::VectorXcd::Ones(2)), Error);  // norm sqrt 2
  Eigen::VectorXcd v(2);
  v << std::numeric_limits<double>::quiet_NaN(), 0;
  EXPECT_THROW(PureState(1, v), Error);
}

TEST(TensorProduct, BasisStates) {
  const PureState s = tensor_product(PureState::basis(1, 0), PureState::basis(1, 0));
  EXPECT_EQ(s[0], std::complex<double>(1.0));
  for (std::uint64_t i = 1; i < 4; ++i) EXPECT_EQ(s[i], std::complex<double>(0.0));
}

TEST(TensorProduct, PlusTimesOne) {
  const PureState s = tensor_product(plus(), PureState::basis(1, 1));
  const double expected[] = {0, kSqrtHalf, 0, kSqrtHalf};
  for (std::uint64_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[i] - expected[i]), 0.0, 1e-15);
}

TEST(TensorProduct, BellTimesZero) {
  const PureState s = tensor_product(oracle::bell(), PureState::basis(1, 0));
  for (std::uint64_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(std::abs(s[i]), (i == 0 || i == 6) ? kSqrtHalf : 0.0, 1e-15) << i;
  }
}

TEST(TensorProduct, ScatteredQubitsMatchDefinition) {
  const PureState phi = random_state(2, 11);
  const PureState chi = random_state(2, 12);
  const PureState s = tensor_product(phi, chi, {1, 3});
  for (std::uint64_t i = 0; i < 16; ++i) {
    const int b1 = oracle::bit_of(i, 1, 4), b2 = oracle::bit_of(i, 2, 4);
    const int b3 = oracle::bit_of(i, 3, 4), b4 = oracle::bit_of(i, 4, 4);
    const auto expected = phi[static_cast<std::uint64_t>(2 * b1 + b3)] * chi[static_cast<std::uint64_t>(2 * b2 + b4)];
    EXPECT_NEAR(std::abs(s[i] - expected), 0.0, 1e-14);
  }
}

TEST(TensorProduct, NormMultiplicativityProperty) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PureState s = tensor_product(random_state(2, seed), random_state(3, seed + 100));
    EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-12);
  }
}

TEST(LocalBasisChange, IdentityLeavesStateUnchanged) {
  const PureState psi = random_state(3, 5);
  const PureState out = apply_local_basis_change(psi, LocalBasisChange(3, Matrix2c<double>::Identity()));
  EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-15);
}

TEST(LocalBasisChange, HadamardOnZero) {
  const PureState out = apply_local_basis_change(PureState::basis(1, 0), {hadamard<double>()});
  EXPECT_NEAR(out[0].real(), kSqrtHalf, 1e-15);
  EXPECT_NEAR(out[1].real(), kSqrtHalf, 1e-15);
}

TEST(LocalBasisChange, RotatedGhzHasNoSmallAmplitudes) {
  const auto r = rotation(std::numbers::pi / 5);
  const PureState out = apply_local_basis_change(oracle::ghz(), {r, r, r});
  // Independent expansion: (R ⊗ R ⊗ R)|000> + (R ⊗ R ⊗ R)|111>, each column product of R entries.
  const double c = std::cos(std::numbers::pi / 5), s = std::sin(std::numbers::pi / 5);
  for (std::uint64_t i = 0; i < 8; ++i) {
    double zero_col = 1.0, one_col = 1.0;
    for (int q = 1; q <= 3; ++q) {
      const int b = oracle::bit_of(i, q, 3);
      zero_col *= b ? s : c;
      one_col *= b ? c : -s;
    }
    EXPECT_NEAR(out[i].real(), kSqrtHalf * (zero_col + one_col), 1e-14);
    EXPECT_GT(std::abs(out[i]), 0.01);
  }
}

TEST(LocalBasisChange, NonUnitaryRejected) {
  Matrix2c<double> m = Matrix2c<double>::Identity();
  m(0, 1) = 0.5;
  try {
    apply_local_basis_change(PureState::basis(1, 0), {m});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidUnitary);
  }
}

TEST(LocalBasisChange, NormPreservedProperty) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PureState out = apply_local_basis_change(random_state(4, seed), random_local_basis_change(4, seed + 1));
    EXPECT_NEAR(out.amplitudes().norm(), 1.0, 1e-9);
  }
}

TEST(Measurement, GhzFirstQubitZero) {
  const auto m = measure_qubit(oracle::ghz(), 1, 0);
  EXPECT_NEAR(m.probability, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(m.collapsed[0]), 1.0, 1e-15);
  for (std::uint64_t i = 1; i < 8; ++i) EXPECT_EQ(std::abs(m.collapsed[i]), 0.0);
}

TEST(Measurement, CertainOutcomeLeavesState) {
  const PureState psi = tensor_product(plus(), PureState::basis(1, 0));
  const auto m = measure_qubit(psi, 2, 0);
  EXPECT_NEAR(m.probability, 1.0, 1e-15);
  EXPECT_LT((m.collapsed.amplitudes() - psi.amplitudes()).norm(), 1e-15);
}

TEST(Measurement, OrthogonalOutcomeThrows) {
  try {
    measure_qubit(PureState::basis(1, 1), 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroProbabilityOutcome);
  }
}

TEST(Measurement, OutcomeProbabilitiesSumToOneProperty) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PureState psi = random_state(3, seed);
    for (int q = 1; q <= 3; ++q) {
      const double total = measure_qubit(psi, q, 0).probability + measure_qubit(psi, q, 1).probability;
      EXPECT_NEAR(total, 1.0, 1e-9);
      EXPECT_NEAR(measure_qubit(psi, q, 1).probability, oracle::marginal(psi, {{q, 1}}), 1e-14);
    }
  }
}

TEST(RandomStates, Contracts) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_NEAR(random_state(1, seed).amplitudes().norm(), 1.0, 1e-9);
    EXPECT_GT(random_nonzero_state(3, seed, 1e-6).min_modulus(), 1e-6);
    const auto product = random_product_state({{1}, {2}}, seed);
    EXPECT_TRUE(oracle::separable(product.state, {1}));
    EXPECT_EQ(product.partition.size(), 2u);
  }
}

TEST(RandomStates, DeterministicGivenSeed) {
  EXPECT_EQ(random_state(3, 42).amplitudes(), random_state(3, 42).amplitudes());
  EXPECT_NE(random_state(3, 42).amplitudes(), random_state(3, 43).amplitudes());
}

TEST(RandomStates, HaarUnitaryIsUnitary) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) EXPECT_TRUE(is_unitary(random_unitary<double>(rng), 1e-12));
}

TEST(Fidelity, Cases) {
  const PureState psi = random_state(3, 9);
  EXPECT_NEAR(fidelity_up_to_phase(psi, psi), 1.0, 1e-12);
  EXPECT_NEAR(fidelity_up_to_phase(PureState::basis(1, 0), PureState::basis(1, 1)), 0.0, 1e-15);
  const PureState shifted = PureState(1, plus().amplitudes() * std::polar(1.0, std::numbers::pi / 3));
  EXPECT_NEAR(fidelity_up_to_phase(plus(), shifted), 1.0, 1e-15);
}

TEST(ScalarTemplate, FloatStatesWork) {
  const auto psi = random_state<float>(3, 1);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0f, 1e-5f);
  const auto rotated = apply_local_basis_change(psi, random_local_basis_change<float>(3, 2));
  EXPECT_NEAR(rotated.amplitudes().norm(), 1.0f, 1e-5f);
}
