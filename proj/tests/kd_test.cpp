// Copyright 2026 The kdq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "kdq/kd.hpp"

namespace kdq {
namespace {

// Direct entry formula, independent of the chain machinery.
Complex direct_entry(const DensityMatrix& rho, const OrthonormalBasis& a, const OrthonormalBasis& f, Eigen::Index i,
                     Eigen::Index j) {
    const Complex fa = (f.vector(j).adjoint() * a.vector(i))(0, 0);
    const Complex arf = (a.vector(i).adjoint() * rho.matrix() * f.vector(j))(0, 0);
    return fa * arf;
}

TEST(KD, EntriesMatchDefinition) {
    for (Eigen::Index d = 2; d <= 5; ++d) {
        const auto in = random_state_and_bases(d, 100 + static_cast<std::uint64_t>(d));
        const auto kd = kd_distribution(in.state, in.basis_a, in.basis_f);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                EXPECT_LT(std::abs(kd(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                                   direct_entry(in.state, in.basis_a, in.basis_f, i, j)),
                          1e-14);
        EXPECT_EQ(kd.labels(), (std::vector<std::string>{in.basis_a.label(), in.basis_f.label()}));
    }
}

TEST(KD, IdenticalBasesGiveDiagonalPopulationsExactly) {
    std::mt19937_64 rng(9);
    const auto rho = random_density(4, rng);
    const auto a = random_basis(4, rng);
    const auto kd = kd_distribution(rho, a, a);
    const Matrix pops = a.matrix().adjoint() * rho.matrix() * a.matrix();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) {
                EXPECT_NEAR(kd(i, j).real(), pops(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), 1e-15);
                EXPECT_NEAR(kd(i, j).imag(), 0.0, 1e-15);
            } else {
                EXPECT_EQ(kd(i, j), Complex(0.0));
            }
        }
}

TEST(KD, ExtendedChainOfTwoEqualsKD) {
    const auto in = random_state_and_bases(3, 5);
    const OrthonormalBasis chain[] = {in.basis_a, in.basis_f};
    const auto ext = extended_kd(in.state, chain);
    const auto kd = kd_distribution(in.state, in.basis_a, in.basis_f);
    ASSERT_EQ(ext.size(), kd.size());
    for (std::size_t n = 0; n < kd.size(); ++n) EXPECT_LT(std::abs(ext.values()[n] - kd.values()[n]), 1e-15);
}

TEST(KD, ExtendedChainDefinitionRankThree) {
    // Entry (i, k, j) of chain (A, B, C) = <c_j|b_k><b_k|a_i><a_i|rho|c_j>.
    std::mt19937_64 rng(21);
    const auto rho = random_density(3, rng);
    const auto a = random_basis(3, rng), b = random_basis(3, rng), c = random_basis(3, rng);
    const OrthonormalBasis chain[] = {a, b, c};
    const auto ext = extended_kd(rho, chain);
    EXPECT_EQ(ext.rank(), 3u);
    EXPECT_NEAR(std::abs(ext.sum() - 1.0), 0.0, 1e-14);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t j = 0; j < 3; ++j) {
                const auto I = static_cast<Eigen::Index>(i), K = static_cast<Eigen::Index>(k),
                           J = static_cast<Eigen::Index>(j);
                const Complex want = (c.vector(J).adjoint() * b.vector(K))(0, 0) *
                                     (b.vector(K).adjoint() * a.vector(I))(0, 0) *
                                     (a.vector(I).adjoint() * rho.matrix() * c.vector(J))(0, 0);
                EXPECT_LT(std::abs(ext.at({i, k, j}) - want), 1e-14);
            }
}

TEST(KD, ChainTooShort) {
    const auto in = random_state_and_bases(2, 1);
    const OrthonormalBasis chain[] = {in.basis_a};
    EXPECT_THROW(extended_kd(in.state, chain), Error);
}

TEST(KD, DimensionMismatch) {
    const auto in = random_state_and_bases(2, 1);
    try {
        kd_distribution(in.state, computational_basis(3), in.basis_f);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(KD, TableFromValuesRejectsBadSum) {
    EXPECT_THROW(KDDistribution::from_values({2, 2}, {0.5, 0.5, 0.5, 0.5}, {"A", "F"}), Error);
    EXPECT_THROW(KDDistribution::from_values({2, 2}, {1.0, 0.0, 0.0}, {"A", "F"}), Error);
    const auto t = MHQDistribution::from_values({2, 2}, {0.3, -0.1, 0.6, 0.2}, {"A", "F"});
    EXPECT_EQ(t.flat_index(std::vector<std::size_t>{1, 0}), 2u);
    EXPECT_EQ(t.unflatten(3), (std::vector<std::size_t>{1, 1}));
}

TEST(KD, MarginalsAreBornProbabilities) {
    const auto in = random_state_and_bases(4, 77);
    const auto m = marginals(kd_distribution(in.state, in.basis_a, in.basis_f));
    for (Eigen::Index i = 0; i < 4; ++i) {
        EXPECT_NEAR(m.row[static_cast<std::size_t>(i)],
                    (in.basis_a.vector(i).adjoint() * in.state.matrix() * in.basis_a.vector(i))(0, 0).real(), 1e-14);
        EXPECT_NEAR(m.col[static_cast<std::size_t>(i)],
                    (in.basis_f.vector(i).adjoint() * in.state.matrix() * in.basis_f.vector(i))(0, 0).real(), 1e-14);
    }
}

TEST(KD, MarginalNotRealOnForgedTable) {
    const auto t = KDDistribution::from_values({2, 2}, {Complex(0.5, 0.1), 0.0, 0.0, Complex(0.5, -0.1)}, {"A", "F"});
    try {
        marginals(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MarginalNotReal);
    }
}

TEST(KD, ReconstructionRoundTrip) {
    for (Eigen::Index d = 2; d <= 4; ++d) {
        const auto in = random_state_and_bases(d, 300 + static_cast<std::uint64_t>(d));
        const auto back = reconstruct_state(kd_distribution(in.state, in.basis_a, in.basis_f), in.basis_a, in.basis_f);
        EXPECT_LT(max_abs(back.matrix() - in.state.matrix()), 1e-10);
    }
}

TEST(KD, ReconstructionRefusesZeroOverlap) {
    const auto rho = validate_density(Matrix::Identity(2, 2) * 0.5);
    const auto z = computational_basis(2);
    try {
        reconstruct_state(kd_distribution(rho, z, z), z, z);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroOverlap);
    }
}

TEST(KD, WeakValueExpectationIdentity) {
    std::mt19937_64 rng(8);
    for (Eigen::Index d = 2; d <= 4; ++d) {
        const auto in = random_state_and_bases(d, 500 + static_cast<std::uint64_t>(d));
        const Matrix g = detail::ginibre(d, d, rng);
        const auto obs = HermitianObservable::from_matrix(0.5 * (g + g.adjoint()));
        const auto kd = kd_distribution(in.state, in.basis_a, in.basis_f);
        const Complex via = expectation_via_kd(kd, weak_values(obs, in.basis_a, in.basis_f));
        EXPECT_LT(std::abs(via - (obs.matrix() * in.state.matrix()).trace()), 1e-12);
    }
}

TEST(KD, OracleClassifiesEntries) {
    const auto pos = MHQDistribution::from_values({2, 2}, {0.25, 0.25, 0.25, 0.25}, {"A", "F"});
    EXPECT_TRUE(entry_nonpositivity_oracle(pos).positive());
    const auto neg = MHQDistribution::from_values({2, 2}, {0.3, -0.1, 0.6, 0.2}, {"A", "F"});
    const auto v = entry_nonpositivity_oracle(neg);
    EXPECT_EQ(v.kind, Positivity::NegativeReal);
    ASSERT_EQ(v.witnesses.size(), 1u);
    EXPECT_EQ(v.witnesses[0].index, (std::vector<std::size_t>{0, 1}));
    const auto both = KDDistribution::from_values({2, 2}, {Complex(0.6, 0.1), -0.1, 0.5, Complex(0.0, -0.1)}, {"A", "F"});
    EXPECT_EQ(entry_nonpositivity_oracle(both).kind, Positivity::NonReal);
    EXPECT_NEAR(negativity(neg), 0.2, 1e-15);
    EXPECT_NEAR(negativity(pos), 0.0, 1e-15);
}

TEST(KD, MaximallyMixedStateIsPositive) {
    for (Eigen::Index d = 2; d <= 5; ++d) {
        const auto in = random_state_and_bases(d, 900 + static_cast<std::uint64_t>(d));
        const auto rho = validate_density(Matrix::Identity(d, d) / static_cast<double>(d));
        const auto kd = kd_distribution(rho, in.basis_a, in.basis_f);
        EXPECT_TRUE(entry_nonpositivity_oracle(kd).positive());
    }
}

TEST(KD, L1Coherence) {
    Vector plus(2);
    plus << std::sqrt(0.5), std::sqrt(0.5);
    const auto rho = DensityMatrix::pure(StateVector::from_amplitudes(plus));
    EXPECT_NEAR(l1_coherence(rho, computational_basis(2)), 1.0, 1e-15);
    EXPECT_NEAR(l1_coherence(rho, fourier_basis(2)), 0.0, 1e-15);
}

}  // namespace
}  // namespace kdq
