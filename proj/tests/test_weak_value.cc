// Copyright 2026 The wseq Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.h"
#include "wseq/errors.h"
#include "wseq/oracle.h"
#include "wseq/weak_value.h"

namespace wseq {
namespace {

const int kIdx0[] = {0};
const int kIdx1[] = {1};

COperator p0() {
    return basis_projector(2, kIdx0);
}
COperator p1() {
    return basis_projector(2, kIdx1);
}

// Site 1 observes B (index 0) or C (index 1); site 2 observes E (0) or F (1).
struct Golden {
    const char *name;
    COperator first;
    COperator second;
    IndexSubset subset;
    double expected;
};

TEST(WeakValue, DoubleInterferometerGoldenValues) {
    const Golden cases[] = {
        {"C_w", p1(), p0(), {1}, 1},        {"B_w", p0(), p0(), {1}, 0},
        {"E_w", p0(), p0(), {2}, 1},        {"F_w", p0(), p1(), {2}, 0},
        {"(E,B)_w", p0(), p0(), {1, 2}, 0.5}, {"(F,B)_w", p0(), p1(), {1, 2}, -0.5},
        {"(E,C)_w", p1(), p0(), {1, 2}, 0.5}, {"(F,C)_w", p1(), p1(), {1, 2}, 0.5},
    };
    for (const auto &g : cases) {
        Complex wv = weak_value(double_interferometer_with(g.first, g.second), g.subset);
        EXPECT_NEAR(wv.real(), g.expected, 1e-12) << g.name;
        EXPECT_NEAR(wv.imag(), 0, 1e-12) << g.name;
    }
}

TEST(WeakValue, MatchesIndependentMatrixProducts) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; t++) {
        Circuit c = testing::random_circuit(rng, 2 + t % 3, 3);
        Complex f = testing::direct_amplitude(c, {});
        EXPECT_LT(std::abs(weak_value(c, {2, 3}) - testing::direct_amplitude(c, {2, 3}) / f), 1e-10);
        EXPECT_LT(std::abs(weak_value(c, {1, 2, 3}) - testing::direct_amplitude(c, {1, 2, 3}) / f), 1e-10);
    }
}

TEST(WeakValue, EmptySubsetIsOne) {
    EXPECT_EQ(weak_value(builtin_double_interferometer(), IndexSubset{}), Complex(1));
}

TEST(WeakValue, OrthogonalPostSelectionIsDegenerate) {
    // U2 U1 = I, so the evolved state is U3|A>; post-select on its orthogonal complement.
    Circuit c = builtin_double_interferometer();
    CVector out = c.u_final() * c.psi_i();
    CVector orth(2);
    orth << -std::conj(out(1)), std::conj(out(0));
    Circuit dead = c.with_psi_f(orth);
    try {
        weak_value(dead, {1});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DegeneratePostSelection);
    }
}

TEST(WeakValue, TableHasAllSubsetsAndFingerprint) {
    Circuit c = builtin_double_interferometer();
    WeakValueTable t = weak_value_table(c, 2);
    EXPECT_EQ(t.entries.size(), 4u);
    EXPECT_EQ(t.circuit_fingerprint, c.fingerprint());
    EXPECT_NEAR(t.at({1, 2}).real(), -0.5, 1e-12);
    EXPECT_EQ(weak_value_table(c, 0).entries.size(), 1u);
    EXPECT_THROW(weak_value_table(c, 3), Error);
}

TEST(WeakValue, RulesOnRandomInstances) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 25; t++) {
        const int d = 2 + t % 3;
        Circuit c = testing::random_circuit(rng, d, 3);
        Circuit c2 = c.with_observable(2, testing::random_hermitian(rng, d));
        EXPECT_LT(check_linearity(c, c2, 2), 1e-10);
        EXPECT_LT(check_marginal(c, {1, 2, 3}, 2), 1e-10);
        EXPECT_LT(check_marginal(c, {1, 3}, 1), 1e-10);
    }
}

TEST(WeakValue, StrongAgreementWhenDeterministic) {
    // psi_i is an eigenvector of A1 (eigenvalue 3); with identity evolution and psi_f also
    // in that eigenspace, a strong measurement of A1 then A2 is certain.
    COperator a1 = COperator::Zero(2, 2);
    a1(0, 0) = 3;
    a1(1, 1) = -1;
    COperator a2 = COperator::Zero(2, 2);
    a2(0, 0) = -2;
    a2(1, 1) = 5;
    Circuit c(basis_vector(2, 0), {{identity(2), a1}, {identity(2), a2}}, identity(2), basis_vector(2, 0));
    auto diff = check_strong_agreement(c);
    ASSERT_TRUE(diff.has_value());
    EXPECT_LT(*diff, 1e-12);
    EXPECT_NEAR(weak_value(c, {1, 2}).real(), -6, 1e-12);
    // The interferometer is not deterministic.
    EXPECT_FALSE(check_strong_agreement(builtin_double_interferometer()).has_value());
}

TEST(WeakValue, RatioRuleOnRandomRankOneProjectors) {
    std::mt19937_64 rng(44);
    int checked = 0;
    for (int t = 0; t < 30; t++) {
        Circuit c = testing::random_circuit(rng, 3, 2, testing::ObservableKind::RankOneProjector);
        try {
            EXPECT_LT(ratio_rule_check(c), 1e-10);
            checked++;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::RatioUndefined);
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(WeakValue, RatioRuleRejectsVanishingDenominator) {
    // With A2' = 0 the denominator vanishes identically.
    Circuit c = builtin_double_interferometer();
    try {
        ratio_rule_check(c, COperator::Zero(2, 2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::RatioUndefined);
    }
}

TEST(WeakValue, ProductOfCommutingObservables) {
    std::mt19937_64 rng(55);
    COperator u = testing::random_unitary(rng, 3);
    // Commuting pair: both diagonal in the basis given by u.
    COperator d1 = COperator::Zero(3, 3);
    COperator d2 = COperator::Zero(3, 3);
    d1.diagonal() << 1, 2, -1;
    d2.diagonal() << 0.5, -3, 4;
    COperator a1 = u * d1 * u.adjoint();
    COperator a2 = u * d2 * u.adjoint();
    Circuit c(testing::random_state(rng, 3), {{testing::random_unitary(rng, 3), a1}, {identity(3), a2}},
              testing::random_unitary(rng, 3), testing::random_state(rng, 3));
    Complex f = testing::direct_amplitude(c, {});
    Circuit product(c.psi_i(), {{c.unitary(1), a2 * a1}}, c.u_final(), c.psi_f());
    EXPECT_LT(std::abs(product_weak_value(c) - testing::direct_amplitude(product, {1}) / f), 1e-10);
    EXPECT_LT(std::abs(product_weak_value(c) - weak_value(c, {1, 2})), 1e-10);

    Circuit bad = c.with_observable(2, testing::random_hermitian(rng, 3));
    try {
        product_weak_value(bad);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonCommuting);
    }
}

TEST(WeakValue, ReschSteinbergReconstructsFromExactStatistics) {
    // With U_2 = I the pair readout recovers Re (A2 A1)_w up to O(g^2).
    std::mt19937_64 rng(66);
    Circuit base = testing::random_circuit(rng, 2, 2, testing::ObservableKind::Projector);
    Circuit c(base.psi_i(), {{base.unitary(1), base.observable(1)}, {identity(2), base.observable(1)}},
              base.u_final(), base.psi_f());
    const double g = 1e-3;
    double q1q2 = exact_moment(c, MomentSpec::parse("q1*q2"), g, PointerProfile::gaussian(1)).value;
    double rebuilt = resch_steinberg_reconstruction(c, q1q2, g);
    EXPECT_NEAR(rebuilt, product_weak_value(c).real(), 1e-4 * std::max(1.0, std::abs(rebuilt)));
}

TEST(WeakValue, PathAmplitudeIdentity) {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 20; t++) {
        Circuit c = testing::random_circuit(rng, 3, 3, testing::ObservableKind::RankOneProjector);
        EXPECT_LT(path_amplitude_identity(c), 1e-10);
        // Any other complete basis containing each path state gives the same answer.
        std::vector<COperator> bases;
        for (int k = 1; k <= 3; k++) {
            COperator rest = testing::random_unitary(rng, 3);
            CVector x = c.observable(k) * rest.col(0);
            x.normalize();
            COperator b(3, 3);
            b.col(0) = x;
            // Complete with Gram-Schmidt on random vectors.
            for (int j = 1; j < 3; j++) {
                CVector v = rest.col(j);
                for (int i = 0; i < j; i++) {
                    v -= b.col(i).dot(v) * b.col(i);
                }
                b.col(j) = v.normalized();
            }
            bases.push_back(b);
        }
        EXPECT_LT(path_amplitude_identity(c, bases), 1e-10);
    }
}

TEST(WeakValue, PathAmplitudeRejectsIncompleteBasis) {
    std::mt19937_64 rng(88);
    Circuit c = testing::random_circuit(rng, 2, 2, testing::ObservableKind::RankOneProjector);
    std::vector<COperator> bases{identity(2), COperator::Zero(2, 2)};
    try {
        path_amplitude_identity(c, bases);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BasisIncomplete);
    }
}

}  // namespace
}  // namespace wseq
