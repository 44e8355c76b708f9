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
#include "wseq/pointer.h"
#include "wseq/weak_value.h"

namespace wseq {
namespace {

/// Chirped Gaussian phi = (2 pi)^(-1/4) exp(-q^2/4) exp(i c q^2) on [-16, 16) with 512 points.
PointerProfile chirped(double chirp) {
    const int n = 512;
    const double lo = -16;
    const double h = 32.0 / n;
    std::vector<Complex> v(n);
    for (int k = 0; k < n; k++) {
        double q = lo + k * h;
        v[k] = std::pow(2 * M_PI, -0.25) * std::exp(-q * q / 4) * std::polar(1.0, chirp * q * q);
    }
    return PointerProfile::tabulated(lo, h, v);
}

double relative_discrepancy(double exact, double pred, double g, size_t order) {
    return std::abs(exact - pred) / std::max(std::abs(pred), std::pow(g, static_cast<double>(order + 1)));
}

TEST(Pointer, GaussianMoments) {
    PointerMoments m = moments(PointerProfile::gaussian(0.5, 0.3, -0.2));
    EXPECT_DOUBLE_EQ(m.mu, 0.3);
    EXPECT_DOUBLE_EQ(m.nu, -0.2);
    EXPECT_DOUBLE_EQ(m.v, 1.0);
    EXPECT_DOUBLE_EQ(m.y, 0.0);
}

TEST(Pointer, TabulatedMomentsMatchChirpClosedForm) {
    // Var(p) = 1/4 + 4 c^2 and <pq + qp> = 4 c for sigma = 1.
    const double c = 0.1;
    PointerMoments m = moments(chirped(c));
    EXPECT_NEAR(m.mu, 0, 1e-10);
    EXPECT_NEAR(m.nu, 0, 1e-10);
    EXPECT_NEAR(m.v, 0.25 + 4 * c * c, 1e-8);
    EXPECT_NEAR(m.y, 4 * c, 1e-8);
}

TEST(Pointer, TabulatedGaussianSatisfiesAssumptionA) {
    EXPECT_TRUE(chirped(0).satisfies_assumption_a());
    EXPECT_FALSE(chirped(0.1).satisfies_assumption_a());
    EXPECT_TRUE(PointerProfile::gaussian(1).satisfies_assumption_a());
    EXPECT_FALSE(PointerProfile::gaussian(1, 0.3).satisfies_assumption_a());
}

TEST(Pointer, CoarseGridIsRejected) {
    // A Gaussian of width 0.05 sampled with step 0.125: self-estimate disagrees.
    const int n = 256;
    std::vector<Complex> v(n);
    for (int k = 0; k < n; k++) {
        double q = -16 + k * 0.125;
        v[k] = std::exp(-q * q / (4 * 0.05 * 0.05));
    }
    try {
        moments(PointerProfile::tabulated(-16, 0.125, v));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
    }
}

TEST(Pointer, MomentSpecParsing) {
    MomentSpec s = MomentSpec::parse("q1*p2");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.factors()[1].kind, Quadrature::Momentum);
    EXPECT_EQ(s.str(), "q1*p2");
    EXPECT_EQ(parity_part(s), PartKind::Imaginary);
    EXPECT_EQ(parity_part(MomentSpec::parse("p1*p2")), PartKind::Real);
    EXPECT_THROW(MomentSpec::parse("q2*q1"), Error);
    EXPECT_THROW(MomentSpec::parse("x1"), Error);
    EXPECT_THROW(MomentSpec::parse(""), Error);
    EXPECT_THROW(MomentSpec::parse("q0"), Error);
}

TEST(Pointer, ComplementaryPairEnumeration) {
    // Three sites: |i| = 3 with empty j, plus the three pairs with |i| = 2.
    auto pairs = complementary_pairs({1, 2, 3}, false);
    EXPECT_EQ(pairs.size(), 4u);
    for (const auto &p : pairs) {
        EXPECT_GE(p.i.size(), p.j.size());
        EXPECT_EQ(p.i.size() + p.j.size(), 3u);
    }
    // Two sites: (12, empty) and (1, 2); the first site must lie in i on ties.
    auto two = complementary_pairs({1, 2}, false);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(complementary_pairs({1, 2}, true).size(), 1u);
    for (const auto &p : two) {
        if (p.i.size() == p.j.size()) {
            EXPECT_TRUE(p.i.contains(1));
        }
    }
}

TEST(Pointer, GeneralProductsReduceToClosedForms) {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 10; t++) {
        Circuit c = testing::random_circuit(rng, 3, 3);
        auto wv = [&](const IndexSubset &s) { return weak_value(c, s); };
        const double g = 0.01;
        const double v = 0.25;
        Complex a1 = wv({1}), a2 = wv({2}), a3 = wv({3});
        double qq = formulas::qq(wv({1, 2}), a1, a2, g);
        EXPECT_NEAR(formulas::q_product({1, 2}, wv, g), qq, 1e-15);
        double qqq = formulas::qqq(wv({1, 2, 3}), wv({1, 2}), wv({1, 3}), wv({2, 3}), a1, a2, a3, g);
        EXPECT_NEAR(formulas::q_product({1, 2, 3}, wv, g), qqq, 1e-15);
        EXPECT_NEAR(formulas::p_product({1, 2}, wv, g, v), formulas::pp(wv({1, 2}), a1, a2, g, v), 1e-15);
        EXPECT_NEAR(formulas::p_product({1}, wv, g, v), formulas::p_single(a1, g, v), 1e-15);
    }
}

struct ConvergenceCase {
    const char *spec;
    int sites;
};

TEST(Pointer, PredictionsConvergeToOracle) {
    const ConvergenceCase cases[] = {{"q1", 1}, {"p1", 1}, {"q1*q2", 2}, {"p1*p2", 2}, {"q1*p2", 2},
                                     {"p1*q2", 2}, {"q1*q2*q3", 3}, {"p1*p2*p3", 3}, {"q2", 2}};
    std::mt19937_64 rng(202);
    const PointerProfile prof = PointerProfile::gaussian(1);
    for (const auto &cc : cases) {
        MomentSpec spec = MomentSpec::parse(cc.spec);
        for (int t = 0; t < 6; t++) {
            Circuit c = testing::random_circuit(rng, 2 + t % 3, cc.sites);
            const double g = 1e-3;
            double pred = predict_moment(c, spec, g, prof);
            double err = relative_discrepancy(exact_moment(c, spec, g, prof).value, pred, g, spec.size());
            EXPECT_LE(err, 0.05) << cc.spec;
            double pred_half = predict_moment(c, spec, g / 2, prof);
            double abs_full = std::abs(exact_moment(c, spec, g, prof).value - pred);
            double abs_half = std::abs(exact_moment(c, spec, g / 2, prof).value - pred_half);
            // Absolute error shrinks faster than the leading term (which scales as g^order).
            if (abs_full > 1e-12) {
                double ratio = abs_full / abs_half / std::pow(2.0, static_cast<double>(spec.size()));
                EXPECT_GE(ratio, 1.9) << cc.spec;
            }
        }
    }
}

TEST(Pointer, MixedSignMatchesOracle) {
    // The q1*p2 prediction uses +Im[(A2,A1)_w + conj(A1_w) A2_w]; the opposite sign fails this test.
    std::mt19937_64 rng(303);
    const PointerProfile prof = PointerProfile::gaussian(1);
    const MomentSpec spec = MomentSpec::parse("q1*p2");
    for (int t = 0; t < 10; t++) {
        Circuit c = testing::random_circuit(rng, 3, 2);
        const double g = 1e-3;
        Complex a21 = weak_value(c, {1, 2});
        Complex a1 = weak_value(c, {1});
        Complex a2 = weak_value(c, {2});
        double plus = g * g * 0.25 * (a21 + std::conj(a1) * a2).imag();
        double exact = exact_moment(c, spec, g, prof).value;
        EXPECT_NEAR(exact, plus, 0.01 * std::abs(plus) + 1e-12);
    }
}

TEST(Pointer, GeneralProfileSingleQ) {
    std::mt19937_64 rng(404);
    const PointerProfile shifted = PointerProfile::gaussian(1, 0.3);
    const PointerProfile chirp = chirped(0.1);
    const PointerMoments cm = moments(chirp);
    const MomentSpec q1 = MomentSpec::parse("q1");
    bool saw_complex = false;
    for (int t = 0; t < 10; t++) {
        Circuit c = testing::random_circuit(rng, 3, 1);
        Complex a = weak_value(c, {1});
        saw_complex = saw_complex || std::abs(a.imag()) > 0.1;
        const double g = 1e-3;
        double pred = 0.3 + g * a.real();
        EXPECT_NEAR(predict_moment(c, q1, g, shifted), pred, 1e-15);
        double ex = exact_moment(c, q1, g, shifted).value;
        EXPECT_LE(std::abs(ex - pred) / std::abs(pred), 0.05);
        // Offsets cancel from the discrepancy, which must be O(g^2).
        EXPECT_LT(std::abs(ex - pred), 50 * g * g * std::max(1.0, std::norm(a)));

        // A chirp makes Im A_w visible in <q>.
        double pred_chirp = predict_moment(c, q1, g, chirp);
        EXPECT_NEAR(pred_chirp, g * (a.real() + cm.y * a.imag()), 1e-12);
        double ex_chirp = exact_moment(c, q1, g, chirp).value;
        EXPECT_LE(relative_discrepancy(ex_chirp, pred_chirp, g, 1), 0.05);
    }
    EXPECT_TRUE(saw_complex);
}

TEST(Pointer, DispatchErrors) {
    Circuit c = builtin_double_interferometer();
    try {
        Circuit c3(basis_vector(2, 0), {c.stages()[0], c.stages()[1], c.stages()[0]}, c.u_final(), c.psi_f());
        predict_moment(c3, MomentSpec::parse("q1*p2*q3"), 1e-3, PointerProfile::gaussian(1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedCombination);
    }
    try {
        predict_moment(c, MomentSpec::parse("p1"), 1e-3, PointerProfile::gaussian(1, 0.3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::AssumptionAViolated);
    }
    try {
        predict_moment(c, MomentSpec::parse("q1*q2"), 1e-3, PointerProfile::gaussian(1, 0.3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedCombination);
    }
}

TEST(Pointer, DoubleInterferometerPairPrediction) {
    const double g = 1e-3;
    double pred = predict_moment(builtin_double_interferometer(), MomentSpec::parse("q1*q2"), g,
                                 PointerProfile::gaussian(1));
    EXPECT_NEAR(pred, -g * g / 4, 1e-18);
}

}  // namespace
}  // namespace wseq
