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
#include "wseq/counterfactual.h"
#include "wseq/errors.h"
#include "wseq/oracle.h"

namespace wseq {
namespace {

const int kB[] = {0};
const int kC[] = {1};

InsertionSet di_insertions(std::vector<int> sites, std::vector<const int *> paths) {
    InsertionSet ins;
    ins.sites = std::move(sites);
    for (const int *p : paths) {
        ins.on_projectors.push_back(basis_projector(2, std::span<const int>(p, 1)));
    }
    return ins;
}

History hist(std::initializer_list<Symbol> s) {
    return History{std::vector<Symbol>(s)};
}

TEST(Counterfactual, HistoryAmplitudes) {
    Circuit di = builtin_double_interferometer();
    // Insertions in paths B (site 1) and F (site 2).
    InsertionSet bf = di_insertions({1, 2}, {kB, kC});
    Complex nn = history_amplitude(di, bf, hist({Symbol::N, Symbol::N}));
    EXPECT_NEAR(nn.real(), 1 / (2 * std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(nn.imag(), 0, 1e-15);
    Complex total = 0;
    for (const auto &h : all_histories(2)) {
        total += history_amplitude(di, bf, h);
    }
    EXPECT_LT(std::abs(total - transition_amplitude(di)), 1e-12);
    EXPECT_EQ(all_histories(2)[1], hist({Symbol::F, Symbol::N}));
}

TEST(Counterfactual, AllOffHistoryOnTrivialCircuitIsF) {
    CVector psi(2);
    psi << 0.6, 0.8;
    Circuit c(basis_vector(2, 0), {{identity(2), identity(2)}}, identity(2), psi);
    InsertionSet ins{{1}, {basis_projector(2, kC)}};
    EXPECT_NEAR(std::abs(history_amplitude(c, ins, hist({Symbol::F})) - Complex(0.6)), 0, 1e-15);
}

TEST(Counterfactual, DoubleInterferometerVerdicts) {
    Circuit di = builtin_double_interferometer();
    InsertionSet bf = di_insertions({1, 2}, {kB, kC});
    HistoryVerdict h = is_counterfactual_histories(di, bf);
    EXPECT_FALSE(h.counterfactual);
    ASSERT_TRUE(h.witness);
    // First failing history with F < N: (F,N), amplitude <D|U3 P_F U2 P_C U1|A> = -1/(2 sqrt2).
    EXPECT_EQ(h.witness->str(), "(F,N)");
    EXPECT_NEAR(h.amplitude.real(), -1 / (2 * std::sqrt(2.0)), 1e-15);
    WeakValueVerdict w = is_counterfactual_weakvalues(di, bf);
    EXPECT_FALSE(w.counterfactual);
    ASSERT_TRUE(w.witness);
    EXPECT_EQ(*w.witness, IndexSubset({1, 2}));
    EXPECT_NEAR(w.weak_value.real(), -0.5, 1e-12);
    EXPECT_FALSE(check_equivalence_def1_def2(di, bf));

    InsertionSet b = di_insertions({1}, {kB});
    EXPECT_TRUE(is_counterfactual_histories(di, b).counterfactual);
    EXPECT_TRUE(is_counterfactual_weakvalues(di, b).counterfactual);
    EXPECT_TRUE(check_equivalence_def1_def2(di, b));

    InsertionSet c = di_insertions({1}, {kC});
    WeakValueVerdict wc = is_counterfactual_weakvalues(di, c);
    EXPECT_FALSE(wc.counterfactual);
    EXPECT_NEAR(wc.weak_value.real(), 1, 1e-12);
}

TEST(Counterfactual, ZeroProjectorIsCounterfactual) {
    Circuit di = builtin_double_interferometer();
    InsertionSet zero{{1, 2}, {COperator::Zero(2, 2), COperator::Zero(2, 2)}};
    EXPECT_TRUE(check_equivalence_def1_def2(di, zero));
}

TEST(Counterfactual, InvalidInsertions) {
    Circuit di = builtin_double_interferometer();
    InsertionSet bad{{1}, {2.0 * identity(2)}};
    try {
        validate_insertions(di, bad);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotProjector);
    }
    EXPECT_THROW(validate_insertions(di, InsertionSet{{2, 1}, {identity(2), identity(2)}}), Error);
}

TEST(Counterfactual, DefinitionsAgreeOnRandomInstances) {
    std::mt19937_64 rng(2024);
    int counterfactual = 0;
    for (int t = 0; t < 200; t++) {
        const int d = 2 + t % 3;
        const int n = 1 + t % 3;
        const int count = 1 + static_cast<int>(rng() % n);
        const int reach = 1 + static_cast<int>(rng() % (d - 1));
        Circuit c = (t % 2) ? testing::block_circuit(rng, d, reach, n) : testing::random_circuit(rng, d, n);
        InsertionSet ins = testing::random_insertions(rng, c, count, reach, t % 2 == 1);
        bool verdict = false;
        ASSERT_NO_THROW(verdict = check_equivalence_def1_def2(c, ins)) << "instance " << t;
        counterfactual += verdict;
        Complex total = 0;
        for (const auto &h : all_histories(ins.size())) {
            total += history_amplitude(c, ins, h);
        }
        EXPECT_LT(std::abs(total - transition_amplitude(c)), 1e-12);
    }
    // Both kinds of verdict occur.
    EXPECT_GT(counterfactual, 50);
    EXPECT_LT(counterfactual, 150);
}

TEST(Counterfactual, RandomizedProbesSingleInsertionNull) {
    Circuit di = builtin_double_interferometer();
    CounterfactualReport r = randomized_def3_test(di, di_insertions({1}, {kB}), 100, 0.1, 17);
    EXPECT_TRUE(r.def2_holds);
    EXPECT_TRUE(r.def3_null);
    EXPECT_TRUE(r.def3_consistent);
    EXPECT_EQ(r.def3_samples.size(), 100u);
}

TEST(Counterfactual, RandomizedProbesDetectPair) {
    Circuit di = builtin_double_interferometer();
    CounterfactualReport r = randomized_def3_test(di, di_insertions({1, 2}, {kB, kC}), 20, 0.05, 18);
    EXPECT_FALSE(r.def2_holds);
    EXPECT_FALSE(r.def3_null);
    EXPECT_TRUE(r.def3_consistent);
    EXPECT_NEAR(r.detection_threshold, 0.05 * 0.05 * 0.5 / 10, 1e-15);
}

TEST(Counterfactual, ZeroCouplingGivesExactZero) {
    Circuit di = builtin_double_interferometer();
    CounterfactualReport r = randomized_def3_test(di, di_insertions({1, 2}, {kB, kC}), 5, 0.0, 19);
    for (const auto &s : r.def3_samples) {
        EXPECT_EQ(s.response, 0.0);
    }
}

TEST(Counterfactual, PairResponseIsSecondOrder) {
    // Only the pair weak value is nonzero, so a shared-ancilla pair probe responds at O(g^2).
    Circuit di = builtin_double_interferometer();
    std::mt19937_64 rng(20);
    COperator h1 = testing::random_hermitian(rng, 2);
    COperator h2 = testing::random_hermitian(rng, 2);
    COperator obs = testing::random_hermitian(rng, 2);
    CVector anc = testing::random_state(rng, 2);
    auto response = [&](double g) {
        std::vector<WeakProbe> probes{{1, basis_projector(2, kB), h1}, {2, basis_projector(2, kC), h2}};
        return weak_interaction_response(di, probes, obs, anc, g);
    };
    double ratio = response(0.01) / response(0.005);
    EXPECT_NEAR(ratio, 4, 0.1);
}

TEST(Counterfactual, HigherRankProjectorNullToAllTestedOrders) {
    std::mt19937_64 rng(21);
    Circuit c = testing::block_circuit(rng, 4, 2, 2);
    COperator hidden = COperator::Zero(4, 4);
    hidden(2, 2) = 1;
    hidden(3, 3) = 1;
    InsertionSet ins{{1, 2}, {hidden, hidden}};
    EXPECT_TRUE(check_equivalence_def1_def2(c, ins));
    for (double g : {0.01, 0.1, 0.3}) {
        CounterfactualReport r = randomized_def3_test(c, ins, 10, g, 22);
        EXPECT_TRUE(r.def3_null);
    }
}

TEST(Counterfactual, DeterminesOutput) {
    auto circuit_with_f = [](double f) {
        CVector psi_f(2);
        psi_f << f, std::sqrt(1 - f * f);
        return Circuit(basis_vector(2, 0), {}, identity(2), psi_f);
    };
    EXPECT_TRUE(determines_output(circuit_with_f(0.7), circuit_with_f(0)));
    EXPECT_FALSE(determines_output(circuit_with_f(0.5), circuit_with_f(0.5)));
    try {
        determines_output(circuit_with_f(0), circuit_with_f(0));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BothZero);
    }
    auto [open, blocked] = interaction_free_pair();
    EXPECT_TRUE(determines_output(open, blocked));
    EXPECT_NEAR(std::abs(transition_amplitude(blocked)), 0.5, 1e-15);
}

}  // namespace
}  // namespace wseq
