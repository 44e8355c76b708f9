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

#include <algorithm>
#include <cmath>

#include "test_support.h"
#include "wseq/errors.h"
#include "wseq/montecarlo.h"
#include "wseq/oracle.h"

namespace wseq {
namespace {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Two-sided Kolmogorov-Smirnov statistic against the N(mu, sigma^2) CDF.
double ks_statistic(std::vector<double> xs, double mu, double sigma) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        double f = normal_cdf((xs[i] - mu) / sigma);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

TEST(MonteCarlo, UncoupledSamplesFollowPointerDensity) {
    Circuit di = builtin_double_interferometer();
    auto runs = sample_runs(di, 0.0, PointerProfile::gaussian(1.5), 20000, 1);
    std::vector<double> q1;
    std::vector<double> q2;
    for (const auto &r : runs) {
        if (r.postselected) {
            q1.push_back(r.sample(1));
            q2.push_back(r.sample(2));
        }
    }
    // |phi|^2 is N(0, sigma^2); critical value at alpha = 0.01 is 1.628 / sqrt(n).
    const double crit = 1.628 / std::sqrt(static_cast<double>(q1.size()));
    EXPECT_LT(ks_statistic(q1, 0, 1.5), crit);
    EXPECT_LT(ks_statistic(q2, 0, 1.5), crit);
}

TEST(MonteCarlo, IdentityObservableTranslatesPointer) {
    Circuit c(basis_vector(2, 0), {{identity(2), identity(2)}}, identity(2), basis_vector(2, 0));
    const double g = 0.2;
    auto runs = sample_runs(c, g, PointerProfile::gaussian(1), 50000, 2);
    Estimate e = estimate_moment(runs, MomentSpec::parse("q1"));
    EXPECT_EQ(e.n_success, 50000);
    EXPECT_LT(std::abs(e.mean - g), 3 * e.stderr_);
}

TEST(MonteCarlo, DeterministicGivenSeed) {
    Circuit di = builtin_double_interferometer();
    const PointerProfile prof = PointerProfile::gaussian(1);
    auto a = sample_runs(di, 0.1, prof, 70000, 42);
    auto b = sample_runs(di, 0.1, prof, 70000, 42);
    EXPECT_TRUE(a == b);
    auto c = sample_runs(di, 0.1, prof, 70000, 43);
    EXPECT_FALSE(a == c);
    // Chunked seeding: a shorter batch is a prefix of a longer one.
    auto prefix = sample_runs(di, 0.1, prof, 66000, 42);
    EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), a.begin()));
}

TEST(MonteCarlo, EstimatorBasics) {
    RunRecord r0;
    r0.postselected = true;
    r0.count = 1;
    r0.samples[0] = 0;
    RunRecord r2 = r0;
    r2.samples[0] = 2;
    Estimate e = estimate_moment({r0, r2}, MomentSpec::parse("q1"));
    EXPECT_DOUBLE_EQ(e.mean, 1);
    EXPECT_EQ(e.n_success, 2);
    Estimate constant = estimate_moment({r2, r2, r2}, MomentSpec::parse("q1"));
    EXPECT_EQ(constant.stderr_, 0);
    RunRecord failed;
    try {
        estimate_moment({failed}, MomentSpec::parse("q1"));
        FAIL();
    } catch (const Error &err) {
        EXPECT_EQ(err.code(), ErrorCode::NoSuccessfulRuns);
    }
    EXPECT_THROW(estimate_moment({r0}, MomentSpec::parse("p1")), Error);
}

TEST(MonteCarlo, CoversOracleAcrossSeeds) {
    std::mt19937_64 rng(5);
    Circuit c = testing::random_circuit(rng, 3, 3);
    const PointerProfile prof = PointerProfile::gaussian(1);
    const double g = 0.4;
    const MomentSpec spec = MomentSpec::parse("q1*q3");
    ExactMoment exact = exact_moment(c, spec, g, prof);
    int covered = 0;
    int freq_ok = 0;
    const int seeds = 30;
    for (int s = 0; s < seeds; s++) {
        auto runs = sample_runs(c, g, prof, 20000, 1000 + s);
        Estimate e = estimate_moment(runs, spec);
        covered += std::abs(e.mean - exact.value) <= 3 * e.stderr_;
        Estimate f = postselect_frequency(runs);
        freq_ok += std::abs(f.mean - exact.postselect_prob) <= 3 * f.stderr_;
    }
    EXPECT_GE(covered, static_cast<int>(std::ceil(0.95 * seeds)));
    EXPECT_GE(freq_ok, static_cast<int>(std::ceil(0.95 * seeds)));
}

TEST(MonteCarlo, TabulatedProfile) {
    const int n = 512;
    std::vector<Complex> v(n);
    for (int k = 0; k < n; k++) {
        double q = -16 + k * 32.0 / n;
        v[k] = std::exp(-q * q / 4) * std::polar(1.0, 0.1 * q * q);
    }
    PointerProfile prof = PointerProfile::tabulated(-16, 32.0 / n, v);
    std::mt19937_64 rng(6);
    Circuit c = testing::random_circuit(rng, 2, 1);
    const double g = 0.5;
    ExactMoment exact = exact_moment(c, MomentSpec::parse("q1"), g, prof);
    Estimate e = estimate_moment(sample_runs(c, g, prof, 100000, 7), MomentSpec::parse("q1"));
    EXPECT_LT(std::abs(e.mean - exact.value), 3 * e.stderr_);
}

TEST(MonteCarlo, RejectsUnsupportedInputs) {
    std::mt19937_64 rng(8);
    Circuit four = testing::random_circuit(rng, 2, 4);
    EXPECT_THROW(sample_runs(four, 0.1, PointerProfile::gaussian(1), 10, 1), Error);
    // A translation beyond a quarter of the tabulated span cannot be resolved.
    std::vector<Complex> v(256);
    for (int k = 0; k < 256; k++) {
        double q = -8 + k / 16.0;
        v[k] = std::exp(-q * q);
    }
    Circuit di = builtin_double_interferometer();
    try {
        sample_runs(di, 5.0, PointerProfile::tabulated(-8, 1 / 16.0, v), 10, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::GridResolutionError);
    }
}

}  // namespace
}  // namespace wseq
