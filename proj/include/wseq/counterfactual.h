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

#ifndef WSEQ_COUNTERFACTUAL_H
#define WSEQ_COUNTERFACTUAL_H

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wseq/circuit.h"

namespace wseq {

/// Sites where the computer may act, with the projector N onto its "on" state at each.
/// The complementary "off" projector is F = I - N.
struct InsertionSet {
    std::vector<int> sites;
    std::vector<COperator> on_projectors;

    size_t size() const {
        return sites.size();
    }
};

/// Checks sites strictly increasing within 1..n and projectors Hermitian idempotent within 1e-10.
/// Throws Error(NotProjector), Error(DimMismatch) or Error(InvalidArgument).
void validate_insertions(const Circuit &c, const InsertionSet &ins);

/// Insertions at `sites` using the circuit's own observables there as the on-projectors.
InsertionSet insertions_from_observables(const Circuit &c, const std::vector<int> &sites);

enum class Symbol { F, N };

/// Which projector sits at each insertion, in time order.
struct History {
    std::vector<Symbol> symbols;

    bool has_on() const;
    /// "(N,F)" in time order.
    std::string str() const;
    bool operator==(const History &) const = default;
};

/// All 2^k histories in lexicographic order with F < N (earliest insertion most significant).
std::vector<History> all_histories(size_t k);

Complex history_amplitude(const Circuit &c, const InsertionSet &ins, const History &h);

struct HistoryVerdict {
    bool counterfactual = true;
    std::optional<History> witness;
    Complex amplitude = 0;
};

struct WeakValueVerdict {
    bool counterfactual = true;
    /// Failing subset of circuit sites.
    std::optional<IndexSubset> witness;
    Complex weak_value = 0;
};

/// Every history containing an N has amplitude of modulus at most 1e-10.
HistoryVerdict is_counterfactual_histories(const Circuit &c, const InsertionSet &ins);

/// Every nonempty subset of insertion sites has a sequential weak value of the N's with modulus at most 1e-10.
/// Throws Error(DegeneratePostSelection) when |F| <= 1e-12.
WeakValueVerdict is_counterfactual_weakvalues(const Circuit &c, const InsertionSet &ins);

/// Runs both verdicts and the history/subset expansion through F = I - N, which must match
/// within 1e-10. Returns the common verdict; throws Error(EquivalenceViolation) otherwise.
bool check_equivalence_def1_def2(const Circuit &c, const InsertionSet &ins);

struct Def3Sample {
    /// e.g. "trial 3 sites {1,2} shared ancilla".
    std::string probe;
    double response = 0;
};

struct CounterfactualReport {
    bool def1_holds = false;
    bool def2_holds = false;
    /// Every sampled response within tol3.
    bool def3_null = false;
    /// Null when the weak values vanish, or a response above the detection threshold when they do not.
    bool def3_consistent = false;
    HistoryVerdict histories;
    WeakValueVerdict weak_values;
    std::vector<Def3Sample> def3_samples;
    double tol3 = 0;
    /// Minimum over failing subsets s of g^|s| |wv(s)| / 10; zero when none fail.
    double detection_threshold = 0;
};

/// Probes each insertion, each pair, and the whole set with random ancilla couplings.
///
/// Ancilla Hamiltonians, observables and states are drawn from a standard complex
/// normal seeded by `seed` (Hermitized where needed). Probes across several sites
/// share one ancilla, so correlated responses are exercised.
CounterfactualReport randomized_def3_test(const Circuit &c, const InsertionSet &ins, int trials, double g,
                                          uint64_t seed);

/// True iff the outcome has nonzero probability (above 1e-20) in exactly one program variant.
/// Throws Error(BothZero) if it never occurs.
bool determines_output(const Circuit &c_out0, const Circuit &c_out1);

/// Elitzur-Vaidman style pair: output 0 leaves path B open, output 1 absorbs it.
/// Three modes (B/D, C/D', absorbed); post-selection on D'.
std::pair<Circuit, Circuit> interaction_free_pair();

}  // namespace wseq

#endif
