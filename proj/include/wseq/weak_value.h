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

#ifndef WSEQ_WEAK_VALUE_H
#define WSEQ_WEAK_VALUE_H

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wseq/circuit.h"

namespace wseq {

/// Post-selections with |F| at or below this are rejected as degenerate.
inline constexpr double kDegenerateAmplitude = 1e-12;
/// Weak values above this modulus are legitimate but flagged by callers.
inline constexpr double kLargeWeakValue = 1e6;

/// Sequential weak value (A_{i_r}, ..., A_{i_1})_w for s = (i_1 < ... < i_r).
///
/// Sites outside `s` are replaced by the identity. The empty subset yields 1.
/// Throws Error(DegeneratePostSelection) when |F| <= 1e-12.
Complex weak_value(const Circuit &c, const IndexSubset &s);

/// Numerator of the weak value: the chained amplitude with observables at the sites in `s` only.
Complex weak_value_numerator(const Circuit &c, const IndexSubset &s);

struct WeakValueTable {
    /// Keyed by subset; std::map iteration is the lexicographic enumeration order.
    std::map<IndexSubset, Complex> entries;
    uint64_t circuit_fingerprint = 0;

    Complex at(const IndexSubset &s) const;
};

WeakValueTable weak_value_table(const Circuit &c, int max_order);

/// |wv(A) + wv(A') - wv(A + A')| for the observables at `site` of c and c_prime.
/// The two circuits must agree everywhere except at that observable.
double check_linearity(const Circuit &c, const Circuit &c_prime, int site);

/// |wv(s with the observable at `drop` replaced by I) - wv(s \ {drop})|.
double check_marginal(const Circuit &c, const IndexSubset &s, int drop);

/// If strong measurements of all observables are deterministic under pre- and
/// post-selection (exactly one eigenvalue sequence carries amplitude above 1e-10),
/// returns |wv(full) - a_1 a_2 ... a_n|. Otherwise returns nothing.
std::optional<double> check_strong_agreement(const Circuit &c);

/// Ratio rule for a rank-1 projector |x><x| at site 1.
///
/// Compares (A_2, P)_w / (A_2', P)_w with A_2_w / A_2'_w evaluated on the circuit
/// truncated after site 1 with psi_i replaced by |x>. A_2 is the observable at site 2;
/// A_2' defaults to I - A_2. Throws Error(RatioUndefined) when a denominator vanishes.
double ratio_rule_check(const Circuit &c);
double ratio_rule_check(const Circuit &c, const COperator &alternative);

/// Circuit from site 2 onward, pre-selected on `start`.
Circuit truncated_after_first_site(const Circuit &c, const CVector &start);

/// Weak value of the product of two commuting observables at one time.
///
/// `c` must have exactly two sites with U_2 = I; returns (A_2 A_1)_w computed
/// from the product operator. Throws Error(NonCommuting) if [A_1, A_2] != 0 within 1e-10.
Complex product_weak_value(const Circuit &c);

/// Reconstruction 2<q1 q2>/g^2 - Re[(A_1)_w conj((A_2)_w)] of Re(A_1 A_2)_w from two-pointer statistics.
double resch_steinberg_reconstruction(const Circuit &c, double q1q2_mean, double g);

/// Path identity for circuits whose observables are all rank-1 projectors |X_k><X_k|.
///
/// `bases[k]` holds an orthonormal basis (as columns) for the boundary after U_{k+1};
/// an empty vector asks for bases completed automatically from each |X_k>.
/// Returns |wv(full) - Amp(path X) / sum over paths of Amp|.
/// Throws Error(BasisIncomplete) when a basis is not orthonormal-complete or lacks |X_k>.
double path_amplitude_identity(const Circuit &c, const std::vector<COperator> &bases = {});

}  // namespace wseq

#endif
