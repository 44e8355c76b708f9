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

#ifndef WSEQ_CIRCUIT_H
#define WSEQ_CIRCUIT_H

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "wseq/algebra.h"

namespace wseq {

/// One evolution step followed by the observable measured at the boundary after it.
struct Stage {
    COperator unitary;
    COperator observable;
};

/// A pre- and post-selected measurement scenario.
///
/// The system starts in psi_i, evolves through U_1 ... U_n with observable A_k
/// attached at the boundary after U_k, then through u_final (U_{n+1}), and is
/// post-selected on psi_f. A boundary without a measured observable carries the
/// identity. psi_f need not be normalized; weak values do not depend on its scale.
class Circuit {
   public:
    /// Validates the construction invariants: unitaries and Hermitian observables
    /// within 1e-9, psi_i normalized within 1e-10, psi_f nonzero, matching dims.
    Circuit(CVector psi_i, std::vector<Stage> stages, COperator u_final, CVector psi_f,
            std::vector<std::string> labels = {});

    int dim() const {
        return static_cast<int>(psi_i_.size());
    }
    /// Number of measurement sites n.
    int num_sites() const {
        return static_cast<int>(stages_.size());
    }
    const CVector &psi_i() const {
        return psi_i_;
    }
    const CVector &psi_f() const {
        return psi_f_;
    }
    const std::vector<Stage> &stages() const {
        return stages_;
    }
    const COperator &u_final() const {
        return u_final_;
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    /// 1-based site accessors.
    const COperator &unitary(int site) const;
    const COperator &observable(int site) const;

    Circuit with_observable(int site, COperator observable) const;
    Circuit with_psi_i(CVector psi_i) const;
    Circuit with_psi_f(CVector psi_f) const;

    /// FNV-1a hash over every numeric entry; stable across runs and platforms with IEEE doubles.
    uint64_t fingerprint() const;

    bool operator==(const Circuit &other) const;

   private:
    CVector psi_i_;
    std::vector<Stage> stages_;
    COperator u_final_;
    CVector psi_f_;
    std::vector<std::string> labels_;
};

/// Strictly increasing, 1-based measurement-site indices. Empty denotes the bare amplitude.
class IndexSubset {
   public:
    IndexSubset() = default;
    IndexSubset(std::initializer_list<int> indices);
    explicit IndexSubset(std::vector<int> indices);

    const std::vector<int> &indices() const {
        return indices_;
    }
    size_t size() const {
        return indices_.size();
    }
    bool empty() const {
        return indices_.empty();
    }
    bool contains(int site) const;
    IndexSubset without(int site) const;

    auto operator<=>(const IndexSubset &) const = default;
    bool operator==(const IndexSubset &) const = default;

   private:
    std::vector<int> indices_;
};

/// Every subset of {1..n} with at most max_order elements, in lexicographic order.
std::vector<IndexSubset> subsets_up_to(int n, int max_order);

/// <psi_f| U_{n+1} X_n U_n ... X_1 U_1 |psi_i> where X_k = *inserts[k-1], or the identity when null.
Complex chained_amplitude(const Circuit &c, std::span<const COperator *const> inserts);

/// F = <psi_f| U_{n+1} ... U_1 |psi_i>, observables skipped.
Complex transition_amplitude(const Circuit &c);

/// Conjugates every part of the circuit by the basis permutation `perm` (new index i <- old perm[i]).
Circuit relabeled(const Circuit &c, std::span<const int> perm);

/// The two-stage optical circuit with a photon injected along A and detected at D.
///
/// Mode space is two-dimensional: index 0 is path B in the first interferometer,
/// E in the second and D after the last beam splitter; index 1 is C, F and D'.
/// Observables default to P_B at site 1 and P_F at site 2.
Circuit builtin_double_interferometer();
/// Same circuit with explicit observables at the two boundaries.
Circuit double_interferometer_with(const COperator &first, const COperator &second);

}  // namespace wseq

#endif
