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

#ifndef WSEQ_ORACLE_H
#define WSEQ_ORACLE_H

#include <span>
#include <vector>

#include "wseq/circuit.h"
#include "wseq/pointer.h"
#include "wseq/profile.h"

namespace wseq {

/// Exact expansion of the post-selected system-pointer state over eigenbranches.
///
/// exp(-i g p A) = sum_a exp(-i g p a) Pi_a, so after post-selection the joint
/// pointer state is sum over eigenvalue sequences of c_a * prod_k phi(q_k - g a_k).
struct Branch {
    /// Index into each site's spectrum.
    std::vector<int> eigen_index;
    std::vector<double> eigenvalues;
    Complex amplitude;
};

struct BranchSet {
    std::vector<EigenSystem> site_spectra;
    /// All combinations in row-major order (last site varies fastest).
    std::vector<Branch> branches;

    /// Sum of all amplitudes; equals F by projector completeness.
    Complex total() const;
};

BranchSet branch_decompose(const Circuit &c);

/// Pairwise overlaps of translated pointer states phi(q - g a) over one site's eigenvalues.
///
/// s(b, a) = <phi_b|phi_a>, q(b, a) = <phi_b|q|phi_a>, p(b, a) = <phi_b|-i d/dq|phi_a>.
struct OverlapKernel {
    COperator s;
    COperator q;
    COperator p;
};

/// Closed forms for a zero-offset Gaussian:
/// s = exp(-g^2 (a-b)^2 / (8 sigma^2)), q = s g (a+b)/2, p = s i g (b-a) / (4 sigma^2).
OverlapKernel gaussian_kernels(std::span<const double> eigs, double g, double sigma);
/// Kernels for any profile: Gaussian closed forms (with offsets) or DFT quadrature on the tabulated grid.
OverlapKernel profile_kernels(std::span<const double> eigs, double g, const PointerProfile &prof);

struct ExactMoment {
    double value;
    /// Probability that the post-selection succeeds with the pointers coupled.
    double postselect_prob;
};

/// <r_1 ... r_k> in the post-selected ensemble, exact in g.
/// Every site of the circuit carries a pointer; sites not in `spec` are integrated out.
/// Throws Error(NumericallySingular) when the post-selected norm falls below 1e-14.
ExactMoment exact_moment(const Circuit &c, const MomentSpec &spec, double g, const PointerProfile &prof);

/// Exact <q> of a single pointer coupled at every site of `c` (translated by g sum_k a_k).
/// Requires an Assumption-A profile.
double same_pointer_twice(const Circuit &c, double g, const PointerProfile &prof);

/// A product-form weak interaction exp(-i g N (x) h) at one boundary.
struct WeakProbe {
    int site;
    /// Projector restricting the interaction (rank may exceed 1).
    COperator restriction;
    /// Hermitian ancilla Hamiltonian.
    COperator h_anc;
};

/// Change of <anc_obs> on the post-selected ancilla relative to g = 0, exact in g.
/// Throws Error(NotProjector) / Error(NotHermitian) for malformed probes.
double weak_interaction_response(const Circuit &c, std::span<const WeakProbe> probes, const COperator &anc_obs,
                                 const CVector &anc_state, double g);
double weak_interaction_response(const Circuit &c, int site, const COperator &restriction, const COperator &h_anc,
                                 const COperator &anc_obs, const CVector &anc_state, double g);

}  // namespace wseq

#endif
