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

#include "wseq/oracle.h"

#include <cmath>
#include <string>

#include "wseq/errors.h"

namespace wseq {

namespace {

constexpr double kSingularNorm = 1e-14;

void enumerate_branches(const Circuit &c, const std::vector<EigenSystem> &spectra, int site, const CVector &state,
                        std::vector<int> &path, std::vector<Branch> &out) {
    const int n = c.num_sites();
    if (site > n) {
        Branch b;
        b.eigen_index = path;
        for (int k = 0; k < n; k++) {
            b.eigenvalues.push_back(spectra[k].eigenvalues[path[k]]);
        }
        b.amplitude = c.psi_f().dot(c.u_final() * state);
        out.push_back(std::move(b));
        return;
    }
    CVector evolved = c.unitary(site) * state;
    const auto &spectrum = spectra[site - 1];
    for (size_t e = 0; e < spectrum.size(); e++) {
        path.push_back(static_cast<int>(e));
        enumerate_branches(c, spectra, site + 1, spectrum.projectors[e] * evolved, path, out);
        path.pop_back();
    }
}

OverlapKernel gaussian_kernels_with_offsets(std::span<const double> eigs, double g, const GaussianProfile &prof) {
    const auto n = static_cast<Eigen::Index>(eigs.size());
    OverlapKernel k{COperator(n, n), COperator(n, n), COperator(n, n)};
    const double s2 = prof.sigma * prof.sigma;
    for (Eigen::Index bi = 0; bi < n; bi++) {
        for (Eigen::Index ai = 0; ai < n; ai++) {
            double a = eigs[ai];
            double b = eigs[bi];
            double d = g * (a - b);
            Complex s = std::polar(std::exp(-d * d / (8 * s2)), prof.p_offset * g * (b - a));
            k.s(bi, ai) = s;
            k.q(bi, ai) = s * (prof.q_offset + g * (a + b) / 2);
            k.p(bi, ai) = s * Complex(prof.p_offset, g * (b - a) / (4 * s2));
        }
    }
    return k;
}

OverlapKernel tabulated_kernels(std::span<const double> eigs, double g, const TabulatedProfile &t) {
    const auto n = static_cast<Eigen::Index>(eigs.size());
    const size_t m = t.values.size();
    const double span = t.grid_step * static_cast<double>(m);
    auto mom = to_momentum(t);
    std::vector<Complex> q_phi(m);
    for (size_t k = 0; k < m; k++) {
        q_phi[k] = t.position(k) * t.values[k];
    }
    auto q_mom = to_momentum_like(t, q_phi);

    OverlapKernel out{COperator(n, n), COperator(n, n), COperator(n, n)};
    for (Eigen::Index bi = 0; bi < n; bi++) {
        for (Eigen::Index ai = 0; ai < n; ai++) {
            double shift = g * (eigs[ai] - eigs[bi]);
            if (std::abs(shift) > span / 4) {
                throw Error(ErrorCode::GridResolutionError,
                            "pointer translation " + std::to_string(shift) + " is too large for the tabulated grid");
            }
            Complex s = 0;
            Complex p = 0;
            Complex q = 0;
            for (size_t k = 0; k < m; k++) {
                Complex phase = std::polar(1.0, -mom.momenta[k] * shift);
                Complex w = std::norm(mom.amplitude[k]) * phase;
                s += w;
                p += mom.momenta[k] * w;
                q += std::conj(q_mom[k]) * mom.amplitude[k] * phase;
            }
            out.s(bi, ai) = s;
            out.p(bi, ai) = p;
            out.q(bi, ai) = q + g * eigs[bi] * s;
        }
    }
    return out;
}

/// Weighted double sum over branch pairs: sum_{a,b} conj(c_b) c_a prod_k K_k(b_k, a_k).
Complex branch_pair_sum(const BranchSet &set, const std::vector<const COperator *> &kernels) {
    Complex total = 0;
    for (const auto &bb : set.branches) {
        if (bb.amplitude == Complex(0)) {
            continue;
        }
        Complex cb = std::conj(bb.amplitude);
        for (const auto &ba : set.branches) {
            if (ba.amplitude == Complex(0)) {
                continue;
            }
            Complex term = cb * ba.amplitude;
            for (size_t k = 0; k < kernels.size(); k++) {
                term *= (*kernels[k])(bb.eigen_index[k], ba.eigen_index[k]);
            }
            total += term;
        }
    }
    return total;
}

}  // namespace

Complex BranchSet::total() const {
    Complex sum = 0;
    for (const auto &b : branches) {
        sum += b.amplitude;
    }
    return sum;
}

BranchSet branch_decompose(const Circuit &c) {
    BranchSet set;
    for (int k = 1; k <= c.num_sites(); k++) {
        set.site_spectra.push_back(eig_hermitian(c.observable(k)));
    }
    std::vector<int> path;
    enumerate_branches(c, set.site_spectra, 1, c.psi_i(), path, set.branches);
    return set;
}

OverlapKernel gaussian_kernels(std::span<const double> eigs, double g, double sigma) {
    if (!(sigma > 0)) {
        throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    }
    return gaussian_kernels_with_offsets(eigs, g, GaussianProfile{sigma, 0, 0});
}

OverlapKernel profile_kernels(std::span<const double> eigs, double g, const PointerProfile &prof) {
    if (prof.is_gaussian()) {
        return gaussian_kernels_with_offsets(eigs, g, prof.as_gaussian());
    }
    return tabulated_kernels(eigs, g, prof.as_tabulated());
}

ExactMoment exact_moment(const Circuit &c, const MomentSpec &spec, double g, const PointerProfile &prof) {
    if (!(g >= 0) || !std::isfinite(g)) {
        throw Error(ErrorCode::InvalidArgument, "coupling g must be a non-negative finite number");
    }
    for (int site : spec.sites()) {
        if (site > c.num_sites()) {
            throw Error(ErrorCode::InvalidArgument,
                        "moment " + spec.str() + " refers to site " + std::to_string(site) + " beyond the circuit");
        }
    }
    BranchSet set = branch_decompose(c);
    std::vector<OverlapKernel> kernels;
    for (const auto &spectrum : set.site_spectra) {
        kernels.push_back(profile_kernels(spectrum.eigenvalues, g, prof));
    }
    std::vector<const COperator *> numerator_kernels;
    std::vector<const COperator *> norm_kernels;
    for (int k = 1; k <= c.num_sites(); k++) {
        const auto &kern = kernels[k - 1];
        norm_kernels.push_back(&kern.s);
        const Quadrature *kind = spec.at_site(k);
        if (kind == nullptr) {
            numerator_kernels.push_back(&kern.s);
        } else if (*kind == Quadrature::Position) {
            numerator_kernels.push_back(&kern.q);
        } else {
            numerator_kernels.push_back(&kern.p);
        }
    }
    Complex norm = branch_pair_sum(set, norm_kernels);
    if (norm.real() < kSingularNorm) {
        throw Error(ErrorCode::NumericallySingular,
                    "post-selected pointer state has norm " + std::to_string(norm.real()));
    }
    Complex ratio = branch_pair_sum(set, numerator_kernels) / norm;
    if (std::abs(ratio.imag()) > 1e-9 * std::max(1.0, std::abs(ratio.real()))) {
        throw Error(ErrorCode::NumericallySingular,
                    "exact moment has imaginary residue " + std::to_string(ratio.imag()));
    }
    return ExactMoment{ratio.real(), norm.real() / c.psi_f().squaredNorm()};
}

double same_pointer_twice(const Circuit &c, double g, const PointerProfile &prof) {
    if (!prof.satisfies_assumption_a()) {
        throw Error(ErrorCode::AssumptionAViolated, "same-pointer coupling requires a real, zero-mean profile");
    }
    BranchSet set = branch_decompose(c);
    std::vector<double> shifts;
    std::vector<Complex> amps;
    for (const auto &b : set.branches) {
        double total = 0;
        for (double a : b.eigenvalues) {
            total += a;
        }
        shifts.push_back(total);
        amps.push_back(b.amplitude);
    }
    OverlapKernel k = profile_kernels(shifts, g, prof);
    Eigen::Map<const CVector> cvec(amps.data(), static_cast<Eigen::Index>(amps.size()));
    Complex norm = cvec.dot(k.s * cvec);
    if (norm.real() < kSingularNorm) {
        throw Error(ErrorCode::NumericallySingular,
                    "post-selected pointer state has norm " + std::to_string(norm.real()));
    }
    return (cvec.dot(k.q * cvec) / norm).real();
}

double weak_interaction_response(const Circuit &c, std::span<const WeakProbe> probes, const COperator &anc_obs,
                                 const CVector &anc_state, double g) {
    const int d = c.dim();
    const auto m = static_cast<int>(anc_state.size());
    if (m == 0 || anc_obs.rows() != m || anc_obs.cols() != m) {
        throw Error(ErrorCode::DimMismatch, "ancilla observable and state dimensions disagree");
    }
    if (!is_hermitian(anc_obs, 1e-9)) {
        throw Error(ErrorCode::NotHermitian, "ancilla observable is not Hermitian");
    }
    std::vector<COperator> generators;
    for (const auto &probe : probes) {
        if (probe.site < 1 || probe.site > c.num_sites()) {
            throw Error(ErrorCode::InvalidArgument, "probe site " + std::to_string(probe.site) + " out of range");
        }
        if (probe.restriction.rows() != d || probe.restriction.cols() != d || probe.h_anc.rows() != m ||
            probe.h_anc.cols() != m) {
            throw Error(ErrorCode::DimMismatch, "probe operators do not match system/ancilla dimensions");
        }
        if (!is_projector(probe.restriction, 1e-10)) {
            throw Error(ErrorCode::NotProjector, "probe restriction at site " + std::to_string(probe.site) +
                                                     " is not a projector");
        }
        if (!is_hermitian(probe.h_anc, 1e-9)) {
            throw Error(ErrorCode::NotHermitian, "ancilla Hamiltonian is not Hermitian");
        }
        generators.push_back(kron(probe.restriction, probe.h_anc));
    }

    const COperator anc_id = identity(m);
    auto expectation = [&](double coupling) {
        std::vector<COperator> steps;
        for (const auto &h : generators) {
            steps.push_back(unitary_exp(h, coupling));
        }
        CVector state = kron(c.psi_i(), anc_state);
        for (int k = 1; k <= c.num_sites(); k++) {
            state = kron(c.unitary(k), anc_id) * state;
            for (size_t j = 0; j < probes.size(); j++) {
                if (probes[j].site == k) {
                    state = steps[j] * state;
                }
            }
        }
        state = kron(c.u_final(), anc_id) * state;
        CVector chi = CVector::Zero(m);
        for (int s = 0; s < d; s++) {
            chi += std::conj(c.psi_f()(s)) * state.segment(s * m, m);
        }
        double norm = chi.squaredNorm();
        if (norm < kSingularNorm * c.psi_f().squaredNorm()) {
            throw Error(ErrorCode::NumericallySingular, "post-selected ancilla state vanishes");
        }
        return chi.dot(anc_obs * chi).real() / norm;
    };
    return expectation(g) - expectation(0.0);
}

double weak_interaction_response(const Circuit &c, int site, const COperator &restriction, const COperator &h_anc,
                                 const COperator &anc_obs, const CVector &anc_state, double g) {
    const WeakProbe probe{site, restriction, h_anc};
    return weak_interaction_response(c, std::span<const WeakProbe>(&probe, 1), anc_obs, anc_state, g);
}

}  // namespace wseq
