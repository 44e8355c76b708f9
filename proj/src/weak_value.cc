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

#include "wseq/weak_value.h"

#include <cmath>
#include <string>

#include "wseq/errors.h"
#include "wseq/oracle.h"

namespace wseq {

namespace {

constexpr double kBranchZero = 1e-10;

Complex checked_denominator(const Circuit &c) {
    Complex f = transition_amplitude(c);
    if (std::abs(f) <= kDegenerateAmplitude) {
        throw Error(ErrorCode::DegeneratePostSelection,
                    "post-selection is orthogonal to the evolved state (|F| = " + std::to_string(std::abs(f)) +
                        "); weak values are undefined");
    }
    return f;
}

void check_subset(const Circuit &c, const IndexSubset &s) {
    for (int site : s.indices()) {
        if (site > c.num_sites()) {
            throw Error(ErrorCode::InvalidArgument,
                        "site " + std::to_string(site) + " exceeds the circuit's " + std::to_string(c.num_sites()));
        }
    }
}

IndexSubset full_subset(int n) {
    std::vector<int> all;
    for (int k = 1; k <= n; k++) {
        all.push_back(k);
    }
    return IndexSubset(std::move(all));
}

/// Orthonormal basis whose first column is v / |v|.
COperator completed_basis(const CVector &v) {
    const auto d = v.size();
    COperator seed = COperator::Identity(d, d);
    COperator m(d, d + 1);
    m.col(0) = v.normalized();
    m.rightCols(d) = seed;
    // Gram-Schmidt over [v, e_0, ..., e_{d-1}], keeping the first d independent columns.
    COperator basis(d, d);
    Eigen::Index found = 0;
    for (Eigen::Index j = 0; j <= d && found < d; j++) {
        CVector w = m.col(j);
        for (Eigen::Index k = 0; k < found; k++) {
            w -= basis.col(k).dot(w) * basis.col(k);
        }
        if (w.norm() > 1e-8) {
            basis.col(found++) = w.normalized();
        }
    }
    return basis;
}

/// The unit vector spanning a rank-1 projector.
CVector projector_range(const COperator &p) {
    EigenSystem es = eig_hermitian(p);
    if (es.size() != 2 || std::abs(es.eigenvalues[0]) > 1e-9 || std::abs(es.eigenvalues[1] - 1) > 1e-9 ||
        std::abs(es.projectors[1].trace().real() - 1) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "observable is not a rank-1 projector");
    }
    Eigen::Index col = 0;
    es.projectors[1].colwise().norm().maxCoeff(&col);
    return es.projectors[1].col(col).normalized();
}

}  // namespace

Complex weak_value_numerator(const Circuit &c, const IndexSubset &s) {
    check_subset(c, s);
    std::vector<const COperator *> inserts(c.num_sites(), nullptr);
    for (int site : s.indices()) {
        inserts[site - 1] = &c.observable(site);
    }
    return chained_amplitude(c, inserts);
}

Complex weak_value(const Circuit &c, const IndexSubset &s) {
    check_subset(c, s);
    Complex f = checked_denominator(c);
    if (s.empty()) {
        return 1.0;
    }
    return weak_value_numerator(c, s) / f;
}

Complex WeakValueTable::at(const IndexSubset &s) const {
    auto it = entries.find(s);
    if (it == entries.end()) {
        throw Error(ErrorCode::InvalidArgument, "subset not present in the weak-value table");
    }
    return it->second;
}

WeakValueTable weak_value_table(const Circuit &c, int max_order) {
    if (max_order < 0 || max_order > c.num_sites()) {
        throw Error(ErrorCode::InvalidArgument, "max order " + std::to_string(max_order) + " outside 0.." +
                                                    std::to_string(c.num_sites()));
    }
    Complex f = checked_denominator(c);
    WeakValueTable table;
    table.circuit_fingerprint = c.fingerprint();
    for (const auto &s : subsets_up_to(c.num_sites(), max_order)) {
        table.entries.emplace(s, s.empty() ? Complex(1.0) : weak_value_numerator(c, s) / f);
    }
    return table;
}

double check_linearity(const Circuit &c, const Circuit &c_prime, int site) {
    if (c.dim() != c_prime.dim() || c.num_sites() != c_prime.num_sites()) {
        throw Error(ErrorCode::DimMismatch, "linearity check needs circuits of identical shape");
    }
    Circuit summed = c.with_observable(site, c.observable(site) + c_prime.observable(site));
    IndexSubset s{site};
    return std::abs(weak_value(c, s) + weak_value(c_prime, s) - weak_value(summed, s));
}

double check_marginal(const Circuit &c, const IndexSubset &s, int drop) {
    if (s.empty()) {
        return 0;
    }
    if (!s.contains(drop)) {
        throw Error(ErrorCode::InvalidArgument, "dropped site " + std::to_string(drop) + " is not in the subset");
    }
    Circuit with_identity = c.with_observable(drop, identity(c.dim()));
    return std::abs(weak_value(with_identity, s) - weak_value(c, s.without(drop)));
}

std::optional<double> check_strong_agreement(const Circuit &c) {
    BranchSet set = branch_decompose(c);
    const Branch *only = nullptr;
    for (const auto &b : set.branches) {
        if (std::abs(b.amplitude) > kBranchZero) {
            if (only != nullptr) {
                return std::nullopt;
            }
            only = &b;
        }
    }
    if (only == nullptr) {
        return std::nullopt;
    }
    double product = 1;
    for (double a : only->eigenvalues) {
        product *= a;
    }
    return std::abs(weak_value(c, full_subset(c.num_sites())) - product);
}

Circuit truncated_after_first_site(const Circuit &c, const CVector &start) {
    if (c.num_sites() < 1) {
        throw Error(ErrorCode::InvalidArgument, "circuit has no first site to truncate at");
    }
    std::vector<Stage> rest(c.stages().begin() + 1, c.stages().end());
    if (!rest.empty()) {
        // The new first stage starts right after the old first boundary.
    }
    return Circuit(start.normalized(), std::move(rest), c.u_final(), c.psi_f(), c.labels());
}

double ratio_rule_check(const Circuit &c) {
    if (c.num_sites() < 2) {
        throw Error(ErrorCode::InvalidArgument, "ratio rule needs at least two sites");
    }
    return ratio_rule_check(c, identity(c.dim()) - c.observable(2));
}

double ratio_rule_check(const Circuit &c, const COperator &alternative) {
    if (c.num_sites() < 2) {
        throw Error(ErrorCode::InvalidArgument, "ratio rule needs at least two sites");
    }
    CVector x = projector_range(c.observable(1));
    Circuit alt = c.with_observable(2, alternative);
    const IndexSubset pair{1, 2};
    Complex num = weak_value(c, pair);
    Complex den = weak_value(alt, pair);
    if (std::abs(den) <= kDegenerateAmplitude) {
        throw Error(ErrorCode::RatioUndefined, "sequential weak value with the alternative observable vanishes");
    }
    Circuit trunc = truncated_after_first_site(c, x);
    Circuit trunc_alt = truncated_after_first_site(alt, x);
    Complex f_trunc = transition_amplitude(trunc);
    if (std::abs(f_trunc) <= kDegenerateAmplitude) {
        throw Error(ErrorCode::RatioUndefined, "truncated circuit has a degenerate post-selection");
    }
    const IndexSubset first{1};
    Complex tnum = weak_value(trunc, first);
    Complex tden = weak_value(trunc_alt, first);
    if (std::abs(tden) <= kDegenerateAmplitude) {
        throw Error(ErrorCode::RatioUndefined, "truncated weak value of the alternative observable vanishes");
    }
    return std::abs(num / den - tnum / tden);
}

Complex product_weak_value(const Circuit &c) {
    if (c.num_sites() != 2) {
        throw Error(ErrorCode::InvalidArgument, "product weak value needs exactly two sites");
    }
    if (max_abs_entry(c.unitary(2) - identity(c.dim())) > 1e-10) {
        throw Error(ErrorCode::InvalidArgument, "the two observables must act at the same time (U_2 = I)");
    }
    const COperator &a1 = c.observable(1);
    const COperator &a2 = c.observable(2);
    if (max_abs_entry(a1 * a2 - a2 * a1) > 1e-10) {
        throw Error(ErrorCode::NonCommuting, "observables do not commute");
    }
    Complex f = checked_denominator(c);
    std::vector<Stage> stages{{c.unitary(1), a2 * a1}};
    // U_2 = I, so the product sits at one boundary followed by U_3.
    Circuit single(c.psi_i(), std::move(stages), c.u_final(), c.psi_f());
    return weak_value_numerator(single, IndexSubset{1}) / f;
}

double resch_steinberg_reconstruction(const Circuit &c, double q1q2_mean, double g) {
    if (!(g > 0)) {
        throw Error(ErrorCode::InvalidArgument, "reconstruction needs g > 0");
    }
    Complex a1 = weak_value(c, IndexSubset{1});
    Complex a2 = weak_value(c, IndexSubset{2});
    return 2 * q1q2_mean / (g * g) - (a1 * std::conj(a2)).real();
}

double path_amplitude_identity(const Circuit &c, const std::vector<COperator> &bases) {
    const int n = c.num_sites();
    const int d = c.dim();
    std::vector<CVector> path;
    for (int k = 1; k <= n; k++) {
        path.push_back(projector_range(c.observable(k)));
    }
    std::vector<COperator> used;
    if (bases.empty()) {
        for (const auto &x : path) {
            used.push_back(completed_basis(x));
        }
    } else {
        if (static_cast<int>(bases.size()) != n) {
            throw Error(ErrorCode::BasisIncomplete, "need one basis per site");
        }
        for (int k = 0; k < n; k++) {
            const auto &b = bases[k];
            if (b.rows() != d || b.cols() != d || !is_unitary(b, 1e-10)) {
                throw Error(ErrorCode::BasisIncomplete,
                            "basis for site " + std::to_string(k + 1) + " is not orthonormal-complete");
            }
            bool contains = false;
            for (int j = 0; j < d; j++) {
                if (std::abs(std::abs(b.col(j).dot(path[k])) - 1) < 1e-10) {
                    contains = true;
                }
            }
            if (!contains) {
                throw Error(ErrorCode::BasisIncomplete,
                            "basis for site " + std::to_string(k + 1) + " does not contain the projected state");
            }
            used.push_back(b);
        }
    }

    // Amplitude of the path through the chosen states, as a product of consecutive matrix elements.
    auto path_amp = [&](const std::vector<CVector> &states) {
        Complex amp = states[0].dot(c.unitary(1) * c.psi_i());
        for (int k = 1; k < n; k++) {
            amp *= states[k].dot(c.unitary(k + 1) * states[k - 1]);
        }
        amp *= c.psi_f().dot(c.u_final() * states[n - 1]);
        return amp;
    };
    if (n == 0) {
        return 0;
    }

    Complex total = 0;
    std::vector<int> idx(n, 0);
    std::vector<CVector> states(n);
    while (true) {
        for (int k = 0; k < n; k++) {
            states[k] = used[k].col(idx[k]);
        }
        total += path_amp(states);
        int k = n - 1;
        while (k >= 0 && ++idx[k] == d) {
            idx[k] = 0;
            k--;
        }
        if (k < 0) {
            break;
        }
    }
    if (std::abs(total) <= kDegenerateAmplitude) {
        throw Error(ErrorCode::DegeneratePostSelection, "paths sum to zero amplitude");
    }
    return std::abs(weak_value(c, full_subset(n)) - path_amp(path) / total);
}

}  // namespace wseq
