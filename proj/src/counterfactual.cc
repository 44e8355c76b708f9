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

#include "wseq/counterfactual.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "wseq/errors.h"
#include "wseq/oracle.h"
#include "wseq/weak_value.h"

namespace wseq {

namespace {

constexpr double kVanishes = 1e-10;
constexpr int kAncillaDim = 2;

/// Chained amplitude with the N projector at the insertions flagged in `on`, identity elsewhere.
Complex on_numerator(const Circuit &c, const InsertionSet &ins, const std::vector<bool> &on) {
    std::vector<const COperator *> inserts(c.num_sites(), nullptr);
    for (size_t k = 0; k < ins.size(); k++) {
        if (on[k]) {
            inserts[ins.sites[k] - 1] = &ins.on_projectors[k];
        }
    }
    return chained_amplitude(c, inserts);
}

std::vector<bool> mask_bits(size_t k, uint64_t mask) {
    std::vector<bool> on(k);
    for (size_t j = 0; j < k; j++) {
        on[j] = (mask >> (k - 1 - j)) & 1U;
    }
    return on;
}

/// Nonempty insertion subsets in lexicographic order of their site lists.
std::vector<std::vector<bool>> nonempty_subsets(size_t k) {
    std::vector<std::vector<bool>> out;
    for (const auto &s : subsets_up_to(static_cast<int>(k), static_cast<int>(k))) {
        if (s.empty()) {
            continue;
        }
        std::vector<bool> on(k, false);
        for (int i : s.indices()) {
            on[i - 1] = true;
        }
        out.push_back(std::move(on));
    }
    return out;
}

IndexSubset subset_sites(const InsertionSet &ins, const std::vector<bool> &on) {
    std::vector<int> sites;
    for (size_t k = 0; k < ins.size(); k++) {
        if (on[k]) {
            sites.push_back(ins.sites[k]);
        }
    }
    return IndexSubset(std::move(sites));
}

COperator random_hermitian(std::mt19937_64 &rng, int m) {
    std::normal_distribution<double> normal;
    COperator a(m, m);
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            a(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    return (a + a.adjoint()) / 2.0;
}

CVector random_state(std::mt19937_64 &rng, int m) {
    std::normal_distribution<double> normal;
    CVector v(m);
    for (int i = 0; i < m; i++) {
        v(i) = Complex(normal(rng), normal(rng));
    }
    return v.normalized();
}

std::string site_list(const std::vector<WeakProbe> &probes) {
    std::string s = "{";
    for (size_t k = 0; k < probes.size(); k++) {
        s += (k ? "," : "") + std::to_string(probes[k].site);
    }
    return s + "}";
}

}  // namespace

void validate_insertions(const Circuit &c, const InsertionSet &ins) {
    if (ins.sites.size() != ins.on_projectors.size()) {
        throw Error(ErrorCode::InvalidArgument, "insertion sites and projectors differ in number");
    }
    int prev = 0;
    for (size_t k = 0; k < ins.size(); k++) {
        int site = ins.sites[k];
        if (site <= prev || site > c.num_sites()) {
            throw Error(ErrorCode::InvalidArgument,
                        "insertion sites must be strictly increasing within 1.." + std::to_string(c.num_sites()));
        }
        prev = site;
        const auto &p = ins.on_projectors[k];
        if (p.rows() != c.dim() || p.cols() != c.dim()) {
            throw Error(ErrorCode::DimMismatch, "insertion projector at site " + std::to_string(site) +
                                                    " does not match the circuit dimension");
        }
        if (!is_projector(p, kVanishes)) {
            throw Error(ErrorCode::NotProjector, "insertion at site " + std::to_string(site) + " is not a projector");
        }
    }
}

InsertionSet insertions_from_observables(const Circuit &c, const std::vector<int> &sites) {
    InsertionSet ins;
    ins.sites = sites;
    for (int site : sites) {
        if (site < 1 || site > c.num_sites()) {
            throw Error(ErrorCode::InvalidArgument, "insertion site " + std::to_string(site) + " out of range");
        }
        ins.on_projectors.push_back(c.observable(site));
    }
    validate_insertions(c, ins);
    return ins;
}

bool History::has_on() const {
    return std::find(symbols.begin(), symbols.end(), Symbol::N) != symbols.end();
}

std::string History::str() const {
    std::string s = "(";
    for (size_t k = 0; k < symbols.size(); k++) {
        s += k ? "," : "";
        s += symbols[k] == Symbol::N ? "N" : "F";
    }
    return s + ")";
}

std::vector<History> all_histories(size_t k) {
    if (k >= 63) {
        throw Error(ErrorCode::InvalidArgument, "too many insertions to enumerate histories");
    }
    std::vector<History> out;
    for (uint64_t mask = 0; mask < (uint64_t{1} << k); mask++) {
        History h;
        for (bool bit : mask_bits(k, mask)) {
            h.symbols.push_back(bit ? Symbol::N : Symbol::F);
        }
        out.push_back(std::move(h));
    }
    return out;
}

Complex history_amplitude(const Circuit &c, const InsertionSet &ins, const History &h) {
    validate_insertions(c, ins);
    if (h.symbols.size() != ins.size()) {
        throw Error(ErrorCode::InvalidArgument, "history length does not match the insertion set");
    }
    std::vector<COperator> off;
    std::vector<const COperator *> inserts(c.num_sites(), nullptr);
    off.reserve(ins.size());
    for (size_t k = 0; k < ins.size(); k++) {
        if (h.symbols[k] == Symbol::N) {
            inserts[ins.sites[k] - 1] = &ins.on_projectors[k];
        } else {
            off.push_back(identity(c.dim()) - ins.on_projectors[k]);
            inserts[ins.sites[k] - 1] = &off.back();
        }
    }
    return chained_amplitude(c, inserts);
}

HistoryVerdict is_counterfactual_histories(const Circuit &c, const InsertionSet &ins) {
    HistoryVerdict v;
    for (const auto &h : all_histories(ins.size())) {
        if (!h.has_on()) {
            continue;
        }
        Complex amp = history_amplitude(c, ins, h);
        if (std::abs(amp) > kVanishes) {
            v.counterfactual = false;
            v.witness = h;
            v.amplitude = amp;
            return v;
        }
    }
    return v;
}

WeakValueVerdict is_counterfactual_weakvalues(const Circuit &c, const InsertionSet &ins) {
    validate_insertions(c, ins);
    Complex f = transition_amplitude(c);
    if (std::abs(f) <= kDegenerateAmplitude) {
        throw Error(ErrorCode::DegeneratePostSelection, "post-selected outcome never occurs; weak values undefined");
    }
    WeakValueVerdict v;
    for (const auto &on : nonempty_subsets(ins.size())) {
        Complex wv = on_numerator(c, ins, on) / f;
        if (std::abs(wv) > kVanishes) {
            v.counterfactual = false;
            v.witness = subset_sites(ins, on);
            v.weak_value = wv;
            return v;
        }
    }
    return v;
}

bool check_equivalence_def1_def2(const Circuit &c, const InsertionSet &ins) {
    HistoryVerdict d1 = is_counterfactual_histories(c, ins);
    WeakValueVerdict d2 = is_counterfactual_weakvalues(c, ins);

    // Expanding each F = I - N turns a history amplitude into a signed sum of subset numerators.
    const size_t k = ins.size();
    std::vector<Complex> numerators(size_t{1} << k);
    for (uint64_t mask = 0; mask < numerators.size(); mask++) {
        numerators[mask] = on_numerator(c, ins, mask_bits(k, mask));
    }
    const auto histories = all_histories(k);
    for (uint64_t hmask = 0; hmask < histories.size(); hmask++) {
        const uint64_t free_bits = ~hmask & ((uint64_t{1} << k) - 1);
        Complex expanded = 0;
        // Walk every subset t of the F positions.
        for (uint64_t t = free_bits;; t = (t - 1) & free_bits) {
            double sign = (std::popcount(t) % 2) ? -1.0 : 1.0;
            expanded += sign * numerators[hmask | t];
            if (t == 0) {
                break;
            }
        }
        Complex direct = history_amplitude(c, ins, histories[hmask]);
        if (std::abs(direct - expanded) > kVanishes) {
            throw Error(ErrorCode::EquivalenceViolation,
                        "history " + histories[hmask].str() + " amplitude disagrees with its subset expansion");
        }
    }
    if (d1.counterfactual != d2.counterfactual) {
        throw Error(ErrorCode::EquivalenceViolation, std::string("histories say ") +
                                                         (d1.counterfactual ? "counterfactual" : "not counterfactual") +
                                                         " but weak values disagree");
    }
    return d1.counterfactual;
}

CounterfactualReport randomized_def3_test(const Circuit &c, const InsertionSet &ins, int trials, double g,
                                          uint64_t seed) {
    if (trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "need at least one trial");
    }
    if (!(g >= 0) || !std::isfinite(g)) {
        throw Error(ErrorCode::InvalidArgument, "coupling g must be a non-negative finite number");
    }
    CounterfactualReport rep;
    rep.histories = is_counterfactual_histories(c, ins);
    rep.weak_values = is_counterfactual_weakvalues(c, ins);
    rep.def1_holds = rep.histories.counterfactual;
    rep.def2_holds = rep.weak_values.counterfactual;

    const Complex f = transition_amplitude(c);
    rep.tol3 = 1e-8 * (1 + 1 / std::abs(f)) * g * g;
    rep.detection_threshold = 0;
    bool any_failing = false;
    for (const auto &on : nonempty_subsets(ins.size())) {
        double wv = std::abs(on_numerator(c, ins, on) / f);
        if (wv > kVanishes) {
            auto order = static_cast<double>(std::count(on.begin(), on.end(), true));
            double t = std::pow(g, order) * wv / 10;
            rep.detection_threshold = any_failing ? std::min(rep.detection_threshold, t) : t;
            any_failing = true;
        }
    }

    // Probe groups: every single insertion, every pair, and the full set.
    std::vector<std::vector<size_t>> groups;
    for (size_t i = 0; i < ins.size(); i++) {
        groups.push_back({i});
    }
    for (size_t i = 0; i < ins.size(); i++) {
        for (size_t j = i + 1; j < ins.size(); j++) {
            groups.push_back({i, j});
        }
    }
    if (ins.size() > 2) {
        std::vector<size_t> all(ins.size());
        for (size_t i = 0; i < all.size(); i++) {
            all[i] = i;
        }
        groups.push_back(all);
    }

    double max_response = 0;
    for (int t = 0; t < trials; t++) {
        std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(t)};
        std::mt19937_64 rng(seq);
        for (const auto &group : groups) {
            std::vector<WeakProbe> probes;
            for (size_t i : group) {
                probes.push_back({ins.sites[i], ins.on_projectors[i], random_hermitian(rng, kAncillaDim)});
            }
            COperator obs = random_hermitian(rng, kAncillaDim);
            CVector anc = random_state(rng, kAncillaDim);
            double r = std::abs(weak_interaction_response(c, probes, obs, anc, g));
            max_response = std::max(max_response, r);
            rep.def3_samples.push_back({"trial " + std::to_string(t) + " sites " + site_list(probes) +
                                            (probes.size() > 1 ? " shared ancilla" : ""),
                                        r});
        }
    }
    rep.def3_null = max_response <= rep.tol3;
    rep.def3_consistent = rep.def2_holds ? rep.def3_null : max_response > rep.detection_threshold;
    return rep;
}

bool determines_output(const Circuit &c_out0, const Circuit &c_out1) {
    constexpr double kOccurs = 1e-20;
    bool occurs0 = std::norm(transition_amplitude(c_out0)) > kOccurs;
    bool occurs1 = std::norm(transition_amplitude(c_out1)) > kOccurs;
    if (!occurs0 && !occurs1) {
        throw Error(ErrorCode::BothZero, "the outcome occurs for neither computer output");
    }
    return occurs0 != occurs1;
}

std::pair<Circuit, Circuit> interaction_free_pair() {
    const double r = 1 / std::sqrt(2.0);
    COperator splitter = identity(3);
    splitter.topLeftCorner(2, 2) << r, r, r, -r;
    COperator absorb = COperator::Zero(3, 3);
    absorb(2, 0) = 1;
    absorb(1, 1) = 1;
    absorb(0, 2) = 1;
    const int path_b[] = {0};
    COperator on_b = basis_projector(3, path_b);
    CVector psi_i = basis_vector(3, 0);
    CVector psi_f = basis_vector(3, 1);
    std::vector<std::string> labels{"B|D", "C|D'", "X"};
    Circuit open(psi_i, {{splitter, on_b}, {identity(3), identity(3)}}, splitter, psi_f, labels);
    Circuit blocked(psi_i, {{splitter, on_b}, {absorb, identity(3)}}, splitter, psi_f, labels);
    return {open, blocked};
}

}  // namespace wseq
