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

#include "wseq/circuit.h"

#include <cmath>
#include <cstring>
#include <utility>

#include "wseq/errors.h"

namespace wseq {

namespace {

constexpr double kStructureTol = 1e-9;

void check_operator(const COperator &m, int dim, const std::string &what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(ErrorCode::DimMismatch, what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                                ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    for (Eigen::Index i = 0; i < m.size(); i++) {
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) {
            throw Error(ErrorCode::InvalidArgument, what + " has a non-finite entry");
        }
    }
}

void check_unitary(const COperator &u, int dim, const std::string &what) {
    check_operator(u, dim, what);
    if (!is_unitary(u, kStructureTol)) {
        COperator gram = u.adjoint() * u - COperator::Identity(dim, dim);
        throw Error(ErrorCode::NotUnitary, what + " is not unitary (max |U^dag U - I| = " +
                                               std::to_string(max_abs_entry(gram)) + ")");
    }
}

void check_observable(const COperator &a, int dim, const std::string &what) {
    check_operator(a, dim, what);
    if (!is_hermitian(a, kStructureTol)) {
        throw Error(ErrorCode::NotHermitian, what + " is not Hermitian");
    }
}

void fnv_bytes(uint64_t &h, const void *data, size_t n) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (size_t k = 0; k < n; k++) {
        h ^= p[k];
        h *= 1099511628211ULL;
    }
}

void fnv_complex(uint64_t &h, Complex z) {
    double parts[2] = {z.real(), z.imag()};
    // Normalize -0.0 so that numerically equal circuits hash equally.
    for (double &x : parts) {
        if (x == 0) {
            x = 0;
        }
    }
    fnv_bytes(h, parts, sizeof(parts));
}

void fnv_matrix(uint64_t &h, const COperator &m) {
    for (Eigen::Index i = 0; i < m.size(); i++) {
        fnv_complex(h, m.data()[i]);
    }
}

}  // namespace

Circuit::Circuit(CVector psi_i, std::vector<Stage> stages, COperator u_final, CVector psi_f,
                 std::vector<std::string> labels)
    : psi_i_(std::move(psi_i)),
      stages_(std::move(stages)),
      u_final_(std::move(u_final)),
      psi_f_(std::move(psi_f)),
      labels_(std::move(labels)) {
    const int d = dim();
    if (d <= 0) {
        throw Error(ErrorCode::DimMismatch, "circuit dimension must be positive");
    }
    if (psi_f_.size() != d) {
        throw Error(ErrorCode::DimMismatch, "post-selected state has " + std::to_string(psi_f_.size()) +
                                                " entries, expected " + std::to_string(d));
    }
    if (std::abs(psi_i_.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::NotNormalized, "initial state has norm " + std::to_string(psi_i_.norm()));
    }
    if (psi_f_.norm() == 0) {
        throw Error(ErrorCode::InvalidArgument, "post-selected state is zero");
    }
    for (size_t k = 0; k < stages_.size(); k++) {
        std::string site = std::to_string(k + 1);
        check_unitary(stages_[k].unitary, d, "U_" + site);
        check_observable(stages_[k].observable, d, "observable at site " + site);
    }
    check_unitary(u_final_, d, "U_" + std::to_string(stages_.size() + 1));
    if (!labels_.empty() && static_cast<int>(labels_.size()) != d) {
        throw Error(ErrorCode::DimMismatch,
                    "expected " + std::to_string(d) + " basis labels, got " + std::to_string(labels_.size()));
    }
}

const COperator &Circuit::unitary(int site) const {
    if (site < 1 || site > num_sites() + 1) {
        throw Error(ErrorCode::InvalidArgument, "unitary index " + std::to_string(site) + " out of range");
    }
    return site == num_sites() + 1 ? u_final_ : stages_[site - 1].unitary;
}

const COperator &Circuit::observable(int site) const {
    if (site < 1 || site > num_sites()) {
        throw Error(ErrorCode::InvalidArgument, "site " + std::to_string(site) + " out of range 1.." +
                                                    std::to_string(num_sites()));
    }
    return stages_[site - 1].observable;
}

Circuit Circuit::with_observable(int site, COperator observable) const {
    (void)this->observable(site);
    auto stages = stages_;
    stages[site - 1].observable = std::move(observable);
    return Circuit(psi_i_, std::move(stages), u_final_, psi_f_, labels_);
}

Circuit Circuit::with_psi_i(CVector psi_i) const {
    return Circuit(std::move(psi_i), stages_, u_final_, psi_f_, labels_);
}

Circuit Circuit::with_psi_f(CVector psi_f) const {
    return Circuit(psi_i_, stages_, u_final_, std::move(psi_f), labels_);
}

uint64_t Circuit::fingerprint() const {
    uint64_t h = 14695981039346656037ULL;
    int32_t header[2] = {dim(), num_sites()};
    fnv_bytes(h, header, sizeof(header));
    for (Eigen::Index i = 0; i < psi_i_.size(); i++) {
        fnv_complex(h, psi_i_(i));
    }
    for (const auto &s : stages_) {
        fnv_matrix(h, s.unitary);
        fnv_matrix(h, s.observable);
    }
    fnv_matrix(h, u_final_);
    for (Eigen::Index i = 0; i < psi_f_.size(); i++) {
        fnv_complex(h, psi_f_(i));
    }
    return h;
}

bool Circuit::operator==(const Circuit &other) const {
    if (dim() != other.dim() || num_sites() != other.num_sites() || labels_ != other.labels_) {
        return false;
    }
    if (psi_i_ != other.psi_i_ || psi_f_ != other.psi_f_ || u_final_ != other.u_final_) {
        return false;
    }
    for (size_t k = 0; k < stages_.size(); k++) {
        if (stages_[k].unitary != other.stages_[k].unitary || stages_[k].observable != other.stages_[k].observable) {
            return false;
        }
    }
    return true;
}

IndexSubset::IndexSubset(std::initializer_list<int> indices) : IndexSubset(std::vector<int>(indices)) {
}

IndexSubset::IndexSubset(std::vector<int> indices) : indices_(std::move(indices)) {
    for (size_t k = 0; k < indices_.size(); k++) {
        if (indices_[k] < 1) {
            throw Error(ErrorCode::InvalidArgument, "site indices are 1-based");
        }
        if (k > 0 && indices_[k] <= indices_[k - 1]) {
            throw Error(ErrorCode::InvalidArgument, "site indices must be strictly increasing");
        }
    }
}

bool IndexSubset::contains(int site) const {
    for (int i : indices_) {
        if (i == site) {
            return true;
        }
    }
    return false;
}

IndexSubset IndexSubset::without(int site) const {
    std::vector<int> kept;
    for (int i : indices_) {
        if (i != site) {
            kept.push_back(i);
        }
    }
    return IndexSubset(std::move(kept));
}

std::vector<IndexSubset> subsets_up_to(int n, int max_order) {
    std::vector<IndexSubset> out;
    std::vector<int> current;
    // Depth-first generation visits prefixes before extensions, which is lexicographic order.
    auto recurse = [&](auto &self, int next) -> void {
        out.emplace_back(current);
        if (static_cast<int>(current.size()) == max_order) {
            return;
        }
        for (int k = next; k <= n; k++) {
            current.push_back(k);
            self(self, k + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 1);
    return out;
}

Complex chained_amplitude(const Circuit &c, std::span<const COperator *const> inserts) {
    if (static_cast<int>(inserts.size()) != c.num_sites()) {
        throw Error(ErrorCode::DimMismatch, "expected " + std::to_string(c.num_sites()) + " insertion slots, got " +
                                                std::to_string(inserts.size()));
    }
    CVector state = c.psi_i();
    for (int k = 1; k <= c.num_sites(); k++) {
        state = c.unitary(k) * state;
        if (const COperator *x = inserts[k - 1]) {
            state = wseq::apply(*x, state);
        }
    }
    state = c.u_final() * state;
    return c.psi_f().dot(state);
}

Complex transition_amplitude(const Circuit &c) {
    std::vector<const COperator *> none(c.num_sites(), nullptr);
    return chained_amplitude(c, none);
}

Circuit relabeled(const Circuit &c, std::span<const int> perm) {
    const int d = c.dim();
    if (static_cast<int>(perm.size()) != d) {
        throw Error(ErrorCode::DimMismatch, "permutation length does not match circuit dimension");
    }
    COperator p = COperator::Zero(d, d);
    std::vector<bool> seen(d, false);
    for (int i = 0; i < d; i++) {
        if (perm[i] < 0 || perm[i] >= d || seen[perm[i]]) {
            throw Error(ErrorCode::InvalidArgument, "not a permutation");
        }
        seen[perm[i]] = true;
        p(i, perm[i]) = 1.0;
    }
    auto conj = [&](const COperator &m) -> COperator {
        return p * m * p.transpose();
    };
    std::vector<Stage> stages;
    for (const auto &s : c.stages()) {
        stages.push_back({conj(s.unitary), conj(s.observable)});
    }
    std::vector<std::string> labels;
    if (!c.labels().empty()) {
        for (int i = 0; i < d; i++) {
            labels.push_back(c.labels()[perm[i]]);
        }
    }
    return Circuit(p * c.psi_i(), std::move(stages), conj(c.u_final()), p * c.psi_f(), std::move(labels));
}

Circuit double_interferometer_with(const COperator &first, const COperator &second) {
    const double r = std::sqrt(0.5);
    COperator splitter(2, 2);
    splitter << r, r, r, -r;
    // U_3|E> = (-|D> + |D'>)/sqrt2 and U_3|F> = (|D> + |D'>)/sqrt2 with D = index 0.
    COperator last(2, 2);
    last << -r, r, r, r;
    std::vector<Stage> stages{{splitter, first}, {splitter, second}};
    return Circuit(basis_vector(2, 0), std::move(stages), last, basis_vector(2, 0), {"B|E|D", "C|F|D'"});
}

Circuit builtin_double_interferometer() {
    const int b[] = {0};
    const int f[] = {1};
    return double_interferometer_with(basis_projector(2, b), basis_projector(2, f));
}

}  // namespace wseq
