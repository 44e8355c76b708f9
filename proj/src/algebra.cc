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

#include "wseq/algebra.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "wseq/errors.h"

namespace wseq {

namespace {

void require_square(const COperator &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimMismatch, std::string(what) + " must be square, got " + std::to_string(m.rows()) +
                                                "x" + std::to_string(m.cols()));
    }
}

}  // namespace

double max_abs_entry(const COperator &m) {
    double best = 0;
    for (Eigen::Index i = 0; i < m.size(); i++) {
        best = std::max(best, std::abs(m.data()[i]));
    }
    return best;
}

bool is_unitary(const COperator &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    COperator gram = m.adjoint() * m;
    return max_abs_entry(gram - COperator::Identity(m.rows(), m.cols())) <= tol;
}

bool is_hermitian(const COperator &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return max_abs_entry(m - m.adjoint()) <= tol;
}

bool is_projector(const COperator &m, double tol) {
    return is_hermitian(m, tol) && max_abs_entry(m * m - m) <= tol;
}

double default_degeneracy_tol(const COperator &a) {
    Eigen::SelfAdjointEigenSolver<COperator> solver(a, Eigen::EigenvaluesOnly);
    const auto &ev = solver.eigenvalues();
    double range = ev.size() ? ev(ev.size() - 1) - ev(0) : 0.0;
    return 1e-8 * (range + 1);
}

EigenSystem eig_hermitian(const COperator &a, double degeneracy_tol) {
    require_square(a, "eig_hermitian operand");
    if (!is_hermitian(a, 1e-10)) {
        throw Error(ErrorCode::NotHermitian,
                    "operator deviates from its adjoint by " + std::to_string(max_abs_entry(a - a.adjoint())));
    }
    // Symmetrize so the solver only sees the Hermitian part.
    COperator h = (a + a.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<COperator> solver(h);
    const auto &values = solver.eigenvalues();
    const auto &vectors = solver.eigenvectors();

    EigenSystem result;
    Eigen::Index k = 0;
    const Eigen::Index n = values.size();
    while (k < n) {
        // Eigenvalues come back sorted ascending; absorb neighbors within tolerance of the cluster start.
        Eigen::Index end = k + 1;
        while (end < n && values(end) - values(end - 1) <= degeneracy_tol) {
            end++;
        }
        double sum = 0;
        COperator proj = COperator::Zero(h.rows(), h.cols());
        for (Eigen::Index j = k; j < end; j++) {
            sum += values(j);
            proj += vectors.col(j) * vectors.col(j).adjoint();
        }
        result.eigenvalues.push_back(sum / static_cast<double>(end - k));
        result.projectors.push_back(std::move(proj));
        k = end;
    }
    return result;
}

EigenSystem eig_hermitian(const COperator &a) {
    require_square(a, "eig_hermitian operand");
    if (!is_hermitian(a, 1e-10)) {
        throw Error(ErrorCode::NotHermitian,
                    "operator deviates from its adjoint by " + std::to_string(max_abs_entry(a - a.adjoint())));
    }
    return eig_hermitian(a, default_degeneracy_tol((a + a.adjoint()) * 0.5));
}

CVector apply(const COperator &m, const CVector &v) {
    if (m.cols() != v.size()) {
        throw Error(ErrorCode::DimMismatch, "operator has " + std::to_string(m.cols()) + " columns, vector has " +
                                                std::to_string(v.size()) + " entries");
    }
    return m * v;
}

Complex inner(const CVector &u, const CVector &v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimMismatch,
                    "inner product of vectors of size " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
    }
    return u.dot(v);
}

COperator compose(const COperator &m, const COperator &n) {
    if (m.cols() != n.rows()) {
        throw Error(ErrorCode::DimMismatch, "cannot compose " + std::to_string(m.rows()) + "x" +
                                                std::to_string(m.cols()) + " with " + std::to_string(n.rows()) + "x" +
                                                std::to_string(n.cols()));
    }
    return m * n;
}

COperator identity(int dim) {
    return COperator::Identity(dim, dim);
}

CVector basis_vector(int dim, int index) {
    if (index < 0 || index >= dim) {
        throw Error(ErrorCode::DimMismatch, "basis index " + std::to_string(index) + " out of range for dim " +
                                                std::to_string(dim));
    }
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

COperator basis_projector(int dim, std::span<const int> indices) {
    COperator p = COperator::Zero(dim, dim);
    for (int i : indices) {
        if (i < 0 || i >= dim) {
            throw Error(ErrorCode::DimMismatch,
                        "basis index " + std::to_string(i) + " out of range for dim " + std::to_string(dim));
        }
        p(i, i) = 1.0;
    }
    return p;
}

COperator rank_one_projector(const CVector &v) {
    double n2 = v.squaredNorm();
    if (n2 == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot project onto the zero vector");
    }
    return v * v.adjoint() / n2;
}

COperator kron(const COperator &a, const COperator &b) {
    COperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

COperator unitary_exp(const COperator &h, double t) {
    require_square(h, "generator");
    if (!is_hermitian(h, 1e-9)) {
        throw Error(ErrorCode::NotHermitian, "generator of unitary_exp is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<COperator> solver((h + h.adjoint()) * 0.5);
    const auto &values = solver.eigenvalues();
    const auto &vectors = solver.eigenvectors();
    CVector phases(values.size());
    for (Eigen::Index k = 0; k < values.size(); k++) {
        phases(k) = std::polar(1.0, -t * values(k));
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
}

}  // namespace wseq
