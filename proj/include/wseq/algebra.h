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

#ifndef WSEQ_ALGEBRA_H
#define WSEQ_ALGEBRA_H

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wseq {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using COperator = Eigen::MatrixXcd;

/// Default absolute tolerance for complex scalar comparisons.
inline constexpr double kScalarTol = 1e-10;

/// Spectral data of a Hermitian operator with degenerate eigenvalues merged.
///
/// `eigenvalues` is strictly increasing and `projectors[k]` is the orthogonal
/// projector onto the eigenspace of `eigenvalues[k]`.
struct EigenSystem {
    std::vector<double> eigenvalues;
    std::vector<COperator> projectors;

    size_t size() const {
        return eigenvalues.size();
    }
};

/// Largest entry modulus.
double max_abs_entry(const COperator &m);

bool is_unitary(const COperator &m, double tol);
bool is_hermitian(const COperator &m, double tol);
/// Hermitian and idempotent within tol.
bool is_projector(const COperator &m, double tol);

/// Merge threshold used when the caller does not choose one: 1e-8 * (spectral range + 1).
double default_degeneracy_tol(const COperator &a);

/// Hermitian eigendecomposition with degeneracy merging.
/// Throws Error(NotHermitian) if `a` is not Hermitian within 1e-10.
EigenSystem eig_hermitian(const COperator &a, double degeneracy_tol);
EigenSystem eig_hermitian(const COperator &a);

/// Checked linear-algebra primitives; throw Error(DimMismatch) on bad shapes.
CVector apply(const COperator &m, const CVector &v);
/// Conjugate-linear in the first argument.
Complex inner(const CVector &u, const CVector &v);
/// Returns m * n (n acts first).
COperator compose(const COperator &m, const COperator &n);

COperator identity(int dim);
CVector basis_vector(int dim, int index);
/// Sum of the projectors onto the listed basis states.
COperator basis_projector(int dim, std::span<const int> indices);
COperator rank_one_projector(const CVector &v);
COperator kron(const COperator &a, const COperator &b);

/// exp(-i t H) for Hermitian H, through its eigendecomposition.
COperator unitary_exp(const COperator &h, double t);

}  // namespace wseq

#endif
