/*
 * Copyright 2026 The lipkern authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIPKERN_NUMERICS_HPP
#define LIPKERN_NUMERICS_HPP

#include <Eigen/Core>

#include "lipkern/errors.hpp"

namespace lipkern {

/// Dense symmetric matrix. Construction checks |A - A^T|_max <= sym_tol
/// (absolute) and then stores the symmetrized (A + A^T)/2, so downstream
/// code can rely on exact symmetry.
class SymMatrix {
public:
    explicit SymMatrix(Eigen::MatrixXd entries, double sym_tol = 1e-12);

    static SymMatrix identity(Eigen::Index dim);
    static SymMatrix zero(Eigen::Index dim);

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
};

/// Spectral factorization A = Q diag(eigenvalues) Q^T with eigenvalues
/// ascending and Q orthonormal.
struct EigDecomp {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

/// Symmetric eigendecomposition. Deterministic (no randomized pivoting),
/// so repeated runs on one platform give identical results.
EigDecomp eig_sym(const SymMatrix& a);

/// Solves (A + shift I) x = b for symmetric PSD A and shift >= 0.
///
/// Uses a Cholesky factorization of the shifted matrix; if that breaks down
/// the solve falls back to the eigendecomposition with negative eigenvalues
/// clamped to zero. Throws SingularMatrixError when shift == 0 and A is
/// numerically singular, NotPsdError when A has an eigenvalue below
/// -1e-8 * max(1, lambda_max).
Eigen::VectorXd solve_spd(const SymMatrix& a, double shift, const Eigen::VectorXd& b);

/// Multi-RHS variant; solves the same system for every column of b.
Eigen::MatrixXd solve_spd(const SymMatrix& a, double shift, const Eigen::MatrixXd& b);

/// Symmetric PSD square root: returns B with B B = A. Eigenvalues in
/// [-1e-8 * max(1, lambda_max), 0) are clamped to zero before the spectral
/// square root; anything below that raises NotPsdError.
SymMatrix sqrt_psd(const SymMatrix& a);

/// Largest absolute eigenvalue.
double spectral_norm(const SymMatrix& a);

/// Smallest eigenvalue.
double min_eigenvalue(const SymMatrix& a);

} // namespace lipkern

#endif // LIPKERN_NUMERICS_HPP
