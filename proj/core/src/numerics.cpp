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

#include "lipkern/numerics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lipkern {

namespace {

constexpr double kPsdClampRel = 1e-8;

std::string dim_string(Eigen::Index r, Eigen::Index c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

} // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd entries, double sym_tol) {
    if (entries.rows() != entries.cols()) {
        throw DimensionError("SymMatrix: expected a square matrix, got " +
                             dim_string(entries.rows(), entries.cols()));
    }
    if (entries.rows() == 0) {
        throw DimensionError("SymMatrix: dimension must be positive");
    }
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= sym_tol)) {
        std::ostringstream os;
        os << "SymMatrix: asymmetry " << asym << " exceeds tolerance " << sym_tol;
        throw DimensionError(os.str());
    }
    entries_ = 0.5 * (entries + entries.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index dim) {
    return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::zero(Eigen::Index dim) {
    return SymMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

EigDecomp eig_sym(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error("eig_sym: eigendecomposition did not converge");
    }
    return EigDecomp{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd solve_spd(const SymMatrix& a, double shift, const Eigen::MatrixXd& b) {
    if (shift < 0.0) {
        throw std::invalid_argument("solve_spd: shift must be nonnegative");
    }
    if (b.rows() != a.dim()) {
        throw DimensionError("solve_spd: rhs has " + std::to_string(b.rows()) +
                             " rows, matrix has dimension " + std::to_string(a.dim()));
    }

    Eigen::MatrixXd shifted = a.matrix();
    shifted.diagonal().array() += shift;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
        return llt.solve(b);
    }

    // Cholesky breakdown: fall back to the spectral route with clamping.
    const EigDecomp eig = eig_sym(a);
    const double lam_max = eig.eigenvalues[a.dim() - 1];
    const double lam_min = eig.eigenvalues[0];
    const double clamp_floor = -kPsdClampRel * std::max(1.0, lam_max);
    if (lam_min < clamp_floor) {
        std::ostringstream os;
        os << "solve_spd: matrix is not PSD, eigenvalue " << lam_min
           << " below tolerance " << clamp_floor;
        throw NotPsdError(os.str(), lam_min);
    }
    Eigen::VectorXd lambda = eig.eigenvalues.cwiseMax(0.0);
    if (shift == 0.0 && lambda.minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "solve_spd: matrix is numerically singular with shift 0, smallest eigenvalue "
           << lam_min;
        throw SingularMatrixError(os.str(), lam_min);
    }
    lambda.array() += shift;
    return eig.eigenvectors *
           lambda.cwiseInverse().asDiagonal() *
           (eig.eigenvectors.transpose() * b);
}

Eigen::VectorXd solve_spd(const SymMatrix& a, double shift, const Eigen::VectorXd& b) {
    Eigen::MatrixXd x = solve_spd(a, shift, Eigen::MatrixXd(b));
    return Eigen::VectorXd(x.col(0));
}

SymMatrix sqrt_psd(const SymMatrix& a) {
    const EigDecomp eig = eig_sym(a);
    const double lam_max = eig.eigenvalues[a.dim() - 1];
    const double lam_min = eig.eigenvalues[0];
    const double clamp_floor = -kPsdClampRel * std::max(1.0, lam_max);
    if (lam_min < clamp_floor) {
        std::ostringstream os;
        os << "sqrt_psd: matrix is not PSD, eigenvalue " << lam_min
           << " below tolerance " << clamp_floor;
        throw NotPsdError(os.str(), lam_min);
    }
    const Eigen::VectorXd roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd b = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.transpose();
    b = 0.5 * (b + b.transpose());
    return SymMatrix(std::move(b));
}

double spectral_norm(const SymMatrix& a) {
    const EigDecomp eig = eig_sym(a);
    return eig.eigenvalues.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const SymMatrix& a) {
    return eig_sym(a).eigenvalues[0];
}

} // namespace lipkern
