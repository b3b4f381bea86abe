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

#ifndef LIPKERN_ESTIMATOR_HPP
#define LIPKERN_ESTIMATOR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lipkern/kernels.hpp"
#include "lipkern/numerics.hpp"
#include "lipkern/sampling.hpp"

namespace lipkern {

/// Paired input/output samples. Inputs live in R^d, outputs in R^m; all
/// samples of a dataset share those dimensions. Duplicate inputs are allowed
/// (regularized fits stay well posed).
struct Dataset {
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> outputs;

    int size() const { return static_cast<int>(inputs.size()); }
    int input_dim() const { return inputs.empty() ? 0 : static_cast<int>(inputs.front().size()); }
    int output_dim() const {
        return outputs.empty() ? 0 : static_cast<int>(outputs.front().size());
    }

    /// Throws unless the dataset is nonempty and dimensionally consistent.
    void validate() const;
};

/// The n*m x n*m block matrix with (i,j) block K(u_i, u_j).
///
/// Kernels acting as scalar * identity are stored through their n x n scalar
/// base; solves and quadratic forms then run per output coordinate on the
/// small system. dense() materializes the full matrix in either case.
class GramMatrix {
public:
    static GramMatrix from_dense(SymMatrix dense, int n, int m);
    static GramMatrix from_scalar_base(SymMatrix base, int m);

    int n() const { return n_; }
    int m() const { return m_; }
    int dim() const { return n_ * m_; }
    bool is_kronecker() const { return base_.has_value(); }
    const SymMatrix& base() const;

    /// Full n*m x n*m matrix (built on demand on the Kronecker path).
    SymMatrix dense() const;

    double trace() const;

    /// Solves (G + gamma I) x = ybar.
    Eigen::VectorXd solve_shifted(double gamma, const Eigen::VectorXd& ybar) const;

    /// Quadratic form cbar^T G cbar.
    double quad(const Eigen::VectorXd& cbar) const;

private:
    GramMatrix() = default;
    int n_ = 0;
    int m_ = 0;
    std::optional<SymMatrix> base_;
    std::optional<SymMatrix> dense_;
};

/// Kernel expansion fitted by regularized least squares:
/// H(u) = sum_j K(u, u_j) c_j.
struct FittedModel {
    KernelSpec kernel;
    std::vector<Eigen::VectorXd> train_inputs;
    std::vector<Eigen::VectorXd> coefficients;
    double gamma = 0.0;
    double rkhs_norm = 0.0;
    /// Present exactly when the kernel carries the nonexpansive certificate;
    /// then the model is Lipschitz with this constant (== rkhs_norm).
    std::optional<double> lipschitz_certified;

    int input_dim() const {
        return train_inputs.empty() ? 0 : static_cast<int>(train_inputs.front().size());
    }
    int output_dim() const {
        return coefficients.empty() ? 0 : static_cast<int>(coefficients.front().size());
    }
};

struct TuneOptions {
    double tol = 1e-6; // relative width of the final gamma bracket
    int max_iter = 200;
};

struct TuneResult {
    double gamma = 0.0;
    double achieved_norm = 0.0;
};

struct LipschitzCheck {
    double max_ratio = 0.0;
    bool pass = false;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// Fills the Gram blocks by kernel evaluation. Scalar-times-identity kernels
/// are detected and stored through their n x n base.
GramMatrix assemble_gram(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& inputs,
                         int output_dim);

/// Regularized least-squares fit: solves (G + gamma I) cbar = ybar and
/// records the achieved norm sqrt(cbar^T G cbar).
FittedModel fit(const KernelSpec& spec, const Dataset& data, double gamma);

/// Evaluates the kernel expansion at u.
Eigen::VectorXd predict(const FittedModel& model, const Eigen::VectorXd& u);

/// Norm of the regularized solution for the given data: computed as
/// sqrt(max(0, cbar^T G cbar)) with cbar = (G + gamma I)^-1 ybar, which
/// equals |G^(1/2) (G + gamma I)^-1 ybar|.
double rkhs_norm_at(const GramMatrix& gram, const Eigen::VectorXd& ybar, double gamma);

/// Finds the smallest gamma (to relative tolerance) whose solution norm is
/// at most ell, by bracketing and bisection on log gamma. The norm is
/// nonincreasing in gamma, so the bracket always closes; if even the floor
/// value 1e-12 * trace(G)/dim satisfies the budget, the floor is returned.
TuneResult tune_gamma(const GramMatrix& gram, const Eigen::VectorXd& ybar, double ell,
                      const TuneOptions& opts = {});

/// Samples input pairs and checks the difference quotient
/// |H(x) - H(y)| / |x - y| against the certified constant. A failure here is
/// a defect, not a property of the model.
LipschitzCheck empirical_lipschitz_check(const FittedModel& model, const InputSampler& sampler,
                                         long trials, std::uint64_t seed);

} // namespace lipkern

#endif // LIPKERN_ESTIMATOR_HPP
