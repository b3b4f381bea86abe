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

#ifndef LIPKERN_MONOTONE_HPP
#define LIPKERN_MONOTONE_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lipkern/estimator.hpp"

namespace lipkern {

/// Data after the scattering change of variables v = u + y, z = u - y.
/// A map y = R(u) corresponds exactly to z = S(v) for the transformed
/// operator S = (I - R)(I + R)^-1, and vice versa.
struct ScatteredData {
    std::vector<Eigen::VectorXd> v;
    std::vector<Eigen::VectorXd> z;
};

struct PicardOptions {
    double tol = 1e-10;
    long max_iter = 100000;
};

/// A monotone operator R represented implicitly through a fitted contraction
/// S with certified Lipschitz constant at most ell < 1. Outputs of R are
/// produced by Picard iteration (see simulate).
struct MonotoneModel {
    FittedModel s_model;
    double ell = 0.0;
    PicardOptions picard;
};

struct SimulateResult {
    Eigen::VectorXd y_star;
    long iters = 0;
    double residual = 0.0; // last step norm
    std::vector<Eigen::VectorXd> trace; // iterates y^0..y^K when requested
};

struct MonotonicityCheck {
    double min_inner = 0.0;
    bool pass = false;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// Elementwise v_i = u_i + y_i, z_i = u_i - y_i. Requires input and output
/// dimensions to match.
ScatteredData scatter(const Dataset& data);

/// Inverse change of variables, u = (v + z)/2 and y = (v - z)/2, evaluated
/// in that fixed order.
Dataset unscatter(const ScatteredData& scattered);

/// Validates the contraction budget and wraps the pieces into a model.
/// Requires s_model.lipschitz_certified <= ell < 1 and square dimensions.
MonotoneModel make_monotone_model(FittedModel s_model, double ell, PicardOptions picard = {});

/// Identifies a monotone operator: scatters the data, tunes gamma so the
/// fitted S has norm at most ell, and fits S on (v_i, z_i). The kernel must
/// carry the nonexpansive certificate and ell must lie in (0, 1).
MonotoneModel fit_monotone(const KernelSpec& spec, const Dataset& data, double ell,
                           PicardOptions picard = {});

/// Evaluates y = R(u_star) by the Picard iteration
/// y^{k+1} = u_star - S(u_star + y^k), stopping once the step norm is below
/// tol * (1 - ell) / max(ell, 1e-12), which bounds the distance to the fixed
/// point by tol. Throws ConvergenceError when max_iter is reached.
SimulateResult simulate(const MonotoneModel& model, const Eigen::VectorXd& u_star,
                        const Eigen::VectorXd& y0, bool record_trace = false);

/// y0 defaults to zero.
SimulateResult simulate(const MonotoneModel& model, const Eigen::VectorXd& u_star);

/// Samples input pairs, simulates R at both, and checks
/// <x - y, R(x) - R(y)> >= -1e-8 |x - y| (|R(x)| + |R(y)| + 1).
MonotonicityCheck monotonicity_check(const MonotoneModel& model, const InputSampler& sampler,
                                     long trials, std::uint64_t seed);

} // namespace lipkern

#endif // LIPKERN_MONOTONE_HPP
