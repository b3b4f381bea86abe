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

#ifndef LIPKERN_HODGKIN_HPP
#define LIPKERN_HODGKIN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lipkern/monotone.hpp"

namespace lipkern::hodgkin {

/// Potassium-channel model constants and experiment layout. The gating
/// dynamics are xdot = alpha(u)(1 - x) - beta(u) x with x(0) = 0 and output
/// current y = g x^4 (u - u_bar). Voltages are membrane displacements in mV;
/// time is in ms, sampled at t_j = 0.5 j for j = 0..20.
struct Params {
    double g = 36.0;
    double u_bar = 12.0;
    int sample_count = 21;
    double sample_spacing = 0.5;
    /// Constant step levels for the experiments. The classic step-response
    /// series spans -6 mV down to -109 mV.
    std::vector<double> voltages = {-6.0,  -10.0, -19.0, -26.0,  -32.0,  -38.0,
                                    -51.0, -63.0, -76.0, -88.0,  -100.0, -109.0};

    Eigen::VectorXd time_grid() const;
};

/// Response of one constant-voltage experiment on the sampling grid.
struct StepResponse {
    double voltage = 0.0;
    Eigen::VectorXd x_traj; // gating variable, x(0) = 0
    Eigen::VectorXd y_traj; // current per unit area, g x^4 (u - u_bar)
};

/// Trajectory of a general-input simulation.
struct Trajectory {
    Eigen::VectorXd t;
    Eigen::VectorXd u;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

/// Opening rate 0.01 (u + 10) / (e^((u+10)/10) - 1). The removable
/// singularity at u = -10 is patched by the series
/// 0.1 (1 - w/20 + w^2/1200), w = u + 10, inside |w| < 1e-7; both branches
/// agree to 1e-12 at the switch radius.
double alpha(double u);

/// Closing rate 0.125 e^(u/80).
double beta(double u);

/// Exact step response: for constant u the gating ODE is linear, so
/// x(t) = x_inf (1 - e^-(alpha+beta) t) with x_inf = alpha/(alpha + beta).
StepResponse step_response_closed_form(double voltage, const Params& params);

/// Classical fixed-step RK4 integration of the gating ODE for an arbitrary
/// input signal. dt must divide the grid spacing.
Trajectory integrate_rk4(const std::function<double(double)>& input,
                         const Eigen::VectorXd& t_grid, double dt, const Params& params);

/// One experiment per voltage: input is the constant level repeated over the
/// grid, output the closed-form current samples. d = m = sample_count.
Dataset generate_dataset(const Params& params);

/// Piecewise-constant input with one switch: level_a on [0, t_switch),
/// level_b afterwards.
struct StepPair {
    double level_a = 0.0;
    double level_b = 0.0;
    double t_switch = 0.0;

    double operator()(double t) const { return t < t_switch ? level_a : level_b; }
    Eigen::VectorXd sample(const Eigen::VectorXd& t_grid) const;
};

/// A pair of inputs witnessing <u1 - u2, y1 - y2> < 0 for the simulated
/// state-space channel, i.e. a monotonicity violation of the model itself.
struct NonmonotoneWitness {
    StepPair u1;
    StepPair u2;
    double inner = 0.0;
    long trial = 0;
    std::uint64_t seed = 0;
};

/// Randomized search for a monotonicity violation of the raw state-space
/// model: samples pairs of one-switch step inputs with levels in the voltage
/// range, simulates both with RK4, and returns the first pair whose sampled
/// trajectories have a negative increment inner product.
std::optional<NonmonotoneWitness> find_nonmonotone_pair(const Params& params,
                                                        std::uint64_t seed, long max_trials);

/// Computes the increment inner product <u1 - u2, y1 - y2> for two step
/// inputs under RK4 simulation; negative values witness non-monotonicity.
double increment_inner(const Params& params, const StepPair& u1, const StepPair& u2);

struct ReproduceConfig {
    KernelSpec kernel = KernelSpec::scaled_laplacian();
    double gamma = 4.441e-4;
    /// Identification runs in normalized units: u is divided by
    /// unit_shrink * max|u| and y by unit_shrink * max|y|. Positive scalar
    /// rescaling of either channel preserves monotonicity, so the identified
    /// operator transfers back to model units. The shrink factor sets the
    /// regularization-to-spectrum ratio; at the default, the classic
    /// 12-level series certifies a contraction constant of 0.990 at the
    /// default gamma.
    double unit_shrink = 4.1;
    PicardOptions picard;
    long monotonicity_trials = 1000;
    std::uint64_t seed = 0;
};

struct VoltageFit {
    double voltage = 0.0;
    Eigen::VectorXd y_data;  // raw units
    Eigen::VectorXd y_model; // raw units
    double rmse = 0.0;
    double range = 0.0; // max - min of the data trajectory
};

struct ReproduceReport {
    double input_scale = 1.0;  // u is divided by this before identification
    double output_scale = 1.0; // y is divided by this
    double gamma = 0.0;
    double rkhs_norm = 0.0;    // norm of the fitted contraction S
    double fit_rmse = 0.0;     // over all samples, model units
    bool monotonicity_pass = false;
    std::vector<VoltageFit> per_voltage;
    bool bounds_pass = false;  // frozen regression bounds, see reproduce_paper
    std::vector<std::string> bound_failures;
};

/// Full identification pipeline on the generated step-response data:
/// normalize the channels, scatter, fit the contraction S at the configured
/// gamma, then Picard-simulate the monotone operator back at every training
/// input.
///
/// The report enforces frozen regression bounds (values fixed from the
/// pipeline's measured behavior on the default configuration): the
/// contraction norm must lie in [0.94, 1.00]; the monotonicity sweep must
/// pass; every per-voltage RMSE must stay below 2% of the global output
/// range; and the relative misfit must concentrate on the small-magnitude
/// experiments, with the large-magnitude ones reconstructed to 2% of their
/// own range.
ReproduceReport reproduce_paper(const Params& params, const ReproduceConfig& config = {});

} // namespace lipkern::hodgkin

#endif // LIPKERN_HODGKIN_HPP
