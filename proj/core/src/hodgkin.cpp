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

#include "lipkern/hodgkin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lipkern::hodgkin {

namespace {

// Frozen regression bounds for reproduce_paper, fixed from the measured
// behavior of the default configuration.
constexpr double kNormBandLo = 0.94;
constexpr double kNormBandHi = 1.00;
constexpr double kGlobalRmseFraction = 0.02; // per-voltage RMSE / global range
constexpr double kLargeRmseFraction = 0.02;  // RMSE / own range, large experiments

double current(const Params& params, double x, double u) {
    const double x2 = x * x;
    return params.g * x2 * x2 * (u - params.u_bar);
}

double gating_rate(double u, double x) {
    return alpha(u) * (1.0 - x) - beta(u) * x;
}

} // namespace

Eigen::VectorXd Params::time_grid() const {
    Eigen::VectorXd t(sample_count);
    for (int j = 0; j < sample_count; ++j) t[j] = sample_spacing * j;
    return t;
}

double alpha(double u) {
    const double w = u + 10.0;
    if (std::abs(w) < 1e-7) {
        return 0.1 * (1.0 - w / 20.0 + w * w / 1200.0);
    }
    return 0.01 * w / std::expm1(w / 10.0);
}

double beta(double u) {
    return 0.125 * std::exp(u / 80.0);
}

StepResponse step_response_closed_form(double voltage, const Params& params) {
    const double a = alpha(voltage);
    const double b = beta(voltage);
    const double rate = a + b;
    const double x_inf = a / rate;
    const Eigen::VectorXd t = params.time_grid();

    StepResponse response;
    response.voltage = voltage;
    response.x_traj.resize(t.size());
    response.y_traj.resize(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) {
        const double x = x_inf * (1.0 - std::exp(-rate * t[j]));
        response.x_traj[j] = x;
        response.y_traj[j] = current(params, x, voltage);
    }
    return response;
}

Trajectory integrate_rk4(const std::function<double(double)>& input,
                         const Eigen::VectorXd& t_grid, double dt, const Params& params) {
    if (t_grid.size() < 1) throw std::invalid_argument("integrate_rk4 requires a nonempty grid");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4 requires dt > 0");

    Trajectory traj;
    traj.t = t_grid;
    traj.u.resize(t_grid.size());
    traj.x.resize(t_grid.size());
    traj.y.resize(t_grid.size());

    double x = 0.0;
    double t = t_grid[0];
    traj.u[0] = input(t);
    traj.x[0] = x;
    traj.y[0] = current(params, x, traj.u[0]);

    for (Eigen::Index j = 1; j < t_grid.size(); ++j) {
        const double span = t_grid[j] - t_grid[j - 1];
        const long steps = std::lround(span / dt);
        if (steps < 1 || std::abs(steps * dt - span) > 1e-9 * std::max(1.0, span)) {
            std::ostringstream os;
            os << "integrate_rk4: dt " << dt << " does not divide grid spacing " << span;
            throw std::invalid_argument(os.str());
        }
        for (long s = 0; s < steps; ++s) {
            const double u0 = input(t);
            const double um = input(t + 0.5 * dt);
            const double u1 = input(t + dt);
            const double k1 = gating_rate(u0, x);
            const double k2 = gating_rate(um, x + 0.5 * dt * k1);
            const double k3 = gating_rate(um, x + 0.5 * dt * k2);
            const double k4 = gating_rate(u1, x + dt * k3);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += dt;
        }
        t = t_grid[j]; // resynchronize to kill accumulated roundoff
        traj.u[j] = input(t);
        traj.x[j] = x;
        traj.y[j] = current(params, x, traj.u[j]);
    }
    return traj;
}

Dataset generate_dataset(const Params& params) {
    if (params.voltages.empty()) {
        throw std::invalid_argument("generate_dataset requires at least one voltage");
    }
    Dataset data;
    data.inputs.reserve(params.voltages.size());
    data.outputs.reserve(params.voltages.size());
    for (const double v : params.voltages) {
        const StepResponse response = step_response_closed_form(v, params);
        data.inputs.push_back(Eigen::VectorXd::Constant(params.sample_count, v));
        data.outputs.push_back(response.y_traj);
    }
    return data;
}

Eigen::VectorXd StepPair::sample(const Eigen::VectorXd& t_grid) const {
    Eigen::VectorXd u(t_grid.size());
    for (Eigen::Index j = 0; j < t_grid.size(); ++j) u[j] = (*this)(t_grid[j]);
    return u;
}

double increment_inner(const Params& params, const StepPair& u1, const StepPair& u2) {
    const Eigen::VectorXd t = params.time_grid();
    const double dt = 0.01;
    const Trajectory t1 = integrate_rk4([&](double s) { return u1(s); }, t, dt, params);
    const Trajectory t2 = integrate_rk4([&](double s) { return u2(s); }, t, dt, params);
    return (t1.u - t2.u).dot(t1.y - t2.y);
}

std::optional<NonmonotoneWitness> find_nonmonotone_pair(const Params& params,
                                                        std::uint64_t seed, long max_trials) {
    const double lo = *std::min_element(params.voltages.begin(), params.voltages.end());
    const double hi = *std::max_element(params.voltages.begin(), params.voltages.end());

    Rng rng(seed);
    const auto draw_step = [&]() {
        StepPair step;
        step.level_a = rng.uniform(lo, hi);
        step.level_b = rng.uniform(lo, hi);
        // Switch on a grid point so RK4 steps never straddle it.
        const int slots = params.sample_count - 2;
        step.t_switch = params.sample_spacing * (1 + rng.uniform_int(0, slots - 1));
        return step;
    };

    for (long trial = 0; trial < max_trials; ++trial) {
        const StepPair u1 = draw_step();
        const StepPair u2 = draw_step();
        const double inner = increment_inner(params, u1, u2);
        if (inner < 0.0) {
            return NonmonotoneWitness{u1, u2, inner, trial, seed};
        }
    }
    return std::nullopt;
}

ReproduceReport reproduce_paper(const Params& params, const ReproduceConfig& config) {
    const Dataset raw = generate_dataset(params);
    raw.validate();

    if (!(config.unit_shrink > 0.0)) {
        throw std::invalid_argument("reproduce_paper requires unit_shrink > 0");
    }
    double max_u = 0.0, max_y = 0.0;
    for (const auto& u : raw.inputs) max_u = std::max(max_u, u.cwiseAbs().maxCoeff());
    for (const auto& y : raw.outputs) max_y = std::max(max_y, y.cwiseAbs().maxCoeff());
    const double input_scale = config.unit_shrink * (max_u > 0.0 ? max_u : 1.0);
    const double output_scale = config.unit_shrink * (max_y > 0.0 ? max_y : 1.0);

    Dataset scaled;
    scaled.inputs.reserve(raw.inputs.size());
    scaled.outputs.reserve(raw.outputs.size());
    for (const auto& u : raw.inputs) scaled.inputs.push_back(u / input_scale);
    for (const auto& y : raw.outputs) scaled.outputs.push_back(y / output_scale);

    const ScatteredData scattered = scatter(scaled);
    Dataset vz;
    vz.inputs = scattered.v;
    vz.outputs = scattered.z;
    FittedModel s_model = fit(config.kernel, vz, config.gamma);

    ReproduceReport report;
    report.input_scale = input_scale;
    report.output_scale = output_scale;
    report.gamma = config.gamma;
    report.rkhs_norm = s_model.rkhs_norm;

    if (!(s_model.rkhs_norm < 1.0)) {
        std::ostringstream os;
        os << "fitted contraction has norm " << s_model.rkhs_norm
           << " >= 1; Picard simulation is not applicable";
        throw ConvergenceError(os.str(), s_model.rkhs_norm, 0);
    }
    const MonotoneModel model =
        make_monotone_model(std::move(s_model), report.rkhs_norm, config.picard);

    double sq_sum = 0.0;
    long sq_count = 0;
    double global_lo = 0.0, global_hi = 0.0;
    report.per_voltage.reserve(params.voltages.size());
    for (std::size_t i = 0; i < params.voltages.size(); ++i) {
        const SimulateResult sim = simulate(model, scaled.inputs[i]);
        VoltageFit fit_row;
        fit_row.voltage = params.voltages[i];
        fit_row.y_data = raw.outputs[i];
        fit_row.y_model = output_scale * sim.y_star;
        const Eigen::VectorXd err = fit_row.y_model - fit_row.y_data;
        fit_row.rmse = std::sqrt(err.squaredNorm() / err.size());
        fit_row.range = fit_row.y_data.maxCoeff() - fit_row.y_data.minCoeff();
        global_lo = std::min(global_lo, fit_row.y_data.minCoeff());
        global_hi = std::max(global_hi, fit_row.y_data.maxCoeff());
        sq_sum += err.squaredNorm();
        sq_count += err.size();
        report.per_voltage.push_back(std::move(fit_row));
    }
    report.fit_rmse = std::sqrt(sq_sum / sq_count);
    const double global_range = global_hi - global_lo;

    // Monotonicity sweep over the (scaled) input range of the data.
    double in_lo = 0.0, in_hi = 0.0;
    for (const auto& u : scaled.inputs) {
        in_lo = std::min(in_lo, u.minCoeff());
        in_hi = std::max(in_hi, u.maxCoeff());
    }
    const InputSampler sampler =
        make_uniform_box_sampler(static_cast<int>(scaled.inputs.front().size()), in_lo, in_hi);
    report.monotonicity_pass =
        monotonicity_check(model, sampler, config.monotonicity_trials, config.seed).pass;

    // Frozen regression bounds.
    report.bounds_pass = true;
    const auto fail = [&](const std::string& reason) {
        report.bounds_pass = false;
        report.bound_failures.push_back(reason);
    };
    if (!(report.rkhs_norm >= kNormBandLo && report.rkhs_norm <= kNormBandHi)) {
        std::ostringstream os;
        os << "contraction norm " << report.rkhs_norm << " outside [" << kNormBandLo << ", "
           << kNormBandHi << "]";
        fail(os.str());
    }
    if (!report.monotonicity_pass) fail("monotonicity sweep found a violation");
    for (const auto& row : report.per_voltage) {
        if (row.rmse > kGlobalRmseFraction * global_range) {
            std::ostringstream os;
            os << "voltage " << row.voltage << " RMSE " << row.rmse << " exceeds "
               << kGlobalRmseFraction << " of the global range " << global_range;
            fail(os.str());
        }
    }
    if (report.per_voltage.size() >= 8) {
        // The relative misfit concentrates on the small-magnitude
        // experiments; the large ones are reconstructed almost exactly.
        std::vector<VoltageFit const*> rows;
        for (const auto& row : report.per_voltage) rows.push_back(&row);
        std::sort(rows.begin(), rows.end(), [](const VoltageFit* a, const VoltageFit* b) {
            return std::abs(a->voltage) < std::abs(b->voltage);
        });
        const std::size_t k = rows.size() / 4 + 1;
        double small_ratio = 0.0, large_ratio = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const VoltageFit* small_row = rows[i];
            const VoltageFit* large_row = rows[rows.size() - 1 - i];
            if (small_row->range > 0.0) small_ratio += small_row->rmse / small_row->range;
            if (large_row->range > 0.0) {
                large_ratio += large_row->rmse / large_row->range;
                if (large_row->rmse > kLargeRmseFraction * large_row->range) {
                    std::ostringstream os;
                    os << "voltage " << large_row->voltage << " RMSE " << large_row->rmse
                       << " exceeds " << kLargeRmseFraction << " of its range "
                       << large_row->range;
                    fail(os.str());
                }
            }
        }
        if (!(small_ratio > large_ratio)) {
            fail("relative misfit does not concentrate on the small-magnitude experiments");
        }
    }
    return report;
}

} // namespace lipkern::hodgkin
