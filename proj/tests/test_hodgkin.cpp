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

#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "json_io.hpp"
#include "lipkern/hodgkin.hpp"
#include "lipkern/serialize.hpp"

using namespace lipkern;
namespace hh = lipkern::hodgkin;

#ifndef LIPKERN_TEST_DATA_DIR
#define LIPKERN_TEST_DATA_DIR "."
#endif

TEST_SUITE("hodgkin") {

TEST_CASE("alpha: closed form and the patched singularity") {
    CHECK(hh::alpha(-10.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(hh::alpha(0.0) == doctest::Approx(0.01 * 10.0 / (std::exp(1.0) - 1.0)).epsilon(1e-12));
    CHECK(hh::alpha(-20.0) ==
          doctest::Approx(0.01 * (-10.0) / (std::exp(-1.0) - 1.0)).epsilon(1e-12));

    // Series and exact branches agree at the switch radius.
    for (const double w : {1e-7, -1e-7}) {
        const double u = -10.0 + w;
        const double series = 0.1 * (1.0 - w / 20.0 + w * w / 1200.0);
        const double exact = 0.01 * w / std::expm1(w / 10.0);
        CHECK(std::abs(series - exact) <= 1e-12);
        CHECK(hh::alpha(u) == doctest::Approx(series).epsilon(1e-12));
    }
    // Continuity across the patch.
    CHECK(std::abs(hh::alpha(-10.0 + 1.0001e-7) - hh::alpha(-10.0 + 0.9999e-7)) <= 1e-10);
}

TEST_CASE("beta values") {
    CHECK(hh::beta(0.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(hh::beta(80.0) == doctest::Approx(0.125 * std::exp(1.0)).epsilon(1e-15));
    CHECK(hh::beta(-80.0) == doctest::Approx(0.125 / std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("closed-form step response") {
    const hh::Params params;
    const hh::StepResponse response = hh::step_response_closed_form(-63.0, params);

    CHECK(response.x_traj[0] == 0.0);
    CHECK(response.y_traj[0] == 0.0);

    const double a = hh::alpha(-63.0);
    const double b = hh::beta(-63.0);
    const double x_inf = a / (a + b);
    // By t = 10 the trajectory is within e^(-10(a+b)) ~ 0.3% of equilibrium.
    CHECK(response.x_traj[20] == doctest::Approx(x_inf).epsilon(5e-3));
    for (int j = 0; j < 21; ++j) {
        CHECK(response.x_traj[j] >= 0.0);
        CHECK(response.x_traj[j] <= 1.0);
        if (j > 0) CHECK(response.x_traj[j] >= response.x_traj[j - 1]); // monotone rise
        const double x = response.x_traj[j];
        CHECK(response.y_traj[j] ==
              doctest::Approx(36.0 * x * x * x * x * (-63.0 - 12.0)).epsilon(1e-12));
    }
}

TEST_CASE("RK4 agrees with the closed form on constant inputs") {
    const hh::Params params;
    const Eigen::VectorXd grid = params.time_grid();
    for (const double v : params.voltages) {
        const hh::StepResponse exact = hh::step_response_closed_form(v, params);
        const hh::Trajectory rk4 =
            hh::integrate_rk4([v](double) { return v; }, grid, 0.01, params);
        CAPTURE(v);
        CHECK((rk4.x - exact.x_traj).cwiseAbs().maxCoeff() <= 1e-6);
        for (int j = 0; j < 21; ++j) {
            CHECK(std::abs(rk4.y[j] - exact.y_traj[j]) <=
                  1e-6 * std::max(1.0, std::abs(exact.y_traj[j])));
        }
    }
}

TEST_CASE("RK4 edge cases and convergence order") {
    const hh::Params params;
    SUBCASE("single-sample grid") {
        Eigen::VectorXd grid(1);
        grid[0] = 0.0;
        const hh::Trajectory traj =
            hh::integrate_rk4([](double) { return -63.0; }, grid, 0.01, params);
        CHECK(traj.x.size() == 1);
        CHECK(traj.x[0] == 0.0);
    }
    SUBCASE("dt must divide the spacing") {
        Eigen::VectorXd grid(2);
        grid << 0.0, 0.5;
        CHECK_THROWS_AS(hh::integrate_rk4([](double) { return -63.0; }, grid, 0.3, params),
                        std::invalid_argument);
    }
    SUBCASE("halving dt reduces the error at least 8x") {
        Eigen::VectorXd grid(2);
        grid << 0.0, 10.0;
        const double v = -63.0;
        const hh::StepResponse exact = hh::step_response_closed_form(v, hh::Params{});
        const auto error_at = [&](double dt) {
            const hh::Trajectory traj =
                hh::integrate_rk4([v](double) { return v; }, grid, dt, hh::Params{});
            // exact x at t = 10 is the last closed-form sample
            return std::abs(traj.x[1] - exact.x_traj[20]);
        };
        const double coarse = error_at(2.5);
        const double fine = error_at(1.25);
        CHECK(coarse >= 8.0 * fine);
    }
}

TEST_CASE("generate_dataset shape and sign structure") {
    hh::Params params;
    const Dataset data = hh::generate_dataset(params);
    CHECK(data.size() == 12);
    CHECK(data.input_dim() == 21);
    CHECK(data.output_dim() == 21);

    double smallest_magnitude = std::numeric_limits<double>::infinity();
    std::size_t smallest_index = 0;
    for (std::size_t i = 0; i < data.outputs.size(); ++i) {
        const double v = params.voltages[i];
        for (int j = 0; j < 21; ++j) {
            CHECK(std::isfinite(data.outputs[i][j]));
            if (data.outputs[i].cwiseAbs().maxCoeff() > 0 && j > 0) {
                // sign of y matches sign of (v - u_bar) wherever x > 0
                CHECK(data.outputs[i][j] * (v - params.u_bar) >= 0.0);
            }
        }
        const double magnitude = data.outputs[i].cwiseAbs().maxCoeff();
        if (magnitude < smallest_magnitude) {
            smallest_magnitude = magnitude;
            smallest_index = i;
        }
    }
    CHECK(params.voltages[smallest_index] == -6.0);

    params.voltages = {-40.0};
    CHECK(hh::generate_dataset(params).size() == 1);
    params.voltages.clear();
    CHECK_THROWS_AS(hh::generate_dataset(params), std::invalid_argument);
}

TEST_CASE("non-monotonicity witness replays from the stored fixture") {
    const std::string path = std::string(LIPKERN_TEST_DATA_DIR) + "/hh_nonmonotone_pair.json";
    const auto fixture = jsonio::json::parse(read_text_file(path));
    const auto step_from = [](const jsonio::json& tree) {
        return hh::StepPair{tree.at("level_a").get<double>(), tree.at("level_b").get<double>(),
                            tree.at("t_switch").get<double>()};
    };
    const hh::StepPair u1 = step_from(fixture.at("u1"));
    const hh::StepPair u2 = step_from(fixture.at("u2"));
    const double stored_inner = fixture.at("inner").get<double>();

    const hh::Params params;
    const double inner = hh::increment_inner(params, u1, u2);
    CHECK(inner < 0.0);
    CHECK(inner == doctest::Approx(stored_inner).epsilon(1e-9));

    // The search reproduces the same witness from the stored seed.
    const auto witness = hh::find_nonmonotone_pair(
        params, fixture.at("seed").get<std::uint64_t>(), fixture.at("max_trials").get<long>());
    REQUIRE(witness.has_value());
    CHECK(witness->trial == fixture.at("trial").get<long>());
    CHECK(witness->u1.level_a == doctest::Approx(u1.level_a).epsilon(1e-12));
    CHECK(witness->u1.level_b == doctest::Approx(u1.level_b).epsilon(1e-12));
    CHECK(witness->u2.level_a == doctest::Approx(u2.level_a).epsilon(1e-12));
    CHECK(witness->u2.level_b == doctest::Approx(u2.level_b).epsilon(1e-12));
    CHECK(witness->inner == doctest::Approx(stored_inner).epsilon(1e-12));
}

TEST_CASE("reproduce_paper: certificate, monotonicity, and misfit pattern") {
    const hh::Params params;
    hh::ReproduceConfig config;
    config.monotonicity_trials = 200; // the acceptance suite runs the full sweep
    const hh::ReproduceReport report = hh::reproduce_paper(params, config);

    CHECK(report.rkhs_norm >= 0.94);
    CHECK(report.rkhs_norm <= 1.00);
    CHECK(std::abs(report.rkhs_norm - 0.9903) <= 0.05);
    CHECK(report.monotonicity_pass);
    CHECK(report.bounds_pass);
    CHECK(report.bound_failures.empty());
    CHECK(report.per_voltage.size() == params.voltages.size());

    // Tuning to the published budget recovers a regularization level in the
    // published range.
    Dataset scaled;
    const Dataset raw = hh::generate_dataset(params);
    for (const auto& u : raw.inputs) scaled.inputs.push_back(u / report.input_scale);
    for (const auto& y : raw.outputs) scaled.outputs.push_back(y / report.output_scale);
    const ScatteredData sc = scatter(scaled);
    Dataset vz;
    vz.inputs = sc.v;
    vz.outputs = sc.z;
    const GramMatrix gram = assemble_gram(config.kernel, vz.inputs, vz.output_dim());
    Eigen::VectorXd zbar(static_cast<Eigen::Index>(vz.size()) * vz.output_dim());
    for (int i = 0; i < vz.size(); ++i) {
        zbar.segment(static_cast<Eigen::Index>(i) * vz.output_dim(), vz.output_dim()) =
            vz.outputs[i];
    }
    for (const double ell : {0.9903, 0.99}) {
        const TuneResult tuned = tune_gamma(gram, zbar, ell);
        CAPTURE(ell);
        CHECK(tuned.gamma >= 2e-4);
        CHECK(tuned.gamma <= 1e-3);
    }
}

TEST_CASE("figure CSV carries one row per voltage and sample") {
    const hh::Params params;
    hh::ReproduceConfig config;
    config.monotonicity_trials = 1;
    const hh::ReproduceReport report = hh::reproduce_paper(params, config);
    const std::string csv = reproduce_figure_csv(params, report);
    const long rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 1 + 12 * 21);
    CHECK(csv.rfind("voltage,t,y_data,y_model\n", 0) == 0);
}

} // TEST_SUITE
