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

#include "lipkern/monotone.hpp"

#include <cmath>
#include <sstream>

namespace lipkern {

ScatteredData scatter(const Dataset& data) {
    data.validate();
    if (data.input_dim() != data.output_dim()) {
        std::ostringstream os;
        os << "scatter requires matching input/output dimensions, got " << data.input_dim()
           << " and " << data.output_dim();
        throw DimensionError(os.str());
    }
    ScatteredData scattered;
    scattered.v.reserve(data.inputs.size());
    scattered.z.reserve(data.inputs.size());
    for (std::size_t i = 0; i < data.inputs.size(); ++i) {
        scattered.v.push_back(data.inputs[i] + data.outputs[i]);
        scattered.z.push_back(data.inputs[i] - data.outputs[i]);
    }
    return scattered;
}

Dataset unscatter(const ScatteredData& scattered) {
    Dataset data;
    data.inputs.reserve(scattered.v.size());
    data.outputs.reserve(scattered.v.size());
    for (std::size_t i = 0; i < scattered.v.size(); ++i) {
        data.inputs.push_back(0.5 * (scattered.v[i] + scattered.z[i]));
        data.outputs.push_back(0.5 * (scattered.v[i] - scattered.z[i]));
    }
    return data;
}

MonotoneModel make_monotone_model(FittedModel s_model, double ell, PicardOptions picard) {
    if (!(ell >= 0.0 && ell < 1.0)) {
        throw std::invalid_argument("monotone model requires ell in [0, 1)");
    }
    if (s_model.input_dim() != s_model.output_dim()) {
        throw DimensionError("monotone model requires a square contraction");
    }
    if (!s_model.lipschitz_certified) {
        throw std::invalid_argument("monotone model requires a certified contraction");
    }
    if (*s_model.lipschitz_certified > ell) {
        std::ostringstream os;
        os << "certified constant " << *s_model.lipschitz_certified
           << " exceeds the contraction budget " << ell;
        throw std::invalid_argument(os.str());
    }
    MonotoneModel model;
    model.s_model = std::move(s_model);
    model.ell = ell;
    model.picard = picard;
    return model;
}

MonotoneModel fit_monotone(const KernelSpec& spec, const Dataset& data, double ell,
                           PicardOptions picard) {
    if (!spec.claims_nonexpansive()) {
        throw std::invalid_argument(
            "fit_monotone requires a kernel from the certified nonexpansive catalogue");
    }
    if (!(ell > 0.0 && ell < 1.0)) {
        throw std::invalid_argument("fit_monotone requires ell in (0, 1)");
    }
    const ScatteredData scattered = scatter(data);

    Dataset vz;
    vz.inputs = scattered.v;
    vz.outputs = scattered.z;

    const int m = vz.output_dim();
    const GramMatrix gram = assemble_gram(spec, vz.inputs, m);
    Eigen::VectorXd zbar(static_cast<Eigen::Index>(vz.size()) * m);
    for (int i = 0; i < vz.size(); ++i) zbar.segment(static_cast<Eigen::Index>(i) * m, m) = vz.outputs[i];

    const TuneResult tuned = tune_gamma(gram, zbar, ell);
    FittedModel s_model = fit(spec, vz, tuned.gamma);
    return make_monotone_model(std::move(s_model), ell, picard);
}

SimulateResult simulate(const MonotoneModel& model, const Eigen::VectorXd& u_star,
                        const Eigen::VectorXd& y0, bool record_trace) {
    if (u_star.size() != model.s_model.input_dim()) {
        throw DimensionError("simulate: input has dimension " + std::to_string(u_star.size()) +
                             ", model expects " + std::to_string(model.s_model.input_dim()));
    }
    if (y0.size() != u_star.size()) {
        throw DimensionError("simulate: y0 dimension does not match the input");
    }
    // step <= tol (1 - ell)/ell implies |y - y*| <= tol by the contraction
    // estimate |y^k - y*| <= ell/(1 - ell) * step.
    const double threshold =
        model.picard.tol * (1.0 - model.ell) / std::max(model.ell, 1e-12);

    SimulateResult result;
    Eigen::VectorXd y = y0;
    if (record_trace) result.trace.push_back(y);
    for (long k = 0; k < model.picard.max_iter; ++k) {
        Eigen::VectorXd next = u_star - predict(model.s_model, u_star + y);
        const double step = (next - y).norm();
        y = std::move(next);
        if (record_trace) result.trace.push_back(y);
        result.iters = k + 1;
        result.residual = step;
        if (step <= threshold) {
            result.y_star = std::move(y);
            return result;
        }
    }
    std::ostringstream os;
    os << "Picard iteration did not reach step " << threshold << " within "
       << model.picard.max_iter << " iterations (last step " << result.residual << ")";
    throw ConvergenceError(os.str(), result.residual, result.iters);
}

SimulateResult simulate(const MonotoneModel& model, const Eigen::VectorXd& u_star) {
    return simulate(model, u_star, Eigen::VectorXd::Zero(u_star.size()), false);
}

MonotonicityCheck monotonicity_check(const MonotoneModel& model, const InputSampler& sampler,
                                     long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("monotonicity_check requires trials >= 1");
    Rng rng(seed);

    MonotonicityCheck report;
    report.trials = trials;
    report.seed = seed;
    report.pass = true;
    bool first = true;
    for (long t = 0; t < trials; ++t) {
        const Eigen::VectorXd x = sampler(rng);
        const Eigen::VectorXd y = sampler(rng);
        const Eigen::VectorXd rx = simulate(model, x).y_star;
        const Eigen::VectorXd ry = simulate(model, y).y_star;
        const double inner = (x - y).dot(rx - ry);
        const double slack = -1e-8 * (x - y).norm() * (rx.norm() + ry.norm() + 1.0);
        if (inner < slack) report.pass = false;
        if (first || inner < report.min_inner) {
            report.min_inner = inner;
            first = false;
        }
    }
    return report;
}

} // namespace lipkern
