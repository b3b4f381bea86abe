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

#include "lipkern/estimator.hpp"

#include <cmath>
#include <sstream>

#include "parallel.hpp"

namespace lipkern {

void Dataset::validate() const {
    if (inputs.empty() || outputs.empty()) {
        throw std::invalid_argument("dataset must contain at least one sample");
    }
    if (inputs.size() != outputs.size()) {
        throw DimensionError("dataset has " + std::to_string(inputs.size()) + " inputs but " +
                             std::to_string(outputs.size()) + " outputs");
    }
    const auto d = inputs.front().size();
    const auto m = outputs.front().size();
    if (d == 0 || m == 0) throw DimensionError("dataset vectors must be nonempty");
    for (const auto& u : inputs) {
        if (u.size() != d) throw DimensionError("dataset inputs have mixed dimensions");
    }
    for (const auto& y : outputs) {
        if (y.size() != m) throw DimensionError("dataset outputs have mixed dimensions");
    }
}

GramMatrix GramMatrix::from_dense(SymMatrix dense, int n, int m) {
    if (n < 1 || m < 1 || dense.dim() != static_cast<Eigen::Index>(n) * m) {
        throw DimensionError("GramMatrix: dense block matrix must have dimension n*m");
    }
    GramMatrix g;
    g.n_ = n;
    g.m_ = m;
    g.dense_ = std::move(dense);
    return g;
}

GramMatrix GramMatrix::from_scalar_base(SymMatrix base, int m) {
    if (m < 1) throw std::invalid_argument("GramMatrix: output dimension must be positive");
    GramMatrix g;
    g.n_ = static_cast<int>(base.dim());
    g.m_ = m;
    g.base_ = std::move(base);
    return g;
}

const SymMatrix& GramMatrix::base() const {
    if (!base_) throw std::logic_error("GramMatrix: no scalar base on the dense path");
    return *base_;
}

SymMatrix GramMatrix::dense() const {
    if (dense_) return *dense_;
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(dim(), dim());
    const Eigen::MatrixXd& b = base_->matrix();
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            full.block(i * m_, j * m_, m_, m_) =
                b(i, j) * Eigen::MatrixXd::Identity(m_, m_);
        }
    }
    return SymMatrix(std::move(full));
}

double GramMatrix::trace() const {
    if (base_) return base_->matrix().trace() * m_;
    return dense_->matrix().trace();
}

Eigen::VectorXd GramMatrix::solve_shifted(double gamma, const Eigen::VectorXd& ybar) const {
    if (ybar.size() != dim()) {
        throw DimensionError("solve_shifted: rhs has dimension " + std::to_string(ybar.size()) +
                             ", expected " + std::to_string(dim()));
    }
    if (!base_) {
        return solve_spd(*dense_, gamma, ybar);
    }
    // Per-coordinate solves on the n x n base: column k of the reshaped rhs
    // holds coordinate k of every sample.
    Eigen::MatrixXd rhs(n_, m_);
    for (int i = 0; i < n_; ++i) rhs.row(i) = ybar.segment(i * m_, m_).transpose();
    const Eigen::MatrixXd sol = solve_spd(*base_, gamma, rhs);
    Eigen::VectorXd cbar(dim());
    for (int i = 0; i < n_; ++i) cbar.segment(i * m_, m_) = sol.row(i).transpose();
    return cbar;
}

double GramMatrix::quad(const Eigen::VectorXd& cbar) const {
    if (cbar.size() != dim()) {
        throw DimensionError("quad: vector has dimension " + std::to_string(cbar.size()) +
                             ", expected " + std::to_string(dim()));
    }
    if (!base_) {
        return cbar.dot(dense_->matrix() * cbar);
    }
    Eigen::MatrixXd cols(n_, m_);
    for (int i = 0; i < n_; ++i) cols.row(i) = cbar.segment(i * m_, m_).transpose();
    return (cols.transpose() * base_->matrix() * cols).trace();
}

GramMatrix assemble_gram(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& inputs,
                         int output_dim) {
    if (inputs.empty()) throw std::invalid_argument("assemble_gram requires at least one input");
    const int n = static_cast<int>(inputs.size());
    const int m = spec.resolve_output_dim(output_dim);

    if (auto factor = detail::scalar_identity_factor(spec, m)) {
        Eigen::MatrixXd base = Eigen::MatrixXd::Zero(n, n);
        std::vector<std::pair<int, int>> index;
        index.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) index.emplace_back(i, j);
        }
        detail::parallel_for(0, static_cast<std::ptrdiff_t>(index.size()), [&](std::ptrdiff_t k) {
            const auto [i, j] = index[k];
            base(i, j) = (*factor)(inputs[i], inputs[j]);
        });
        base = base.selfadjointView<Eigen::Upper>();
        return GramMatrix::from_scalar_base(SymMatrix(std::move(base)), m);
    }

    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) * m,
                                                 static_cast<Eigen::Index>(n) * m);
    std::vector<std::pair<int, int>> index;
    index.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) index.emplace_back(i, j);
    }
    detail::parallel_for(0, static_cast<std::ptrdiff_t>(index.size()), [&](std::ptrdiff_t k) {
        const auto [i, j] = index[k];
        const Eigen::MatrixXd block = eval_operator(spec, inputs[i], inputs[j], m);
        full.block(i * m, j * m, m, m) = block;
        if (i != j) full.block(j * m, i * m, m, m) = block.transpose();
    });
    // Diagonal blocks are symmetric only up to roundoff; symmetrize.
    Eigen::MatrixXd sym = 0.5 * (full + full.transpose());
    return GramMatrix::from_dense(SymMatrix(std::move(sym)), n, m);
}

namespace {

Eigen::VectorXd stack(const std::vector<Eigen::VectorXd>& vectors) {
    const Eigen::Index m = vectors.front().size();
    Eigen::VectorXd flat(static_cast<Eigen::Index>(vectors.size()) * m);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        flat.segment(static_cast<Eigen::Index>(i) * m, m) = vectors[i];
    }
    return flat;
}

std::vector<Eigen::VectorXd> unstack(const Eigen::VectorXd& flat, int n, int m) {
    std::vector<Eigen::VectorXd> vectors(n);
    for (int i = 0; i < n; ++i) vectors[i] = flat.segment(static_cast<Eigen::Index>(i) * m, m);
    return vectors;
}

} // namespace

FittedModel fit(const KernelSpec& spec, const Dataset& data, double gamma) {
    data.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("fit requires gamma > 0");

    const int n = data.size();
    const int m = data.output_dim();
    const GramMatrix gram = assemble_gram(spec, data.inputs, m);
    const Eigen::VectorXd ybar = stack(data.outputs);
    const Eigen::VectorXd cbar = gram.solve_shifted(gamma, ybar);

    FittedModel model;
    model.kernel = spec;
    model.train_inputs = data.inputs;
    model.coefficients = unstack(cbar, n, m);
    model.gamma = gamma;
    model.rkhs_norm = std::sqrt(std::max(0.0, gram.quad(cbar)));
    if (spec.claims_nonexpansive()) model.lipschitz_certified = model.rkhs_norm;
    return model;
}

Eigen::VectorXd predict(const FittedModel& model, const Eigen::VectorXd& u) {
    if (u.size() != model.input_dim()) {
        throw DimensionError("predict: input has dimension " + std::to_string(u.size()) +
                             ", model expects " + std::to_string(model.input_dim()));
    }
    const int m = model.output_dim();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    if (auto factor = detail::scalar_identity_factor(model.kernel, m)) {
        for (std::size_t j = 0; j < model.train_inputs.size(); ++j) {
            acc += (*factor)(u, model.train_inputs[j]) * model.coefficients[j];
        }
        return acc;
    }
    for (std::size_t j = 0; j < model.train_inputs.size(); ++j) {
        acc += eval_operator(model.kernel, u, model.train_inputs[j], m) * model.coefficients[j];
    }
    return acc;
}

double rkhs_norm_at(const GramMatrix& gram, const Eigen::VectorXd& ybar, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("rkhs_norm_at requires gamma > 0");
    const Eigen::VectorXd cbar = gram.solve_shifted(gamma, ybar);
    return std::sqrt(std::max(0.0, gram.quad(cbar)));
}

TuneResult tune_gamma(const GramMatrix& gram, const Eigen::VectorXd& ybar, double ell,
                      const TuneOptions& opts) {
    if (!(ell > 0.0)) throw std::invalid_argument("tune_gamma requires ell > 0");

    const double gamma_floor = 1e-12 * gram.trace() / gram.dim() + 1e-300;
    const auto norm_at = [&](double gamma) { return rkhs_norm_at(gram, ybar, gamma); };

    if (norm_at(gamma_floor) <= ell) {
        return TuneResult{gamma_floor, norm_at(gamma_floor)};
    }

    // Expand upward until feasible; the norm decreases to 0 as gamma grows.
    double lo = gamma_floor;
    double hi = std::max(gamma_floor * 10.0, gram.trace() / gram.dim());
    int used = 0;
    while (norm_at(hi) > ell) {
        lo = hi;
        hi *= 10.0;
        if (++used > opts.max_iter || !std::isfinite(hi)) {
            throw ConvergenceError("tune_gamma failed to bracket the norm budget", norm_at(lo),
                                   used);
        }
    }

    // Bisection on log gamma; keep hi feasible, lo infeasible.
    while (hi / lo > 1.0 + opts.tol && used < opts.max_iter) {
        const double mid = std::sqrt(lo * hi);
        if (norm_at(mid) <= ell) {
            hi = mid;
        } else {
            lo = mid;
        }
        ++used;
    }
    return TuneResult{hi, norm_at(hi)};
}

LipschitzCheck empirical_lipschitz_check(const FittedModel& model, const InputSampler& sampler,
                                         long trials, std::uint64_t seed) {
    if (!model.lipschitz_certified) {
        throw std::invalid_argument(
            "empirical_lipschitz_check requires a model with a certified constant");
    }
    if (trials < 1) throw std::invalid_argument("empirical_lipschitz_check requires trials >= 1");

    Rng rng(seed);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
    pairs.reserve(trials);
    for (long t = 0; t < trials; ++t) {
        Eigen::VectorXd x = sampler(rng);
        Eigen::VectorXd y = sampler(rng);
        pairs.emplace_back(std::move(x), std::move(y));
    }

    std::vector<double> ratios(pairs.size(), 0.0);
    detail::parallel_for(0, static_cast<std::ptrdiff_t>(pairs.size()), [&](std::ptrdiff_t i) {
        const double gap = (pairs[i].first - pairs[i].second).norm();
        if (gap == 0.0) return;
        ratios[i] = (predict(model, pairs[i].first) - predict(model, pairs[i].second)).norm() / gap;
    });

    LipschitzCheck report;
    report.trials = trials;
    report.seed = seed;
    for (const double r : ratios) report.max_ratio = std::max(report.max_ratio, r);
    report.pass = report.max_ratio <= *model.lipschitz_certified * (1.0 + 1e-6);
    return report;
}

} // namespace lipkern
