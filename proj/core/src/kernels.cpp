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

#include "lipkern/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "lipkern/estimator.hpp"
#include "parallel.hpp"

namespace lipkern {

namespace {

constexpr double kFlagTol = 1e-12;      // slack on the catalogue inequalities
constexpr double kViolationTol = 1e-9;  // multiplicative, absorbs the bilinear equality case

double ipow(double base, int exp) {
    double acc = 1.0;
    for (int i = 0; i < exp; ++i) acc *= base;
    return acc;
}

double operator_norm(const Eigen::MatrixXd& r) {
    // Largest singular value; r need not be symmetric.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    return svd.singularValues()[0];
}

bool is_symmetric(const Eigen::MatrixXd& r, double tol) {
    return (r - r.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd_symmetric(const Eigen::MatrixXd& r) {
    if (!is_symmetric(r, 1e-12)) return false;
    const SymMatrix sym(r);
    const EigDecomp eig = eig_sym(sym);
    const double lam_max = eig.eigenvalues[r.rows() - 1];
    return eig.eigenvalues[0] >= -1e-10 * std::max(1.0, lam_max);
}

void check_same_dim(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size()) {
        std::ostringstream os;
        os << "kernel arguments have mismatched dimensions " << u.size() << " and " << v.size();
        throw DimensionError(os.str());
    }
}

} // namespace

KernelSpec KernelSpec::bilinear() {
    KernelSpec k;
    k.variant_ = Variant::Bilinear;
    k.nonexpansive_ = true;
    return k;
}

KernelSpec KernelSpec::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian kernel requires sigma > 0");
    KernelSpec k;
    k.variant_ = Variant::Gaussian;
    k.p1_ = sigma;
    k.nonexpansive_ = sigma >= std::sqrt(2.0);
    return k;
}

KernelSpec KernelSpec::scaled_laplacian() {
    KernelSpec k;
    k.variant_ = Variant::ScaledLaplacian;
    k.nonexpansive_ = true;
    return k;
}

KernelSpec KernelSpec::inverse_power(double c, double d) {
    // c == 0 would make the kernel singular at u == v, so it is excluded.
    if (!(c > 0.0)) throw std::invalid_argument("inverse_power kernel requires c > 0");
    if (!(d > 0.0)) throw std::invalid_argument("inverse_power kernel requires d > 0");
    KernelSpec k;
    k.variant_ = Variant::InversePower;
    k.p1_ = c;
    k.p2_ = d;
    k.nonexpansive_ = 2.0 * d <= std::pow(c, d + 1.0) * (1.0 + kFlagTol);
    return k;
}

KernelSpec KernelSpec::polynomial(double c, int degree) {
    if (!(c >= 0.0)) throw std::invalid_argument("polynomial kernel requires c >= 0");
    if (degree < 1) throw std::invalid_argument("polynomial kernel requires degree >= 1");
    KernelSpec k;
    k.variant_ = Variant::PolynomialScalar;
    k.p1_ = c;
    k.p2_ = degree;
    k.nonexpansive_ = false; // the catalogue's counterexample, never certified
    return k;
}

KernelSpec KernelSpec::scalar_times_operator(KernelSpec base, const Eigen::MatrixXd& r) {
    if (!base.is_scalar()) {
        throw std::invalid_argument("scalar_times_operator requires a scalar base kernel");
    }
    if (r.rows() != r.cols() || r.rows() == 0) {
        throw DimensionError("scalar_times_operator requires a square factor matrix");
    }
    if (!is_symmetric(r, 1e-12)) {
        throw std::invalid_argument("scalar_times_operator requires a symmetric factor matrix");
    }
    KernelSpec k;
    k.variant_ = Variant::ScalarTimesOperator;
    k.nonexpansive_ = base.claims_nonexpansive() && is_psd_symmetric(r) &&
                      operator_norm(r) <= 1.0 + kFlagTol;
    k.base_ = std::make_shared<const KernelSpec>(std::move(base));
    k.r_ = 0.5 * (r + r.transpose());
    return k;
}

KernelSpec KernelSpec::convex_sum(const std::vector<std::pair<double, KernelSpec>>& terms) {
    if (terms.empty()) throw std::invalid_argument("convex_sum requires at least one term");
    KernelSpec k;
    k.variant_ = Variant::ConvexSum;
    double weight_sum = 0.0;
    bool all_nonexpansive = true;
    std::optional<int> dim;
    for (const auto& [weight, term] : terms) {
        if (!(weight >= 0.0)) throw std::invalid_argument("convex_sum weights must be nonnegative");
        weight_sum += weight;
        all_nonexpansive = all_nonexpansive && term.claims_nonexpansive();
        if (auto term_dim = term.output_dim()) {
            if (dim && *dim != *term_dim) {
                throw DimensionError("convex_sum terms have conflicting output dimensions");
            }
            dim = term_dim;
        }
        k.terms_.push_back({weight, std::make_shared<const KernelSpec>(term)});
    }
    k.nonexpansive_ = all_nonexpansive && weight_sum <= 1.0 + kFlagTol;
    return k;
}

KernelSpec KernelSpec::conjugated(KernelSpec base, const Eigen::MatrixXd& r) {
    if (!base.is_scalar()) {
        throw std::invalid_argument("conjugated requires a scalar base kernel");
    }
    if (r.rows() != r.cols() || r.rows() == 0) {
        throw DimensionError("conjugated requires a square factor matrix");
    }
    KernelSpec k;
    k.variant_ = Variant::Conjugated;
    k.nonexpansive_ = base.claims_nonexpansive() && operator_norm(r) <= 1.0 + kFlagTol;
    k.base_ = std::make_shared<const KernelSpec>(std::move(base));
    k.r_ = r;
    return k;
}

bool KernelSpec::is_scalar() const {
    switch (variant_) {
        case Variant::Bilinear:
        case Variant::Gaussian:
        case Variant::ScaledLaplacian:
        case Variant::InversePower:
        case Variant::PolynomialScalar:
            return true;
        default:
            return false;
    }
}

std::optional<int> KernelSpec::output_dim() const {
    switch (variant_) {
        case Variant::ScalarTimesOperator:
        case Variant::Conjugated:
            return static_cast<int>(r_.rows());
        case Variant::ConvexSum:
            for (const auto& term : terms_) {
                if (auto dim = term.kernel->output_dim()) return dim;
            }
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

int KernelSpec::resolve_output_dim(int requested) const {
    if (auto own = output_dim()) {
        if (requested > 0 && requested != *own) {
            std::ostringstream os;
            os << "kernel has output dimension " << *own << " but " << requested
               << " was requested";
            throw DimensionError(os.str());
        }
        return *own;
    }
    if (requested <= 0) {
        throw std::invalid_argument("scalar kernel needs an explicit output dimension");
    }
    return requested;
}

std::string KernelSpec::variant_name() const {
    switch (variant_) {
        case Variant::Bilinear: return "bilinear";
        case Variant::Gaussian: return "gaussian";
        case Variant::ScaledLaplacian: return "scaled_laplacian";
        case Variant::InversePower: return "inverse_power";
        case Variant::PolynomialScalar: return "polynomial";
        case Variant::ScalarTimesOperator: return "scalar_times_operator";
        case Variant::ConvexSum: return "convex_sum";
        case Variant::Conjugated: return "conjugated";
    }
    return "unknown";
}

double eval_scalar(const KernelSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (!spec.is_scalar()) {
        throw std::invalid_argument("eval_scalar called on operator-valued kernel " +
                                    spec.variant_name());
    }
    check_same_dim(u, v);
    switch (spec.variant()) {
        case KernelSpec::Variant::Bilinear:
            return u.dot(v);
        case KernelSpec::Variant::Gaussian:
            return std::exp(-(u - v).squaredNorm() / (spec.sigma() * spec.sigma()));
        case KernelSpec::Variant::ScaledLaplacian: {
            const double r = (u - v).norm();
            return (1.0 + r) * std::exp(-r);
        }
        case KernelSpec::Variant::InversePower:
            return std::pow(spec.c() + (u - v).squaredNorm(), -spec.d());
        case KernelSpec::Variant::PolynomialScalar:
            return ipow(spec.c() + u.dot(v), spec.degree());
        default:
            break;
    }
    throw std::logic_error("unreachable kernel variant");
}

Eigen::MatrixXd eval_operator(const KernelSpec& spec, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v, int output_dim) {
    const int m = spec.resolve_output_dim(output_dim);
    switch (spec.variant()) {
        case KernelSpec::Variant::ScalarTimesOperator:
            return eval_scalar(spec.base(), u, v) * spec.r_matrix();
        case KernelSpec::Variant::ConvexSum: {
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
            for (const auto& term : spec.terms()) {
                acc += term.weight * eval_operator(*term.kernel, u, v, m);
            }
            return acc;
        }
        case KernelSpec::Variant::Conjugated:
            return eval_scalar(spec.base(), u, v) * (spec.r_matrix() * spec.r_matrix().transpose());
        default:
            return eval_scalar(spec, u, v) * Eigen::MatrixXd::Identity(m, m);
    }
}

KernelMetricSample kernel_metric(const KernelSpec& spec, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, int output_dim) {
    const int m = spec.resolve_output_dim(output_dim);
    Eigen::MatrixXd diff = eval_operator(spec, u, u, m) + eval_operator(spec, v, v, m) -
                           eval_operator(spec, u, v, m) - eval_operator(spec, v, u, m);
    diff = 0.5 * (diff + diff.transpose());

    KernelMetricSample sample;
    sample.u = u;
    sample.v = v;
    if (m == 1) {
        sample.metric = std::sqrt(std::abs(diff(0, 0)));
    } else {
        sample.metric = std::sqrt(spectral_norm(SymMatrix(std::move(diff))));
    }
    sample.bound = (u - v).norm();
    sample.violated = sample.metric > sample.bound * (1.0 + kViolationTol);
    return sample;
}

NonexpansiveAudit audit_nonexpansive(const KernelSpec& spec, const InputSampler& sampler,
                                     long trials, std::uint64_t seed, int output_dim) {
    if (trials < 1) throw std::invalid_argument("audit_nonexpansive requires trials >= 1");
    const int m = spec.resolve_output_dim(output_dim);

    Rng rng(seed);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
    pairs.reserve(static_cast<std::size_t>(trials) + 8);
    for (long t = 0; t < trials; ++t) {
        Eigen::VectorXd u = sampler(rng);
        Eigen::VectorXd v = sampler(rng);
        pairs.emplace_back(std::move(u), std::move(v));
    }

    // Deterministic near-coincident probes. Small separations are where the
    // sigma / power-law thresholds bite, and random pairs almost never land
    // there.
    const int dim = static_cast<int>(pairs.front().first.size());
    for (const double delta : {1e-3, 1e-1, 1.0, 10.0}) {
        Eigen::VectorXd origin = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd shifted = origin;
        shifted[0] += delta;
        pairs.emplace_back(origin, shifted);

        Eigen::VectorXd base = Eigen::VectorXd::Ones(dim);
        Eigen::VectorXd step =
            base + Eigen::VectorXd::Constant(dim, delta / std::sqrt(static_cast<double>(dim)));
        pairs.emplace_back(std::move(base), std::move(step));
    }

    std::vector<KernelMetricSample> samples(pairs.size());
    detail::parallel_for(0, static_cast<std::ptrdiff_t>(pairs.size()),
                         [&](std::ptrdiff_t i) {
                             samples[i] = kernel_metric(spec, pairs[i].first, pairs[i].second, m);
                         });

    NonexpansiveAudit report;
    report.trials = trials;
    report.seed = seed;
    for (auto& sample : samples) {
        if (sample.violated) report.violations.push_back(std::move(sample));
    }
    std::stable_sort(report.violations.begin(), report.violations.end(),
                     [](const KernelMetricSample& a, const KernelMetricSample& b) {
                         return a.metric - a.bound > b.metric - b.bound;
                     });
    report.pass = report.violations.empty();
    return report;
}

PsdAudit audit_psd_gram(const SymMatrix& gram) {
    const EigDecomp eig = eig_sym(gram);
    PsdAudit report;
    report.min_eig = eig.eigenvalues[0];
    report.max_eig = eig.eigenvalues[gram.dim() - 1];
    report.pass = report.min_eig >= -1e-8 * std::max(1.0, report.max_eig);
    return report;
}

PsdAudit audit_psd(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& inputs,
                   int output_dim) {
    if (inputs.empty()) throw std::invalid_argument("audit_psd requires at least one input");
    const GramMatrix gram = assemble_gram(spec, inputs, output_dim);
    // For base (x) I the spectrum equals the base spectrum, so auditing the
    // base is exact and cheaper.
    return audit_psd_gram(gram.is_kronecker() ? gram.base() : gram.dense());
}

namespace detail {

std::optional<std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>>
scalar_identity_factor(const KernelSpec& spec, int output_dim) {
    using Fn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
    const auto multiple_of_identity = [](const Eigen::MatrixXd& m) -> std::optional<double> {
        const double c = m(0, 0);
        const double tol = 1e-14 * std::max(1.0, std::abs(c));
        Eigen::MatrixXd residual = m - c * Eigen::MatrixXd::Identity(m.rows(), m.cols());
        if (residual.cwiseAbs().maxCoeff() <= tol) return c;
        return std::nullopt;
    };

    switch (spec.variant()) {
        case KernelSpec::Variant::ScalarTimesOperator: {
            if (auto c = multiple_of_identity(spec.r_matrix())) {
                const KernelSpec base = spec.base();
                const double factor = *c;
                return Fn{[base, factor](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                    return eval_scalar(base, u, v) * factor;
                }};
            }
            return std::nullopt;
        }
        case KernelSpec::Variant::Conjugated: {
            const Eigen::MatrixXd rrt = spec.r_matrix() * spec.r_matrix().transpose();
            if (auto c = multiple_of_identity(rrt)) {
                const KernelSpec base = spec.base();
                const double factor = *c;
                return Fn{[base, factor](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                    return eval_scalar(base, u, v) * factor;
                }};
            }
            return std::nullopt;
        }
        case KernelSpec::Variant::ConvexSum: {
            std::vector<std::pair<double, Fn>> parts;
            for (const auto& term : spec.terms()) {
                auto part = scalar_identity_factor(*term.kernel, output_dim);
                if (!part) return std::nullopt;
                parts.emplace_back(term.weight, std::move(*part));
            }
            return Fn{[parts](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                double acc = 0.0;
                for (const auto& [weight, fn] : parts) acc += weight * fn(u, v);
                return acc;
            }};
        }
        default:
            if (spec.is_scalar()) {
                const KernelSpec base = spec;
                return Fn{[base](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                    return eval_scalar(base, u, v);
                }};
            }
            return std::nullopt;
    }
}

} // namespace detail

} // namespace lipkern
