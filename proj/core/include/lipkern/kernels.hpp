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

#ifndef LIPKERN_KERNELS_HPP
#define LIPKERN_KERNELS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lipkern/numerics.hpp"
#include "lipkern/sampling.hpp"

namespace lipkern {

/// Declarative description of a scalar or operator-valued kernel.
///
/// Scalar kernels evaluate to a real number and act on any output dimension
/// as k(u,v) * I. Operator-valued kernels fix the output dimension through
/// their matrix factors. Composite kernels own their children; instances are
/// immutable after construction and cheap to copy.
///
/// Closed forms:
///   bilinear            <u, v>
///   gaussian            exp(-|u-v|^2 / sigma^2)
///   scaled_laplacian    (1 + |u-v|) exp(-|u-v|)
///   inverse_power       (c + |u-v|^2)^-d          (c > 0, d > 0)
///   polynomial          (c + <u, v>)^d            (c >= 0, integer d >= 1)
///   scalar_times_operator   k(u,v) * R             (R symmetric)
///   convex_sum          sum_i alpha_i K_i(u,v)     (alpha_i >= 0)
///   conjugated          R * l(u,v) * R^T = l(u,v) * R R^T  (l scalar)
///
/// claims_nonexpansive() reports whether the kernel belongs to the certified
/// nonexpansive catalogue: bilinear; gaussian with sigma >= sqrt(2);
/// scaled_laplacian; inverse_power with 2d <= c^(d+1); scalar_times_operator
/// with nonexpansive base and symmetric PSD R of norm <= 1; convex_sum of
/// nonexpansive terms with weight sum <= 1; conjugated with nonexpansive base
/// and |R| <= 1. The polynomial kernel never carries the flag; it is kept in
/// the catalogue as the standard counterexample.
class KernelSpec {
public:
    enum class Variant {
        Bilinear,
        Gaussian,
        ScaledLaplacian,
        InversePower,
        PolynomialScalar,
        ScalarTimesOperator,
        ConvexSum,
        Conjugated,
    };

    struct ConvexTerm {
        double weight;
        std::shared_ptr<const KernelSpec> kernel;
    };

    /// Default construction yields the bilinear kernel.
    KernelSpec() = default;

    static KernelSpec bilinear();
    static KernelSpec gaussian(double sigma);
    static KernelSpec scaled_laplacian();
    static KernelSpec inverse_power(double c, double d);
    static KernelSpec polynomial(double c, int degree);
    static KernelSpec scalar_times_operator(KernelSpec base, const Eigen::MatrixXd& r);
    static KernelSpec convex_sum(const std::vector<std::pair<double, KernelSpec>>& terms);
    static KernelSpec conjugated(KernelSpec base, const Eigen::MatrixXd& r);

    Variant variant() const { return variant_; }

    /// True for the five scalar-valued variants.
    bool is_scalar() const;

    /// Certified-nonexpansive flag; see the class comment for the rules.
    bool claims_nonexpansive() const { return nonexpansive_; }

    /// Output dimension fixed by matrix factors, if any. Scalar kernels
    /// return nullopt (they act on every dimension as k * I).
    std::optional<int> output_dim() const;

    /// Resolves the output dimension against a caller request. Throws when
    /// the kernel's own dimension conflicts with the request.
    int resolve_output_dim(int requested) const;

    // Parameter accessors; each is valid only for the matching variant.
    double sigma() const { return p1_; }
    double c() const { return p1_; }
    double d() const { return p2_; }
    int degree() const { return static_cast<int>(p2_); }
    const KernelSpec& base() const { return *base_; }
    const Eigen::MatrixXd& r_matrix() const { return r_; }
    const std::vector<ConvexTerm>& terms() const { return terms_; }

    std::string variant_name() const;

private:
    Variant variant_ = Variant::Bilinear;
    double p1_ = 0.0;
    double p2_ = 0.0;
    std::shared_ptr<const KernelSpec> base_;
    Eigen::MatrixXd r_;
    std::vector<ConvexTerm> terms_;
    bool nonexpansive_ = true; // matches the default (bilinear) variant
};

/// One pair probed by the nonexpansiveness audit:
/// metric = |K(u,u) - K(u,v) - K(v,u) + K(v,v)|^(1/2), bound = |u - v|.
struct KernelMetricSample {
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    double metric = 0.0;
    double bound = 0.0;
    bool violated = false; // metric > bound * (1 + 1e-9)
};

struct NonexpansiveAudit {
    std::vector<KernelMetricSample> violations; // sorted by metric - bound, largest first
    bool pass = false;
    long trials = 0;
    std::uint64_t seed = 0;
    // Sampling can only falsify: a pass is necessary, not sufficient,
    // evidence of nonexpansiveness. claims_nonexpansive() is the certificate.
    bool exhaustive = false;
};

struct PsdAudit {
    double min_eig = 0.0;
    double max_eig = 0.0;
    bool pass = false;
};

/// Evaluates a scalar kernel.
double eval_scalar(const KernelSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Evaluates any kernel as an m x m matrix. Scalar kernels give k(u,v) * I.
Eigen::MatrixXd eval_operator(const KernelSpec& spec, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v, int output_dim);

/// Computes the displacement metric for one pair. The four-term sum is
/// symmetrized before taking the spectral norm.
KernelMetricSample kernel_metric(const KernelSpec& spec, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, int output_dim);

/// Samples `trials` pairs from the sampler (seeded) plus a deterministic set
/// of near-coincident pairs at separations 1e-3, 1e-1, 1, 10, and reports
/// every pair whose metric exceeds its bound.
NonexpansiveAudit audit_nonexpansive(const KernelSpec& spec, const InputSampler& sampler,
                                     long trials, std::uint64_t seed, int output_dim = 1);

/// Assembles the Gram matrix over the given inputs and checks its smallest
/// eigenvalue against -1e-8 * max(1, lambda_max).
PsdAudit audit_psd(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& inputs,
                   int output_dim);

/// Same check for an already-assembled Gram matrix (used to audit kernels
/// outside the catalogue).
PsdAudit audit_psd_gram(const SymMatrix& gram);

namespace detail {
/// Non-null when the kernel acts as scalar * identity on dimension m; the
/// returned callable evaluates that scalar factor. Enables the per-coordinate
/// Gram fast path.
std::optional<std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>>
scalar_identity_factor(const KernelSpec& spec, int output_dim);
} // namespace detail

} // namespace lipkern

#endif // LIPKERN_KERNELS_HPP
