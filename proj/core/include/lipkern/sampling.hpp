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

#ifndef LIPKERN_SAMPLING_HPP
#define LIPKERN_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Core>

namespace lipkern {

/// Seeded random generator used by every sampling routine in the library.
///
/// The engine is std::mt19937_64 and uniform doubles are produced by the
/// 53-bit mapping (x >> 11) * 2^-53, so streams are identical across
/// platforms for a given seed. All CLI randomness flows through one of
/// these, constructed from the run's --seed flag.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Standard normal via Box-Muller on the deterministic uniform stream.
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Eigen::VectorXd uniform_vector(int dim, double lo, double hi) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Eigen::VectorXd gaussian_vector(int dim) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

private:
    std::mt19937_64 engine_;
};

/// Draws one input vector from some distribution.
using InputSampler = std::function<Eigen::VectorXd(Rng&)>;

/// Uniform sampler over the box [lo, hi]^dim.
inline InputSampler make_uniform_box_sampler(int dim, double lo, double hi) {
    return [dim, lo, hi](Rng& rng) { return rng.uniform_vector(dim, lo, hi); };
}

} // namespace lipkern

#endif // LIPKERN_SAMPLING_HPP
