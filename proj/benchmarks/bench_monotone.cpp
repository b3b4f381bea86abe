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

#include <benchmark/benchmark.h>

#include "lipkern/hodgkin.hpp"
#include "lipkern/monotone.hpp"
#include "lipkern/sampling.hpp"

using namespace lipkern;

namespace {

// Picard cost grows with the contraction constant; the ell argument is in
// hundredths (90 -> 0.90).
void BM_PicardSimulate(benchmark::State& state) {
    const double ell = static_cast<double>(state.range(0)) / 100.0;
    Rng rng(3);
    Dataset data;
    for (int i = 0; i < 8; ++i) {
        const Eigen::VectorXd u = rng.uniform_vector(4, -1.0, 1.0);
        data.inputs.push_back(u);
        Eigen::VectorXd y(4);
        for (int k = 0; k < 4; ++k) y[k] = std::tanh(u[k]);
        data.outputs.push_back(y);
    }
    const MonotoneModel model = fit_monotone(KernelSpec::scaled_laplacian(), data, ell);
    const Eigen::VectorXd probe = rng.uniform_vector(4, -1.0, 1.0);
    long iters = 0;
    for (auto _ : state) {
        const SimulateResult result = simulate(model, probe);
        iters = result.iters;
        benchmark::DoNotOptimize(result.y_star);
    }
    state.counters["iters"] = static_cast<double>(iters);
}

void BM_ReproducePipeline(benchmark::State& state) {
    const hodgkin::Params params;
    hodgkin::ReproduceConfig config;
    config.monotonicity_trials = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hodgkin::reproduce_paper(params, config));
    }
}

} // namespace

BENCHMARK(BM_PicardSimulate)->Arg(50)->Arg(90)->Arg(99);
BENCHMARK(BM_ReproducePipeline)->Arg(1)->Arg(100);

BENCHMARK_MAIN();
