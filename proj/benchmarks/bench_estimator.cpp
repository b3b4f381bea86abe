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

#include "lipkern/estimator.hpp"
#include "lipkern/sampling.hpp"

using namespace lipkern;

namespace {

Dataset make_dataset(int n, int d, int m, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    for (int i = 0; i < n; ++i) {
        data.inputs.push_back(rng.uniform_vector(d, -3.0, 3.0));
        data.outputs.push_back(rng.gaussian_vector(m));
    }
    return data;
}

void BM_AssembleGramScalar(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset data = make_dataset(n, 8, 4, 1);
    const KernelSpec spec = KernelSpec::scaled_laplacian();
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_gram(spec, data.inputs, 4));
    }
    state.SetComplexityN(n);
}

void BM_AssembleGramOperator(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset data = make_dataset(n, 8, 4, 1);
    Rng rng(2);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(4, 4);
    r.diagonal() << 1.0, 0.8, 0.6, 0.4;
    const KernelSpec spec = KernelSpec::scalar_times_operator(KernelSpec::scaled_laplacian(), r);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_gram(spec, data.inputs, 4));
    }
    state.SetComplexityN(n);
}

void BM_Fit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset data = make_dataset(n, 8, 4, 3);
    const KernelSpec spec = KernelSpec::scaled_laplacian();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(spec, data, 1e-3));
    }
    state.SetComplexityN(n);
}

void BM_TuneGamma(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset data = make_dataset(n, 8, 2, 5);
    const KernelSpec spec = KernelSpec::gaussian(2.0);
    const GramMatrix gram = assemble_gram(spec, data.inputs, 2);
    Eigen::VectorXd ybar(n * 2);
    for (int i = 0; i < n; ++i) ybar.segment(i * 2, 2) = data.outputs[i];
    const double budget = 0.5 * rkhs_norm_at(gram, ybar, 1e-10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tune_gamma(gram, ybar, budget));
    }
}

void BM_Predict(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset data = make_dataset(n, 8, 4, 7);
    const FittedModel model = fit(KernelSpec::scaled_laplacian(), data, 1e-3);
    Rng rng(11);
    const Eigen::VectorXd u = rng.uniform_vector(8, -3.0, 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(model, u));
    }
}

} // namespace

BENCHMARK(BM_AssembleGramScalar)->Arg(8)->Arg(32)->Arg(128)->Complexity();
BENCHMARK(BM_AssembleGramOperator)->Arg(8)->Arg(32)->Arg(128)->Complexity();
BENCHMARK(BM_Fit)->Arg(8)->Arg(32)->Arg(128)->Complexity();
BENCHMARK(BM_TuneGamma)->Arg(8)->Arg(32);
BENCHMARK(BM_Predict)->Arg(8)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
