// Copyright 2026 The clusterft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "clusterft/blocks.h"
#include "clusterft/compiler.h"
#include "clusterft/error_strength.h"
#include "clusterft/linalg.h"
#include "clusterft/optical.h"
#include "clusterft/pipeline.h"
#include "clusterft/simulator.h"

namespace clusterft {
namespace {

void BM_OpNorm(benchmark::State &state) {
    Mat m = random_matrix((size_t)state.range(0), (size_t)state.range(0), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(op_norm(m));
    }
}
BENCHMARK(BM_OpNorm)->Arg(4)->Arg(16)->Arg(64);

void BM_ApplyGate(benchmark::State &state) {
    size_t n = (size_t)state.range(0);
    StateVector s = StateVector::plus(n);
    Mat g = gates::hadamard() * gates::z_rot(0.3);
    size_t q = 0;
    for (auto _ : state) {
        apply_inplace(s, g, {q});
        q = (q + 1) % n;
    }
    state.SetItemsProcessed((int64_t)state.iterations() * (int64_t)s.dim());
}
BENCHMARK(BM_ApplyGate)->Arg(8)->Arg(14)->Arg(20);

void BM_Delta(benchmark::State &state) {
    size_t e_dim = (size_t)state.range(0);
    Mat u = haar_unitary(2, 1);
    Mat v = expm_i_hermitian(random_hermitian_unit(2 * e_dim, 2), 0.05) * kron(u, gates::identity(e_dim));
    DeltaOptions o;
    o.starts = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(delta(u, v, {2, e_dim}, o).upper_bound);
    }
}
BENCHMARK(BM_Delta)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_VerifyQb(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_identity(qb(0.4), gates::hz(0.4), {"Q"}, {{"M", plus_state()}}).residual);
    }
}
BENCHMARK(BM_VerifyQb)->Unit(benchmark::kMillisecond);

void BM_Growth(benchmark::State &state) {
    GrowthParams p;
    p.k = 4;
    p.p_f = 0.5;
    p.trials = 100000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_growth(p, 2).p_hat);
    }
}
BENCHMARK(BM_Growth)->Unit(benchmark::kMillisecond);

void BM_EndToEnd(benchmark::State &state) {
    ScheduleKind kind = (ScheduleKind)state.range(0);
    Circuit c = random_stage0_circuit(2, 4, 3);
    PipelineConfig cfg;
    cfg.schedule = kind;
    cfg.model.mode = NoiseMode::Random;
    cfg.model.eta = 0.05;
    cfg.seeds = 4;
    cfg.shots = 4;
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_end_to_end(c, cfg).median);
    }
    state.SetLabel(schedule_kind_name(kind));
}
BENCHMARK(BM_EndToEnd)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_AllBranches(benchmark::State &state) {
    Circuit c = random_canonical_circuit(2, 4, 11, true);
    ClusterGraph g = to_cluster(c);
    Vec expect = run_circuit(c).amplitudes();
    ScheduleKind kind = (ScheduleKind)state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_all_branches(g, kind, 2, expect).max_error);
    }
    state.SetLabel(schedule_kind_name(kind));
}
BENCHMARK(BM_AllBranches)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace clusterft

BENCHMARK_MAIN();
