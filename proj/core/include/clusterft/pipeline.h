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

// End-to-end orchestration: circuit -> canonical form -> cluster -> scheduled
// noisy execution -> distribution comparison.

#ifndef CLUSTERFT_PIPELINE_H
#define CLUSTERFT_PIPELINE_H

#include <optional>
#include <string>
#include <vector>

#include "clusterft/compiler.h"
#include "clusterft/noise.h"
#include "json.hpp"

namespace clusterft {

enum class ScheduleKind { OneBuffered, TwoAtATime, Dangling };

const char *schedule_kind_name(ScheduleKind kind);
ScheduleKind schedule_kind_from_name(const std::string &name);

struct PipelineConfig {
    ScheduleKind schedule = ScheduleKind::OneBuffered;
    NoiseModel model;
    /// Trajectories per seed.
    size_t shots = 64;
    size_t seeds = 50;
    uint64_t seed = 0;
    /// Dangling nodes per base (dangling schedule only).
    size_t k = 2;
    /// Probability of a classical frame-bit flip per measurement.
    double frame_flip_prob = 0;
    /// 0 picks the hardware concurrency.
    size_t threads = 0;
    bool timing = false;

    void validate() const;
    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static PipelineConfig from_json(const nlohmann::json &j);
};

struct RunReport {
    PipelineConfig config;
    nlohmann::json circuit;
    /// Kolmogorov distance per seed, in seed order.
    std::vector<double> distances;
    double median = 0;
    double q25 = 0;
    double q75 = 0;
    double mean = 0;
    AuditResult audit;
    size_t logged_ops = 0;
    /// Noisy locations in the qb and qc blocks.
    size_t c = 0;
    size_t c_prime = 0;
    std::optional<double> seconds;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// Canonical circuit for the schedule; dangling execution gets parity pads.
Circuit compile_for(const Circuit &circuit, ScheduleKind kind);

/// One trajectory over `graph`. The caller builds `exec` with the
/// environment reserve of `ctx` (and an empty graph for the dangling kind).
/// Returns false when a dangling run hit a defect.
bool execute_schedule(Execution &exec, const ClusterGraph &graph, ScheduleKind kind, size_t k, TrajectoryContext &ctx);

struct BranchCheck {
    size_t branches = 0;
    size_t measurements = 0;
    /// Largest ||sigma^dag output - expected|| over branches (phase exact).
    double max_error = 0;
};

/// Replays a noiseless execution once per forced-outcome pattern and compares
/// the corrected output with `expected` on every branch.
BranchCheck check_all_branches(
    const ClusterGraph &graph, ScheduleKind kind, size_t k, const Vec &expected, size_t max_branches = 1u << 16);

/// Linear-interpolated quantile of unsorted data.
double quantile(std::vector<double> values, double q);

RunReport run_end_to_end(const Circuit &circuit, const PipelineConfig &config);

}  // namespace clusterft

#endif
