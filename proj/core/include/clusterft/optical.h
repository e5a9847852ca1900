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

// Nondeterministic entangling gates, dangling-node cluster growth and the
// postselected-gate threshold analysis.

#ifndef CLUSTERFT_OPTICAL_H
#define CLUSTERFT_OPTICAL_H

#include <optional>
#include <utility>
#include <vector>

#include "clusterft/cluster.h"
#include "clusterft/linalg.h"
#include "clusterft/noise.h"

namespace clusterft {

struct GrowthParams {
    /// Dangling nodes per base; k - 1 of them are used for attempts.
    size_t k = 2;
    double p_f = 0.5;
    size_t trials = 100000;
    uint64_t seed = 0;

    void validate() const;
};

struct ThresholdParams {
    double eta_th = 1e-3;
    double c1 = 50;
    double c2 = 5;

    void validate() const;
};

/// Forced outcome of a nondeterministic CZ (tests and branch enumeration).
struct NondetForce {
    bool success = true;
    int m_a = 0;
    int m_b = 0;
};

struct NondetResult {
    bool success = false;
    /// Computational-basis outcomes on failure.
    int m_a = 0;
    int m_b = 0;
    StateVector state;
    ClusterGraph graph;
};

/// Attempts CZ between nodes `a` and `b` of a prepared graph state. Success
/// (probability 1 - p_f) adds the edge; failure measures both nodes in the
/// computational basis, applies the Z byproducts and removes them.
NondetResult nondet_cz(
    const StateVector &state,
    const ClusterGraph &graph,
    int a,
    int b,
    double p_f,
    std::optional<NondetForce> forced,
    uint64_t seed);

/// Probability that every level of an adjoin succeeds within k - 1 attempts.
double adjoin_success_prob(size_t k, double p_f, size_t levels);

struct GrowthEstimate {
    double p_hat = 0;
    double ci_low = 0;
    double ci_high = 0;
    /// Fraction of single-level adjoins that ended with a defect.
    double defect_rate = 0;
    double closed_form = 0;
    size_t trials = 0;
};

/// Bernoulli Monte Carlo of the adjoin protocol; 95% Wilson interval.
GrowthEstimate monte_carlo_growth(const GrowthParams &params, size_t levels);

struct AdjoinCheck {
    size_t branches = 0;
    size_t successes = 0;
    double max_residual = 0;
};

/// State-level replay of the adjoin protocol on every success/failure
/// pattern (k <= 3, levels <= 2). Each branch is compared with the graph
/// state of the expected success or defect cluster.
AdjoinCheck adjoin_state_check(size_t k, size_t levels, uint64_t seed, size_t samples_per_pattern = 2);

struct DanglingRun {
    /// True when some level exhausted its attempts; the run stops there.
    bool defect = false;
    size_t attempts = 0;
    size_t failures = 0;
    size_t peak_qubits = 0;
};

/// Runs a cluster computation built from microclusters with k dangling nodes
/// per base. Bases sit in odd layers; nondeterministic CZs attach the next
/// base to a dangling node, which then plays the even-layer node. Layers are
/// measured two at a time. `exec` must be constructed by the caller with an
/// empty graph and the environment reserve of `ctx`.
DanglingRun run_dangling(
    Execution &exec, const ClusterGraph &target, size_t k, double p_f, TrajectoryContext &ctx);

/// Checks that `target` can be realized by `run_dangling`.
void validate_dangling_target(const ClusterGraph &target);

struct PostselectAnalysis {
    double p = 0;
    Mat v;
    Vec beta_prime;
    Vec beta_second;
    double residual = 0;
};

/// Writes U (|psi> (x) |beta>) = sqrt(p) V|psi>|beta'> + sqrt(1-p)|psi'>|beta''>.
/// U acts on A (x) B with A the more significant factor; `b_dim` is dim B.
/// Without `herald` the eigenvectors of the ancilla output state and the
/// computational basis states are tried; the valid decomposition with the
/// largest p wins.
PostselectAnalysis postselect_analyze(
    const Mat &u, size_t b_dim, const Vec &beta, std::optional<Vec> herald = std::nullopt);

struct CompanionW {
    Mat w;
    double achieved = 0;
    /// sqrt(2 (1 - sqrt p)).
    double bound = 0;
};

/// Ancilla unitary with W|beta> = |beta'>, so ||U - V (x) W|| on (.) (x) |beta> meets the bound.
CompanionW companion_w(const Mat &u, const PostselectAnalysis &analysis, const Vec &beta);

double adjoin_gap(size_t k, double p_f);
double effective_noise(double eta, size_t k, double p_f, const ThresholdParams &tp);
double ocs_threshold(const ThresholdParams &tp, double p_f, size_t k);
/// Smallest k in [2, k_max] with a positive threshold; nullopt if none.
std::optional<size_t> min_k_positive(const ThresholdParams &tp, double p_f, size_t k_max);
/// k maximizing the threshold over [2, k_max].
std::pair<size_t, double> optimize_k(const ThresholdParams &tp, double p_f, size_t k_max);

}  // namespace clusterft

#endif
