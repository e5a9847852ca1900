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

#ifndef CLUSTERFT_NOISE_H
#define CLUSTERFT_NOISE_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <functional>

#include "clusterft/cluster.h"

namespace clusterft {

enum class NoiseMode { Off, Random, Adversarial };

const char *noise_mode_name(NoiseMode mode);
NoiseMode noise_mode_from_name(const std::string &name);

struct NoiseModel {
    double eta = 0;
    size_t env_qubits_per_level = 1;
    NoiseMode mode = NoiseMode::Off;
    uint64_t seed = 0;
    /// Adversarial generators keyed by joint dimension; rescaled to unit norm.
    std::map<size_t, Mat> generators;

    void validate() const;
};

/// Rotation angle giving op_norm(exp(i eps H) - I) = eta for unit-norm Hermitian H.
double calibrated_epsilon(double eta);

/// Level -> environment qubits (register slots); environments are disjoint.
class EnvRegistry {
   public:
    void assign(int level, const std::vector<size_t> &qubits);
    /// Consecutive slots starting at `first_qubit`, `per_level` per level.
    static EnvRegistry allocate(const std::vector<int> &levels, size_t per_level, size_t first_qubit = 0);

    const std::vector<size_t> &env(int level) const;
    /// Union of the environments of `levels`, in the given level order.
    std::vector<size_t> env_of(const std::vector<int> &levels) const;
    const std::map<int, std::vector<size_t>> &levels() const {
        return envs_;
    }
    size_t total_qubits() const;

   private:
    std::map<int, std::vector<size_t>> envs_;
};

/// exp(i eps H) (ideal (x) I_env) on targets (x) env(levels); eps = 2 asin(eta / 2).
Mat perturb(
    const Mat &ideal, const std::vector<int> &levels, const NoiseModel &model, const EnvRegistry &envs, uint64_t seed);

struct NoisyOpRecord {
    std::string name;
    /// Levels of the system qubits the operation touches.
    std::vector<int> system_levels;
    std::vector<size_t> env_qubits;
    std::vector<int> declared_levels;
};

/// Applies perturb(ideal) to system qubits `targets` plus the environments of `levels` and logs it.
void apply_noisy(
    StateVector &state,
    const Mat &ideal,
    const std::vector<size_t> &targets,
    const std::vector<int> &target_levels,
    const std::vector<int> &levels,
    const NoiseModel &model,
    const EnvRegistry &envs,
    uint64_t seed,
    const std::string &name,
    std::vector<NoisyOpRecord> *log);

struct PrepFragment {
    Vec state;
    /// Noise operator on (level qubit) (x) env(level).
    Mat noise;
};

PrepFragment noisy_prep_plus(int level, const NoiseModel &model, const EnvRegistry &envs, uint64_t seed);

/// Noisy memory step on `qubit` and env(level), then a perfect rotated measurement.
MeasureResult noisy_measure(
    const StateVector &state,
    size_t qubit,
    int level,
    const Mat &basis_rotation,
    const NoiseModel &model,
    const EnvRegistry &envs,
    std::optional<int> forced,
    uint64_t seed,
    std::vector<NoisyOpRecord> *log = nullptr);

struct AuditResult {
    bool ok = true;
    std::vector<std::string> violations;
};

AuditResult locality_audit(const std::vector<NoisyOpRecord> &log, const EnvRegistry &envs);

/// Per-trajectory execution context: noise, forced outcomes, the op log and classical frame noise.
struct TrajectoryContext {
    NoiseModel model;
    EnvRegistry envs;
    std::vector<NoisyOpRecord> log;
    /// Supplies forced outcomes; empty or nullopt means sample.
    std::function<std::optional<int>()> forced;
    uint64_t seed = 0;
    uint64_t counter = 0;
    /// Probability of flipping one frame bit after each measurement.
    double frame_flip_prob = 0;

    uint64_t next_seed() {
        return derive_seed(seed, counter++);
    }
    std::optional<int> next_forced() {
        return forced ? forced() : std::nullopt;
    }
    bool noisy() const {
        return model.mode != NoiseMode::Off && model.eta > 0;
    }
};

/// Prepares |+> nodes, each followed by a noisy memory step on its level.
void noisy_prepare(Execution &exec, const std::vector<int> &ids, TrajectoryContext &ctx);
/// Perfect CZ per edge followed by a noise step on both endpoint levels.
void noisy_edges(Execution &exec, const std::vector<std::pair<int, int>> &edges, TrajectoryContext &ctx);
/// Noisy memory step on every listed live node.
void noisy_idle(Execution &exec, const std::vector<int> &ids, TrajectoryContext &ctx);
/// Noisy memory step, then the adaptive measurement with frame update.
int noisy_measure_node(Execution &exec, int id, TrajectoryContext &ctx);
/// Noisy memory step, then a Z-deletion.
int noisy_z_delete(Execution &exec, int id, TrajectoryContext &ctx);

/// Mutual information (bits) between two sequential noisy gates on one level coupled
/// through an environment qubit that is either kept or reset in between.
double env_mediated_mutual_information(double eta, bool reset_env);

}  // namespace clusterft

#endif
