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

#include "clusterft/noise.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace clusterft {

const char *noise_mode_name(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::Off:
            return "off";
        case NoiseMode::Random:
            return "random";
        case NoiseMode::Adversarial:
            return "adversarial";
    }
    return "off";
}

NoiseMode noise_mode_from_name(const std::string &name) {
    if (name == "off") {
        return NoiseMode::Off;
    }
    if (name == "random") {
        return NoiseMode::Random;
    }
    if (name == "adversarial") {
        return NoiseMode::Adversarial;
    }
    throw std::invalid_argument("unknown noise mode '" + name + "'");
}

void NoiseModel::validate() const {
    if (!(eta >= 0 && eta <= 2)) {
        throw std::invalid_argument("noise strength eta must lie in [0, 2]");
    }
    for (const auto &[dim, h] : generators) {
        if ((size_t)h.rows() != dim || !is_hermitian(h, 1e-10)) {
            throw std::invalid_argument("adversarial generator must be Hermitian of its key dimension");
        }
    }
}

double calibrated_epsilon(double eta) {
    if (!(eta >= 0 && eta <= 2)) {
        throw std::invalid_argument("noise strength eta must lie in [0, 2]");
    }
    return 2 * std::asin(eta / 2);
}

void EnvRegistry::assign(int level, const std::vector<size_t> &qubits) {
    for (const auto &[other, qs] : envs_) {
        if (other == level) {
            continue;
        }
        for (size_t q : qubits) {
            if (std::find(qs.begin(), qs.end(), q) != qs.end()) {
                throw std::invalid_argument(
                    "environment collision: qubit " + std::to_string(q) + " shared by levels " +
                    std::to_string(other) + " and " + std::to_string(level));
            }
        }
    }
    envs_[level] = qubits;
}

EnvRegistry EnvRegistry::allocate(const std::vector<int> &levels, size_t per_level, size_t first_qubit) {
    EnvRegistry r;
    size_t next = first_qubit;
    for (int l : levels) {
        std::vector<size_t> qs;
        for (size_t k = 0; k < per_level; k++) {
            qs.push_back(next++);
        }
        r.assign(l, qs);
    }
    return r;
}

const std::vector<size_t> &EnvRegistry::env(int level) const {
    auto it = envs_.find(level);
    if (it == envs_.end()) {
        throw std::out_of_range("no environment registered for level " + std::to_string(level));
    }
    return it->second;
}

std::vector<size_t> EnvRegistry::env_of(const std::vector<int> &levels) const {
    std::vector<size_t> out;
    std::set<int> seen;
    for (int l : levels) {
        if (!seen.insert(l).second) {
            continue;
        }
        for (size_t q : env(l)) {
            out.push_back(q);
        }
    }
    return out;
}

size_t EnvRegistry::total_qubits() const {
    size_t n = 0;
    for (const auto &[l, qs] : envs_) {
        n += qs.size();
    }
    return n;
}

Mat perturb(
    const Mat &ideal, const std::vector<int> &levels, const NoiseModel &model, const EnvRegistry &envs, uint64_t seed) {
    model.validate();
    if (levels.empty()) {
        throw std::invalid_argument("perturb needs at least one level");
    }
    if (!is_unitary(ideal, 1e-9)) {
        throw std::invalid_argument("ideal operation must be unitary");
    }
    size_t env_qubits = envs.env_of(levels).size();
    size_t total_qubits = env_qubits;
    for (size_t d = (size_t)ideal.rows(); d > 1; d >>= 1) {
        total_qubits++;
    }
    if (total_qubits > 12) {
        throw std::length_error("perturbed operation exceeds the joint dimension limit");
    }
    Mat base = kron(ideal, gates::identity((size_t)1 << env_qubits));
    if (model.mode == NoiseMode::Off || model.eta == 0) {
        return base;
    }
    size_t dim = (size_t)base.rows();
    Mat h;
    if (model.mode == NoiseMode::Adversarial) {
        auto it = model.generators.find(dim);
        if (it == model.generators.end()) {
            throw std::invalid_argument("no adversarial generator of dimension " + std::to_string(dim));
        }
        double n = op_norm(it->second);
        if (n == 0) {
            throw std::invalid_argument("adversarial generator is zero");
        }
        h = it->second / n;
    } else {
        h = random_hermitian_unit(dim, derive_seed(model.seed, seed));
    }
    return expm_i_hermitian(h, calibrated_epsilon(model.eta)) * base;
}

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
    std::vector<NoisyOpRecord> *log) {
    Mat v = perturb(ideal, levels, model, envs, seed);
    std::vector<size_t> all = targets;
    std::vector<size_t> env = envs.env_of(levels);
    all.insert(all.end(), env.begin(), env.end());
    apply_inplace(state, v, all);
    if (log != nullptr) {
        log->push_back(NoisyOpRecord{name, target_levels, env, levels});
    }
}

PrepFragment noisy_prep_plus(int level, const NoiseModel &model, const EnvRegistry &envs, uint64_t seed) {
    Vec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return PrepFragment{plus, perturb(gates::identity(2), {level}, model, envs, seed)};
}

MeasureResult noisy_measure(
    const StateVector &state,
    size_t qubit,
    int level,
    const Mat &basis_rotation,
    const NoiseModel &model,
    const EnvRegistry &envs,
    std::optional<int> forced,
    uint64_t seed,
    std::vector<NoisyOpRecord> *log) {
    StateVector s = state;
    apply_noisy(s, gates::identity(2), {qubit}, {level}, {level}, model, envs, derive_seed(seed, 1), "measure_memory", log);
    return measure(s, qubit, basis_rotation, forced, derive_seed(seed, 2));
}

AuditResult locality_audit(const std::vector<NoisyOpRecord> &log, const EnvRegistry &envs) {
    AuditResult out;
    for (size_t i = 0; i < log.size(); i++) {
        const auto &r = log[i];
        std::set<int> declared(r.declared_levels.begin(), r.declared_levels.end());
        for (int l : r.system_levels) {
            if (!declared.count(l)) {
                out.violations.push_back(
                    "op " + std::to_string(i) + " (" + r.name + ") touches undeclared level " + std::to_string(l));
            }
        }
        std::set<size_t> allowed;
        for (int l : declared) {
            auto it = envs.levels().find(l);
            if (it != envs.levels().end()) {
                allowed.insert(it->second.begin(), it->second.end());
            }
        }
        for (size_t q : r.env_qubits) {
            if (!allowed.count(q)) {
                out.violations.push_back(
                    "op " + std::to_string(i) + " (" + r.name + ") touches environment qubit " + std::to_string(q) +
                    " outside its levels");
            }
        }
    }
    out.ok = out.violations.empty();
    return out;
}

namespace {

// Environment qubits of the registered levels among `levels`; noiseless runs may skip registration.
std::vector<size_t> known_env(const EnvRegistry &envs, const std::vector<int> &levels) {
    std::vector<int> known;
    for (int l : levels) {
        if (envs.levels().count(l)) {
            known.push_back(l);
        }
    }
    return envs.env_of(known);
}

void memory_step(Execution &exec, int id, TrajectoryContext &ctx, const char *name) {
    int level = exec.graph().node(id).level;
    if (!ctx.noisy()) {
        ctx.log.push_back(NoisyOpRecord{name, {level}, known_env(ctx.envs, {level}), {level}});
        return;
    }
    apply_noisy(
        exec.mutable_state(), gates::identity(2), {exec.slot(id)}, {level}, {level}, ctx.model, ctx.envs,
        ctx.next_seed(), name, &ctx.log);
}

}  // namespace

void noisy_prepare(Execution &exec, const std::vector<int> &ids, TrajectoryContext &ctx) {
    exec.prepare_nodes(ids);
    for (int id : ids) {
        memory_step(exec, id, ctx, "prep_memory");
    }
}

void noisy_edges(Execution &exec, const std::vector<std::pair<int, int>> &edges, TrajectoryContext &ctx) {
    for (const auto &[a, b] : edges) {
        exec.apply_edges({{a, b}});
        int la = exec.graph().node(a).level;
        int lb = exec.graph().node(b).level;
        std::vector<int> levels = la == lb ? std::vector<int>{la} : std::vector<int>{la, lb};
        if (!ctx.noisy()) {
            ctx.log.push_back(NoisyOpRecord{"cz", {la, lb}, known_env(ctx.envs, levels), levels});
            continue;
        }
        apply_noisy(
            exec.mutable_state(), gates::identity(4), {exec.slot(a), exec.slot(b)}, {la, lb}, levels, ctx.model,
            ctx.envs, ctx.next_seed(), "cz", &ctx.log);
    }
}

void noisy_idle(Execution &exec, const std::vector<int> &ids, TrajectoryContext &ctx) {
    for (int id : ids) {
        memory_step(exec, id, ctx, "idle_memory");
    }
}

int noisy_measure_node(Execution &exec, int id, TrajectoryContext &ctx) {
    memory_step(exec, id, ctx, "measure_memory");
    int level = exec.graph().node(id).level;
    int m = exec.measure(id, ctx.next_forced(), ctx.next_seed());
    if (ctx.frame_flip_prob > 0) {
        std::mt19937_64 rng(ctx.next_seed());
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(rng) < ctx.frame_flip_prob) {
            FrameBits &b = exec.mutable_frame().bits[level];
            if (u(rng) < 0.5) {
                b.x ^= 1;
            } else {
                b.z ^= 1;
            }
        }
    }
    return m;
}

int noisy_z_delete(Execution &exec, int id, TrajectoryContext &ctx) {
    memory_step(exec, id, ctx, "delete_memory");
    return exec.z_delete(id, ctx.next_forced(), ctx.next_seed());
}

namespace {

double mutual_information(const Distribution &joint) {
    double pa[2] = {0, 0};
    double pb[2] = {0, 0};
    for (const auto &[k, p] : joint) {
        pa[k[0] - '0'] += p;
        pb[k[1] - '0'] += p;
    }
    double mi = 0;
    for (const auto &[k, p] : joint) {
        if (p > 0) {
            mi += p * std::log2(p / (pa[k[0] - '0'] * pb[k[1] - '0']));
        }
    }
    return std::max(0.0, mi);
}

}  // namespace

double env_mediated_mutual_information(double eta, bool reset_env) {
    double eps = calibrated_epsilon(eta);
    Mat proj1 = Mat::Zero(2, 2);
    proj1(1, 1) = 1;
    Mat first = expm_i_hermitian(kron(gates::pauli_x(), gates::pauli_x()), eps);
    Mat second = expm_i_hermitian(kron(gates::pauli_x(), proj1), eps);
    // Qubit 0 = E, 1 = A (first gate), 2 = B (second gate).
    StateVector s(3);
    apply_inplace(s, first, {1, 0});
    if (!reset_env) {
        apply_inplace(s, second, {2, 0});
        return mutual_information(distribution(s, {1, 2}));
    }
    // Resetting E to |0> is the mixture over its measured branches, each flipped back to |0>.
    Distribution joint;
    double p1 = prob_one(s, 0, gates::identity(2));
    for (int e = 0; e < 2; e++) {
        double pe = e ? p1 : 1 - p1;
        if (pe < kForcedBranchFloor) {
            continue;
        }
        StateVector post = measure(s, 0, gates::identity(2), e, 0).posterior;
        if (e) {
            apply_inplace(post, gates::pauli_x(), {0});
        }
        apply_inplace(post, second, {2, 0});
        for (const auto &[k, p] : distribution(post, {1, 2})) {
            joint[k] += pe * p;
        }
    }
    return mutual_information(joint);
}

}  // namespace clusterft
