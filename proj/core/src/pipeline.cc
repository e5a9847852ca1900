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

#include "clusterft/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "clusterft/blocks.h"
#include "clusterft/optical.h"

namespace clusterft {

const char *schedule_kind_name(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::OneBuffered:
            return "one_buffered";
        case ScheduleKind::TwoAtATime:
            return "two_at_a_time";
        case ScheduleKind::Dangling:
            return "dangling";
    }
    return "?";
}

ScheduleKind schedule_kind_from_name(const std::string &name) {
    if (name == "one_buffered") {
        return ScheduleKind::OneBuffered;
    }
    if (name == "two_at_a_time") {
        return ScheduleKind::TwoAtATime;
    }
    if (name == "dangling") {
        return ScheduleKind::Dangling;
    }
    throw std::invalid_argument("unknown schedule '" + name + "'");
}

void PipelineConfig::validate() const {
    model.validate();
    if (shots == 0 || seeds == 0) {
        throw std::invalid_argument("shots and seeds must be positive");
    }
    if (k < 2) {
        throw std::invalid_argument("k must be at least 2");
    }
    if (!(frame_flip_prob >= 0 && frame_flip_prob <= 1)) {
        throw std::invalid_argument("frame_flip_prob must lie in [0, 1]");
    }
}

nlohmann::json PipelineConfig::to_json() const {
    return {
        {"schedule", schedule_kind_name(schedule)},
        {"eta", model.eta},
        {"env_qubits", model.env_qubits_per_level},
        {"noise_mode", noise_mode_name(model.mode)},
        {"seed", seed},
        {"shots", shots},
        {"seeds", seeds},
        {"k", k},
        {"frame_flip_prob", frame_flip_prob},
        {"threads", threads},
        {"timing", timing},
    };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json &j) try {
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    PipelineConfig c;
    for (const auto &[key, value] : j.items()) {
        if (key == "schedule") {
            c.schedule = schedule_kind_from_name(value.get<std::string>());
        } else if (key == "eta") {
            c.model.eta = value.get<double>();
        } else if (key == "env_qubits") {
            c.model.env_qubits_per_level = value.get<size_t>();
        } else if (key == "noise_mode") {
            c.model.mode = noise_mode_from_name(value.get<std::string>());
        } else if (key == "seed") {
            c.seed = value.get<uint64_t>();
        } else if (key == "shots") {
            c.shots = value.get<size_t>();
        } else if (key == "seeds") {
            c.seeds = value.get<size_t>();
        } else if (key == "k") {
            c.k = value.get<size_t>();
        } else if (key == "frame_flip_prob") {
            c.frame_flip_prob = value.get<double>();
        } else if (key == "threads") {
            c.threads = value.get<size_t>();
        } else if (key == "timing") {
            c.timing = value.get<bool>();
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    c.validate();
    return c;
} catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("malformed config JSON: ") + e.what());
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["circuit"] = circuit;
    j["distances"] = distances;
    j["median"] = median;
    j["q25"] = q25;
    j["q75"] = q75;
    j["mean"] = mean;
    j["locality_audit"] = {{"ok", audit.ok}, {"violations", audit.violations}, {"logged_ops", logged_ops}};
    j["noisy_count"] = {{"c", c}, {"c_prime", c_prime}};
    if (seconds) {
        j["seconds"] = *seconds;
    }
    return j;
}

std::string RunReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "# clusterft simulate csv v1\n";
    os << "seed_index,distance\n";
    for (size_t i = 0; i < distances.size(); i++) {
        os << i << "," << distances[i] << "\n";
    }
    return os.str();
}

Circuit compile_for(const Circuit &circuit, ScheduleKind kind) {
    Circuit canonical = canonicalize(circuit);
    if (kind == ScheduleKind::Dangling && !validate_dangling_restriction(to_cluster(canonical)).empty()) {
        canonical = pad_for_dangling(canonical);
    }
    return canonical;
}

bool execute_schedule(Execution &exec, const ClusterGraph &graph, ScheduleKind kind, size_t k, TrajectoryContext &ctx) {
    if (kind == ScheduleKind::Dangling) {
        return !run_dangling(exec, graph, k, 0.0, ctx).defect;
    }
    Schedule s = kind == ScheduleKind::OneBuffered ? schedule_one_buffered(graph) : schedule_two_at_a_time(graph);
    for (const Phase &phase : s.phases) {
        if (phase.kind == Phase::Kind::Prepare) {
            noisy_prepare(exec, phase.nodes, ctx);
            noisy_edges(exec, phase.edges, ctx);
            continue;
        }
        for (int id : phase.nodes) {
            noisy_measure_node(exec, id, ctx);
        }
        // nodes that waited through the phase
        noisy_idle(exec, exec.live_nodes(), ctx);
    }
    return true;
}

BranchCheck check_all_branches(
    const ClusterGraph &graph, ScheduleKind kind, size_t k, const Vec &expected, size_t max_branches) {
    std::vector<int> levels = graph.levels();
    auto run = [&](uint64_t pattern, size_t &used) {
        TrajectoryContext ctx;
        ctx.envs = EnvRegistry::allocate(levels, 0, 0);
        used = 0;
        ctx.forced = [&]() -> std::optional<int> {
            if (used >= 64) {
                throw std::logic_error("too many measurements to enumerate");
            }
            return (int)((pattern >> used++) & 1u);
        };
        Execution exec(kind == ScheduleKind::Dangling ? ClusterGraph{} : graph, 0);
        if (!execute_schedule(exec, graph, kind, k, ctx)) {
            throw std::logic_error("noiseless execution hit a defect");
        }
        return exec.corrected_output();
    };
    BranchCheck out;
    size_t m = 0;
    run(0, m);
    out.measurements = m;
    if (m >= 63 || ((uint64_t)1 << m) > max_branches) {
        throw std::invalid_argument("too many branches to enumerate (" + std::to_string(m) + " measurements)");
    }
    out.branches = (size_t)1 << m;
    for (uint64_t p = 0; p < out.branches; p++) {
        size_t used = 0;
        StateVector s = run(p, used);
        if (used != m) {
            throw std::logic_error("measurement count depends on the branch");
        }
        if (s.amplitudes().size() != expected.size()) {
            throw std::invalid_argument("expected state has the wrong dimension");
        }
        out.max_error = std::max(out.max_error, (s.amplitudes() - expected).norm());
    }
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("quantile of empty data");
    }
    std::sort(values.begin(), values.end());
    double pos = q * (double)(values.size() - 1);
    size_t lo = (size_t)std::floor(pos);
    size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - (double)lo;
    return values[lo] * (1 - frac) + values[hi] * frac;
}

namespace {

struct SeedOutcome {
    double distance = 0;
    std::vector<NoisyOpRecord> log;
    EnvRegistry envs;
    std::string error;
};

SeedOutcome run_seed(
    const ClusterGraph &graph,
    const Distribution &ideal,
    const PipelineConfig &config,
    size_t seed_index) {
    SeedOutcome out;
    uint64_t seed = derive_seed(config.seed, seed_index);
    std::vector<int> levels = graph.levels();
    bool noisy = config.model.mode != NoiseMode::Off && config.model.eta > 0;
    size_t per_level = noisy ? config.model.env_qubits_per_level : 0;
    Distribution mixed;
    size_t kept = 0;
    for (size_t shot = 0; shot < config.shots; shot++) {
        TrajectoryContext ctx;
        ctx.model = config.model;
        ctx.model.seed = seed;
        ctx.envs = EnvRegistry::allocate(levels, per_level, 0);
        ctx.seed = derive_seed(seed, shot + 1);
        ctx.frame_flip_prob = config.frame_flip_prob;
        size_t reserved = ctx.envs.total_qubits();
        Execution exec(config.schedule == ScheduleKind::Dangling ? ClusterGraph{} : graph, reserved);
        bool ok = execute_schedule(exec, graph, config.schedule, config.k, ctx);
        if (shot == 0) {
            out.log = std::move(ctx.log);
            out.envs = ctx.envs;
        } else {
            for (auto &r : ctx.log) {
                out.log.push_back(std::move(r));
            }
        }
        if (!ok) {
            continue;
        }
        kept++;
        for (const auto &[key, p] : exec.corrected_distribution()) {
            mixed[key] += p;
        }
    }
    if (kept == 0) {
        out.distance = 1.0;
        return out;
    }
    for (auto &[key, p] : mixed) {
        p /= (double)kept;
    }
    out.distance = kolmogorov(mixed, ideal);
    return out;
}

}  // namespace

RunReport run_end_to_end(const Circuit &circuit, const PipelineConfig &config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();
    Circuit canonical = compile_for(circuit, config.schedule);
    ClusterGraph graph = to_cluster(canonical);
    size_t env = (config.model.mode != NoiseMode::Off ? config.model.env_qubits_per_level : 0) * graph.levels().size();
    if (graph.levels().size() + env > kMaxQubits) {
        throw std::invalid_argument("circuit too large for the simulator");
    }
    StateVector ideal_state = run_circuit(circuit);
    std::vector<size_t> qubits(circuit.n_qubits);
    for (size_t q = 0; q < qubits.size(); q++) {
        qubits[q] = q;
    }
    Distribution ideal = distribution(ideal_state, qubits);

    std::vector<SeedOutcome> outcomes(config.seeds);
    size_t workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, config.seeds);
    auto work = [&](size_t w) {
        for (size_t s = w; s < config.seeds; s += workers) {
            try {
                outcomes[s] = run_seed(graph, ideal, config, s);
            } catch (const std::exception &e) {
                outcomes[s].error = e.what();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back(work, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    RunReport r;
    r.config = config;
    r.circuit = circuit.to_json();
    r.audit.ok = true;
    for (const SeedOutcome &o : outcomes) {
        if (!o.error.empty()) {
            throw std::runtime_error("pipeline seed failed: " + o.error);
        }
        r.distances.push_back(o.distance);
        AuditResult a = locality_audit(o.log, o.envs);
        r.logged_ops += o.log.size();
        if (!a.ok) {
            r.audit.ok = false;
            r.audit.violations.insert(r.audit.violations.end(), a.violations.begin(), a.violations.end());
        }
    }
    r.median = quantile(r.distances, 0.5);
    r.q25 = quantile(r.distances, 0.25);
    r.q75 = quantile(r.distances, 0.75);
    double sum = 0;
    for (double d : r.distances) {
        sum += d;
    }
    r.mean = sum / (double)r.distances.size();
    r.c = qb(0.0).noisy_count();
    r.c_prime = qc().noisy_count();
    if (config.timing) {
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return r;
}

}  // namespace clusterft
