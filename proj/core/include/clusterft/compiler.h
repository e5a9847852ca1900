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

#ifndef CLUSTERFT_COMPILER_H
#define CLUSTERFT_COMPILER_H

#include <string>
#include <vector>

#include "clusterft/cluster.h"
#include "json.hpp"

namespace clusterft {

enum class GateKind { PrepPlus, I, H, ZRot, XZ, CZ, HZ, HHCZ };

const char *gate_name(GateKind kind);
GateKind gate_kind_from_name(const std::string &name);

struct Gate {
    GateKind kind = GateKind::I;
    std::vector<size_t> qubits;
    /// ZRot: {theta}; XZ: {alpha, beta} meaning X_alpha Z_beta; HZ: {alpha}.
    std::vector<double> params;
    int slot = 0;
};

/// Every qubit starts in |+>. A PrepPlus step only marks where a qubit starts.
struct Circuit {
    size_t n_qubits = 0;
    std::vector<Gate> steps;

    int depth() const;
    /// Start slot per qubit (PrepPlus slot, otherwise 0).
    std::vector<int> start_slots() const;
    /// Checks qubit ranges, arities and slot disjointness.
    void validate() const;
    bool is_canonical() const;

    nlohmann::json to_json() const;
    static Circuit from_json(const nlohmann::json &j);
};

/// Local matrix of a gate (qubits[0] most significant). PrepPlus has none.
Mat gate_matrix(const Gate &g);
/// Full unitary of the circuit in the little-endian register basis.
Mat circuit_unitary(const Circuit &c);
/// Output state on |+>^n input.
StateVector run_circuit(const Circuit &c);

/// Rewrites into {PrepPlus, I, XZ, CZ} with ASAP slots and idle qubits filled by I.
Circuit canonicalize_stage1(const Circuit &c);
/// Full rewrite into {PrepPlus, HZ, HH_CZ}; each stage-1 slot becomes two slots.
Circuit canonicalize(const Circuit &c);

/// One level per qubit; node for gate at slot t sits in layer t + 1; output in layer depth + 1.
ClusterGraph to_cluster(const Circuit &canonical);
/// Node id used by to_cluster for (level, layer).
int cluster_node_id(const Circuit &canonical, int level, int layer);

struct Phase {
    enum class Kind { Prepare, Measure };
    Kind kind = Kind::Prepare;
    std::vector<int> layers;
    std::vector<int> nodes;
    std::vector<std::pair<int, int>> edges;
};

struct Schedule {
    std::string kind;
    std::vector<Phase> phases;

    nlohmann::json to_json() const;
};

Schedule schedule_one_buffered(const ClusterGraph &g);
Schedule schedule_two_at_a_time(const ClusterGraph &g);
/// Throws std::logic_error when the schedule breaks an ordering invariant.
void validate_schedule(const ClusterGraph &g, const Schedule &s);

/// Bridges outside odd layers and levels starting in even layers.
std::vector<std::string> validate_dangling_restriction(const ClusterGraph &g);
/// Inserts (HZ_{pi/2})^3 pads, proportional to I, until every bridge and level start lands on an odd layer.
Circuit pad_for_dangling(const Circuit &canonical);

/// Random canonical circuit; when `odd_bridges` is set, HH_CZ only occupies even slots.
Circuit random_canonical_circuit(size_t n_qubits, int depth, uint64_t seed, bool odd_bridges = false);
/// Random circuit over {I, H, Z, XZ, CZ}.
Circuit random_stage0_circuit(size_t n_qubits, int n_gates, uint64_t seed);

}  // namespace clusterft

#endif
