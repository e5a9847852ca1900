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

#ifndef CLUSTERFT_CLUSTER_H
#define CLUSTERFT_CLUSTER_H

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "clusterft/simulator.h"
#include "json.hpp"

namespace clusterft {

struct ClusterNode {
    int id = 0;
    int level = 0;
    /// 1-based column index; 0 means unlayered.
    int layer = 0;
    bool output = false;
    double angle = 0;
    bool adaptive = false;
    /// Measurement time label; nodes sharing a label may be measured in either order.
    int time_order = 0;
};

class ClusterGraph {
   public:
    void add_measured(int id, int level, int layer, double angle, bool adaptive, int time_order);
    void add_output(int id, int level, int layer);
    void add_node(const ClusterNode &node);
    void add_edge(int a, int b);

    const std::vector<ClusterNode> &nodes() const {
        return nodes_;
    }
    const std::vector<std::pair<int, int>> &edges() const {
        return edges_;
    }
    bool has_node(int id) const;
    const ClusterNode &node(int id) const;
    /// Position of the node in nodes(), which is also its qubit in prepare().
    size_t index_of(int id) const;
    std::vector<int> neighbors(int id) const;
    bool has_edge(int a, int b) const;
    /// Edge joining nodes of different levels.
    bool is_bridge(int a, int b) const;
    std::vector<int> levels() const;
    std::optional<int> output_of(int level) const;
    int max_layer() const;

    /// Turns a measured node into the output node of its level.
    void set_output(int id);
    ClusterGraph without_node(int id) const;
    /// Throws std::invalid_argument on violated invariants.
    void validate() const;

    nlohmann::json to_json() const;
    static ClusterGraph from_json(const nlohmann::json &j);

   private:
    std::vector<ClusterNode> nodes_;
    std::vector<std::pair<int, int>> edges_;
    std::map<int, size_t> index_;
};

/// |+> on every node (qubit i is nodes()[i]) followed by CZ on every edge.
StateVector prepare(const ClusterGraph &graph);
/// Same, applying the edges in the given order.
StateVector prepare(const ClusterGraph &graph, const std::vector<std::pair<int, int>> &edge_order);

struct FrameBits {
    int x = 0;
    int z = 0;
};

/// Classical byproduct record. The byproduct on the live qubit of a level is
/// X^x Z^z (Z applied first), times an overall (-1)^sign.
struct PauliFrame {
    std::map<int, FrameBits> bits;
    int sign = 0;
    /// Bridge edges already pushed through the frame.
    std::set<std::pair<int, int>> propagated;

    static PauliFrame zero(const std::vector<int> &levels);
    FrameBits at(int level) const;
};

PauliFrame frame_update(const PauliFrame &frame, int level, int m);

/// Rotation used to measure `node` under `frame`: H Z_{s alpha}, s = (-1)^x for adaptive nodes.
Mat measurement_rotation(const ClusterNode &node, const PauliFrame &frame);

struct NodeMeasurement {
    int m;
    StateVector posterior;
    PauliFrame frame;
    double prob;
};

/// Measures `node` (qubit graph.index_of(node)) and updates the frame. The
/// measured qubit stays in the register in |m>.
NodeMeasurement measure_node(
    const StateVector &state,
    const ClusterGraph &graph,
    int node,
    const PauliFrame &frame,
    std::optional<int> forced,
    uint64_t seed);

struct Deletion {
    int m;
    StateVector posterior;
    ClusterGraph graph;
};

/// Computational-basis measurement of `node`, Z^m on its neighbours, node removed.
Deletion z_delete(
    const StateVector &state, const ClusterGraph &graph, int node, std::optional<int> forced, uint64_t seed);

struct PauliCorrection {
    std::map<int, Mat> per_level;
    int sign = 0;

    /// Operator on the register whose qubit k carries qubit_levels[k].
    Mat matrix(const std::vector<int> &qubit_levels) const;
};

/// sigma = (-1)^sign (x) over levels of X^x Z^z.
PauliCorrection final_correction(const PauliFrame &frame);

/// Incremental cluster execution that only keeps live qubits in the register.
class Execution {
   public:
    /// `reserved` |0> qubits occupy the lowest register slots (e.g. environments).
    explicit Execution(ClusterGraph graph, size_t reserved = 0);

    /// Grows the graph (new levels join the frame with zero bits).
    void add_node(const ClusterNode &node);
    void add_edge(int a, int b);
    void set_output(int id);

    void prepare_nodes(const std::vector<int> &ids);
    void apply_edges(const std::vector<std::pair<int, int>> &edges);
    int measure(int id, std::optional<int> forced, uint64_t seed);
    int z_delete(int id, std::optional<int> forced, uint64_t seed);
    /// Applies an arbitrary operator to live nodes (targets[0] most significant).
    void apply_unitary(const Mat &u, const std::vector<int> &ids);

    bool is_live(int id) const {
        return slot_.count(id) > 0;
    }
    bool is_measured(int id) const {
        return measured_.count(id) > 0;
    }
    size_t slot(int id) const;
    std::vector<int> live_nodes() const;
    const StateVector &state() const {
        return state_;
    }
    StateVector &mutable_state() {
        return state_;
    }
    const PauliFrame &frame() const {
        return frame_;
    }
    PauliFrame &mutable_frame() {
        return frame_;
    }
    const ClusterGraph &graph() const {
        return graph_;
    }
    const std::vector<int> &outcomes() const {
        return outcomes_;
    }
    double branch_probability() const {
        return branch_prob_;
    }

    size_t reserved() const {
        return reserved_;
    }
    /// Output register ordered by ascending level; requires only outputs to be live.
    StateVector output_state() const;
    /// Output slots ordered by ascending level.
    std::vector<size_t> output_slots() const;
    /// Computational-basis distribution of the outputs (character i = level i) with the X part of sigma undone.
    Distribution corrected_distribution() const;
    /// sigma^dagger applied to output_state().
    StateVector corrected_output() const;

   private:
    void drop(int id, int bit);

    ClusterGraph graph_;
    size_t reserved_ = 0;
    StateVector state_;
    std::map<int, size_t> slot_;
    std::vector<int> order_;
    std::set<int> measured_;
    std::set<std::pair<int, int>> applied_edges_;
    PauliFrame frame_;
    std::vector<int> outcomes_;
    double branch_prob_ = 1.0;
};

}  // namespace clusterft

#endif
