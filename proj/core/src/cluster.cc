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

#include "clusterft/cluster.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace clusterft {

namespace {

std::pair<int, int> edge_key(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

void ClusterGraph::add_measured(int id, int level, int layer, double angle, bool adaptive, int time_order) {
    ClusterNode n;
    n.id = id;
    n.level = level;
    n.layer = layer;
    n.angle = angle;
    n.adaptive = adaptive;
    n.time_order = time_order;
    add_node(n);
}

void ClusterGraph::add_output(int id, int level, int layer) {
    ClusterNode n;
    n.id = id;
    n.level = level;
    n.layer = layer;
    n.output = true;
    add_node(n);
}

void ClusterGraph::add_node(const ClusterNode &node) {
    if (index_.count(node.id)) {
        throw std::invalid_argument("duplicate node id " + std::to_string(node.id));
    }
    if (node.output) {
        for (const auto &n : nodes_) {
            if (n.output && n.level == node.level) {
                throw std::invalid_argument("level " + std::to_string(node.level) + " already has an output node");
            }
        }
    }
    index_[node.id] = nodes_.size();
    nodes_.push_back(node);
}

void ClusterGraph::add_edge(int a, int b) {
    if (a == b) {
        throw std::invalid_argument("self-loop on node " + std::to_string(a));
    }
    if (!has_node(a) || !has_node(b)) {
        throw std::invalid_argument("edge references an unknown node");
    }
    if (has_edge(a, b)) {
        throw std::invalid_argument("duplicate edge");
    }
    edges_.push_back(edge_key(a, b));
}

bool ClusterGraph::has_node(int id) const {
    return index_.count(id) > 0;
}

const ClusterNode &ClusterGraph::node(int id) const {
    return nodes_[index_of(id)];
}

size_t ClusterGraph::index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw std::out_of_range("unknown node " + std::to_string(id));
    }
    return it->second;
}

std::vector<int> ClusterGraph::neighbors(int id) const {
    index_of(id);
    std::vector<int> out;
    for (const auto &[a, b] : edges_) {
        if (a == id) {
            out.push_back(b);
        } else if (b == id) {
            out.push_back(a);
        }
    }
    return out;
}

bool ClusterGraph::has_edge(int a, int b) const {
    auto k = edge_key(a, b);
    return std::find(edges_.begin(), edges_.end(), k) != edges_.end();
}

bool ClusterGraph::is_bridge(int a, int b) const {
    return node(a).level != node(b).level;
}

std::vector<int> ClusterGraph::levels() const {
    std::set<int> s;
    for (const auto &n : nodes_) {
        s.insert(n.level);
    }
    return {s.begin(), s.end()};
}

std::optional<int> ClusterGraph::output_of(int level) const {
    for (const auto &n : nodes_) {
        if (n.output && n.level == level) {
            return n.id;
        }
    }
    return std::nullopt;
}

int ClusterGraph::max_layer() const {
    int m = 0;
    for (const auto &n : nodes_) {
        m = std::max(m, n.layer);
    }
    return m;
}

void ClusterGraph::set_output(int id) {
    ClusterNode &n = nodes_[index_of(id)];
    auto existing = output_of(n.level);
    if (existing.has_value() && *existing != id) {
        throw std::invalid_argument("level " + std::to_string(n.level) + " already has an output node");
    }
    n.output = true;
    n.angle = 0;
    n.adaptive = false;
    n.time_order = 0;
}

ClusterGraph ClusterGraph::without_node(int id) const {
    index_of(id);
    ClusterGraph g;
    for (const auto &n : nodes_) {
        if (n.id != id) {
            g.add_node(n);
        }
    }
    for (const auto &[a, b] : edges_) {
        if (a != id && b != id) {
            g.edges_.emplace_back(a, b);
        }
    }
    return g;
}

void ClusterGraph::validate() const {
    std::set<int> output_levels;
    for (const auto &n : nodes_) {
        if (n.output && !output_levels.insert(n.level).second) {
            throw std::invalid_argument("level " + std::to_string(n.level) + " has two output nodes");
        }
    }
    for (const auto &[a, b] : edges_) {
        if (a == b || !has_node(a) || !has_node(b)) {
            throw std::invalid_argument("invalid edge");
        }
    }
}

nlohmann::json ClusterGraph::to_json() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto &n : nodes_) {
        nlohmann::json e = {{"id", n.id}, {"level", n.level}, {"layer", n.layer}};
        if (n.output) {
            e["output"] = true;
        } else {
            e["angle"] = n.angle;
            e["adaptive"] = n.adaptive;
            e["t"] = n.time_order;
        }
        j["nodes"].push_back(e);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto &[a, b] : edges_) {
        j["edges"].push_back({a, b});
    }
    return j;
}

ClusterGraph ClusterGraph::from_json(const nlohmann::json &j) try {
    ClusterGraph g;
    for (const auto &e : j.at("nodes")) {
        ClusterNode n;
        n.id = e.at("id").get<int>();
        n.level = e.value("level", 0);
        n.layer = e.value("layer", 0);
        n.output = e.value("output", false);
        if (!n.output) {
            if (!e.contains("angle") || !e.contains("t")) {
                throw std::invalid_argument("measured node needs 'angle' and 't'");
            }
            n.angle = e.at("angle").get<double>();
            n.adaptive = e.value("adaptive", false);
            n.time_order = e.at("t").get<int>();
        }
        g.add_node(n);
    }
    for (const auto &e : j.at("edges")) {
        g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return g;
} catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("malformed cluster graph JSON: ") + e.what());
}

StateVector prepare(const ClusterGraph &graph) {
    return prepare(graph, graph.edges());
}

StateVector prepare(const ClusterGraph &graph, const std::vector<std::pair<int, int>> &edge_order) {
    if (graph.nodes().size() > kMaxQubits) {
        throw std::length_error("cluster exceeds the simulator size limit");
    }
    StateVector s = StateVector::plus(graph.nodes().size());
    Mat cz = gates::cz();
    for (const auto &[a, b] : edge_order) {
        apply_inplace(s, cz, {graph.index_of(a), graph.index_of(b)});
    }
    return s;
}

PauliFrame PauliFrame::zero(const std::vector<int> &levels) {
    PauliFrame f;
    for (int l : levels) {
        f.bits[l] = FrameBits{};
    }
    return f;
}

FrameBits PauliFrame::at(int level) const {
    auto it = bits.find(level);
    if (it == bits.end()) {
        throw std::out_of_range("unknown level " + std::to_string(level));
    }
    return it->second;
}

PauliFrame frame_update(const PauliFrame &frame, int level, int m) {
    auto it = frame.bits.find(level);
    if (it == frame.bits.end()) {
        throw std::out_of_range("unknown level " + std::to_string(level));
    }
    PauliFrame out = frame;
    FrameBits b = it->second;
    // H X^x Z^z = (-1)^{xz} X^z Z^x H.
    out.sign ^= b.x & b.z;
    out.bits[level] = FrameBits{(b.z + m) % 2, b.x};
    return out;
}

Mat measurement_rotation(const ClusterNode &node, const PauliFrame &frame) {
    if (node.output) {
        throw std::invalid_argument("output nodes are not measured");
    }
    double s = 1.0;
    if (node.adaptive && frame.at(node.level).x) {
        s = -1.0;
    }
    return gates::hz(s * node.angle);
}

namespace {

PauliFrame propagate_bridges(const ClusterGraph &graph, int node, PauliFrame frame) {
    int la = graph.node(node).level;
    for (int nb : graph.neighbors(node)) {
        if (!graph.is_bridge(node, nb)) {
            continue;
        }
        auto key = edge_key(node, nb);
        if (frame.propagated.count(key)) {
            continue;
        }
        int lb = graph.node(nb).level;
        FrameBits a = frame.at(la);
        FrameBits b = frame.at(lb);
        // CZ X^xa Z^za X^xb Z^zb = (-1)^{xa xb} X^xa Z^{za+xb} X^xb Z^{zb+xa} CZ.
        frame.sign ^= a.x & b.x;
        frame.bits[la].z ^= b.x;
        frame.bits[lb].z ^= a.x;
        frame.propagated.insert(key);
    }
    return frame;
}

}  // namespace

NodeMeasurement measure_node(
    const StateVector &state,
    const ClusterGraph &graph,
    int node,
    const PauliFrame &frame,
    std::optional<int> forced,
    uint64_t seed) {
    const ClusterNode &n = graph.node(node);
    if (n.output) {
        throw std::invalid_argument("node " + std::to_string(node) + " is an output node");
    }
    Mat rot = measurement_rotation(n, frame);
    MeasureResult r = measure(state, graph.index_of(node), rot, forced, seed);
    PauliFrame f = propagate_bridges(graph, node, frame);
    f = frame_update(f, n.level, r.m);
    return NodeMeasurement{r.m, std::move(r.posterior), std::move(f), r.prob};
}

Deletion z_delete(
    const StateVector &state, const ClusterGraph &graph, int node, std::optional<int> forced, uint64_t seed) {
    size_t q = graph.index_of(node);
    MeasureResult r = measure(state, q, gates::identity(2), forced, seed);
    StateVector s = std::move(r.posterior);
    if (r.m) {
        for (int nb : graph.neighbors(node)) {
            apply_inplace(s, gates::pauli_z(), {graph.index_of(nb)});
        }
    }
    s = remove_qubit(s, q, r.m);
    return Deletion{r.m, std::move(s), graph.without_node(node)};
}

Mat PauliCorrection::matrix(const std::vector<int> &qubit_levels) const {
    Mat out = Mat::Identity(1, 1);
    for (auto it = qubit_levels.rbegin(); it != qubit_levels.rend(); ++it) {
        auto f = per_level.find(*it);
        if (f == per_level.end()) {
            throw std::out_of_range("correction has no level " + std::to_string(*it));
        }
        out = kron(out, f->second);
    }
    return sign ? Mat(-out) : out;
}

PauliCorrection final_correction(const PauliFrame &frame) {
    PauliCorrection c;
    c.sign = frame.sign;
    for (const auto &[level, b] : frame.bits) {
        Mat m = gates::identity(2);
        if (b.z) {
            m = gates::pauli_z() * m;
        }
        if (b.x) {
            m = gates::pauli_x() * m;
        }
        c.per_level[level] = m;
    }
    return c;
}

Execution::Execution(ClusterGraph graph, size_t reserved)
    : graph_(std::move(graph)), reserved_(reserved), state_(reserved), frame_(PauliFrame::zero(graph_.levels())) {
    graph_.validate();
}

size_t Execution::slot(int id) const {
    auto it = slot_.find(id);
    if (it == slot_.end()) {
        throw std::out_of_range("node " + std::to_string(id) + " is not live");
    }
    return it->second;
}

std::vector<int> Execution::live_nodes() const {
    return order_;
}

void Execution::add_node(const ClusterNode &node) {
    graph_.add_node(node);
    if (!frame_.bits.count(node.level)) {
        frame_.bits[node.level] = FrameBits{};
    }
}

void Execution::add_edge(int a, int b) {
    graph_.add_edge(a, b);
}

void Execution::set_output(int id) {
    if (measured_.count(id)) {
        throw std::logic_error("measured node cannot become an output");
    }
    graph_.set_output(id);
}

void Execution::prepare_nodes(const std::vector<int> &ids) {
    for (int id : ids) {
        graph_.index_of(id);
        if (slot_.count(id) || measured_.count(id)) {
            throw std::logic_error("node " + std::to_string(id) + " prepared twice");
        }
        if (state_.n_qubits() + 1 > kMaxQubits) {
            throw std::length_error("live register exceeds the simulator size limit");
        }
        state_ = append_plus(state_);
        slot_[id] = reserved_ + order_.size();
        order_.push_back(id);
    }
}

void Execution::apply_edges(const std::vector<std::pair<int, int>> &edges) {
    Mat cz = gates::cz();
    for (const auto &[a, b] : edges) {
        if (!graph_.has_edge(a, b)) {
            throw std::invalid_argument("edge is not in the graph");
        }
        auto key = edge_key(a, b);
        if (applied_edges_.count(key)) {
            throw std::logic_error("edge applied twice");
        }
        apply_inplace(state_, cz, {slot(a), slot(b)});
        applied_edges_.insert(key);
    }
}

void Execution::apply_unitary(const Mat &u, const std::vector<int> &ids) {
    std::vector<size_t> targets;
    for (int id : ids) {
        targets.push_back(slot(id));
    }
    apply_inplace(state_, u, targets);
}

void Execution::drop(int id, int bit) {
    size_t s = slot(id);
    state_ = remove_qubit(state_, s, bit);
    size_t pos = s - reserved_;
    order_.erase(order_.begin() + (std::ptrdiff_t)pos);
    slot_.erase(id);
    for (size_t k = pos; k < order_.size(); k++) {
        slot_[order_[k]] = reserved_ + k;
    }
}

int Execution::measure(int id, std::optional<int> forced, uint64_t seed) {
    const ClusterNode &n = graph_.node(id);
    if (n.output) {
        throw std::invalid_argument("node " + std::to_string(id) + " is an output node");
    }
    if (measured_.count(id)) {
        throw std::logic_error("node " + std::to_string(id) + " already measured");
    }
    for (const auto &other : graph_.nodes()) {
        if (!other.output && !measured_.count(other.id) && other.time_order < n.time_order) {
            throw std::logic_error(
                "node " + std::to_string(id) + " measured before node " + std::to_string(other.id) +
                " with an earlier time label");
        }
    }
    for (int nb : graph_.neighbors(id)) {
        if (!applied_edges_.count(edge_key(id, nb))) {
            throw std::logic_error("node " + std::to_string(id) + " measured before all its edges were applied");
        }
    }
    Mat rot = measurement_rotation(n, frame_);
    MeasureResult r = clusterft::measure(state_, slot(id), rot, forced, seed);
    state_ = std::move(r.posterior);
    frame_ = propagate_bridges(graph_, id, frame_);
    frame_ = frame_update(frame_, n.level, r.m);
    branch_prob_ *= r.prob;
    outcomes_.push_back(r.m);
    measured_.insert(id);
    drop(id, r.m);
    return r.m;
}

int Execution::z_delete(int id, std::optional<int> forced, uint64_t seed) {
    MeasureResult r = clusterft::measure(state_, slot(id), gates::identity(2), forced, seed);
    state_ = std::move(r.posterior);
    if (r.m) {
        for (int nb : graph_.neighbors(id)) {
            if (applied_edges_.count(edge_key(id, nb))) {
                apply_inplace(state_, gates::pauli_z(), {slot(nb)});
            }
        }
    }
    branch_prob_ *= r.prob;
    drop(id, r.m);
    std::set<std::pair<int, int>> kept;
    for (const auto &e : applied_edges_) {
        if (e.first != id && e.second != id) {
            kept.insert(e);
        }
    }
    applied_edges_ = std::move(kept);
    graph_ = graph_.without_node(id);
    return r.m;
}

std::vector<size_t> Execution::output_slots() const {
    std::vector<size_t> order;
    for (int level : graph_.levels()) {
        auto out = graph_.output_of(level);
        if (!out.has_value()) {
            throw std::logic_error("level " + std::to_string(level) + " has no output node");
        }
        order.push_back(slot(*out));
    }
    if (order.size() + reserved_ != state_.n_qubits()) {
        throw std::logic_error("non-output nodes are still live");
    }
    return order;
}

StateVector Execution::output_state() const {
    if (reserved_ > 0) {
        throw std::logic_error("output is entangled with reserved qubits; use corrected_distribution");
    }
    return permute_qubits(state_, output_slots());
}

Distribution Execution::corrected_distribution() const {
    std::vector<int> levels = graph_.levels();
    Distribution raw = distribution(state_, output_slots());
    Distribution out;
    for (const auto &[key, p] : raw) {
        std::string k = key;
        for (size_t i = 0; i < levels.size(); i++) {
            if (frame_.at(levels[i]).x) {
                k[i] = k[i] == '0' ? '1' : '0';
            }
        }
        out[k] += p;
    }
    return out;
}

StateVector Execution::corrected_output() const {
    StateVector out = output_state();
    Mat sigma = final_correction(frame_).matrix(graph_.levels());
    std::vector<size_t> all;
    for (size_t k = out.n_qubits(); k-- > 0;) {
        all.push_back(k);
    }
    apply_inplace(out, sigma.adjoint(), all);
    return out;
}

}  // namespace clusterft
