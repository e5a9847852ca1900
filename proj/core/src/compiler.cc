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

#include "clusterft/compiler.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace clusterft {

namespace {

struct GateInfo {
    GateKind kind;
    const char *name;
    size_t arity;
    size_t n_params;
};

const GateInfo kGateInfo[] = {
    {GateKind::PrepPlus, "prep_plus", 1, 0},
    {GateKind::I, "I", 1, 0},
    {GateKind::H, "H", 1, 0},
    {GateKind::ZRot, "Z", 1, 1},
    {GateKind::XZ, "XZ", 1, 2},
    {GateKind::CZ, "CZ", 2, 0},
    {GateKind::HZ, "HZ", 1, 1},
    {GateKind::HHCZ, "HH_CZ", 2, 0},
};

const GateInfo &info(GateKind k) {
    for (const auto &g : kGateInfo) {
        if (g.kind == k) {
            return g;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

Gate make_gate(GateKind k, std::vector<size_t> qubits, std::vector<double> params, int slot) {
    Gate g;
    g.kind = k;
    g.qubits = std::move(qubits);
    g.params = std::move(params);
    g.slot = slot;
    return g;
}

std::vector<const Gate *> sorted_steps(const Circuit &c) {
    std::vector<const Gate *> out;
    for (const auto &g : c.steps) {
        out.push_back(&g);
    }
    std::stable_sort(out.begin(), out.end(), [](const Gate *a, const Gate *b) {
        return a->slot < b->slot;
    });
    return out;
}

}  // namespace

const char *gate_name(GateKind kind) {
    return info(kind).name;
}

GateKind gate_kind_from_name(const std::string &name) {
    for (const auto &g : kGateInfo) {
        if (name == g.name) {
            return g.kind;
        }
    }
    throw std::invalid_argument("unsupported gate '" + name + "'");
}

int Circuit::depth() const {
    int d = 0;
    for (const auto &g : steps) {
        if (g.kind != GateKind::PrepPlus) {
            d = std::max(d, g.slot + 1);
        }
    }
    return d;
}

std::vector<int> Circuit::start_slots() const {
    std::vector<int> s(n_qubits, 0);
    for (const auto &g : steps) {
        if (g.kind == GateKind::PrepPlus) {
            s[g.qubits[0]] = g.slot;
        }
    }
    return s;
}

void Circuit::validate() const {
    std::set<std::pair<int, size_t>> used;
    std::set<size_t> prepped;
    for (const auto &g : steps) {
        const GateInfo &gi = info(g.kind);
        if (g.qubits.size() != gi.arity) {
            throw std::invalid_argument(std::string("gate ") + gi.name + " has the wrong number of qubits");
        }
        if (g.params.size() != gi.n_params) {
            throw std::invalid_argument(std::string("gate ") + gi.name + " has the wrong number of parameters");
        }
        if (g.slot < 0) {
            throw std::invalid_argument("negative time slot");
        }
        for (size_t q : g.qubits) {
            if (q >= n_qubits) {
                throw std::invalid_argument("gate qubit out of range");
            }
        }
        if (gi.arity == 2 && g.qubits[0] == g.qubits[1]) {
            throw std::invalid_argument("two-qubit gate on a single qubit");
        }
        if (g.kind == GateKind::PrepPlus) {
            if (!prepped.insert(g.qubits[0]).second) {
                throw std::invalid_argument("qubit prepared twice");
            }
            continue;
        }
        for (size_t q : g.qubits) {
            if (!used.insert({g.slot, q}).second) {
                throw std::invalid_argument(
                    "gates overlap on qubit " + std::to_string(q) + " in slot " + std::to_string(g.slot));
            }
        }
    }
    auto starts = start_slots();
    for (const auto &g : steps) {
        if (g.kind == GateKind::PrepPlus) {
            continue;
        }
        for (size_t q : g.qubits) {
            if (g.slot < starts[q]) {
                throw std::invalid_argument("gate acts on qubit " + std::to_string(q) + " before it is prepared");
            }
        }
    }
}

bool Circuit::is_canonical() const {
    for (const auto &g : steps) {
        if (g.kind != GateKind::PrepPlus && g.kind != GateKind::HZ && g.kind != GateKind::HHCZ) {
            return false;
        }
    }
    return true;
}

nlohmann::json Circuit::to_json() const {
    nlohmann::json j;
    j["n"] = n_qubits;
    j["steps"] = nlohmann::json::array();
    for (const auto &g : steps) {
        j["steps"].push_back({{"t", g.slot}, {"gate", gate_name(g.kind)}, {"qubits", g.qubits}, {"params", g.params}});
    }
    return j;
}

Circuit Circuit::from_json(const nlohmann::json &j) try {
    Circuit c;
    c.n_qubits = j.at("n").get<size_t>();
    for (const auto &s : j.at("steps")) {
        Gate g;
        g.kind = gate_kind_from_name(s.at("gate").get<std::string>());
        g.qubits = s.at("qubits").get<std::vector<size_t>>();
        g.params = s.value("params", std::vector<double>{});
        g.slot = s.value("t", 0);
        c.steps.push_back(g);
    }
    c.validate();
    return c;
} catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("malformed circuit JSON: ") + e.what());
}

Mat gate_matrix(const Gate &g) {
    switch (g.kind) {
        case GateKind::PrepPlus:
            throw std::invalid_argument("prep_plus has no unitary");
        case GateKind::I:
            return gates::identity(2);
        case GateKind::H:
            return gates::hadamard();
        case GateKind::ZRot:
            return gates::z_rot(g.params.at(0));
        case GateKind::XZ:
            return gates::x_rot(g.params.at(0)) * gates::z_rot(g.params.at(1));
        case GateKind::CZ:
            return gates::cz();
        case GateKind::HZ:
            return gates::hz(g.params.at(0));
        case GateKind::HHCZ:
            return kron(gates::hadamard(), gates::hadamard()) * gates::cz();
    }
    throw std::invalid_argument("unknown gate kind");
}

Mat circuit_unitary(const Circuit &c) {
    c.validate();
    size_t d = (size_t)1 << c.n_qubits;
    Mat u = Mat::Identity(d, d);
    for (const Gate *g : sorted_steps(c)) {
        if (g->kind != GateKind::PrepPlus) {
            apply_to_columns(u, c.n_qubits, gate_matrix(*g), g->qubits);
        }
    }
    return u;
}

StateVector run_circuit(const Circuit &c) {
    c.validate();
    StateVector s = StateVector::plus(c.n_qubits);
    for (const Gate *g : sorted_steps(c)) {
        if (g->kind != GateKind::PrepPlus) {
            apply_inplace(s, gate_matrix(*g), g->qubits);
        }
    }
    return s;
}

Circuit canonicalize_stage1(const Circuit &c) {
    c.validate();
    Circuit out;
    out.n_qubits = c.n_qubits;
    std::vector<int> avail(c.n_qubits, 0);
    std::vector<bool> explicit_prep(c.n_qubits, false);
    std::vector<int> first_use(c.n_qubits, -1);
    auto place = [&](GateKind k, std::vector<size_t> qs, std::vector<double> ps) {
        int slot = 0;
        for (size_t q : qs) {
            slot = std::max(slot, avail[q]);
        }
        for (size_t q : qs) {
            avail[q] = slot + 1;
            if (first_use[q] < 0) {
                first_use[q] = slot;
            }
        }
        out.steps.push_back(make_gate(k, std::move(qs), std::move(ps), slot));
    };
    for (const Gate *g : sorted_steps(c)) {
        switch (g->kind) {
            case GateKind::PrepPlus:
                if (first_use[g->qubits[0]] >= 0) {
                    throw std::invalid_argument("re-preparing a used qubit is not supported");
                }
                explicit_prep[g->qubits[0]] = true;
                break;
            case GateKind::I:
            case GateKind::XZ:
            case GateKind::CZ:
                place(g->kind, g->qubits, g->params);
                break;
            case GateKind::H:
                // H = e^{i pi/2} Z_{pi/2} X_{pi/2} Z_{pi/2}.
                place(GateKind::XZ, g->qubits, {kPi / 2, kPi / 2});
                place(GateKind::XZ, g->qubits, {0.0, kPi / 2});
                break;
            case GateKind::ZRot:
                place(GateKind::XZ, g->qubits, {0.0, g->params[0]});
                break;
            default:
                throw std::invalid_argument(std::string("unsupported gate ") + gate_name(g->kind) + " before canonicalization");
        }
    }
    int depth = 0;
    for (int a : avail) {
        depth = std::max(depth, a);
    }
    std::set<std::pair<int, size_t>> busy;
    for (const auto &g : out.steps) {
        for (size_t q : g.qubits) {
            busy.insert({g.slot, q});
        }
    }
    for (size_t q = 0; q < c.n_qubits; q++) {
        int start = 0;
        if (explicit_prep[q]) {
            start = first_use[q] >= 0 ? first_use[q] : depth;
            out.steps.push_back(make_gate(GateKind::PrepPlus, {q}, {}, start));
        }
        for (int t = start; t < depth; t++) {
            if (!busy.count({t, q})) {
                out.steps.push_back(make_gate(GateKind::I, {q}, {}, t));
            }
        }
    }
    std::stable_sort(out.steps.begin(), out.steps.end(), [](const Gate &a, const Gate &b) {
        return a.slot < b.slot;
    });
    out.validate();
    return out;
}

Circuit canonicalize(const Circuit &c) {
    if (c.is_canonical()) {
        c.validate();
        return c;
    }
    Circuit s1 = canonicalize_stage1(c);
    Circuit out;
    out.n_qubits = c.n_qubits;
    for (const auto &g : s1.steps) {
        int t = 2 * g.slot;
        switch (g.kind) {
            case GateKind::PrepPlus:
                out.steps.push_back(make_gate(GateKind::PrepPlus, g.qubits, {}, t));
                break;
            case GateKind::I:
                out.steps.push_back(make_gate(GateKind::HZ, g.qubits, {0.0}, t));
                out.steps.push_back(make_gate(GateKind::HZ, g.qubits, {0.0}, t + 1));
                break;
            case GateKind::XZ:
                // X_a Z_b = (H Z_a)(H Z_b): the Z_b half acts first.
                out.steps.push_back(make_gate(GateKind::HZ, g.qubits, {g.params[1]}, t));
                out.steps.push_back(make_gate(GateKind::HZ, g.qubits, {g.params[0]}, t + 1));
                break;
            case GateKind::CZ:
                out.steps.push_back(make_gate(GateKind::HHCZ, g.qubits, {}, t));
                out.steps.push_back(make_gate(GateKind::HZ, {g.qubits[0]}, {0.0}, t + 1));
                out.steps.push_back(make_gate(GateKind::HZ, {g.qubits[1]}, {0.0}, t + 1));
                break;
            default:
                throw std::logic_error("unexpected stage-1 gate");
        }
    }
    out.validate();
    return out;
}

namespace {

/// gate_at[q][t] for a rectangular canonical circuit.
std::vector<std::vector<const Gate *>> canonical_grid(const Circuit &c) {
    c.validate();
    if (!c.is_canonical()) {
        throw std::invalid_argument("circuit is not canonical");
    }
    int depth = c.depth();
    auto starts = c.start_slots();
    std::vector<std::vector<const Gate *>> grid(c.n_qubits, std::vector<const Gate *>(depth, nullptr));
    for (const auto &g : c.steps) {
        if (g.kind == GateKind::PrepPlus) {
            continue;
        }
        for (size_t q : g.qubits) {
            grid[q][g.slot] = &g;
        }
    }
    for (size_t q = 0; q < c.n_qubits; q++) {
        for (int t = std::min(starts[q], depth); t < depth; t++) {
            if (grid[q][t] == nullptr) {
                throw std::invalid_argument(
                    "canonical circuit is not rectangular: qubit " + std::to_string(q) + " idles in slot " +
                    std::to_string(t));
            }
        }
    }
    return grid;
}

}  // namespace

int cluster_node_id(const Circuit &canonical, int level, int layer) {
    return level * (canonical.depth() + 1) + (layer - 1);
}

ClusterGraph to_cluster(const Circuit &canonical) {
    auto grid = canonical_grid(canonical);
    int depth = canonical.depth();
    auto starts = canonical.start_slots();
    ClusterGraph g;
    for (size_t q = 0; q < canonical.n_qubits; q++) {
        int first = std::min(starts[q], depth) + 1;
        for (int layer = first; layer <= depth; layer++) {
            const Gate *gate = grid[q][layer - 1];
            double angle = gate->kind == GateKind::HZ ? gate->params[0] : 0.0;
            g.add_measured(cluster_node_id(canonical, (int)q, layer), (int)q, layer, angle, layer != first, layer);
        }
        g.add_output(cluster_node_id(canonical, (int)q, depth + 1), (int)q, depth + 1);
        for (int layer = first; layer <= depth; layer++) {
            g.add_edge(cluster_node_id(canonical, (int)q, layer), cluster_node_id(canonical, (int)q, layer + 1));
        }
    }
    for (const auto &gate : canonical.steps) {
        if (gate.kind == GateKind::HHCZ) {
            g.add_edge(
                cluster_node_id(canonical, (int)gate.qubits[0], gate.slot + 1),
                cluster_node_id(canonical, (int)gate.qubits[1], gate.slot + 1));
        }
    }
    return g;
}

nlohmann::json Schedule::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["phases"] = nlohmann::json::array();
    for (const auto &p : phases) {
        nlohmann::json e;
        e["phase"] = p.kind == Phase::Kind::Prepare ? "prepare" : "measure";
        e["layers"] = p.layers;
        e["nodes"] = p.nodes;
        if (p.kind == Phase::Kind::Prepare) {
            e["edges"] = nlohmann::json::array();
            for (const auto &[a, b] : p.edges) {
                e["edges"].push_back({a, b});
            }
        }
        j["phases"].push_back(e);
    }
    return j;
}

namespace {

void require_layered(const ClusterGraph &g) {
    for (const auto &n : g.nodes()) {
        if (n.layer < 1) {
            throw std::invalid_argument("node " + std::to_string(n.id) + " has no layer");
        }
    }
}

Phase prepare_phase(const ClusterGraph &g, int lo, int hi) {
    Phase p;
    p.kind = Phase::Kind::Prepare;
    for (int l = lo; l <= hi; l++) {
        p.layers.push_back(l);
    }
    for (const auto &n : g.nodes()) {
        if (n.layer >= lo && n.layer <= hi) {
            p.nodes.push_back(n.id);
        }
    }
    for (const auto &[a, b] : g.edges()) {
        int later = std::max(g.node(a).layer, g.node(b).layer);
        if (later >= lo && later <= hi) {
            p.edges.emplace_back(a, b);
        }
    }
    return p;
}

Phase measure_phase(const ClusterGraph &g, int lo, int hi) {
    Phase p;
    p.kind = Phase::Kind::Measure;
    std::vector<const ClusterNode *> ns;
    for (const auto &n : g.nodes()) {
        if (!n.output && n.layer >= lo && n.layer <= hi) {
            ns.push_back(&n);
        }
    }
    std::stable_sort(ns.begin(), ns.end(), [](const ClusterNode *a, const ClusterNode *b) {
        return a->time_order < b->time_order;
    });
    // only layers that still hold measured nodes
    std::set<int> layers;
    for (const auto *n : ns) {
        p.nodes.push_back(n->id);
        layers.insert(n->layer);
    }
    p.layers.assign(layers.begin(), layers.end());
    return p;
}

void push_nonempty(Schedule &s, Phase p) {
    if (!p.nodes.empty() || !p.edges.empty()) {
        s.phases.push_back(std::move(p));
    }
}

}  // namespace

Schedule schedule_one_buffered(const ClusterGraph &g) {
    require_layered(g);
    Schedule s;
    s.kind = "one_buffered";
    int L = g.max_layer();
    if (L == 0) {
        return s;
    }
    push_nonempty(s, prepare_phase(g, 1, std::min(2, L)));
    for (int j = 1; j < L; j++) {
        push_nonempty(s, measure_phase(g, j, j));
        if (j + 2 <= L) {
            push_nonempty(s, prepare_phase(g, j + 2, j + 2));
        }
    }
    push_nonempty(s, measure_phase(g, L, L));
    return s;
}

Schedule schedule_two_at_a_time(const ClusterGraph &g) {
    require_layered(g);
    Schedule s;
    s.kind = "two_at_a_time";
    int L = g.max_layer();
    if (L == 0) {
        return s;
    }
    push_nonempty(s, prepare_phase(g, 1, std::min(4, L)));
    for (int j = 1; j <= L; j += 2) {
        push_nonempty(s, measure_phase(g, j, std::min(j + 1, L)));
        if (j + 4 <= L + 1) {
            push_nonempty(s, prepare_phase(g, j + 4, std::min(j + 5, L)));
        }
    }
    return s;
}

void validate_schedule(const ClusterGraph &g, const Schedule &s) {
    std::set<int> prepared;
    std::set<int> measured;
    std::set<std::pair<int, int>> applied;
    for (const auto &p : s.phases) {
        if (p.kind == Phase::Kind::Prepare) {
            for (int id : p.nodes) {
                if (!prepared.insert(id).second) {
                    throw std::logic_error("node " + std::to_string(id) + " prepared twice");
                }
            }
            for (const auto &e : p.edges) {
                if (!prepared.count(e.first) || !prepared.count(e.second)) {
                    throw std::logic_error("edge applied before both endpoints exist");
                }
                if (measured.count(e.first) || measured.count(e.second)) {
                    throw std::logic_error("edge applied to a measured node");
                }
                if (!applied.insert(e).second) {
                    throw std::logic_error("edge applied twice");
                }
            }
        } else {
            for (int id : p.nodes) {
                if (!prepared.count(id)) {
                    throw std::logic_error("node " + std::to_string(id) + " measured before preparation");
                }
                if (g.node(id).output) {
                    throw std::logic_error("output node measured");
                }
                for (int nb : g.neighbors(id)) {
                    auto key = id < nb ? std::make_pair(id, nb) : std::make_pair(nb, id);
                    if (!applied.count(key)) {
                        throw std::logic_error("node " + std::to_string(id) + " measured before its edges");
                    }
                }
                if (!measured.insert(id).second) {
                    throw std::logic_error("node measured twice");
                }
            }
        }
    }
    for (const auto &n : g.nodes()) {
        if (!prepared.count(n.id)) {
            throw std::logic_error("node " + std::to_string(n.id) + " never prepared");
        }
        if (!n.output && !measured.count(n.id)) {
            throw std::logic_error("node " + std::to_string(n.id) + " never measured");
        }
    }
    if (applied.size() != g.edges().size()) {
        throw std::logic_error("some edges were never applied");
    }
}

std::vector<std::string> validate_dangling_restriction(const ClusterGraph &g) {
    std::vector<std::string> out;
    for (const auto &[a, b] : g.edges()) {
        if (!g.is_bridge(a, b)) {
            continue;
        }
        int la = g.node(a).layer;
        int lb = g.node(b).layer;
        if (la != lb) {
            out.push_back(
                "bridge " + std::to_string(a) + "-" + std::to_string(b) + " spans layers " + std::to_string(la) +
                " and " + std::to_string(lb));
        } else if (la % 2 == 0) {
            out.push_back(
                "bridge " + std::to_string(a) + "-" + std::to_string(b) + " in even layer " + std::to_string(la));
        }
    }
    std::map<int, int> first;
    for (const auto &n : g.nodes()) {
        auto it = first.find(n.level);
        if (it == first.end() || n.layer < it->second) {
            first[n.level] = n.layer;
        }
    }
    for (const auto &[level, layer] : first) {
        if (layer % 2 == 0) {
            out.push_back("level " + std::to_string(level) + " starts in even layer " + std::to_string(layer));
        }
    }
    return out;
}

Circuit pad_for_dangling(const Circuit &canonical) {
    canonical_grid(canonical);
    Circuit c = canonical;
    while (true) {
        int bad = -1;
        for (const auto &g : c.steps) {
            bool odd = g.slot % 2 == 1;
            if (odd && (g.kind == GateKind::HHCZ || g.kind == GateKind::PrepPlus)) {
                if (bad < 0 || g.slot < bad) {
                    bad = g.slot;
                }
            }
        }
        if (bad < 0) {
            return c;
        }
        auto starts = c.start_slots();
        for (auto &g : c.steps) {
            if (g.slot >= bad) {
                g.slot += 3;
            }
        }
        for (size_t q = 0; q < c.n_qubits; q++) {
            if (starts[q] < bad) {
                for (int k = 0; k < 3; k++) {
                    c.steps.push_back(make_gate(GateKind::HZ, {q}, {kPi / 2}, bad + k));
                }
            }
        }
        std::stable_sort(c.steps.begin(), c.steps.end(), [](const Gate &a, const Gate &b) {
            return a.slot < b.slot;
        });
        c.validate();
    }
}

Circuit random_canonical_circuit(size_t n_qubits, int depth, uint64_t seed, bool odd_bridges) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Circuit c;
    c.n_qubits = n_qubits;
    for (int t = 0; t < depth; t++) {
        std::vector<size_t> qs(n_qubits);
        for (size_t q = 0; q < n_qubits; q++) {
            qs[q] = q;
        }
        std::shuffle(qs.begin(), qs.end(), rng);
        bool bridges_ok = !odd_bridges || t % 2 == 0;
        size_t k = 0;
        while (k < qs.size()) {
            if (bridges_ok && k + 1 < qs.size() && coin(rng) < 0.4) {
                c.steps.push_back(make_gate(GateKind::HHCZ, {qs[k], qs[k + 1]}, {}, t));
                k += 2;
            } else {
                c.steps.push_back(make_gate(GateKind::HZ, {qs[k]}, {angle(rng)}, t));
                k += 1;
            }
        }
    }
    c.validate();
    return c;
}

Circuit random_stage0_circuit(size_t n_qubits, int n_gates, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<size_t> pick(0, n_qubits - 1);
    std::uniform_int_distribution<int> kind(0, n_qubits > 1 ? 4 : 3);
    Circuit c;
    c.n_qubits = n_qubits;
    for (int i = 0; i < n_gates; i++) {
        size_t q = pick(rng);
        switch (kind(rng)) {
            case 0:
                c.steps.push_back(make_gate(GateKind::I, {q}, {}, i));
                break;
            case 1:
                c.steps.push_back(make_gate(GateKind::H, {q}, {}, i));
                break;
            case 2:
                c.steps.push_back(make_gate(GateKind::ZRot, {q}, {angle(rng)}, i));
                break;
            case 3:
                c.steps.push_back(make_gate(GateKind::XZ, {q}, {angle(rng), angle(rng)}, i));
                break;
            default: {
                size_t r = pick(rng);
                while (r == q) {
                    r = pick(rng);
                }
                c.steps.push_back(make_gate(GateKind::CZ, {q, r}, {}, i));
            }
        }
    }
    return c;
}

}  // namespace clusterft
