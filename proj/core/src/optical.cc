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

#include "clusterft/optical.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace clusterft {

void GrowthParams::validate() const {
    if (k < 2) {
        throw std::invalid_argument("k must be at least 2");
    }
    if (!(p_f >= 0 && p_f <= 1)) {
        throw std::invalid_argument("p_f must lie in [0, 1]");
    }
    if (trials == 0) {
        throw std::invalid_argument("trials must be positive");
    }
}

void ThresholdParams::validate() const {
    if (!(eta_th > 0) || !(c1 > 0) || !(c2 >= 0)) {
        throw std::invalid_argument("threshold constants must be positive");
    }
}

namespace {

bool draw_success(double p_f, uint64_t seed) {
    if (p_f <= 0) {
        return true;
    }
    if (p_f >= 1) {
        return false;
    }
    std::mt19937_64 rng(seed);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= p_f;
}

}  // namespace

NondetResult nondet_cz(
    const StateVector &state,
    const ClusterGraph &graph,
    int a,
    int b,
    double p_f,
    std::optional<NondetForce> forced,
    uint64_t seed) {
    if (!(p_f >= 0 && p_f <= 1)) {
        throw std::invalid_argument("p_f must lie in [0, 1]");
    }
    if (a == b || !graph.has_node(a) || !graph.has_node(b)) {
        throw std::invalid_argument("nondet_cz needs two distinct nodes of the graph");
    }
    if (graph.has_edge(a, b)) {
        throw std::invalid_argument("nodes are already joined");
    }
    if (state.n_qubits() != graph.nodes().size()) {
        throw std::invalid_argument("state does not match the graph");
    }
    NondetResult r;
    r.success = forced ? forced->success : draw_success(p_f, derive_seed(seed, 0));
    if (r.success) {
        r.state = apply(state, gates::cz(), {graph.index_of(a), graph.index_of(b)});
        r.graph = graph;
        r.graph.add_edge(a, b);
        return r;
    }
    Deletion da = z_delete(state, graph, a, forced ? std::optional<int>(forced->m_a) : std::nullopt, derive_seed(seed, 1));
    Deletion db = z_delete(
        da.posterior, da.graph, b, forced ? std::optional<int>(forced->m_b) : std::nullopt, derive_seed(seed, 2));
    r.m_a = da.m;
    r.m_b = db.m;
    r.state = std::move(db.posterior);
    r.graph = std::move(db.graph);
    return r;
}

double adjoin_success_prob(size_t k, double p_f, size_t levels) {
    if (k < 2) {
        throw std::invalid_argument("k must be at least 2");
    }
    if (levels != 1 && levels != 2) {
        throw std::invalid_argument("adjoin_success_prob covers 1 or 2 levels");
    }
    double single = 1.0 - std::pow(p_f, (double)(k - 1));
    return std::pow(single, (double)levels);
}

GrowthEstimate monte_carlo_growth(const GrowthParams &params, size_t levels) {
    params.validate();
    if (levels == 0) {
        throw std::invalid_argument("levels must be positive");
    }
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    size_t ok = 0, defects = 0;
    for (size_t t = 0; t < params.trials; t++) {
        bool all = true;
        for (size_t l = 0; l < levels; l++) {
            bool level_ok = false;
            for (size_t a = 0; a + 1 < params.k && !level_ok; a++) {
                level_ok = u(rng) >= params.p_f;
            }
            if (!level_ok) {
                defects++;
                all = false;
            }
        }
        ok += all ? 1 : 0;
    }
    GrowthEstimate e;
    e.trials = params.trials;
    double n = (double)params.trials;
    e.p_hat = (double)ok / n;
    e.defect_rate = (double)defects / (n * (double)levels);
    e.closed_form = adjoin_success_prob(params.k, params.p_f, levels);
    // Wilson score interval
    const double z = 1.959963984540054;
    double denom = 1 + z * z / n;
    double centre = (e.p_hat + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(e.p_hat * (1 - e.p_hat) / n + z * z / (4 * n * n)) / denom;
    e.ci_low = std::max(0.0, centre - half);
    e.ci_high = std::min(1.0, centre + half);
    return e;
}

namespace {

ClusterNode plain_node(int id, int level, int layer) {
    ClusterNode n;
    n.id = id;
    n.level = level;
    n.layer = layer;
    return n;
}

// Nondeterministic CZ on live nodes of an execution.
bool exec_nondet(Execution &exec, int a, int b, double p_f, std::optional<bool> forced, TrajectoryContext &ctx) {
    bool success = forced ? *forced : draw_success(p_f, ctx.next_seed());
    if (success) {
        exec.add_edge(a, b);
        noisy_edges(exec, {{a, b}}, ctx);
        return true;
    }
    noisy_z_delete(exec, a, ctx);
    noisy_z_delete(exec, b, ctx);
    return false;
}

std::set<std::pair<int, int>> edge_set(const std::vector<std::pair<int, int>> &edges) {
    std::set<std::pair<int, int>> s;
    for (auto [a, b] : edges) {
        s.insert({std::min(a, b), std::max(a, b)});
    }
    return s;
}

}  // namespace

AdjoinCheck adjoin_state_check(size_t k, size_t levels, uint64_t seed, size_t samples_per_pattern) {
    if (k < 2 || k > 3) {
        throw std::invalid_argument("state-level adjoin check supports k in {2, 3}");
    }
    if (levels < 1 || levels > 2) {
        throw std::invalid_argument("state-level adjoin check supports 1 or 2 levels");
    }
    // pattern value i in [1, k-1]: first success at attempt i; value k: all attempts fail
    size_t patterns = levels == 1 ? k : k * k;
    AdjoinCheck out;
    for (size_t pat = 0; pat < patterns; pat++) {
        std::vector<size_t> first_success(levels);
        first_success[0] = pat % k + 1;
        if (levels == 2) {
            first_success[1] = pat / k + 1;
        }
        for (size_t s = 0; s < samples_per_pattern; s++) {
            TrajectoryContext ctx;
            ctx.seed = derive_seed(seed, pat * 1000 + s);
            Execution exec(ClusterGraph{}, 0);
            ClusterGraph expected;
            std::vector<std::pair<int, int>> expected_edges;
            auto base_id = [](int level) { return 1000 * level; };
            auto dangling_id = [](int base, size_t i) { return base + (int)i; };
            for (size_t l = 0; l < levels; l++) {
                int level = (int)l;
                int b = base_id(level);
                exec.add_node(plain_node(b, level, 1));
                std::vector<int> ids{b};
                std::vector<std::pair<int, int>> edges;
                for (size_t i = 1; i <= k; i++) {
                    exec.add_node(plain_node(dangling_id(b, i), level, 2));
                    ids.push_back(dangling_id(b, i));
                    exec.add_edge(b, dangling_id(b, i));
                    edges.push_back({b, dangling_id(b, i)});
                }
                noisy_prepare(exec, ids, ctx);
                noisy_edges(exec, edges, ctx);
            }
            bool all_ok = true;
            for (size_t l = 0; l < levels; l++) {
                int level = (int)l;
                int b = base_id(level);
                bool ok = false;
                for (size_t i = 1; i < k && !ok; i++) {
                    int c = b + 100 + 10 * (int)i;
                    exec.add_node(plain_node(c, level, 3));
                    std::vector<int> ids{c};
                    std::vector<std::pair<int, int>> edges;
                    for (size_t j = 1; j <= k; j++) {
                        exec.add_node(plain_node(dangling_id(c, j), level, 4));
                        ids.push_back(dangling_id(c, j));
                        exec.add_edge(c, dangling_id(c, j));
                        edges.push_back({c, dangling_id(c, j)});
                    }
                    noisy_prepare(exec, ids, ctx);
                    noisy_edges(exec, edges, ctx);
                    int d = dangling_id(b, i);
                    ok = exec_nondet(exec, d, c, 0.5, first_success[l] == i, ctx);
                    if (ok) {
                        for (size_t r = i + 1; r <= k; r++) {
                            noisy_z_delete(exec, dangling_id(b, r), ctx);
                        }
                        expected.add_node(plain_node(b, level, 1));
                        expected.add_node(plain_node(d, level, 2));
                        expected.add_node(plain_node(c, level, 3));
                        expected_edges.push_back({b, d});
                        expected_edges.push_back({d, c});
                        for (size_t j = 1; j <= k; j++) {
                            expected.add_node(plain_node(dangling_id(c, j), level, 4));
                            expected_edges.push_back({c, dangling_id(c, j)});
                        }
                    } else {
                        // the failed base's dangling nodes are now isolated
                        for (size_t j = 1; j <= k; j++) {
                            noisy_z_delete(exec, dangling_id(c, j), ctx);
                        }
                    }
                }
                if (!ok) {
                    all_ok = false;
                    int d = dangling_id(b, k);
                    expected.add_node(plain_node(b, level, 1));
                    expected.add_node(plain_node(d, level, 2));
                    expected_edges.push_back({b, d});
                }
            }
            out.branches++;
            out.successes += all_ok ? 1 : 0;
            double residual;
            if (edge_set(exec.graph().edges()) != edge_set(expected_edges) ||
                exec.graph().nodes().size() != expected.nodes().size()) {
                residual = std::numeric_limits<double>::infinity();
            } else {
                // expected graph state in the execution's slot order
                ClusterGraph ordered;
                for (int id : exec.live_nodes()) {
                    ordered.add_node(expected.node(id));
                }
                for (auto [a, b] : expected_edges) {
                    ordered.add_edge(a, b);
                }
                residual = (exec.state().amplitudes() - prepare(ordered).amplitudes()).norm();
            }
            out.max_residual = std::max(out.max_residual, residual);
        }
    }
    return out;
}

void validate_dangling_target(const ClusterGraph &target) {
    target.validate();
    std::map<int, std::map<int, int>> by_level;
    for (const ClusterNode &n : target.nodes()) {
        if (n.layer < 1) {
            throw std::invalid_argument("dangling execution needs layered nodes");
        }
        if (!by_level[n.level].emplace(n.layer, n.id).second) {
            throw std::invalid_argument("two nodes share a level and layer");
        }
    }
    for (const auto &[level, layers] : by_level) {
        int first = layers.begin()->first;
        int last = layers.rbegin()->first;
        if (first % 2 == 0) {
            throw std::invalid_argument("level " + std::to_string(level) + " starts in an even layer");
        }
        if ((size_t)(last - first + 1) != layers.size()) {
            throw std::invalid_argument("level " + std::to_string(level) + " has a gap");
        }
        auto out = target.output_of(level);
        if (!out.has_value() || target.node(*out).layer != last) {
            throw std::invalid_argument("level " + std::to_string(level) + " must end in its output node");
        }
    }
    for (auto [a, b] : target.edges()) {
        const ClusterNode &na = target.node(a);
        const ClusterNode &nb = target.node(b);
        if (na.level == nb.level) {
            if (std::abs(na.layer - nb.layer) != 1) {
                throw std::invalid_argument("in-level edge must join consecutive layers");
            }
        } else if (na.layer != nb.layer || na.layer % 2 == 0) {
            throw std::invalid_argument("bridge must join two nodes of the same odd layer");
        }
    }
}

DanglingRun run_dangling(Execution &exec, const ClusterGraph &target, size_t k, double p_f, TrajectoryContext &ctx) {
    if (k < 2) {
        throw std::invalid_argument("k must be at least 2");
    }
    if (!(p_f >= 0 && p_f <= 1)) {
        throw std::invalid_argument("p_f must lie in [0, 1]");
    }
    if (!exec.graph().nodes().empty()) {
        throw std::invalid_argument("run_dangling needs an execution over an empty graph");
    }
    validate_dangling_target(target);

    std::map<int, std::map<int, int>> layer_node;  // level -> layer -> target id
    for (const ClusterNode &n : target.nodes()) {
        layer_node[n.level][n.layer] = n.id;
    }
    auto node_at = [&](int level, int layer) -> std::optional<int> {
        auto &m = layer_node[level];
        auto it = m.find(layer);
        if (it == m.end()) {
            return std::nullopt;
        }
        return it->second;
    };
    const int last_layer = target.max_layer();

    DanglingRun run;
    std::map<int, int> phys;                    // target id -> physical id
    std::map<int, std::vector<int>> dangling;  // level -> candidate ids of the current base
    int next_fresh = -1;
    auto track_peak = [&]() { run.peak_qubits = std::max(run.peak_qubits, exec.state().n_qubits()); };

    // base at (level, layer) plus its dangling candidates for layer + 1
    auto make_base = [&](int level, int layer) {
        int id = *node_at(level, layer);
        const ClusterNode &tn = target.node(id);
        exec.add_node(tn);
        std::vector<int> ids{id};
        std::vector<std::pair<int, int>> edges;
        std::vector<int> cands;
        if (!tn.output) {
            ClusterNode cand = target.node(*node_at(level, layer + 1));
            if (cand.output) {
                cand.output = false;
                cand.time_order = std::numeric_limits<int>::max();
            }
            for (size_t i = 0; i < k; i++) {
                cand.id = next_fresh--;
                exec.add_node(cand);
                exec.add_edge(id, cand.id);
                ids.push_back(cand.id);
                edges.push_back({id, cand.id});
                cands.push_back(cand.id);
            }
        }
        noisy_prepare(exec, ids, ctx);
        noisy_edges(exec, edges, ctx);
        dangling[level] = cands;
        track_peak();
    };
    auto apply_bridges = [&](int layer) {
        std::vector<std::pair<int, int>> bridges;
        for (auto [a, b] : target.edges()) {
            if (target.is_bridge(a, b) && target.node(a).layer == layer) {
                exec.add_edge(a, b);
                bridges.push_back({a, b});
            }
        }
        noisy_edges(exec, bridges, ctx);
    };

    std::vector<int> levels = target.levels();
    for (int level : levels) {
        if (node_at(level, 1)) {
            make_base(level, 1);
            phys[*node_at(level, 1)] = *node_at(level, 1);
        }
    }
    apply_bridges(1);

    for (int j = 1; j <= last_layer; j += 2) {
        for (int level : levels) {
            auto base = node_at(level, j);
            if (!base || target.node(*base).output) {
                continue;
            }
            int next = *node_at(level, j + 1);
            std::vector<int> cands = dangling[level];
            if (target.node(next).output) {
                exec.set_output(cands[0]);
                phys[next] = cands[0];
                for (size_t r = 1; r < cands.size(); r++) {
                    noisy_z_delete(exec, cands[r], ctx);
                }
                continue;
            }
            int nb = *node_at(level, j + 2);
            bool ok = false;
            for (size_t i = 0; i + 1 < k && !ok; i++) {
                std::vector<int> saved = cands;
                make_base(level, j + 2);
                run.attempts++;
                ok = exec_nondet(exec, cands[i], nb, p_f, std::nullopt, ctx);
                if (ok) {
                    phys[next] = cands[i];
                    phys[nb] = nb;
                    for (size_t r = i + 1; r < cands.size(); r++) {
                        noisy_z_delete(exec, cands[r], ctx);
                    }
                } else {
                    run.failures++;
                    for (int e : dangling[level]) {
                        noisy_z_delete(exec, e, ctx);
                    }
                    dangling[level] = saved;
                }
                track_peak();
            }
            if (!ok) {
                run.defect = true;
                return run;
            }
        }
        if (j + 2 <= last_layer) {
            for (int level : levels) {
                if (layer_node[level].begin()->first == j + 2) {
                    make_base(level, j + 2);
                    phys[*node_at(level, j + 2)] = *node_at(level, j + 2);
                }
            }
            apply_bridges(j + 2);
        }
        std::vector<int> to_measure;
        for (const ClusterNode &n : target.nodes()) {
            if (!n.output && (n.layer == j || n.layer == j + 1)) {
                to_measure.push_back(n.id);
            }
        }
        std::sort(to_measure.begin(), to_measure.end(), [&](int a, int b) {
            const ClusterNode &na = target.node(a);
            const ClusterNode &nb = target.node(b);
            return std::tie(na.time_order, na.id) < std::tie(nb.time_order, nb.id);
        });
        for (int id : to_measure) {
            noisy_measure_node(exec, phys.at(id), ctx);
        }
    }
    return run;
}

namespace {

struct Candidate {
    PostselectAnalysis analysis;
    bool ok = false;
};

PostselectAnalysis analyze_with_herald(const std::vector<Mat> &kraus, size_t a_dim, const Vec &herald) {
    size_t b_dim = kraus.size();
    PostselectAnalysis r;
    r.beta_prime = herald / herald.norm();
    Mat kp = Mat::Zero((Eigen::Index)a_dim, (Eigen::Index)a_dim);
    for (size_t b = 0; b < b_dim; b++) {
        kp += std::conj(r.beta_prime((Eigen::Index)b)) * kraus[b];
    }
    r.p = std::min(1.0, kp.squaredNorm() / (double)a_dim);
    if (r.p < 1e-14) {
        r.v = Mat::Identity((Eigen::Index)a_dim, (Eigen::Index)a_dim);
        r.residual = std::numeric_limits<double>::infinity();
        r.beta_second = Vec::Zero((Eigen::Index)b_dim);
        return r;
    }
    r.v = polar_unitary(kp);
    double r1 = op_norm(kp - std::sqrt(r.p) * r.v);
    Mat x((Eigen::Index)b_dim, (Eigen::Index)(a_dim * a_dim));
    for (size_t b = 0; b < b_dim; b++) {
        Mat rb = kraus[b] - r.beta_prime((Eigen::Index)b) * kp;
        x.row((Eigen::Index)b) = Eigen::Map<const Vec>(rb.data(), rb.size()).transpose();
    }
    Eigen::JacobiSVD<Mat> sv(x, Eigen::ComputeFullU);
    double r2 = sv.singularValues().size() > 1 ? sv.singularValues()(1) : 0.0;
    if (sv.singularValues()(0) > 1e-12) {
        r.beta_second = sv.matrixU().col(0);
    } else {
        r.beta_second = SubspaceBasis(Mat(r.beta_prime)).complement().col(0);
    }
    r.residual = std::max(r1, r2);
    return r;
}

}  // namespace

PostselectAnalysis postselect_analyze(const Mat &u, size_t b_dim, const Vec &beta, std::optional<Vec> herald) {
    if (b_dim < 2 || u.rows() != u.cols() || (size_t)u.rows() % b_dim != 0) {
        throw std::invalid_argument("postselect_analyze: dimensions do not factor as A (x) B");
    }
    if (!is_unitary(u, 1e-9)) {
        throw std::invalid_argument("postselect_analyze: U must be unitary");
    }
    if ((size_t)beta.size() != b_dim || std::abs(beta.norm() - 1) > 1e-9) {
        throw std::invalid_argument("postselect_analyze: beta must be a unit vector of dim B");
    }
    size_t a_dim = (size_t)u.rows() / b_dim;
    Mat ub = u * kron(Mat::Identity((Eigen::Index)a_dim, (Eigen::Index)a_dim), Mat(beta));
    std::vector<Mat> kraus(b_dim, Mat::Zero((Eigen::Index)a_dim, (Eigen::Index)a_dim));
    for (size_t a2 = 0; a2 < a_dim; a2++) {
        for (size_t b = 0; b < b_dim; b++) {
            kraus[b].row((Eigen::Index)a2) = ub.row((Eigen::Index)(a2 * b_dim + b));
        }
    }
    if (herald) {
        if ((size_t)herald->size() != b_dim || herald->norm() < 1e-12) {
            throw std::invalid_argument("postselect_analyze: herald must be a nonzero vector of dim B");
        }
        return analyze_with_herald(kraus, a_dim, *herald);
    }
    Mat rho = Mat::Zero((Eigen::Index)b_dim, (Eigen::Index)b_dim);
    for (size_t b = 0; b < b_dim; b++) {
        for (size_t c = 0; c < b_dim; c++) {
            rho((Eigen::Index)b, (Eigen::Index)c) = (kraus[b] * kraus[c].adjoint()).trace() / (double)a_dim;
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    // Candidate heralds: eigenvectors of the ancilla output state, then the computational basis.
    std::vector<Vec> candidates;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++) {
        if (es.eigenvalues()(i) >= 1e-12) {
            candidates.push_back(es.eigenvectors().col(i));
        }
    }
    for (size_t b = 0; b < b_dim; b++) {
        candidates.push_back(Vec::Unit((Eigen::Index)b_dim, (Eigen::Index)b));
    }
    std::optional<PostselectAnalysis> best_valid, best_any;
    for (const Vec &h : candidates) {
        PostselectAnalysis r = analyze_with_herald(kraus, a_dim, h);
        if (r.residual < 1e-8 && (!best_valid || r.p > best_valid->p)) {
            best_valid = r;
        }
        if (!best_any || r.residual < best_any->residual) {
            best_any = r;
        }
    }
    return best_valid ? *best_valid : *best_any;
}

CompanionW companion_w(const Mat &u, const PostselectAnalysis &analysis, const Vec &beta) {
    size_t b_dim = (size_t)beta.size();
    if (analysis.beta_prime.size() != beta.size()) {
        throw std::invalid_argument("companion_w: ancilla dimensions differ");
    }
    if (!(analysis.residual < 1e-9)) {
        throw std::invalid_argument("companion_w: U is not a postselected gate (residual " +
                                    std::to_string(analysis.residual) + ")");
    }
    Mat from = SubspaceBasis(Mat(beta / beta.norm()), 1e-9).extended_basis();
    Mat to = SubspaceBasis(Mat(analysis.beta_prime), 1e-9).extended_basis();
    CompanionW c;
    c.w = to * from.adjoint();
    size_t a_dim = (size_t)u.rows() / b_dim;
    Mat embed = kron(Mat::Identity((Eigen::Index)a_dim, (Eigen::Index)a_dim), Mat(beta));
    c.achieved = op_norm((u - kron(analysis.v, c.w)) * embed);
    c.bound = std::sqrt(2 * (1 - std::sqrt(analysis.p)));
    return c;
}

double adjoin_gap(size_t k, double p_f) {
    if (k < 2 || !(p_f >= 0 && p_f <= 1)) {
        throw std::invalid_argument("adjoin_gap needs k >= 2 and p_f in [0, 1]");
    }
    // 1 - sqrt(p_s) = (1 - p_s) / (1 + sqrt(p_s)); 1 - p_s = q (2 - q), q = p_f^(k-1)
    double q = std::pow(p_f, (double)(k - 1));
    double fail = q * (2 - q);
    double ps = 1 - fail;
    return 2 * std::sqrt(2 * fail / (1 + std::sqrt(ps)));
}

double effective_noise(double eta, size_t k, double p_f, const ThresholdParams &tp) {
    tp.validate();
    double kk = (double)k;
    return tp.c1 * kk * kk * eta + tp.c2 * eta + adjoin_gap(k, p_f);
}

double ocs_threshold(const ThresholdParams &tp, double p_f, size_t k) {
    tp.validate();
    double kk = (double)k;
    return (tp.eta_th - adjoin_gap(k, p_f)) / (tp.c1 * kk * kk + tp.c2);
}

std::optional<size_t> min_k_positive(const ThresholdParams &tp, double p_f, size_t k_max) {
    for (size_t k = 2; k <= k_max; k++) {
        if (ocs_threshold(tp, p_f, k) > 0) {
            return k;
        }
    }
    return std::nullopt;
}

std::pair<size_t, double> optimize_k(const ThresholdParams &tp, double p_f, size_t k_max) {
    if (k_max < 2) {
        throw std::invalid_argument("k_max must be at least 2");
    }
    std::pair<size_t, double> best{2, ocs_threshold(tp, p_f, 2)};
    for (size_t k = 3; k <= k_max; k++) {
        double v = ocs_threshold(tp, p_f, k);
        if (v > best.second) {
            best = {k, v};
        }
    }
    return best;
}

}  // namespace clusterft
