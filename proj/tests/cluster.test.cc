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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.h"

namespace clusterft {
namespace {

ClusterGraph random_graph(size_t n, double p, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    ClusterGraph g;
    for (size_t i = 0; i < n; i++) {
        g.add_measured((int)i, 0, 0, 0.0, false, 0);
    }
    for (size_t a = 0; a < n; a++) {
        for (size_t b = a + 1; b < n; b++) {
            if (u(rng) < p) {
                g.add_edge((int)a, (int)b);
            }
        }
    }
    return g;
}

// Single-level chain of measured nodes 0..k-1 with the given angles, then an output.
ClusterGraph chain(const std::vector<double> &angles) {
    ClusterGraph g;
    for (size_t i = 0; i < angles.size(); i++) {
        g.add_measured((int)i, 0, (int)i + 1, angles[i], i > 0, (int)i + 1);
    }
    int out = (int)angles.size();
    g.add_output(out, 0, out + 1);
    for (int i = 0; i < out; i++) {
        g.add_edge(i, i + 1);
    }
    return g;
}

TEST(Prepare, SmallGraphs) {
    ClusterGraph one;
    one.add_output(0, 0, 1);
    EXPECT_LT(testing::vec_diff(prepare(one).amplitudes(), StateVector::plus(1).amplitudes()), 1e-15);
    ClusterGraph two;
    two.add_measured(0, 0, 1, 0, false, 1);
    two.add_output(1, 0, 2);
    two.add_edge(0, 1);
    StateVector expect = apply(StateVector::plus(2), gates::cz(), {0, 1});
    EXPECT_LT(testing::vec_diff(prepare(two).amplitudes(), expect.amplitudes()), 1e-15);
}

TEST(Prepare, EdgeOrderInvariant) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        ClusterGraph g = random_graph(6, 0.5, seed);
        std::vector<std::pair<int, int>> order = g.edges();
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        EXPECT_LT(testing::vec_diff(prepare(g).amplitudes(), prepare(g, order).amplitudes()), 1e-12);
    }
}

TEST(Prepare, GraphStateAmplitudes) {
    // amplitude of basis x is (-1)^{#edges with both ends set} / sqrt(2^n)
    ClusterGraph g = random_graph(5, 0.6, 3);
    StateVector s = prepare(g);
    for (uint64_t x = 0; x < 32; x++) {
        int parity = 0;
        for (auto [a, b] : g.edges()) {
            parity ^= (int)(((x >> g.index_of(a)) & 1) & ((x >> g.index_of(b)) & 1));
        }
        EXPECT_NEAR(s.amplitudes()((Eigen::Index)x).real(), (parity ? -1.0 : 1.0) / std::sqrt(32.0), 1e-14);
    }
}

TEST(Graph, Validation) {
    ClusterGraph g;
    g.add_measured(0, 0, 1, 0, false, 1);
    g.add_output(1, 0, 2);
    EXPECT_THROW(g.add_edge(0, 0), std::invalid_argument);
    EXPECT_THROW(g.add_edge(0, 7), std::invalid_argument);
    EXPECT_THROW(g.add_output(2, 0, 3), std::invalid_argument);
    EXPECT_THROW(g.add_measured(1, 0, 1, 0, false, 1), std::invalid_argument);
    g.add_edge(1, 0);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_THROW(g.add_edge(0, 1), std::invalid_argument);
}

TEST(Graph, JsonRoundTrip) {
    ClusterGraph g = chain({0.3, -1.2});
    g.add_measured(10, 1, 1, 0.5, false, 1);
    g.add_edge(10, 0);
    nlohmann::json j = g.to_json();
    ClusterGraph h = ClusterGraph::from_json(j);
    EXPECT_EQ(h.to_json(), j);
    EXPECT_TRUE(h.is_bridge(0, 10));
    EXPECT_EQ(*h.output_of(0), 2);
    EXPECT_NEAR(h.node(1).angle, -1.2, 0);
    EXPECT_THROW(ClusterGraph::from_json(nlohmann::json::parse(R"({"nodes": 3})")), std::invalid_argument);
}

TEST(Frame, UpdateTable) {
    PauliFrame f = PauliFrame::zero({0, 1});
    PauliFrame a = frame_update(f, 0, 1);
    EXPECT_EQ(a.at(0).x, 1);
    EXPECT_EQ(a.at(0).z, 0);
    EXPECT_EQ(a.at(1).x, 0);
    PauliFrame b = frame_update(f, 0, 0);
    EXPECT_EQ(b.at(0).x, 0);
    EXPECT_EQ(b.at(0).z, 0);
    PauliFrame c = f;
    c.bits[0] = {1, 1};
    PauliFrame d = frame_update(c, 0, 1);
    EXPECT_EQ(d.at(0).x, 0);
    EXPECT_EQ(d.at(0).z, 1);
    // H X Z = -X Z H: the global sign flips when both bits are set
    EXPECT_EQ(d.sign, 1);
    EXPECT_THROW(frame_update(f, 5, 0), std::out_of_range);
}

TEST(Frame, SignRuleMatchesOperatorIdentity) {
    // H X^x Z^z = (-1)^{xz} X^z Z^x H
    Mat h = gates::hadamard();
    for (int x = 0; x < 2; x++) {
        for (int z = 0; z < 2; z++) {
            Mat xp = x ? gates::pauli_x() : gates::identity(2);
            Mat zp = z ? gates::pauli_z() : gates::identity(2);
            Mat xz = z ? gates::pauli_x() : gates::identity(2);
            Mat zx = x ? gates::pauli_z() : gates::identity(2);
            double s = (x & z) ? -1.0 : 1.0;
            EXPECT_LT(testing::max_abs_diff(h * xp * zp, s * xz * zx * h), 1e-15);
        }
    }
}

TEST(Rotation, AdaptiveSign) {
    ClusterGraph g = chain({0.7, 0.4});
    PauliFrame f = PauliFrame::zero({0});
    EXPECT_LT(testing::max_abs_diff(measurement_rotation(g.node(0), f), gates::hz(0.7)), 1e-15);
    f.bits[0].x = 1;
    EXPECT_LT(testing::max_abs_diff(measurement_rotation(g.node(1), f), gates::hz(-0.4)), 1e-15);
    // non-adaptive nodes ignore the frame
    EXPECT_LT(testing::max_abs_diff(measurement_rotation(g.node(0), f), gates::hz(0.7)), 1e-15);
    ClusterGraph z = chain({0.0, 0.0});
    EXPECT_LT(testing::max_abs_diff(measurement_rotation(z.node(1), f), gates::hadamard()), 1e-15);
}

TEST(MeasureNode, ChainAllBranches) {
    const double a1 = 0.9, a2 = -0.35;
    ClusterGraph g = chain({a1, a2});
    Vec ideal = gates::hz(a2) * gates::hz(a1) * StateVector::plus(1).amplitudes();
    for (int m1 = 0; m1 < 2; m1++) {
        for (int m2 = 0; m2 < 2; m2++) {
            StateVector s = prepare(g);
            PauliFrame f = PauliFrame::zero({0});
            NodeMeasurement r1 = measure_node(s, g, 0, f, m1, 1);
            NodeMeasurement r2 = measure_node(r1.posterior, g, 1, r1.frame, m2, 2);
            EXPECT_NEAR(r1.prob, 0.5, 1e-12);
            // output qubit amplitudes with nodes 0, 1 pinned to their outcomes
            Vec out(2);
            for (int b = 0; b < 2; b++) {
                out(b) = r2.posterior.amplitudes()(m1 | (m2 << 1) | (b << 2));
            }
            Mat sigma = final_correction(r2.frame).matrix({0});
            EXPECT_LT(testing::vec_diff(out, sigma * ideal), 1e-12) << "m1=" << m1 << " m2=" << m2;
        }
    }
}

TEST(MeasureNode, OrderingErrors) {
    ClusterGraph g = chain({0.1, 0.2});
    StateVector s = prepare(g);
    PauliFrame f = PauliFrame::zero({0});
    Execution e(g);
    e.prepare_nodes({0, 1, 2});
    e.apply_edges(g.edges());
    EXPECT_THROW(e.measure(1, 0, 1), std::logic_error);
    e.measure(0, 0, 1);
    EXPECT_THROW(e.measure(0, 0, 1), std::logic_error);
    EXPECT_THROW(e.measure(2, 0, 1), std::logic_error);
}

TEST(MeasureNode, NeedsAppliedEdges) {
    ClusterGraph g = chain({0.1});
    Execution e(g);
    e.prepare_nodes({0, 1});
    EXPECT_THROW(e.measure(0, 0, 1), std::logic_error);
}

TEST(ZDelete, IsolatedNode) {
    ClusterGraph g = random_graph(3, 0.0, 1);
    for (int m = 0; m < 2; m++) {
        Deletion d = z_delete(prepare(g), g, 1, m, 0);
        EXPECT_EQ(d.m, m);
        EXPECT_LT(testing::vec_diff(d.posterior.amplitudes(), prepare(d.graph).amplitudes()), 1e-14);
    }
}

TEST(ZDelete, TwoNodeEdge) {
    ClusterGraph g;
    g.add_measured(0, 0, 1, 0, false, 1);
    g.add_output(1, 0, 2);
    g.add_edge(0, 1);
    for (int m = 0; m < 2; m++) {
        // by hand: CZ|++> = (|0+> + |1->)/sqrt2; measuring 1 leaves |->, Z fixes it to |+>
        Deletion d = z_delete(prepare(g), g, 0, m, 0);
        EXPECT_LT(testing::vec_diff(d.posterior.amplitudes(), StateVector::plus(1).amplitudes()), 1e-12);
        EXPECT_FALSE(d.graph.has_node(0));
    }
}

TEST(ZDelete, RandomGraphsBothBranches) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        ClusterGraph g = random_graph(6, 0.5, seed);
        int node = (int)(seed % 6);
        for (int m = 0; m < 2; m++) {
            Deletion d = z_delete(prepare(g), g, node, m, seed);
            EXPECT_EQ(d.graph.nodes().size(), 5u);
            for (auto [a, b] : d.graph.edges()) {
                EXPECT_NE(a, node);
                EXPECT_NE(b, node);
            }
            EXPECT_LT(testing::vec_diff(d.posterior.amplitudes(), prepare(d.graph).amplitudes()), 1e-10);
        }
    }
    EXPECT_THROW(z_delete(prepare(random_graph(3, 0.5, 1)), random_graph(3, 0.5, 1), 9, 0, 0), std::out_of_range);
}

TEST(ZDelete, CommutesWithUnrelatedMeasurement) {
    // path 0-1-2-3; delete 0, measure 3 (non-adjacent), both orders
    ClusterGraph g;
    for (int i = 0; i < 4; i++) {
        g.add_measured(i, 0, 0, 0.3 * i, false, 0);
    }
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    Mat rot = gates::hz(0.8);
    for (int md = 0; md < 2; md++) {
        for (int mm = 0; mm < 2; mm++) {
            Deletion d = z_delete(prepare(g), g, 0, md, 0);
            MeasureResult a = measure(d.posterior, d.graph.index_of(3), rot, mm, 0);
            MeasureResult b0 = measure(prepare(g), g.index_of(3), rot, mm, 0);
            Deletion b = z_delete(b0.posterior, g, 0, md, 0);
            EXPECT_LT(testing::vec_diff(a.posterior.amplitudes(), b.posterior.amplitudes()), 1e-12);
        }
    }
}

TEST(Correction, Matrices) {
    PauliFrame f = PauliFrame::zero({0, 1});
    EXPECT_LT(testing::max_abs_diff(final_correction(f).matrix({0, 1}), gates::identity(4)), 1e-15);
    f.bits[1] = {1, 0};
    // qubit 1 carries level 1 and is the more significant one
    EXPECT_LT(testing::max_abs_diff(final_correction(f).matrix({0, 1}), kron(gates::pauli_x(), gates::identity(2))),
              1e-15);
    f.bits[1] = {1, 1};
    f.sign = 1;
    Mat expect = -kron(gates::pauli_x() * gates::pauli_z(), gates::identity(2));
    EXPECT_LT(testing::max_abs_diff(final_correction(f).matrix({0, 1}), expect), 1e-15);
}

TEST(ExecutionRun, ChainMatchesCircuit) {
    const double a1 = 1.1, a2 = 0.2, a3 = -0.8;
    ClusterGraph g = chain({a1, a2, a3});
    Vec ideal = gates::hz(a3) * gates::hz(a2) * gates::hz(a1) * StateVector::plus(1).amplitudes();
    for (int pattern = 0; pattern < 8; pattern++) {
        Execution e(g);
        e.prepare_nodes({0, 1, 2, 3});
        e.apply_edges(g.edges());
        for (int i = 0; i < 3; i++) {
            e.measure(i, (pattern >> i) & 1, 0);
        }
        EXPECT_EQ(e.live_nodes(), std::vector<int>{3});
        EXPECT_NEAR(e.branch_probability(), 0.125, 1e-12);
        EXPECT_LT(testing::vec_diff(e.corrected_output().amplitudes(), ideal), 1e-12);
    }
}

TEST(ExecutionRun, ReservedQubitsStayLow) {
    ClusterGraph g = chain({0.4});
    Execution e(g, 2);
    e.prepare_nodes({0, 1});
    EXPECT_EQ(e.slot(0), 2u);
    EXPECT_EQ(e.slot(1), 3u);
    e.apply_edges(g.edges());
    e.measure(0, 1, 0);
    EXPECT_EQ(e.slot(1), 2u);
    EXPECT_EQ(e.state().n_qubits(), 3u);
    EXPECT_THROW(e.output_state(), std::logic_error);
    Distribution d = e.corrected_distribution();
    Vec ideal = gates::hz(0.4) * StateVector::plus(1).amplitudes();
    EXPECT_NEAR(d["0"], std::norm(ideal(0)), 1e-12);
}

}  // namespace
}  // namespace clusterft
