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

#include "clusterft/simulator.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.h"

namespace clusterft {
namespace {

TEST(StateVector, Construction) {
    StateVector z(3);
    EXPECT_EQ(z.dim(), 8u);
    EXPECT_EQ(z.amplitudes()(0), Complex(1));
    StateVector p = StateVector::plus(2);
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(p.amplitudes()(i).real(), 0.5, 1e-15);
    }
    EXPECT_EQ(StateVector::basis(3, 5).amplitudes()(5), Complex(1));
    EXPECT_THROW(StateVector(1, Vec::Ones(2)), std::invalid_argument);
    EXPECT_THROW(StateVector(2, Vec::Ones(2) / std::sqrt(2.0)), std::invalid_argument);
    EXPECT_THROW(StateVector(kMaxQubits + 1), std::length_error);
}

TEST(Apply, HadamardOnZero) {
    StateVector s = apply(StateVector(1), gates::hadamard(), {0});
    EXPECT_LT(testing::vec_diff(s.amplitudes(), StateVector::plus(1).amplitudes()), 1e-15);
}

TEST(Apply, TwoNodeCluster) {
    StateVector s = apply(StateVector::plus(2), gates::cz(), {0, 1});
    Vec expect(4);
    expect << 0.5, 0.5, 0.5, -0.5;
    EXPECT_LT(testing::vec_diff(s.amplitudes(), expect), 1e-15);
}

TEST(Apply, PauliXPermutesAmplitudes) {
    StateVector s(3, random_state(8, 4));
    StateVector t = apply(s, gates::pauli_x(), {1});
    for (uint64_t i = 0; i < 8; i++) {
        EXPECT_EQ(t.amplitudes()((Eigen::Index)i), s.amplitudes()((Eigen::Index)(i ^ 2u)));
    }
}

TEST(Apply, TargetOrderIsMostSignificantFirst) {
    // CNOT with control on qubit 2 and target on qubit 0
    StateVector s = StateVector::basis(3, 0b100);
    StateVector t = apply(s, gates::cnot(), {2, 0});
    EXPECT_EQ(t.amplitudes()(0b101), Complex(1));
    // matches the full-register Kronecker embedding (qubit 2 most significant)
    StateVector r(3, random_state(8, 9));
    Mat full = Mat::Zero(8, 8);
    for (uint64_t col = 0; col < 8; col++) {
        uint64_t row = ((col >> 2) & 1) ? (col ^ 1u) : col;
        full((Eigen::Index)row, (Eigen::Index)col) = 1;
    }
    EXPECT_LT(testing::vec_diff(apply(r, gates::cnot(), {2, 0}).amplitudes(), full * r.amplitudes()), 1e-14);
}

TEST(Apply, Errors) {
    StateVector s(2);
    EXPECT_THROW(apply(s, gates::cz(), {0}), std::invalid_argument);
    EXPECT_THROW(apply(s, gates::cz(), {0, 0}), std::invalid_argument);
    EXPECT_THROW(apply(s, gates::hadamard(), {2}), std::out_of_range);
}

TEST(Apply, NormDrift) {
    StateVector s(4, random_state(16, 1));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; i++) {
        size_t a = rng() % 4, b = (a + 1 + rng() % 3) % 4;
        if (i % 2 == 0) {
            apply_inplace(s, haar_unitary(2, rng()), {a});
        } else {
            apply_inplace(s, haar_unitary(4, rng()), {a, b});
        }
    }
    EXPECT_LT(std::abs(s.norm() - 1), 1e-9);
}

TEST(Measure, Basics) {
    MeasureResult r = measure(StateVector::plus(1), 0, gates::hadamard(), std::nullopt, 3);
    EXPECT_EQ(r.m, 0);
    EXPECT_NEAR(r.prob, 1.0, 1e-15);
    MeasureResult z = measure(StateVector(1), 0, gates::identity(2), std::nullopt, 3);
    EXPECT_EQ(z.m, 0);
    EXPECT_NEAR(z.prob, 1.0, 1e-15);
    EXPECT_THROW(measure(StateVector(1), 0, gates::identity(2), 1, 3), std::domain_error);
}

TEST(Measure, ClusterTeleportation) {
    // X^m H Z_a |+> lands on node 2 after measuring node 1 in H Z_a
    for (double a : {0.0, 0.4, 2.1}) {
        for (int m = 0; m < 2; m++) {
            StateVector s = apply(StateVector::plus(2), gates::cz(), {0, 1});
            MeasureResult r = measure(s, 0, gates::hz(a), m, 1);
            EXPECT_NEAR(r.prob, 0.5, 1e-12);
            // brute force: project node 0 after rotation
            Vec rot = kron(gates::identity(2), gates::hz(a)) * s.amplitudes();
            Vec out(2);
            out << rot(0 + m), rot(2 + m);
            out /= out.norm();
            Vec expect = (m ? gates::pauli_x() : gates::identity(2)) * gates::hz(a) *
                         StateVector::plus(1).amplitudes();
            EXPECT_LT((out - expect).norm(), 1e-12);
            Vec post(2);
            post << r.posterior.amplitudes()(m), r.posterior.amplitudes()(2 + m);
            EXPECT_LT((post - expect).norm(), 1e-12);
        }
    }
}

TEST(Measure, BranchesSumToOne) {
    for (uint64_t s = 0; s < 30; s++) {
        StateVector st(3, random_state(8, s));
        Mat rot = haar_unitary(2, s + 100);
        double p1 = prob_one(st, s % 3, rot);
        MeasureResult a = measure(st, s % 3, rot, 0, s);
        MeasureResult b = measure(st, s % 3, rot, 1, s);
        EXPECT_NEAR(a.prob + b.prob, 1.0, 1e-10);
        EXPECT_NEAR(b.prob, p1, 1e-12);
        EXPECT_NEAR(a.posterior.norm(), 1.0, 1e-12);
    }
}

TEST(Measure, SamplingDeterministic) {
    StateVector st(2, random_state(4, 3));
    EXPECT_EQ(measure(st, 1, gates::hadamard(), std::nullopt, 9).m, measure(st, 1, gates::hadamard(), std::nullopt, 9).m);
    int ones = 0;
    for (uint64_t s = 0; s < 4000; s++) {
        ones += measure(StateVector::plus(1), 0, gates::identity(2), std::nullopt, s).m;
    }
    EXPECT_NEAR(ones / 4000.0, 0.5, 0.03);
}

TEST(Register, AppendRemovePermute) {
    StateVector s(2, random_state(4, 2));
    StateVector t = append_plus(s);
    EXPECT_EQ(t.n_qubits(), 3u);
    EXPECT_LT(testing::vec_diff(t.amplitudes(), kron(Mat(StateVector::plus(1).amplitudes()), Mat(s.amplitudes()))),
              1e-15);
    StateVector u = append_qubit(s, Vec::Unit(2, 1));
    EXPECT_LT(testing::vec_diff(remove_qubit(u, 2, 1).amplitudes(), s.amplitudes()), 1e-15);
    EXPECT_THROW(remove_qubit(u, 2, 0), std::domain_error);
    // permutation oracle: result qubit k = input qubit order[k]
    StateVector r(3, random_state(8, 7));
    StateVector p = permute_qubits(r, {2, 0, 1});
    for (uint64_t i = 0; i < 8; i++) {
        // output bits o0 o1 o2 come from input qubits 2, 0, 1
        uint64_t in = ((i >> 0) & 1) << 2 | ((i >> 1) & 1) << 0 | ((i >> 2) & 1) << 1;
        EXPECT_EQ(p.amplitudes()((Eigen::Index)i), r.amplitudes()((Eigen::Index)in));
    }
}

TEST(Distribution, Marginals) {
    Distribution d0 = distribution(StateVector(1), {0});
    EXPECT_EQ(d0.size(), 1u);
    EXPECT_NEAR(d0["0"], 1.0, 1e-15);
    Distribution dp = distribution(StateVector::plus(1), {0});
    EXPECT_NEAR(dp["0"], 0.5, 1e-15);
    EXPECT_NEAR(dp["1"], 0.5, 1e-15);

    StateVector s(3, random_state(8, 21));
    Distribution d = distribution(s, {2, 0});
    double total = 0;
    for (int b2 = 0; b2 < 2; b2++) {
        for (int b0 = 0; b0 < 2; b0++) {
            double p = 0;
            for (int b1 = 0; b1 < 2; b1++) {
                p += std::norm(s.amplitudes()(b0 | b1 << 1 | b2 << 2));
            }
            std::string key = std::string(1, char('0' + b2)) + char('0' + b0);
            EXPECT_NEAR(d[key], p, 1e-14);
            total += d[key];
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Kolmogorov, Examples) {
    Distribution p{{"0", 1.0}};
    Distribution q{{"1", 1.0}};
    EXPECT_NEAR(kolmogorov(p, p), 0, 1e-15);
    EXPECT_NEAR(kolmogorov(p, q), 1, 1e-15);
    EXPECT_NEAR(kolmogorov({{"0", 0.75}, {"1", 0.25}}, {{"0", 0.5}, {"1", 0.5}}), 0.25, 1e-15);
}

TEST(Kolmogorov, MetricProperties) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    auto rand_dist = [&]() {
        Distribution d;
        double t = 0;
        for (const char *k : {"00", "01", "10", "11"}) {
            d[k] = u(rng);
            t += d[k];
        }
        for (auto &[k, v] : d) {
            v /= t;
        }
        return d;
    };
    for (int i = 0; i < 100; i++) {
        Distribution a = rand_dist(), b = rand_dist(), c = rand_dist();
        EXPECT_NEAR(kolmogorov(a, b), kolmogorov(b, a), 1e-15);
        EXPECT_LE(kolmogorov(a, c), kolmogorov(a, b) + kolmogorov(b, c) + 1e-15);
        EXPECT_GE(kolmogorov(a, b), 0);
        EXPECT_LE(kolmogorov(a, b), 1);
    }
}

TEST(Overlap, InnerAndFidelity) {
    StateVector a(2, random_state(4, 1));
    StateVector b(2, Vec(a.amplitudes() * std::exp(Complex(0, 0.3))));
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-14);
    EXPECT_NEAR(std::arg(inner(a, b)), 0.3, 1e-14);
}

}  // namespace
}  // namespace clusterft
