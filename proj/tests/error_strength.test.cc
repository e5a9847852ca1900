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

#include "clusterft/error_strength.h"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.h"

namespace clusterft {
namespace {

using namespace clusterft::testing;

// exp(i eps H) with op_norm(exp(i eps H) - I) = target, H unit-norm Hermitian.
Mat calibrated_noise(size_t dim, double target, uint64_t seed) {
    Mat h = random_hermitian_unit(dim, seed);
    double eps = 2 * std::asin(target / 2);
    return expm_i_hermitian(h, eps);
}

TEST(Delta, ProductIsZero) {
    for (uint64_t seed = 0; seed < 5; seed++) {
        Mat u = haar_unitary(2, seed);
        Mat w = haar_unitary(2, seed + 100);
        DeltaResult r = delta(u, kron(u, w), {2, 2});
        EXPECT_LT(r.upper_bound, 1e-9);
        EXPECT_TRUE(is_unitary(r.argmin_env, 1e-10));
        EXPECT_TRUE(equal_up_to_phase(r.argmin_env, w, 1e-6));
    }
}

TEST(Delta, XOnIdentityIsSqrt2) {
    // Dense phase scan of the e_dim = 1 reduction, independent of the optimizer.
    double best = 1e9;
    for (int i = 0; i < 200000; i++) {
        double th = 2 * kPi * i / 200000.0;
        Complex e = std::polar(1.0, th);
        best = std::min(best, std::max(std::abs(1.0 - e), std::abs(-1.0 - e)));
    }
    EXPECT_NEAR(best, std::sqrt(2.0), 1e-8);
    Mat x = gates::pauli_x();
    DeltaResult r1 = delta(gates::identity(2), x, {2, 1});
    EXPECT_NEAR(r1.upper_bound, best, 1e-8);
    DeltaResult r2 = delta(gates::identity(2), kron(x, gates::identity(2)), {2, 2});
    EXPECT_NEAR(r2.upper_bound, std::sqrt(2.0), 1e-6);
    EXPECT_GE(r2.upper_bound, std::sqrt(2.0) - 1e-9);
    EXPECT_TRUE(r2.converged);
}

TEST(Delta, CalibratedNoiseBounded) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        Mat u = haar_unitary(2, seed);
        Mat n = calibrated_noise(4, 0.01, seed + 7);
        EXPECT_NEAR(op_norm(n - gates::identity(4)), 0.01, 1e-12);
        DeltaResult r = delta(u, n * kron(u, gates::identity(2)), {2, 2});
        EXPECT_LE(r.upper_bound, 0.01 + 1e-9);
        EXPECT_NEAR(delta_objective(u, n * kron(u, gates::identity(2)), r.argmin_env), r.upper_bound, 1e-9);
    }
}

TEST(Delta, PhaseInvariance) {
    for (uint64_t seed = 0; seed < 5; seed++) {
        Mat u = haar_unitary(4, seed);
        Complex ph = std::polar(1.0, 0.3 + seed);
        EXPECT_LT(delta(u, ph * kron(u, gates::identity(2)), {4, 2}).upper_bound, 1e-9);
    }
}

TEST(Delta, LeftInvariance) {
    Mat u = haar_unitary(2, 3);
    Mat v = calibrated_noise(4, 0.05, 4) * kron(u, gates::identity(2));
    double a = delta(u, v, {2, 2}).upper_bound;
    Mat l = kron(u.adjoint(), gates::identity(2));
    double b = delta(gates::identity(2), l * v, {2, 2}).upper_bound;
    EXPECT_NEAR(a, b, 1e-6);
}

TEST(Delta, Errors) {
    EXPECT_THROW(delta(gates::identity(2), gates::identity(8), {2, 2}), std::invalid_argument);
    EXPECT_THROW(delta(2 * gates::identity(2), gates::identity(4), {2, 2}), std::invalid_argument);
    EXPECT_THROW(delta(gates::identity(3), gates::identity(4), {2, 2}), std::invalid_argument);
}

TEST(Delta, Deterministic) {
    Mat u = haar_unitary(2, 1);
    Mat v = haar_unitary(4, 2);
    DeltaOptions o;
    o.seed = 9;
    EXPECT_EQ(delta(u, v, {2, 2}, o).upper_bound, delta(u, v, {2, 2}, o).upper_bound);
}

TEST(ChainBound, Noiseless) {
    std::vector<ChainTerm> terms;
    for (uint64_t s = 0; s < 3; s++) {
        Mat u = haar_unitary(2, s);
        terms.push_back({u, kron(u, gates::identity(2))});
    }
    ChainBound b = chain_bound(terms, {2, 2});
    EXPECT_LT(b.lhs, 1e-9);
    EXPECT_LT(b.rhs, 1e-9);
}

TEST(ChainBound, TwoTermsOfStrengthPointZeroOne) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        std::vector<ChainTerm> terms;
        for (uint64_t s = 0; s < 2; s++) {
            Mat u = haar_unitary(2, 10 * seed + s);
            terms.push_back({u, calibrated_noise(4, 0.01, 50 + 10 * seed + s) * kron(u, gates::identity(2))});
        }
        ChainBound b = chain_bound(terms, {2, 2});
        EXPECT_LE(b.lhs, 0.02 + 2e-9);
        EXPECT_LE(b.lhs, b.rhs + 1e-4);
    }
}

TEST(ChainBound, ThreeRandomTerms) {
    for (uint64_t seed = 0; seed < 100; seed++) {
        std::vector<ChainTerm> terms;
        for (uint64_t s = 0; s < 3; s++) {
            Mat u = haar_unitary(2, 1000 + 10 * seed + s);
            terms.push_back({u, calibrated_noise(4, 0.005, 2000 + 10 * seed + s) * kron(u, gates::identity(2))});
        }
        DeltaOptions o;
        o.starts = 3;
        ChainBound b = chain_bound(terms, {2, 2}, o);
        EXPECT_LE(b.lhs, 0.015 + 1e-9);
        EXPECT_LE(b.slack, 1e-4) << seed;
    }
}

TEST(Properties, RepartitionMonotone) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        Mat ua = haar_unitary(2, seed), ub = haar_unitary(2, seed + 1);
        Mat v = calibrated_noise(8, 0.1, seed + 2) * kron({ua, ub, gates::identity(2)});
        DeltaOptions o;
        o.starts = 4;
        double fine = delta(ua, v, {2, 4}, o).upper_bound;
        double coarse = delta(kron(ua, ub), v, {4, 2}, o).upper_bound;
        EXPECT_LE(fine, coarse + 1e-4) << seed;
    }
}

TEST(Properties, EnvironmentOmission) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        Mat ua = haar_unitary(2, seed);
        Mat vab = calibrated_noise(4, 0.08, seed + 3) * kron(ua, gates::identity(2));
        Mat vc = haar_unitary(2, seed + 4);
        DeltaOptions o;
        o.starts = 4;
        double with = delta(ua, kron(vab, vc), {2, 4}, o).upper_bound;
        double without = delta(ua, vab, {2, 2}, o).upper_bound;
        EXPECT_LE(with, without + 1e-4) << seed;
    }
}

TEST(CommuteSwap, Noiseless) {
    Mat uq = gates::z_rot(0.4), vq = gates::z_rot(1.1);
    Mat i2 = gates::identity(2);
    SwapResult s = commute_swap(uq, vq, kron(uq, i2), kron(vq, i2), {2, 2});
    EXPECT_LT(max_abs_diff(s.u_tilde * s.v_tilde, kron(vq, i2) * kron(uq, i2)), 1e-10);
    EXPECT_LT(delta(uq, s.u_tilde, {2, 2}).upper_bound, 1e-9);
    EXPECT_LT(delta(vq, s.v_tilde, {2, 2}).upper_bound, 1e-9);
}

TEST(CommuteSwap, ProductEqualityIdentity) {
    Mat i2 = gates::identity(2);
    for (uint64_t seed = 0; seed < 10; seed++) {
        Mat uqe = calibrated_noise(4, 0.02, seed);
        Mat vqe = calibrated_noise(4, 0.03, seed + 50);
        SwapResult s = commute_swap(i2, i2, uqe, vqe, {2, 2});
        EXPECT_LT(max_abs_diff(s.u_tilde * s.v_tilde, vqe * uqe), 1e-10);
    }
}

TEST(CommuteSwap, CrosswiseBounds) {
    Mat i2 = gates::identity(2);
    Mat uq = gates::z_rot(kPi / 4), vq = gates::z_rot(kPi / 8);
    for (uint64_t seed = 0; seed < 5; seed++) {
        Mat uqe = calibrated_noise(4, 0.01, seed) * kron(uq, i2);
        Mat vqe = calibrated_noise(4, 0.01, seed + 20) * kron(vq, i2);
        SwapResult s = commute_swap(uq, vq, uqe, vqe, {2, 2});
        EXPECT_LT(max_abs_diff(s.u_tilde * s.v_tilde, vqe * uqe), 1e-10);
        EXPECT_LE(delta(uq, s.u_tilde, {2, 2}).upper_bound, delta(vq, vqe, {2, 2}).upper_bound + 1e-6);
        EXPECT_LE(delta(vq, s.v_tilde, {2, 2}).upper_bound, delta(uq, uqe, {2, 2}).upper_bound + 1e-6);
    }
}

TEST(CommuteSwap, RejectsNonCommuting) {
    Mat i2 = gates::identity(2);
    EXPECT_THROW(commute_swap(gates::pauli_x(), gates::pauli_z(), kron(gates::pauli_x(), i2),
                              kron(gates::pauli_z(), i2), {2, 2}),
                 std::invalid_argument);
}

}  // namespace
}  // namespace clusterft
