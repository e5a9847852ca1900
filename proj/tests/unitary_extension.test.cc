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

#include "clusterft/unitary_extension.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace clusterft {
namespace {

using namespace clusterft::testing;

struct Instance {
    size_t dim;
    size_t sub;
    SubspaceBasis s;
};

Instance random_instance(uint64_t seed) {
    size_t dim = 4 + seed % 13;
    size_t sub = 1 + (seed / 13) % (dim - 1);
    return {dim, sub, SubspaceBasis::random(dim, sub, derive_seed(seed, 1))};
}

// U~ = U (P + W Q) with W acting inside S_perp, so U~|_S = U|_S.
Mat agree_on_s(const Mat &u, const SubspaceBasis &s, uint64_t seed) {
    Mat comp = s.complement();
    Mat w = haar_unitary((size_t)comp.cols(), seed);
    return u * (s.projector() + comp * w * comp.adjoint());
}

TEST(ExtendFirst, TrivialCases) {
    Mat u = haar_unitary(6, 1), v = haar_unitary(6, 2);
    SubspaceBasis s = SubspaceBasis::random(6, 2, 3);
    ExtensionCertificate c = extend_first(u, u, v, s);
    EXPECT_LT(max_abs_diff(c.extension, v), 1e-12);
    EXPECT_NEAR(c.bound_lhs, c.bound_rhs, 1e-12);
    ExtensionCertificate f = extend_first(u, u, v, SubspaceBasis::full(6));
    EXPECT_LT(max_abs_diff(f.extension, v), 1e-12);
}

TEST(ExtendFirst, RandomInstances) {
    for (uint64_t seed = 0; seed < 1000; seed++) {
        Instance in = random_instance(seed);
        Mat u = haar_unitary(in.dim, derive_seed(seed, 2));
        Mat v = haar_unitary(in.dim, derive_seed(seed, 3));
        Mat ut = agree_on_s(u, in.s, derive_seed(seed, 4));
        ExtensionCertificate c = extend_first(u, ut, v, in.s);
        ASSERT_TRUE(is_unitary(c.extension, 1e-10)) << seed;
        // Restriction equality, recomputed with the hand-rolled product.
        EXPECT_LT(max_abs_diff(naive_product(c.extension, in.s.isometry()), naive_product(v, in.s.isometry())), 1e-10);
        EXPECT_LE(op_norm(c.extension - ut), op_norm(v - u) + 1e-9) << seed;
        EXPECT_LT(c.restriction_residual, 1e-10);
    }
}

TEST(ExtendFirst, IndependentOfCompletion) {
    Mat u = haar_unitary(8, 11), v = haar_unitary(8, 12);
    SubspaceBasis s = SubspaceBasis::random(8, 3, 13);
    // Same span, different orthonormal basis.
    SubspaceBasis s2(s.isometry() * haar_unitary(3, 14));
    Mat ut = agree_on_s(u, s, 15);
    EXPECT_LT(max_abs_diff(extend_first(u, ut, v, s).extension, extend_first(u, ut, v, s2).extension), 1e-10);
}

TEST(ExtendFirst, HypothesisViolation) {
    Mat u = haar_unitary(4, 1), ut = haar_unitary(4, 2), v = haar_unitary(4, 3);
    SubspaceBasis s = SubspaceBasis::random(4, 2, 4);
    try {
        extend_first(u, ut, v, s);
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError &e) {
        EXPECT_NEAR(e.residual(), op_norm(restrict(u, s) - restrict(ut, s)), 1e-12);
    }
}

TEST(ExtendSecond, TrivialCases) {
    Mat u = haar_unitary(6, 1), v = haar_unitary(6, 2);
    SubspaceBasis s = SubspaceBasis::random(6, 2, 3);
    ExtensionCertificate same = extend_second(u, u, s);
    EXPECT_LT(op_norm(u - same.extension), 1e-10);
    EXPECT_LT(same.bound_rhs, 1e-10);
    ExtensionCertificate full = extend_second(u, v, SubspaceBasis::full(6));
    EXPECT_LT(max_abs_diff(full.extension, v), 1e-10);
}

TEST(ExtendSecond, RandomInstances) {
    for (uint64_t seed = 0; seed < 1000; seed++) {
        Instance in = random_instance(seed + 5000);
        Mat u = haar_unitary(in.dim, derive_seed(seed, 7));
        Mat v = haar_unitary(in.dim, derive_seed(seed, 8));
        ExtensionCertificate c = extend_second(u, v, in.s);
        ASSERT_TRUE(is_unitary(c.extension, 1e-10));
        EXPECT_LT(op_norm(restrict(c.extension, in.s) - restrict(v, in.s)), 1e-10);
        EXPECT_LE(op_norm(u - c.extension), 2 * op_norm(restrict(u, in.s) - restrict(v, in.s)) + 1e-9) << seed;
    }
}

TEST(ExtendSecond, CloseOnSubspace) {
    // V close to U on S: the bound is then meaningful (< 2).
    for (uint64_t seed = 0; seed < 50; seed++) {
        Mat u = haar_unitary(8, seed);
        SubspaceBasis s = SubspaceBasis::random(8, 3, seed + 1);
        Mat v = expm_i_hermitian(random_hermitian_unit(8, seed + 2), 0.05) * agree_on_s(u, s, seed + 3);
        ExtensionCertificate c = extend_second(u, v, s);
        double rhs = 2 * op_norm(restrict(u, s) - restrict(v, s));
        EXPECT_LT(rhs, 0.2);
        EXPECT_LE(op_norm(u - c.extension), rhs + 1e-9);
    }
}

TEST(ExtendSecond, WeakerImplication) {
    for (uint64_t seed = 0; seed < 100; seed++) {
        Mat u = haar_unitary(6, seed), v = haar_unitary(6, seed + 1000);
        SubspaceBasis s = SubspaceBasis::random(6, 2, seed + 2000);
        Mat ut = agree_on_s(u, s, seed + 3000);
        if (op_norm(restrict(ut, s) - restrict(v, s)) <= op_norm(u - v)) {
            EXPECT_LE(op_norm(extend_second(ut, v, s).extension - ut), 2 * op_norm(u - v) + 1e-9);
        }
    }
}

TEST(ExtendSecond, RejectsNonUnitary) {
    EXPECT_THROW(extend_second(2 * gates::identity(2), gates::identity(2), SubspaceBasis::full(2)),
                 std::invalid_argument);
}

TEST(BlockDecompose, Identity) {
    SubspaceBasis s = SubspaceBasis::random(5, 2, 1);
    BlockDecomposition b = block_decompose(gates::identity(5), s);
    EXPECT_LT(max_abs_diff(b.a, gates::identity(2)), 1e-12);
    EXPECT_LT(max_abs_diff(b.d, gates::identity(3)), 1e-12);
    EXPECT_LT(b.b.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(b.c.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BlockDecompose, BlockDiagonalHasNoOffBlocks) {
    SubspaceBasis s = SubspaceBasis::coordinate(5, {0, 1});
    Mat m = Mat::Zero(5, 5);
    m.topLeftCorner(2, 2) = haar_unitary(2, 1);
    m.bottomRightCorner(3, 3) = haar_unitary(3, 2);
    BlockDecomposition b = block_decompose(m, s);
    EXPECT_LT(b.b.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(b.c.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BlockDecompose, Reassembles) {
    for (uint64_t seed = 0; seed < 20; seed++) {
        Mat m = haar_unitary(7, seed);
        SubspaceBasis s = SubspaceBasis::random(7, 1 + seed % 6, seed + 1);
        BlockDecomposition b = block_decompose(m, s);
        EXPECT_LT(max_abs_diff(b.basis * b.reassemble() * b.basis.adjoint(), m), 1e-12);
    }
    EXPECT_THROW(block_decompose(gates::identity(3), SubspaceBasis::full(4)), std::invalid_argument);
}

TEST(AppendixPropositions, SigmaMinOfDiagonalBlocksAgree) {
    for (uint64_t seed = 0; seed < 1000; seed++) {
        size_t dim = 3 + seed % 8;
        Mat m = haar_unitary(dim, seed);
        SubspaceBasis s = SubspaceBasis::random(dim, 1 + seed % (dim - 1), seed + 77);
        BlockDecomposition b = block_decompose(m, s);
        EXPECT_NEAR(sigma_min(b.a), sigma_min(b.d), 1e-9) << seed;
    }
}

TEST(AppendixPropositions, DistanceFromIdentity) {
    for (uint64_t seed = 0; seed < 1000; seed++) {
        size_t dim = 2 + seed % 6;
        Mat g = random_matrix(dim, dim, seed);
        Mat m = g / (op_norm(g) * (1.0 + (double)(seed % 5)));  // contraction
        EXPECT_GE(op_norm(gates::identity(dim) - m), 1 - sigma_min(m) - 1e-9) << seed;
    }
}

TEST(AppendixPropositions, PositiveBlockNormBound) {
    for (uint64_t seed = 0; seed < 1000; seed++) {
        size_t dim = 2 + seed % 7;
        size_t m_dim = 1 + seed % (dim - 1);
        Mat g = random_matrix(dim, dim, seed + 9);
        Mat pos = g * g.adjoint();
        Mat a = pos.topLeftCorner((Eigen::Index)m_dim, (Eigen::Index)m_dim);
        Mat c = pos.bottomRightCorner((Eigen::Index)(dim - m_dim), (Eigen::Index)(dim - m_dim));
        EXPECT_LE(op_norm(pos), op_norm(a) + op_norm(c) + 1e-9) << seed;
    }
}

}  // namespace
}  // namespace clusterft
