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

#ifndef CLUSTERFT_LINALG_H
#define CLUSTERFT_LINALG_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace clusterft {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;
constexpr double kEqualityTol = 1e-10;
constexpr double kOrthonormalTol = 1e-12;

/// Throws std::invalid_argument when any entry is NaN or infinite.
void require_finite(const Mat &m, const char *what = "matrix");

/// Largest singular value.
double op_norm(const Mat &m);

/// Smallest singular value (0 for empty matrices).
double sigma_min(const Mat &m);

struct Svd {
    Mat left;
    RealVec sigma;
    Mat right;

    /// Rectangular diagonal matrix with the singular values, shaped like the input.
    Mat sigma_matrix() const;
    Mat reconstruct() const;
};

/// Full SVD with M = left * sigma_matrix() * right and sigma nonincreasing.
Svd svd(const Mat &m);

Mat kron(const Mat &a, const Mat &b);
Mat kron(const std::vector<Mat> &factors);

bool is_unitary(const Mat &m, double tol = kEqualityTol);
bool is_hermitian(const Mat &m, double tol = kEqualityTol);

/// Unitary factor of the polar decomposition (closest unitary in any unitarily invariant norm).
Mat polar_unitary(const Mat &m);

/// exp(i t H) for Hermitian H.
Mat expm_i_hermitian(const Mat &h, double t);

/// Tr_Q of an operator on Q (x) E, Q being the more significant factor.
Mat partial_trace_first(const Mat &m, size_t q_dim, size_t e_dim);
/// Tr_E of an operator on Q (x) E.
Mat partial_trace_second(const Mat &m, size_t q_dim, size_t e_dim);

/// An isometry whose columns span a subspace S of an ambient space T.
class SubspaceBasis {
   public:
    explicit SubspaceBasis(Mat isometry, double tol = kOrthonormalTol);

    static SubspaceBasis full(size_t dim);
    /// Span of the standard basis vectors with the given indices.
    static SubspaceBasis coordinate(size_t ambient_dim, const std::vector<size_t> &indices);
    /// Random subspace of the given dimension (first columns of a Haar unitary).
    static SubspaceBasis random(size_t ambient_dim, size_t dim, uint64_t seed);

    size_t ambient_dim() const {
        return (size_t)isometry_.rows();
    }
    size_t dim() const {
        return (size_t)isometry_.cols();
    }
    const Mat &isometry() const {
        return isometry_;
    }
    Mat projector() const;
    /// Orthonormal basis of the orthogonal complement.
    Mat complement() const;
    /// [isometry | complement], a unitary on the ambient space.
    Mat extended_basis() const;

   private:
    Mat isometry_;
};

Mat restrict(const Mat &m, const SubspaceBasis &s);

/// Complex Ginibre matrix with unit-variance entries.
Mat random_matrix(size_t rows, size_t cols, uint64_t seed);
Mat haar_unitary(size_t dim, uint64_t seed);
/// Hermitian with op_norm exactly 1.
Mat random_hermitian_unit(size_t dim, uint64_t seed);
Vec random_state(size_t dim, uint64_t seed);

/// Derives a well-mixed child seed (splitmix64).
uint64_t derive_seed(uint64_t seed, uint64_t stream);

namespace gates {
Mat identity(size_t dim);
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat hadamard();
/// exp(-i alpha Z / 2).
Mat z_rot(double alpha);
/// exp(-i alpha X / 2) = H z_rot(alpha) H.
Mat x_rot(double alpha);
/// H * z_rot(alpha).
Mat hz(double alpha);
Mat cz();
/// Control is the first (more significant) qubit.
Mat cnot();
Mat swap();
/// |0><0| (x) I + |1><1| (x) u, control first.
Mat controlled(const Mat &u);
}  // namespace gates

}  // namespace clusterft

#endif
