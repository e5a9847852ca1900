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

#include "clusterft/linalg.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace clusterft {

void require_finite(const Mat &m, const char *what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + " has non-finite entries");
    }
}

double op_norm(const Mat &m) {
    require_finite(m);
    if (m.size() == 0) {
        return 0.0;
    }
    // Divide and conquer; falls back to Jacobi below 16 columns.
    Eigen::BDCSVD<Mat> j(m);
    return j.singularValues()(0);
}

double sigma_min(const Mat &m) {
    require_finite(m);
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<Mat> j(m);
    return j.singularValues()(j.singularValues().size() - 1);
}

Mat Svd::sigma_matrix() const {
    Mat s = Mat::Zero(left.cols(), right.rows());
    for (Eigen::Index k = 0; k < sigma.size(); k++) {
        s(k, k) = sigma(k);
    }
    return s;
}

Mat Svd::reconstruct() const {
    return left * sigma_matrix() * right;
}

Svd svd(const Mat &m) {
    require_finite(m);
    Svd out;
    if (m.size() == 0) {
        out.left = Mat::Identity(m.rows(), m.rows());
        out.right = Mat::Identity(m.cols(), m.cols());
        out.sigma = RealVec(0);
        return out;
    }
    Eigen::JacobiSVD<Mat> j(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.left = j.matrixU();
    out.sigma = j.singularValues();
    out.right = j.matrixV().adjoint();
    return out;
}

Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Mat kron(const std::vector<Mat> &factors) {
    Mat out = Mat::Identity(1, 1);
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

bool is_unitary(const Mat &m, double tol) {
    if (m.rows() != m.cols() || !m.allFinite()) {
        return false;
    }
    return op_norm(m.adjoint() * m - Mat::Identity(m.rows(), m.cols())) < tol;
}

bool is_hermitian(const Mat &m, double tol) {
    if (m.rows() != m.cols() || !m.allFinite()) {
        return false;
    }
    return op_norm(m - m.adjoint()) < tol;
}

Mat polar_unitary(const Mat &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("polar_unitary needs a square matrix");
    }
    Svd s = svd(m);
    return s.left * s.right;
}

Mat expm_i_hermitian(const Mat &h, double t) {
    Mat herm = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    Vec phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); k++) {
        phases(k) = std::exp(Complex(0, t * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat partial_trace_first(const Mat &m, size_t q_dim, size_t e_dim) {
    if ((size_t)m.rows() != q_dim * e_dim || (size_t)m.cols() != q_dim * e_dim) {
        throw std::invalid_argument("partial trace dimension mismatch");
    }
    Mat out = Mat::Zero(e_dim, e_dim);
    for (size_t q = 0; q < q_dim; q++) {
        out += m.block(q * e_dim, q * e_dim, e_dim, e_dim);
    }
    return out;
}

Mat partial_trace_second(const Mat &m, size_t q_dim, size_t e_dim) {
    if ((size_t)m.rows() != q_dim * e_dim || (size_t)m.cols() != q_dim * e_dim) {
        throw std::invalid_argument("partial trace dimension mismatch");
    }
    Mat out = Mat::Zero(q_dim, q_dim);
    for (size_t a = 0; a < q_dim; a++) {
        for (size_t b = 0; b < q_dim; b++) {
            out(a, b) = m.block(a * e_dim, b * e_dim, e_dim, e_dim).trace();
        }
    }
    return out;
}

SubspaceBasis::SubspaceBasis(Mat isometry, double tol) : isometry_(std::move(isometry)) {
    require_finite(isometry_, "subspace basis");
    if (isometry_.cols() > isometry_.rows()) {
        throw std::invalid_argument("subspace basis has more columns than the ambient dimension");
    }
    if (isometry_.cols() == 0) {
        return;
    }
    Mat gram = isometry_.adjoint() * isometry_;
    double err = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (err > tol) {
        throw std::invalid_argument("subspace basis columns are not orthonormal (error " + std::to_string(err) + ")");
    }
}

SubspaceBasis SubspaceBasis::full(size_t dim) {
    return SubspaceBasis(Mat::Identity(dim, dim));
}

SubspaceBasis SubspaceBasis::coordinate(size_t ambient_dim, const std::vector<size_t> &indices) {
    Mat iso = Mat::Zero(ambient_dim, indices.size());
    for (size_t k = 0; k < indices.size(); k++) {
        if (indices[k] >= ambient_dim) {
            throw std::invalid_argument("coordinate index out of range");
        }
        iso(indices[k], k) = 1.0;
    }
    return SubspaceBasis(iso);
}

SubspaceBasis SubspaceBasis::random(size_t ambient_dim, size_t dim, uint64_t seed) {
    if (dim > ambient_dim) {
        throw std::invalid_argument("subspace dimension exceeds ambient dimension");
    }
    return SubspaceBasis(haar_unitary(ambient_dim, seed).leftCols(dim));
}

Mat SubspaceBasis::projector() const {
    return isometry_ * isometry_.adjoint();
}

Mat SubspaceBasis::complement() const {
    size_t n = ambient_dim();
    size_t m = dim();
    if (m == n) {
        return Mat(n, 0);
    }
    Mat q = Mat::Identity(n, n) - projector();
    Eigen::ColPivHouseholderQR<Mat> qr(q);
    Mat full_q = qr.householderQ() * Mat::Identity(n, n);
    return full_q.leftCols(n - m);
}

Mat SubspaceBasis::extended_basis() const {
    Mat out(ambient_dim(), ambient_dim());
    out << isometry_, complement();
    return out;
}

Mat restrict(const Mat &m, const SubspaceBasis &s) {
    if ((size_t)m.cols() != s.ambient_dim()) {
        throw std::invalid_argument("restrict: subspace ambient dimension does not match operator");
    }
    return m * s.isometry();
}

Mat random_matrix(size_t rows, size_t cols, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Mat out(rows, cols);
    for (size_t j = 0; j < cols; j++) {
        for (size_t i = 0; i < rows; i++) {
            double re = normal(rng);
            double im = normal(rng);
            out(i, j) = Complex(re, im);
        }
    }
    return out;
}

Mat haar_unitary(size_t dim, uint64_t seed) {
    if (dim == 0) {
        throw std::invalid_argument("haar_unitary needs dim >= 1");
    }
    Mat g = random_matrix(dim, dim, seed);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(dim, dim);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (size_t k = 0; k < dim; k++) {
        Complex d = r(k, k);
        double a = std::abs(d);
        q.col(k) *= (a > 0 ? d / a : Complex(1.0));
    }
    return q;
}

Mat random_hermitian_unit(size_t dim, uint64_t seed) {
    if (dim == 0) {
        throw std::invalid_argument("random_hermitian_unit needs dim >= 1");
    }
    Mat g = random_matrix(dim, dim, seed);
    Mat h = (g + g.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    double n = es.eigenvalues().cwiseAbs().maxCoeff();
    if (n == 0) {
        return Mat::Identity(dim, dim);
    }
    // Rescale eigenvalues so the extreme one has modulus exactly 1.
    RealVec ev = es.eigenvalues() / n;
    Eigen::Index idx;
    es.eigenvalues().cwiseAbs().maxCoeff(&idx);
    ev(idx) = ev(idx) > 0 ? 1.0 : -1.0;
    Mat out = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return (out + out.adjoint()) / 2.0;
}

Vec random_state(size_t dim, uint64_t seed) {
    Mat g = random_matrix(dim, 1, seed);
    Vec v = g.col(0);
    return v / v.norm();
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace gates {

Mat identity(size_t dim) {
    return Mat::Identity(dim, dim);
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat hadamard() {
    Mat m(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Mat z_rot(double alpha) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(Complex(0, -alpha / 2));
    m(1, 1) = std::exp(Complex(0, alpha / 2));
    return m;
}

Mat x_rot(double alpha) {
    return hadamard() * z_rot(alpha) * hadamard();
}

Mat hz(double alpha) {
    return hadamard() * z_rot(alpha);
}

Mat cz() {
    Mat m = Mat::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

Mat cnot() {
    return controlled(pauli_x());
}

Mat swap() {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
}

Mat controlled(const Mat &u) {
    Eigen::Index d = u.rows();
    Mat m = Mat::Identity(2 * d, 2 * d);
    m.bottomRightCorner(d, d) = u;
    return m;
}

}  // namespace gates

}  // namespace clusterft
