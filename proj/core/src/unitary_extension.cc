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

namespace clusterft {

namespace {

void require_square_unitary(const Mat &m, size_t dim, const char *name) {
    if ((size_t)m.rows() != dim || (size_t)m.cols() != dim) {
        throw std::invalid_argument(std::string(name) + " has the wrong dimension");
    }
    if (!is_unitary(m, 1e-9)) {
        throw std::invalid_argument(std::string(name) + " is not unitary");
    }
}

}  // namespace

ExtensionCertificate extend_first(const Mat &u, const Mat &u_tilde, const Mat &v, const SubspaceBasis &s) {
    size_t n = s.ambient_dim();
    require_square_unitary(u, n, "U");
    require_square_unitary(u_tilde, n, "U~");
    require_square_unitary(v, n, "V");
    double pre = op_norm(restrict(u, s) - restrict(u_tilde, s));
    if (pre >= 1e-10) {
        throw PreconditionError("U and U~ differ on S (residual " + std::to_string(pre) + ")", pre);
    }
    Mat p = s.projector();
    Mat q = Mat::Identity(n, n) - p;
    ExtensionCertificate c;
    c.extension = v * p + v * u.adjoint() * u_tilde * q;
    c.restriction_residual = op_norm(restrict(c.extension - v, s));
    c.bound_lhs = op_norm(c.extension - u_tilde);
    c.bound_rhs = op_norm(v - u);
    return c;
}

BlockDecomposition block_decompose(const Mat &m, const SubspaceBasis &s) {
    size_t n = s.ambient_dim();
    if ((size_t)m.rows() != n || (size_t)m.cols() != n) {
        throw std::invalid_argument("block_decompose: subspace ambient dimension does not match operator");
    }
    size_t k = s.dim();
    BlockDecomposition out;
    out.basis = s.extended_basis();
    Mat r = out.basis.adjoint() * m * out.basis;
    out.a = r.topLeftCorner(k, k);
    out.c = r.topRightCorner(k, n - k);
    out.b = r.bottomLeftCorner(n - k, k);
    out.d = r.bottomRightCorner(n - k, n - k);
    return out;
}

Mat BlockDecomposition::reassemble() const {
    Mat r(basis.rows(), basis.cols());
    r << a, c, b, d;
    return r;
}

ExtensionCertificate extend_second(const Mat &u, const Mat &v, const SubspaceBasis &s) {
    size_t n = s.ambient_dim();
    require_square_unitary(u, n, "U");
    require_square_unitary(v, n, "V");
    size_t k = s.dim();
    Mat vp = u.adjoint() * v;
    BlockDecomposition bd = block_decompose(vp, s);
    Mat mult = Mat::Identity(n, n);
    if (k < n) {
        Svd sd = svd(bd.d);
        // In the original S_perp basis the multiplier is R^dag L^dag, leaving D R^dag L^dag = L Sigma L^dag.
        mult.bottomRightCorner(n - k, n - k) = sd.right.adjoint() * sd.left.adjoint();
    }
    Mat vt_rot = bd.reassemble() * mult;
    Mat vt = u * bd.basis * vt_rot * bd.basis.adjoint();
    ExtensionCertificate c;
    c.extension = vt;
    c.restriction_residual = op_norm(restrict(vt - v, s));
    c.bound_lhs = op_norm(u - vt);
    c.bound_rhs = 2 * op_norm(restrict(u, s) - restrict(v, s));
    return c;
}

}  // namespace clusterft
