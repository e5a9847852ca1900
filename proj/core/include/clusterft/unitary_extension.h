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

#ifndef CLUSTERFT_UNITARY_EXTENSION_H
#define CLUSTERFT_UNITARY_EXTENSION_H

#include <stdexcept>
#include <string>

#include "clusterft/linalg.h"

namespace clusterft {

class PreconditionError : public std::invalid_argument {
   public:
    PreconditionError(const std::string &what, double residual)
        : std::invalid_argument(what), residual_(residual) {
    }
    double residual() const {
        return residual_;
    }

   private:
    double residual_;
};

struct ExtensionCertificate {
    Mat extension;
    /// op_norm of (extension - source) restricted to S.
    double restriction_residual = 0;
    double bound_lhs = 0;
    double bound_rhs = 0;
};

/// Requires U|_S = U~|_S. Returns V~ = V P + V U^dag U~ Q with ||V~ - U~|| <= ||V - U||.
ExtensionCertificate extend_first(const Mat &u, const Mat &u_tilde, const Mat &v, const SubspaceBasis &s);

/// Returns V~ with V~|_S = V|_S and ||U - V~|| <= 2 ||U|_S - V|_S||.
ExtensionCertificate extend_second(const Mat &u, const Mat &v, const SubspaceBasis &s);

struct BlockDecomposition {
    Mat a;
    Mat b;
    Mat c;
    Mat d;
    /// [S | S_perp] basis the blocks refer to.
    Mat basis;

    Mat reassemble() const;
};

/// Blocks of basis^dag M basis: [[A, C], [B, D]] with A on S and D on S_perp.
BlockDecomposition block_decompose(const Mat &m, const SubspaceBasis &s);

}  // namespace clusterft

#endif
