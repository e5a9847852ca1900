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

#ifndef CLUSTERFT_BLOCKS_H
#define CLUSTERFT_BLOCKS_H

#include <map>
#include <string>
#include <vector>

#include "clusterft/linalg.h"

namespace clusterft {

struct BlockGate {
    std::string name;
    Mat matrix;
    /// Register indices; regs[0] is the most significant bit of `matrix`.
    std::vector<size_t> regs;
    bool noisy = false;
};

/// Gate sequence over named single-qubit registers; register i is qubit i.
class BlockCircuit {
   public:
    explicit BlockCircuit(std::vector<std::string> registers);

    size_t reg(const std::string &name) const;
    void add(const std::string &name, const Mat &matrix, const std::vector<std::string> &regs, bool noisy = false);
    /// Appends all gates of `other`, renaming its registers through `rename`.
    void append(const BlockCircuit &other, const std::map<std::string, std::string> &rename);

    const std::vector<std::string> &registers() const {
        return registers_;
    }
    const std::vector<BlockGate> &gates() const {
        return gates_;
    }
    size_t noisy_count() const;

    /// Composed unitary; qubit_order lists registers from most to least significant.
    Mat unitary(const std::vector<std::string> &qubit_order) const;

   private:
    std::vector<std::string> registers_;
    std::vector<BlockGate> gates_;
};

/// SWAP(X,Z) then CNOT(M -> X): |m,x,z> -> |m, z^m, x>.
BlockCircuit qeu();

enum class RotationOrder { AfterEntangle, BeforeEntangle };

/// Coherent feedforward block on (Q, M, X, Z).
BlockCircuit qb(double alpha, RotationOrder order = RotationOrder::AfterEntangle);

/// Two-level block on (Q1, M3, X1, Z1, Q2, M4, X2, Z2) simulating (H (x) H) CZ.
BlockCircuit qc();

struct IdentityCheck {
    double residual = 0;
    /// Isometry from the free non-data registers into all non-data registers.
    Mat witness;
    bool holds = false;
};

/// Compares the block on the pinned subspace with ideal (x) W for the best isometry W.
IdentityCheck verify_identity(
    const BlockCircuit &block,
    const Mat &ideal,
    const std::vector<std::string> &data_regs,
    const std::map<std::string, Vec> &fixed_inputs);

struct IdentityReport {
    std::string identity;
    double residual = 0;
    bool pass = false;
    /// False for candidate identities whose outcome is recorded, not required.
    bool required = true;
};

std::vector<IdentityReport> appendix_identities();

/// qb(alpha) against HZ_alpha on `n_angles` evenly spaced angles in [0, 2 pi),
/// then qc() against (H x H) CZ. Fresh cluster registers are pinned to |+>.
std::vector<IdentityReport> block_identities(size_t n_angles = 20);

/// Single-qubit |+>.
Vec plus_state();
/// Single-qubit |b>.
Vec basis_state(int b);

}  // namespace clusterft

#endif
