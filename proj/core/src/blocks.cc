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

#include "clusterft/blocks.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clusterft/simulator.h"

namespace clusterft {

Vec plus_state() {
    Vec v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

Vec basis_state(int b) {
    Vec v = Vec::Zero(2);
    v(b ? 1 : 0) = 1.0;
    return v;
}

BlockCircuit::BlockCircuit(std::vector<std::string> registers) : registers_(std::move(registers)) {
    for (size_t i = 0; i < registers_.size(); i++) {
        for (size_t j = i + 1; j < registers_.size(); j++) {
            if (registers_[i] == registers_[j]) {
                throw std::invalid_argument("duplicate register " + registers_[i]);
            }
        }
    }
}

size_t BlockCircuit::reg(const std::string &name) const {
    auto it = std::find(registers_.begin(), registers_.end(), name);
    if (it == registers_.end()) {
        throw std::invalid_argument("unknown register " + name);
    }
    return (size_t)(it - registers_.begin());
}

void BlockCircuit::add(const std::string &name, const Mat &matrix, const std::vector<std::string> &regs, bool noisy) {
    std::vector<size_t> idx;
    for (const auto &r : regs) {
        idx.push_back(reg(r));
    }
    if ((size_t)matrix.rows() != ((size_t)1 << idx.size()) || !is_unitary(matrix)) {
        throw std::invalid_argument("gate " + name + " is not a unitary on its registers");
    }
    gates_.push_back(BlockGate{name, matrix, std::move(idx), noisy});
}

void BlockCircuit::append(const BlockCircuit &other, const std::map<std::string, std::string> &rename) {
    for (const auto &g : other.gates_) {
        std::vector<std::string> regs;
        for (size_t r : g.regs) {
            const std::string &src = other.registers_[r];
            auto it = rename.find(src);
            regs.push_back(it == rename.end() ? src : it->second);
        }
        add(g.name, g.matrix, regs, g.noisy);
    }
}

size_t BlockCircuit::noisy_count() const {
    return (size_t)std::count_if(gates_.begin(), gates_.end(), [](const BlockGate &g) {
        return g.noisy;
    });
}

Mat BlockCircuit::unitary(const std::vector<std::string> &qubit_order) const {
    size_t n = registers_.size();
    if (qubit_order.size() != n) {
        throw std::invalid_argument("qubit order must list every register once");
    }
    std::vector<size_t> position(n);
    std::vector<bool> seen(n, false);
    for (size_t k = 0; k < n; k++) {
        size_t r = reg(qubit_order[k]);
        if (seen[r]) {
            throw std::invalid_argument("register listed twice in qubit order");
        }
        seen[r] = true;
        position[r] = n - 1 - k;
    }
    size_t d = (size_t)1 << n;
    Mat u = Mat::Identity(d, d);
    for (const auto &g : gates_) {
        std::vector<size_t> targets;
        for (size_t r : g.regs) {
            targets.push_back(position[r]);
        }
        apply_to_columns(u, n, g.matrix, targets);
    }
    return u;
}

namespace {

Mat controlled_hz_pm(double alpha) {
    Mat m = Mat::Zero(4, 4);
    m.topLeftCorner(2, 2) = gates::hz(alpha);
    m.bottomRightCorner(2, 2) = gates::hz(-alpha);
    return m;
}

void prepend_byproduct(BlockCircuit &b, const std::string &q, const std::string &x, const std::string &z) {
    b.add("cz", gates::cz(), {z, q});
    b.add("cnot", gates::cnot(), {x, q});
}

void append_inverse_byproduct(BlockCircuit &b, const std::string &q, const std::string &x, const std::string &z) {
    b.add("cnot", gates::cnot(), {x, q});
    b.add("cz", gates::cz(), {z, q});
}

}  // namespace

BlockCircuit qeu() {
    BlockCircuit b({"M", "X", "Z"});
    b.add("swap", gates::swap(), {"X", "Z"});
    b.add("cnot", gates::cnot(), {"M", "X"});
    return b;
}

BlockCircuit qb(double alpha, RotationOrder order) {
    BlockCircuit b({"Q", "M", "X", "Z"});
    prepend_byproduct(b, "Q", "X", "Z");
    b.add("mem", gates::identity(2), {"M"}, true);
    if (order == RotationOrder::BeforeEntangle) {
        b.add("c_hz", controlled_hz_pm(alpha), {"X", "Q"}, true);
        b.add("cz", gates::cz(), {"Q", "M"}, true);
    } else {
        b.add("cz", gates::cz(), {"Q", "M"}, true);
        b.add("c_hz", controlled_hz_pm(alpha), {"X", "Q"}, true);
    }
    b.add("mem", gates::identity(2), {"Q"}, true);
    b.add("swap", gates::swap(), {"Q", "M"});
    b.append(qeu(), {});
    append_inverse_byproduct(b, "Q", "X", "Z");
    return b;
}

BlockCircuit qc() {
    BlockCircuit b({"Q1", "M3", "X1", "Z1", "Q2", "M4", "X2", "Z2"});
    prepend_byproduct(b, "Q1", "X1", "Z1");
    prepend_byproduct(b, "Q2", "X2", "Z2");
    b.add("cz", gates::cz(), {"Q1", "M3"});
    b.add("cz", gates::cz(), {"Q2", "M4"});
    b.add("cz", gates::cz(), {"Q1", "Q2"}, true);
    b.add("h", gates::hadamard(), {"Q1"}, true);
    b.add("h", gates::hadamard(), {"Q2"}, true);
    b.add("swap", gates::swap(), {"Q1", "M3"});
    b.add("swap", gates::swap(), {"Q2", "M4"});
    // Cross-level flips use the frame bits from before the per-level update.
    b.add("cnot", gates::cnot(), {"X2", "Z1"});
    b.add("cnot", gates::cnot(), {"X1", "Z2"});
    b.append(qeu(), {{"M", "M3"}, {"X", "X1"}, {"Z", "Z1"}});
    b.append(qeu(), {{"M", "M4"}, {"X", "X2"}, {"Z", "Z2"}});
    append_inverse_byproduct(b, "Q1", "X1", "Z1");
    append_inverse_byproduct(b, "Q2", "X2", "Z2");
    return b;
}

IdentityCheck verify_identity(
    const BlockCircuit &block,
    const Mat &ideal,
    const std::vector<std::string> &data_regs,
    const std::map<std::string, Vec> &fixed_inputs) {
    size_t d = (size_t)1 << data_regs.size();
    if ((size_t)ideal.rows() != d || (size_t)ideal.cols() != d) {
        throw std::invalid_argument("ideal operator does not match the data registers");
    }
    std::vector<std::string> order = data_regs;
    std::vector<std::string> rest;
    for (const auto &r : block.registers()) {
        if (std::find(data_regs.begin(), data_regs.end(), r) == data_regs.end()) {
            rest.push_back(r);
            order.push_back(r);
        }
    }
    for (const auto &[name, state] : fixed_inputs) {
        block.reg(name);
        if (std::find(rest.begin(), rest.end(), name) == rest.end()) {
            throw std::invalid_argument("pinned register " + name + " is a data register");
        }
        if (state.size() != 2 || std::abs(state.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("pinned state for " + name + " must be a normalized qubit state");
        }
    }
    Mat u = block.unitary(order);
    Mat j = Mat::Identity(1, 1);
    for (const auto &r : rest) {
        auto it = fixed_inputs.find(r);
        j = kron(j, it == fixed_inputs.end() ? gates::identity(2) : Mat(it->second));
    }
    size_t a = (size_t)j.rows();
    size_t f = (size_t)j.cols();
    Mat r = u * kron(gates::identity(d), j);
    Mat rp = kron(ideal.adjoint(), gates::identity(a)) * r;
    Mat k0 = Mat::Zero(a, f);
    for (size_t i = 0; i < d; i++) {
        k0 += rp.block(i * a, i * f, a, f);
    }
    k0 /= (double)d;
    Eigen::JacobiSVD<Mat> sv(k0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Mat w = sv.matrixU() * sv.matrixV().adjoint();
    IdentityCheck out;
    out.witness = w;
    out.residual = op_norm(r - kron(ideal, w));
    out.holds = out.residual < 1e-9;
    return out;
}

namespace {

/// Operator on three qubits (a most significant) from a named gate list applied left to right.
Mat three_qubit(const std::vector<std::pair<Mat, std::vector<std::string>>> &seq) {
    BlockCircuit b({"a", "b", "c"});
    for (const auto &[m, regs] : seq) {
        b.add("g", m, regs);
    }
    return b.unitary({"a", "b", "c"});
}

IdentityReport report(const std::string &name, double residual, bool required = true) {
    return IdentityReport{name, residual, residual < 1e-9, required};
}

}  // namespace

std::vector<IdentityReport> appendix_identities() {
    using gates::cnot;
    using gates::cz;
    using gates::hadamard;
    using gates::identity;
    using gates::pauli_x;
    using gates::pauli_z;
    std::vector<IdentityReport> out;

    Mat pin = kron(identity(2), Mat(plus_state()));
    Mat lhs1 = kron(hadamard(), identity(2)) * cz();
    Mat rhs1 = cnot() * kron(identity(2), hadamard()) * gates::swap();
    out.push_back(report("(H x I) CZ = CNOT (I x H) SWAP on second qubit |+>", op_norm((lhs1 - rhs1) * pin)));

    Mat lhs2 = three_qubit({{cnot(), {"b", "c"}}, {cnot(), {"a", "b"}}});
    Mat rhs2 = three_qubit({{cnot(), {"a", "b"}}, {cnot(), {"a", "c"}}, {cnot(), {"b", "c"}}});
    out.push_back(report("CNOT_ab CNOT_bc = CNOT_bc CNOT_ac CNOT_ab", op_norm(lhs2 - rhs2)));

    Mat lhs3 = three_qubit({{cz(), {"b", "c"}}, {cnot(), {"a", "b"}}});
    Mat rhs3 = three_qubit({{cnot(), {"a", "b"}}, {cz(), {"a", "c"}}, {cz(), {"b", "c"}}});
    out.push_back(report("CNOT_ab CZ_bc = CZ_bc CZ_ac CNOT_ab", op_norm(lhs3 - rhs3)));

    out.push_back(report(
        "CZ (X x I) = (X x Z) CZ", op_norm(cz() * kron(pauli_x(), identity(2)) - kron(pauli_x(), pauli_z()) * cz())));
    out.push_back(report(
        "CZ (I x X) = (Z x X) CZ", op_norm(cz() * kron(identity(2), pauli_x()) - kron(pauli_z(), pauli_x()) * cz())));

    out.push_back(report("CNOT_12 CZ_12 = CZ_12 CNOT_12", op_norm(cnot() * cz() - cz() * cnot()), false));
    return out;
}

std::vector<IdentityReport> block_identities(size_t n_angles) {
    std::vector<IdentityReport> out;
    for (size_t i = 0; i < n_angles; i++) {
        double alpha = 2 * kPi * (double)i / (double)n_angles;
        IdentityCheck c = verify_identity(qb(alpha), gates::hz(alpha), {"Q"}, {{"M", plus_state()}});
        out.push_back(report("qb(" + std::to_string(alpha) + ") = HZ", c.residual));
    }
    Mat hhcz = kron(gates::hadamard(), gates::hadamard()) * gates::cz();
    IdentityCheck c = verify_identity(qc(), hhcz, {"Q1", "Q2"}, {{"M3", plus_state()}, {"M4", plus_state()}});
    out.push_back(report("qc() = (H x H) CZ", c.residual));
    return out;
}

}  // namespace clusterft
