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

#include <cmath>
#include <random>
#include <stdexcept>

namespace clusterft {

StateVector::StateVector(size_t n_qubits) : n_(n_qubits) {
    if (n_qubits > kMaxQubits) {
        throw std::length_error("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    amps_ = Vec::Zero((Eigen::Index)1 << n_qubits);
    amps_(0) = 1.0;
}

StateVector::StateVector(size_t n_qubits, Vec amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits > kMaxQubits) {
        throw std::length_error("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    if ((size_t)amps_.size() != ((size_t)1 << n_qubits)) {
        throw std::invalid_argument("amplitude count does not match qubit count");
    }
    if (!amps_.allFinite()) {
        throw std::invalid_argument("state has non-finite amplitudes");
    }
    if (std::abs(amps_.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("state is not normalized");
    }
}

StateVector StateVector::plus(size_t n_qubits) {
    size_t d = (size_t)1 << n_qubits;
    return StateVector(n_qubits, Vec::Constant(d, 1.0 / std::sqrt((double)d)));
}

StateVector StateVector::basis(size_t n_qubits, uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) {
        throw std::out_of_range("basis index out of range");
    }
    s.amplitudes().setZero();
    s.amplitudes()(index) = 1.0;
    return s;
}

namespace {

void check_targets(size_t n_qubits, const Mat &gate, const std::vector<size_t> &targets) {
    size_t k = targets.size();
    if (gate.rows() != gate.cols() || (size_t)gate.rows() != ((size_t)1 << k)) {
        throw std::invalid_argument("gate dimension does not match the number of targets");
    }
    uint64_t seen = 0;
    for (size_t t : targets) {
        if (t >= n_qubits) {
            throw std::out_of_range("target qubit out of range");
        }
        if (seen & (1ULL << t)) {
            throw std::invalid_argument("duplicate target qubit");
        }
        seen |= 1ULL << t;
    }
}

template <typename Col>
void apply_kernel(Col &&v, size_t n_qubits, const Mat &gate, const std::vector<size_t> &targets) {
    size_t k = targets.size();
    size_t local = (size_t)1 << k;
    std::vector<uint64_t> offsets(local, 0);
    for (size_t j = 0; j < local; j++) {
        for (size_t b = 0; b < k; b++) {
            if (j & ((size_t)1 << (k - 1 - b))) {
                offsets[j] |= 1ULL << targets[b];
            }
        }
    }
    uint64_t mask = 0;
    for (size_t t : targets) {
        mask |= 1ULL << t;
    }
    std::vector<Complex> buf(local);
    uint64_t total = 1ULL << n_qubits;
    for (uint64_t base = 0; base < total; base++) {
        if (base & mask) {
            continue;
        }
        for (size_t j = 0; j < local; j++) {
            buf[j] = v(base | offsets[j]);
        }
        for (size_t i = 0; i < local; i++) {
            Complex acc = 0;
            for (size_t j = 0; j < local; j++) {
                acc += gate(i, j) * buf[j];
            }
            v(base | offsets[i]) = acc;
        }
    }
}

}  // namespace

void apply_to_vector(Vec &v, size_t n_qubits, const Mat &gate, const std::vector<size_t> &targets) {
    check_targets(n_qubits, gate, targets);
    if ((size_t)v.size() != ((size_t)1 << n_qubits)) {
        throw std::invalid_argument("vector length does not match qubit count");
    }
    apply_kernel(v, n_qubits, gate, targets);
}

void apply_to_columns(Mat &m, size_t n_qubits, const Mat &gate, const std::vector<size_t> &targets) {
    check_targets(n_qubits, gate, targets);
    if ((size_t)m.rows() != ((size_t)1 << n_qubits)) {
        throw std::invalid_argument("matrix rows do not match qubit count");
    }
    for (Eigen::Index c = 0; c < m.cols(); c++) {
        apply_kernel(m.col(c), n_qubits, gate, targets);
    }
}

void apply_inplace(StateVector &state, const Mat &gate, const std::vector<size_t> &targets) {
    apply_to_vector(state.amplitudes(), state.n_qubits(), gate, targets);
}

StateVector apply(const StateVector &state, const Mat &gate, const std::vector<size_t> &targets) {
    StateVector out = state;
    apply_inplace(out, gate, targets);
    return out;
}

double prob_one(const StateVector &state, size_t qubit, const Mat &rotation) {
    StateVector rotated = apply(state, rotation, {qubit});
    double p1 = 0;
    uint64_t bit = 1ULL << qubit;
    for (size_t i = 0; i < rotated.dim(); i++) {
        if (i & bit) {
            p1 += std::norm(rotated.amplitudes()(i));
        }
    }
    return p1;
}

MeasureResult measure(
    const StateVector &state, size_t qubit, const Mat &rotation, std::optional<int> forced, uint64_t seed) {
    if (rotation.rows() != 2 || rotation.cols() != 2 || !is_unitary(rotation)) {
        throw std::invalid_argument("measurement basis rotation must be a 2x2 unitary");
    }
    StateVector rotated = apply(state, rotation, {qubit});
    uint64_t bit = 1ULL << qubit;
    double p[2] = {0, 0};
    for (size_t i = 0; i < rotated.dim(); i++) {
        p[(i & bit) ? 1 : 0] += std::norm(rotated.amplitudes()(i));
    }
    double total = p[0] + p[1];
    p[0] /= total;
    p[1] /= total;
    int m;
    if (forced.has_value()) {
        m = *forced;
        if (m != 0 && m != 1) {
            throw std::invalid_argument("forced outcome must be 0 or 1");
        }
        if (p[m] < kForcedBranchFloor) {
            throw std::domain_error("forced measurement branch has probability " + std::to_string(p[m]));
        }
    } else {
        std::mt19937_64 rng(seed);
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        m = u < p[0] ? 0 : 1;
    }
    Vec amps = rotated.amplitudes();
    for (size_t i = 0; i < rotated.dim(); i++) {
        if (((i & bit) ? 1 : 0) != m) {
            amps(i) = 0;
        }
    }
    amps /= amps.norm();
    return MeasureResult{m, StateVector(state.n_qubits(), std::move(amps)), p[m]};
}

StateVector append_qubit(const StateVector &state, const Vec &single) {
    if (single.size() != 2) {
        throw std::invalid_argument("appended qubit state must have 2 amplitudes");
    }
    Vec amps(state.dim() * 2);
    amps.head(state.dim()) = single(0) * state.amplitudes();
    amps.tail(state.dim()) = single(1) * state.amplitudes();
    return StateVector(state.n_qubits() + 1, std::move(amps));
}

StateVector append_plus(const StateVector &state) {
    Vec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return append_qubit(state, plus);
}

StateVector remove_qubit(const StateVector &state, size_t qubit, int bit) {
    if (qubit >= state.n_qubits()) {
        throw std::out_of_range("qubit out of range");
    }
    size_t n = state.n_qubits() - 1;
    Vec amps((Eigen::Index)1 << n);
    uint64_t low_mask = (1ULL << qubit) - 1;
    for (uint64_t i = 0; i < ((uint64_t)1 << n); i++) {
        uint64_t full = (i & low_mask) | ((uint64_t)bit << qubit) | ((i & ~low_mask) << 1);
        amps(i) = state.amplitudes()(full);
    }
    double nrm = amps.norm();
    if (std::abs(nrm - 1.0) > 1e-10) {
        throw std::domain_error("removed qubit was not in the stated basis state");
    }
    return StateVector(n, amps / nrm);
}

StateVector permute_qubits(const StateVector &state, const std::vector<size_t> &order) {
    size_t n = state.n_qubits();
    if (order.size() != n) {
        throw std::invalid_argument("permutation size mismatch");
    }
    Vec amps(state.dim());
    for (uint64_t i = 0; i < state.dim(); i++) {
        uint64_t src = 0;
        for (size_t k = 0; k < n; k++) {
            if (i & (1ULL << k)) {
                src |= 1ULL << order[k];
            }
        }
        amps(i) = state.amplitudes()(src);
    }
    return StateVector(n, std::move(amps));
}

Distribution distribution(const StateVector &state, const std::vector<size_t> &qubits) {
    for (size_t q : qubits) {
        if (q >= state.n_qubits()) {
            throw std::out_of_range("qubit out of range");
        }
    }
    Distribution out;
    for (uint64_t i = 0; i < state.dim(); i++) {
        double p = std::norm(state.amplitudes()(i));
        if (p == 0) {
            continue;
        }
        std::string key(qubits.size(), '0');
        for (size_t k = 0; k < qubits.size(); k++) {
            if (i & (1ULL << qubits[k])) {
                key[k] = '1';
            }
        }
        out[key] += p;
    }
    return out;
}

double kolmogorov(const Distribution &p, const Distribution &q) {
    double acc = 0;
    for (const auto &[k, v] : p) {
        auto it = q.find(k);
        acc += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto &[k, v] : q) {
        if (!p.count(k)) {
            acc += std::abs(v);
        }
    }
    return acc / 2;
}

Complex inner(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner product of registers with different sizes");
    }
    return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector &a, const StateVector &b) {
    return std::abs(inner(a, b));
}

}  // namespace clusterft
