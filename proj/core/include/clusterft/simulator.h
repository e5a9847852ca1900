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

#ifndef CLUSTERFT_SIMULATOR_H
#define CLUSTERFT_SIMULATOR_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clusterft/linalg.h"

namespace clusterft {

constexpr size_t kMaxQubits = 22;
constexpr double kForcedBranchFloor = 1e-12;

/// Little-endian register: qubit 0 is the least significant amplitude index.
class StateVector {
   public:
    explicit StateVector(size_t n_qubits = 0);
    StateVector(size_t n_qubits, Vec amplitudes);

    static StateVector plus(size_t n_qubits);
    static StateVector basis(size_t n_qubits, uint64_t index);

    size_t n_qubits() const {
        return n_;
    }
    size_t dim() const {
        return (size_t)amps_.size();
    }
    const Vec &amplitudes() const {
        return amps_;
    }
    Vec &amplitudes() {
        return amps_;
    }
    double norm() const {
        return amps_.norm();
    }

   private:
    size_t n_;
    Vec amps_;
};

/// Applies `gate` in place on a vector over n qubits. targets[0] is the most
/// significant bit of the gate's local index.
void apply_to_vector(Vec &v, size_t n_qubits, const Mat &gate, const std::vector<size_t> &targets);
/// Applies `gate` to every column of a 2^n x k matrix.
void apply_to_columns(Mat &m, size_t n_qubits, const Mat &gate, const std::vector<size_t> &targets);

void apply_inplace(StateVector &state, const Mat &gate, const std::vector<size_t> &targets);
StateVector apply(const StateVector &state, const Mat &gate, const std::vector<size_t> &targets);

struct MeasureResult {
    int m;
    StateVector posterior;
    double prob;
};

/// Probability of outcome 1 after rotating `qubit` by `rotation`.
double prob_one(const StateVector &state, size_t qubit, const Mat &rotation);

/// Rotates `qubit` by `rotation`, then measures it in the computational basis.
/// The posterior keeps the measured qubit in |m>.
MeasureResult measure(
    const StateVector &state, size_t qubit, const Mat &rotation, std::optional<int> forced, uint64_t seed);

/// Tensors a fresh qubit (|+> or the given one-qubit state) as the new most significant qubit.
StateVector append_plus(const StateVector &state);
StateVector append_qubit(const StateVector &state, const Vec &single);
/// Drops `qubit`, which must be in |bit>; higher qubit indices shift down by one.
StateVector remove_qubit(const StateVector &state, size_t qubit, int bit);
/// Moves qubits so that the result's qubit k is the input's order[k]; order must be a permutation.
StateVector permute_qubits(const StateVector &state, const std::vector<size_t> &order);

/// Keys are bitstrings with character i holding the value of qubits[i].
using Distribution = std::map<std::string, double>;

Distribution distribution(const StateVector &state, const std::vector<size_t> &qubits);
double kolmogorov(const Distribution &p, const Distribution &q);

Complex inner(const StateVector &a, const StateVector &b);
double fidelity(const StateVector &a, const StateVector &b);

}  // namespace clusterft

#endif
