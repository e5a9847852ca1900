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

#ifndef CLUSTERFT_ERROR_STRENGTH_H
#define CLUSTERFT_ERROR_STRENGTH_H

#include <vector>

#include "clusterft/linalg.h"

namespace clusterft {

/// Joint space Q (x) E with Q the more significant factor.
struct Partition {
    size_t q_dim = 1;
    size_t e_dim = 1;
};

struct DeltaOptions {
    /// Total starts: identity, polar warm start, then Haar-random ones.
    size_t starts = 8;
    uint64_t seed = 0;
    /// Iterations per smoothing stage.
    size_t iters_per_stage = 60;
    /// Additional candidate environment unitaries tried as starts.
    std::vector<Mat> extra_starts;
};

struct DeltaResult {
    /// op_norm(V - U_Q (x) argmin_env); an upper bound on the true minimum.
    double upper_bound = 0;
    Mat argmin_env;
    /// At least two starts agree with the best value within 1e-6.
    bool converged = false;
    std::vector<double> start_values;
};

/// op_norm(V - U_Q (x) U_E).
double delta_objective(const Mat &u_q, const Mat &v_qe, const Mat &u_e);

DeltaResult delta(const Mat &u_q, const Mat &v_qe, const Partition &part, const DeltaOptions &opts = {});

struct ChainTerm {
    Mat u_q;
    Mat v_qe;
};

struct ChainBound {
    double lhs = 0;
    double rhs = 0;
    /// max(0, lhs - rhs).
    double slack = 0;
};

/// terms[0] acts first. lhs is delta of the products, rhs the sum of individual deltas.
ChainBound chain_bound(const std::vector<ChainTerm> &terms, const Partition &part, const DeltaOptions &opts = {});

struct SwapResult {
    Mat u_tilde;
    Mat v_tilde;
    Mat u_env;
    Mat v_env;
};

/// Given commuting U_Q, V_Q, returns U~, V~ with U~ V~ = V_QE U_QE, delta(U_Q, U~) <= delta(V_Q, V_QE)
/// and delta(V_Q, V~) <= delta(U_Q, U_QE).
SwapResult commute_swap(
    const Mat &u_q, const Mat &v_q, const Mat &u_qe, const Mat &v_qe, const Partition &part,
    const DeltaOptions &opts = {});

}  // namespace clusterft

#endif
