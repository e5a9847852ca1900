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

#include "clusterft/error_strength.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clusterft {

namespace {

void check_inputs(const Mat &u_q, const Mat &v_qe, const Partition &part) {
    if (part.q_dim == 0 || part.e_dim == 0) {
        throw std::invalid_argument("partition dimensions must be positive");
    }
    if ((size_t)u_q.rows() != part.q_dim || (size_t)u_q.cols() != part.q_dim) {
        throw std::invalid_argument("U_Q does not match the partition");
    }
    if ((size_t)v_qe.rows() != part.q_dim * part.e_dim || (size_t)v_qe.cols() != part.q_dim * part.e_dim) {
        throw std::invalid_argument("V_QE does not match the partition");
    }
    if (!is_unitary(u_q, 1e-9) || !is_unitary(v_qe, 1e-9)) {
        throw std::invalid_argument("delta requires unitary inputs");
    }
}

Mat trace_out_q(const Mat &g, size_t q_dim, size_t e_dim) {
    Mat out = Mat::Zero(e_dim, e_dim);
    for (size_t q = 0; q < q_dim; q++) {
        out += g.block(q * e_dim, q * e_dim, e_dim, e_dim);
    }
    return out;
}

Mat embed_env(const Mat &u, size_t q_dim) {
    size_t e = (size_t)u.rows();
    Mat out = Mat::Zero(q_dim * e, q_dim * e);
    for (size_t q = 0; q < q_dim; q++) {
        out.block(q * e, q * e, e, e) = u;
    }
    return out;
}

struct Eval {
    double smooth = 0;
    double spectral = 0;
    Mat gamma;
};

/// Schatten-p surrogate of ||W - I (x) U|| and its E-side gradient.
Eval evaluate(const Mat &w, const Mat &u, double p, size_t q_dim, size_t e_dim, bool want_grad) {
    Mat a = w - embed_env(u, q_dim);
    Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a);
    RealVec sig = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    double s1 = sig.maxCoeff();
    Eval out;
    out.spectral = s1;
    if (s1 == 0) {
        out.smooth = 0;
        out.gamma = Mat::Zero(e_dim, e_dim);
        return out;
    }
    double acc = 0;
    for (Eigen::Index k = 0; k < sig.size(); k++) {
        acc += std::pow(sig(k) / s1, p);
    }
    double n = s1 * std::pow(acc, 1.0 / p);
    out.smooth = n;
    if (want_grad) {
        RealVec wts(sig.size());
        for (Eigen::Index k = 0; k < sig.size(); k++) {
            wts(k) = std::pow(sig(k) / n, p - 2) / n;
        }
        Mat g = a * es.eigenvectors() * wts.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
        out.gamma = trace_out_q(g, q_dim, e_dim);
    }
    return out;
}

struct StartOutcome {
    double value;
    Mat env;
};

StartOutcome descend(const Mat &w, Mat u, size_t q_dim, size_t e_dim, const DeltaOptions &opts) {
    static const double kStages[] = {8, 32, 128, 512, 2048, 8192};
    StartOutcome best{evaluate(w, u, 2, q_dim, e_dim, false).spectral, u};
    for (double p : kStages) {
        double step = 0.5;
        Eval cur = evaluate(w, u, p, q_dim, e_dim, true);
        for (size_t it = 0; it < opts.iters_per_stage; it++) {
            if (cur.spectral < best.value) {
                best = {cur.spectral, u};
            }
            if (cur.smooth < 1e-14) {
                return best;
            }
            Mat b = cur.gamma.adjoint() * u;
            Mat hg = Complex(0, 0.5) * (b - b.adjoint());
            double g2 = hg.squaredNorm();
            if (g2 < 1e-30) {
                break;
            }
            step = std::min(step * 2.0, 4.0);
            bool accepted = false;
            while (step > 1e-14) {
                Mat cand = u * expm_i_hermitian(hg, step);
                Eval e = evaluate(w, cand, p, q_dim, e_dim, true);
                if (e.smooth <= cur.smooth - 1e-4 * step * g2) {
                    double drop = cur.smooth - e.smooth;
                    u = cand;
                    cur = e;
                    accepted = true;
                    if (drop < 1e-15 * std::max(1.0, cur.smooth)) {
                        step = 0;
                    }
                    break;
                }
                step *= 0.5;
            }
            if (!accepted || step == 0) {
                break;
            }
        }
        if (cur.spectral < best.value) {
            best = {cur.spectral, u};
        }
    }
    return best;
}

DeltaResult scalar_env(const Mat &w) {
    auto f = [&](double th) {
        return op_norm(w - std::exp(Complex(0, th)) * Mat::Identity(w.rows(), w.cols()));
    };
    const int n = 4096;
    double h = 2 * kPi / n;
    int best_k = 0;
    double best_v = f(0);
    std::vector<double> vals(n);
    for (int k = 0; k < n; k++) {
        vals[k] = f(k * h);
        if (vals[k] < best_v) {
            best_v = vals[k];
            best_k = k;
        }
    }
    double lo = (best_k - 1) * h;
    double hi = (best_k + 1) * h;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 100 && hi - lo > 1e-15; it++) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    double th = best_v;
    double theta = best_k * h;
    double mid = (lo + hi) / 2;
    if (f(mid) < th) {
        theta = mid;
    }
    DeltaResult r;
    r.argmin_env = Mat::Constant(1, 1, std::exp(Complex(0, theta)));
    r.upper_bound = f(theta);
    int agree = 0;
    for (int k = 0; k < n; k++) {
        if (vals[k] <= r.upper_bound + 1e-6) {
            agree++;
        }
    }
    r.converged = agree >= 2 || r.upper_bound < 1e-12;
    r.start_values = {r.upper_bound};
    return r;
}

}  // namespace

double delta_objective(const Mat &u_q, const Mat &v_qe, const Mat &u_e) {
    return op_norm(v_qe - kron(u_q, u_e));
}

DeltaResult delta(const Mat &u_q, const Mat &v_qe, const Partition &part, const DeltaOptions &opts) {
    check_inputs(u_q, v_qe, part);
    size_t qd = part.q_dim;
    size_t ed = part.e_dim;
    Mat w = kron(u_q.adjoint(), gates::identity(ed)) * v_qe;
    if (ed == 1) {
        return scalar_env(w);
    }
    std::vector<Mat> starts;
    starts.push_back(gates::identity(ed));
    starts.push_back(polar_unitary(trace_out_q(w, qd, ed)));
    for (size_t k = starts.size(); k < std::max<size_t>(opts.starts, 2); k++) {
        starts.push_back(haar_unitary(ed, derive_seed(opts.seed, k)));
    }
    for (const auto &extra : opts.extra_starts) {
        if ((size_t)extra.rows() != ed || !is_unitary(extra, 1e-8)) {
            throw std::invalid_argument("extra start is not a unitary on E");
        }
        starts.push_back(polar_unitary(extra));
    }
    DeltaResult r;
    r.upper_bound = INFINITY;
    for (const auto &s : starts) {
        StartOutcome o = descend(w, s, qd, ed, opts);
        Mat env = polar_unitary(o.env);
        double v = delta_objective(u_q, v_qe, env);
        r.start_values.push_back(v);
        if (v < r.upper_bound) {
            r.upper_bound = v;
            r.argmin_env = env;
        }
    }
    int agree = 0;
    for (double v : r.start_values) {
        if (v <= r.upper_bound + 1e-6) {
            agree++;
        }
    }
    r.converged = agree >= 2;
    return r;
}

ChainBound chain_bound(const std::vector<ChainTerm> &terms, const Partition &part, const DeltaOptions &opts) {
    if (terms.empty()) {
        throw std::invalid_argument("chain_bound needs at least one term");
    }
    Mat uq = gates::identity(part.q_dim);
    Mat v = gates::identity(part.q_dim * part.e_dim);
    Mat env = gates::identity(part.e_dim);
    ChainBound out;
    for (const auto &t : terms) {
        DeltaResult d = delta(t.u_q, t.v_qe, part, opts);
        out.rhs += d.upper_bound;
        uq = t.u_q * uq;
        v = t.v_qe * v;
        env = d.argmin_env * env;
    }
    DeltaOptions o = opts;
    o.extra_starts.push_back(env);
    out.lhs = delta(uq, v, part, o).upper_bound;
    out.slack = std::max(0.0, out.lhs - out.rhs);
    return out;
}

SwapResult commute_swap(
    const Mat &u_q, const Mat &v_q, const Mat &u_qe, const Mat &v_qe, const Partition &part,
    const DeltaOptions &opts) {
    if (op_norm(u_q * v_q - v_q * u_q) >= 1e-10) {
        throw std::invalid_argument("commute_swap requires commuting U_Q and V_Q");
    }
    DeltaResult du = delta(u_q, u_qe, part, opts);
    DeltaResult dv = delta(v_q, v_qe, part, opts);
    size_t n = part.q_dim * part.e_dim;
    Mat eye = gates::identity(n);
    Mat delta_u = kron(u_q, du.argmin_env).adjoint() * u_qe - eye;
    Mat delta_v = v_qe * kron(v_q, dv.argmin_env).adjoint() - eye;
    SwapResult out;
    out.u_env = du.argmin_env;
    out.v_env = dv.argmin_env;
    out.u_tilde = (eye + delta_v) * kron(u_q, dv.argmin_env);
    out.v_tilde = kron(v_q, du.argmin_env) * (eye + delta_u);
    return out;
}

}  // namespace clusterft
