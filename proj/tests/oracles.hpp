// Copyright 2026 The QRP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reference implementations used only by the tests. They share no code
// paths with the library beyond the symbolic PauliString type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qrp/pauli.hpp"

namespace oracle {

using qrp::cplx;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char axis) {
    Mat m = Mat::Zero(2, 2);
    const cplx i(0.0, 1.0);
    switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
    }
    return m;
}

/// Kronecker product over sites 0..n-1, site 0 leftmost.
inline Mat kron_string(const qrp::PauliString &p, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
        char axis = 'i';
        if (auto it = p.terms().find(q); it != p.terms().end()) axis = qrp::axis_char(it->second);
        out = Eigen::kroneckerProduct(out, pauli(axis)).eval();
    }
    return out;
}

inline Mat kron(const Mat &a, const Mat &b) { return Eigen::kroneckerProduct(a, b).eval(); }

/// -J sum x_i x_{i+1} + h_x sum x_i + h_z sum z_i, term by term with
/// Kronecker products.
inline Mat ising(int n, double j, double hx, double hz) {
    const int d = 1 << n;
    Mat h = Mat::Zero(d, d);
    auto site_op = [&](std::vector<std::pair<int, char>> ops) {
        Mat out = Mat::Identity(1, 1);
        for (int q = 0; q < n; ++q) {
            char a = 'i';
            for (auto [s, ax] : ops)
                if (s == q) a = ax;
            out = kron(out, pauli(a));
        }
        return out;
    };
    for (int q = 0; q + 1 < n; ++q) h -= j * site_op({{q, 'x'}, {q + 1, 'x'}});
    for (int q = 0; q < n; ++q) h += hx * site_op({{q, 'x'}}) + hz * site_op({{q, 'z'}});
    return h;
}

/// exp(-i H t) through Eigen's Pade-based matrix exponential.
inline Mat expm_propagator(const Mat &h, double t) { return (Mat(cplx(0.0, -t) * h)).exp(); }

/// Partial trace by explicit index loops; kept qubits stay in register order.
inline Mat partial_trace(const Mat &m, int n, const std::vector<int> &keep) {
    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
    const int dk = 1 << keep.size();
    const int dt = 1 << traced.size();
    auto index = [&](int kbits, int tbits) {
        int idx = 0;
        for (std::size_t a = 0; a < keep.size(); ++a)
            if ((kbits >> (keep.size() - 1 - a)) & 1) idx |= 1 << (n - 1 - keep[a]);
        for (std::size_t a = 0; a < traced.size(); ++a)
            if ((tbits >> (traced.size() - 1 - a)) & 1) idx |= 1 << (n - 1 - traced[a]);
        return idx;
    };
    Mat out = Mat::Zero(dk, dk);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < dk; ++c)
            for (int t = 0; t < dt; ++t) out(r, c) += m(index(r, t), index(c, t));
    return out;
}

/// Eigenvalues of a Hermitian matrix from cyclic Jacobi sweeps on the real
/// symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is each
/// eigenvalue twice.
inline std::vector<double> jacobi_eigenvalues(const Mat &h) {
    const int n = static_cast<int>(h.rows());
    Eigen::MatrixXd a(2 * n, 2 * n);
    a << h.real(), -h.imag(), h.imag(), h.real();
    const int m = 2 * n;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-26) break;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) ev[static_cast<std::size_t>(k)] = a(k, k);
    std::sort(ev.begin(), ev.end());
    std::vector<double> out;
    for (int k = 0; k < m; k += 2) out.push_back(0.5 * (ev[static_cast<std::size_t>(k)] + ev[static_cast<std::size_t>(k + 1)]));
    return out;
}

inline double entropy_bits(const Mat &rho) {
    double s = 0.0;
    for (double l : jacobi_eigenvalues(rho))
        if (l > 1e-12) s -= l * std::log2(l);
    return s;
}

inline Mat random_hermitian(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Mat a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = cplx(g(rng), g(rng));
    return (0.5 * (a + a.adjoint())).eval();
}

/// G G^dagger / Tr with a Gaussian d x rank factor.
inline Mat random_density(int d, std::mt19937_64 &rng, int rank = -1) {
    if (rank < 0) rank = d;
    std::normal_distribution<double> g;
    Mat f(d, rank);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < rank; ++c) f(r, c) = cplx(g(rng), g(rng));
    Mat rho = f * f.adjoint();
    rho /= rho.trace();
    return (0.5 * (rho + rho.adjoint())).eval();
}

inline cplx brute_trace(const Mat &a, const Mat &b) {
    cplx t = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) t += a(r, c) * b(c, r);
    return t;
}

/// Result of the full-register reference drive.
struct NaiveDrive {
    std::vector<Eigen::MatrixXd> values; ///< per operator, rows x grid
    Mat mean_state;
    std::vector<std::vector<Mat>> snapshots; ///< [instance][grid]
};

/// Step-by-step drive on the whole (n+1)-qubit register: inject by partial
/// trace and tensor product, then evolve with matrix exponentials.
inline NaiveDrive naive_drive(int n, double j, double hx, double hz, double t_in, int n_grid, int washout, int train,
                              int test, const std::vector<double> &inputs,
                              const std::vector<qrp::PauliString> &readouts, const std::vector<int> &support = {},
                              int cap = 0) {
    const int reg = n + 1;
    const Mat h_full = kron(Mat::Identity(2, 2), ising(n, j, hx, hz));
    Eigen::SelfAdjointEigenSolver<Mat> es(ising(n, j, hx, hz));
    const Vec gs = es.eigenvectors().col(0);
    Vec zero = Vec::Zero(2);
    zero(0) = 1.0;
    Mat rho = kron(zero * zero.adjoint(), gs * gs.adjoint());

    std::vector<Mat> u_grid;
    for (int m = 0; m < n_grid; ++m) u_grid.push_back(expm_propagator(h_full, (m * t_in) / n_grid));
    const Mat u_in = expm_propagator(h_full, t_in);
    std::vector<Mat> ops;
    for (const auto &p : readouts) ops.push_back(kron_string(p, reg));

    NaiveDrive out;
    const int rows = train + test;
    out.values.assign(readouts.size(), Eigen::MatrixXd::Zero(rows, n_grid));
    out.mean_state = Mat::Zero(rho.rows(), rho.cols());
    std::vector<int> rest;
    for (int q = 2; q < reg; ++q) rest.push_back(q);

    for (int k = 0; k < washout + rows; ++k) {
        const double s = inputs[static_cast<std::size_t>(k)];
        Vec psi = Vec::Zero(4);
        psi(0) = std::sqrt(s);
        psi(3) = std::sqrt(1.0 - s);
        const Mat in = psi * psi.adjoint();
        rho = rest.empty() ? in : kron(in, partial_trace(rho, reg, rest));
        if (k >= washout) {
            const int row = k - washout;
            if (row >= train) out.mean_state += rho / static_cast<double>(test);
            const bool snap = !support.empty() && row >= train && row - train < cap;
            if (snap) out.snapshots.emplace_back();
            for (int m = 0; m < n_grid; ++m) {
                const Mat r = u_grid[static_cast<std::size_t>(m)] * rho * u_grid[static_cast<std::size_t>(m)].adjoint();
                for (std::size_t o = 0; o < ops.size(); ++o) out.values[o](row, m) = brute_trace(r, ops[o]).real();
                if (snap) out.snapshots.back().push_back(partial_trace(r, reg, support));
            }
        }
        rho = u_in * rho * u_in.adjoint();
    }
    return out;
}

} // namespace oracle
