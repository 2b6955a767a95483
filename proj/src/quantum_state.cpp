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

#include "qrp/quantum_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qrp/errors.hpp"

namespace qrp {

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    const auto rows = static_cast<std::uint64_t>(entries_.rows());
    if (entries_.rows() != entries_.cols() || rows == 0 || !std::has_single_bit(rows))
        throw DimensionError("density matrix must be square with power-of-two dimension, got " +
                             std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
    n_qubits_ = std::countr_zero(rows);
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kTolerance) {
        std::ostringstream os;
        os << "density matrix not Hermitian (max deviation " << herm << ")";
        throw NumericalError(os.str());
    }
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > kTolerance) {
        std::ostringstream os;
        os << "density matrix trace " << tr << " differs from 1";
        throw NumericalError(os.str());
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector &psi) {
    if (std::abs(psi.norm() - 1.0) > kTolerance) throw NumericalError("pure state vector is not normalized");
    return DensityMatrix(psi * psi.adjoint());
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

void DensityMatrix::check_positive() const {
    const double lo = min_eigenvalue();
    if (lo < kPositivityFloor) {
        std::ostringstream os;
        os << "density matrix has eigenvalue " << lo << " below " << kPositivityFloor;
        throw NumericalError(os.str());
    }
}

// ---------------------------------------------------------------------------
// QubitSubset

QubitSubset::QubitSubset(std::vector<int> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0) throw ValidationError("qubit index must be non-negative");
        if (i > 0 && indices_[i] <= indices_[i - 1])
            throw ValidationError("qubit subset must be strictly increasing");
    }
}

bool QubitSubset::contains(int q) const { return std::binary_search(indices_.begin(), indices_.end(), q); }

int QubitSubset::position(int q) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), q);
    return (it != indices_.end() && *it == q) ? static_cast<int>(it - indices_.begin()) : -1;
}

bool QubitSubset::disjoint(const QubitSubset &other) const {
    return std::none_of(indices_.begin(), indices_.end(), [&](int q) { return other.contains(q); });
}

QubitSubset unite(const QubitSubset &a, const QubitSubset &b) {
    std::vector<int> out;
    std::set_union(a.indices_.begin(), a.indices_.end(), b.indices_.begin(), b.indices_.end(),
                   std::back_inserter(out));
    return QubitSubset(std::move(out));
}

// ---------------------------------------------------------------------------
// Operations

DensityMatrix initial_state(const SpectralModel &model) {
    const GroundState gs = ground_state(model);
    const Eigen::Index d = gs.amplitudes.size();
    ComplexVector psi = ComplexVector::Zero(2 * d);
    psi.head(d) = gs.amplitudes;
    return DensityMatrix::pure(psi);
}

ComplexVector input_state(double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw RangeError("input value must lie in [0, 1]");
    ComplexVector psi = ComplexVector::Zero(4);
    psi(0) = std::sqrt(s);
    psi(3) = std::sqrt(1.0 - s);
    return psi;
}

DensityMatrix inject_input(const DensityMatrix &rho, double s) {
    const ComplexVector psi = input_state(s);
    const int n = rho.n_qubits();
    if (n < 2) throw DimensionError("input injection needs at least two qubits");
    const ComplexMatrix in = psi * psi.adjoint();
    if (n == 2) return DensityMatrix(in);

    std::vector<int> rest_idx(static_cast<std::size_t>(n - 2));
    for (int q = 2; q < n; ++q) rest_idx[static_cast<std::size_t>(q - 2)] = q;
    const ComplexMatrix rest = partial_trace(rho.matrix(), n, QubitSubset(std::move(rest_idx)));

    const Eigen::Index dr = rest.rows();
    ComplexMatrix out(4 * dr, 4 * dr);
    for (Eigen::Index a = 0; a < 4; ++a)
        for (Eigen::Index b = 0; b < 4; ++b) out.block(a * dr, b * dr, dr, dr) = in(a, b) * rest;
    return DensityMatrix(std::move(out));
}

ComplexMatrix partial_trace(const ComplexMatrix &m, int n_qubits, const QubitSubset &keep) {
    if (keep.empty()) throw ValidationError("partial trace needs a nonempty subset; use the trace instead");
    if (m.rows() != m.cols() || m.rows() != (Eigen::Index{1} << n_qubits))
        throw DimensionError("matrix does not match a " + std::to_string(n_qubits) + "-qubit register");
    if (keep.indices().back() >= n_qubits)
        throw RangeError("subset index " + std::to_string(keep.indices().back()) + " outside a " +
                         std::to_string(n_qubits) + "-qubit register");

    const int k = static_cast<int>(keep.size());
    if (k == n_qubits) return m;

    // Full index for (kept configuration a, traced configuration t).
    std::vector<int> traced;
    for (int q = 0; q < n_qubits; ++q)
        if (!keep.contains(q)) traced.push_back(q);
    const std::size_t dk = std::size_t{1} << k;
    const std::size_t dt = std::size_t{1} << traced.size();
    auto deposit = [n_qubits](std::size_t value, const std::vector<int> &qubits) {
        std::size_t idx = 0;
        const int w = static_cast<int>(qubits.size());
        for (int b = 0; b < w; ++b)
            if ((value >> (w - 1 - b)) & 1U) idx |= std::size_t{1} << (n_qubits - 1 - qubits[static_cast<std::size_t>(b)]);
        return idx;
    };
    std::vector<std::size_t> kept_part(dk), traced_part(dt);
    for (std::size_t a = 0; a < dk; ++a) kept_part[a] = deposit(a, keep.indices());
    for (std::size_t t = 0; t < dt; ++t) traced_part[t] = deposit(t, traced);

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t t = 0; t < dt; ++t) {
        for (std::size_t b = 0; b < dk; ++b) {
            const auto col = static_cast<Eigen::Index>(kept_part[b] | traced_part[t]);
            for (std::size_t a = 0; a < dk; ++a)
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    m(static_cast<Eigen::Index>(kept_part[a] | traced_part[t]), col);
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, const QubitSubset &keep) {
    return DensityMatrix(partial_trace(rho.matrix(), rho.n_qubits(), keep));
}

double expectation(const DensityMatrix &rho, const PauliString &op, WarningLog *warnings) {
    const cplx value = trace_with(rho.matrix(), op, rho.n_qubits());
    if (warnings && std::abs(value.imag()) > 1e-8) {
        std::ostringstream os;
        os << "expectation of " << op.label() << " has imaginary residue " << value.imag();
        warnings->add(os.str());
    }
    return value.real();
}

double von_neumann_entropy(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd &lambda = solver.eigenvalues();
    if (lambda(0) < DensityMatrix::kPositivityFloor) {
        std::ostringstream os;
        os << "entropy of a state with eigenvalue " << lambda(0) << " below " << DensityMatrix::kPositivityFloor;
        throw NumericalError(os.str());
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double l = lambda(i);
        if (l > 1e-12) s -= l * std::log2(l);
    }
    return s;
}

} // namespace qrp
