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

#include "qrp/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qrp/errors.hpp"

namespace qrp {

namespace {

constexpr int kMaxChain = 14;

// Adds coeff * P to a chain-register matrix without materializing P.
void add_term(ComplexMatrix &h, const PauliString &p, int n, double coeff) {
    const auto m = p.masks(n);
    const std::uint64_t dim = std::uint64_t{1} << n;
    const cplx base = (m.y_count & 3) == 0 ? cplx{1, 0}
                      : (m.y_count & 3) == 1 ? cplx{0, 1}
                      : (m.y_count & 3) == 2 ? cplx{-1, 0}
                                               : cplx{0, -1};
    for (std::uint64_t j = 0; j < dim; ++j) {
        const cplx ph = (std::popcount(j & m.zmask) & 1) ? -base : base;
        h(static_cast<Eigen::Index>(j ^ m.flip), static_cast<Eigen::Index>(j)) += coeff * ph;
    }
}

void fix_phases(ComplexMatrix &v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            const double mod = std::abs(v(r, c));
            if (mod > 1e-12) {
                v.col(c) *= std::conj(v(r, c)) / mod;
                v(r, c) = mod;
                break;
            }
        }
    }
}

} // namespace

void IsingParams::validate() const {
    if (n < 1) throw ValidationError("chain length n must be >= 1, got " + std::to_string(n));
    if (n > kMaxChain) throw ValidationError("chain length n = " + std::to_string(n) + " exceeds the dense limit " +
                                             std::to_string(kMaxChain));
    if (!(j > 0.0) || !std::isfinite(j)) throw ValidationError("coupling j must be positive and finite");
    if (!std::isfinite(h_x) || !std::isfinite(h_z)) throw ValidationError("fields h_x, h_z must be finite");
}

DenseOperator build_hamiltonian(const IsingParams &params) {
    params.validate();
    const int n = params.n;
    const Eigen::Index dim = Eigen::Index{1} << n;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    // Chain qubit i (1-based) sits at chain position i - 1.
    for (int i = 0; i + 1 < n; ++i) {
        PauliString xx;
        xx.set(i, Axis::X).set(i + 1, Axis::X);
        add_term(h, xx, n, -params.j);
    }
    for (int i = 0; i < n; ++i) {
        if (params.h_x != 0.0) add_term(h, PauliString{}.set(i, Axis::X), n, params.h_x);
        if (params.h_z != 0.0) add_term(h, PauliString{}.set(i, Axis::Z), n, params.h_z);
    }
    return DenseOperator{std::move(h), true};
}

struct SpectralModel::Cache {
    std::mutex mutex;
    std::map<std::uint64_t, std::unique_ptr<ComplexMatrix>> chain;
};

SpectralModel SpectralModel::diagonalize(const DenseOperator &h) {
    const ComplexMatrix &m = h.entries;
    if (m.rows() != m.cols() || m.rows() < 2 || !std::has_single_bit(static_cast<std::uint64_t>(m.rows())))
        throw DimensionError("Hamiltonian must be square with power-of-two dimension");
    if (!is_hermitian(m, 1e-12)) throw ValidationError("Hamiltonian is not Hermitian");

    SpectralModel model;
    model.chain_qubits_ = std::countr_zero(static_cast<std::uint64_t>(m.rows()));
    model.params_.n = model.chain_qubits_;
    model.hamiltonian_ = m;
    model.cache_ = std::make_shared<Cache>();

    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real());
        if (solver.info() != Eigen::Success) {
            std::ostringstream os;
            os << "real symmetric eigensolver failed (dim " << m.rows() << ", max|H| " << m.cwiseAbs().maxCoeff()
               << ")";
            throw NumericalError(os.str());
        }
        model.eigenvalues_ = solver.eigenvalues();
        model.eigenvectors_ = solver.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
        if (solver.info() != Eigen::Success) {
            std::ostringstream os;
            os << "Hermitian eigensolver failed (dim " << m.rows() << ", max|H| " << m.cwiseAbs().maxCoeff() << ")";
            throw NumericalError(os.str());
        }
        model.eigenvalues_ = solver.eigenvalues();
        model.eigenvectors_ = solver.eigenvectors();
    }
    fix_phases(model.eigenvectors_);

    const ComplexMatrix &v = model.eigenvectors_;
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    const double recon =
        (v * model.eigenvalues_.cast<cplx>().asDiagonal() * v.adjoint() - m).cwiseAbs().maxCoeff();
    if (recon > 1e-10 * scale) {
        std::ostringstream os;
        os << "spectral reconstruction error " << recon << " exceeds 1e-10 * " << scale;
        throw NumericalError(os.str());
    }
    return model;
}

SpectralModel SpectralModel::from_params(const IsingParams &params) {
    SpectralModel model = diagonalize(build_hamiltonian(params));
    model.params_ = params;
    return model;
}

const ComplexMatrix &SpectralModel::chain_propagator(double tau) const {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw RangeError("propagation time must be finite and >= 0");
    const auto key = std::bit_cast<std::uint64_t>(tau);
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->chain.find(key);
    if (it == cache_->chain.end()) {
        const ComplexVector phases = (eigenvalues_.cast<cplx>() * cplx{0.0, -tau}).array().exp().matrix();
        auto u = std::make_unique<ComplexMatrix>(eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint());
        it = cache_->chain.emplace(key, std::move(u)).first;
    }
    return *it->second;
}

DenseOperator SpectralModel::propagator(double tau) const {
    return DenseOperator{embed_chain(chain_propagator(tau)), false};
}

DenseOperator SpectralModel::full_hamiltonian() const { return DenseOperator{embed_chain(hamiltonian_), true}; }

std::size_t SpectralModel::cached_propagators() const {
    std::lock_guard lock(cache_->mutex);
    return cache_->chain.size();
}

GroundState ground_state(const SpectralModel &model) {
    const auto &e = model.eigenvalues();
    GroundState gs;
    gs.energy = e(0);
    gs.amplitudes = model.eigenvectors().col(0);
    gs.amplitudes /= gs.amplitudes.norm();
    if (e.size() > 1) gs.degenerate = (e(1) - e(0)) < 1e-10 * std::max(1.0, std::abs(e(0)));
    return gs;
}

DensityMatrix evolve(const DensityMatrix &rho, const DenseOperator &u) {
    if (u.dim() != rho.dim())
        throw DimensionError("propagator dimension " + std::to_string(u.dim()) + " does not match state dimension " +
                             std::to_string(rho.dim()));
    return DensityMatrix(u.entries * rho.matrix() * u.entries.adjoint());
}

ComplexMatrix embed_chain(const ComplexMatrix &chain_op) {
    const Eigen::Index d = chain_op.rows();
    ComplexMatrix full = ComplexMatrix::Zero(2 * d, 2 * d);
    full.topLeftCorner(d, d) = chain_op;
    full.bottomRightCorner(d, d) = chain_op;
    return full;
}

} // namespace qrp
