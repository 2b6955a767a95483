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

#include <memory>
#include <string>

#include "qrp/density_matrix.hpp"
#include "qrp/pauli.hpp"

namespace qrp {

/// Open Ising chain on qubits 1..n:
///   H = -J sum_i x_i x_{i+1} + h_x sum_i x_i + h_z sum_i z_i.
/// Qubit 0 is an idle reference qubit and does not enter H.
struct IsingParams {
    int n = 7;
    double j = 1.0;
    double h_x = 0.0;
    double h_z = 1.0;

    void validate() const;

    static IsingParams free_fermion(int n = 7) { return {n, 1.0, 0.0, 1.0}; }
    static IsingParams chaotic(int n = 7) { return {n, 1.0, -0.5, 1.05}; }
    static IsingParams perturbed(int n = 7) { return {n, 1.0, -0.02, 1.002}; }

    friend bool operator==(const IsingParams &, const IsingParams &) = default;
};

/// Hamiltonian on the n-qubit chain register (chain qubit i sits at chain
/// position i-1, most significant first).
DenseOperator build_hamiltonian(const IsingParams &params);

/// Eigendecomposition of a chain Hamiltonian plus a lazily filled
/// propagator cache. Copies share the cache.
class SpectralModel {
  public:
    /// Eigenvalues ascending; each eigenvector's first component with
    /// modulus above 1e-12 is made real and positive.
    static SpectralModel diagonalize(const DenseOperator &h);
    static SpectralModel from_params(const IsingParams &params);

    const IsingParams &params() const { return params_; }
    int chain_qubits() const { return chain_qubits_; }
    int register_qubits() const { return chain_qubits_ + 1; }
    Eigen::Index chain_dim() const { return eigenvalues_.size(); }

    const Eigen::VectorXd &eigenvalues() const { return eigenvalues_; }
    const ComplexMatrix &eigenvectors() const { return eigenvectors_; }
    const ComplexMatrix &hamiltonian() const { return hamiltonian_; }

    /// Chain-register U(tau) = V diag(exp(-i E tau)) V^dagger, cached per tau.
    const ComplexMatrix &chain_propagator(double tau) const;

    /// U(tau) on the full register: identity on qubit 0 tensored with the
    /// chain propagator.
    DenseOperator propagator(double tau) const;

    /// H embedded on the full register (identity on qubit 0).
    DenseOperator full_hamiltonian() const;

    std::size_t cached_propagators() const;

  private:
    struct Cache;

    SpectralModel() = default;

    IsingParams params_{};
    int chain_qubits_ = 0;
    ComplexMatrix hamiltonian_;
    Eigen::VectorXd eigenvalues_;
    ComplexMatrix eigenvectors_;
    std::shared_ptr<Cache> cache_;
};

struct GroundState {
    ComplexVector amplitudes;
    double energy = 0.0;
    /// Set when the lowest level is degenerate within 1e-10; the lowest
    /// eigenvector index is returned.
    bool degenerate = false;
};

GroundState ground_state(const SpectralModel &model);

/// U rho U^dagger.
DensityMatrix evolve(const DensityMatrix &rho, const DenseOperator &u);

/// Embeds a chain operator on the full register as identity (x) op.
ComplexMatrix embed_chain(const ComplexMatrix &chain_op);

} // namespace qrp
