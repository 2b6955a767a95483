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

#include <initializer_list>
#include <vector>

#include "qrp/density_matrix.hpp"
#include "qrp/hamiltonian.hpp"
#include "qrp/pauli.hpp"
#include "qrp/warnings.hpp"

namespace qrp {

/// Strictly increasing list of register indices.
class QubitSubset {
  public:
    QubitSubset() = default;
    explicit QubitSubset(std::vector<int> indices);
    QubitSubset(std::initializer_list<int> indices) : QubitSubset(std::vector<int>(indices)) {}

    const std::vector<int> &indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(int q) const;
    /// Position of register index `q` within the subset, or -1.
    int position(int q) const;
    bool disjoint(const QubitSubset &other) const;

    friend QubitSubset unite(const QubitSubset &a, const QubitSubset &b);
    friend bool operator==(const QubitSubset &, const QubitSubset &) = default;

  private:
    std::vector<int> indices_;
};

/// |0><0| on qubit 0 tensored with the chain ground state.
DensityMatrix initial_state(const SpectralModel &model);

/// Input state sqrt(s)|00> + sqrt(1-s)|11> on qubits (0, 1).
ComplexVector input_state(double s);

/// Quench input: |psi_in(s)><psi_in(s)| (x) Tr_{0,1}[rho].
DensityMatrix inject_input(const DensityMatrix &rho, double s);

/// Reduced state on `keep`; the result's qubit j is register qubit keep[j].
DensityMatrix partial_trace(const DensityMatrix &rho, const QubitSubset &keep);

/// Raw partial trace on any square power-of-two matrix.
ComplexMatrix partial_trace(const ComplexMatrix &m, int n_qubits, const QubitSubset &keep);

/// Re Tr[rho O]. An imaginary residue above 1e-8 is reported to `warnings`
/// when given.
double expectation(const DensityMatrix &rho, const PauliString &op, WarningLog *warnings = nullptr);

/// -sum lambda log2 lambda over eigenvalues above 1e-12.
double von_neumann_entropy(const DensityMatrix &rho);

} // namespace qrp
