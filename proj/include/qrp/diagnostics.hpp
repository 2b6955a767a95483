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

#include <string>
#include <string_view>
#include <vector>

#include "qrp/hamiltonian.hpp"
#include "qrp/quantum_state.hpp"
#include "qrp/reservoir.hpp"
#include "qrp/warnings.hpp"

namespace qrp {

/// F(tau) = <W(tau) V W(tau) V> for Pauli strings W (evolved) and V (fixed).
struct OtocSpec {
    PauliString w;
    PauliString v;

    /// File stem, e.g. "otoc_z2_z1"; '*' in labels becomes '-'.
    std::string name() const;
    friend bool operator==(const OtocSpec &, const OtocSpec &) = default;
};

/// I_3(A:B:C) over three pairwise disjoint register subsets.
struct TmiSpec {
    QubitSubset a;
    QubitSubset b;
    QubitSubset c;

    /// Parses "0:2:3,4" as A = {0}, B = {2}, C = {3, 4}.
    static TmiSpec parse(std::string_view text);
    void validate() const;
    QubitSubset all() const;
    /// "0:2:3,4" form.
    std::string label() const;
    /// File stem, e.g. "tmi_0_2_3-4".
    std::string name() const;
    friend bool operator==(const TmiSpec &, const TmiSpec &) = default;
};

/// O(tau) = U^dagger(tau) O U(tau) on the full register.
DenseOperator heisenberg(const PauliString &op, const SpectralModel &model, double tau);

/// Tr[rho z_1 z_i(tau)], with the time-zero operator leftmost.
cplx dynamical_correlation(const DensityMatrix &rho, int qubit, const SpectralModel &model, double tau);
cplx dynamical_correlation(const StateEnsemble &ensemble, int qubit, const SpectralModel &model, double tau);

/// Re Tr[rho W(tau) V W(tau) V]. The imaginary residue goes to `imag_residue`
/// when given.
double otoc(const DensityMatrix &rho, const OtocSpec &spec, const SpectralModel &model, double tau,
            double *imag_residue = nullptr);
double otoc(const StateEnsemble &ensemble, const OtocSpec &spec, const SpectralModel &model, double tau,
            double *imag_residue = nullptr);

/// S_A + S_B + S_C - S_AB - S_AC - S_BC + S_ABC on `rho`; subset indices refer
/// to `rho`'s own qubits.
double tmi(const DensityMatrix &rho, const TmiSpec &spec);

/// Per-grid-tau TMI averaged over the ensemble's per-step snapshots. The
/// spec uses register indices, which must lie within the snapshot support.
std::vector<double> tmi_curve(const StateEnsemble &ensemble, const TmiSpec &spec);

} // namespace qrp
