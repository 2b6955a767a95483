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

#include "qrp/pauli.hpp"

namespace qrp {

/// Hermitian, unit-trace state on a qubit register (qubit 0 = most
/// significant bit). Construction checks hermiticity and trace to 1e-9;
/// positivity is checked on demand by `check_positive`.
class DensityMatrix {
  public:
    static constexpr double kTolerance = 1e-9;
    static constexpr double kPositivityFloor = -1e-8;

    explicit DensityMatrix(ComplexMatrix entries);

    /// Pure state |psi><psi|; `psi` must have unit norm within 1e-9.
    static DensityMatrix pure(const ComplexVector &psi);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return entries_.rows(); }
    const ComplexMatrix &matrix() const { return entries_; }

    double trace() const { return entries_.trace().real(); }
    double purity() const;
    double min_eigenvalue() const;

    /// Throws NumericalError when the smallest eigenvalue is below -1e-8.
    void check_positive() const;

  private:
    int n_qubits_ = 0;
    ComplexMatrix entries_;
};

} // namespace qrp
