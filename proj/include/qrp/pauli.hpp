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

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qrp {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Axis : std::uint8_t { X, Y, Z };

char axis_char(Axis a);

/// Tensor product of single-site Pauli matrices. Sites missing from the map
/// carry the identity; the empty string is the identity operator.
///
/// Register convention: qubit 0 is the most significant bit of the
/// computational-basis index.
class PauliString {
  public:
    PauliString() = default;

    /// Throws DuplicateSiteError if `site` already carries an axis.
    PauliString &set(int site, Axis axis);

    const std::map<int, Axis> &terms() const { return terms_; }
    bool is_identity() const { return terms_.empty(); }
    std::size_t weight() const { return terms_.size(); }
    /// Largest site index, or -1 for the identity.
    int max_site() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }
    bool acts_on(int site) const { return terms_.count(site) != 0; }

    /// Canonical label in the operator grammar, sites ascending ("x2*z3").
    /// The identity renders as "I".
    std::string label() const;

    /// Bit masks on an `n_qubits` register: `flip` has a bit per X/Y site,
    /// `zmask` per Y/Z site, and `y_count` the number of Y factors.
    struct Masks {
        std::uint64_t flip = 0;
        std::uint64_t zmask = 0;
        int y_count = 0;
    };
    Masks masks(int n_qubits) const;

    /// Shifts every site by `offset` (which may be negative).
    PauliString shifted(int offset) const;

    friend bool operator==(const PauliString &, const PauliString &) = default;
    friend auto operator<=>(const PauliString &a, const PauliString &b) { return a.terms_ <=> b.terms_; }

  private:
    std::map<int, Axis> terms_;
};

/// Parses `axis site ('*' axis site)*`, e.g. "z1" or "x2*x3".
PauliString parse_operator_label(std::string_view text);

/// Dense matrix realization of an operator on a qubit register.
struct DenseOperator {
    ComplexMatrix entries;
    bool hermitian = false;

    Eigen::Index dim() const { return entries.rows(); }
    int n_qubits() const;
};

/// Checks hermiticity to within `tol` in max-norm.
bool is_hermitian(const ComplexMatrix &m, double tol = 1e-12);

DenseOperator make_operator(ComplexMatrix m);

/// The 2^register_size tensor-product matrix of `p`.
DenseOperator build_dense(const PauliString &p, int register_size);

DenseOperator multiply(const DenseOperator &a, const DenseOperator &b);

/// In-place `m <- P * m` and `m <- m * P` without forming P densely; each
/// costs O(dim^2).
void apply_left(const PauliString &p, int register_size, ComplexMatrix &m);
void apply_right(ComplexMatrix &m, const PauliString &p, int register_size);

/// Tr[m * P] in O(dim).
cplx trace_with(const ComplexMatrix &m, const PauliString &p, int register_size);

} // namespace qrp
