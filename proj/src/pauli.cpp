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

#include "qrp/pauli.hpp"

#include <bit>
#include <charconv>

#include "qrp/errors.hpp"

namespace qrp {

namespace {

constexpr int kMaxSite = 62;

cplx i_power(int k) {
    switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

// Phase acquired by basis state |j> under the Pauli string: P|j> = phase(j)|j ^ flip>.
struct PauliAction {
    std::uint64_t flip;
    std::uint64_t zmask;
    cplx base;

    PauliAction(const PauliString &p, int n) {
        auto m = p.masks(n);
        flip = m.flip;
        zmask = m.zmask;
        base = i_power(m.y_count);
    }
    cplx phase(std::uint64_t j) const { return (std::popcount(j & zmask) & 1) ? -base : base; }
};

void check_register(const PauliString &p, int register_size) {
    if (register_size < 1 || register_size > kMaxSite)
        throw RangeError("register size " + std::to_string(register_size) + " outside [1, " +
                         std::to_string(kMaxSite) + "]");
    if (p.max_site() >= register_size)
        throw RangeError("operator " + p.label() + " acts on site " + std::to_string(p.max_site()) +
                         " outside a " + std::to_string(register_size) + "-qubit register");
}

void check_square(const ComplexMatrix &m, int register_size) {
    if (m.rows() != m.cols() || m.rows() != (Eigen::Index{1} << register_size))
        throw DimensionError("matrix of size " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " does not match a " + std::to_string(register_size) + "-qubit register");
}

} // namespace

char axis_char(Axis a) {
    switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
    }
    return '?';
}

PauliString &PauliString::set(int site, Axis axis) {
    if (site < 0 || site > kMaxSite) throw RangeError("site index " + std::to_string(site) + " out of range");
    if (!terms_.emplace(site, axis).second)
        throw DuplicateSiteError("site " + std::to_string(site) + " appears more than once");
    return *this;
}

std::string PauliString::label() const {
    if (terms_.empty()) return "I";
    std::string out;
    for (const auto &[site, axis] : terms_) {
        if (!out.empty()) out += '*';
        out += axis_char(axis);
        out += std::to_string(site);
    }
    return out;
}

PauliString::Masks PauliString::masks(int n_qubits) const {
    Masks m;
    for (const auto &[site, axis] : terms_) {
        const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - site);
        if (axis != Axis::Z) m.flip |= bit;
        if (axis != Axis::X) m.zmask |= bit;
        if (axis == Axis::Y) ++m.y_count;
    }
    return m;
}

PauliString PauliString::shifted(int offset) const {
    PauliString out;
    for (const auto &[site, axis] : terms_) out.set(site + offset, axis);
    return out;
}

PauliString parse_operator_label(std::string_view text) {
    if (text.empty()) throw ParseError("empty operator label");
    PauliString out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find('*', pos);
        const std::string_view tok = text.substr(pos, end == std::string_view::npos ? end : end - pos);
        if (tok.size() < 2) throw ParseError("malformed operator fragment '" + std::string(tok) + "' in '" +
                                             std::string(text) + "'");
        Axis axis;
        switch (tok[0]) {
        case 'x': axis = Axis::X; break;
        case 'y': axis = Axis::Y; break;
        case 'z': axis = Axis::Z; break;
        default:
            throw ParseError("unknown axis in fragment '" + std::string(tok) + "' of '" + std::string(text) + "'");
        }
        int site = -1;
        const auto digits = tok.substr(1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), site);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || site < 0 || site > kMaxSite)
            throw ParseError("bad site index in fragment '" + std::string(tok) + "' of '" + std::string(text) + "'");
        out.set(site, axis);
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

int DenseOperator::n_qubits() const { return std::countr_zero(static_cast<std::uint64_t>(entries.rows())); }

bool is_hermitian(const ComplexMatrix &m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator make_operator(ComplexMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0 || !std::has_single_bit(static_cast<std::uint64_t>(m.rows())))
        throw DimensionError("operator dimension must be a power of two, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    const bool herm = is_hermitian(m);
    return DenseOperator{std::move(m), herm};
}

DenseOperator build_dense(const PauliString &p, int register_size) {
    check_register(p, register_size);
    const std::uint64_t dim = std::uint64_t{1} << register_size;
    const PauliAction act(p, register_size);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t j = 0; j < dim; ++j)
        m(static_cast<Eigen::Index>(j ^ act.flip), static_cast<Eigen::Index>(j)) = act.phase(j);
    return DenseOperator{std::move(m), true};
}

DenseOperator multiply(const DenseOperator &a, const DenseOperator &b) {
    if (a.dim() != b.dim())
        throw DimensionError("cannot multiply operators of dimension " + std::to_string(a.dim()) + " and " +
                             std::to_string(b.dim()));
    ComplexMatrix prod = a.entries * b.entries;
    const bool herm = is_hermitian(prod);
    return DenseOperator{std::move(prod), herm};
}

void apply_left(const PauliString &p, int register_size, ComplexMatrix &m) {
    check_register(p, register_size);
    check_square(m, register_size);
    const PauliAction act(p, register_size);
    const std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
    // (P m)(r, :) = phase(r ^ flip) m(r ^ flip, :)
    ComplexMatrix out(m.rows(), m.cols());
    for (std::uint64_t r = 0; r < dim; ++r) {
        const std::uint64_t src = r ^ act.flip;
        out.row(static_cast<Eigen::Index>(r)) = act.phase(src) * m.row(static_cast<Eigen::Index>(src));
    }
    m = std::move(out);
}

void apply_right(ComplexMatrix &m, const PauliString &p, int register_size) {
    check_register(p, register_size);
    check_square(m, register_size);
    const PauliAction act(p, register_size);
    const std::uint64_t dim = static_cast<std::uint64_t>(m.cols());
    // (m P)(:, c) = m(:, c ^ flip) phase(c)
    ComplexMatrix out(m.rows(), m.cols());
    for (std::uint64_t c = 0; c < dim; ++c)
        out.col(static_cast<Eigen::Index>(c)) = act.phase(c) * m.col(static_cast<Eigen::Index>(c ^ act.flip));
    m = std::move(out);
}

cplx trace_with(const ComplexMatrix &m, const PauliString &p, int register_size) {
    check_register(p, register_size);
    check_square(m, register_size);
    const PauliAction act(p, register_size);
    const std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
    cplx acc{0.0, 0.0};
    for (std::uint64_t j = 0; j < dim; ++j)
        acc += m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ act.flip)) * act.phase(j);
    return acc;
}

} // namespace qrp
