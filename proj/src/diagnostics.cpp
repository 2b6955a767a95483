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

#include "qrp/diagnostics.hpp"

#include <algorithm>
#include <charconv>

#include "qrp/errors.hpp"

namespace qrp {

namespace {

std::string file_safe(std::string label) {
    std::replace(label.begin(), label.end(), '*', '-');
    return label;
}

std::string join(const QubitSubset &s, char sep) {
    std::string out;
    for (int q : s.indices()) {
        if (!out.empty()) out += sep;
        out += std::to_string(q);
    }
    return out;
}

QubitSubset parse_subset(std::string_view text, std::string_view whole) {
    std::vector<int> idx;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(',', pos);
        const auto tok = text.substr(pos, end == std::string_view::npos ? end : end - pos);
        int q = -1;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), q);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || q < 0)
            throw ParseError("bad qubit index '" + std::string(tok) + "' in TMI spec '" + std::string(whole) + "'");
        idx.push_back(q);
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw ParseError("repeated qubit in TMI spec '" + std::string(whole) + "'");
    return QubitSubset(std::move(idx));
}

QubitSubset remap(const QubitSubset &s, const QubitSubset &support) {
    std::vector<int> out;
    for (int q : s.indices()) {
        const int p = support.position(q);
        if (p < 0) throw ValidationError("qubit " + std::to_string(q) + " is not in the snapshot support");
        out.push_back(p);
    }
    return QubitSubset(std::move(out));
}

const DensityMatrix &require_mean(const StateEnsemble &ensemble) {
    if (!ensemble.mean_state) throw ValidationError("state ensemble holds no mean state");
    return *ensemble.mean_state;
}

// Tr[A B] in O(dim^2).
cplx trace_product(const ComplexMatrix &a, const ComplexMatrix &b) { return a.cwiseProduct(b.transpose()).sum(); }

} // namespace

std::string OtocSpec::name() const { return "otoc_" + file_safe(w.label()) + "_" + file_safe(v.label()); }

TmiSpec TmiSpec::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(':', pos);
        parts.push_back(text.substr(pos, end == std::string_view::npos ? end : end - pos));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    if (parts.size() != 3) throw ParseError("TMI spec '" + std::string(text) + "' needs three ':'-separated subsets");
    TmiSpec spec{parse_subset(parts[0], text), parse_subset(parts[1], text), parse_subset(parts[2], text)};
    spec.validate();
    return spec;
}

void TmiSpec::validate() const {
    if (a.empty() || b.empty() || c.empty()) throw ValidationError("TMI subsets must be nonempty");
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c))
        throw ValidationError("TMI subsets " + label() + " overlap");
}

QubitSubset TmiSpec::all() const { return unite(unite(a, b), c); }

std::string TmiSpec::label() const { return join(a, ',') + ":" + join(b, ',') + ":" + join(c, ','); }

std::string TmiSpec::name() const { return "tmi_" + join(a, '-') + "_" + join(b, '-') + "_" + join(c, '-'); }

DenseOperator heisenberg(const PauliString &op, const SpectralModel &model, double tau) {
    const int reg = model.register_qubits();
    if (op.max_site() >= reg) throw RangeError("operator " + op.label() + " outside the register");
    const int n = model.chain_qubits();

    PauliString chain, site0;
    for (const auto &[site, axis] : op.terms()) {
        if (site == 0)
            site0.set(0, axis);
        else
            chain.set(site - 1, axis);
    }
    const ComplexMatrix &u = model.chain_propagator(tau);
    ComplexMatrix pu = u;
    apply_left(chain, n, pu);
    ComplexMatrix evolved = u.adjoint() * pu;
    evolved = (0.5 * (evolved + evolved.adjoint())).eval();

    const ComplexMatrix p0 = build_dense(site0, 1).entries;
    const Eigen::Index d = evolved.rows();
    ComplexMatrix full(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) full.block(i * d, j * d, d, d) = p0(i, j) * evolved;
    return DenseOperator{std::move(full), true};
}

cplx dynamical_correlation(const DensityMatrix &rho, int qubit, const SpectralModel &model, double tau) {
    const int reg = model.register_qubits();
    if (rho.n_qubits() != reg) throw DimensionError("state does not match the model register");
    if (qubit < 1 || qubit >= reg) throw RangeError("correlation qubit must lie in 1..N");
    ComplexMatrix a = rho.matrix();
    apply_right(a, PauliString{}.set(1, Axis::Z), reg);
    const DenseOperator zi = heisenberg(PauliString{}.set(qubit, Axis::Z), model, tau);
    return trace_product(a, zi.entries);
}

cplx dynamical_correlation(const StateEnsemble &ensemble, int qubit, const SpectralModel &model, double tau) {
    return dynamical_correlation(require_mean(ensemble), qubit, model, tau);
}

double otoc(const DensityMatrix &rho, const OtocSpec &spec, const SpectralModel &model, double tau,
            double *imag_residue) {
    const int reg = model.register_qubits();
    if (rho.n_qubits() != reg) throw DimensionError("state does not match the model register");
    if (spec.v.max_site() >= reg) throw RangeError("operator " + spec.v.label() + " outside the register");
    ComplexMatrix b = heisenberg(spec.w, model, tau).entries;
    apply_right(b, spec.v, reg);
    const ComplexMatrix c = rho.matrix() * b;
    const cplx value = trace_product(c, b);
    if (imag_residue) *imag_residue = value.imag();
    return value.real();
}

double otoc(const StateEnsemble &ensemble, const OtocSpec &spec, const SpectralModel &model, double tau,
            double *imag_residue) {
    return otoc(require_mean(ensemble), spec, model, tau, imag_residue);
}

double tmi(const DensityMatrix &rho, const TmiSpec &spec) {
    spec.validate();
    auto s = [&](const QubitSubset &q) { return von_neumann_entropy(partial_trace(rho, q)); };
    return s(spec.a) + s(spec.b) + s(spec.c) - s(unite(spec.a, spec.b)) - s(unite(spec.a, spec.c)) -
           s(unite(spec.b, spec.c)) + s(spec.all());
}

std::vector<double> tmi_curve(const StateEnsemble &ensemble, const TmiSpec &spec) {
    spec.validate();
    if (ensemble.snapshots.empty()) throw ValidationError("state ensemble holds no snapshots");
    const TmiSpec local{remap(spec.a, ensemble.snapshot_support), remap(spec.b, ensemble.snapshot_support),
                        remap(spec.c, ensemble.snapshot_support)};
    std::vector<double> out(ensemble.snapshot_grid.size(), 0.0);
    for (const auto &per_tau : ensemble.snapshots)
        for (std::size_t m = 0; m < out.size(); ++m) out[m] += tmi(per_tau[m], local);
    for (double &v : out) v /= static_cast<double>(ensemble.snapshots.size());
    return out;
}

} // namespace qrp
