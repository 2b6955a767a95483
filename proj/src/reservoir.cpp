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

#include "qrp/reservoir.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "qrp/digest.hpp"
#include "qrp/errors.hpp"

namespace qrp {

namespace {

// Qubit-0 factor of a register operator: 0 = I, 1 = X, 2 = Y, 3 = Z.
int qubit0_type(const PauliString &p) {
    auto it = p.terms().find(0);
    if (it == p.terms().end()) return 0;
    switch (it->second) {
    case Axis::X: return 1;
    case Axis::Y: return 2;
    case Axis::Z: return 3;
    }
    return 0;
}

PauliString chain_part(const PauliString &p) {
    PauliString out;
    for (const auto &[site, axis] : p.terms())
        if (site > 0) out.set(site - 1, axis);
    return out;
}

Eigen::Matrix2cd single_pauli(int type) {
    Eigen::Matrix2cd m;
    switch (type) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: m.setIdentity(); break;
    }
    return m;
}

// r = Tr_0[sigma (P (x) I)] on qubit 1, for a two-qubit state sigma on (0, 1).
Eigen::Matrix2cd input_factor(const Eigen::Matrix4cd &sigma, int type) {
    const Eigen::Matrix2cd p = single_pauli(type);
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
            for (int a = 0; a < 2; ++a)
                for (int ap = 0; ap < 2; ++ap) r(b, bp) += sigma(2 * a + b, 2 * ap + bp) * p(ap, a);
    return r;
}

// Real packing of a Hermitian matrix: [Re diag | Re strict-lower | Im strict-lower],
// column-major over the lower triangle. `offdiag` scales the off-diagonal entries
// so that <pack(A, 1), pack(B, 2)> = Tr[A B] for Hermitian A, B.
void pack_hermitian(const ComplexMatrix &m, double offdiag, double *out) {
    const Eigen::Index d = m.rows();
    const Eigen::Index lower = d * (d - 1) / 2;
    for (Eigen::Index i = 0; i < d; ++i) out[i] = m(i, i).real();
    double *re = out + d;
    double *im = out + d + lower;
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = c + 1; r < d; ++r, ++idx) {
            re[idx] = offdiag * m(r, c).real();
            im[idx] = offdiag * m(r, c).imag();
        }
}

// Same packing for the Heisenberg-evolved eigenbasis operator
// a_r O(r, c) conj(a_c), with a = exp(i E tau).
void pack_evolved(const ComplexMatrix &op, const ComplexVector &a, double *out) {
    const Eigen::Index d = op.rows();
    const Eigen::Index lower = d * (d - 1) / 2;
    for (Eigen::Index i = 0; i < d; ++i) out[i] = op(i, i).real();
    double *re = out + d;
    double *im = out + d + lower;
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < d; ++c) {
        const cplx ac = std::conj(a(c));
        for (Eigen::Index r = c + 1; r < d; ++r, ++idx) {
            const cplx v = a(r) * op(r, c) * ac;
            re[idx] = 2.0 * v.real();
            im[idx] = 2.0 * v.imag();
        }
    }
}

constexpr Eigen::Index kStageBudget = Eigen::Index{1} << 23; // doubles per staging matrix
constexpr Eigen::Index kOperatorBudget = Eigen::Index{1} << 23;

// Evaluates Tr[R_P(tau) O] for register Pauli strings O on many staged states.
// A state is staged as its eigenbasis factors R~_P = V^dagger Tr_0[rho (P (x) I)] V,
// one per qubit-0 type P that some operator needs.
class EigenSampler {
  public:
    EigenSampler(const SpectralModel &model, const std::vector<PauliString> &ops, std::vector<double> grid,
                 Eigen::Index max_states)
        : grid_(std::move(grid)), energies_(model.eigenvalues()) {
        const Eigen::Index d = model.chain_dim();
        packed_ = d * d;
        const int chain_n = model.chain_qubits();
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const int type = qubit0_type(ops[i]);
            Group &g = groups_[static_cast<std::size_t>(type)];
            g.op_index.push_back(static_cast<int>(i));
            ComplexMatrix o = build_dense(chain_part(ops[i]), chain_n).entries;
            g.rotated.push_back(model.eigenvectors().adjoint() * o * model.eigenvectors());
        }
        capacity_ = std::clamp<Eigen::Index>(kStageBudget / packed_, 1, std::max<Eigen::Index>(max_states, 1));
        capacity_ = std::min<Eigen::Index>(capacity_, 256);
        for (auto &g : groups_)
            if (!g.op_index.empty()) g.staged.resize(packed_, capacity_);
    }

    bool needs(int type) const { return !groups_[static_cast<std::size_t>(type)].op_index.empty(); }
    bool empty() const {
        return std::all_of(groups_.begin(), groups_.end(), [](const Group &g) { return g.op_index.empty(); });
    }
    bool full() const { return count_ == capacity_; }

    void stage(const std::array<ComplexMatrix, 4> &factors, int tag) {
        for (std::size_t t = 0; t < 4; ++t) {
            Group &g = groups_[t];
            if (g.op_index.empty()) continue;
            pack_hermitian(factors[t], 1.0, g.staged.col(count_).data());
        }
        tags_.push_back(tag);
        ++count_;
    }

    // sink(tag, op_index, grid_index, value)
    template <class Sink> void flush(Sink &&sink) {
        if (count_ == 0) return;
        const auto n_grid = static_cast<Eigen::Index>(grid_.size());
        for (auto &g : groups_) {
            if (g.op_index.empty()) continue;
            const auto n_ops = static_cast<Eigen::Index>(g.op_index.size());
            const Eigen::Index chunk = std::clamp<Eigen::Index>(kOperatorBudget / (packed_ * n_ops), 1, n_grid);
            Eigen::MatrixXd ops(packed_, n_ops * chunk);
            Eigen::MatrixXd result;
            for (Eigen::Index m0 = 0; m0 < n_grid; m0 += chunk) {
                const Eigen::Index width = std::min(chunk, n_grid - m0);
                for (Eigen::Index dm = 0; dm < width; ++dm) {
                    const double tau = grid_[static_cast<std::size_t>(m0 + dm)];
                    const ComplexVector a = (energies_.cast<cplx>() * cplx{0.0, tau}).array().exp().matrix();
                    for (Eigen::Index o = 0; o < n_ops; ++o)
                        pack_evolved(g.rotated[static_cast<std::size_t>(o)], a, ops.col(dm * n_ops + o).data());
                }
                result.noalias() = ops.leftCols(width * n_ops).transpose() * g.staged.leftCols(count_);
                for (Eigen::Index dm = 0; dm < width; ++dm)
                    for (Eigen::Index o = 0; o < n_ops; ++o)
                        for (Eigen::Index s = 0; s < count_; ++s)
                            sink(tags_[static_cast<std::size_t>(s)], g.op_index[static_cast<std::size_t>(o)],
                                 static_cast<int>(m0 + dm), result(dm * n_ops + o, s));
            }
        }
        count_ = 0;
        tags_.clear();
    }

  private:
    struct Group {
        std::vector<int> op_index;
        std::vector<ComplexMatrix> rotated;
        Eigen::MatrixXd staged;
    };

    std::vector<double> grid_;
    Eigen::VectorXd energies_;
    Eigen::Index packed_ = 0;
    Eigen::Index capacity_ = 1;
    Eigen::Index count_ = 0;
    std::vector<int> tags_;
    std::array<Group, 4> groups_;
};

// All non-identity Pauli strings on `support`, as register operators and as
// operators on the support's own |support|-qubit register.
struct SupportBasis {
    std::vector<PauliString> on_register;
    std::vector<ComplexMatrix> local;
};

SupportBasis support_basis(const QubitSubset &support) {
    SupportBasis basis;
    const int k = static_cast<int>(support.size());
    const std::size_t count = std::size_t{1} << (2 * k);
    for (std::size_t code = 1; code < count; ++code) {
        PauliString reg, loc;
        for (int j = 0; j < k; ++j) {
            const auto digit = (code >> (2 * j)) & 3U;
            if (digit == 0) continue;
            const Axis axis = digit == 1 ? Axis::X : digit == 2 ? Axis::Y : Axis::Z;
            reg.set(support.indices()[static_cast<std::size_t>(j)], axis);
            loc.set(j, axis);
        }
        basis.on_register.push_back(std::move(reg));
        basis.local.push_back(build_dense(loc, k).entries);
    }
    return basis;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

void DriveConfig::validate() const {
    if (!(t_in > 0.0) || !std::isfinite(t_in)) throw ValidationError("drive.t_in must be positive");
    if (n_grid < 1) throw ValidationError("drive.n_grid must be >= 1");
    if (washout < 0) throw ValidationError("drive.washout must be >= 0");
    if (train < 2) throw ValidationError("drive.train must be >= 2");
    if (test < 2) throw ValidationError("drive.test must be >= 2");
    if (snapshots.instance_cap < 0) throw ValidationError("drive.tmi_cap must be >= 0");
    if (snapshots.support.size() > 6) throw ValidationError("snapshot support limited to 6 qubits");
}

std::vector<double> DriveConfig::grid() const {
    std::vector<double> g(static_cast<std::size_t>(n_grid));
    for (int m = 0; m < n_grid; ++m) g[static_cast<std::size_t>(m)] = tau(m);
    return g;
}

std::uint64_t InputSequence::digest() const { return digest_values(values); }

InputSequence generate_inputs(std::uint64_t seed, std::size_t count) {
    if (count < 1) throw ValidationError("input count must be >= 1");
    InputSequence seq;
    seq.seed = seed;
    seq.values.resize(count);
    std::mt19937_64 engine(seed);
    for (auto &v : seq.values) v = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return seq;
}

const char *phase_name(Phase p) { return p == Phase::Train ? "train" : "test"; }

const Eigen::MatrixXd &ReadoutRecord::values_for(const PauliString &op) const {
    auto it = std::find(operators.begin(), operators.end(), op);
    if (it == operators.end()) throw ValidationError("operator " + op.label() + " was not recorded");
    return values[static_cast<std::size_t>(it - operators.begin())];
}

DriveResult run_drive(const DriveConfig &config, const SpectralModel &model, const std::vector<PauliString> &readouts,
                      const InputSequence &inputs) {
    config.validate();
    const int n = model.chain_qubits();
    const int reg = n + 1;
    if (static_cast<int>(inputs.values.size()) != config.total_steps())
        throw ValidationError("input sequence has " + std::to_string(inputs.values.size()) + " values, drive needs " +
                              std::to_string(config.total_steps()));
    for (double s : inputs.values)
        if (!(s >= 0.0 && s <= 1.0)) throw RangeError("input value outside [0, 1]");
    for (const auto &op : readouts)
        if (op.max_site() >= reg)
            throw RangeError("read-out " + op.label() + " outside the " + std::to_string(reg) + "-qubit register");
    const SnapshotPolicy &policy = config.snapshots;
    if (!policy.support.empty() && policy.support.indices().back() >= reg)
        throw RangeError("snapshot support outside the register");

    const Eigen::Index d = model.chain_dim();
    const Eigen::Index half = d / 2;
    const std::vector<double> grid = config.grid();

    DriveResult result;
    ReadoutRecord &record = result.record;
    record.operators = readouts;
    record.grid = grid;
    record.first_step = config.washout;
    record.train_rows = config.train;
    record.test_rows = config.test;
    record.values.assign(readouts.size(), Eigen::MatrixXd::Zero(record.rows(), config.n_grid));

    EigenSampler readout_sampler(model, readouts, grid, record.rows());

    const bool want_snapshots = !policy.support.empty() && policy.instance_cap > 0;
    const int n_snap = want_snapshots ? std::min(policy.instance_cap, config.test) : 0;
    SupportBasis basis;
    std::vector<Eigen::MatrixXd> snap_values; // [instance](pauli, grid)
    std::optional<EigenSampler> snapshot_sampler;
    if (want_snapshots) {
        basis = support_basis(policy.support);
        snapshot_sampler.emplace(model, basis.on_register, grid, n_snap);
        snap_values.assign(static_cast<std::size_t>(n_snap),
                           Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.on_register.size()), config.n_grid));
    }

    // Chain state on qubits 2..N right before the first injection.
    ComplexMatrix rest;
    {
        const GroundState gs = ground_state(model);
        const ComplexMatrix proj = gs.amplitudes * gs.amplitudes.adjoint();
        if (n == 1) {
            rest = ComplexMatrix::Ones(1, 1);
        } else {
            std::vector<int> keep;
            for (int q = 1; q < n; ++q) keep.push_back(q);
            rest = partial_trace(proj, n, QubitSubset(std::move(keep)));
        }
    }

    ComplexMatrix mean;
    if (policy.keep_mean_state) mean = ComplexMatrix::Zero(2 * d, 2 * d);

    const ComplexMatrix &u = model.chain_propagator(config.t_in);
    const ComplexMatrix &v = model.eigenvectors();
    const ComplexMatrix v0 = v.topRows(half);
    const ComplexMatrix v1 = v.bottomRows(half);

    auto sink_readout = [&](int row, int op, int m, double value) {
        record.values[static_cast<std::size_t>(op)](row, m) = value;
    };
    auto sink_snapshot = [&](int inst, int op, int m, double value) {
        snap_values[static_cast<std::size_t>(inst)](op, m) = value;
    };

    std::array<ComplexMatrix, 4> factors;
    ComplexMatrix y0, y1, m00, m11, m01, next;
    for (int k = 0; k < config.total_steps(); ++k) {
        const double s = inputs.values[static_cast<std::size_t>(k)];
        const ComplexVector psi = input_state(s);
        const Eigen::Matrix4cd sigma = psi * psi.adjoint();

        if (k >= config.washout) {
            const int row = k - config.washout;
            const bool test = row >= config.train;
            const int inst = row - config.train;
            const bool snap = test && inst < n_snap;

            std::array<bool, 4> need{};
            for (int t = 0; t < 4; ++t)
                need[static_cast<std::size_t>(t)] =
                    readout_sampler.needs(t) || (snap && snapshot_sampler->needs(t));
            const bool diag = need[0] || need[3];
            const bool offdiag = need[1] || need[2];
            if (diag || offdiag) {
                // Eigenbasis blocks M_bb' = V_b^dagger rest V_b' for qubit-1 values b, b'.
                y0.noalias() = rest * v0;
                y1.noalias() = rest * v1;
                if (diag) {
                    m00.noalias() = v0.adjoint() * y0;
                    m11.noalias() = v1.adjoint() * y1;
                }
                if (offdiag) m01.noalias() = v0.adjoint() * y1;
                for (int t = 0; t < 4; ++t) {
                    if (!need[static_cast<std::size_t>(t)]) continue;
                    const Eigen::Matrix2cd r = input_factor(sigma, t);
                    ComplexMatrix &f = factors[static_cast<std::size_t>(t)];
                    f = ComplexMatrix::Zero(d, d);
                    if (t == 0 || t == 3) {
                        f += r(0, 0) * m00;
                        f += r(1, 1) * m11;
                    } else {
                        f += r(0, 1) * m01;
                        f += r(1, 0) * m01.adjoint();
                    }
                }
            }
            if (!readout_sampler.empty()) {
                readout_sampler.stage(factors, row);
                if (readout_sampler.full()) readout_sampler.flush(sink_readout);
            }
            if (snap) {
                snapshot_sampler->stage(factors, inst);
                if (snapshot_sampler->full()) snapshot_sampler->flush(sink_snapshot);
            }
            if (test && policy.keep_mean_state) mean += kron(ComplexMatrix(sigma), rest);
        }

        // rest <- Tr_1[U (diag(s, 1-s) (x) rest) U^dagger] = sum_ab p_b U_ab rest U_ab^dagger.
        const double p[2] = {s, 1.0 - s};
        next = ComplexMatrix::Zero(std::max<Eigen::Index>(half, 1), std::max<Eigen::Index>(half, 1));
        if (half == 0) {
            next(0, 0) = 1.0;
        } else {
            for (int b = 0; b < 2; ++b) {
                if (p[b] == 0.0) continue;
                for (int a = 0; a < 2; ++a) {
                    const auto uab = u.block(a * half, b * half, half, half);
                    next.noalias() += p[b] * (uab * rest * uab.adjoint());
                }
            }
            next = (0.5 * (next + next.adjoint())).eval();
        }
        rest.swap(next);

        const double tr = rest.trace().real();
        if (!(std::abs(tr - 1.0) <= 1e-6)) {
            std::ostringstream os;
            os << "running state trace drifted to " << tr << " after step " << k << " (input " << s
               << ", max |rho| " << rest.cwiseAbs().maxCoeff() << ")";
            throw NumericalError(os.str());
        }
        result.completed_steps = k + 1;
    }
    readout_sampler.flush(sink_readout);
    if (snapshot_sampler) snapshot_sampler->flush(sink_snapshot);

    StateEnsemble &ens = result.ensemble;
    if (policy.keep_mean_state) {
        mean /= static_cast<double>(config.test);
        mean = (0.5 * (mean + mean.adjoint())).eval();
        ens.mean_state.emplace(std::move(mean));
    }
    if (want_snapshots) {
        ens.snapshot_support = policy.support;
        ens.snapshot_grid = grid;
        const int k = static_cast<int>(policy.support.size());
        const Eigen::Index ds = Eigen::Index{1} << k;
        const double norm = 1.0 / static_cast<double>(ds);
        ens.snapshots.resize(static_cast<std::size_t>(n_snap));
        for (int i = 0; i < n_snap; ++i) {
            ens.snapshot_steps.push_back(config.washout + config.train + i);
            auto &per_tau = ens.snapshots[static_cast<std::size_t>(i)];
            per_tau.reserve(grid.size());
            const Eigen::MatrixXd &vals = snap_values[static_cast<std::size_t>(i)];
            for (int m = 0; m < config.n_grid; ++m) {
                ComplexMatrix rho = ComplexMatrix::Identity(ds, ds);
                for (std::size_t b = 0; b < basis.local.size(); ++b)
                    rho += vals(static_cast<Eigen::Index>(b), m) * basis.local[b];
                per_tau.emplace_back(norm * rho);
            }
        }
    }
    return result;
}

} // namespace qrp
