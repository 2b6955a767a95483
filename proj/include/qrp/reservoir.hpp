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

#include <cstdint>
#include <optional>
#include <vector>

#include "qrp/hamiltonian.hpp"
#include "qrp/pauli.hpp"
#include "qrp/quantum_state.hpp"

namespace qrp {

/// Which test-phase density matrices the drive keeps for diagnostics.
struct SnapshotPolicy {
    /// Mean post-injection full-register state over all test steps.
    bool keep_mean_state = true;
    /// Register qubits of the per-step reduced snapshots; empty disables them.
    QubitSubset support;
    /// Snapshots are taken on the first `instance_cap` test steps, at every
    /// grid tau.
    int instance_cap = 200;

    friend bool operator==(const SnapshotPolicy &, const SnapshotPolicy &) = default;
};

struct DriveConfig {
    double t_in = 5.0;
    /// tau_m = m * t_in / n_grid for m = 0 .. n_grid - 1.
    int n_grid = 50;
    int washout = 1000;
    int train = 2000;
    int test = 2000;
    std::uint64_t seed = 42;
    SnapshotPolicy snapshots;

    void validate() const;
    int total_steps() const { return washout + train + test; }
    double tau(int m) const { return (static_cast<double>(m) * t_in) / static_cast<double>(n_grid); }
    std::vector<double> grid() const;

    friend bool operator==(const DriveConfig &, const DriveConfig &) = default;
};

struct InputSequence {
    std::uint64_t seed = 0;
    std::vector<double> values;

    std::uint64_t digest() const;
};

/// Uniform [0, 1) inputs from std::mt19937_64 seeded with `seed`; each
/// value is (draw >> 11) * 2^-53, so sequences are identical on every
/// platform.
InputSequence generate_inputs(std::uint64_t seed, std::size_t count);

enum class Phase { Train, Test };

const char *phase_name(Phase p);

/// Read-out expectations on the train and test steps. Row r is input step
/// `first_step + r`; the first `train_rows` rows are training rows.
struct ReadoutRecord {
    std::vector<PauliString> operators;
    std::vector<double> grid;
    int first_step = 0;
    int train_rows = 0;
    int test_rows = 0;
    /// One (train_rows + test_rows) x grid.size() matrix per operator.
    std::vector<Eigen::MatrixXd> values;

    int rows() const { return train_rows + test_rows; }
    int step(int row) const { return first_step + row; }
    Phase phase(int row) const { return row < train_rows ? Phase::Train : Phase::Test; }

    /// Throws ValidationError for an operator that was not recorded.
    const Eigen::MatrixXd &values_for(const PauliString &op) const;
};

struct StateEnsemble {
    /// Mean post-injection state (tau = 0) over the test steps.
    std::optional<DensityMatrix> mean_state;

    QubitSubset snapshot_support;
    std::vector<double> snapshot_grid;
    std::vector<int> snapshot_steps;
    /// snapshots[i][m]: reduced state on `snapshot_support` at step
    /// snapshot_steps[i], grid point m. Qubit j of each snapshot is register
    /// qubit snapshot_support.indices()[j].
    std::vector<std::vector<DensityMatrix>> snapshots;
};

struct DriveResult {
    ReadoutRecord record;
    StateEnsemble ensemble;
    /// Number of full intervals propagated, l_w + l_tr + l_ts on success.
    int completed_steps = 0;
};

/// Successive-quench drive: washout steps propagate by U(t_in) without
/// sampling; train and test steps record every read-out at every grid tau.
///
/// Between injections only the chain state on qubits 2..N is carried, since
/// each injection replaces qubits 0 and 1. Read-outs are evaluated in the
/// Hamiltonian eigenbasis, where evolution is a phase on each matrix element.
DriveResult run_drive(const DriveConfig &config, const SpectralModel &model, const std::vector<PauliString> &readouts,
                      const InputSequence &inputs);

} // namespace qrp
