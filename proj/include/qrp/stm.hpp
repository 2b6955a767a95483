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

#include <span>
#include <string>
#include <vector>

#include "qrp/pauli.hpp"
#include "qrp/reservoir.hpp"

namespace qrp {

/// Linear read-out y = w_o * <O> + w_c.
struct RegressionWeights {
    double w_o = 0.0;
    double w_c = 0.0;
};

/// Minimum-norm least-squares fit of [x 1] w = y, equal to the SVD
/// pseudoinverse solution with singular values below 1e-12 times the largest
/// dropped. Full-rank designs are solved in centered form; a constant `x`
/// yields the minimum-norm solution.
RegressionWeights train_weights(std::span<const double> x, std::span<const double> y);

/// Squared correlation cov^2 / (var * var) with population moments. Returns
/// 0 when either variance is below 1e-14.
double r2_score(std::span<const double> y_pred, std::span<const double> y_target);

struct PerformancePoint {
    double tau = 0.0;
    double r2 = 0.0;
    RegressionWeights weights;
};

struct PerformanceCurve {
    std::string operator_label;
    int delay = 0;
    std::vector<PerformancePoint> points;

    std::vector<double> r2_values() const;
};

/// Trains on the record's training rows against s^{k-d} and scores the test
/// rows, independently at every grid tau.
PerformanceCurve stm_curve(const ReadoutRecord &record, const PauliString &op, int delay, const InputSequence &inputs);

struct DeviationSample {
    double correlation = 0.0; ///< |dynamical correlation| in [0, 1]
    double r2 = 0.0;
    int qubit = 0;
    double tau = 0.0;
};

struct DeviationBin {
    int count = 0;
    double mean_r2 = 0.0;
    double sum_sq_dev = 0.0;
};

struct DeviationBins {
    int windows = 0;
    std::vector<DeviationBin> bins; ///< one per window m = 0 .. windows - 1
    double delta = 0.0;
};

/// Bins samples by |correlation| into [m/M, (m+1)/M) (1 goes to the last bin)
/// and sums squared deviations of R^2 from each bin mean. Correlations in
/// (1, 1 + 1e-9] are treated as 1; anything else outside [0, 1] throws.
DeviationBins data_deviation(std::span<const DeviationSample> samples, int windows = 4000);

} // namespace qrp
