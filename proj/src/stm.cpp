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

#include "qrp/stm.hpp"

#include <cmath>
#include <sstream>

#include "qrp/errors.hpp"

namespace qrp {

RegressionWeights train_weights(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("training vectors differ in length");
    if (x.size() < 2) throw ValidationError("training needs at least two samples");
    const double n = static_cast<double>(x.size());

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }

    // Singular values of [x 1] from the trace and determinant of its Gram
    // matrix, det = n * sxx.
    const double trace = sxx + n * (mx * mx + 1.0);
    const double det = n * sxx;
    const double big = 0.5 * (trace + std::sqrt(std::max(0.0, trace * trace - 4.0 * det)));
    const double small = det / big;

    RegressionWeights w;
    if (std::sqrt(small) > 1e-12 * std::sqrt(big)) {
        w.w_o = sxy / sxx;
        w.w_c = my - w.w_o * mx;
        return w;
    }

    // Rank one after truncation: w = v (v . A^T y) / sigma^2 with v the top
    // right singular vector, an eigenvector of [[a, b], [b, n]].
    const double a = sxx + n * mx * mx;
    const double b = n * mx;
    double v0 = big - n, v1 = b;
    if (std::hypot(b, big - a) > std::hypot(v0, v1)) {
        v0 = b;
        v1 = big - a;
    }
    const double norm = std::hypot(v0, v1);
    if (norm == 0.0) return w;
    v0 /= norm;
    v1 /= norm;
    double aty0 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) aty0 += x[i] * y[i];
    const double g = (v0 * aty0 + v1 * n * my) / big;
    w.w_o = v0 * g;
    w.w_c = v1 * g;
    return w;
}

double r2_score(std::span<const double> y_pred, std::span<const double> y_target) {
    if (y_pred.size() != y_target.size()) throw DimensionError("r2_score: length mismatch");
    if (y_pred.size() < 2) throw ValidationError("r2_score needs at least two samples");
    const double n = static_cast<double>(y_pred.size());
    double mp = 0.0, mt = 0.0;
    for (std::size_t i = 0; i < y_pred.size(); ++i) {
        mp += y_pred[i];
        mt += y_target[i];
    }
    mp /= n;
    mt /= n;
    double vp = 0.0, vt = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < y_pred.size(); ++i) {
        const double dp = y_pred[i] - mp;
        const double dt = y_target[i] - mt;
        vp += dp * dp;
        vt += dt * dt;
        cov += dp * dt;
    }
    vp /= n;
    vt /= n;
    cov /= n;
    if (vp < 1e-14 || vt < 1e-14) return 0.0;
    return cov * cov / (vp * vt);
}

std::vector<double> PerformanceCurve::r2_values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &p : points) out.push_back(p.r2);
    return out;
}

PerformanceCurve stm_curve(const ReadoutRecord &record, const PauliString &op, int delay, const InputSequence &inputs) {
    if (delay < 0) throw ValidationError("delay must be >= 0");
    if (record.first_step < delay)
        throw ValidationError("delay " + std::to_string(delay) + " reaches before the first input");
    if (static_cast<int>(inputs.values.size()) < record.first_step + record.rows())
        throw ValidationError("input sequence shorter than the recorded drive");
    const Eigen::MatrixXd &values = record.values_for(op);

    const auto n_train = static_cast<std::size_t>(record.train_rows);
    const auto n_test = static_cast<std::size_t>(record.test_rows);
    std::vector<double> y_train(n_train), y_test(n_test);
    for (std::size_t r = 0; r < n_train; ++r)
        y_train[r] = inputs.values[static_cast<std::size_t>(record.step(static_cast<int>(r)) - delay)];
    for (std::size_t r = 0; r < n_test; ++r)
        y_test[r] = inputs.values[static_cast<std::size_t>(record.step(static_cast<int>(n_train + r)) - delay)];

    PerformanceCurve curve;
    curve.operator_label = op.label();
    curve.delay = delay;
    curve.points.reserve(record.grid.size());
    std::vector<double> x_train(n_train), y_pred(n_test);
    for (std::size_t m = 0; m < record.grid.size(); ++m) {
        const auto col = values.col(static_cast<Eigen::Index>(m));
        for (std::size_t r = 0; r < n_train; ++r) x_train[r] = col(static_cast<Eigen::Index>(r));
        const RegressionWeights w = train_weights(x_train, y_train);
        for (std::size_t r = 0; r < n_test; ++r)
            y_pred[r] = w.w_o * col(static_cast<Eigen::Index>(n_train + r)) + w.w_c;
        curve.points.push_back({record.grid[m], r2_score(y_pred, y_test), w});
    }
    return curve;
}

DeviationBins data_deviation(std::span<const DeviationSample> samples, int windows) {
    if (windows < 1) throw ValidationError("window count must be >= 1");
    DeviationBins out;
    out.windows = windows;
    out.bins.assign(static_cast<std::size_t>(windows), DeviationBin{});

    std::vector<int> index(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double c = samples[i].correlation;
        if (!(c >= 0.0 && c <= 1.0 + 1e-9)) {
            std::ostringstream os;
            os << "correlation " << c << " outside [0, 1]";
            throw RangeError(os.str());
        }
        c = std::min(c, 1.0);
        const int m = std::min(static_cast<int>(std::floor(c * windows)), windows - 1);
        index[i] = m;
        auto &bin = out.bins[static_cast<std::size_t>(m)];
        ++bin.count;
        bin.mean_r2 += samples[i].r2;
    }
    for (auto &bin : out.bins)
        if (bin.count > 0) bin.mean_r2 /= bin.count;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto &bin = out.bins[static_cast<std::size_t>(index[i])];
        const double dev = samples[i].r2 - bin.mean_r2;
        bin.sum_sq_dev += dev * dev;
    }
    for (const auto &bin : out.bins) out.delta += bin.sum_sq_dev;
    return out;
}

} // namespace qrp
