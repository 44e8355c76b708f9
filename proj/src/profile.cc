// Copyright 2026 The wseq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wseq/profile.h"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "wseq/errors.h"

namespace wseq {

namespace {

constexpr size_t kMinTabulatedPoints = 256;
constexpr double kTailBound = 1e-8;

double frequency(size_t k, size_t n, double step) {
    auto kk = static_cast<double>(k);
    auto nn = static_cast<double>(n);
    // k >= n/2 wraps to negative frequencies so the range is [-pi/step, pi/step).
    if (2 * k >= n) {
        kk -= nn;
    }
    return 2 * std::numbers::pi * kk / (nn * step);
}

}  // namespace

PointerProfile PointerProfile::gaussian(double sigma, double q_offset, double p_offset) {
    if (!(sigma > 0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidArgument, "gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    if (!std::isfinite(q_offset) || !std::isfinite(p_offset)) {
        throw Error(ErrorCode::InvalidArgument, "gaussian offsets must be finite");
    }
    return PointerProfile(GaussianProfile{sigma, q_offset, p_offset});
}

PointerProfile PointerProfile::tabulated(double grid_min, double grid_step, std::vector<Complex> values) {
    if (values.size() < kMinTabulatedPoints) {
        throw Error(ErrorCode::InvalidArgument, "tabulated profile needs at least 256 points, got " +
                                                    std::to_string(values.size()));
    }
    if (!(grid_step > 0) || !std::isfinite(grid_min)) {
        throw Error(ErrorCode::InvalidArgument, "tabulated grid step must be positive");
    }
    double mass = 0;
    for (const auto &v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(ErrorCode::InvalidArgument, "tabulated profile has a non-finite sample");
        }
        mass += std::norm(v);
    }
    mass *= grid_step;
    if (mass <= 0) {
        throw Error(ErrorCode::InvalidArgument, "tabulated profile is identically zero");
    }
    double scale = 1 / std::sqrt(mass);
    for (auto &v : values) {
        v *= scale;
    }
    if (std::abs(values.front()) > kTailBound || std::abs(values.back()) > kTailBound) {
        throw Error(ErrorCode::GridResolutionError,
                    "tabulated profile does not decay below 1e-8 at the grid ends; widen the grid");
    }
    return PointerProfile(TabulatedProfile{grid_min, grid_step, std::move(values)});
}

bool PointerProfile::satisfies_assumption_a() const {
    if (is_gaussian()) {
        const auto &g = as_gaussian();
        return g.q_offset == 0 && g.p_offset == 0;
    }
    const auto &t = as_tabulated();
    double peak = 0;
    double worst_imag = 0;
    double mean = 0;
    for (size_t k = 0; k < t.values.size(); k++) {
        peak = std::max(peak, std::abs(t.values[k]));
        worst_imag = std::max(worst_imag, std::abs(t.values[k].imag()));
        mean += t.position(k) * std::norm(t.values[k]);
    }
    mean *= t.grid_step;
    return worst_imag <= 1e-12 * peak && std::abs(mean) <= 1e-9;
}

double PointerProfile::position_spread() const {
    if (is_gaussian()) {
        return as_gaussian().sigma;
    }
    const auto &t = as_tabulated();
    double m1 = 0;
    double m2 = 0;
    for (size_t k = 0; k < t.values.size(); k++) {
        double q = t.position(k);
        double w = std::norm(t.values[k]) * t.grid_step;
        m1 += q * w;
        m2 += q * q * w;
    }
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

Complex PointerProfile::value(double q, double shift) const {
    if (is_gaussian()) {
        const auto &g = as_gaussian();
        double x = q - shift - g.q_offset;
        double amp = std::pow(2 * std::numbers::pi * g.sigma * g.sigma, -0.25) *
                     std::exp(-x * x / (4 * g.sigma * g.sigma));
        return std::polar(amp, g.p_offset * (q - shift));
    }
    const auto &t = as_tabulated();
    auto mom = to_momentum(t);
    // amplitude_k carries the sqrt(step/N) scale; undo it for the synthesis sum.
    double n = static_cast<double>(t.values.size());
    double scale = 1 / std::sqrt(n * t.grid_step);
    Complex sum = 0;
    double x = q - shift - t.grid_min;
    for (size_t k = 0; k < mom.momenta.size(); k++) {
        sum += mom.amplitude[k] * std::polar(1.0, mom.momenta[k] * x);
    }
    return sum * scale;
}

bool PointerProfile::operator==(const PointerProfile &other) const {
    if (is_gaussian() != other.is_gaussian()) {
        return false;
    }
    if (is_gaussian()) {
        const auto &a = as_gaussian();
        const auto &b = other.as_gaussian();
        return a.sigma == b.sigma && a.q_offset == b.q_offset && a.p_offset == b.p_offset;
    }
    const auto &a = as_tabulated();
    const auto &b = other.as_tabulated();
    return a.grid_min == b.grid_min && a.grid_step == b.grid_step && a.values == b.values;
}

std::vector<Complex> to_momentum_like(const TabulatedProfile &t, const std::vector<Complex> &samples) {
    Eigen::FFT<double> fft;
    std::vector<Complex> out;
    fft.fwd(out, samples);
    double scale = std::sqrt(t.grid_step / static_cast<double>(samples.size()));
    for (auto &z : out) {
        z *= scale;
    }
    return out;
}

MomentumGrid to_momentum(const TabulatedProfile &t) {
    MomentumGrid grid;
    grid.amplitude = to_momentum_like(t, t.values);
    const size_t n = t.values.size();
    grid.momenta.resize(n);
    for (size_t k = 0; k < n; k++) {
        grid.momenta[k] = frequency(k, n, t.grid_step);
    }
    return grid;
}

std::vector<Complex> shifted_samples(const TabulatedProfile &t, double shift) {
    const size_t n = t.values.size();
    Eigen::FFT<double> fft;
    std::vector<Complex> spectrum;
    fft.fwd(spectrum, t.values);
    for (size_t k = 0; k < n; k++) {
        spectrum[k] *= std::polar(1.0, -frequency(k, n, t.grid_step) * shift);
    }
    std::vector<Complex> out;
    fft.inv(out, spectrum);
    return out;
}

}  // namespace wseq
