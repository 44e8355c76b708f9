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

#ifndef WSEQ_PROFILE_H
#define WSEQ_PROFILE_H

#include <variant>
#include <vector>

#include "wseq/algebra.h"

namespace wseq {

/// phi(q) = (2 pi sigma^2)^(-1/4) exp(-(q - q_offset)^2 / (4 sigma^2)) exp(i p_offset q).
///
/// Var(q) = sigma^2 and Var(p) = 1 / (4 sigma^2).
struct GaussianProfile {
    double sigma = 1;
    double q_offset = 0;
    double p_offset = 0;
};

/// Samples of phi on the uniform grid grid_min + k * grid_step, normalized on construction.
struct TabulatedProfile {
    double grid_min = 0;
    double grid_step = 0;
    std::vector<Complex> values;

    double position(size_t k) const {
        return grid_min + static_cast<double>(k) * grid_step;
    }
};

/// Initial pointer wavefunction. p = -i d/dq, hbar = 1.
class PointerProfile {
   public:
    static PointerProfile gaussian(double sigma, double q_offset = 0, double p_offset = 0);
    /// Requires >= 256 points and |phi| below 1e-8 at both grid ends after normalization.
    static PointerProfile tabulated(double grid_min, double grid_step, std::vector<Complex> values);

    bool is_gaussian() const {
        return std::holds_alternative<GaussianProfile>(kind_);
    }
    const GaussianProfile &as_gaussian() const {
        return std::get<GaussianProfile>(kind_);
    }
    const TabulatedProfile &as_tabulated() const {
        return std::get<TabulatedProfile>(kind_);
    }

    /// Real-valued with zero mean position.
    bool satisfies_assumption_a() const;

    /// Standard deviation of the position distribution |phi|^2.
    double position_spread() const;

    /// phi(q - shift), closed form for Gaussians; tabulated profiles use band-limited
    /// (Fourier) interpolation, so this is O(grid size) per call for them.
    Complex value(double q, double shift = 0) const;

    bool operator==(const PointerProfile &other) const;

   private:
    explicit PointerProfile(GaussianProfile g) : kind_(g) {
    }
    explicit PointerProfile(TabulatedProfile t) : kind_(std::move(t)) {
    }
    std::variant<GaussianProfile, TabulatedProfile> kind_;
};

/// Discrete Fourier data of a tabulated profile on the frequency grid p in [-pi/step, pi/step).
///
/// Coefficients are scaled so that sum |amplitude|^2 = 1 and inner products of
/// two transformed functions equal their position-space integrals.
struct MomentumGrid {
    std::vector<double> momenta;
    std::vector<Complex> amplitude;
};

MomentumGrid to_momentum(const TabulatedProfile &t);
/// Same transform applied to arbitrary samples on t's grid.
std::vector<Complex> to_momentum_like(const TabulatedProfile &t, const std::vector<Complex> &samples);
/// Samples of phi(q - shift) on t's own grid, by Fourier phase shift.
std::vector<Complex> shifted_samples(const TabulatedProfile &t, double shift);

}  // namespace wseq

#endif
