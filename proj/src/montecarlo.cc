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

#include "wseq/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "wseq/errors.h"
#include "wseq/oracle.h"

namespace wseq {

namespace {

constexpr int kGridPoints = 4096;
constexpr double kGridSpan = 12;
constexpr double kOutsideMass = 1e-6;

/// Translated pointer states of one site, sampled on that site's grid.
struct SiteGrid {
    double lo = 0;
    double step = 0;
    std::vector<double> shifts;
    /// phi(q_i - shift_e) for each eigen index e.
    std::vector<std::vector<Complex>> phi;
    /// Cumulative trapezoid integrals of conj(phi_b) phi_a, indexed [b * E + a][i].
    std::vector<std::vector<Complex>> cumulative;

    int size() const {
        return static_cast<int>(phi.front().size());
    }
    int levels() const {
        return static_cast<int>(shifts.size());
    }
};

SiteGrid build_grid(const EigenSystem &spectrum, double g, const PointerProfile &prof) {
    SiteGrid grid;
    for (double a : spectrum.eigenvalues) {
        grid.shifts.push_back(g * a);
    }
    if (prof.is_gaussian()) {
        const auto &gp = prof.as_gaussian();
        auto [lo_it, hi_it] = std::minmax_element(grid.shifts.begin(), grid.shifts.end());
        grid.lo = gp.q_offset + *lo_it - kGridSpan * gp.sigma;
        double hi = gp.q_offset + *hi_it + kGridSpan * gp.sigma;
        grid.step = (hi - grid.lo) / (kGridPoints - 1);
        for (double shift : grid.shifts) {
            std::vector<Complex> row(kGridPoints);
            for (int i = 0; i < kGridPoints; i++) {
                row[i] = prof.value(grid.lo + i * grid.step, shift);
            }
            grid.phi.push_back(std::move(row));
        }
    } else {
        const auto &t = prof.as_tabulated();
        grid.lo = t.grid_min;
        grid.step = t.grid_step;
        const double span = t.grid_step * static_cast<double>(t.values.size());
        for (double shift : grid.shifts) {
            if (std::abs(shift) > span / 4) {
                throw Error(ErrorCode::GridResolutionError,
                            "pointer translation " + std::to_string(shift) + " is too large for the tabulated grid");
            }
            grid.phi.push_back(shifted_samples(t, shift));
        }
    }
    const int e = grid.levels();
    const int m = grid.size();
    for (int b = 0; b < e; b++) {
        for (int a = 0; a < e; a++) {
            std::vector<Complex> cum(m);
            Complex prev = std::conj(grid.phi[b][0]) * grid.phi[a][0];
            cum[0] = 0;
            for (int i = 1; i < m; i++) {
                Complex cur = std::conj(grid.phi[b][i]) * grid.phi[a][i];
                cum[i] = cum[i - 1] + 0.5 * grid.step * (prev + cur);
                prev = cur;
            }
            grid.cumulative.push_back(std::move(cum));
        }
    }
    return grid;
}

/// phi(q - shift_e) at an arbitrary point: closed form for Gaussians, linear interpolation otherwise.
Complex translated_value(const SiteGrid &grid, const PointerProfile &prof, int e, double q) {
    if (prof.is_gaussian()) {
        return prof.value(q, grid.shifts[e]);
    }
    double x = (q - grid.lo) / grid.step;
    int i = std::clamp(static_cast<int>(std::floor(x)), 0, grid.size() - 2);
    double frac = x - i;
    return (1 - frac) * grid.phi[e][i] + frac * grid.phi[e][i + 1];
}

class Sampler {
   public:
    Sampler(const Circuit &c, double g, const PointerProfile &prof) : prof_(prof) {
        BranchSet set = branch_decompose(c);
        n_ = c.num_sites();
        for (const auto &b : set.branches) {
            if (b.amplitude != Complex(0)) {
                amps_.push_back(b.amplitude);
                index_.push_back(b.eigen_index);
            }
        }
        const auto nb = static_cast<Eigen::Index>(amps_.size());
        std::vector<COperator> s_kernels;
        for (const auto &spectrum : set.site_spectra) {
            grids_.push_back(build_grid(spectrum, g, prof));
            s_kernels.push_back(profile_kernels(spectrum.eigenvalues, g, prof).s);
        }
        // tail_[k](b, a) = prod over sites j >= k (0-based) of S(b_j, a_j); tail_[n] is all ones.
        tail_.assign(n_ + 1, COperator::Ones(nb, nb));
        for (int k = n_ - 1; k >= 0; k--) {
            tail_[k] = tail_[k + 1];
            for (Eigen::Index bi = 0; bi < nb; bi++) {
                for (Eigen::Index ai = 0; ai < nb; ai++) {
                    tail_[k](bi, ai) *= s_kernels[k](index_[bi][k], index_[ai][k]);
                }
            }
        }
        Eigen::Map<const CVector> cvec(amps_.data(), nb);
        exact_norm_ = n_ == 0 ? cvec.squaredNorm() : cvec.dot(tail_[0] * cvec).real();
        check_grid_mass();
        success_prob_ = std::clamp(exact_norm_ / c.psi_f().squaredNorm(), 0.0, 1.0);
    }

    double success_prob() const {
        return success_prob_;
    }
    int sites() const {
        return n_;
    }

    /// Draws positions for one successful run from uniforms in [0, 1).
    void draw(const double *uniforms, RunRecord &rec) const {
        const auto nb = static_cast<Eigen::Index>(amps_.size());
        CVector u = Eigen::Map<const CVector>(amps_.data(), nb);
        for (int k = 0; k < n_; k++) {
            const SiteGrid &grid = grids_[k];
            const int e = grid.levels();
            std::vector<Complex> w = pair_weights(u, k, e);
            auto cdf = [&](int i) {
                double total = 0;
                for (int p = 0; p < e * e; p++) {
                    total += (w[p] * grid.cumulative[p][i]).real();
                }
                return total;
            };
            const int m = grid.size();
            double target = uniforms[k] * cdf(m - 1);
            int lo = 0;
            int hi = m - 1;
            while (hi - lo > 1) {
                int mid = (lo + hi) / 2;
                (cdf(mid) < target ? lo : hi) = mid;
            }
            double c_lo = cdf(lo);
            double c_hi = cdf(hi);
            double frac = c_hi > c_lo ? std::clamp((target - c_lo) / (c_hi - c_lo), 0.0, 1.0) : 0.5;
            double q = grid.lo + (lo + frac) * grid.step;
            rec.samples[k] = q;
            for (Eigen::Index a = 0; a < nb; a++) {
                u(a) *= translated_value(grid, prof_, index_[a][k], q);
            }
        }
        rec.count = n_;
    }

   private:
    /// w[b * E + a] = sum over branch pairs with those site-k indices of conj(u_b) u_a tail(b, a).
    std::vector<Complex> pair_weights(const CVector &u, int k, int e) const {
        const auto nb = u.size();
        std::vector<Complex> w(static_cast<size_t>(e * e), 0.0);
        CVector masked(nb);
        for (int ea = 0; ea < e; ea++) {
            for (Eigen::Index a = 0; a < nb; a++) {
                masked(a) = index_[a][k] == ea ? u(a) : Complex(0);
            }
            CVector v = tail_[k + 1] * masked;
            for (Eigen::Index b = 0; b < nb; b++) {
                w[index_[b][k] * e + ea] += std::conj(u(b)) * v(b);
            }
        }
        return w;
    }

    void check_grid_mass() const {
        if (n_ == 0) {
            return;
        }
        const auto nb = static_cast<Eigen::Index>(amps_.size());
        Complex gridded = 0;
        for (Eigen::Index b = 0; b < nb; b++) {
            for (Eigen::Index a = 0; a < nb; a++) {
                Complex term = std::conj(amps_[b]) * amps_[a];
                for (int k = 0; k < n_; k++) {
                    const SiteGrid &grid = grids_[k];
                    term *= grid.cumulative[index_[b][k] * grid.levels() + index_[a][k]].back();
                }
                gridded += term;
            }
        }
        if (std::abs(gridded.real() - exact_norm_) > kOutsideMass * std::max(exact_norm_, 1e-300)) {
            throw Error(ErrorCode::GridResolutionError,
                        "sampling grid misses " + std::to_string(std::abs(1 - gridded.real() / exact_norm_)) +
                            " of the post-selected density");
        }
    }

    const PointerProfile &prof_;
    int n_ = 0;
    std::vector<Complex> amps_;
    std::vector<std::vector<int>> index_;
    std::vector<SiteGrid> grids_;
    std::vector<COperator> tail_;
    double exact_norm_ = 0;
    double success_prob_ = 0;
};

}  // namespace

std::vector<RunRecord> sample_runs(const Circuit &c, double g, const PointerProfile &prof, int64_t n_total,
                                   uint64_t seed) {
    if (c.num_sites() > kMaxSampledSites) {
        throw Error(ErrorCode::InvalidArgument, "Monte Carlo sampling supports at most " +
                                                    std::to_string(kMaxSampledSites) + " pointer sites");
    }
    if (n_total < 0) {
        throw Error(ErrorCode::InvalidArgument, "number of runs must be non-negative");
    }
    if (!(g >= 0) || !std::isfinite(g)) {
        throw Error(ErrorCode::InvalidArgument, "coupling g must be a non-negative finite number");
    }
    Sampler sampler(c, g, prof);
    if (sampler.success_prob() <= 0) {
        throw Error(ErrorCode::DegeneratePostSelection, "post-selection never succeeds");
    }
    std::vector<RunRecord> out(static_cast<size_t>(n_total));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::array<double, kMaxSampledSites> uniforms{};
    for (int64_t chunk = 0; chunk * kRunsPerChunk < n_total; chunk++) {
        const auto c64 = static_cast<uint64_t>(chunk);
        std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(c64),
                          static_cast<uint32_t>(c64 >> 32)};
        std::mt19937_64 rng(seq);
        const int64_t end = std::min(n_total, (chunk + 1) * kRunsPerChunk);
        for (int64_t r = chunk * kRunsPerChunk; r < end; r++) {
            RunRecord &rec = out[static_cast<size_t>(r)];
            rec.postselected = unif(rng) < sampler.success_prob();
            if (!rec.postselected) {
                continue;
            }
            for (int k = 0; k < sampler.sites(); k++) {
                uniforms[k] = unif(rng);
            }
            sampler.draw(uniforms.data(), rec);
        }
    }
    return out;
}

Estimate estimate_moment(const std::vector<RunRecord> &records, const MomentSpec &spec) {
    if (!spec.all(Quadrature::Position)) {
        throw Error(ErrorCode::InvalidArgument, "only position readouts are sampled; got " + spec.str());
    }
    Estimate est;
    est.n_total = static_cast<int64_t>(records.size());
    double mean = 0;
    double m2 = 0;
    for (const auto &rec : records) {
        if (!rec.postselected) {
            continue;
        }
        double x = 1;
        for (const auto &f : spec.factors()) {
            if (f.site > rec.count) {
                throw Error(ErrorCode::InvalidArgument, "moment " + spec.str() + " refers to an unsampled site");
            }
            x *= rec.sample(f.site);
        }
        // Welford update keeps the variance accurate for small products.
        est.n_success++;
        double delta = x - mean;
        mean += delta / static_cast<double>(est.n_success);
        m2 += delta * (x - mean);
    }
    if (est.n_success == 0) {
        throw Error(ErrorCode::NoSuccessfulRuns, "no run passed the post-selection");
    }
    est.mean = mean;
    if (est.n_success > 1) {
        auto n = static_cast<double>(est.n_success);
        est.stderr_ = std::sqrt(std::max(m2, 0.0) / (n - 1) / n);
    }
    return est;
}

Estimate postselect_frequency(const std::vector<RunRecord> &records) {
    Estimate est;
    est.n_total = static_cast<int64_t>(records.size());
    for (const auto &rec : records) {
        est.n_success += rec.postselected ? 1 : 0;
    }
    if (est.n_total > 0) {
        auto n = static_cast<double>(est.n_total);
        est.mean = static_cast<double>(est.n_success) / n;
        est.stderr_ = std::sqrt(est.mean * (1 - est.mean) / n);
    }
    return est;
}

}  // namespace wseq
