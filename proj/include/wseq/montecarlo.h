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

#ifndef WSEQ_MONTECARLO_H
#define WSEQ_MONTECARLO_H

#include <array>
#include <cstdint>
#include <vector>

#include "wseq/circuit.h"
#include "wseq/pointer.h"
#include "wseq/profile.h"

namespace wseq {

/// Largest number of pointer sites the gridded sampler supports.
inline constexpr int kMaxSampledSites = 3;
/// Runs per independently seeded chunk.
inline constexpr int64_t kRunsPerChunk = 65536;

/// One experimental run: whether the post-selection fired and, if so, a position readout per site.
struct RunRecord {
    bool postselected = false;
    int count = 0;
    std::array<double, kMaxSampledSites> samples{};

    double sample(int site) const {
        return samples[site - 1];
    }
    bool operator==(const RunRecord &) const = default;
};

struct Estimate {
    double mean = 0;
    double stderr_ = 0;
    int64_t n_success = 0;
    int64_t n_total = 0;
};

/// Simulates n_total runs with a pointer at every site (at most three).
///
/// Success is drawn with the exact post-selection probability; successful runs
/// draw (q_1, ..., q_n) from the post-selected joint density by conditional
/// inverse-CDF sampling on a 4096-point grid per axis. Runs are generated in
/// chunks of kRunsPerChunk, chunk c seeded from (seed, c), so output depends only
/// on the arguments. Throws Error(GridResolutionError) when more than 1e-6 of the
/// density falls outside the grid.
std::vector<RunRecord> sample_runs(const Circuit &c, double g, const PointerProfile &prof, int64_t n_total,
                                   uint64_t seed);

/// Sample mean and standard error of the product of positions in `spec` over successful runs.
/// Throws Error(NoSuccessfulRuns) if none succeeded, Error(InvalidArgument) for momentum factors.
Estimate estimate_moment(const std::vector<RunRecord> &records, const MomentSpec &spec);

/// Fraction of successful runs with its binomial standard error.
Estimate postselect_frequency(const std::vector<RunRecord> &records);

}  // namespace wseq

#endif
