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

#include "wseq/pointer.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "wseq/errors.h"
#include "wseq/weak_value.h"

namespace wseq {

namespace {

constexpr double kGridSelfEstimateTol = 1e-7;

PointerMoments tabulated_moments(const TabulatedProfile &t) {
    const size_t n = t.values.size();
    double norm = 0;
    double mu = 0;
    for (size_t k = 0; k < n; k++) {
        double w = std::norm(t.values[k]) * t.grid_step;
        norm += w;
        mu += t.position(k) * w;
    }
    mu /= norm;

    auto mom = to_momentum(t);
    std::vector<Complex> q_phi(n);
    for (size_t k = 0; k < n; k++) {
        q_phi[k] = t.position(k) * t.values[k];
    }
    auto q_mom = to_momentum_like(t, q_phi);

    double p1 = 0;
    double p2 = 0;
    Complex qp = 0;
    for (size_t k = 0; k < n; k++) {
        double w = std::norm(mom.amplitude[k]);
        p1 += mom.momenta[k] * w;
        p2 += mom.momenta[k] * mom.momenta[k] * w;
        qp += std::conj(q_mom[k]) * mom.momenta[k] * mom.amplitude[k];
    }
    p1 /= norm;
    p2 /= norm;
    qp /= norm;

    PointerMoments m;
    m.mu = mu;
    m.nu = p1;
    m.v = p2 - p1 * p1;
    // <qp + pq> = 2 Re <q phi | p phi>.
    m.y = 2 * qp.real() - 2 * mu * p1;
    return m;
}

bool parse_int(std::string_view text, int &out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

PointerMoments moments(const PointerProfile &prof) {
    if (prof.is_gaussian()) {
        const auto &g = prof.as_gaussian();
        return PointerMoments{g.q_offset, g.p_offset, 1 / (4 * g.sigma * g.sigma), 0};
    }
    const auto &t = prof.as_tabulated();
    PointerMoments full = tabulated_moments(t);

    TabulatedProfile coarse{t.grid_min, 2 * t.grid_step, {}};
    for (size_t k = 0; k < t.values.size(); k += 2) {
        coarse.values.push_back(t.values[k]);
    }
    PointerMoments half = tabulated_moments(coarse);
    double err = std::max({std::abs(full.mu - half.mu), std::abs(full.nu - half.nu), std::abs(full.v - half.v),
                           std::abs(full.y - half.y)});
    if (err > kGridSelfEstimateTol) {
        throw Error(ErrorCode::GridTooCoarse,
                    "tabulated moments change by " + std::to_string(err) + " between the grid and its half-resolution "
                                                                           "subsample; refine the grid");
    }
    return full;
}

MomentSpec::MomentSpec(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "moment spec needs at least one factor");
    }
    for (size_t k = 0; k < factors_.size(); k++) {
        if (factors_[k].site < 1) {
            throw Error(ErrorCode::InvalidArgument, "moment spec sites are 1-based");
        }
        if (k > 0 && factors_[k].site <= factors_[k - 1].site) {
            throw Error(ErrorCode::InvalidArgument, "moment spec sites must be strictly increasing");
        }
    }
}

MomentSpec MomentSpec::parse(std::string_view text) {
    std::vector<Factor> factors;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('*', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view tok = text.substr(start, end - start);
        int site = 0;
        if (tok.size() < 2 || (tok[0] != 'q' && tok[0] != 'p') || !parse_int(tok.substr(1), site)) {
            throw Error(ErrorCode::InvalidArgument, "bad moment factor '" + std::string(tok) + "' in '" +
                                                        std::string(text) + "' (expected e.g. q1*p2)");
        }
        factors.push_back({site, tok[0] == 'q' ? Quadrature::Position : Quadrature::Momentum});
        start = end + 1;
    }
    return MomentSpec(std::move(factors));
}

int MomentSpec::count(Quadrature kind) const {
    return static_cast<int>(std::count_if(factors_.begin(), factors_.end(), [&](const Factor &f) {
        return f.kind == kind;
    }));
}

const Quadrature *MomentSpec::at_site(int site) const {
    for (const auto &f : factors_) {
        if (f.site == site) {
            return &f.kind;
        }
    }
    return nullptr;
}

std::vector<int> MomentSpec::sites() const {
    std::vector<int> out;
    for (const auto &f : factors_) {
        out.push_back(f.site);
    }
    return out;
}

std::string MomentSpec::str() const {
    std::string out;
    for (const auto &f : factors_) {
        if (!out.empty()) {
            out += '*';
        }
        out += f.kind == Quadrature::Position ? 'q' : 'p';
        out += std::to_string(f.site);
    }
    return out;
}

PartKind parity_part(const MomentSpec &spec) {
    return spec.count(Quadrature::Momentum) % 2 == 0 ? PartKind::Real : PartKind::Imaginary;
}

std::vector<IndexPair> complementary_pairs(const std::vector<int> &sites, bool strict) {
    const int n = static_cast<int>(sites.size());
    std::vector<IndexPair> out;
    for (const auto &positions : subsets_up_to(n, n)) {
        const int r = static_cast<int>(positions.size());
        const int s = n - r;
        if (r < s || (strict && r == s)) {
            continue;
        }
        if (r == s && (positions.empty() || positions.indices()[0] != 1)) {
            continue;
        }
        std::vector<int> i;
        std::vector<int> j;
        for (int k = 1; k <= n; k++) {
            (positions.contains(k) ? i : j).push_back(sites[k - 1]);
        }
        out.push_back({IndexSubset(std::move(i)), IndexSubset(std::move(j))});
    }
    return out;
}

namespace formulas {

double q_single(Complex a1, double g) {
    return g * a1.real();
}

double q_single_general(Complex a1, double g, const PointerMoments &m) {
    return m.mu + g * (a1.real() + a1.imag() * m.y);
}

double p_single(Complex a1, double g, double v) {
    return 2 * g * v * a1.imag();
}

double qq(Complex a21, Complex a1, Complex a2, double g) {
    return g * g / 2 * (a21 + a1 * std::conj(a2)).real();
}

double qqq(Complex a321, Complex a21, Complex a31, Complex a32, Complex a1, Complex a2, Complex a3, double g) {
    Complex sum = a321 + a21 * std::conj(a3) + a31 * std::conj(a2) + a32 * std::conj(a1);
    return g * g * g / 4 * sum.real();
}

double pp(Complex a21, Complex a1, Complex a2, double g, double v) {
    double gv = g * v;
    return 2 * gv * gv * (-a21 + a1 * std::conj(a2)).real();
}

double qp(Complex a21, Complex a1, Complex a2, double g, double v) {
    return g * g * v * (a21 + std::conj(a1) * a2).imag();
}

double pq(Complex a21, Complex a1, Complex a2, double g, double v) {
    return g * g * v * (a21 + a1 * std::conj(a2)).imag();
}

double q_product(const std::vector<int> &sites, const WeakValueLookup &wv, double g) {
    const int n = static_cast<int>(sites.size());
    Complex sum = 0;
    for (const auto &pair : complementary_pairs(sites, false)) {
        sum += wv(pair.i) * std::conj(wv(pair.j));
    }
    return std::pow(g, n) / std::pow(2.0, n - 1) * sum.real();
}

double p_product(const std::vector<int> &sites, const WeakValueLookup &wv, double g, double v) {
    const int n = static_cast<int>(sites.size());
    const int m = n / 2;
    const bool even = n % 2 == 0;
    Complex sum = 0;
    for (const auto &pair : complementary_pairs(sites, !even)) {
        double sign = pair.i.size() % 2 == 0 ? 1.0 : -1.0;
        sum += sign * wv(pair.i) * std::conj(wv(pair.j));
    }
    double prefactor = 2 * std::pow(g * v, n);
    if (even) {
        return (m % 2 == 0 ? 1 : -1) * prefactor * sum.real();
    }
    return ((m + 1) % 2 == 0 ? 1 : -1) * prefactor * sum.imag();
}

}  // namespace formulas

double predict_moment(const Circuit &c, const MomentSpec &spec, double g, const PointerProfile &prof) {
    if (!(g >= 0) || !std::isfinite(g)) {
        throw Error(ErrorCode::InvalidArgument, "coupling g must be a non-negative finite number");
    }
    for (int site : spec.sites()) {
        if (site > c.num_sites()) {
            throw Error(ErrorCode::InvalidArgument, "moment " + spec.str() + " refers to site " +
                                                        std::to_string(site) + " but the circuit has " +
                                                        std::to_string(c.num_sites()));
        }
    }
    const auto sites = spec.sites();
    WeakValueLookup wv = [&](const IndexSubset &s) {
        return weak_value(c, s);
    };
    auto a = [&](std::initializer_list<int> positions) {
        std::vector<int> chosen;
        for (int p : positions) {
            chosen.push_back(sites[p - 1]);
        }
        return wv(IndexSubset(std::move(chosen)));
    };

    const bool assumption_a = prof.satisfies_assumption_a();
    const size_t k = spec.size();

    if (k == 1 && spec.all(Quadrature::Position)) {
        if (assumption_a) {
            return formulas::q_single(a({1}), g);
        }
        return formulas::q_single_general(a({1}), g, moments(prof));
    }
    if (!assumption_a) {
        if (k == 1) {
            throw Error(ErrorCode::AssumptionAViolated,
                        "the momentum-mean formula requires a real, zero-mean pointer profile");
        }
        throw Error(ErrorCode::UnsupportedCombination,
                    "no closed form for " + spec.str() + " with a pointer profile outside Assumption A; use the exact "
                                                         "simulation");
    }
    const double v = moments(prof).v;

    if (spec.all(Quadrature::Position)) {
        if (k == 2) {
            return formulas::qq(a({1, 2}), a({1}), a({2}), g);
        }
        if (k == 3) {
            return formulas::qqq(a({1, 2, 3}), a({1, 2}), a({1, 3}), a({2, 3}), a({1}), a({2}), a({3}), g);
        }
        return formulas::q_product(sites, wv, g);
    }
    if (spec.all(Quadrature::Momentum)) {
        if (k == 1) {
            return formulas::p_single(a({1}), g, v);
        }
        if (k == 2) {
            return formulas::pp(a({1, 2}), a({1}), a({2}), g, v);
        }
        return formulas::p_product(sites, wv, g, v);
    }
    if (k == 2) {
        if (spec.factors()[0].kind == Quadrature::Position) {
            return formulas::qp(a({1, 2}), a({1}), a({2}), g, v);
        }
        return formulas::pq(a({1, 2}), a({1}), a({2}), g, v);
    }
    throw Error(ErrorCode::UnsupportedCombination,
                "no closed form for the mixed product " + spec.str() + "; use the exact simulation instead");
}

}  // namespace wseq
