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

#ifndef WSEQ_POINTER_H
#define WSEQ_POINTER_H

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wseq/circuit.h"
#include "wseq/profile.h"

namespace wseq {

/// Pointer-profile moments: mu = <q>, nu = <p>, v = Var(p), y = <pq + qp> - 2 mu nu.
struct PointerMoments {
    double mu = 0;
    double nu = 0;
    double v = 0;
    double y = 0;
};

/// Closed forms for Gaussians; DFT quadrature for tabulated profiles.
/// Throws Error(GridTooCoarse) when the tabulated self-estimate (full grid vs every
/// other point) disagrees by more than 1e-7.
PointerMoments moments(const PointerProfile &prof);

enum class Quadrature { Position, Momentum };

/// Ordered product of pointer readouts, e.g. q1*p2. Sites strictly increasing, nonempty.
class MomentSpec {
   public:
    struct Factor {
        int site;
        Quadrature kind;
        bool operator==(const Factor &) const = default;
    };

    explicit MomentSpec(std::vector<Factor> factors);
    /// Parses "q1*q2", "p1*p2*p3", "q1*p2". Throws Error(InvalidArgument) on bad syntax.
    static MomentSpec parse(std::string_view text);

    const std::vector<Factor> &factors() const {
        return factors_;
    }
    size_t size() const {
        return factors_.size();
    }
    int count(Quadrature kind) const;
    bool all(Quadrature kind) const {
        return count(kind) == static_cast<int>(size());
    }
    /// Kind of the factor at `site`, or nullptr if the site is not read out.
    const Quadrature *at_site(int site) const;
    std::vector<int> sites() const;
    std::string str() const;

    bool operator==(const MomentSpec &) const = default;

   private:
    std::vector<Factor> factors_;
};

enum class PartKind { Real, Imaginary };

/// Real part for an even number of momentum factors, imaginary part for odd.
PartKind parity_part(const MomentSpec &spec);

/// Leading-order prediction of <r_1 ... r_k> for weakly coupled von Neumann pointers.
///
/// Dispatch: single q uses the general-profile form mu + g (Re A_w + y Im A_w);
/// all-q products use the closed forms for two and three factors and the
/// index-pair expansion otherwise; all-p products use the single, pair and
/// even/odd expansions; two-factor mixed products use their closed form.
/// Every form except single-q requires Assumption A (Error(AssumptionAViolated)
/// for single factors, Error(UnsupportedCombination) for products). Mixed
/// products of more than two factors throw Error(UnsupportedCombination).
double predict_moment(const Circuit &c, const MomentSpec &spec, double g, const PointerProfile &prof);

/// Ordered pair (i, j) of complementary index sets as used by the product expansions.
struct IndexPair {
    IndexSubset i;
    IndexSubset j;
};

/// Pairs (i, j) partitioning `sites` with |i| >= |j|; when |i| == |j| the first site must lie in i.
/// `strict` keeps only |i| > |j|. Deterministic order: i enumerated lexicographically as a subset of `sites`.
std::vector<IndexPair> complementary_pairs(const std::vector<int> &sites, bool strict);

using WeakValueLookup = std::function<Complex(const IndexSubset &)>;

/// Individual prediction formulas, over weak values supplied by `wv`; sites are 1..k of the spec order.
namespace formulas {
double q_single(Complex a1, double g);
double q_single_general(Complex a1, double g, const PointerMoments &m);
double p_single(Complex a1, double g, double v);
double qq(Complex a21, Complex a1, Complex a2, double g);
double qqq(Complex a321, Complex a21, Complex a31, Complex a32, Complex a1, Complex a2, Complex a3, double g);
double pp(Complex a21, Complex a1, Complex a2, double g, double v);
double qp(Complex a21, Complex a1, Complex a2, double g, double v);
double pq(Complex a21, Complex a1, Complex a2, double g, double v);
/// General all-q product over the sites listed, using the index-pair expansion.
double q_product(const std::vector<int> &sites, const WeakValueLookup &wv, double g);
/// General all-p product (even and odd cases).
double p_product(const std::vector<int> &sites, const WeakValueLookup &wv, double g, double v);
}  // namespace formulas

}  // namespace wseq

#endif
