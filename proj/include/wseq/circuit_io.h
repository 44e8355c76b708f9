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

#ifndef WSEQ_CIRCUIT_IO_H
#define WSEQ_CIRCUIT_IO_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wseq/circuit.h"
#include "wseq/counterfactual.h"
#include "wseq/profile.h"

namespace wseq {

/// A `unitary` or `observe` entry, kept as written so serialization reproduces it.
struct Stanza {
    enum class Kind { Unitary, Observe };
    Kind kind = Kind::Unitary;
    std::string name;
    COperator matrix;
    /// Basis indices when an observable was given with the `proj` shorthand.
    std::optional<std::vector<int>> proj;

    bool operator==(const Stanza &other) const;
};

struct PointerSpec {
    enum class Kind { Gaussian, Tabulated };
    Kind kind = Kind::Gaussian;
    double sigma = 1;
    std::optional<double> q_offset;
    std::optional<double> p_offset;
    /// Path of a two-column-complex table (`q re im` per row) for tabulated profiles.
    std::string file;

    bool operator==(const PointerSpec &) const = default;
};

/// Text form of a circuit plus pointer configuration and insertion marks.
///
/// Stage rule: each `observe` attaches to the boundary after the preceding `unitary`
/// (an `observe` with no `unitary` before it gets an identity evolution); two
/// `unitary` stanzas in a row leave an unmeasured boundary between them; a trailing
/// `unitary` is the final evolution before post-selection.
struct CircuitDocument {
    int dim = 0;
    std::optional<std::vector<std::string>> labels;
    CVector psi_i;
    CVector psi_f;
    std::vector<Stanza> stanzas;
    std::optional<PointerSpec> pointer;
    /// Names of `observe` stanzas marked with `insert`, in file order.
    std::vector<std::string> insertions;
    std::optional<double> g;

    bool operator==(const CircuitDocument &other) const;
};

/// Parses the line-oriented format. Validates circuit invariants on load.
/// Throws ParseError carrying the 1-based line number and the offending token.
CircuitDocument parse(std::string_view text);
CircuitDocument load_document(const std::string &path);

/// Canonical text: leading `wseq 1`, 17 significant digits, optional fields omitted when unset.
std::string serialize(const CircuitDocument &doc);

Circuit to_circuit(const CircuitDocument &doc);
/// Document for an existing circuit; observables that are sums of basis projectors use `proj`.
CircuitDocument document_from_circuit(const Circuit &c, const std::vector<std::string> &observable_names = {});

/// Site number of each observe stanza, in stanza order.
std::vector<int> observe_sites(const CircuitDocument &doc);
/// Insertion set built from the `insert` marks (on-projector = the named observable).
InsertionSet insertion_set(const CircuitDocument &doc);
/// Pointer profile (Gaussian sigma 1 when unset). Relative table paths resolve against `base_dir`.
PointerProfile load_pointer(const CircuitDocument &doc, const std::string &base_dir = ".");
/// Reads `q re im` rows with uniform spacing.
PointerProfile load_tabulated_profile(const std::string &path);

/// Parses one complex literal: `<float>` or `<float>(+|-)<float>i`.
std::optional<Complex> parse_complex(std::string_view token);
/// `%.17g` rendering as `re+imi` / `re-imi`.
std::string format_complex(Complex z);
std::string format_real(double x);

}  // namespace wseq

#endif
