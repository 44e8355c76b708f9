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

// Command-line front end: weak-value tables, exact vs predicted pointer moments,
// Monte Carlo runs, counterfactuality checks and the built-in demo.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "report.h"
#include "wseq/circuit_io.h"
#include "wseq/counterfactual.h"
#include "wseq/errors.h"
#include "wseq/montecarlo.h"
#include "wseq/oracle.h"
#include "wseq/pointer.h"
#include "wseq/weak_value.h"

namespace {

using namespace wseq;
using cli::Report;

constexpr double kDefaultG = 1e-3;

struct Loaded {
    CircuitDocument doc;
    Circuit circuit;
    std::vector<std::string> site_names;
    std::string dir;
};

Loaded load(const std::string &path) {
    CircuitDocument doc = load_document(path);
    Circuit c = to_circuit(doc);
    std::vector<std::string> names;
    for (int k = 1; k <= c.num_sites(); k++) {
        names.push_back("I" + std::to_string(k));
    }
    auto sites = observe_sites(doc);
    size_t next = 0;
    for (const auto &st : doc.stanzas) {
        if (st.kind == Stanza::Kind::Observe) {
            names[sites[next++] - 1] = st.name;
        }
    }
    std::string dir = std::filesystem::path(path).parent_path().string();
    return {std::move(doc), std::move(c), std::move(names), dir.empty() ? "." : dir};
}

/// "(F,B)": observable names in reverse time order, matching the operator product.
std::string subset_label(const IndexSubset &s, const std::vector<std::string> &names) {
    std::string out = "(";
    const auto &idx = s.indices();
    for (size_t k = idx.size(); k-- > 0;) {
        out += names[idx[k] - 1];
        out += k ? "," : "";
    }
    return out + ")";
}

double resolve_g(double flag, const CircuitDocument &doc) {
    if (!std::isnan(flag)) {
        return flag;
    }
    return doc.g.value_or(kDefaultG);
}

std::string echo(const std::vector<std::string> &parts) {
    std::string s;
    for (const auto &p : parts) {
        s += (s.empty() ? "" : " ") + p;
    }
    return s;
}

void add_weak_values(Report &rep, const Circuit &c, int max_order, const std::vector<std::string> &names) {
    WeakValueTable table = weak_value_table(c, max_order);
    for (const auto &[subset, wv] : table.entries) {
        std::string label = subset_label(subset, names);
        rep.add(label, wv);
        if (std::abs(wv) > kLargeWeakValue) {
            rep.warn("weak value " + label + " has modulus above 1e6 (nearly orthogonal post-selection)");
        }
    }
}

int cmd_weakvalues(const std::string &file, int max_order, bool machine) {
    Loaded in = load(file);
    if (max_order < 0) {
        max_order = in.circuit.num_sites();
    }
    Report rep(echo({"weakvalues", file, "--max-order", std::to_string(max_order)}), in.circuit.fingerprint());
    add_weak_values(rep, in.circuit, std::min(max_order, in.circuit.num_sites()), in.site_names);
    rep.print(std::cout, machine);
    return 0;
}

int cmd_simulate(const std::string &file, double g_flag, const std::string &moment, bool compare, bool machine) {
    Loaded in = load(file);
    const double g = resolve_g(g_flag, in.doc);
    MomentSpec spec = MomentSpec::parse(moment);
    PointerProfile prof = load_pointer(in.doc, in.dir);
    // Resolve the prediction first so an unsupported combination fails before any output.
    double prediction = compare ? predict_moment(in.circuit, spec, g, prof) : 0;
    ExactMoment exact = exact_moment(in.circuit, spec, g, prof);

    Report rep(echo({"simulate", file, "--g", cli::format_number(g), "--moment", spec.str(),
                     compare ? "--compare" : ""}),
               in.circuit.fingerprint());
    rep.add("moment", spec.str());
    rep.add("g", g);
    rep.add("exact", exact.value);
    rep.add("postselect_prob", exact.postselect_prob);
    if (compare) {
        double abs_err = std::abs(exact.value - prediction);
        double scale = std::max(std::abs(prediction), std::pow(g, static_cast<double>(spec.size() + 1)));
        rep.add("prediction", prediction);
        rep.add("abs_discrepancy", abs_err);
        rep.add("rel_discrepancy", abs_err == 0 ? 0.0 : abs_err / scale);
    }
    rep.print(std::cout, machine);
    return 0;
}

int cmd_montecarlo(const std::string &file, double g_flag, int64_t runs, uint64_t seed, const std::string &moment,
                   bool machine) {
    if (runs < 1) {
        throw CLI::ValidationError("--runs", "must be at least 1");
    }
    Loaded in = load(file);
    const double g = resolve_g(g_flag, in.doc);
    std::string m = moment;
    if (m.empty()) {
        m = in.circuit.num_sites() >= 2 ? "q1*q2" : "q1";
    }
    MomentSpec spec = MomentSpec::parse(m);
    PointerProfile prof = load_pointer(in.doc, in.dir);
    auto records = sample_runs(in.circuit, g, prof, runs, seed);
    Estimate est = estimate_moment(records, spec);
    Estimate freq = postselect_frequency(records);
    ExactMoment exact = exact_moment(in.circuit, spec, g, prof);

    Report rep(echo({"montecarlo", file, "--g", cli::format_number(g), "--runs", std::to_string(runs), "--seed",
                     std::to_string(seed), "--moment", spec.str()}),
               in.circuit.fingerprint());
    rep.add("moment", spec.str());
    rep.add("mean", est.mean);
    rep.add("stderr", est.stderr_);
    rep.add("n_success", std::to_string(est.n_success));
    rep.add("n_total", std::to_string(est.n_total));
    rep.add("oracle_exact", exact.value);
    rep.add("z_score", est.stderr_ > 0 ? (est.mean - exact.value) / est.stderr_ : 0.0);
    rep.add("postselect_freq", freq.mean);
    rep.add("postselect_prob", exact.postselect_prob);
    rep.add("postselect_z", freq.stderr_ > 0 ? (freq.mean - exact.postselect_prob) / freq.stderr_ : 0.0);
    rep.print(std::cout, machine);
    return 0;
}

std::string verdict(bool holds) {
    return holds ? "counterfactual" : "NOT counterfactual";
}

int cmd_counterfactual(const std::string &file, int trials, double g_flag, uint64_t seed, bool machine) {
    if (trials < 1) {
        throw CLI::ValidationError("--trials", "must be at least 1");
    }
    Loaded in = load(file);
    InsertionSet ins = insertion_set(in.doc);
    if (ins.size() == 0) {
        throw Error(ErrorCode::InvalidArgument, "file has no `insert` lines");
    }
    const double g = resolve_g(g_flag, in.doc);
    bool agree = check_equivalence_def1_def2(in.circuit, ins);
    CounterfactualReport cr = randomized_def3_test(in.circuit, ins, trials, g, seed);

    Report rep(echo({"counterfactual", file, "--trials", std::to_string(trials), "--g", cli::format_number(g),
                     "--seed", std::to_string(seed)}),
               in.circuit.fingerprint());
    rep.add("def1", verdict(cr.def1_holds));
    if (cr.histories.witness) {
        rep.add("def1.witness", cr.histories.witness->str());
        rep.add("def1.amplitude", cr.histories.amplitude);
    }
    rep.add("def2", verdict(cr.def2_holds));
    if (cr.weak_values.witness) {
        rep.add("def2.witness", subset_label(*cr.weak_values.witness, in.site_names));
        rep.add("def2.weak_value", cr.weak_values.weak_value);
    }
    rep.add("equivalence", std::string(agree == cr.def1_holds ? "verified" : "VIOLATED"));
    double max_resp = 0;
    for (const auto &s : cr.def3_samples) {
        max_resp = std::max(max_resp, s.response);
    }
    rep.add("def3", cr.def3_null ? std::string("null result") : std::string("response detected"));
    rep.add("def3.probes", std::to_string(cr.def3_samples.size()));
    rep.add("def3.max_response", max_resp);
    rep.add("def3.tol", cr.tol3);
    rep.add("def3.detection_threshold", cr.detection_threshold);
    rep.add("def3.consistent", std::string(cr.def3_consistent ? "yes" : "no"));
    if (!cr.def3_consistent) {
        rep.warn("randomized probes disagree with the weak-value verdict at this g and trial count");
    }
    rep.print(std::cout, machine);
    return 0;
}

int cmd_demo(const std::string &name, bool machine) {
    if (name != "double-interferometer") {
        throw CLI::ValidationError("demo", "unknown demo '" + name + "' (available: double-interferometer)");
    }
    Circuit base = builtin_double_interferometer();
    const int b_idx[] = {0};
    const int c_idx[] = {1};
    const COperator pb = basis_projector(2, b_idx);
    const COperator pc = basis_projector(2, c_idx);
    // Site 1 observes B or C, site 2 observes E or F; E and B share index 0.
    auto wv = [&](const COperator &first, const COperator &second, const IndexSubset &s) {
        return weak_value(double_interferometer_with(first, second), s);
    };
    Report rep(echo({"demo", name}), base.fingerprint());
    rep.add("F", transition_amplitude(base));
    rep.add("C_w", wv(pc, pb, {1}));
    rep.add("B_w", wv(pb, pb, {1}));
    rep.add("E_w", wv(pb, pb, {2}));
    rep.add("F_w", wv(pb, pc, {2}));
    Complex eb = wv(pb, pb, {1, 2});
    Complex fb = wv(pb, pc, {1, 2});
    Complex ec = wv(pc, pb, {1, 2});
    Complex fc = wv(pc, pc, {1, 2});
    rep.add("(E,B)_w", eb);
    rep.add("(F,B)_w", fb);
    rep.add("(E,C)_w", ec);
    rep.add("(F,C)_w", fc);
    // Weak path occupations per successful run.
    rep.add("N_E/N", wv(pb, pb, {2}).real());
    rep.add("N_C/N", wv(pc, pb, {1}).real());
    rep.add("N_CE/N", ec.real());
    rep.add("N_BF/N", fb.real());
    rep.add("N_BE/N", eb.real());
    rep.add("N_CF/N", fc.real());
    rep.add("sum_paths", (eb + fb + ec + fc).real());
    rep.print(std::cout, machine);
    return 0;
}

int exit_code_for(const Error &e) {
    switch (e.code()) {
        case ErrorCode::DegeneratePostSelection:
            return 3;
        case ErrorCode::UnsupportedCombination:
            return 4;
        default:
            return 2;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"wseq: sequential weak values, pointer simulation and counterfactuality checks"};
    app.require_subcommand(1);
    bool machine = false;
    app.add_flag("--machine", machine, "tab-separated key/value output");

    std::string file;
    int max_order = -1;
    auto *wv = app.add_subcommand("weakvalues", "table of sequential weak values");
    wv->add_option("file", file, ".wseq circuit")->required();
    wv->add_option("--max-order", max_order, "largest subset size (default: all sites)");
    wv->add_flag("--machine", machine, "tab-separated key/value output");

    double g = std::numeric_limits<double>::quiet_NaN();
    std::string moment;
    bool compare = false;
    auto *sim = app.add_subcommand("simulate", "exact pointer moment, optionally against the weak-value prediction");
    sim->add_option("file", file, ".wseq circuit")->required();
    sim->add_option("--g", g, "coupling (default: file's g, else 1e-3)")->check(CLI::NonNegativeNumber);
    sim->add_option("--moment", moment, "readout product such as q1*q2 or q1*p2")->required();
    sim->add_flag("--compare", compare, "also print the perturbative prediction");
    sim->add_flag("--machine", machine, "tab-separated key/value output");

    int64_t runs = 100000;
    uint64_t seed = 0;
    auto *mc = app.add_subcommand("montecarlo", "simulate post-selected runs with pointer readouts");
    mc->add_option("file", file, ".wseq circuit")->required();
    mc->add_option("--g", g, "coupling (default: file's g, else 1e-3)")->check(CLI::NonNegativeNumber);
    mc->add_option("--runs", runs, "number of runs (default 100000)");
    mc->add_option("--seed", seed, "RNG seed")->required();
    mc->add_option("--moment", moment, "position product (default q1*q2, or q1 for one site)");
    mc->add_flag("--machine", machine, "tab-separated key/value output");

    int trials = 20;
    auto *cf = app.add_subcommand("counterfactual", "check counterfactuality of the file's insert set");
    cf->add_option("file", file, ".wseq circuit")->required();
    cf->add_option("--trials", trials, "random probe trials (default 20)");
    cf->add_option("--g", g, "probe coupling (default: file's g, else 1e-3)")->check(CLI::NonNegativeNumber);
    cf->add_option("--seed", seed, "RNG seed for probe operators")->required();
    cf->add_flag("--machine", machine, "tab-separated key/value output");

    std::string demo_name;
    auto *demo = app.add_subcommand("demo", "built-in example");
    demo->add_option("name", demo_name, "double-interferometer")->required();
    demo->add_flag("--machine", machine, "tab-separated key/value output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*wv) {
            return cmd_weakvalues(file, max_order, machine);
        }
        if (*sim) {
            return cmd_simulate(file, g, moment, compare, machine);
        }
        if (*mc) {
            return cmd_montecarlo(file, g, runs, seed, moment, machine);
        }
        if (*cf) {
            return cmd_counterfactual(file, trials, g, seed, machine);
        }
        return cmd_demo(demo_name, machine);
    } catch (const CLI::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError &e) {
        std::cerr << file << ":" << e.what() << "\n";
        return exit_code_for(e);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == ErrorCode::UnsupportedCombination) {
            std::cerr << "hint: no closed-form prediction exists for this readout; drop --compare\n";
        }
        return exit_code_for(e);
    }
}
