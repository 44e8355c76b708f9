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

#include "wseq/circuit_io.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wseq/errors.h"

namespace wseq {

namespace {

struct Line {
    size_t number;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(ErrorCode code, size_t line, const std::string &token, const std::string &msg) {
    throw ParseError(code, line, token, msg);
}

std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    size_t number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        number++;
        std::string_view raw = text.substr(pos, end - pos);
        if (size_t hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        std::vector<std::string> tokens;
        size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) {
                i++;
            }
            size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) {
                i++;
            }
            if (i > start) {
                tokens.emplace_back(raw.substr(start, i - start));
            }
        }
        if (!tokens.empty()) {
            out.push_back({number, std::move(tokens)});
        }
        if (end == text.size()) {
            break;
        }
        pos = end + 1;
    }
    return out;
}

std::optional<double> parse_real(std::string_view s) {
    if (s.size() > 1 && s[0] == '+' && s[1] != '+' && s[1] != '-') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

bool same_matrix(const COperator &a, const COperator &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool same_vector(const CVector &a, const CVector &b) {
    return a.size() == b.size() && a == b;
}

/// Stage layout implied by the stanza order. site_of[k] is the site of stanza k (0 for unitaries).
struct Layout {
    std::vector<Stage> stages;
    COperator u_final;
    std::vector<int> site_of;
};

Layout layout(const CircuitDocument &doc) {
    Layout out;
    const COperator id = identity(doc.dim);
    std::optional<COperator> pending;
    for (const auto &st : doc.stanzas) {
        if (st.kind == Stanza::Kind::Unitary) {
            if (pending) {
                out.stages.push_back({*pending, id});
            }
            pending = st.matrix;
            out.site_of.push_back(0);
        } else {
            out.stages.push_back({pending.value_or(id), st.matrix});
            pending.reset();
            out.site_of.push_back(static_cast<int>(out.stages.size()));
        }
    }
    out.u_final = pending.value_or(id);
    return out;
}

class Parser {
   public:
    explicit Parser(std::string_view text) : lines_(content_lines(text)) {
    }

    CircuitDocument run() {
        std::map<std::string, size_t> insert_lines;
        bool have_state = false;
        bool have_post = false;
        for (pos_ = 0; pos_ < lines_.size();) {
            const Line &line = lines_[pos_++];
            const std::string &dir = line.tokens[0];
            if (dir == "wseq") {
                if (pos_ != 1 || line.tokens.size() != 2 || line.tokens[1] != "1") {
                    fail(ErrorCode::SyntaxError, line.number, line.tokens.back(),
                         "`wseq 1` must be the first line when present");
                }
            } else if (dir == "dim") {
                if (doc_.dim != 0) {
                    fail(ErrorCode::SyntaxError, line.number, dir, "dim given twice");
                }
                expect_args(line, 1);
                auto d = parse_int(line.tokens[1]);
                if (!d || *d < 1) {
                    fail(ErrorCode::SyntaxError, line.number, line.tokens[1], "dim must be a positive integer");
                }
                doc_.dim = *d;
            } else if (dir == "labels") {
                need_dim(line);
                check_count(line, 1);
                doc_.labels = std::vector<std::string>(line.tokens.begin() + 1, line.tokens.end());
            } else if (dir == "state") {
                need_dim(line);
                doc_.psi_i = read_vector(line);
                if (std::abs(doc_.psi_i.norm() - 1) > 1e-10) {
                    fail(ErrorCode::NotNormalized, line.number, dir,
                         "initial state has norm " + format_real(doc_.psi_i.norm()));
                }
                have_state = true;
            } else if (dir == "postselect") {
                need_dim(line);
                doc_.psi_f = read_vector(line);
                if (doc_.psi_f.norm() == 0) {
                    fail(ErrorCode::InvalidArgument, line.number, dir, "post-selected state is zero");
                }
                have_post = true;
            } else if (dir == "unitary") {
                need_dim(line);
                expect_args(line, 1);
                Stanza st;
                st.kind = Stanza::Kind::Unitary;
                st.name = claim_name(line);
                st.matrix = read_matrix(line);
                double dev = max_abs_entry(st.matrix.adjoint() * st.matrix - identity(doc_.dim));
                if (dev > 1e-9) {
                    fail(ErrorCode::NotUnitary, line.number, st.name,
                         "unitary deviates from unitarity by " + format_real(dev));
                }
                doc_.stanzas.push_back(std::move(st));
            } else if (dir == "observe") {
                need_dim(line);
                expect_args(line, 1);
                if (!doc_.stanzas.empty() && doc_.stanzas.back().kind == Stanza::Kind::Observe) {
                    fail(ErrorCode::DuplicateObserveAtBoundary, line.number, line.tokens[1],
                         "second observable at the same boundary; separate them with a unitary");
                }
                Stanza st;
                st.kind = Stanza::Kind::Observe;
                st.name = claim_name(line);
                read_observable(line, st);
                doc_.stanzas.push_back(std::move(st));
            } else if (dir == "pointer") {
                if (doc_.pointer) {
                    fail(ErrorCode::SyntaxError, line.number, dir, "pointer given twice");
                }
                doc_.pointer = read_pointer(line);
            } else if (dir == "g") {
                expect_args(line, 1);
                auto g = parse_real(line.tokens[1]);
                if (!g || *g < 0) {
                    fail(ErrorCode::SyntaxError, line.number, line.tokens[1], "g must be a non-negative number");
                }
                doc_.g = *g;
            } else if (dir == "insert") {
                expect_args(line, 1);
                const std::string &name = line.tokens[1];
                if (!insert_lines.emplace(name, line.number).second) {
                    fail(ErrorCode::SyntaxError, line.number, name, "observable inserted twice");
                }
                doc_.insertions.push_back(name);
            } else {
                fail(ErrorCode::UnknownDirective, line.number, dir, "unknown directive");
            }
        }

        const size_t eof = lines_.empty() ? 1 : lines_.back().number;
        if (doc_.dim == 0) {
            fail(ErrorCode::SyntaxError, eof, "", "missing `dim`");
        }
        if (!have_state) {
            fail(ErrorCode::SyntaxError, eof, "", "missing `state`");
        }
        if (!have_post) {
            fail(ErrorCode::SyntaxError, eof, "", "missing `postselect`");
        }
        for (const auto &name : doc_.insertions) {
            const Stanza *target = nullptr;
            for (const auto &st : doc_.stanzas) {
                if (st.name == name) {
                    target = &st;
                }
            }
            size_t at = insert_lines[name];
            if (target == nullptr || target->kind != Stanza::Kind::Observe) {
                fail(ErrorCode::UnknownReference, at, name, "insert must name an observe stanza");
            }
            if (!is_projector(target->matrix, 1e-10)) {
                fail(ErrorCode::NotProjector, at, name, "inserted observable is not a projector");
            }
        }
        try {
            (void)to_circuit(doc_);
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            fail(e.code(), eof, "", e.what());
        }
        return std::move(doc_);
    }

   private:
    void need_dim(const Line &line) const {
        if (doc_.dim == 0) {
            fail(ErrorCode::SyntaxError, line.number, line.tokens[0], "`dim` must come before this directive");
        }
    }

    static void expect_args(const Line &line, size_t n) {
        if (line.tokens.size() != n + 1) {
            fail(ErrorCode::SyntaxError, line.number, line.tokens.size() > n + 1 ? line.tokens[n + 1] : line.tokens[0],
                 "`" + line.tokens[0] + "` takes " + std::to_string(n) + " argument(s)");
        }
    }

    /// Entries after `skip` leading tokens must number exactly dim.
    void check_count(const Line &line, size_t skip) const {
        const size_t got = line.tokens.size() - skip;
        if (got != static_cast<size_t>(doc_.dim)) {
            const std::string &tok = got > static_cast<size_t>(doc_.dim) ? line.tokens[skip + doc_.dim] : line.tokens.back();
            fail(ErrorCode::DimMismatch, line.number, tok,
                 "expected " + std::to_string(doc_.dim) + " entries, got " + std::to_string(got));
        }
    }

    Complex entry(const Line &line, size_t k) const {
        auto z = parse_complex(line.tokens[k]);
        if (!z) {
            fail(ErrorCode::BadComplexLiteral, line.number, line.tokens[k], "malformed complex literal");
        }
        return *z;
    }

    CVector read_vector(const Line &line) const {
        check_count(line, 1);
        CVector v(doc_.dim);
        for (int k = 0; k < doc_.dim; k++) {
            v(k) = entry(line, k + 1);
        }
        return v;
    }

    const Line &next_line(const Line &header) {
        if (pos_ >= lines_.size()) {
            fail(ErrorCode::DimMismatch, header.number, header.tokens.back(),
                 "expected " + std::to_string(doc_.dim) + " matrix rows");
        }
        return lines_[pos_++];
    }

    COperator read_matrix(const Line &header) {
        COperator m(doc_.dim, doc_.dim);
        for (int r = 0; r < doc_.dim; r++) {
            const Line &row = next_line(header);
            check_count(row, 0);
            for (int c = 0; c < doc_.dim; c++) {
                m(r, c) = entry(row, c);
            }
        }
        return m;
    }

    void read_observable(const Line &header, Stanza &st) {
        if (pos_ < lines_.size() && lines_[pos_].tokens[0] == "proj") {
            const Line &line = lines_[pos_++];
            std::vector<int> idx;
            for (size_t k = 1; k < line.tokens.size(); k++) {
                auto i = parse_int(line.tokens[k]);
                if (!i || *i < 0 || *i >= doc_.dim) {
                    fail(ErrorCode::DimMismatch, line.number, line.tokens[k],
                         "basis index outside 0.." + std::to_string(doc_.dim - 1));
                }
                if (std::find(idx.begin(), idx.end(), *i) != idx.end()) {
                    fail(ErrorCode::SyntaxError, line.number, line.tokens[k], "basis index repeated");
                }
                idx.push_back(*i);
            }
            st.matrix = basis_projector(doc_.dim, idx);
            st.proj = std::move(idx);
            return;
        }
        st.matrix = read_matrix(header);
        if (!is_hermitian(st.matrix, 1e-9)) {
            fail(ErrorCode::NotHermitian, header.number, st.name,
                 "observable deviates from Hermiticity by " + format_real(max_abs_entry(st.matrix - st.matrix.adjoint())));
        }
    }

    std::string claim_name(const Line &line) {
        const std::string &name = line.tokens[1];
        if (!names_.insert(name).second) {
            fail(ErrorCode::SyntaxError, line.number, name, "name already used");
        }
        return name;
    }

    static PointerSpec read_pointer(const Line &line) {
        if (line.tokens.size() < 2) {
            fail(ErrorCode::SyntaxError, line.number, line.tokens[0], "pointer needs a kind");
        }
        PointerSpec p;
        if (line.tokens[1] == "tabulated") {
            expect_args(line, 2);
            p.kind = PointerSpec::Kind::Tabulated;
            p.file = line.tokens[2];
            return p;
        }
        if (line.tokens[1] != "gaussian") {
            fail(ErrorCode::SyntaxError, line.number, line.tokens[1], "pointer kind must be gaussian or tabulated");
        }
        bool have_sigma = false;
        for (size_t k = 2; k < line.tokens.size(); k++) {
            const std::string &tok = line.tokens[k];
            size_t eq = tok.find('=');
            auto val = eq == std::string::npos ? std::nullopt : parse_real(std::string_view(tok).substr(eq + 1));
            if (!val) {
                fail(ErrorCode::SyntaxError, line.number, tok, "expected key=number");
            }
            std::string key = tok.substr(0, eq);
            if (key == "sigma" && !have_sigma) {
                if (!(*val > 0)) {
                    fail(ErrorCode::SyntaxError, line.number, tok, "sigma must be positive");
                }
                p.sigma = *val;
                have_sigma = true;
            } else if (key == "qoffset" && !p.q_offset) {
                p.q_offset = *val;
            } else if (key == "poffset" && !p.p_offset) {
                p.p_offset = *val;
            } else {
                fail(ErrorCode::SyntaxError, line.number, tok, "unknown or repeated pointer parameter");
            }
        }
        if (!have_sigma) {
            fail(ErrorCode::SyntaxError, line.number, line.tokens[1], "gaussian pointer needs sigma=");
        }
        return p;
    }

    std::vector<Line> lines_;
    size_t pos_ = 0;
    CircuitDocument doc_;
    std::set<std::string> names_;
};

std::string join_row(const auto &row) {
    std::string s;
    for (Eigen::Index k = 0; k < row.size(); k++) {
        s += (k ? " " : "") + format_complex(row(k));
    }
    return s;
}

/// Basis indices when `a` is exactly a sum of basis projectors.
std::optional<std::vector<int>> as_basis_projector(const COperator &a) {
    std::vector<int> idx;
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) {
            Complex z = a(r, c);
            if (r != c && z != Complex(0)) {
                return std::nullopt;
            }
            if (r == c) {
                if (z == Complex(1)) {
                    idx.push_back(static_cast<int>(r));
                } else if (z != Complex(0)) {
                    return std::nullopt;
                }
            }
        }
    }
    return idx;
}

}  // namespace

bool Stanza::operator==(const Stanza &other) const {
    return kind == other.kind && name == other.name && proj == other.proj && same_matrix(matrix, other.matrix);
}

bool CircuitDocument::operator==(const CircuitDocument &other) const {
    return dim == other.dim && labels == other.labels && same_vector(psi_i, other.psi_i) &&
           same_vector(psi_f, other.psi_f) && stanzas == other.stanzas && pointer == other.pointer &&
           insertions == other.insertions && g == other.g;
}

std::optional<Complex> parse_complex(std::string_view token) {
    if (token.empty()) {
        return std::nullopt;
    }
    if (token.back() != 'i') {
        auto re = parse_real(token);
        return re ? std::optional<Complex>(Complex(*re, 0)) : std::nullopt;
    }
    std::string_view body = token.substr(0, token.size() - 1);
    for (size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            auto re = parse_real(body.substr(0, k));
            auto im = parse_real(body.substr(k));
            if (!re || !im) {
                return std::nullopt;
            }
            return Complex(*re, *im);
        }
    }
    return std::nullopt;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex z) {
    return format_real(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_real(std::abs(z.imag())) + "i";
}

CircuitDocument parse(std::string_view text) {
    return Parser(text).run();
}

CircuitDocument load_document(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string serialize(const CircuitDocument &doc) {
    std::string out = "wseq 1\n";
    out += "dim " + std::to_string(doc.dim) + "\n";
    if (doc.labels) {
        out += "labels";
        for (const auto &l : *doc.labels) {
            out += " " + l;
        }
        out += "\n";
    }
    out += "state " + join_row(doc.psi_i) + "\n";
    for (const auto &st : doc.stanzas) {
        out += (st.kind == Stanza::Kind::Unitary ? "unitary " : "observe ") + st.name + "\n";
        if (st.proj) {
            out += "proj";
            for (int i : *st.proj) {
                out += " " + std::to_string(i);
            }
            out += "\n";
        } else {
            for (Eigen::Index r = 0; r < st.matrix.rows(); r++) {
                out += join_row(st.matrix.row(r)) + "\n";
            }
        }
    }
    out += "postselect " + join_row(doc.psi_f) + "\n";
    if (doc.pointer) {
        const auto &p = *doc.pointer;
        if (p.kind == PointerSpec::Kind::Tabulated) {
            out += "pointer tabulated " + p.file + "\n";
        } else {
            out += "pointer gaussian sigma=" + format_real(p.sigma);
            if (p.q_offset) {
                out += " qoffset=" + format_real(*p.q_offset);
            }
            if (p.p_offset) {
                out += " poffset=" + format_real(*p.p_offset);
            }
            out += "\n";
        }
    }
    if (doc.g) {
        out += "g " + format_real(*doc.g) + "\n";
    }
    for (const auto &name : doc.insertions) {
        out += "insert " + name + "\n";
    }
    return out;
}

Circuit to_circuit(const CircuitDocument &doc) {
    Layout l = layout(doc);
    return Circuit(doc.psi_i, std::move(l.stages), l.u_final, doc.psi_f, doc.labels.value_or(std::vector<std::string>{}));
}

CircuitDocument document_from_circuit(const Circuit &c, const std::vector<std::string> &observable_names) {
    CircuitDocument doc;
    doc.dim = c.dim();
    if (!c.labels().empty()) {
        doc.labels = c.labels();
    }
    doc.psi_i = c.psi_i();
    doc.psi_f = c.psi_f();
    const COperator id = identity(c.dim());
    for (int k = 1; k <= c.num_sites(); k++) {
        Stanza u;
        u.kind = Stanza::Kind::Unitary;
        u.name = "U" + std::to_string(k);
        u.matrix = c.unitary(k);
        doc.stanzas.push_back(std::move(u));
        if (c.observable(k) == id) {
            continue;
        }
        Stanza a;
        a.kind = Stanza::Kind::Observe;
        a.name = static_cast<size_t>(k) <= observable_names.size() ? observable_names[k - 1] : "A" + std::to_string(k);
        a.matrix = c.observable(k);
        a.proj = as_basis_projector(a.matrix);
        doc.stanzas.push_back(std::move(a));
    }
    Stanza last;
    last.kind = Stanza::Kind::Unitary;
    last.name = "U" + std::to_string(c.num_sites() + 1);
    last.matrix = c.u_final();
    doc.stanzas.push_back(std::move(last));
    return doc;
}

std::vector<int> observe_sites(const CircuitDocument &doc) {
    std::vector<int> sites;
    for (int s : layout(doc).site_of) {
        if (s > 0) {
            sites.push_back(s);
        }
    }
    return sites;
}

InsertionSet insertion_set(const CircuitDocument &doc) {
    Layout l = layout(doc);
    std::vector<std::pair<int, COperator>> picked;
    for (const auto &name : doc.insertions) {
        bool found = false;
        for (size_t k = 0; k < doc.stanzas.size(); k++) {
            if (doc.stanzas[k].name == name && doc.stanzas[k].kind == Stanza::Kind::Observe) {
                picked.emplace_back(l.site_of[k], doc.stanzas[k].matrix);
                found = true;
            }
        }
        if (!found) {
            throw Error(ErrorCode::UnknownReference, "insert names unknown observable " + name);
        }
    }
    std::sort(picked.begin(), picked.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    InsertionSet ins;
    for (auto &[site, proj] : picked) {
        ins.sites.push_back(site);
        ins.on_projectors.push_back(std::move(proj));
    }
    return ins;
}

PointerProfile load_pointer(const CircuitDocument &doc, const std::string &base_dir) {
    if (!doc.pointer) {
        return PointerProfile::gaussian(1.0);
    }
    const auto &p = *doc.pointer;
    if (p.kind == PointerSpec::Kind::Gaussian) {
        return PointerProfile::gaussian(p.sigma, p.q_offset.value_or(0), p.p_offset.value_or(0));
    }
    std::filesystem::path path(p.file);
    if (path.is_relative()) {
        path = std::filesystem::path(base_dir) / path;
    }
    return load_tabulated_profile(path.string());
}

PointerProfile load_tabulated_profile(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot read pointer table " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::vector<double> q;
    std::vector<Complex> values;
    for (const auto &line : content_lines(ss.str())) {
        if (line.tokens.size() != 3) {
            fail(ErrorCode::SyntaxError, line.number, line.tokens.back(), "pointer rows are `q re im`");
        }
        std::array<double, 3> v{};
        for (size_t k = 0; k < 3; k++) {
            auto x = parse_real(line.tokens[k]);
            if (!x) {
                fail(ErrorCode::SyntaxError, line.number, line.tokens[k], "not a number");
            }
            v[k] = *x;
        }
        if (!q.empty()) {
            double step = q.size() > 1 ? q[1] - q[0] : v[0] - q[0];
            double expected = q[0] + step * static_cast<double>(q.size());
            if (!(step > 0) || std::abs(v[0] - expected) > 1e-9 * std::max(1.0, std::abs(step) * q.size())) {
                fail(ErrorCode::SyntaxError, line.number, line.tokens[0], "pointer grid must be uniform and increasing");
            }
        }
        q.push_back(v[0]);
        values.emplace_back(v[1], v[2]);
    }
    if (q.size() < 2) {
        throw Error(ErrorCode::GridResolutionError, "pointer table " + path + " has too few rows");
    }
    double step = (q.back() - q.front()) / static_cast<double>(q.size() - 1);
    return PointerProfile::tabulated(q.front(), step, std::move(values));
}

}  // namespace wseq
