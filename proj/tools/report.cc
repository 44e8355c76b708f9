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

#include "report.h"

#include <cstdio>

namespace wseq::cli {

std::string format_number(double x) {
    char buf[40];
    // Adding 0.0 folds -0 into +0.
    std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);
    std::string s = buf;
    if (s.find_first_of(".en") == std::string::npos) {
        s += ".0";
    }
    return s;
}

Report::Report(std::string command, uint64_t fingerprint) : command_(std::move(command)), fingerprint_(fingerprint) {
}

void Report::add(const std::string &key, double value) {
    rows_.push_back({key, {format_number(value)}, false});
}

void Report::add(const std::string &key, Complex value) {
    rows_.push_back({key, {format_number(value.real()), format_number(value.imag())}, true});
}

void Report::add(const std::string &key, const std::string &text) {
    rows_.push_back({key, {text}, false});
}

void Report::warn(const std::string &message) {
    warnings_.push_back(message);
}

void Report::print(std::ostream &out, bool machine) const {
    char fp[20];
    std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(fingerprint_));
    if (machine) {
        out << "command\t" << command_ << "\n" << "fingerprint\t" << fp << "\n";
        for (const auto &row : rows_) {
            if (row.complex) {
                out << row.key << ".re\t" << row.values[0] << "\n" << row.key << ".im\t" << row.values[1] << "\n";
            } else {
                out << row.key << "\t" << row.values[0] << "\n";
            }
        }
        for (const auto &w : warnings_) {
            out << "warning\t" << w << "\n";
        }
        return;
    }
    out << "# wseq " << command_ << "\n# fingerprint " << fp << "\n";
    for (const auto &row : rows_) {
        out << row.key;
        for (const auto &v : row.values) {
            out << " " << v;
        }
        out << "\n";
    }
    for (const auto &w : warnings_) {
        out << "warning: " << w << "\n";
    }
}

}  // namespace wseq::cli
