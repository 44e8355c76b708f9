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

#ifndef WSEQ_TOOLS_REPORT_H
#define WSEQ_TOOLS_REPORT_H

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wseq/algebra.h"

namespace wseq::cli {

/// %.12g, with ".0" appended to bare integers so reals always read as reals.
std::string format_number(double x);

/// Command echo, input fingerprint, result rows and warnings.
///
/// Human mode prints `label value...` rows; machine mode prints one `key<TAB>value`
/// pair per line, complex values split into `key.re` and `key.im`.
class Report {
   public:
    Report(std::string command, uint64_t fingerprint);

    void add(const std::string &key, double value);
    void add(const std::string &key, Complex value);
    void add(const std::string &key, const std::string &text);
    void warn(const std::string &message);

    void print(std::ostream &out, bool machine) const;

   private:
    struct Row {
        std::string key;
        std::vector<std::string> values;
        bool complex = false;
    };
    std::string command_;
    uint64_t fingerprint_;
    std::vector<Row> rows_;
    std::vector<std::string> warnings_;
};

}  // namespace wseq::cli

#endif
