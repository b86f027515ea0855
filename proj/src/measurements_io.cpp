// Copyright 2026 The loopspam Authors
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

#include "loopspam/measurements_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace loopspam {

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string position(int block, int row) {
    return "block " + std::to_string(block) + ", row " + std::to_string(row);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

MeasurementSet parse_measurements(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::Parse, "measurement file is empty");
    }
    static const std::regex header(R"(^#\s*loopspam-measurements\s+v1\s+scheme=(\S+)\s+blocks=(\d+)\s*$)");
    std::smatch m;
    const std::string head = trim(line);
    if (!std::regex_match(head, m, header)) {
        throw Error(ErrorCode::Parse,
                    "line 1: expected header '# loopspam-measurements v1 scheme=<2n|n_plus_1> blocks=<count>'");
    }
    MeasurementSet set;
    try {
        set.scheme = parse_scheme(m[1].str());
    } catch (const Error &e) {
        throw Error(ErrorCode::Parse, std::string("line 1: ") + e.what());
    }
    const int declared = std::stoi(m[2].str());
    const int dim = scheme_dimension(set.scheme);

    std::vector<std::vector<double>> rows;
    int block = 1;
    int line_no = 1;

    auto close_block = [&] {
        if (rows.empty()) {
            return;
        }
        if (static_cast<int>(rows.size()) != dim) {
            throw Error(ErrorCode::Parse, "block " + std::to_string(block) + ": expected " + std::to_string(dim) +
                                              " rows, got " + std::to_string(rows.size()));
        }
        Eigen::MatrixXd values(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                values(r, c) = rows[r][c];
            }
        }
        try {
            set.blocks.emplace_back(std::move(values));
        } catch (const Error &e) {
            throw Error(e.code(), "block " + std::to_string(block) + ": " + e.what());
        }
        rows.clear();
        ++block;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            close_block();
            continue;
        }
        if (t.front() == '#') {
            continue;
        }
        const int row = static_cast<int>(rows.size()) + 1;
        std::vector<double> values;
        std::stringstream fields(t);
        std::string field;
        while (std::getline(fields, field, ',')) {
            const std::string f = trim(field);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
                throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + " (" + position(block, row) +
                                                  "): malformed value '" + f + "'");
            }
            values.push_back(v);
        }
        if (static_cast<int>(values.size()) != dim) {
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + " (" + position(block, row) +
                                              "): expected " + std::to_string(dim) + " columns, got " +
                                              std::to_string(values.size()));
        }
        for (int c = 0; c < dim; ++c) {
            const double v = values[c];
            if (!(v >= -1.0 - ExpectationMatrix::kRangeEpsilon && v <= 1.0 + ExpectationMatrix::kRangeEpsilon)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << position(block, row) << ", column " << c + 1 << ": value " << v << " outside [-1, 1]";
                throw Error(ErrorCode::Range, msg.str());
            }
        }
        rows.push_back(std::move(values));
    }
    close_block();

    if (static_cast<int>(set.blocks.size()) != declared) {
        throw Error(ErrorCode::Parse, "header declares " + std::to_string(declared) + " blocks, file has " +
                                          std::to_string(set.blocks.size()));
    }
    return set;
}

MeasurementSet load_measurements(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open measurement file " + path.string());
    }
    try {
        return parse_measurements(in);
    } catch (const Error &e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string format_measurements(const MeasurementSet &set) {
    std::ostringstream out;
    out << "# loopspam-measurements v1 scheme=" << scheme_name(set.scheme) << " blocks=" << set.blocks.size()
        << "\n";
    for (std::size_t b = 0; b < set.blocks.size(); ++b) {
        if (b > 0) {
            out << "\n";
        }
        const auto &v = set.blocks[b].values();
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            for (Eigen::Index c = 0; c < v.cols(); ++c) {
                out << (c ? "," : "") << format_double(v(r, c));
            }
            out << "\n";
        }
    }
    return out.str();
}

void write_measurements(const std::filesystem::path &path, const MeasurementSet &set) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write measurement file " + path.string());
    }
    out << format_measurements(set);
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing " + path.string());
    }
}

}  // namespace loopspam
