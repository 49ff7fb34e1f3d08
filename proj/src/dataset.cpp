// Copyright 2026 The qrecon Authors
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

#include "qrecon/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace qrecon {

namespace {

constexpr int kPixels = 64;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view field, double &out) {
    field = trim(field);
    if (field.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(out);
}

Sample parse_row(std::string_view line, const std::string &source, int line_no,
                 std::size_t index) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (fields.size() != kPixels + 1) {
        throw ParseError(source, line_no,
                         "expected " + std::to_string(kPixels + 1) + " fields, got " +
                             std::to_string(fields.size()));
    }
    std::vector<double> px(kPixels);
    for (int i = 0; i < kPixels; ++i) {
        if (!parse_double(fields[static_cast<std::size_t>(i)], px[static_cast<std::size_t>(i)])) {
            throw ParseError(source, line_no, "pixel " + std::to_string(i) + " is not a number");
        }
        const double v = px[static_cast<std::size_t>(i)];
        if (v < 0.0 || v > 16.0) {
            throw ParseError(source, line_no,
                             "pixel " + std::to_string(i) + " outside [0, 16]: " +
                                 std::string(trim(fields[static_cast<std::size_t>(i)])));
        }
    }
    double label = 0.0;
    if (!parse_double(fields.back(), label) || label != std::floor(label) || label < 0 ||
        label > 9) {
        throw ParseError(source, line_no,
                         "bad label '" + std::string(trim(fields.back())) + "'");
    }
    return Sample{ImageMatrix(8, 8, std::move(px)), static_cast<int>(label), index};
}

}  // namespace

std::vector<Sample> parse_digits(const std::string &text, const std::string &source) {
    std::vector<Sample> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        out.push_back(parse_row(line, source, line_no, out.size()));
    }
    return out;
}

std::vector<Sample> load_digits(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset: " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_digits(buf.str(), path.string());
}

DatasetSplit make_split(const std::vector<Sample> &samples, const std::set<int> &labels,
                        std::uint64_t seed, std::size_t n_train, std::size_t n_test) {
    std::vector<const Sample *> pool;
    for (const Sample &s : samples) {
        if (labels.contains(s.label)) {
            pool.push_back(&s);
        }
    }
    if (pool.size() < n_train + n_test) {
        throw std::invalid_argument("split needs " + std::to_string(n_train + n_test) +
                                    " samples, only " + std::to_string(pool.size()) +
                                    " available for the label filter");
    }
    // Fisher-Yates over the raw engine output; std::shuffle and the standard
    // distributions are not specified bit-for-bit across library vendors.
    std::mt19937_64 rng(seed);
    for (std::size_t i = pool.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(pool[i - 1], pool[j]);
    }
    DatasetSplit split;
    split.label_filter = labels;
    split.seed = seed;
    for (std::size_t i = 0; i < n_train; ++i) {
        split.train.push_back(*pool[i]);
    }
    for (std::size_t i = n_train; i < n_train + n_test; ++i) {
        split.test.push_back(*pool[i]);
    }
    return split;
}

}  // namespace qrecon
