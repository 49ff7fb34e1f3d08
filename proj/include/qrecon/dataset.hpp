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

#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrecon/encoding.hpp"

namespace qrecon {

/// An 8x8 digit with raw intensities in [0, 16].
struct Sample {
    ImageMatrix image;
    int label = 0;
    std::size_t index = 0;  // row position in the source file
};

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &source, int line, const std::string &what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Reads rows of 64 comma-separated pixel values followed by the label.
std::vector<Sample> load_digits(const std::filesystem::path &path);

/// Same format, from an in-memory buffer; `source` names it in errors.
std::vector<Sample> parse_digits(const std::string &text, const std::string &source = "<memory>");

struct DatasetSplit {
    std::vector<Sample> train;
    std::vector<Sample> test;
    std::set<int> label_filter;
    std::uint64_t seed = 0;
};

/// Pools every sample whose label is in `labels`, shuffles the pool with a
/// seeded generator and cuts it into train (first n_train) and test (next
/// n_test).
DatasetSplit make_split(const std::vector<Sample> &samples, const std::set<int> &labels,
                        std::uint64_t seed, std::size_t n_train = 50, std::size_t n_test = 30);

}  // namespace qrecon
