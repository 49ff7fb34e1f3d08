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

#include "qrecon/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace qrecon {

ImageMatrix::ImageMatrix(int rows, int cols)
    : ImageMatrix(rows, cols,
                  std::vector<double>(static_cast<std::size_t>(std::max(rows, 0) *
                                                               std::max(cols, 0)))) {}

ImageMatrix::ImageMatrix(int rows, int cols, std::vector<double> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
    if (rows <= 0 || cols <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (pixels_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw std::invalid_argument("image has " + std::to_string(pixels_.size()) +
                                    " pixels, expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    for (double p : pixels_) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("non-finite pixel");
        }
    }
}

double ImageMatrix::norm() const {
    double acc = 0.0;
    for (double p : pixels_) {
        acc += p * p;
    }
    return std::sqrt(acc);
}

double ImageMatrix::max() const {
    return pixels_.empty() ? 0.0 : *std::max_element(pixels_.begin(), pixels_.end());
}

ImageMatrix normalize(const ImageMatrix &img) {
    const double n = img.norm();
    if (n == 0.0) {
        throw std::domain_error("cannot normalize an all-zero image");
    }
    std::vector<double> out(img.pixels().begin(), img.pixels().end());
    for (double &p : out) {
        p /= n;
    }
    return ImageMatrix(img.rows(), img.cols(), std::move(out));
}

StateVector amplitude_encode(const ImageMatrix &img) {
    const std::size_t n = img.size();
    if (!std::has_single_bit(n) || n < 2) {
        throw std::invalid_argument("image size " + std::to_string(n) +
                                    " is not a power of two >= 2");
    }
    for (double p : img.pixels()) {
        if (p < 0.0) {
            throw std::invalid_argument("amplitude encoding needs non-negative pixels");
        }
    }
    const ImageMatrix unit = normalize(img);
    std::vector<Complex> amps(unit.pixels().begin(), unit.pixels().end());
    return StateVector(std::countr_zero(n), std::move(amps));
}

ImageMatrix decode_to_image(const StateVector &state, int rows, int cols) {
    if (rows <= 0 || cols <= 0 ||
        static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != state.dimension()) {
        throw std::invalid_argument("cannot decode a " + std::to_string(state.dimension()) +
                                    "-amplitude state into " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    std::vector<double> px(state.dimension());
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = std::abs(state[i]);
    }
    return ImageMatrix(rows, cols, std::move(px));
}

ImageMatrix downsample(const ImageMatrix &img) {
    if (img.rows() != 8 || img.cols() != 8) {
        throw std::invalid_argument("downsample expects an 8x8 image, got " +
                                    std::to_string(img.rows()) + "x" + std::to_string(img.cols()));
    }
    ImageMatrix out(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const double sum = img.at(2 * r, 2 * c) + img.at(2 * r, 2 * c + 1) +
                               img.at(2 * r + 1, 2 * c) + img.at(2 * r + 1, 2 * c + 1);
            out.at(r, c) = sum / 4.0;
        }
    }
    return out;
}

void write_pgm(const std::filesystem::path &path, const ImageMatrix &img) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    const double peak = img.max();
    out << "P2\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    for (int r = 0; r < img.rows(); ++r) {
        for (int c = 0; c < img.cols(); ++c) {
            const double v = peak > 0.0 ? std::max(img.at(r, c), 0.0) / peak : 0.0;
            out << (c ? " " : "") << static_cast<int>(std::lround(v * 255.0));
        }
        out << '\n';
    }
}

void write_image_csv(const std::filesystem::path &path, const ImageMatrix &img) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    char buf[40];
    for (int r = 0; r < img.rows(); ++r) {
        for (int c = 0; c < img.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", img.at(r, c));
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace qrecon
