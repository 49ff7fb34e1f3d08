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

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "qrecon/statevector.hpp"

namespace qrecon {

/// Row-major grid of real pixels; pixel (r, c) sits at index r * cols + c,
/// which is also its basis index once encoded.
class ImageMatrix {
  public:
    ImageMatrix() = default;
    ImageMatrix(int rows, int cols);
    ImageMatrix(int rows, int cols, std::vector<double> pixels);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return pixels_.size(); }
    std::span<const double> pixels() const { return pixels_; }
    std::span<double> pixels() { return pixels_; }

    double at(int r, int c) const { return pixels_[static_cast<std::size_t>(r * cols_ + c)]; }
    double &at(int r, int c) { return pixels_[static_cast<std::size_t>(r * cols_ + c)]; }

    double norm() const;
    double max() const;

    bool operator==(const ImageMatrix &) const = default;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> pixels_;
};

/// x / ||x||_2. Throws std::domain_error for an all-zero image.
ImageMatrix normalize(const ImageMatrix &img);

/// sum_i x~_i |i> on log2(rows*cols) qubits. Rejects non-power-of-two sizes,
/// negative pixels and all-zero images.
StateVector amplitude_encode(const ImageMatrix &img);

/// Pixel i = |amplitude i|.
ImageMatrix decode_to_image(const StateVector &state, int rows, int cols);

/// 2x2 average pooling of an 8x8 image into 4x4, on the raw scale.
ImageMatrix downsample(const ImageMatrix &img);

/// ASCII PGM (P2), scaled to 0..255 by the image maximum.
void write_pgm(const std::filesystem::path &path, const ImageMatrix &img);

/// One image row per CSV line, 17 significant digits.
void write_image_csv(const std::filesystem::path &path, const ImageMatrix &img);

}  // namespace qrecon
