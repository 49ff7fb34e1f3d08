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

#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace qrecon;

namespace {

ImageMatrix random_image(int rows, int cols, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> px(0, 16);
    std::vector<double> v(static_cast<std::size_t>(rows * cols));
    for (double &x : v) {
        x = px(rng);
    }
    v[0] += 1.0;
    return ImageMatrix(rows, cols, std::move(v));
}

}  // namespace

TEST(Normalize, examples) {
    const ImageMatrix a = normalize(ImageMatrix(1, 2, {3, 4}));
    EXPECT_NEAR(a.pixels()[0], 0.6, 1e-15);
    EXPECT_NEAR(a.pixels()[1], 0.8, 1e-15);

    const ImageMatrix b = normalize(ImageMatrix(2, 2, {1, 1, 1, 1}));
    for (double p : b.pixels()) {
        EXPECT_NEAR(p, 0.5, 1e-15);
    }

    const ImageMatrix again = normalize(a);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(again.pixels()[i], a.pixels()[i], 1e-12);
    }
}

TEST(Normalize, all_zero_throws) {
    EXPECT_THROW(normalize(ImageMatrix(4, 4)), std::domain_error);
}

TEST(AmplitudeEncode, single_pixel_is_basis_state) {
    ImageMatrix img(4, 4);
    img.at(0, 0) = 5;
    const StateVector s = amplitude_encode(img);
    EXPECT_EQ(s.num_qubits(), 4);
    EXPECT_NEAR(fidelity(s, basis_state(4, 0)), 1.0, 1e-15);
}

TEST(AmplitudeEncode, uniform_image) {
    const StateVector s = amplitude_encode(ImageMatrix(8, 8, std::vector<double>(64, 1.0)));
    EXPECT_EQ(s.num_qubits(), 6);
    for (const Complex &a : s.amplitudes()) {
        EXPECT_NEAR(a.real(), 1.0 / 8.0, 1e-15);
        EXPECT_EQ(a.imag(), 0.0);
    }
}

TEST(AmplitudeEncode, row_major_pixel_to_basis_index) {
    ImageMatrix img(8, 8);
    img.at(2, 5) = 3.0;
    const StateVector s = amplitude_encode(img);
    EXPECT_EQ(s[8 * 2 + 5], Complex(1.0));
}

TEST(AmplitudeEncode, dataset_samples_are_unit_real_nonnegative) {
    for (const Sample &s : testutil::digits()) {
        const StateVector st = amplitude_encode(s.image);
        ASSERT_NEAR(st.norm(), 1.0, 1e-10);
        for (const Complex &a : st.amplitudes()) {
            ASSERT_GE(a.real(), 0.0);
            ASSERT_EQ(a.imag(), 0.0);
        }
    }
}

TEST(AmplitudeEncode, rejects_bad_sizes_and_pixels) {
    EXPECT_THROW(amplitude_encode(ImageMatrix(3, 3, std::vector<double>(9, 1.0))),
                 std::invalid_argument);
    EXPECT_THROW(amplitude_encode(ImageMatrix(2, 2)), std::domain_error);
    EXPECT_THROW(amplitude_encode(ImageMatrix(1, 2, {1.0, -1.0})), std::invalid_argument);
}

TEST(Decode, roundtrip_equals_normalized_image) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const ImageMatrix img = random_image(8, 8, rng);
        const ImageMatrix dec = decode_to_image(amplitude_encode(img), 8, 8);
        const ImageMatrix ref = normalize(img);
        for (std::size_t i = 0; i < 64; ++i) {
            ASSERT_NEAR(dec.pixels()[i], ref.pixels()[i], 1e-12);
        }
    }
}

TEST(Decode, basis_state_is_corner_pixel) {
    const ImageMatrix img = decode_to_image(basis_state(6, 0), 8, 8);
    EXPECT_EQ(img.at(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(img.norm(), 1.0);
}

TEST(Decode, global_phase_invariant) {
    std::mt19937_64 rng(5);
    const StateVector s = testutil::random_state(6, rng);
    StateVector rotated = s;
    rotated.apply_global_phase(1.234);
    const ImageMatrix a = decode_to_image(s, 8, 8);
    const ImageMatrix b = decode_to_image(rotated, 8, 8);
    for (std::size_t i = 0; i < 64; ++i) {
        EXPECT_NEAR(a.pixels()[i], b.pixels()[i], 1e-15);
    }
    EXPECT_NEAR(a.norm(), 1.0, 1e-10);
}

TEST(Decode, size_mismatch_throws) {
    EXPECT_THROW(decode_to_image(basis_state(6, 0), 4, 4), std::invalid_argument);
}

TEST(Decode, encode_decode_encode_fidelity_is_one_on_dataset) {
    for (const Sample &s : testutil::digits()) {
        const StateVector st = amplitude_encode(s.image);
        const StateVector again = amplitude_encode(decode_to_image(st, 8, 8));
        ASSERT_NEAR(fidelity(st, again), 1.0, 1e-10);
    }
}

TEST(Downsample, examples) {
    const ImageMatrix ones = downsample(ImageMatrix(8, 8, std::vector<double>(64, 1.0)));
    ASSERT_EQ(ones.rows(), 4);
    for (double p : ones.pixels()) {
        EXPECT_EQ(p, 1.0);
    }

    ImageMatrix block(8, 8);
    block.at(2, 4) = 16;
    const ImageMatrix one = downsample(block);
    EXPECT_EQ(one.at(1, 2), 4.0);
    EXPECT_EQ(one.norm(), 4.0);

    ImageMatrix checker(8, 8);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            checker.at(r, c) = (r + c) % 2 ? 16.0 : 0.0;
        }
    }
    const ImageMatrix pooled = downsample(checker);
    for (double p : pooled.pixels()) {
        EXPECT_EQ(p, 8.0);
    }
}

TEST(Downsample, commutes_with_scaling) {
    std::mt19937_64 rng(7);
    for (double c : {0.0, 0.5, 2.0, 0.25}) {
        const ImageMatrix img = random_image(8, 8, rng);
        std::vector<double> scaled(img.pixels().begin(), img.pixels().end());
        for (double &p : scaled) {
            p *= c;
        }
        const ImageMatrix lhs = downsample(ImageMatrix(8, 8, scaled));
        const ImageMatrix rhs = downsample(img);
        for (std::size_t i = 0; i < 16; ++i) {
            EXPECT_EQ(lhs.pixels()[i], c * rhs.pixels()[i]);
        }
    }
}

TEST(Downsample, wrong_dimensions_throw) {
    EXPECT_THROW(downsample(ImageMatrix(4, 4)), std::invalid_argument);
}

TEST(ImageFiles, pgm_and_csv) {
    const auto dir = std::filesystem::temp_directory_path();
    const ImageMatrix img(2, 2, {0.0, 0.5, 0.25, 1.0});
    write_pgm(dir / "qrecon_img.pgm", img);
    write_image_csv(dir / "qrecon_img.csv", img);
    std::ifstream pgm(dir / "qrecon_img.pgm");
    std::stringstream pbuf;
    pbuf << pgm.rdbuf();
    EXPECT_EQ(pbuf.str(), "P2\n2 2\n255\n0 128\n64 255\n");
    std::ifstream csv(dir / "qrecon_img.csv");
    std::stringstream cbuf;
    cbuf << csv.rdbuf();
    EXPECT_EQ(cbuf.str(), "0,0.5\n0.25,1\n");
}
