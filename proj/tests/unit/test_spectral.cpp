// Copyright 2026 The Spectradec Authors. All Rights Reserved.
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


#include <gtest/gtest.h>

#include <random>
#include <set>

#include "../oracles.hpp"
#include "spectradec/dct.hpp"
#include "spectradec/spectral.hpp"

namespace spectradec {
namespace {

using spectral::BandMask;
using spectral::Spectrum;
using testing::naive_dct2;
using testing::random_image;

TEST(Dct, OnePointIsIdentity) {
  PlanarImage img = PlanarImage::constant(1, 1, 1, 0.37f, ColorSpace::kLuma);
  EXPECT_FLOAT_EQ(spectral::dct2(img).at(0, 0, 0), 0.37f);
}

TEST(Dct, ConstantTwoByTwoHasDcTwiceValue) {
  const Spectrum s =
      spectral::dct2(PlanarImage::constant(1, 2, 2, 0.25f, ColorSpace::kLuma));
  EXPECT_NEAR(s.at(0, 0, 0), 0.5f, 1e-7);
  EXPECT_NEAR(s.at(0, 0, 1), 0.0f, 1e-7);
  EXPECT_NEAR(s.at(0, 1, 0), 0.0f, 1e-7);
  EXPECT_NEAR(s.at(0, 1, 1), 0.0f, 1e-7);
}

TEST(Dct, InverseOfDcOnlyIsConstant) {
  Spectrum s(1, 2, 2, ColorSpace::kLuma);
  s.at(0, 0, 0) = 0.5f;
  const PlanarImage img = spectral::idct2(s);
  for (float v : img.data().reshaped()) EXPECT_NEAR(v, 0.25f, 1e-7);
  EXPECT_TRUE(spectral::idct2(Spectrum(1, 3, 5)).data().isZero());
}

class DctOracle : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(DctOracle, MatchesNaiveDoubleSum) {
  const auto [h, w] = GetParam();
  const PlanarImage img = random_image(1, h, w, 1000 + h * 97 + w);
  const Eigen::MatrixXd ref = naive_dct2(testing::plane_of(img, 0));
  for (dct::Path path : {dct::Path::kAuto, dct::Path::kNaive, dct::Path::kFast}) {
    const Spectrum s = spectral::dct2(img, {path, std::nullopt});
    const Eigen::MatrixXd got = s.plane(0).cast<double>();
    EXPECT_LT((got - ref).cwiseAbs().maxCoeff(), 1e-5) << h << "x" << w;
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, DctOracle,
                         ::testing::Values(std::pair{1, 1}, std::pair{1, 7},
                                           std::pair{2, 3}, std::pair{8, 8},
                                           std::pair{16, 16}, std::pair{5, 32},
                                           std::pair{33, 12}, std::pair{40, 64},
                                           std::pair{31, 37}));

TEST(Dct, FastAndNaiveOneDimensionalAgree) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int len : {1, 2, 3, 4, 5, 17, 32, 33, 37, 100, 255, 1009, 2153}) {
    Eigen::VectorXd x(len);
    for (auto& v : x) v = n(rng);
    const Eigen::VectorXd a = dct::forward_1d(x, dct::Path::kNaive);
    const Eigen::VectorXd b = dct::forward_1d(x, dct::Path::kFast);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-11) << len;
    EXPECT_LT((dct::inverse_1d(b, dct::Path::kFast) - x).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Dct, RoundTripLargePlane) {
  const PlanarImage img = random_image(3, 512, 512, 11);
  const PlanarImage back = spectral::idct2(spectral::dct2(img));
  EXPECT_LT((back.data() - img.data()).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_EQ(back.colorspace(), ColorSpace::kRgb);
}

TEST(Dct, Parseval) {
  const PlanarImage img = random_image(1, 48, 70, 3);
  PlaneMatrix<double> p = img.plane(0).cast<double>();
  const double spatial = p.squaredNorm();
  dct::forward_2d_inplace(p);
  EXPECT_NEAR(p.squaredNorm() / spatial, 1.0, 1e-12);
}

TEST(Dct, TiledTransformIsPerTile) {
  const PlanarImage img = random_image(1, 20, 12, 9);
  const Spectrum tiled = spectral::dct2(img, {dct::Path::kAuto, 8});
  const Eigen::MatrixXd tile = testing::plane_of(img, 0).block(16, 8, 4, 4);
  const Eigen::MatrixXd ref = naive_dct2(tile);
  const Eigen::MatrixXd got = tiled.plane(0).block(16, 8, 4, 4).cast<double>();
  EXPECT_LT((got - ref).cwiseAbs().maxCoeff(), 1e-5);
  const PlanarImage back = spectral::idct2(tiled, {dct::Path::kAuto, 8});
  EXPECT_LT((back.data() - img.data()).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(BandMask, Definitions) {
  const int h = 6, w = 9, k = 2;
  const auto zero = BandMask::zero(h, w).indices();
  const auto low = BandMask::low(k, h, w).indices();
  const auto high = BandMask::high(k, h, w).indices();
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      EXPECT_EQ(zero(i, j), i == 0 && j == 0);
      EXPECT_EQ(low(i, j), i <= k && j <= k && !(i == 0 && j == 0));
      EXPECT_EQ(high(i, j), i >= k || j >= k);
      EXPECT_TRUE(zero(i, j) || low(i, j) || high(i, j));
      EXPECT_EQ(low(i, j) && high(i, j), i <= k && j <= k && (i == k || j == k));
    }
  }
}

TEST(BandMask, CutoffRange) {
  EXPECT_EQ(spectral::max_cutoff(4, 7), 6);
  EXPECT_THROW(BandMask::low(7, 4, 7), Error);
  EXPECT_THROW(BandMask::high(-1, 4, 7), Error);
  // k beyond one axis clamps on that axis only.
  const auto low = BandMask::low(5, 4, 7).indices();
  EXPECT_TRUE(low(3, 5));
  EXPECT_FALSE(low(3, 6));
}

TEST(ExchangeBand, FullMaskSwapsAndIsInvolution) {
  const Spectrum a = spectral::dct2(random_image(3, 8, 8, 1));
  const Spectrum b = spectral::dct2(random_image(3, 8, 8, 2));
  const spectral::IndexMask all = spectral::IndexMask::Constant(8, 8, true);
  auto [x, y] = spectral::exchange_band(a, b, all);
  EXPECT_TRUE(x == b);
  EXPECT_TRUE(y == a);
  const BandMask m = BandMask::low(3, 8, 8);
  auto [p, q] = spectral::exchange_band(a, b, m);
  auto [r, s] = spectral::exchange_band(p, q, m);
  EXPECT_TRUE(r == a);
  EXPECT_TRUE(s == b);
}

TEST(DcReconstruct, EqualsChannelMean) {
  const PlanarImage img = random_image(3, 10, 13, 4);
  const PlanarImage dc = spectral::dc_reconstruct(spectral::dct2(img));
  for (int c = 0; c < 3; ++c) {
    const double mean = img.plane(c).cast<double>().mean();
    for (float v : dc.plane(c).reshaped()) EXPECT_NEAR(v, mean, 1e-6);
  }
}

TEST(Zigzag, SmallOrders) {
  using spectral::Index2;
  EXPECT_EQ(spectral::ZigzagOrder(2, 2).path(),
            (std::vector<Index2>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_EQ(spectral::ZigzagOrder(3, 3).path(),
            (std::vector<Index2>{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1},
                                 {0, 2}, {1, 2}, {2, 1}, {2, 2}}));
}

TEST(Zigzag, BijectiveAndDiagonalMonotoneExhaustive) {
  for (int h = 1; h <= 16; ++h) {
    for (int w = 1; w <= 16; ++w) {
      const spectral::ZigzagOrder order(h, w);
      const auto& path = order.path();
      ASSERT_EQ(int(path.size()), h * w);
      std::set<std::pair<int, int>> seen;
      for (size_t t = 0; t < path.size(); ++t) {
        seen.insert({path[t].row, path[t].col});
        EXPECT_EQ(order.gather()[t], Eigen::Index(path[t].row) * w + path[t].col);
        if (t > 0) {
          EXPECT_LE(path[t - 1].row + path[t - 1].col, path[t].row + path[t].col);
        }
      }
      EXPECT_EQ(int(seen.size()), h * w);
    }
  }
}

TEST(Zigzag, RoundTripBitExact) {
  const Spectrum s = spectral::dct2(random_image(3, 8, 8, 7));
  const spectral::ZigzagOrder order(8, 8);
  const Spectrum back =
      spectral::invert_zigzag(spectral::apply_zigzag(s, order), order);
  EXPECT_TRUE(back == s);
  EXPECT_THROW(spectral::invert_zigzag(spectral::Sequence::Zero(1, 10), order),
               Error);
}

TEST(WindowPartition, PadArithmetic) {
  Eigen::VectorXd six = Eigen::VectorXd::LinSpaced(6, 1, 6);
  auto [w6, p6] = spectral::window_partition(six, 3);
  EXPECT_EQ(p6.count, 2);
  EXPECT_EQ(p6.pad, 0);
  Eigen::VectorXd five = Eigen::VectorXd::LinSpaced(5, 1, 5);
  auto [w5, p5] = spectral::window_partition(five, 3);
  EXPECT_EQ(p5.count, 2);
  EXPECT_EQ(p5.pad, 1);
  EXPECT_EQ(w5(1, 2), 0.0);
  EXPECT_EQ(w5(1, 1), 5.0);
}

TEST(WindowPartition, RoundTripRandomLengths) {
  std::mt19937_64 rng(17);
  for (int len = 1; len <= 1000; len += 37) {
    Eigen::VectorXd s = Eigen::VectorXd::Random(len);
    const int wl = 1 + int(rng() % 20);
    auto [w, p] = spectral::window_partition(s, wl);
    EXPECT_EQ(spectral::window_reverse(w, p), s);
  }
  auto [w, p] = spectral::window_partition(Eigen::VectorXd::Ones(7), 3);
  spectral::WindowPartition bad = p;
  bad.count += 1;
  bad.pad = 0;
  EXPECT_THROW(spectral::window_reverse(w, bad), Error);
}

TEST(SpectrumDump, RoundTrip) {
  const Spectrum s = spectral::dct2(random_image(3, 5, 6, 8));
  const auto bytes = spectral::encode_spectrum(s);
  EXPECT_EQ(bytes.size(), 16u + 3 * 5 * 6 * 4);
  EXPECT_TRUE(spectral::decode_spectrum(bytes) == s);
  auto bad = bytes;
  bad.pop_back();
  EXPECT_THROW(spectral::decode_spectrum(bad), Error);
}

}  // namespace
}  // namespace spectradec
