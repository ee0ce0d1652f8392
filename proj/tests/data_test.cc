// Copyright 2026 The uspann Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"
#include "uspann/binary_io.h"
#include "uspann/dataset.h"
#include "uspann/dataset_io.h"
#include "uspann/distance.h"
#include "uspann/error.h"
#include "uspann/synthetic.h"

namespace uspann {
namespace {

using testing::from_rows;
using testing::random_dataset;
using testing::TempDir;

TEST(Dataset, RejectsBadShapes) {
  EXPECT_THROW(Dataset({}, 0, 2), ParameterError);
  EXPECT_THROW(Dataset({1.0f, 2.0f}, 1, 0), ParameterError);
  EXPECT_THROW(Dataset({1.0f, 2.0f, 3.0f}, 2, 2), ParameterError);
  EXPECT_THROW(Dataset({1.0f, 2.0f}, 1, 2, std::vector<std::int32_t>{0, 1}),
               ParameterError);
}

TEST(Dataset, RejectsNonFinite) {
  EXPECT_THROW(Dataset({1.0f, NAN}, 1, 2), InputError);
  EXPECT_THROW(Dataset({INFINITY, 0.0f}, 1, 2), InputError);
}

TEST(Dataset, SubsetFollowsIndexOrder) {
  Dataset ds({0, 1, 2, 3, 4, 5}, 3, 2, std::vector<std::int32_t>{7, 8, 9});
  std::vector<std::uint32_t> idx{2, 0};
  Dataset s = ds.subset(idx);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.row(0)[0], 4.0f);
  EXPECT_EQ(s.row(1)[1], 1.0f);
  EXPECT_EQ(s.labels(), (std::vector<std::int32_t>{9, 7}));
}

TEST(Dataset, ChecksumTracksContent) {
  Dataset a = random_dataset(10, 3, 1);
  Dataset b = random_dataset(10, 3, 1);
  Dataset c = random_dataset(10, 3, 2);
  EXPECT_EQ(a.checksum(), b.checksum());
  EXPECT_NE(a.checksum(), c.checksum());
  // Same bytes, different shape.
  Dataset flat(a.data(), 30, 1);
  EXPECT_NE(a.checksum(), flat.checksum());
}

TEST(Blobs, ZeroSigmaCollapsesToCenters) {
  Dataset ds = generate_blobs(4, 2, 2, 10.0, 0.0, 0);
  EXPECT_EQ(ds.labels(), (std::vector<std::int32_t>{0, 0, 1, 1}));
  EXPECT_EQ(squared_l2(ds.row(0), ds.row(1)), 0.0);
  EXPECT_EQ(squared_l2(ds.row(2), ds.row(3)), 0.0);
  EXPECT_GE(std::sqrt(squared_l2(ds.row(0), ds.row(2))), 10.0 - 1e-5);
}

TEST(Blobs, SinglePoint) {
  Dataset ds = generate_blobs(1, 3, 1, 10.0, 0.0, 5);
  EXPECT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.dim(), 3u);
  EXPECT_EQ(ds.labels(), (std::vector<std::int32_t>{0}));
}

TEST(Blobs, ClusterSizesDifferByAtMostOne) {
  Dataset ds = generate_blobs(103, 3, 4, 5.0, 1.0, 3);
  std::vector<int> counts(4, 0);
  for (auto l : ds.labels()) ++counts[l];
  EXPECT_EQ(counts, (std::vector<int>{26, 26, 26, 25}));
}

TEST(Blobs, CentersRespectSeparation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Dataset ds = generate_blobs(8, 2, 8, 3.0, 0.0, seed);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = i + 1; j < 8; ++j) {
        EXPECT_GE(std::sqrt(squared_l2(ds.row(i), ds.row(j))), 3.0 - 1e-5);
      }
    }
  }
}

TEST(Blobs, ClustersAreSeparatedExhaustively) {
  // Every intra-cluster pair is closer than every inter-cluster pair.
  Dataset ds = generate_blobs(2000, 16, 4, 10.0, 1.0, 1);
  double within = 0.0;
  double between = INFINITY;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const double s = squared_l2(ds.row(i), ds.row(j));
      if (ds.labels()[i] == ds.labels()[j]) {
        within = std::max(within, s);
      } else {
        between = std::min(between, s);
      }
    }
  }
  EXPECT_LT(within, between);
}

TEST(Blobs, Deterministic) {
  EXPECT_EQ(generate_blobs(50, 4, 3, 5.0, 1.0, 9),
            generate_blobs(50, 4, 3, 5.0, 1.0, 9));
  EXPECT_NE(generate_blobs(50, 4, 3, 5.0, 1.0, 9).data(),
            generate_blobs(50, 4, 3, 5.0, 1.0, 10).data());
}

TEST(Blobs, InvalidCounts) {
  EXPECT_THROW(generate_blobs(2, 2, 3, 1.0, 1.0, 0), ParameterError);
  EXPECT_THROW(generate_blobs(2, 2, 0, 1.0, 1.0, 0), ParameterError);
  EXPECT_THROW(generate_blobs(2, 2, 1, 1.0, -1.0, 0), ParameterError);
}

TEST(Moons, FirstPointsFollowTheArcs) {
  Dataset ds = generate_moons(4, 0.0, 0);
  EXPECT_DOUBLE_EQ(ds.row(0)[0], std::cos(0.0));
  EXPECT_DOUBLE_EQ(ds.row(0)[1], std::sin(0.0));
  EXPECT_DOUBLE_EQ(ds.row(2)[0], 1.0 - std::cos(0.0));
  EXPECT_DOUBLE_EQ(ds.row(2)[1], 0.5 - std::sin(0.0));
  EXPECT_EQ(ds.labels(), (std::vector<std::int32_t>{0, 0, 1, 1}));
}

TEST(Moons, OuterArcHasUnitRadius) {
  Dataset ds = generate_moons(101, 0.0, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels()[i] != 0) continue;
    const double r = std::hypot(ds.row(i)[0], ds.row(i)[1]);
    EXPECT_NEAR(r, 1.0, 1e-6);
  }
}

TEST(Moons, InnerArcMatchesFormula) {
  const std::size_t n = 9;
  Dataset ds = generate_moons(n, 0.0, 0);
  const std::size_t outer = n / 2;
  const std::size_t inner = n - outer;
  for (std::size_t i = 0; i < inner; ++i) {
    const double t = M_PI * static_cast<double>(i) / static_cast<double>(inner - 1);
    EXPECT_NEAR(ds.row(outer + i)[0], 1.0 - std::cos(t), 1e-6);
    EXPECT_NEAR(ds.row(outer + i)[1], 0.5 - std::sin(t), 1e-6);
  }
}

TEST(Moons, NoiseIsSeeded) {
  EXPECT_EQ(generate_moons(30, 0.1, 4), generate_moons(30, 0.1, 4));
  EXPECT_NE(generate_moons(30, 0.1, 4).data(), generate_moons(30, 0.1, 5).data());
  EXPECT_THROW(generate_moons(1, 0.0, 0), ParameterError);
}

TEST(Circles, InnerRingRadius) {
  Dataset ds = generate_circles(4, 0.5, 0.0, 0);
  for (std::size_t i = 2; i < 4; ++i) {
    EXPECT_NEAR(std::hypot(ds.row(i)[0], ds.row(i)[1]), 0.5, 1e-7);
  }
}

TEST(Circles, OnePointPerRing) {
  Dataset ds = generate_circles(2, 0.5, 0.0, 0);
  EXPECT_EQ(ds.labels(), (std::vector<std::int32_t>{0, 1}));
}

TEST(Circles, MinInterRingDistance) {
  const double factor = 0.3;
  Dataset ds = generate_circles(200, factor, 0.0, 0);
  double best = INFINITY;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (ds.labels()[i] == 0 && ds.labels()[j] == 1) {
        best = std::min(best, std::sqrt(squared_l2(ds.row(i), ds.row(j))));
      }
    }
  }
  EXPECT_NEAR(best, 1.0 - factor, 1e-6);
}

TEST(Circles, FactorRange) {
  EXPECT_THROW(generate_circles(10, 1.0, 0.0, 0), ParameterError);
  EXPECT_THROW(generate_circles(10, 0.0, 0.0, 0), ParameterError);
}

TEST(Distance, MetricAxioms) {
  Dataset ds = random_dataset(60, 5, 11);
  for (std::size_t i = 0; i + 2 < ds.size(); i += 3) {
    auto a = ds.row(i), b = ds.row(i + 1), c = ds.row(i + 2);
    EXPECT_EQ(distance(Metric::kEuclidean, a, a), 0.0);
    EXPECT_EQ(distance(Metric::kEuclidean, a, b),
              distance(Metric::kEuclidean, b, a));
    EXPECT_LE(distance(Metric::kEuclidean, a, c),
              distance(Metric::kEuclidean, a, b) +
                  distance(Metric::kEuclidean, b, c) + 1e-6);
  }
}

TEST(Distance, ParseMetric) {
  EXPECT_EQ(parse_metric("l2"), Metric::kEuclidean);
  EXPECT_EQ(parse_metric("sqeuclidean"), Metric::kSquaredEuclidean);
  EXPECT_THROW(parse_metric("cosine"), ParameterError);
}

TEST(Split, SizesAndDisjointness) {
  Dataset ds = random_dataset(10, 2, 0);
  Split s = split(ds, 0.2, 7);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.queries.size(), 2u);
  std::set<std::uint32_t> all(s.train_indices.begin(), s.train_indices.end());
  for (auto q : s.query_indices) EXPECT_TRUE(all.insert(q).second);
  EXPECT_EQ(all.size(), 10u);
  EXPECT_EQ(*all.rbegin(), 9u);
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    EXPECT_EQ(s.train.row(i)[0], ds.row(s.train_indices[i])[0]);
  }
}

TEST(Split, Deterministic) {
  Dataset ds = random_dataset(50, 2, 0);
  EXPECT_EQ(split(ds, 0.3, 4).query_indices, split(ds, 0.3, 4).query_indices);
  EXPECT_NE(split(ds, 0.3, 4).query_indices, split(ds, 0.3, 5).query_indices);
}

TEST(Split, EmptySideIsAnError) {
  Dataset ds = random_dataset(10, 2, 0);
  EXPECT_THROW(split(ds, 0.01, 0), ParameterError);
  EXPECT_THROW(split(ds, 0.99, 0), ParameterError);
  EXPECT_THROW(split(ds, 0.0, 0), ParameterError);
}

TEST(Standardize, TwoPoints) {
  Standardized st = standardize(Dataset({0.0f, 2.0f}, 2, 1));
  EXPECT_EQ(st.data.row(0)[0], -1.0f);
  EXPECT_EQ(st.data.row(1)[0], 1.0f);
  EXPECT_EQ(st.transform.mean[0], 1.0);
  EXPECT_EQ(st.transform.scale[0], 1.0);
}

TEST(Standardize, Idempotent) {
  Standardized once = standardize(random_dataset(100, 4, 3, 5.0));
  Standardized twice = standardize(once.data);
  for (std::size_t i = 0; i < once.data.data().size(); ++i) {
    EXPECT_NEAR(once.data.data()[i], twice.data.data()[i], 1e-6);
  }
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(twice.transform.mean[j], 0.0, 1e-7);
    EXPECT_NEAR(twice.transform.scale[j], 1.0, 1e-6);
  }
}

TEST(Standardize, ConstantDimensionOnlyCentered) {
  Standardized st = standardize(Dataset({3, 1, 3, 5}, 2, 2));
  EXPECT_EQ(st.transform.scale[0], 1.0);
  EXPECT_EQ(st.data.row(0)[0], 0.0f);
  EXPECT_EQ(st.data.row(1)[1], 1.0f);
}

TEST(Standardize, QueriesUseTrainStatistics) {
  Standardized st = standardize(Dataset({0.0f, 2.0f}, 2, 1));
  Dataset q = st.transform.apply(Dataset({5.0f}, 1, 1));
  EXPECT_EQ(q.row(0)[0], 4.0f);
}

TEST(Fvecs, ParsesSpecBytes) {
  std::vector<std::uint8_t> bytes{0x02, 0, 0, 0, 0, 0, 0x80, 0x3f, 0, 0, 0, 0x40};
  Dataset ds = parse_fvecs(bytes);
  EXPECT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_EQ(ds.row(0)[0], 1.0f);
  EXPECT_EQ(ds.row(0)[1], 2.0f);
}

TEST(Fvecs, EmptyInputIsFormatError) {
  EXPECT_THROW(parse_fvecs({}), FormatError);
}

TEST(Fvecs, InconsistentDimensionNamesOffset) {
  ByteWriter w;
  w.put_i32(2);
  w.put_f32(1);
  w.put_f32(2);
  w.put_i32(3);
  for (int i = 0; i < 3; ++i) w.put_f32(0);
  try {
    parse_fvecs(w.bytes());
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 12"), std::string::npos)
        << e.what();
  }
}

TEST(Fvecs, TruncatedAndNonPositiveDimension) {
  std::vector<std::uint8_t> truncated{0x02, 0, 0, 0, 0, 0, 0x80, 0x3f, 0, 0};
  EXPECT_THROW(parse_fvecs(truncated), FormatError);
  std::vector<std::uint8_t> zero{0, 0, 0, 0};
  EXPECT_THROW(parse_fvecs(zero), FormatError);
  std::vector<std::uint8_t> negative{0xff, 0xff, 0xff, 0xff};
  EXPECT_THROW(parse_fvecs(negative), FormatError);
}

TEST(Fvecs, RoundTripIsBitExact) {
  TempDir dir;
  Dataset ds = random_dataset(37, 5, 2);
  write_fvecs(dir / "a.fvecs", ds);
  EXPECT_EQ(read_fvecs(dir / "a.fvecs"), ds);
  EXPECT_EQ(parse_fvecs(encode_fvecs(ds)), ds);
}

TEST(Ivecs, RoundTrip) {
  TempDir dir;
  IntRows rows{2, 3, {1, 2, 3, -4, 5, 6}};
  write_ivecs(dir / "g.ivecs", rows);
  IntRows back = read_ivecs(dir / "g.ivecs");
  EXPECT_EQ(back.rows, 2u);
  EXPECT_EQ(back.cols, 3u);
  EXPECT_EQ(back.values, rows.values);
}

TEST(Csv, RoundTripWithLabels) {
  TempDir dir;
  Dataset ds = generate_moons(20, 0.1, 3);
  write_csv(dir / "m.csv", ds);
  Dataset back = read_csv(dir / "m.csv");
  EXPECT_EQ(back, ds);
  std::ifstream in(dir / "m.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x0,x1,label");
}

TEST(Csv, WithoutLabels) {
  TempDir dir;
  Dataset ds = random_dataset(5, 3, 1);
  write_csv(dir / "r.csv", ds);
  Dataset back = read_csv(dir / "r.csv");
  EXPECT_FALSE(back.has_labels());
  EXPECT_EQ(back, ds);
}

TEST(Csv, MalformedRows) {
  TempDir dir;
  {
    std::ofstream out(dir / "bad.csv");
    out << "x0,x1\n1,2\n3\n";
  }
  EXPECT_THROW(read_csv(dir / "bad.csv"), FormatError);
  {
    std::ofstream out(dir / "empty.csv");
    out << "x0,x1\n";
  }
  EXPECT_THROW(read_csv(dir / "empty.csv"), FormatError);
}

TEST(ByteReader, ReportsOffsetOnOverrun) {
  std::vector<std::uint8_t> bytes{1, 2, 3};
  ByteReader r(bytes);
  EXPECT_EQ(r.get_u8("a"), 1);
  try {
    r.get_u32("field");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace uspann
