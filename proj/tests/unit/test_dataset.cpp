#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ddtruss/dataset.hpp"
#include "ddtruss/error.hpp"

namespace {

using namespace ddtruss;

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

TEST(Dataset, ParseCsv) {
  std::istringstream in("0,0\n0.001,2e6\n");
  const MaterialDataset d = parse_csv(in);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d[1].strain, 0.001);
  EXPECT_DOUBLE_EQ(d[1].stress, 2e6);
}

TEST(Dataset, ParseCsvWithHeader) {
  std::ostringstream out;
  out << "strain,stress\n";
  for (int k = 0; k < 300; ++k) out << k * 1e-5 << ',' << k * 1e4 << '\n';
  std::istringstream in(out.str());
  EXPECT_EQ(parse_csv(in).size(), 300u);
}

TEST(Dataset, ParseErrorNamesRow) {
  std::istringstream in("strain,stress\n0,0\n0.1,abc\n");
  try {
    parse_csv(in, "bad.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParseError);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] {
              std::istringstream in("strain,stress\n");
              parse_csv(in);
            }),
            ErrorKind::kEmptyDataset);
}

TEST(Dataset, CsvRoundTripIsExact) {
  SyntheticOptions opt;
  opt.count = 50;
  const MaterialDataset d = generate_synthetic(opt);
  std::stringstream ss;
  write_csv(d, ss);
  const MaterialDataset back = parse_csv(ss);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    EXPECT_EQ(back[j].strain, d[j].strain);
    EXPECT_EQ(back[j].stress, d[j].stress);
  }
}

TEST(Dataset, ComputeC) {
  EXPECT_EQ(compute_c(MaterialDataset({{0.001, 2e6}, {0.002, 6e6}})).c, 2.5e9);
  const Weighting w = compute_c(MaterialDataset({{0.0, 0.0}, {0.001, 2e6}}));
  EXPECT_DOUBLE_EQ(w.c, 2e9);
  EXPECT_EQ(w.skipped_zero_strain, 1u);

  EXPECT_EQ(kind_of([] { compute_c(MaterialDataset({{0.0, 1.0}})); }), ErrorKind::kDegenerateDataset);
  EXPECT_EQ(kind_of([] { compute_c(MaterialDataset({{0.001, -1.0}})); }), ErrorKind::kDegenerateDataset);
}

TEST(Dataset, ComputeCOnNoiselessLinearData) {
  SyntheticOptions opt;
  opt.curve = parse_curve_spec("linear:E=1.7e9");
  opt.noise_std = 0.0;
  opt.count = 301;
  opt.sampling = StrainSampling::kEvenlySpaced;  // includes ε = 0
  const Weighting w = compute_c(generate_synthetic(opt));
  EXPECT_LE(std::abs(w.c - 1.7e9) / 1.7e9, 1e-12);
}

TEST(Dataset, NearestPointExamples) {
  const MaterialDataset d({{0, 0}, {3, 0}});
  const NearestPoint np = nearest_point(1, 0, 1.0, 2.0, d);
  EXPECT_EQ(np.index, 0u);
  EXPECT_DOUBLE_EQ(np.distance_sq, 1.0);

  const MaterialDataset tie({{0, 1}, {0, -1}});
  EXPECT_EQ(nearest_point(0, 0, 1.0, 1.0, tie).index, 0u);

  const MaterialDataset z({{0.5, 1}, {0, 0}});
  EXPECT_EQ(nearest_point(0, 0, 1.0, 1.0, z).index, 1u);
  EXPECT_EQ(nearest_point(0, 0, 1.0, 1.0, z).distance_sq, 0.0);
}

TEST(Dataset, NearestPointAllowedSubset) {
  const MaterialDataset d({{0, 0}, {1, 1}, {2, 2}});
  const std::vector<std::size_t> allowed = {2, 1};
  EXPECT_EQ(nearest_point(0, 0, 1.0, 1.0, d, allowed).index, 1u);
  EXPECT_EQ(kind_of([&] { nearest_point(0, 0, 1.0, 1.0, d, std::span<const std::size_t>{}); }),
            ErrorKind::kEmptyAllowedSet);
}

TEST(Dataset, NearestPointIsArgminAndScaleInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<MaterialPoint> pts;
  for (int j = 0; j < 40; ++j) pts.push_back({0.01 * u(rng), 2e7 * u(rng)});
  const MaterialDataset d(pts);
  const double c = 2e9;
  for (int q = 0; q < 200; ++q) {
    const double e = 0.012 * u(rng);
    const double s = 2.4e7 * u(rng);
    const NearestPoint np = nearest_point(e, s, c, 0.3, d);
    std::size_t best = 0;
    for (std::size_t j = 1; j < d.size(); ++j) {
      if (weighted_distance_sq(e, s, d[j], c, 0.3) < weighted_distance_sq(e, s, d[best], c, 0.3)) best = j;
    }
    EXPECT_EQ(np.index, best);
    EXPECT_EQ(nearest_point(e, s, c, 0.3 * 17.0, d).index, best);
  }
}

TEST(Dataset, SyntheticLinearExact) {
  SyntheticOptions opt;
  opt.curve = parse_curve_spec("linear:E=1e9");
  opt.noise_std = 0.0;
  opt.count = 3;
  opt.strain_min = -0.002;
  opt.strain_max = 0.002;
  opt.sampling = StrainSampling::kEvenlySpaced;
  const MaterialDataset d = generate_synthetic(opt);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d[0].strain, -0.002);
  EXPECT_DOUBLE_EQ(d[1].strain, 0.0);
  EXPECT_DOUBLE_EQ(d[2].strain, 0.002);
  for (const auto& p : d.points()) EXPECT_EQ(p.stress, 1e9 * p.strain);
}

TEST(Dataset, SyntheticCubicNoiseless) {
  SyntheticOptions opt;
  opt.noise_std = 0.0;
  const MaterialDataset d = generate_synthetic(opt);
  EXPECT_EQ(d.size(), 300u);
  for (const auto& p : d.points()) {
    const double expect = 2e9 * p.strain - 4.6e12 * p.strain * p.strain * p.strain;
    EXPECT_NEAR(p.stress, expect, 1e-15 * 2e9 * 0.01 * 4);
    EXPECT_GE(p.strain, -0.01);
    EXPECT_LE(p.strain, 0.01);
  }
}

TEST(Dataset, SyntheticDeterministic) {
  SyntheticOptions opt;
  opt.seed = 42;
  const MaterialDataset a = generate_synthetic(opt);
  const MaterialDataset b = generate_synthetic(opt);
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].strain, b[j].strain);
    EXPECT_EQ(a[j].stress, b[j].stress);
  }
  opt.seed = 43;
  EXPECT_NE(generate_synthetic(opt)[0].strain, a[0].strain);
}

TEST(Dataset, CurveSpecParsing) {
  const CurveSpec cubic = parse_curve_spec("cubic_softening:E=3e9,beta=1e12");
  EXPECT_EQ(cubic.kind, CurveSpec::Kind::kCubicSoftening);
  EXPECT_DOUBLE_EQ(cubic.modulus, 3e9);
  EXPECT_DOUBLE_EQ(cubic.softening, 1e12);
  EXPECT_EQ(parse_curve_spec("linear:E=5").kind, CurveSpec::Kind::kLinear);
  EXPECT_EQ(kind_of([] { parse_curve_spec("spline:E=1"); }), ErrorKind::kInvalidCurveSpec);
  EXPECT_EQ(kind_of([] { parse_curve_spec("linear:E=abc"); }), ErrorKind::kInvalidCurveSpec);
}

TEST(Dataset, RejectsBadPoints) {
  EXPECT_EQ(kind_of([] { MaterialDataset d({}); }), ErrorKind::kEmptyDataset);
  EXPECT_THROW(MaterialDataset({{NAN, 0.0}}), Error);
}

}  // namespace
