#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ddtruss {

/// One observed (strain, stress) pair; stress in Pa.
struct MaterialPoint {
  double strain = 0.0;
  double stress = 0.0;
};

/// Ordered material data set. Index j is stable: it is the order of the
/// source file and is what assignments refer to.
class MaterialDataset {
 public:
  /// Throws kEmptyDataset for an empty list and kParseError for non-finite values.
  explicit MaterialDataset(std::vector<MaterialPoint> points);

  std::size_t size() const { return points_.size(); }
  const MaterialPoint& operator[](std::size_t j) const { return points_[j]; }
  const std::vector<MaterialPoint>& points() const { return points_; }

 private:
  std::vector<MaterialPoint> points_;
};

/// Strains with |ε̌| at or below this are left out of the mean ratio.
inline constexpr double kZeroStrainTolerance = 1e-12;

/// Weighting constant c (Pa) plus how many zero-strain points were skipped.
struct Weighting {
  double c = 0.0;
  std::size_t skipped_zero_strain = 0;
};

/// c = mean of σ̌_j/ε̌_j over points with |ε̌_j| > kZeroStrainTolerance.
/// Throws kDegenerateDataset when no point qualifies or the mean is not positive.
Weighting compute_c(const MaterialDataset& dataset);

/// Parses "strain,stress" rows. A first line with no numeric cell is a header.
MaterialDataset parse_csv(std::istream& in, const std::string& source_name = "<stream>");
MaterialDataset load_csv(const std::filesystem::path& path);
void write_csv(const MaterialDataset& dataset, std::ostream& out);
void save_csv(const MaterialDataset& dataset, const std::filesystem::path& path);

/// (v·c/2)(ε−ε̌)² + (v/(2c))(σ−σ̌)²
inline double weighted_distance_sq(double strain, double stress, const MaterialPoint& point, double c,
                                   double volume) {
  const double de = strain - point.strain;
  const double ds = stress - point.stress;
  return 0.5 * volume * (c * de * de + ds * ds / c);
}

struct NearestPoint {
  std::size_t index = 0;
  double distance_sq = 0.0;
};

/// Closest allowed data point under the weighted metric; ties go to the
/// smaller index. Throws kEmptyAllowedSet if `allowed` is empty.
NearestPoint nearest_point(double strain, double stress, double c, double volume,
                           const MaterialDataset& dataset, std::span<const std::size_t> allowed);

/// Same, over the whole data set.
NearestPoint nearest_point(double strain, double stress, double c, double volume,
                           const MaterialDataset& dataset);

/// Stress-strain curve used to synthesize data.
struct CurveSpec {
  enum class Kind { kLinear, kCubicSoftening };
  Kind kind = Kind::kCubicSoftening;
  double modulus = 2.0e9;     // E, Pa
  double softening = 4.6e12;  // β, Pa; σ = Eε − βε³

  double stress(double strain) const;
};

/// Accepts "linear:E=<Pa>" and "cubic_softening:E=<Pa>,beta=<Pa>" (alias "cubic").
/// Throws kInvalidCurveSpec.
CurveSpec parse_curve_spec(const std::string& text);
std::string to_string(const CurveSpec& spec);

enum class StrainSampling { kUniformRandom, kEvenlySpaced };

struct SyntheticOptions {
  CurveSpec curve;
  std::size_t count = 300;
  double noise_std = 1.0e6;  // Pa
  std::uint64_t seed = 1;
  double strain_min = -0.01;
  double strain_max = 0.01;
  StrainSampling sampling = StrainSampling::kUniformRandom;
};

/// Deterministic for a fixed seed.
MaterialDataset generate_synthetic(const SyntheticOptions& options);

}  // namespace ddtruss
