#include "ddtruss/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string_view>

#include <fmt/format.h>

#include "ddtruss/error.hpp"

namespace ddtruss {

MaterialDataset::MaterialDataset(std::vector<MaterialPoint> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "material data set has no points");
  }
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (!std::isfinite(points_[j].strain) || !std::isfinite(points_[j].stress)) {
      throw Error(ErrorKind::kParseError, fmt::format("data point {} is not finite", j));
    }
  }
}

Weighting compute_c(const MaterialDataset& dataset) {
  Weighting w;
  double sum = 0.0;
  std::size_t used = 0;
  for (const MaterialPoint& p : dataset.points()) {
    if (std::abs(p.strain) <= kZeroStrainTolerance) {
      ++w.skipped_zero_strain;
      continue;
    }
    sum += p.stress / p.strain;
    ++used;
  }
  if (used == 0) {
    throw Error(ErrorKind::kDegenerateDataset, "no data point has a non-zero strain");
  }
  w.c = sum / static_cast<double>(used);
  if (!(w.c > 0.0) || !std::isfinite(w.c)) {
    throw Error(ErrorKind::kDegenerateDataset,
                fmt::format("mean stress/strain ratio is {} (must be positive)", w.c));
  }
  return w;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

MaterialDataset parse_csv(std::istream& in, const std::string& source_name) {
  std::vector<MaterialPoint> points;
  std::string line;
  std::size_t row = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = trim(line);
    if (row == 1 && view.size() >= 3 && static_cast<unsigned char>(view[0]) == 0xEF) {
      view.remove_prefix(3);  // UTF-8 BOM
    }
    if (view.empty()) continue;

    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::kParseError,
                  fmt::format("{}: row {}: expected exactly two comma-separated columns", source_name, row));
    }
    const auto strain = parse_number(view.substr(0, comma));
    const auto stress = parse_number(view.substr(comma + 1));
    if (first_content && !strain && !stress) {
      first_content = false;
      continue;  // header
    }
    first_content = false;
    if (!strain) {
      throw Error(ErrorKind::kParseError,
                  fmt::format("{}: row {}, column 1 (strain): '{}' is not a number", source_name, row,
                              trim(view.substr(0, comma))));
    }
    if (!stress) {
      throw Error(ErrorKind::kParseError,
                  fmt::format("{}: row {}, column 2 (stress): '{}' is not a number", source_name, row,
                              trim(view.substr(comma + 1))));
    }
    if (!std::isfinite(*strain) || !std::isfinite(*stress)) {
      throw Error(ErrorKind::kParseError, fmt::format("{}: row {}: non-finite value", source_name, row));
    }
    points.push_back({*strain, *stress});
  }
  if (points.empty()) {
    throw Error(ErrorKind::kEmptyDataset, fmt::format("{}: no data rows", source_name));
  }
  return MaterialDataset(std::move(points));
}

MaterialDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kParseError, fmt::format("cannot open data file {}", path.string()));
  }
  return parse_csv(in, path.string());
}

void write_csv(const MaterialDataset& dataset, std::ostream& out) {
  out << "strain,stress\n";
  for (const MaterialPoint& p : dataset.points()) {
    out << fmt::format("{},{}\n", p.strain, p.stress);
  }
}

void save_csv(const MaterialDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("cannot write {}", path.string()));
  }
  write_csv(dataset, out);
}

NearestPoint nearest_point(double strain, double stress, double c, double volume,
                           const MaterialDataset& dataset, std::span<const std::size_t> allowed) {
  if (allowed.empty()) {
    throw Error(ErrorKind::kEmptyAllowedSet, "nearest_point called with no allowed data points");
  }
  NearestPoint best{allowed.front(), weighted_distance_sq(strain, stress, dataset[allowed.front()], c, volume)};
  for (std::size_t k = 1; k < allowed.size(); ++k) {
    const std::size_t j = allowed[k];
    const double d = weighted_distance_sq(strain, stress, dataset[j], c, volume);
    if (d < best.distance_sq || (d == best.distance_sq && j < best.index)) {
      best = {j, d};
    }
  }
  return best;
}

NearestPoint nearest_point(double strain, double stress, double c, double volume,
                           const MaterialDataset& dataset) {
  NearestPoint best{0, weighted_distance_sq(strain, stress, dataset[0], c, volume)};
  for (std::size_t j = 1; j < dataset.size(); ++j) {
    const double d = weighted_distance_sq(strain, stress, dataset[j], c, volume);
    if (d < best.distance_sq) {
      best = {j, d};
    }
  }
  return best;
}

double CurveSpec::stress(double strain) const {
  switch (kind) {
    case Kind::kLinear:
      return modulus * strain;
    case Kind::kCubicSoftening:
      return modulus * strain - softening * strain * strain * strain;
  }
  return 0.0;
}

CurveSpec parse_curve_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  CurveSpec spec;
  if (name == "linear") {
    spec.kind = CurveSpec::Kind::kLinear;
    spec.softening = 0.0;
  } else if (name == "cubic_softening" || name == "cubic") {
    spec.kind = CurveSpec::Kind::kCubicSoftening;
  } else {
    throw Error(ErrorKind::kInvalidCurveSpec, fmt::format("unknown curve '{}'", name));
  }

  bool have_modulus = false;
  bool have_softening = false;
  if (colon != std::string::npos) {
    std::string_view params = std::string_view(text).substr(colon + 1);
    while (!params.empty()) {
      const auto comma = params.find(',');
      const std::string_view item = trim(params.substr(0, comma));
      params = comma == std::string_view::npos ? std::string_view{} : params.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorKind::kInvalidCurveSpec, fmt::format("parameter '{}' has no value", item));
      }
      const std::string_view key = trim(item.substr(0, eq));
      const auto value = parse_number(item.substr(eq + 1));
      if (!value || !std::isfinite(*value)) {
        throw Error(ErrorKind::kInvalidCurveSpec, fmt::format("parameter '{}' is not a number", key));
      }
      if (key == "E") {
        spec.modulus = *value;
        have_modulus = true;
      } else if (key == "beta" && spec.kind == CurveSpec::Kind::kCubicSoftening) {
        spec.softening = *value;
        have_softening = true;
      } else {
        throw Error(ErrorKind::kInvalidCurveSpec, fmt::format("unknown parameter '{}' for {}", key, name));
      }
    }
  }
  if (spec.kind == CurveSpec::Kind::kLinear && !have_modulus) {
    throw Error(ErrorKind::kInvalidCurveSpec, "linear curve needs E");
  }
  if (spec.kind == CurveSpec::Kind::kCubicSoftening && (have_modulus != have_softening)) {
    throw Error(ErrorKind::kInvalidCurveSpec, "cubic_softening needs both E and beta (or neither for defaults)");
  }
  if (!(spec.modulus > 0.0)) {
    throw Error(ErrorKind::kInvalidCurveSpec, "E must be positive");
  }
  if (spec.softening < 0.0) {
    throw Error(ErrorKind::kInvalidCurveSpec, "beta must be non-negative");
  }
  return spec;
}

std::string to_string(const CurveSpec& spec) {
  if (spec.kind == CurveSpec::Kind::kLinear) {
    return fmt::format("linear:E={}", spec.modulus);
  }
  return fmt::format("cubic_softening:E={},beta={}", spec.modulus, spec.softening);
}

MaterialDataset generate_synthetic(const SyntheticOptions& options) {
  if (options.count == 0) {
    throw Error(ErrorKind::kInvalidArgument, "synthetic data set needs at least one point");
  }
  if (!(options.noise_std >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "noise standard deviation must be non-negative");
  }
  if (!(options.strain_max >= options.strain_min)) {
    throw Error(ErrorKind::kInvalidArgument, "strain range is empty");
  }
  if (!(options.curve.modulus > 0.0) || options.curve.softening < 0.0) {
    throw Error(ErrorKind::kInvalidCurveSpec, "curve parameters out of range");
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> strain_dist(options.strain_min, options.strain_max);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<MaterialPoint> points;
  points.reserve(options.count);
  for (std::size_t k = 0; k < options.count; ++k) {
    double strain = 0.0;
    if (options.sampling == StrainSampling::kEvenlySpaced) {
      strain = options.count == 1
                   ? 0.5 * (options.strain_min + options.strain_max)
                   : options.strain_min + (options.strain_max - options.strain_min) * static_cast<double>(k) /
                                              static_cast<double>(options.count - 1);
    } else {
      strain = strain_dist(rng);
    }
    double stress = options.curve.stress(strain);
    if (options.noise_std > 0.0) {
      stress += options.noise_std * noise(rng);
    }
    points.push_back({strain, stress});
  }
  return MaterialDataset(std::move(points));
}

}  // namespace ddtruss
