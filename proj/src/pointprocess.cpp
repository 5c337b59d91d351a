#include "d2dcov/pointprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace d2dcov {

namespace {

/// Radius with density proportional to r on [inner, outer]: inverse CDF of
/// the radial marginal of a uniform draw on the annulus.
double sample_radius(const Annulus& region, double u) {
  const double r0sq = region.inner_radius * region.inner_radius;
  const double rsq = region.outer_radius * region.outer_radius;
  return std::sqrt(r0sq + u * (rsq - r0sq));
}

}  // namespace

PointPattern sample_ppp(const Annulus& region, double intensity,
                        const RngStream& rng) {
  if (!(intensity >= 0.0))
    throw std::invalid_argument("sample_ppp: intensity must be >= 0");

  RngStream count_stream = rng.substream(StreamPurpose::kPointCount);
  const std::uint64_t n = count_stream.poisson(intensity * region.area());

  PointPattern pattern;
  pattern.positions.reserve(n);

  RngStream pos_stream = rng.substream(StreamPurpose::kPositions);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = sample_radius(region, pos_stream.uniform01());
    const double theta = pos_stream.uniform(0.0, 2.0 * M_PI);
    pattern.positions.push_back(PolarPosition{r, theta}.to_cartesian());
  }

  RngStream fading_stream = rng.substream(StreamPurpose::kFadingMarks);
  pattern.fading = sample_fading(n, fading_stream);
  return pattern;
}

PolarPosition sample_cell_user(const Annulus& region, const RngStream& rng) {
  RngStream stream = rng.substream(StreamPurpose::kCellUser);
  const double r = sample_radius(region, stream.uniform01());
  const double theta = stream.uniform(0.0, 2.0 * M_PI);
  return {r, theta};
}

std::vector<double> sample_fading(std::size_t count, RngStream& rng) {
  std::vector<double> marks(count);
  for (double& m : marks) m = rng.exponential();
  return marks;
}

}  // namespace d2dcov
