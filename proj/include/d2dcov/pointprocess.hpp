#pragma once

#include <cstddef>
#include <vector>

#include "d2dcov/geometry.hpp"
#include "d2dcov/rng.hpp"

namespace d2dcov {

/// A realization of a marked point process: node positions plus one
/// unit-mean exponential fading mark per node (Rayleigh amplitude fading
/// expressed as channel power gain).
struct PointPattern {
  std::vector<Point2> positions;
  std::vector<double> fading;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
};

/// Sample a homogeneous Poisson point process of the given intensity
/// (points per unit area) on an annulus, with fresh fading marks.
///
/// Draw order is fixed: the count comes from the kPointCount substream, then
/// two uniforms per point (radius via inverse CDF, angle) from kPositions,
/// then one exponential per point from kFadingMarks. `rng` addresses the
/// replication; substreams are derived internally.
PointPattern sample_ppp(const Annulus& region, double intensity,
                        const RngStream& rng);

/// Sample the cell user position, uniform over the annulus.
PolarPosition sample_cell_user(const Annulus& region, const RngStream& rng);

/// Sample `count` unit-mean exponential fading marks.
std::vector<double> sample_fading(std::size_t count, RngStream& rng);

}  // namespace d2dcov
