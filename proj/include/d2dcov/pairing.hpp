#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "d2dcov/pointprocess.hpp"
#include "d2dcov/rng.hpp"
#include "d2dcov/simconfig.hpp"

namespace d2dcov {

/// One matched pair of node indices with their separation.
struct Pair {
  std::size_t a = 0;  // a < b by construction
  std::size_t b = 0;
  double separation = 0.0;
};

struct PairingResult {
  std::vector<Pair> pairs;            // in acceptance (ascending-distance) order
  std::vector<std::size_t> unpaired;  // ascending node indices
};

/// Greedy distance matching: scan all candidate pairs in ascending order of
/// separation (ties broken lexicographically on the index pair) and accept a
/// pair when its separation is at most mu and neither endpoint is matched yet.
///
/// Deterministic for a given pattern. Acceptances are a prefix-stable set:
/// the matching at threshold mu equals the pairs of the unthresholded greedy
/// scan whose separation is at most mu.
PairingResult pair_nodes(const PointPattern& pattern, double mu);

/// Pick one transmitting member per pair by a fair coin, drawn from the
/// kTransmitterCoin substream of `rng` in pair order.
std::vector<std::size_t> select_transmitters(const PairingResult& pairing,
                                             const RngStream& rng);

/// Empirical retention at one pairing range.
struct RetentionEstimate {
  double mu = 0.0;
  double probability = 0.0;    // mean over replications of the paired fraction
  double half_width_95 = 0.0;  // normal-approximation 95% confidence half-width
  int replications = 0;        // replications that had at least one candidate
  bool defined = false;        // false when every replication was empty
};

struct RetentionCurve {
  std::vector<RetentionEstimate> points;  // one per mu, in grid order
};

/// Estimate the fraction of candidate nodes that end up paired, for each mu
/// in the grid, by repeated sampling. One point pattern is drawn per
/// replication and shared across the whole grid. With EdgeMode::kGuardRing,
/// candidates in [R, R + mu] take part in pairing but the paired fraction is
/// counted over in-cell nodes only.
RetentionCurve estimate_retention(const SimConfig& config,
                                  std::span<const double> mu_grid,
                                  int replications);

}  // namespace d2dcov
