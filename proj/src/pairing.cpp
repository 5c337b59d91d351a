#include "d2dcov/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace d2dcov {

namespace {

struct Edge {
  double dist_sq;
  std::size_t a;
  std::size_t b;
};

}  // namespace

PairingResult pair_nodes(const PointPattern& pattern, double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("pair_nodes: mu must be >= 0");

  const std::size_t n = pattern.size();
  const double mu_sq = mu * mu;

  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = distance_sq(pattern.positions[i], pattern.positions[j]);
      if (d2 <= mu_sq) edges.push_back({d2, i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.dist_sq, x.a, x.b) < std::tie(y.dist_sq, y.a, y.b);
  });

  PairingResult result;
  std::vector<bool> matched(n, false);
  for (const Edge& e : edges) {
    if (matched[e.a] || matched[e.b]) continue;
    matched[e.a] = matched[e.b] = true;
    result.pairs.push_back({e.a, e.b, std::sqrt(e.dist_sq)});
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!matched[i]) result.unpaired.push_back(i);
  return result;
}

std::vector<std::size_t> select_transmitters(const PairingResult& pairing,
                                             const RngStream& rng) {
  RngStream coin_stream = rng.substream(StreamPurpose::kTransmitterCoin);
  std::vector<std::size_t> transmitters;
  transmitters.reserve(pairing.pairs.size());
  for (const Pair& p : pairing.pairs)
    transmitters.push_back(coin_stream.coin() ? p.a : p.b);
  return transmitters;
}

RetentionCurve estimate_retention(const SimConfig& config,
                                  std::span<const double> mu_grid,
                                  int replications) {
  config.validate();
  if (replications < 1)
    throw std::invalid_argument("estimate_retention: replications must be >= 1");
  for (double mu : mu_grid)
    if (!(mu >= 0.0))
      throw std::invalid_argument("estimate_retention: mu must be >= 0");

  RetentionCurve curve;
  if (mu_grid.empty()) return curve;

  const ModelParams& model = config.model;
  const bool guard = config.edge_mode == EdgeMode::kGuardRing;
  const double mu_max = *std::max_element(mu_grid.begin(), mu_grid.end());
  const Annulus sample_region(model.inner_radius,
                              model.cell_radius + (guard ? mu_max : 0.0));
  const double cell_r_sq = model.cell_radius * model.cell_radius;

  // Per-mu list of per-replication paired fractions (in-cell nodes only).
  std::vector<std::vector<double>> fractions(mu_grid.size());

  for (int rep = 0; rep < replications; ++rep) {
    const RngStream rng(config.master_seed, static_cast<std::uint64_t>(rep));
    const PointPattern pattern = sample_ppp(sample_region, model.lambda, rng);

    std::size_t in_cell = 0;
    for (const Point2& p : pattern.positions)
      if (p.radius_sq() <= cell_r_sq) ++in_cell;
    if (in_cell == 0) continue;

    for (std::size_t g = 0; g < mu_grid.size(); ++g) {
      const double mu = mu_grid[g];

      // At range mu only nodes within R + mu are eligible; farther ring nodes
      // cannot reach the cell and must not compete for partners.
      PointPattern eligible;
      std::vector<bool> eligible_in_cell;
      if (guard) {
        const double limit_sq =
            (model.cell_radius + mu) * (model.cell_radius + mu);
        for (const Point2& p : pattern.positions) {
          const double r2 = p.radius_sq();
          if (r2 <= limit_sq) {
            eligible.positions.push_back(p);
            eligible_in_cell.push_back(r2 <= cell_r_sq);
          }
        }
      }
      const PointPattern& active = guard ? eligible : pattern;

      const PairingResult pairing = pair_nodes(active, mu);
      std::size_t paired_in_cell = 0;
      for (const Pair& p : pairing.pairs) {
        if (guard) {
          paired_in_cell += eligible_in_cell[p.a] ? 1 : 0;
          paired_in_cell += eligible_in_cell[p.b] ? 1 : 0;
        } else {
          paired_in_cell += 2;
        }
      }
      fractions[g].push_back(static_cast<double>(paired_in_cell) /
                             static_cast<double>(in_cell));
    }
  }

  for (std::size_t g = 0; g < mu_grid.size(); ++g) {
    RetentionEstimate est;
    est.mu = mu_grid[g];
    est.replications = static_cast<int>(fractions[g].size());
    est.defined = est.replications > 0;
    if (est.defined) {
      double sum = 0.0;
      for (double f : fractions[g]) sum += f;
      const double mean = sum / est.replications;
      est.probability = mean;
      if (est.replications > 1) {
        double ss = 0.0;
        for (double f : fractions[g]) ss += (f - mean) * (f - mean);
        const double sd = std::sqrt(ss / (est.replications - 1));
        est.half_width_95 = 1.96 * sd / std::sqrt(est.replications);
      }
    }
    curve.points.push_back(est);
  }
  return curve;
}

}  // namespace d2dcov
