#pragma once

#include <cstdint>
#include <stdexcept>

#include "d2dcov/analytic.hpp"

namespace d2dcov {

/// How the simulator treats pairing near the cell boundary.
enum class EdgeMode {
  kNone,       // candidates exist only inside the cell; boundary nodes lose
               // potential partners that would fall outside
  kGuardRing,  // candidates are also sampled in an annular ring of width mu
               // outside the boundary for pairing eligibility; ring nodes
               // never transmit and are not counted in retention
};

/// Which simulated nodes radiate in the thinned (paired-activity) mode.
enum class InterfererPolicy {
  kRetainedNodes,  // every member of a matched pair transmits; the interferer
                   // density then equals lambda times the retention
                   // probability, matching the analytic model (default)
  kTransmitters,   // one coin-picked member per pair transmits, halving the
                   // interferer density relative to the analytic model
};

/// Simulation controls. The physical model lives in `model`; everything here
/// is about how the estimate is produced.
struct SimConfig {
  ModelParams model;
  int replications = 3000;
  std::uint64_t master_seed = 1;

  /// Outer radius of the simulated interferer field. Zero means "use the cell
  /// radius". Values beyond the cell radius approximate the unbounded field
  /// assumed by the closed forms; the cell user always stays in the cell.
  double sim_radius = 0.0;

  EdgeMode edge_mode = EdgeMode::kNone;
  InterfererPolicy interferer_policy = InterfererPolicy::kRetainedNodes;

  /// Worker threads for replication batches; 0 means one per hardware thread.
  /// Results are independent of the worker count.
  int workers = 1;

  double effective_sim_radius() const {
    return sim_radius == 0.0 ? model.cell_radius : sim_radius;
  }

  void validate() const {
    model.validate();
    if (replications < 1)
      throw std::invalid_argument("SimConfig: replications must be >= 1");
    if (sim_radius != 0.0 && sim_radius < model.cell_radius)
      throw std::invalid_argument(
          "SimConfig: sim_radius must be 0 or >= the cell radius");
    if (workers < 0)
      throw std::invalid_argument("SimConfig: workers must be >= 0");
  }
};

}  // namespace d2dcov
