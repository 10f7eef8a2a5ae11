#pragma once

#include <filesystem>
#include <vector>

#include "nlocch/solver_local.hpp"
#include "nlocch/solver_nonlocal.hpp"

namespace nlocch {

/// A stored snapshot: time plus the three fields.
struct SnapshotRecord {
  double time = 0.0;
  Field phi;
  Field mu;
  Field sigma;
};

/// Writes snapshot_<k>_{phi,mu,sigma}.field files and an index.csv with
/// columns  t,phi,mu,sigma  (t printed round-trip exact, file names relative).
void write_trajectory(const std::filesystem::path& dir, const std::vector<SnapshotRecord>& snapshots);
std::vector<SnapshotRecord> read_trajectory(const std::filesystem::path& dir);

std::vector<SnapshotRecord> to_records(const LocalTrajectory& traj);
std::vector<SnapshotRecord> to_records(const NonlocalTrajectory& traj);

}  // namespace nlocch
