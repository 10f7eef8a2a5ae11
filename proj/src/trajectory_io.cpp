#include "nlocch/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlocch/field_io.hpp"

namespace nlocch {

namespace {

std::string snapshot_name(std::size_t k, const char* field) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu_%s.field", k, field);
  return buf;
}

template <class Traj>
std::vector<SnapshotRecord> records_of(const Traj& traj) {
  std::vector<SnapshotRecord> out;
  out.reserve(traj.size());
  for (const auto& s : traj) out.push_back(SnapshotRecord{s.time, s.phi, s.mu, s.sigma});
  return out;
}

}  // namespace

void write_trajectory(const std::filesystem::path& dir, const std::vector<SnapshotRecord>& snapshots) {
  std::filesystem::create_directories(dir);
  std::ofstream index(dir / "index.csv");
  if (!index) throw std::runtime_error("trajectory: cannot write " + (dir / "index.csv").string());
  index << "t,phi,mu,sigma\n";
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const auto& s = snapshots[k];
    const std::string phi = snapshot_name(k, "phi"), mu = snapshot_name(k, "mu"), sigma = snapshot_name(k, "sigma");
    write_field(dir / phi, s.phi);
    write_field(dir / mu, s.mu);
    write_field(dir / sigma, s.sigma);
    index << format_double(s.time) << ',' << phi << ',' << mu << ',' << sigma << '\n';
  }
}

std::vector<SnapshotRecord> read_trajectory(const std::filesystem::path& dir) {
  std::ifstream index(dir / "index.csv");
  if (!index) throw std::runtime_error("trajectory: cannot read " + (dir / "index.csv").string());
  std::string line;
  std::getline(index, line);
  if (line != "t,phi,mu,sigma") throw std::runtime_error("trajectory: unexpected index header '" + line + "'");
  std::vector<SnapshotRecord> out;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, phi, mu, sigma;
    std::getline(row, t, ',');
    std::getline(row, phi, ',');
    std::getline(row, mu, ',');
    std::getline(row, sigma, ',');
    out.push_back(SnapshotRecord{parse_double(t), read_field(dir / phi), read_field(dir / mu), read_field(dir / sigma)});
  }
  return out;
}

std::vector<SnapshotRecord> to_records(const LocalTrajectory& traj) { return records_of(traj); }
std::vector<SnapshotRecord> to_records(const NonlocalTrajectory& traj) { return records_of(traj); }

}  // namespace nlocch
