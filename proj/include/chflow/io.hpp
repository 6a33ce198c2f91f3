// File formats.
//
// Profile ("chflow profile"): one node per line as `x=<v> p=<v> [h=<v>]`,
// `#` comments; nodes must come sorted by x, NaN/inf rejected.
//
// Measure: one atom per line as `<lambda> <gamma>`; a `# log` directive line
// switches the second column to log-gamma. Output carries 17 significant
// digits.
//
// Sampled string: `<grid> <w>` pairs, then an optional `atoms` section of
// `<pos> <mass>` pairs and an optional `tail_bound <v>` line.
//
// Trajectory CSV columns: t,node,x,p,h. Ledger CSV columns are the conserved
// record fields. Both have full-precision JSON mirrors.
#pragma once

#include <string>

#include "chflow/verifier.hpp"

namespace chflow {

PeakonProfile read_profile(const std::string& path);
void write_profile(const std::string& path, const PeakonProfile& profile);

SpectralMeasure read_measure(const std::string& path);
void write_measure(const std::string& path, const SpectralMeasure& rho, bool log_domain = false);

SampledString read_sampled_string(const std::string& path);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_trajectory_json(const std::string& path, const Trajectory& traj);
void write_ledger_csv(const std::string& path, const Trajectory& traj);
void write_ledger_json(const std::string& path, const Trajectory& traj);

void write_audit_csv(const std::string& path, const AuditTable& table);
void write_audit_json(const std::string& path, const AuditTable& table);

}  // namespace chflow
