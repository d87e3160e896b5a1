#pragma once

#include "polykin/inertialess.hpp"
#include "polykin/langevin.hpp"
#include "polykin/stress.hpp"
#include "polykin/transport.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace polykin::io {

/// Create the directory (and parents) if missing; throws std::runtime_error
/// on failure.
void ensure_directory(const std::string& dir);

/// Stress profile: columns y, tau_xx, tau_xy, tau_yy, p_p, N. A comment
/// header line declares the units.
void write_stress_csv(const std::string& path, const StressField& st);

/// Macroscopic profile time series: one row per (snapshot, cell) with
/// t, y, N, phi, vs_x, vs_y, vp_x, vp_y, u_x, tau_xx, tau_xy, tau_yy, p_p, p.
void write_profile_csv(const std::string& path, const std::vector<FieldProfile>& snapshots,
                       const std::vector<double>& times);

/// Bead-level ensemble snapshot: t, particle, r1x..V2y.
void write_ensemble_csv(const std::string& path, const EnsembleInertial& ens);

/// Configuration-level ensemble snapshot: t, particle, x, y, qx, qy.
void write_ensemble_csv(const std::string& path, const EnsembleInertialess& ens);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& j);

} // namespace polykin::io
