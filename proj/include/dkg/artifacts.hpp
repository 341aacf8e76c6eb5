#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "dkg/evolve.hpp"
#include "dkg/ground_state.hpp"

namespace dkg {

/// Full round-trip decimal formatting ("%.17g") used by every artifact so
/// repeated runs produce byte-identical files.
std::string format_g17(double x);

/// Per-sample CSV: t, E, E_L, K, J, L4, A_cum, plain norms, then the
/// restricted integrals.
void write_series_csv(const RunSeries& series, std::ostream& os);

/// ---- ground-state cache (versioned text table) -----------------------------
/// Header line, then grid parameters + tolerance (the cache key), then the
/// scalar summary, then one "q qp" row per node, all at full precision.

void write_ground_state_cache(const GroundState& gs, const std::filesystem::path& path);

/// Returns the cached ground state when the file exists, parses, and its key
/// (r_max, n, tol) matches; empty otherwise.
std::optional<GroundState> load_ground_state_cache(const std::filesystem::path& path,
                                                   const RadialGrid& g, double tol);

/// Load-or-shoot-and-save.  An empty path disables caching.
GroundState obtain_ground_state(const RadialGrid& g, double tol,
                                const std::filesystem::path& cache_path);

} // namespace dkg
