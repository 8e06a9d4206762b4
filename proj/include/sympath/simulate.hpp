#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "sympath/path_bundle.hpp"
#include "sympath/process_spec.hpp"
#include "sympath/time_grid.hpp"

namespace sympath {

enum class Storage { Lazy, Materialized };

/// Independent standard Brownian components "W" (one) or "W1", "W2" (two).
/// Component c of path p is driven by substream (seed, p, c), the same
/// substream the catalog processes use for their c-th driver.
PathBundle simulate_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                             unsigned n_components = 1, Storage storage = Storage::Lazy);

/// Catalog process paths. GBM is exact on the grid; OconeSV uses Euler with
/// full truncation; CubicBM and LevyArea use left-point Ito sums. Every
/// process carries "QV" (the conditional-variance compensator of its
/// martingale component), "X" = log S and "S".
///
/// With Storage::Lazy, non-finite values surface as SimulationFailure when a
/// consumer loads the offending path.
PathBundle simulate_process(const ProcessSpec& spec, const TimeGrid& grid, std::size_t n_paths,
                            std::uint64_t seed, Storage storage = Storage::Lazy);

/// Continues path `path_index` from grid index `from` to T on the restart
/// substream `restart`, using the state stored in `path`. Returns the terminal
/// value of `component`. GBM restarts jump to T exactly.
double restart_terminal(const ProcessSpec& spec, const TimeGrid& grid, std::uint64_t seed,
                        std::size_t path_index, const PathBuffer& path, std::size_t from, std::uint32_t restart,
                        std::size_t component, PathBuffer& work);

}  // namespace sympath
