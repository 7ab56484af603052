#pragma once

#include "fringe/types.hpp"

namespace fringe::unwrap {

/// Per-pixel reliability 1 / sqrt(H^2 + V^2 + D1^2 + D2^2) of wrapped second differences
/// (replicate padding at the border). Flat pixels get a large finite score.
Grid<double> reliability(const PhaseMap& wrapped);

/// Reliability-sorted, non-continuous-path unwrapping with region merging.
/// Output is wrapped + 2*pi*k per pixel; the most reliable pixel keeps its wrapped value.
PhaseMap unwrap(const PhaseMap& wrapped);

}  // namespace fringe::unwrap
