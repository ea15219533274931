#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "tskit/series.hpp"

namespace tskit {

struct SymbolicParams {
    std::size_t window;      // sliding window length w
    std::size_t word_length; // PAA segments l, must divide w
    std::size_t alphabet;    // symbols a, 2..10
};

/// a-quantile breakpoints of the standard normal: beta_i = Phi^{-1}(i/a),
/// i = 1..a-1, ascending.
std::vector<double> gaussian_breakpoints(std::size_t alphabet);

/// One window -> one word: z-normalize, average into word_length segments,
/// map each segment mean to a letter ('a' lowest). A window with std below
/// 1e-8 maps every segment to the lower-middle letter.
std::string discretize_window(std::span<const double> window, const SymbolicParams& params);

struct PatternHistogram {
    std::map<std::string, std::size_t> counts;
    SymbolicParams params;
    std::size_t total_windows = 0; // all N - w + 1 offsets, before reduction
};

/// Slide the window with stride 1. With numerosity reduction (the default),
/// a run of identical consecutive words counts once.
PatternHistogram bag_of_patterns(const TimeSeries& x, const SymbolicParams& params,
                                 bool numerosity_reduction = true);

/// Euclidean distance between relative-frequency vectors over the union of
/// keys. Requires identical params on both sides (ParamMismatchError).
double histogram_distance(const PatternHistogram& a, const PatternHistogram& b);

} // namespace tskit
