#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fuzzymark/attacks.hpp"
#include "fuzzymark/embedder.hpp"

namespace fuzzymark {

struct BenchRow {
    std::string attack;     // "none", "jpeg", "median", "sharpen"
    std::string parameter;  // quality, window, or "-"
    std::optional<double> correlation;  // empty when the extracted mark is constant
    double error_rate = 0.0;
};

struct BenchReport {
    double psnr = 0.0;
    int p = 0;
    int t = 0;
    std::vector<BenchRow> rows;
};

inline const std::vector<int> kDefaultBenchQualities = {100, 90, 80, 70, 60, 50, 40, 30, 20};

/// Embed once, then extract after each attack: no attack, JPEG-like at every
/// quality, median (window), sharpen.
BenchReport run_bench(const GrayImage& host, const BinaryWatermark& w, const EmbedParams& params = {},
                      const std::vector<int>& qualities = kDefaultBenchQualities, int median_window = 3);

/// Shortest round-trip decimal with a trailing ".0" for integral values; "inf" for infinity.
std::string format_number(double value);

/// Human-readable table, or key=value lines when `machine` is set.
std::string format_bench(const BenchReport& report, bool machine);

}  // namespace fuzzymark
