#pragma once

#include <limits>

#include "fuzzymark/image.hpp"

namespace fuzzymark {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE); kInfinitePsnr for identical images.
double psnr(const GrayImage& a, const GrayImage& b);
double mean_squared_error(const GrayImage& a, const GrayImage& b);

/// Pearson correlation of the two bit patterns. Throws Degenerate when either
/// pattern is constant.
double correlation(const BinaryWatermark& extracted, const BinaryWatermark& original);

/// Fraction of mismatched bits.
double error_rate(const BinaryWatermark& extracted, const BinaryWatermark& original);

struct MetricReport {
    double psnr = kInfinitePsnr;
    double correlation = 0.0;
    double error_rate = 0.0;
};

}  // namespace fuzzymark
