#include "fuzzymark/metrics.hpp"

#include <cmath>

#include "fuzzymark/error.hpp"

namespace fuzzymark {

namespace {

template <class A, class B>
void require_same_dims(const A& a, const B& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height())
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimensions differ (" +
                                                      std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                                      " vs " + std::to_string(b.width()) + "x" +
                                                      std::to_string(b.height()) + ")");
}

}  // namespace

double mean_squared_error(const GrayImage& a, const GrayImage& b) {
    require_same_dims(a, b, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.samples()[i]) - static_cast<double>(b.samples()[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
    const double mse = mean_squared_error(a, b);
    if (mse == 0.0) return kInfinitePsnr;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double correlation(const BinaryWatermark& extracted, const BinaryWatermark& original) {
    require_same_dims(extracted, original, "correlation");
    const auto n = static_cast<double>(extracted.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < extracted.size(); ++i) {
        mean_x += extracted.bits()[i];
        mean_y += original.bits()[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < extracted.size(); ++i) {
        const double dx = extracted.bits()[i] - mean_x;
        const double dy = original.bits()[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(ErrorKind::Degenerate, "correlation undefined for a constant watermark");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double error_rate(const BinaryWatermark& extracted, const BinaryWatermark& original) {
    require_same_dims(extracted, original, "error rate");
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < extracted.size(); ++i) mismatched += extracted.bits()[i] != original.bits()[i];
    return static_cast<double>(mismatched) / static_cast<double>(extracted.size());
}

}  // namespace fuzzymark
