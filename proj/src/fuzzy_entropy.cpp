#include "fuzzymark/fuzzy_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzymark/error.hpp"

namespace fuzzymark {

namespace {

// Slot order of ContextWindow mapped to (row, col) offsets.
constexpr std::array<std::array<int, 2>, 9> kContextOffsets = {{
    {0, 0},
    {-1, -1}, {-1, 0}, {-1, 1},
    {0, -1}, {0, 1},
    {1, -1}, {1, 0}, {1, 1},
}};

constexpr bool is_edge_neighbor(int slot) { return slot == 2 || slot == 4 || slot == 5 || slot == 7; }

}  // namespace

SubbandStats subband_stats(CoeffWindow coeffs) {
    const int count = coeffs.count();
    if (count == 0) throw Error(ErrorKind::Parameter, "subband statistics of an empty window");

    double sum = 0.0;
    for (int r = 0; r < coeffs.rows(); ++r)
        for (int c = 0; c < coeffs.cols(); ++c) sum += std::abs(coeffs(r, c));
    const double mean = sum / count;

    double sq = 0.0;
    for (int r = 0; r < coeffs.rows(); ++r) {
        for (int c = 0; c < coeffs.cols(); ++c) {
            const double d = std::abs(coeffs(r, c)) - mean;
            sq += d * d;
        }
    }
    const double stddev = std::sqrt(sq / count);
    return {mean, mean + stddev / 16.0, mean + stddev / 8.0};
}

ContextWindow normalize_context(const std::array<double, 9>& raw, const SubbandStats& stats) {
    if (!(stats.t0 > 0.0))
        throw Error(ErrorKind::Degenerate, "subband has zero mean magnitude; entropy is undefined");
    ContextWindow ctx;
    for (int slot = 0; slot < 9; ++slot) {
        if (raw[slot] < 0.0 || !std::isfinite(raw[slot]))
            throw Error(ErrorKind::Parameter, "context magnitudes must be finite and non-negative");
        const double divisor = slot == 0 ? stats.t0 : is_edge_neighbor(slot) ? stats.t1 : stats.t2;
        ctx.nfc[slot] = std::min(raw[slot] / divisor, kNfcDomainMax);
    }
    return ctx;
}

double mu_more(double z) {
    if (!(z >= 0.0 && z <= 1.0)) throw Error(ErrorKind::Parameter, "mu_more argument must lie in [0, 1]");
    return 1.0 / (1.0 + std::exp(-(kMoreAlpha * z - kMoreBeta)));
}

MembershipPartition::MembershipPartition(std::array<double, kQualityCount> input_peaks, double half_width,
                                         std::array<double, kQualityCount> output_centers)
    : peaks_(input_peaks), half_width_(half_width), centers_(output_centers) {
    if (!(half_width > 0.0)) throw Error(ErrorKind::Parameter, "membership half-width must be positive");
    for (int k = 1; k < kQualityCount; ++k) {
        if (!(peaks_[k] > peaks_[k - 1]) || !(centers_[k] > centers_[k - 1]))
            throw Error(ErrorKind::Parameter, "membership peaks and output centres must increase");
    }
}

const MembershipPartition& MembershipPartition::standard() {
    static const MembershipPartition partition({0.0, 0.5, 1.0, 1.5, 2.0}, 0.5, {0.1, 0.3, 0.5, 0.7, 0.9});
    return partition;
}

double MembershipPartition::membership(Quality q, double nfc) const {
    const int k = static_cast<int>(q);
    const double x = std::clamp(nfc, peaks_.front(), peaks_.back());
    // Shoulders: the outermost sets saturate beyond their peaks.
    if (k == 0 && x <= peaks_[0]) return 1.0;
    if (k == kQualityCount - 1 && x >= peaks_[k]) return 1.0;
    const double d = std::abs(x - peaks_[k]);
    return d >= half_width_ ? 0.0 : 1.0 - d / half_width_;
}

RuleActivations rule_activation(const ContextWindow& ctx, const MembershipPartition& partition) {
    RuleActivations lambda{};
    for (int k = 0; k < kQualityCount; ++k) {
        const auto q = static_cast<Quality>(k);
        int support = 0;
        double weakest = std::numeric_limits<double>::infinity();
        for (double x : ctx.nfc) {
            const double mu = partition.membership(q, x);
            if (mu > 0.0) {
                ++support;
                weakest = std::min(weakest, mu);
            }
        }
        lambda[k] = support == 0 ? 0.0 : weakest * mu_more(support / 9.0);
    }
    return lambda;
}

double entropy(const ContextWindow& ctx, const MembershipPartition& partition) {
    const RuleActivations lambda = rule_activation(ctx, partition);
    double en = 0.0;
    for (int k = 0; k < kQualityCount; ++k) en += partition.center(static_cast<Quality>(k)) * lambda[k];
    return en;
}

std::array<double, 9> context_magnitudes(CoeffWindow coeffs, int row, int col) {
    std::array<double, 9> raw{};
    for (int slot = 0; slot < 9; ++slot) {
        const int r = std::clamp(row + kContextOffsets[slot][0], 0, coeffs.rows() - 1);
        const int c = std::clamp(col + kContextOffsets[slot][1], 0, coeffs.cols() - 1);
        raw[slot] = std::abs(coeffs(r, c));
    }
    return raw;
}

EntropyMap entropy_map(CoeffWindow coeffs, const SubbandStats& stats, const MembershipPartition& partition) {
    if (coeffs.count() == 0) throw Error(ErrorKind::Parameter, "entropy map of an empty window");
    if (!(stats.t0 > 0.0))
        throw Error(ErrorKind::Degenerate, "subband is all zero; entropy is undefined");
    EntropyMap map{coeffs.rows(), coeffs.cols(), std::vector<double>(static_cast<std::size_t>(coeffs.count()))};
    for (int r = 0; r < coeffs.rows(); ++r) {
        for (int c = 0; c < coeffs.cols(); ++c) {
            const ContextWindow ctx = normalize_context(context_magnitudes(coeffs, r, c), stats);
            map.values[static_cast<std::size_t>(r) * coeffs.cols() + c] = entropy(ctx, partition);
        }
    }
    return map;
}

}  // namespace fuzzymark
