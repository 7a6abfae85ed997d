#pragma once

#include <array>
#include <vector>

#include "fuzzymark/window.hpp"

namespace fuzzymark {

/// Magnitude statistics of one subband. Centre coefficients are normalised by
/// t0, 4-connected neighbours by t1 and diagonal neighbours by t2.
struct SubbandStats {
    double t0 = 0.0;  // mean |c|
    double t1 = 0.0;  // t0 + std(|c|) / 16
    double t2 = 0.0;  // t0 + std(|c|) / 8
};

SubbandStats subband_stats(CoeffWindow coeffs);

/// Nine normalised fuzzy coefficients of a 3x3 context. Index 0 is the centre;
/// 1..8 run row-major over the neighbours (1 top-left, 2 top, 3 top-right,
/// 4 left, 5 right, 6 bottom-left, 7 bottom, 8 bottom-right).
struct ContextWindow {
    std::array<double, 9> nfc{};
};

inline constexpr double kNfcDomainMax = 2.0;

/// `raw` holds coefficient magnitudes in the same slot order as ContextWindow.
ContextWindow normalize_context(const std::array<double, 9>& raw, const SubbandStats& stats);

inline constexpr double kMoreAlpha = 7.80375;
inline constexpr double kMoreBeta = 3.29596;

/// S-shaped "more of" modifier: 1 / (1 + exp(-(alpha z - beta))), z in [0, 1].
double mu_more(double z);

enum class Quality { VeryLow = 0, Low, Medium, High, VeryHigh };
inline constexpr int kQualityCount = 5;

/// Five triangular input sets over [0, 2] forming a partition of unity, plus
/// the output centre of each rule.
class MembershipPartition {
public:
    MembershipPartition(std::array<double, kQualityCount> input_peaks, double half_width,
                        std::array<double, kQualityCount> output_centers);

    static const MembershipPartition& standard();

    double membership(Quality q, double nfc) const;
    double center(Quality q) const { return centers_[static_cast<int>(q)]; }
    double peak(Quality q) const { return peaks_[static_cast<int>(q)]; }

private:
    std::array<double, kQualityCount> peaks_;
    double half_width_;
    std::array<double, kQualityCount> centers_;
};

using RuleActivations = std::array<double, kQualityCount>;

/// lambda_k = min{mu_k(x) : x in supp_k} * mu_more(|supp_k| / 9); zero when no
/// context member supports quality k.
RuleActivations rule_activation(const ContextWindow& ctx, const MembershipPartition& partition);

/// Unnormalised centre-weighted sum of the rule activations.
double entropy(const ContextWindow& ctx, const MembershipPartition& partition);

struct EntropyMap {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                      static_cast<std::size_t>(col)];
    }
};

/// Raw 3x3 magnitudes around (row, col), clamp-to-edge at the window border.
std::array<double, 9> context_magnitudes(CoeffWindow coeffs, int row, int col);

EntropyMap entropy_map(CoeffWindow coeffs, const SubbandStats& stats,
                       const MembershipPartition& partition = MembershipPartition::standard());

}  // namespace fuzzymark
