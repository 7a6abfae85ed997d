#pragma once

#include <array>
#include <string>

#include "fuzzymark/image.hpp"

namespace fuzzymark {

enum class AttackKind { JpegLike, Median, Sharpen };

struct AttackSpec {
    AttackKind kind = AttackKind::JpegLike;
    int quality = 75;  // JpegLike
    int window = 3;    // Median

    static AttackSpec jpeg(int quality) { return {AttackKind::JpegLike, quality, 0}; }
    static AttackSpec median(int window = 3) { return {AttackKind::Median, 0, window}; }
    static AttackSpec sharpen() { return {AttackKind::Sharpen, 0, 0}; }
};

/// Baseline JPEG luminance quantisation table in row-major (not zig-zag) order.
extern const std::array<int, 64> kJpegLuminanceTable;

/// Standard IJG quality scaling of the luminance table (quality 1..100).
std::array<int, 64> jpeg_quant_table(int quality);

/// Block DCT quantise/dequantise round trip emulating baseline JPEG at the
/// given quality. Non-multiple-of-8 images are edge padded, then cropped.
GrayImage jpeg_like(const GrayImage& img, int quality);

/// window x window median with clamp-to-edge borders; window must be odd and >= 3.
GrayImage median_filter(const GrayImage& img, int window = 3);

/// 5-point Laplacian sharpening [0 -1 0; -1 5 -1; 0 -1 0], clamp-to-edge borders.
GrayImage sharpen(const GrayImage& img);

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec);

AttackKind parse_attack_kind(const std::string& name);

}  // namespace fuzzymark
