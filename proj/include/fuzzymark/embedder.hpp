#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fuzzymark/dwt.hpp"
#include "fuzzymark/fuzzy_entropy.hpp"
#include "fuzzymark/image.hpp"

namespace fuzzymark {

struct EmbedParams {
    SubbandId subband{Orientation::HL, 3};
    int levels = 3;
    int tau = 16;  // data coefficients between consecutive references
    Wavelet wavelet = Wavelet::Haar;

    bool operator==(const EmbedParams&) const = default;
};

/// Position inside the embedding subband.
struct Coord {
    int row = 0;
    int col = 0;
    bool operator==(const Coord&) const = default;
};

/// A run of data coefficients in sorted order, bracketed by two references.
/// All indices are 0-based positions in the sorted alternative sequence.
struct CastingBlock {
    int lower_ref = 0;
    int first_data = 0;
    int data_count = 0;
    int upper_ref = 0;
};

struct CastingLayout {
    int n = 0;
    int tau = 0;
    int t = 0;  // reference count
    int p = 0;  // n + t
    std::vector<CastingBlock> blocks;

    std::vector<int> reference_indices() const;
    std::vector<int> data_indices() const;
};

/// t = n/tau + 1 when tau divides n, n/tau + 2 otherwise.
int reference_count(int n, int tau);
CastingLayout casting_layout(int n, int tau);

/// Side information for blind extraction.
struct WatermarkKey {
    static constexpr int kVersion = 1;

    EmbedParams params;
    int n = 0;
    int t = 0;
    int wm_width = 0;
    int wm_height = 0;
    int img_width = 0;
    int img_height = 0;
    std::vector<Coord> positions;  // p entries in sorted-magnitude order
    std::vector<double> v;         // one strength per data position, in casting order
    std::vector<int> wm_perm;      // sorted-watermark index -> original pixel index

    int p() const noexcept { return n + t; }
    bool operator==(const WatermarkKey&) const = default;
};

/// Throws CorruptKey (or Parameter for bad parameters) if the key is not self-consistent.
void validate_key(const WatermarkKey& key);

struct SortedWatermark {
    std::vector<std::uint8_t> bits;  // ascending
    std::vector<int> perm;           // bits[i] == original.bits()[perm[i]]
};

/// Stable ascending sort of the watermark bits.
SortedWatermark sort_watermark(const BinaryWatermark& w);
BinaryWatermark unsort_watermark(const std::vector<std::uint8_t>& sorted_bits, const std::vector<int>& perm,
                                 int width, int height);

/// Top-p positions by entropy (ties: row-major first), returned in ascending
/// coefficient magnitude (ties: row-major first).
std::vector<Coord> select_coefficients(CoeffWindow coeffs, const EntropyMap& emap, int p);

/// Coefficient-domain result of casting a watermark; no pixel rounding yet.
struct Casting {
    WaveletPyramid pyramid;        // host pyramid with data coefficients replaced
    WatermarkKey key;
    std::vector<double> targets;   // signed coefficient value at each key position
};

Casting cast_watermark(const WaveletPyramid& host, const BinaryWatermark& w, const EmbedParams& params);

/// Pixel-domain footprint of one coefficient: offsets (relative to the
/// coefficient's own 2^K-aligned origin, wrapped periodically) and weights.
struct BasisFootprint {
    struct Tap {
        int drow;
        int dcol;
        double weight;
    };
    std::vector<Tap> taps;  // sorted by decreasing |weight|
    int stride = 1;         // 2^level: shift between adjacent coefficients
};

BasisFootprint basis_footprint(int width, int height, int levels, Wavelet wavelet, SubbandId id);

/// Rounds a reconstruction to 8 bits while holding the coefficients at
/// `positions` to `targets`: clamped projections absorb saturation, then
/// single-level pixel nudges undo rounding error.
GrayImage settle_to_8bit(const Plane& plane, const WatermarkKey& key, const std::vector<double>& targets);

struct EmbedResult {
    GrayImage watermarked;
    Plane watermarked_plane;  // exact reconstruction of the cast pyramid
    WatermarkKey key;
    double psnr = 0.0;
};

EmbedResult embed(const GrayImage& host, const BinaryWatermark& w, const EmbedParams& params = {});

struct Extraction {
    BinaryWatermark watermark;
    std::vector<double> raw;  // soft value per watermark pixel, row-major
};

Extraction extract(const GrayImage& image, const WatermarkKey& key);
/// Same, on an unrounded reconstruction.
Extraction extract(const Plane& image, const WatermarkKey& key);

std::string key_to_text(const WatermarkKey& key);
WatermarkKey key_from_text(const std::string& text);
void save_key(const WatermarkKey& key, const std::filesystem::path& path);
WatermarkKey load_key(const std::filesystem::path& path);

}  // namespace fuzzymark
