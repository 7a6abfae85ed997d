#pragma once

#include <string>
#include <vector>

#include "fuzzymark/image.hpp"
#include "fuzzymark/window.hpp"

namespace fuzzymark {

enum class Wavelet { Haar, Daubechies4 };

std::string to_string(Wavelet w);
Wavelet parse_wavelet(const std::string& name);

/// Orthonormal two-channel analysis pair. Synthesis uses the same taps
/// (the filter bank is its own transpose under periodic extension).
struct WaveletFilter {
    Wavelet id;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    static const WaveletFilter& get(Wavelet id);
};

enum class Orientation { LL, HL, LH, HH };

/// One quadrant of the pyramid. HL is highpass along rows and lowpass along
/// columns (vertical edges), stored top-right; LH is stored bottom-left.
struct SubbandId {
    Orientation orientation = Orientation::HL;
    int level = 3;

    std::string to_string() const;
    static SubbandId parse(const std::string& text);

    bool operator==(const SubbandId&) const = default;
};

/// Subbands of a K-level pyramid, coarsest first: LL_K, HL_K, LH_K, HH_K, HL_{K-1}, ...
std::vector<SubbandId> all_subbands(int levels);

class WaveletPyramid {
public:
    WaveletPyramid(Plane coeffs, int levels, Wavelet wavelet);

    const Plane& coeffs() const noexcept { return coeffs_; }
    Plane& coeffs() noexcept { return coeffs_; }
    int levels() const noexcept { return levels_; }
    Wavelet wavelet() const noexcept { return wavelet_; }
    int width() const noexcept { return coeffs_.width; }
    int height() const noexcept { return coeffs_.height; }

    Rect subband_rect(SubbandId id) const;
    CoeffWindow subband(SubbandId id) const;
    MutableCoeffWindow subband(SubbandId id);

private:
    Plane coeffs_;
    int levels_;
    Wavelet wavelet_;
};

/// Layout arithmetic only; throws Parameter for an id outside a K-level pyramid.
Rect subband_rect(int width, int height, int levels, SubbandId id);

WaveletPyramid forward(const Plane& image, int levels, Wavelet wavelet);
WaveletPyramid forward(const GrayImage& image, int levels, Wavelet wavelet);

/// Exact real-valued reconstruction.
Plane inverse_plane(const WaveletPyramid& pyramid);
/// Reconstruction rounded and clamped to 8 bits.
GrayImage inverse(const WaveletPyramid& pyramid);

// Single-level 1-D periodic analysis/synthesis. `signal` has even length;
// the output holds the approximation half followed by the detail half.
std::vector<double> analyze_1d(const std::vector<double>& signal, const WaveletFilter& filter);
std::vector<double> synthesize_1d(const std::vector<double>& bands, const WaveletFilter& filter);

}  // namespace fuzzymark
