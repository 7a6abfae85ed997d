#include "fuzzymark/dwt.hpp"

#include <cmath>

#include "fuzzymark/error.hpp"

namespace fuzzymark {

namespace {

WaveletFilter make_haar() {
    const double s = 1.0 / std::sqrt(2.0);
    return {Wavelet::Haar, {s, s}, {s, -s}};
}

WaveletFilter make_daubechies4() {
    const double r3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    std::vector<double> h = {(1.0 + r3) / d, (3.0 + r3) / d, (3.0 - r3) / d, (1.0 - r3) / d};
    // Quadrature mirror: g[k] = (-1)^k h[L-1-k].
    std::vector<double> g = {h[3], -h[2], h[1], -h[0]};
    return {Wavelet::Daubechies4, std::move(h), std::move(g)};
}

void check_geometry(int width, int height, int levels) {
    if (levels < 1) throw Error(ErrorKind::Parameter, "decomposition levels must be at least 1");
    if (levels > 30) throw Error(ErrorKind::Parameter, "too many decomposition levels");
    const int block = 1 << levels;
    if (width <= 0 || height <= 0 || width % block != 0 || height % block != 0) {
        throw Error(ErrorKind::Parameter, "image " + std::to_string(width) + "x" + std::to_string(height) +
                                              " is not divisible by 2^" + std::to_string(levels));
    }
}

const char* orientation_name(Orientation o) {
    switch (o) {
        case Orientation::LL: return "LL";
        case Orientation::HL: return "HL";
        case Orientation::LH: return "LH";
        case Orientation::HH: return "HH";
    }
    return "??";
}

// Runs analysis (or synthesis) over the rows and then the columns of the
// top-left `rows` x `cols` region of the plane.
template <class Transform>
void rows_pass(Plane& plane, int rows, int cols, Transform&& transform) {
    std::vector<double> line(static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) line[c] = plane.at(r, c);
        line = transform(line);
        for (int c = 0; c < cols; ++c) plane.at(r, c) = line[c];
    }
}

template <class Transform>
void cols_pass(Plane& plane, int rows, int cols, Transform&& transform) {
    std::vector<double> line(static_cast<std::size_t>(rows));
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) line[r] = plane.at(r, c);
        line = transform(line);
        for (int r = 0; r < rows; ++r) plane.at(r, c) = line[r];
    }
}

}  // namespace

std::string to_string(Wavelet w) { return w == Wavelet::Haar ? "haar" : "db4"; }

Wavelet parse_wavelet(const std::string& name) {
    if (name == "haar") return Wavelet::Haar;
    if (name == "db4" || name == "daubechies4") return Wavelet::Daubechies4;
    throw Error(ErrorKind::Parameter, "unknown wavelet '" + name + "' (expected haar or db4)");
}

const WaveletFilter& WaveletFilter::get(Wavelet id) {
    static const WaveletFilter haar = make_haar();
    static const WaveletFilter db4 = make_daubechies4();
    return id == Wavelet::Haar ? haar : db4;
}

std::string SubbandId::to_string() const { return orientation_name(orientation) + std::to_string(level); }

SubbandId SubbandId::parse(const std::string& text) {
    if (text.size() < 3) throw Error(ErrorKind::Parameter, "invalid subband '" + text + "'");
    const std::string name = text.substr(0, 2);
    SubbandId id;
    if (name == "LL") id.orientation = Orientation::LL;
    else if (name == "HL") id.orientation = Orientation::HL;
    else if (name == "LH") id.orientation = Orientation::LH;
    else if (name == "HH") id.orientation = Orientation::HH;
    else throw Error(ErrorKind::Parameter, "invalid subband '" + text + "'");
    const std::string digits = text.substr(2);
    if (digits.empty() || digits.size() > 2 || digits.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorKind::Parameter, "invalid subband level in '" + text + "'");
    id.level = std::stoi(digits);
    if (id.level < 1) throw Error(ErrorKind::Parameter, "subband level must be at least 1");
    return id;
}

std::vector<SubbandId> all_subbands(int levels) {
    std::vector<SubbandId> ids{{Orientation::LL, levels}};
    for (int k = levels; k >= 1; --k) {
        ids.push_back({Orientation::HL, k});
        ids.push_back({Orientation::LH, k});
        ids.push_back({Orientation::HH, k});
    }
    return ids;
}

Rect subband_rect(int width, int height, int levels, SubbandId id) {
    if (id.level < 1 || id.level > levels)
        throw Error(ErrorKind::Parameter, "subband " + id.to_string() + " outside a " +
                                              std::to_string(levels) + "-level pyramid");
    if (id.orientation == Orientation::LL && id.level != levels)
        throw Error(ErrorKind::Parameter, "LL exists only at the coarsest level " + std::to_string(levels));
    const int rows = height >> id.level;
    const int cols = width >> id.level;
    switch (id.orientation) {
        case Orientation::LL: return {0, 0, rows, cols};
        case Orientation::HL: return {0, cols, rows, cols};
        case Orientation::LH: return {rows, 0, rows, cols};
        case Orientation::HH: return {rows, cols, rows, cols};
    }
    return {};
}

WaveletPyramid::WaveletPyramid(Plane coeffs, int levels, Wavelet wavelet)
    : coeffs_(std::move(coeffs)), levels_(levels), wavelet_(wavelet) {
    check_geometry(coeffs_.width, coeffs_.height, levels_);
    if (coeffs_.values.size() != static_cast<std::size_t>(coeffs_.width) * coeffs_.height)
        throw Error(ErrorKind::Parameter, "coefficient plane size does not match its dimensions");
}

Rect WaveletPyramid::subband_rect(SubbandId id) const {
    return fuzzymark::subband_rect(coeffs_.width, coeffs_.height, levels_, id);
}

CoeffWindow WaveletPyramid::subband(SubbandId id) const {
    Rect r = subband_rect(id);
    return {coeffs_.values.data() + static_cast<std::ptrdiff_t>(r.row) * coeffs_.width + r.col, r.rows, r.cols,
            coeffs_.width};
}

MutableCoeffWindow WaveletPyramid::subband(SubbandId id) {
    Rect r = subband_rect(id);
    return {coeffs_.values.data() + static_cast<std::ptrdiff_t>(r.row) * coeffs_.width + r.col, r.rows, r.cols,
            coeffs_.width};
}

std::vector<double> analyze_1d(const std::vector<double>& signal, const WaveletFilter& filter) {
    const std::size_t n = signal.size();
    const std::size_t half = n / 2;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t k = 0; k < filter.lowpass.size(); ++k) {
            const double x = signal[(2 * i + k) % n];
            lo += filter.lowpass[k] * x;
            hi += filter.highpass[k] * x;
        }
        out[i] = lo;
        out[half + i] = hi;
    }
    return out;
}

std::vector<double> synthesize_1d(const std::vector<double>& bands, const WaveletFilter& filter) {
    const std::size_t n = bands.size();
    const std::size_t half = n / 2;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        const double lo = bands[i];
        const double hi = bands[half + i];
        for (std::size_t k = 0; k < filter.lowpass.size(); ++k)
            out[(2 * i + k) % n] += filter.lowpass[k] * lo + filter.highpass[k] * hi;
    }
    return out;
}

WaveletPyramid forward(const Plane& image, int levels, Wavelet wavelet) {
    check_geometry(image.width, image.height, levels);
    const WaveletFilter& filter = WaveletFilter::get(wavelet);
    auto analyze = [&filter](const std::vector<double>& line) { return analyze_1d(line, filter); };

    Plane coeffs = image;
    int rows = image.height;
    int cols = image.width;
    for (int level = 1; level <= levels; ++level) {
        rows_pass(coeffs, rows, cols, analyze);
        cols_pass(coeffs, rows, cols, analyze);
        rows /= 2;
        cols /= 2;
    }
    return WaveletPyramid(std::move(coeffs), levels, wavelet);
}

WaveletPyramid forward(const GrayImage& image, int levels, Wavelet wavelet) {
    return forward(to_plane(image), levels, wavelet);
}

Plane inverse_plane(const WaveletPyramid& pyramid) {
    const WaveletFilter& filter = WaveletFilter::get(pyramid.wavelet());
    auto synthesize = [&filter](const std::vector<double>& line) { return synthesize_1d(line, filter); };

    Plane plane = pyramid.coeffs();
    for (int level = pyramid.levels(); level >= 1; --level) {
        const int rows = plane.height >> (level - 1);
        const int cols = plane.width >> (level - 1);
        cols_pass(plane, rows, cols, synthesize);
        rows_pass(plane, rows, cols, synthesize);
    }
    return plane;
}

GrayImage inverse(const WaveletPyramid& pyramid) { return to_gray(inverse_plane(pyramid)); }

}  // namespace fuzzymark
