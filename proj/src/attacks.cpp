#include "fuzzymark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fuzzymark/error.hpp"

namespace fuzzymark {

const std::array<int, 64> kJpegLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

namespace {

// Orthonormal 8-point DCT-II basis: basis[u][x] = c(u) cos((2x+1) u pi / 16).
std::array<std::array<double, 8>, 8> make_dct_basis() {
    std::array<std::array<double, 8>, 8> basis{};
    for (int u = 0; u < 8; ++u) {
        const double scale = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
        for (int x = 0; x < 8; ++x) basis[u][x] = scale * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
    return basis;
}

const std::array<std::array<double, 8>, 8>& dct_basis() {
    static const auto basis = make_dct_basis();
    return basis;
}

using Block = std::array<double, 64>;

Block dct8x8(const Block& in) {
    const auto& b = dct_basis();
    Block tmp{};
    Block out{};
    for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
            double s = 0.0;
            for (int x = 0; x < 8; ++x) s += b[u][x] * in[y * 8 + x];
            tmp[y * 8 + u] = s;
        }
    for (int v = 0; v < 8; ++v)
        for (int u = 0; u < 8; ++u) {
            double s = 0.0;
            for (int y = 0; y < 8; ++y) s += b[v][y] * tmp[y * 8 + u];
            out[v * 8 + u] = s;
        }
    return out;
}

Block idct8x8(const Block& in) {
    const auto& b = dct_basis();
    Block tmp{};
    Block out{};
    for (int v = 0; v < 8; ++v)
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int u = 0; u < 8; ++u) s += b[u][x] * in[v * 8 + u];
            tmp[v * 8 + x] = s;
        }
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int v = 0; v < 8; ++v) s += b[v][y] * tmp[v * 8 + x];
            out[y * 8 + x] = s;
        }
    return out;
}

std::uint8_t clamp_round(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

std::array<int, 64> jpeg_quant_table(int quality) {
    if (quality < 1 || quality > 100)
        throw Error(ErrorKind::Parameter, "JPEG quality must be in 1..100, got " + std::to_string(quality));
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    std::array<int, 64> table{};
    for (int i = 0; i < 64; ++i) table[i] = std::clamp((kJpegLuminanceTable[i] * scale + 50) / 100, 1, 255);
    return table;
}

GrayImage jpeg_like(const GrayImage& img, int quality) {
    const auto table = jpeg_quant_table(quality);
    const int w = img.width();
    const int h = img.height();
    const int pw = (w + 7) / 8 * 8;
    const int ph = (h + 7) / 8 * 8;

    GrayImage out(w, h);
    for (int by = 0; by < ph; by += 8) {
        for (int bx = 0; bx < pw; bx += 8) {
            Block block{};
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    block[y * 8 + x] = img.at(clamp_index(by + y, h), clamp_index(bx + x, w)) - 128.0;
            Block coeffs = dct8x8(block);
            for (int i = 0; i < 64; ++i) coeffs[i] = std::round(coeffs[i] / table[i]) * table[i];
            const Block rec = idct8x8(coeffs);
            for (int y = 0; y < 8 && by + y < h; ++y)
                for (int x = 0; x < 8 && bx + x < w; ++x) out.at(by + y, bx + x) = clamp_round(rec[y * 8 + x] + 128.0);
        }
    }
    return out;
}

GrayImage median_filter(const GrayImage& img, int window) {
    if (window < 3 || window % 2 == 0)
        throw Error(ErrorKind::Parameter, "median window must be odd and at least 3, got " + std::to_string(window));
    const int radius = window / 2;
    const int w = img.width();
    const int h = img.height();
    GrayImage out(w, h);
    std::vector<std::uint8_t> values(static_cast<std::size_t>(window) * window);
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::size_t k = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    values[k++] = img.at(clamp_index(r + dy, h), clamp_index(c + dx, w));
            std::nth_element(values.begin(), mid, values.end());
            out.at(r, c) = *mid;
        }
    }
    return out;
}

GrayImage sharpen(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    GrayImage out(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int v = 5 * img.at(r, c) - img.at(clamp_index(r - 1, h), c) - img.at(clamp_index(r + 1, h), c) -
                          img.at(r, clamp_index(c - 1, w)) - img.at(r, clamp_index(c + 1, w));
            out.at(r, c) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
    return out;
}

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
    switch (spec.kind) {
        case AttackKind::JpegLike: return jpeg_like(img, spec.quality);
        case AttackKind::Median: return median_filter(img, spec.window);
        case AttackKind::Sharpen: return sharpen(img);
    }
    throw Error(ErrorKind::Parameter, "unknown attack");
}

AttackKind parse_attack_kind(const std::string& name) {
    if (name == "jpeg") return AttackKind::JpegLike;
    if (name == "median") return AttackKind::Median;
    if (name == "sharpen") return AttackKind::Sharpen;
    throw Error(ErrorKind::Parameter, "unknown attack type '" + name + "' (expected jpeg, median or sharpen)");
}

}  // namespace fuzzymark
