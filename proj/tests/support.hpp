#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fuzzymark/embedder.hpp"
#include "fuzzymark/image.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(FM_TEST_DATA_DIR) / name;
}

inline const std::vector<std::string>& natural_images() {
    static const std::vector<std::string> names = {"camera.pgm", "astronaut.pgm", "moon.pgm",
                                                   "grass.pgm",  "gravel.pgm",    "brick.pgm"};
    return names;
}

inline fuzzymark::GrayImage random_gray(std::mt19937_64& rng, int w, int h) {
    std::uniform_int_distribution<int> d(0, 255);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
    for (auto& x : px) x = static_cast<std::uint8_t>(d(rng));
    return {w, h, std::move(px)};
}

// Smooth random texture: a few sinusoids plus mild noise, kept inside [0,255].
inline fuzzymark::GrayImage random_texture(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 6.0);
    double fx[3], fy[3], ph[3], amp[3];
    for (int k = 0; k < 3; ++k) {
        fx[k] = 0.02 + 0.3 * u(rng);
        fy[k] = 0.02 + 0.3 * u(rng);
        ph[k] = 6.283 * u(rng);
        amp[k] = 15.0 + 25.0 * u(rng);
    }
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            double v = 128.0 + noise(rng);
            for (int k = 0; k < 3; ++k) v += amp[k] * std::sin(fx[k] * c + fy[k] * r + ph[k]);
            v = std::clamp(v, 20.0, 235.0);
            px[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint8_t>(std::lround(v));
        }
    return {w, h, std::move(px)};
}

inline fuzzymark::BinaryWatermark random_mark(std::mt19937_64& rng, int w, int h) {
    std::bernoulli_distribution b(0.5);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
    for (auto& x : bits) x = b(rng) ? 1 : 0;
    return {w, h, std::move(bits)};
}

inline fuzzymark::BinaryWatermark complement(const fuzzymark::BinaryWatermark& w) {
    auto bits = w.bits();
    for (auto& b : bits) b ^= 1;
    return {w.width(), w.height(), std::move(bits)};
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("fuzzymark_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}


// Structurally valid key with random geometry, positions, strengths and permutation.
inline fuzzymark::WatermarkKey random_key(std::mt19937_64& rng) {
    using namespace fuzzymark;
    std::uniform_int_distribution<int> small(1, 12);
    WatermarkKey key;
    key.params.levels = std::uniform_int_distribution<int>(1, 4)(rng);
    const Orientation orient[] = {Orientation::HL, Orientation::LH, Orientation::HH};
    key.params.subband = {orient[small(rng) % 3], std::uniform_int_distribution<int>(1, key.params.levels)(rng)};
    key.params.tau = small(rng);
    key.params.wavelet = small(rng) % 2 ? Wavelet::Haar : Wavelet::Daubechies4;
    key.wm_width = small(rng);
    key.wm_height = small(rng);
    key.n = key.wm_width * key.wm_height;
    key.t = reference_count(key.n, key.params.tau);
    const int block = 1 << key.params.levels;
    const int cells = block * (4 + small(rng));
    key.img_width = cells;
    key.img_height = block * (4 + small(rng));
    const Rect rect = subband_rect(key.img_width, key.img_height, key.params.levels, key.params.subband);
    std::vector<int> idx(static_cast<std::size_t>(rect.count()));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    // Grow the image until the subband can hold p positions.
    while (static_cast<int>(idx.size()) < key.p()) {
        key.img_width *= 2;
        key.img_height *= 2;
        const Rect bigger = subband_rect(key.img_width, key.img_height, key.params.levels, key.params.subband);
        idx.resize(static_cast<std::size_t>(bigger.count()));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
    }
    const Rect r = subband_rect(key.img_width, key.img_height, key.params.levels, key.params.subband);
    for (int i = 0; i < key.p(); ++i) key.positions.push_back({idx[i] / r.cols, idx[i] % r.cols});
    std::uniform_real_distribution<double> v(1e-3, 80.0);
    for (int i = 0; i < key.n; ++i) key.v.push_back(v(rng) * (i % 7 == 0 ? 1.0 / 3.0 : 1.0));
    key.wm_perm.resize(static_cast<std::size_t>(key.n));
    std::iota(key.wm_perm.begin(), key.wm_perm.end(), 0);
    std::shuffle(key.wm_perm.begin(), key.wm_perm.end(), rng);
    return key;
}

}  // namespace testing
