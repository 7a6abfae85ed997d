#include "fuzzymark/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "fuzzymark/error.hpp"

namespace fuzzymark {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorKind::Parameter,
                    "image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    }
}

std::size_t area(int width, int height) {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

// Tokenizer over a Netpbm header: whitespace separated, '#' starts a comment
// that runs to end of line.
class HeaderReader {
public:
    explicit HeaderReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::string magic() {
        if (bytes_.size() < 2) throw Error(ErrorKind::MalformedHeader, "missing magic number");
        pos_ = 2;
        return {static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
    }

    int number(const char* what) {
        skip_space_and_comments();
        std::size_t start = pos_;
        long long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > std::numeric_limits<int>::max())
                throw Error(ErrorKind::MalformedHeader, std::string(what) + " is too large");
            ++pos_;
        }
        if (pos_ == start) throw Error(ErrorKind::MalformedHeader, std::string("expected ") + what);
        if (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#')
            throw Error(ErrorKind::MalformedHeader, std::string("garbage after ") + what);
        return static_cast<int>(value);
    }

    // The single whitespace byte separating the header from a binary raster.
    void raster_separator() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw Error(ErrorKind::MalformedHeader, "missing whitespace before raster");
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::uint8_t peek() const { return bytes_[pos_]; }
    void advance() { ++pos_; }
    bool done() const { return pos_ >= bytes_.size(); }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorKind::Io, "read failed: " + path.string());
    return bytes;
}

void write_file(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

std::vector<std::uint8_t> header_bytes(const std::string& header) {
    return {header.begin(), header.end()};
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    check_dims(width, height);
    if (samples_.size() != area(width, height))
        throw Error(ErrorKind::Parameter, "sample count does not match image dimensions");
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    samples_.assign(area(width, height), fill);
}

BinaryWatermark::BinaryWatermark(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    check_dims(width, height);
    if (bits_.size() != area(width, height))
        throw Error(ErrorKind::Parameter, "bit count does not match watermark dimensions");
    if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; }))
        throw Error(ErrorKind::Parameter, "watermark bits must be 0 or 1");
}

Plane to_plane(const GrayImage& img) {
    Plane plane(img.width(), img.height());
    std::copy(img.samples().begin(), img.samples().end(), plane.values.begin());
    return plane;
}

GrayImage to_gray(const Plane& plane) {
    std::vector<std::uint8_t> samples(plane.values.size());
    std::transform(plane.values.begin(), plane.values.end(), samples.begin(), [](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
    });
    return GrayImage(plane.width, plane.height, std::move(samples));
}

GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes) {
    HeaderReader reader(bytes);
    if (reader.magic() != "P5") throw Error(ErrorKind::MalformedHeader, "not a binary PGM (P5)");
    int width = reader.number("width");
    int height = reader.number("height");
    int maxval = reader.number("maxval");
    if (width <= 0 || height <= 0) throw Error(ErrorKind::MalformedHeader, "zero image dimension");
    if (maxval != 255)
        throw Error(ErrorKind::UnsupportedMaxval, "maxval must be 255, got " + std::to_string(maxval));
    reader.raster_separator();

    std::size_t expected = area(width, height);
    if (reader.remaining() < expected)
        throw Error(ErrorKind::Truncated, "PGM payload has " + std::to_string(reader.remaining()) +
                                              " bytes, expected " + std::to_string(expected));
    if (reader.remaining() > expected)
        throw Error(ErrorKind::Malformed, "trailing data after PGM raster");
    auto first = bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos());
    return GrayImage(width, height, std::vector<std::uint8_t>(first, bytes.end()));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    auto out = header_bytes("P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                            "\n255\n");
    out.insert(out.end(), img.samples().begin(), img.samples().end());
    return out;
}

BinaryWatermark parse_pbm(const std::vector<std::uint8_t>& bytes) {
    HeaderReader reader(bytes);
    std::string magic = reader.magic();
    if (magic != "P4" && magic != "P1") throw Error(ErrorKind::MalformedHeader, "not a PBM (P1/P4)");
    int width = reader.number("width");
    int height = reader.number("height");
    if (width <= 0 || height <= 0) throw Error(ErrorKind::MalformedHeader, "zero bitmap dimension");

    std::vector<std::uint8_t> bits;
    bits.reserve(area(width, height));
    if (magic == "P4") {
        reader.raster_separator();
        std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
        std::size_t expected = row_bytes * static_cast<std::size_t>(height);
        if (reader.remaining() < expected)
            throw Error(ErrorKind::Truncated, "PBM payload has " + std::to_string(reader.remaining()) +
                                                  " bytes, expected " + std::to_string(expected));
        if (reader.remaining() > expected)
            throw Error(ErrorKind::Malformed, "trailing data after PBM raster");
        const std::uint8_t* raster = bytes.data() + reader.pos();
        const int pad_bits = static_cast<int>(row_bytes * 8) - width;
        const std::uint8_t pad_mask = static_cast<std::uint8_t>((1u << pad_bits) - 1u);
        for (int r = 0; r < height; ++r) {
            const std::uint8_t* row = raster + static_cast<std::size_t>(r) * row_bytes;
            if (pad_bits > 0 && (row[row_bytes - 1] & pad_mask) != 0)
                throw Error(ErrorKind::Malformed, "nonzero padding bits in PBM row " + std::to_string(r));
            for (int c = 0; c < width; ++c) bits.push_back((row[c / 8] >> (7 - c % 8)) & 1u);
        }
    } else {
        for (std::size_t i = 0; i < area(width, height); ++i) {
            reader.skip_space_and_comments();
            if (reader.done()) throw Error(ErrorKind::Truncated, "P1 raster ends early");
            std::uint8_t ch = reader.peek();
            if (ch != '0' && ch != '1') throw Error(ErrorKind::Malformed, "invalid P1 raster character");
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
            reader.advance();
        }
        reader.skip_space_and_comments();
        if (!reader.done()) throw Error(ErrorKind::Malformed, "trailing data after PBM raster");
    }
    return BinaryWatermark(width, height, std::move(bits));
}

std::vector<std::uint8_t> encode_pbm(const BinaryWatermark& w) {
    auto out = header_bytes("P4\n" + std::to_string(w.width()) + " " + std::to_string(w.height()) + "\n");
    std::size_t row_bytes = (static_cast<std::size_t>(w.width()) + 7) / 8;
    for (int r = 0; r < w.height(); ++r) {
        std::vector<std::uint8_t> row(row_bytes, 0);
        for (int c = 0; c < w.width(); ++c)
            if (w.at(r, c)) row[c / 8] |= static_cast<std::uint8_t>(0x80u >> (c % 8));
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

GrayImage load_gray(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

void store_gray(const GrayImage& img, const std::filesystem::path& path) {
    write_file(encode_pgm(img), path);
}

BinaryWatermark load_watermark(const std::filesystem::path& path) { return parse_pbm(read_file(path)); }

void store_watermark(const BinaryWatermark& w, const std::filesystem::path& path) {
    write_file(encode_pbm(w), path);
}

}  // namespace fuzzymark
