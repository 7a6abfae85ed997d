#include "fuzzymark/bench.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "fuzzymark/error.hpp"
#include "fuzzymark/metrics.hpp"

namespace fuzzymark {

namespace {

BenchRow score(const std::string& attack, const std::string& parameter, const GrayImage& image,
               const WatermarkKey& key, const BinaryWatermark& original) {
    const Extraction ex = extract(image, key);
    BenchRow row{attack, parameter, std::nullopt, error_rate(ex.watermark, original)};
    try {
        row.correlation = correlation(ex.watermark, original);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Degenerate) throw;
    }
    return row;
}

}  // namespace

BenchReport run_bench(const GrayImage& host, const BinaryWatermark& w, const EmbedParams& params,
                      const std::vector<int>& qualities, int median_window) {
    const EmbedResult embedded = embed(host, w, params);
    BenchReport report{embedded.psnr, embedded.key.p(), embedded.key.t, {}};
    report.rows.push_back(score("none", "-", embedded.watermarked, embedded.key, w));
    for (int q : qualities)
        report.rows.push_back(score("jpeg", std::to_string(q), jpeg_like(embedded.watermarked, q), embedded.key, w));
    report.rows.push_back(score("median", std::to_string(median_window),
                                median_filter(embedded.watermarked, median_window), embedded.key, w));
    report.rows.push_back(score("sharpen", "-", sharpen(embedded.watermarked), embedded.key, w));
    return report;
}

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    std::string text(buf, end);
    if (text.find_first_of(".e") == std::string::npos) text += ".0";
    return text;
}

std::string format_bench(const BenchReport& report, bool machine) {
    std::ostringstream out;
    if (machine) {
        out << "psnr=" << format_number(report.psnr) << "\n";
        out << "p=" << report.p << "\n";
        out << "t=" << report.t << "\n";
        for (const BenchRow& row : report.rows) {
            const std::string prefix = row.parameter == "-" ? row.attack : row.attack + "." + row.parameter;
            out << prefix << ".correlation=" << (row.correlation ? format_number(*row.correlation) : "undefined")
                << "\n";
            out << prefix << ".error_rate=" << format_number(row.error_rate) << "\n";
        }
        return out.str();
    }
    out << "PSNR " << std::fixed << std::setprecision(2) << report.psnr << " dB, p=" << report.p
        << ", t=" << report.t << "\n";
    out << std::left << std::setw(10) << "attack" << std::setw(11) << "parameter" << std::setw(13) << "correlation"
        << "error_rate\n";
    for (const BenchRow& row : report.rows) {
        std::ostringstream corr;
        if (row.correlation) corr << std::fixed << std::setprecision(4) << *row.correlation;
        else corr << "undefined";
        std::ostringstream err;
        err << std::fixed << std::setprecision(2) << row.error_rate * 100.0 << "%";
        out << std::setw(10) << row.attack << std::setw(11) << row.parameter << std::setw(13) << corr.str()
            << err.str() << "\n";
    }
    return out.str();
}

}  // namespace fuzzymark
