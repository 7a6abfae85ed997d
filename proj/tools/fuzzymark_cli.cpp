// Command-line front end: embed, extract, attack, evaluate, bench.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fuzzymark/attacks.hpp"
#include "fuzzymark/bench.hpp"
#include "fuzzymark/embedder.hpp"
#include "fuzzymark/error.hpp"
#include "fuzzymark/metrics.hpp"

namespace fm = fuzzymark;

namespace {

enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kIo = 2,
    kFormat = 3,
    kParameter = 4,
    kDegenerate = 5,
    kMismatch = 6,
};

int exit_code(fm::ErrorKind kind) {
    switch (kind) {
        case fm::ErrorKind::Io: return kIo;
        case fm::ErrorKind::MalformedHeader:
        case fm::ErrorKind::UnsupportedMaxval:
        case fm::ErrorKind::Truncated:
        case fm::ErrorKind::Malformed:
        case fm::ErrorKind::CorruptKey:
        case fm::ErrorKind::VersionMismatch: return kFormat;
        case fm::ErrorKind::Parameter: return kParameter;
        case fm::ErrorKind::Degenerate: return kDegenerate;
        case fm::ErrorKind::DimensionMismatch: return kMismatch;
    }
    return kUsage;
}

struct EmbedOptions {
    std::string host, watermark, out, key;
    std::string subband = "HL3";
    int levels = 3;
    int tau = 16;
    std::string wavelet = "haar";
};

fm::EmbedParams to_params(const EmbedOptions& o) {
    fm::EmbedParams params;
    params.subband = fm::SubbandId::parse(o.subband);
    params.levels = o.levels;
    params.tau = o.tau;
    params.wavelet = fm::parse_wavelet(o.wavelet);
    return params;
}

void add_embed_params(CLI::App& cmd, EmbedOptions& o) {
    cmd.add_option("--subband", o.subband, "Embedding subband")->capture_default_str();
    cmd.add_option("--levels", o.levels, "Decomposition levels")->capture_default_str();
    cmd.add_option("--tau", o.tau, "Data coefficients per reference interval")->capture_default_str();
    cmd.add_option("--wavelet", o.wavelet, "Wavelet filter (haar, db4)")->capture_default_str();
}

// Runs a stage and tags any library error with the stage name.
template <class F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const fm::Error& e) {
        throw fm::Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind wavelet-domain image watermarking with fuzzy-entropy coefficient selection"};
    app.require_subcommand(1);
    bool report = false;
    app.add_flag("--report", report, "Print key=value lines instead of a human summary");

    EmbedOptions embed_opts;
    auto* embed_cmd = app.add_subcommand("embed", "Embed a PBM watermark into a PGM host");
    embed_cmd->add_option("--host", embed_opts.host, "Host image (PGM)")->required();
    embed_cmd->add_option("--watermark", embed_opts.watermark, "Watermark bitmap (PBM)")->required();
    embed_cmd->add_option("--out", embed_opts.out, "Watermarked image (PGM)")->required();
    embed_cmd->add_option("--key", embed_opts.key, "Extraction key (JSON)")->required();
    add_embed_params(*embed_cmd, embed_opts);

    std::string ex_image, ex_key, ex_out;
    auto* extract_cmd = app.add_subcommand("extract", "Recover the watermark using only the image and key");
    extract_cmd->add_option("--image", ex_image, "Watermarked (possibly attacked) PGM")->required();
    extract_cmd->add_option("--key", ex_key, "Extraction key")->required();
    extract_cmd->add_option("--out", ex_out, "Extracted watermark (PBM)")->required();

    std::string at_in, at_out, at_type;
    int at_quality = 75;
    int at_window = 3;
    auto* attack_cmd = app.add_subcommand("attack", "Apply a deterministic image-processing attack");
    attack_cmd->add_option("--in", at_in, "Input PGM")->required();
    attack_cmd->add_option("--out", at_out, "Output PGM")->required();
    attack_cmd->add_option("--type", at_type, "jpeg, median or sharpen")->required();
    attack_cmd->add_option("--quality", at_quality, "JPEG quality 1..100")->capture_default_str();
    attack_cmd->add_option("--window", at_window, "Median window (odd, >= 3)")->capture_default_str();

    std::string ev_mode, ev_a, ev_b;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare two images or two watermarks");
    evaluate_cmd->add_option("--mode", ev_mode, "psnr, correlation or ber")->required();
    evaluate_cmd->add_option("--a", ev_a, "First file")->required();
    evaluate_cmd->add_option("--b", ev_b, "Second file")->required();

    EmbedOptions bench_opts;
    std::vector<int> qualities = fm::kDefaultBenchQualities;
    int bench_window = 3;
    auto* bench_cmd = app.add_subcommand("bench", "Embed, attack, extract and score in one run");
    bench_cmd->add_option("--host", bench_opts.host, "Host image (PGM)")->required();
    bench_cmd->add_option("--watermark", bench_opts.watermark, "Watermark bitmap (PBM)")->required();
    bench_cmd->add_option("--qualities", qualities, "JPEG qualities")->delimiter(',');
    bench_cmd->add_option("--window", bench_window, "Median window")->capture_default_str();
    add_embed_params(*bench_cmd, bench_opts);

    for (auto* cmd : {embed_cmd, extract_cmd, attack_cmd, evaluate_cmd, bench_cmd})
        cmd->add_flag("--report", report, "Print key=value lines instead of a human summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*embed_cmd) {
            const auto host = stage("load host", [&] { return fm::load_gray(embed_opts.host); });
            const auto mark = stage("load watermark", [&] { return fm::load_watermark(embed_opts.watermark); });
            const auto params = stage("parameters", [&] { return to_params(embed_opts); });
            const auto result = stage("embed", [&] { return fm::embed(host, mark, params); });
            stage("write image", [&] { fm::store_gray(result.watermarked, embed_opts.out); return 0; });
            stage("write key", [&] { fm::save_key(result.key, embed_opts.key); return 0; });
            if (report) {
                std::cout << "psnr=" << fm::format_number(result.psnr) << "\np=" << result.key.p()
                          << "\nt=" << result.key.t << "\n";
            } else {
                std::cout << "embedded " << result.key.n << " bits: PSNR " << fm::format_number(result.psnr)
                          << " dB, p=" << result.key.p() << ", t=" << result.key.t << "\n";
            }
        } else if (*extract_cmd) {
            const auto key = stage("load key", [&] { return fm::load_key(ex_key); });
            const auto image = stage("load image", [&] { return fm::load_gray(ex_image); });
            const auto ex = stage("extract", [&] { return fm::extract(image, key); });
            stage("write watermark", [&] { fm::store_watermark(ex.watermark, ex_out); return 0; });
            if (report) {
                std::size_t ones = 0;
                for (auto b : ex.watermark.bits()) ones += b;
                std::cout << "n=" << ex.watermark.size() << "\nones=" << ones << "\n";
            }
        } else if (*attack_cmd) {
            const auto image = stage("load image", [&] { return fm::load_gray(at_in); });
            const auto out = stage("attack", [&] {
                fm::AttackSpec spec{fm::parse_attack_kind(at_type), at_quality, at_window};
                return fm::apply_attack(image, spec);
            });
            stage("write image", [&] { fm::store_gray(out, at_out); return 0; });
            if (report) std::cout << "type=" << at_type << "\n";
        } else if (*evaluate_cmd) {
            double value = 0.0;
            if (ev_mode == "psnr") {
                const auto a = stage("load a", [&] { return fm::load_gray(ev_a); });
                const auto b = stage("load b", [&] { return fm::load_gray(ev_b); });
                value = stage("psnr", [&] { return fm::psnr(a, b); });
            } else if (ev_mode == "correlation" || ev_mode == "ber") {
                const auto a = stage("load a", [&] { return fm::load_watermark(ev_a); });
                const auto b = stage("load b", [&] { return fm::load_watermark(ev_b); });
                value = ev_mode == "ber" ? stage("ber", [&] { return fm::error_rate(a, b); })
                                         : stage("correlation", [&] { return fm::correlation(a, b); });
            } else {
                throw fm::Error(fm::ErrorKind::Parameter, "unknown mode '" + ev_mode + "' (psnr, correlation, ber)");
            }
            if (report) std::cout << ev_mode << "=";
            std::cout << fm::format_number(value) << "\n";
        } else if (*bench_cmd) {
            const auto host = stage("load host", [&] { return fm::load_gray(bench_opts.host); });
            const auto mark = stage("load watermark", [&] { return fm::load_watermark(bench_opts.watermark); });
            const auto params = stage("parameters", [&] { return to_params(bench_opts); });
            const auto result =
                stage("bench", [&] { return fm::run_bench(host, mark, params, qualities, bench_window); });
            std::cout << fm::format_bench(result, report);
        }
    } catch (const fm::Error& e) {
        std::cerr << "error (" << fm::to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}
