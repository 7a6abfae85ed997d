#include <limits>

#include "doctest.h"
#include "fuzzymark/bench.hpp"
#include "fuzzymark/metrics.hpp"
#include "support.hpp"

using namespace fuzzymark;

TEST_SUITE("bench") {

TEST_CASE("default rows and the no-attack row") {
    const auto host = load_gray(testing::data_path("gravel.pgm"));
    const auto mark = load_watermark(testing::data_path("logo32.pbm"));
    const auto report = run_bench(host, mark);
    CHECK(report.p == 1089);
    CHECK(report.t == 65);
    REQUIRE(report.rows.size() == 2 + kDefaultBenchQualities.size() + 1);
    CHECK(report.rows.front().attack == "none");
    CHECK(report.rows.front().correlation == 1.0);
    CHECK(report.rows.front().error_rate == 0.0);
    for (std::size_t i = 0; i < kDefaultBenchQualities.size(); ++i) {
        CHECK(report.rows[i + 1].attack == "jpeg");
        CHECK(report.rows[i + 1].parameter == std::to_string(kDefaultBenchQualities[i]));
    }
    CHECK(report.rows[report.rows.size() - 2].attack == "median");
    CHECK(report.rows.back().attack == "sharpen");

    // Rows agree with the core API called directly.
    const auto direct = embed(host, mark);
    CHECK(report.psnr == direct.psnr);
    const auto ex = extract(jpeg_like(direct.watermarked, 50), direct.key);
    CHECK(report.rows[6].error_rate == error_rate(ex.watermark, mark));

    const auto text = format_bench(report, true);
    CHECK(text.rfind("psnr=", 0) == 0);
    CHECK(text.find("\np=1089\n") != std::string::npos);
    CHECK(text.find("none.correlation=1.0\n") != std::string::npos);
    CHECK(text.find("jpeg.20.error_rate=") != std::string::npos);
    CHECK(format_bench(run_bench(host, mark), true) == text);
    CHECK(format_bench(report, false).find("sharpen") != std::string::npos);
}

TEST_CASE("number formatting") {
    CHECK(format_number(1.0) == "1.0");
    CHECK(format_number(0.0) == "0.0");
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

}
