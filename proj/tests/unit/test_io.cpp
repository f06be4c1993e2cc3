#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>

#include <unistd.h>

#include "sqzdisp/errors.hpp"
#include "sqzdisp/io.hpp"

using namespace sqzdisp;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sqzdisp_io_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SpectrumTrace sample_trace() {
    SpectrumTrace t;
    t.settings.rbw = 1e4;
    t.settings.vbw = 100;
    t.settings.averages = 20;
    t.axis_unit = "Hz";
    t.value_unit = "QNL";
    t.seed = 18446744073709551557ull;
    for (int i = 0; i < 5; ++i) {
        t.axis.push_back(4.9e6 + 1e3 * i / 3.0);
        t.values.push_back(std::exp(-i) / 7.0);
    }
    t.settings.samples = 5;
    return t;
}
}  // namespace

TEST_CASE("format_double round trips") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-300, 300);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::ldexp(u(g), static_cast<int>(u(g)));
        REQUIRE(std::strtod(io::format_double(v).c_str(), nullptr) == v);
    }
    for (double v : {0.0, 1.0, 0.1, 5e-324, std::numeric_limits<double>::max(), -2.5e-10})
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
    CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("trace CSV round trip") {
    const auto t = sample_trace();
    const auto text = io::trace_csv(t);
    CHECK(text.rfind("axis_unit,value_unit,rbw_hz,vbw_hz,averages,seed\nHz,QNL,10000,100,20,18446744073709551557\naxis,value\n",
                     0) == 0);
    const auto back = io::parse_trace_csv(text);
    CHECK(back.axis == t.axis);
    CHECK(back.values == t.values);
    CHECK(back.axis_unit == "Hz");
    CHECK(back.value_unit == "QNL");
    CHECK(back.seed == t.seed);
    CHECK(back.settings.rbw == 1e4);
    CHECK(back.settings.vbw == 100);
    CHECK(back.settings.averages == 20);
    CHECK(back.settings.samples == 5);
    CHECK(io::trace_csv(back) == text);
}

TEST_CASE("malformed trace CSV") {
    CHECK_THROWS_AS((void)io::parse_trace_csv("axis,value\n1,2\n"), std::invalid_argument);
    auto text = io::trace_csv(sample_trace());
    CHECK_THROWS_AS((void)io::parse_trace_csv(text + "1,2,3\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::parse_trace_csv(text + "1,abc\n"), std::invalid_argument);
    auto bad = sample_trace();
    bad.values[2] = -1.0;
    CHECK_THROWS_AS((void)io::trace_csv(bad), std::invalid_argument);
}

TEST_CASE("tables and summaries") {
    io::Table t;
    t.columns = {"a", "b"};
    t.add_row({"1", "x"});
    CHECK_THROWS_AS((void)t.add_row({"1"}), std::invalid_argument);
    CHECK(io::table_csv(t) == "a,b\n1,x\n");

    io::Summary s;
    s.add("loss", 0.1);
    s.add("mode", std::string("TEMf00"));
    CHECK(s.csv() == "key,value\nloss,0.10000000000000001\nmode,TEMf00\n");
    CHECK(s.number("loss") == 0.1);
    CHECK(s.has("loss"));
    CHECK_FALSE(s.has("mode"));
    CHECK_THROWS_AS((void)s.number("mode"), std::out_of_range);
}

TEST_CASE("CSV splitting") {
    const auto rows = io::parse_csv("a,b,\r\n\n1,,3\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", ""});
    CHECK(rows[1] == std::vector<std::string>{"1", "", "3"});
}

TEST_CASE("sha256 known vectors") {
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("atomic write") {
    const auto dir = scratch("atomic");
    const auto p = dir / "nested" / "out.csv";
    io::atomic_write(p, "first\n");
    CHECK(io::read_file(p) == "first\n");
    io::atomic_write(p, "second\n");
    CHECK(io::read_file(p) == "second\n");
    CHECK_FALSE(fs::exists(dir / "nested" / "out.csv.tmp"));
    CHECK_THROWS_AS((void)io::read_file(dir / "missing"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("manifest text round trip") {
    io::Manifest m;
    m.scenario = "fig6";
    m.seed = 42;
    m.fields["version.sqzdisp"] = "0.1.0";
    m.fields["max_order"] = "58";
    m.outputs["fig6_trace.csv"] = std::string(64, 'a');
    const auto text = m.text();
    CHECK(text.rfind("scenario = fig6\nseed = 42\n", 0) == 0);
    CHECK(text.find("output.fig6_trace.csv = sha256:" + std::string(64, 'a')) != std::string::npos);
    const auto back = io::Manifest::parse("# comment\n\n" + text);
    CHECK(back.scenario == "fig6");
    CHECK(back.seed == 42);
    CHECK(back.fields == m.fields);
    CHECK(back.outputs == m.outputs);
    CHECK(back.text() == text);

    CHECK_THROWS_AS((void)io::Manifest::parse("seed = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::Manifest::parse("scenario = x\nnonsense\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::Manifest::parse("scenario = x\noutput.a.csv = md5:00\n"), std::invalid_argument);
}

TEST_CASE("golden.meta lookup: wildcards, last match wins") {
    const auto meta = io::GoldenMeta::parse(
        "# tolerances\n"
        "* * rel=1e-6\n"
        "a.csv value rel=1e-3 abs=1e-12\n"
        "* value abs=5\n"
        "b.csv * rel=0.5\n");
    auto t = meta.lookup("c.csv", "axis");
    CHECK(t.rel == 1e-6);
    CHECK(t.abs == 0.0);
    t = meta.lookup("a.csv", "axis");
    CHECK(t.rel == 1e-6);
    t = meta.lookup("a.csv", "value");
    CHECK(t.rel == 1e-9);
    CHECK(t.abs == 5);
    t = meta.lookup("b.csv", "value");
    CHECK(t.rel == 0.5);
    CHECK(t.abs == 0.0);
    t = io::GoldenMeta{}.lookup("x", "y");
    CHECK(t.rel == 1e-9);
    CHECK(t.abs == 0.0);

    CHECK_THROWS_AS((void)io::GoldenMeta::parse("onlyfile\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::GoldenMeta::parse("* * tol=3\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::GoldenMeta::parse("* * rel\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)io::GoldenMeta::parse("* * rel=x\n"), std::invalid_argument);
}

TEST_CASE("CSV comparison within tolerance") {
    const auto meta = io::GoldenMeta::parse("t.csv y rel=1e-3\n");
    const std::string golden = "x,y,label\n1,100,a\n2,200,b\n";
    long cells = 0;
    CHECK(io::compare_csv("t.csv", golden, golden, meta, &cells).empty());
    CHECK(cells == 9);
    CHECK(io::compare_csv("t.csv", "x,y,label\n1,100.05,a\n2,199.9,b\n", golden, meta).empty());

    auto bad = io::compare_csv("t.csv", "x,y,label\n1.0000001,100.2,c\n2,200,b\n", golden, meta);
    REQUIRE(bad.size() == 3);
    CHECK(bad[0].rfind("t.csv:2:x:", 0) == 0);
    CHECK(bad[1].rfind("t.csv:2:y:", 0) == 0);
    CHECK(bad[2].rfind("t.csv:2:label:", 0) == 0);

    CHECK(io::compare_csv("t.csv", "x,z,label\n1,100,a\n2,200,b\n", golden, meta).size() == 1);
    CHECK(io::compare_csv("t.csv", "x,y,label\n1,100,a\n", golden, meta).size() == 1);
    CHECK(io::compare_csv("t.csv", "x,y,label\n1,100\n2,200,b\n", golden, meta).size() == 1);
    // A number against text is a text mismatch.
    CHECK(io::compare_csv("t.csv", "x,y,label\n1,100,5\n2,200,b\n", golden, meta).size() == 1);
}

TEST_CASE("trace comparison uses the axis/value column names") {
    auto t = sample_trace();
    const auto golden = io::trace_csv(t);
    t.values[1] *= 1.01;
    const auto meta = io::GoldenMeta::parse("* value rel=0.02\n");
    CHECK(io::compare_csv("tr.csv", io::trace_csv(t), golden, meta).empty());
    const auto bad = io::compare_csv("tr.csv", io::trace_csv(t), golden, io::GoldenMeta{});
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].rfind("tr.csv:5:value:", 0) == 0);
}

TEST_CASE("golden directory diff") {
    const auto run = scratch("run");
    const auto gold = scratch("gold");
    const std::string content = "x,y\n1,2\n";
    io::atomic_write(run / "s_a.csv", content);
    io::atomic_write(gold / "s_a.csv", content);
    io::Manifest m;
    m.scenario = "s";
    m.outputs["s_a.csv"] = io::sha256_hex(content);
    io::atomic_write(run / "s.manifest", m.text());

    const auto report = io::diff_golden(run / "s.manifest", gold);
    CHECK(report.files == 1);
    CHECK(report.cells == 4);

    io::atomic_write(gold / "s_a.csv", "x,y\n1,2.5\n");
    CHECK_THROWS_AS((void)io::diff_golden(run / "s.manifest", gold), GoldenMismatch);
    io::atomic_write(gold / "golden.meta", "s_a.csv y abs=1\n");
    CHECK(io::diff_golden(run / "s.manifest", gold).files == 1);

    // Output edited after the run.
    io::atomic_write(run / "s_a.csv", "x,y\n1,2.1\n");
    try {
        (void)io::diff_golden(run / "s.manifest", gold);
        FAIL("expected GoldenMismatch");
    } catch (const GoldenMismatch& e) {
        REQUIRE(e.offending.size() == 1);
        CHECK(e.offending[0].find("hash") != std::string::npos);
        CHECK(e.kind() == ErrorKind::golden_mismatch);
    }

    fs::remove(gold / "s_a.csv");
    CHECK_THROWS_AS((void)io::diff_golden(run / "s.manifest", gold), GoldenMismatch);
    fs::remove(run / "s_a.csv");
    CHECK_THROWS_AS((void)io::diff_golden(run / "s.manifest", gold), GoldenMismatch);
    fs::remove_all(run);
    fs::remove_all(gold);
}
