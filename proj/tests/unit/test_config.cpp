#include "awf/config.hpp"
#include "awf/errors.hpp"

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace awf;
using namespace awf::test;

namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("awf_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("defaults") {
    const auto c = parse_config("{}");
    CHECK(c.dim() == 1);
    CHECK(c.dilation(0, 0) == 2.0);
    CHECK(c.translation(0, 0) == 1.0);
    CHECK(c.wavelet.builtin == "haar");
    CHECK(c.grid.half_width == 16.0);
    CHECK(c.grid.samples == 4096);
    CHECK(c.truncation == 40);
    CHECK(c.seed == 1);
    CHECK_FALSE(c.frame_j_range.has_value());
}

TEST_CASE("full document") {
    const auto c = parse_config(R"({
        "dilation": [[2, 0], [0, 2]],
        "translation": [[1, 0], [0, 1]],
        "wavelet": {"boxes": [{"lo": [-1, -1], "hi": [1, 1]}], "amplitude": 0.5},
        "grid": {"L": 8, "N": 256},
        "j_range": [-4, 4],
        "frame_j_range": [-2, 2],
        "k_box": {"lo": [-3, -3], "hi": [3, 3]},
        "truncation": 20,
        "seed": 99,
        "test_space": {"dimension": 12, "band": [0.5, 2]},
        "quasilattice": {"j_range": [-1, 1], "probes": 50, "cell": 0.1},
        "outputs": {"dir": "out", "csv": false}
    })");
    CHECK(c.dim() == 2);
    CHECK(c.translation.isApprox(Matrix::Identity(2, 2)));
    CHECK(c.wavelet.kind == WaveletSpec::Kind::indicator);
    CHECK(c.wavelet.amplitude == 0.5);
    CHECK(c.grid.samples == 256);
    CHECK(c.frame_j_range->lo == -2);
    CHECK(c.k_box->count() == 49);
    CHECK(c.seed == 99);
    CHECK(c.test_space.count == 12);
    CHECK(c.quasilattice.probes == 50);
    CHECK(c.out_dir == "out");
    CHECK_FALSE(c.write_csv);
}

TEST_CASE("resolved config round-trips") {
    const auto c = parse_config(R"({"dilation": 3, "wavelet": {"builtin": "meyer_1d", "bell_degree": 5}, "seed": 4})");
    const Json j = to_json(c);
    const auto back = parse_config(j.dump());
    CHECK(to_json(back) == j);
    CHECK(back.wavelet.bell_degree == 5);
    CHECK(back.dilation(0, 0) == 3.0);
}

TEST_CASE("syntax errors carry line and column") {
    const auto e = config_error("{\n  \"seed\": 3,\n  \"grid\": {\"N\": }\n}");
    CHECK(contains(e, "line 3"));
    CHECK(contains(e, "column"));
}

TEST_CASE("field errors name the field and its line") {
    const auto e = config_error("{\n  \"seed\": 1,\n  \"grid\": {\n    \"L\": 4,\n    \"N\": 100\n  }\n}");
    CHECK(contains(e, "line 5"));
    CHECK(contains(e, "grid.N"));
    CHECK(contains(e, "power of two"));

    CHECK(contains(config_error(R"({"sed": 1})"), "unknown field"));
    CHECK(contains(config_error(R"({"grid": {"L": 4, "M": 3}})"), "grid.M"));
    CHECK(contains(config_error(R"({"dilation": [[1, 2], [2, 4]]})"), "dilation"));
    CHECK(contains(config_error(R"({"dilation": [[1, 2, 3], [2, 4]]})"), "square"));
    CHECK(contains(config_error(R"({"translation": [[1, 0], [0, 1]]})"), "translation"));
    CHECK(contains(config_error(R"({"j_range": [3, -3]})"), "j_range"));
    CHECK(contains(config_error(R"({"wavelet": "morlet"})"), "wavelet"));
    CHECK(contains(config_error(R"({"wavelet": {"builtin": "haar", "boxes": []}})"), "exactly one"));
    CHECK(contains(config_error(R"({"truncation": 100})"), "power_cap"));
    CHECK(contains(config_error(R"({"tolerance": 0})"), "tolerance"));
    CHECK(contains(config_error(R"({"grid": {"L": -1}})"), "grid.L"));
    CHECK(contains(config_error(R"({"seed": -2})"), "seed"));
    CHECK(contains(config_error(R"({"outputs": {"csv": "yes"}})"), "outputs.csv"));
    CHECK(contains(config_error(R"({"wavelet": {"sampled": "missing.json"}})"), "wavelet"));
}

TEST_CASE("load_config reports the file") {
    CHECK_THROWS_AS(load_config("/nonexistent/awf.json"), ConfigError);
    const auto dir = scratch_dir("load");
    std::ofstream(dir / "bad.json") << "{\"grid\": {\"N\": 3}}";
    try {
        load_config(dir / "bad.json");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(contains(e.what(), "bad.json"));
        CHECK(contains(e.what(), "grid.N"));
    }
    fs::remove_all(dir);
}

TEST_CASE("sampled spectra round-trip and resolve next to the config") {
    const auto dir = scratch_dir("sampled");
    SampledSpectrum s{GridSpec::uniform(1, 2.0, 16), {}};
    for (int n = 0; n < 16; ++n) {
        const double xi = -2.0 + n * 0.25;
        s.values.emplace_back(std::abs(xi) >= 0.5 && std::abs(xi) < 1.0 ? 1.0 : 0.0, 0.1 * n);
    }
    write_sampled_spectrum(dir / "psi.json", s);
    const auto back = read_sampled_spectrum(dir / "psi.json");
    CHECK(back.grid == s.grid);
    CHECK(back.values == s.values);

    std::ofstream(dir / "cfg.json") << R"({"wavelet": {"sampled": "psi.json", "outside": "zero"}, "grid": {"L": 2, "N": 16}})";
    const auto c = load_config(dir / "cfg.json");
    CHECK(c.wavelet.kind == WaveletSpec::Kind::sampled);
    const auto psi = build_wavelet(c.wavelet);
    CHECK(psi.evaluate(vec({-2.0 + 3 * 0.25})) == s.values[3]);
    CHECK(psi.evaluate(vec({10.0})) == Complex(0.0));
    fs::remove_all(dir);
}
