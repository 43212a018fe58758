#include "awf/errors.hpp"
#include "awf/experiments.hpp"

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace awf;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("awf_exp_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig shannon() { return parse_config(R"({"wavelet": "shannon_1d", "grid": {"L": 8, "N": 1024}})"); }

}  // namespace

TEST_CASE("subcommand list") {
    const auto& names = subcommand_names();
    for (const char* n : {"calderon", "frame-bounds", "transform-identity", "quasilattice-check", "wavelet-set-check",
                          "full-report"}) {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    }
    CHECK_THROWS_AS(run_experiment("nope", shannon()), ArgumentError);
}

TEST_CASE("report layout") {
    const auto e = run_experiment("calderon", shannon());
    const auto& r = e.report;
    CHECK(r["schema"] == 1);
    CHECK(r["subcommand"] == "calderon");
    CHECK(r.contains("config"));
    CHECK(r.contains("results"));
    CHECK(r["pass"] == true);
    CHECK(r["metadata"].contains("timestamp"));
    CHECK(r["config"] == to_json(shannon()));
    CHECK_FALSE(e.csv.empty());
}

TEST_CASE("exit statuses and written files") {
    const auto dir = scratch_dir("status");
    const auto ok = run_subcommand("calderon", shannon(), dir.string());
    CHECK(ok.status == exit_pass);
    CHECK(fs::exists(dir / "calderon.json"));
    CHECK(fs::exists(dir / "calderon.csv"));
    CHECK(ok.report["metadata"]["output_dir"] == dir.string());

    auto wide = shannon();
    wide.translation = Matrix::Constant(1, 1, 2.0);
    CHECK(run_subcommand("calderon", wide, dir.string()).status == exit_fail);

    auto quiet = shannon();
    quiet.write_csv = false;
    const auto q = run_subcommand("transform-identity", quiet, dir.string());
    CHECK(q.status == exit_pass);
    CHECK(q.files.size() == 1);

    const auto ql = run_subcommand("quasilattice-check", parse_config(R"({"dilation": 2})"), dir.string());
    CHECK(ql.status == exit_pass);
    fs::remove_all(dir);
}

TEST_CASE("reruns agree apart from metadata") {
    const auto c = parse_config(R"({"wavelet": "meyer_1d", "grid": {"L": 8, "N": 1024}, "seed": 17,
                                    "test_space": {"dimension": 16}, "test_functions": {"count": 3}})");
    for (const char* name : {"calderon", "frame-bounds", "transform-identity", "quasilattice-check"}) {
        const auto a = run_experiment(name, c);
        const auto b = run_experiment(name, c);
        CHECK(reports_equal(a.report, b.report));
        CHECK(a.csv == b.csv);
    }
    auto other = c;
    other.seed = 18;
    CHECK_FALSE(reports_equal(run_experiment("frame-bounds", c).report, run_experiment("frame-bounds", other).report));
}

TEST_CASE("output directory is not part of the comparison") {
    const auto d1 = scratch_dir("out1");
    const auto d2 = scratch_dir("out2");
    const auto a = run_subcommand("calderon", shannon(), d1.string());
    const auto b = run_subcommand("calderon", shannon(), d2.string());
    CHECK(reports_equal(a.report, b.report));
    std::ifstream i1(d1 / "calderon.json");
    std::ifstream i2(d2 / "calderon.json");
    CHECK(reports_equal(Json::parse(i1), Json::parse(i2)));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("wavelet-set verdicts") {
    CHECK(run_experiment("wavelet-set-check", shannon()).report["pass"] == true);
    // [-2,2)^2 minus [-1,1)^2 tiles under dilation but not under integer translation
    const auto annulus = parse_config(R"({"dilation": [[2, 0], [0, 2]], "translation": [[1, 0], [0, 1]],
        "wavelet": {"boxes": [{"lo": [-2, -2], "hi": [-1, 2]}, {"lo": [1, -2], "hi": [2, 2]},
                              {"lo": [-1, -2], "hi": [1, -1]}, {"lo": [-1, 1], "hi": [1, 2]}]},
        "grid": {"L": 4, "N": 64}})");
    const auto r = run_experiment("wavelet-set-check", annulus).report;
    CHECK(r["pass"] == false);
}
