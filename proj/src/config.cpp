#include "awf/config.hpp"

#include "awf/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace awf {

namespace {

// Best-effort source line of a field: follow the path's keys through the text in order.
std::string locate(const std::string& text, const std::string& path) {
    std::size_t pos = 0;
    std::stringstream ss(path);
    std::string key;
    bool found = false;
    while (std::getline(ss, key, '.')) {
        const auto bracket = key.find('[');
        if (bracket != std::string::npos) {
            key = key.substr(0, bracket);
        }
        const auto at = text.find('"' + key + '"', pos);
        if (at == std::string::npos) {
            break;
        }
        pos = at;
        found = true;
    }
    if (!found) {
        return path;
    }
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    return "line " + std::to_string(line) + " (" + path + ")";
}

class Reader {
public:
    Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ConfigError(locate(text_, path), what);
    }

    void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) {
            fail(path, "expected an object");
        }
        std::set<std::string> ok;
        for (const char* k : allowed) {
            ok.insert(k);
        }
        for (const auto& item : obj.items()) {
            if (!ok.count(item.key())) {
                fail(join(path, item.key()), "unknown field");
            }
        }
    }

    double number(const Json& v, const std::string& path) const {
        if (!v.is_number()) {
            fail(path, "expected a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(path, "must be finite");
        }
        return x;
    }

    std::int64_t integer(const Json& v, const std::string& path) const {
        if (v.is_number_integer()) {
            return v.get<std::int64_t>();
        }
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) {
                return static_cast<std::int64_t>(x);
            }
        }
        fail(path, "expected an integer");
    }

    std::int64_t nonneg(const Json& v, const std::string& path) const {
        const auto i = integer(v, path);
        if (i < 0) {
            fail(path, "must be nonnegative");
        }
        return i;
    }

    std::uint64_t seed(const Json& v, const std::string& path) const {
        if (v.is_number_unsigned()) {
            return v.get<std::uint64_t>();
        }
        return static_cast<std::uint64_t>(nonneg(v, path));
    }

    std::vector<double> numbers(const Json& v, const std::string& path) const {
        if (!v.is_array()) {
            fail(path, "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    Matrix matrix(const Json& v, const std::string& path) const {
        if (v.is_number()) {
            return Matrix::Constant(1, 1, number(v, path));
        }
        if (!v.is_array() || v.empty()) {
            fail(path, "expected a number or a non-empty array of rows");
        }
        const auto n = static_cast<Eigen::Index>(v.size());
        Matrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::string rp = path + "[" + std::to_string(r) + "]";
            const auto row = numbers(v[static_cast<std::size_t>(r)], rp);
            if (static_cast<Eigen::Index>(row.size()) != n) {
                fail(rp, "matrix must be square (row has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(n) + ")");
            }
            for (Eigen::Index c = 0; c < n; ++c) {
                m(r, c) = row[static_cast<std::size_t>(c)];
            }
        }
        return m;
    }

    JRange jrange(const Json& v, const std::string& path) const {
        if (!v.is_array() || v.size() != 2) {
            fail(path, "expected [lo, hi]");
        }
        const auto lo = integer(v[0], path + "[0]");
        const auto hi = integer(v[1], path + "[1]");
        if (lo > hi) {
            fail(path, "lo must not exceed hi");
        }
        if (std::abs(lo) > 1'000'000 || std::abs(hi) > 1'000'000) {
            fail(path, "scale out of range");
        }
        return {static_cast<int>(lo), static_cast<int>(hi)};
    }

    KBox kbox(const Json& v, const std::string& path) const {
        check_keys(v, path, {"lo", "hi"});
        if (!v.contains("lo") || !v.contains("hi")) {
            fail(path, "k_box needs lo and hi");
        }
        KBox k;
        for (const char* side : {"lo", "hi"}) {
            const std::string sp = join(path, side);
            const Json& arr = v.at(side);
            if (!arr.is_array() || arr.empty()) {
                fail(sp, "expected a non-empty integer array");
            }
            auto& dst = std::strcmp(side, "lo") == 0 ? k.lo : k.hi;
            for (std::size_t i = 0; i < arr.size(); ++i) {
                dst.push_back(integer(arr[i], sp + "[" + std::to_string(i) + "]"));
            }
        }
        if (k.lo.size() != k.hi.size()) {
            fail(path, "lo and hi must have the same length");
        }
        for (std::size_t i = 0; i < k.lo.size(); ++i) {
            if (k.lo[i] > k.hi[i]) {
                fail(path, "lo must not exceed hi on axis " + std::to_string(i));
            }
        }
        return k;
    }

    GridConfig grid(const Json& v, const std::string& path, GridConfig g) const {
        check_keys(v, path, {"L", "N"});
        if (v.contains("L")) {
            g.half_width = number(v["L"], join(path, "L"));
        }
        if (v.contains("N")) {
            const auto n = integer(v["N"], join(path, "N"));
            if (n < 8 || n > (1 << 24) || !std::has_single_bit(static_cast<std::uint64_t>(n))) {
                fail(join(path, "N"), "must be a power of two >= 8");
            }
            g.samples = static_cast<int>(n);
        }
        if (!(g.half_width > 0.0)) {
            fail(join(path, "L"), "must be positive");
        }
        return g;
    }

    BandConfig band(const Json& v, const std::string& path, const char* count_key, BandConfig b) const {
        check_keys(v, path, {count_key, "band"});
        if (v.contains(count_key)) {
            b.count = static_cast<std::size_t>(nonneg(v[count_key], join(path, count_key)));
            if (b.count == 0) {
                fail(join(path, count_key), "must be positive");
            }
        }
        if (v.contains("band")) {
            const auto r = numbers(v["band"], join(path, "band"));
            if (r.size() != 2 || r[0] < 0.0 || r[0] >= r[1]) {
                fail(join(path, "band"), "expected [lo, hi] with 0 <= lo < hi");
            }
            b.band_lo = r[0];
            b.band_hi = r[1];
        }
        return b;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

private:
    const std::string& text_;
};

WaveletSpec parse_wavelet(const Reader& rd, const Json& v, const std::filesystem::path& base_dir) {
    WaveletSpec w;
    if (v.is_string()) {
        w.builtin = v.get<std::string>();
        return w;
    }
    rd.check_keys(v, "wavelet", {"builtin", "bell_degree", "boxes", "amplitude", "sampled", "outside"});
    const int kinds = int(v.contains("builtin")) + int(v.contains("boxes")) + int(v.contains("sampled"));
    if (kinds != 1) {
        rd.fail("wavelet", "give exactly one of builtin, boxes or sampled");
    }
    if (v.contains("builtin")) {
        if (!v["builtin"].is_string()) {
            rd.fail("wavelet.builtin", "expected a string");
        }
        w.builtin = v["builtin"].get<std::string>();
        if (v.contains("bell_degree")) {
            w.bell_degree = static_cast<int>(rd.integer(v["bell_degree"], "wavelet.bell_degree"));
        }
    } else if (v.contains("boxes")) {
        w.kind = WaveletSpec::Kind::indicator;
        const Json& boxes = v["boxes"];
        if (!boxes.is_array() || boxes.empty()) {
            rd.fail("wavelet.boxes", "expected a non-empty array of {lo, hi}");
        }
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            const std::string bp = "wavelet.boxes[" + std::to_string(i) + "]";
            rd.check_keys(boxes[i], bp, {"lo", "hi"});
            if (!boxes[i].contains("lo") || !boxes[i].contains("hi")) {
                rd.fail(bp, "box needs lo and hi");
            }
            const auto lo = rd.numbers(boxes[i]["lo"], bp + ".lo");
            const auto hi = rd.numbers(boxes[i]["hi"], bp + ".hi");
            if (lo.empty() || lo.size() != hi.size()) {
                rd.fail(bp, "lo and hi must be non-empty and of equal length");
            }
            w.boxes.push_back({Eigen::Map<const Vector>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                               Eigen::Map<const Vector>(hi.data(), static_cast<Eigen::Index>(hi.size()))});
        }
        if (v.contains("amplitude")) {
            w.amplitude = rd.number(v["amplitude"], "wavelet.amplitude");
        }
    } else {
        w.kind = WaveletSpec::Kind::sampled;
        if (!v["sampled"].is_string()) {
            rd.fail("wavelet.sampled", "expected a file path");
        }
        w.sampled_path = v["sampled"].get<std::string>();
        const std::filesystem::path p(w.sampled_path);
        w.sampled_resolved = p.is_absolute() ? p : base_dir / p;
        if (!std::filesystem::is_regular_file(w.sampled_resolved)) {
            rd.fail("wavelet.sampled", "file not found: " + w.sampled_resolved.string());
        }
        if (v.contains("outside")) {
            const std::string o = v["outside"].is_string() ? v["outside"].get<std::string>() : "";
            if (o == "error") {
                w.outside = OutsidePolicy::error;
            } else if (o == "zero") {
                w.outside = OutsidePolicy::zero;
            } else {
                rd.fail("wavelet.outside", "expected \"error\" or \"zero\"");
            }
        }
    }
    return w;
}

std::filesystem::path data_path(const std::filesystem::path& sidecar, const std::string& data) {
    const std::filesystem::path p(data);
    return p.is_absolute() ? p : sidecar.parent_path() / p;
}

}  // namespace

GridSpec ExperimentConfig::grid_spec() const { return GridSpec::uniform(dim(), grid.half_width, grid.samples); }

LinalgOptions ExperimentConfig::linalg_options() const { return {power_cap, boundary_tol}; }

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        const auto nl = text.rfind('\n', upto == 0 ? 0 : upto - 1);
        const auto col = nl == std::string::npos ? upto : upto - nl - 1;
        std::string what = e.what();
        if (const auto at = what.find("syntax error"); at != std::string::npos) {
            what = what.substr(at);
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), what);
    }

    const Reader rd(text);
    rd.check_keys(doc, "", {"dilation", "translation", "wavelet", "grid", "j_range", "frame_j_range", "k_box",
                            "truncation", "tolerance", "allowance", "identity_tolerance", "boundary_tol", "power_cap",
                            "seed", "test_space", "test_functions", "quasilattice", "grid_2d", "outputs"});
    ExperimentConfig c;

    if (doc.contains("power_cap")) {
        c.power_cap = static_cast<int>(rd.nonneg(doc["power_cap"], "power_cap"));
        if (c.power_cap < 1 || c.power_cap > 4096) {
            rd.fail("power_cap", "must lie in [1, 4096]");
        }
    }
    if (doc.contains("boundary_tol")) {
        c.boundary_tol = rd.number(doc["boundary_tol"], "boundary_tol");
        if (!(c.boundary_tol >= 0.0)) {
            rd.fail("boundary_tol", "must be nonnegative");
        }
    }
    if (doc.contains("dilation")) {
        c.dilation = rd.matrix(doc["dilation"], "dilation");
    }
    c.translation = Matrix::Identity(c.dim(), c.dim());
    if (doc.contains("translation")) {
        c.translation = rd.matrix(doc["translation"], "translation");
    }
    for (const auto& [name, m] : {std::pair<const char*, const Matrix*>{"dilation", &c.dilation},
                                  std::pair<const char*, const Matrix*>{"translation", &c.translation}}) {
        if (m->rows() != c.dim()) {
            rd.fail(name, "dimension " + std::to_string(m->rows()) + " does not match the dilation (" +
                              std::to_string(c.dim()) + ")");
        }
        try {
            DilationDescriptor check(*m, c.linalg_options());
        } catch (const Error& e) {
            rd.fail(name, e.what());
        }
    }

    if (doc.contains("wavelet")) {
        c.wavelet = parse_wavelet(rd, doc["wavelet"], base_dir);
    }
    try {
        const auto psi = build_wavelet(c.wavelet);
        if (psi.dim() != c.dim()) {
            rd.fail("wavelet", "wavelet dimension " + std::to_string(psi.dim()) + " does not match the dilation (" +
                                   std::to_string(c.dim()) + ")");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        rd.fail("wavelet", e.what());
    }

    if (doc.contains("grid")) {
        c.grid = rd.grid(doc["grid"], "grid", c.grid);
    }
    if (doc.contains("grid_2d")) {
        c.grid_2d = rd.grid(doc["grid_2d"], "grid_2d", c.grid_2d);
    }
    if (static_cast<double>(c.grid_spec().size()) > 6.7e7) {
        rd.fail("grid", "N^d exceeds 2^26 grid points");
    }

    const auto check_range = [&](JRange r, const std::string& path) {
        if (std::max(std::abs(r.lo), std::abs(r.hi)) > c.power_cap) {
            rd.fail(path, "scales must satisfy |j| <= power_cap (" + std::to_string(c.power_cap) + ")");
        }
    };
    if (doc.contains("j_range")) {
        c.j_range = rd.jrange(doc["j_range"], "j_range");
    }
    check_range(c.j_range, "j_range");
    if (doc.contains("frame_j_range") && !doc["frame_j_range"].is_null()) {
        c.frame_j_range = rd.jrange(doc["frame_j_range"], "frame_j_range");
        check_range(*c.frame_j_range, "frame_j_range");
    }
    if (doc.contains("k_box") && !doc["k_box"].is_null()) {
        c.k_box = rd.kbox(doc["k_box"], "k_box");
        if (c.k_box->dim() != c.dim()) {
            rd.fail("k_box", "dimension does not match the dilation");
        }
    }
    if (doc.contains("truncation")) {
        c.truncation = static_cast<int>(rd.nonneg(doc["truncation"], "truncation"));
    }
    if (c.truncation > c.power_cap) {
        rd.fail("truncation", "must not exceed power_cap (" + std::to_string(c.power_cap) + ")");
    }
    for (const auto& [key, dst] : {std::pair<const char*, double*>{"tolerance", &c.tolerance},
                                   std::pair<const char*, double*>{"allowance", &c.allowance},
                                   std::pair<const char*, double*>{"identity_tolerance", &c.identity_tolerance}}) {
        if (doc.contains(key)) {
            *dst = rd.number(doc[key], key);
        }
    }
    if (!(c.tolerance > 0.0)) {
        rd.fail("tolerance", "must be positive");
    }
    if (c.allowance < 0.0) {
        rd.fail("allowance", "must be nonnegative");
    }
    if (!(c.identity_tolerance > 0.0)) {
        rd.fail("identity_tolerance", "must be positive");
    }
    if (doc.contains("seed")) {
        c.seed = rd.seed(doc["seed"], "seed");
    }
    if (doc.contains("test_space")) {
        c.test_space = rd.band(doc["test_space"], "test_space", "dimension", c.test_space);
    }
    if (doc.contains("test_functions")) {
        c.test_functions = rd.band(doc["test_functions"], "test_functions", "count", c.test_functions);
    }

    if (doc.contains("quasilattice")) {
        const Json& q = doc["quasilattice"];
        rd.check_keys(q, "quasilattice", {"j_range", "k_box", "probes", "cell", "max_points"});
        if (q.contains("j_range")) {
            c.quasilattice.j_range = rd.jrange(q["j_range"], "quasilattice.j_range");
        }
        if (q.contains("k_box") && !q["k_box"].is_null()) {
            c.quasilattice.k_box = rd.kbox(q["k_box"], "quasilattice.k_box");
            if (c.quasilattice.k_box->dim() != c.dim()) {
                rd.fail("quasilattice.k_box", "dimension does not match the dilation");
            }
        }
        if (q.contains("probes")) {
            c.quasilattice.probes = static_cast<std::size_t>(rd.nonneg(q["probes"], "quasilattice.probes"));
        }
        if (q.contains("cell")) {
            c.quasilattice.cell = rd.number(q["cell"], "quasilattice.cell");
            if (!(c.quasilattice.cell > 0.0 && c.quasilattice.cell < 0.5)) {
                rd.fail("quasilattice.cell", "must lie in (0, 0.5)");
            }
        }
        if (q.contains("max_points")) {
            c.quasilattice.max_points = static_cast<std::size_t>(rd.nonneg(q["max_points"], "quasilattice.max_points"));
        }
    }
    check_range(c.quasilattice.j_range, "quasilattice.j_range");

    if (doc.contains("outputs")) {
        const Json& o = doc["outputs"];
        rd.check_keys(o, "outputs", {"dir", "csv"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) {
                rd.fail("outputs.dir", "expected a string");
            }
            c.out_dir = o["dir"].get<std::string>();
        }
        if (o.contains("csv")) {
            if (!o["csv"].is_boolean()) {
                rd.fail("outputs.csv", "expected true or false");
            }
            c.write_csv = o["csv"].get<bool>();
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string(), "cannot open config file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

FrequencyWavelet build_wavelet(const WaveletSpec& spec) {
    switch (spec.kind) {
        case WaveletSpec::Kind::builtin:
            return builtin_wavelet(spec.builtin, BuiltinParams{spec.bell_degree});
        case WaveletSpec::Kind::indicator:
            return FrequencyWavelet::indicator(spec.boxes, spec.amplitude);
        case WaveletSpec::Kind::sampled: {
            auto s = read_sampled_spectrum(spec.sampled_resolved);
            return FrequencyWavelet::sampled(std::move(s.grid), std::move(s.values), spec.outside);
        }
    }
    throw ArgumentError("unknown wavelet kind");
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json box_to_json(const FrequencyBox& b) {
    return Json{{"lo", std::vector<double>(b.lo.data(), b.lo.data() + b.lo.size())},
                {"hi", std::vector<double>(b.hi.data(), b.hi.data() + b.hi.size())}};
}

Json kbox_to_json(const KBox& k) { return Json{{"lo", k.lo}, {"hi", k.hi}}; }

Json to_json(const ExperimentConfig& c) {
    Json w;
    switch (c.wavelet.kind) {
        case WaveletSpec::Kind::builtin:
            w["builtin"] = c.wavelet.builtin;
            w["bell_degree"] = c.wavelet.bell_degree;
            break;
        case WaveletSpec::Kind::indicator: {
            Json boxes = Json::array();
            for (const auto& b : c.wavelet.boxes) {
                boxes.push_back(box_to_json(b));
            }
            w["boxes"] = std::move(boxes);
            w["amplitude"] = c.wavelet.amplitude;
            break;
        }
        case WaveletSpec::Kind::sampled:
            w["sampled"] = c.wavelet.sampled_path;
            w["outside"] = c.wavelet.outside == OutsidePolicy::zero ? "zero" : "error";
            break;
    }
    const auto jr = [](JRange r) { return Json::array({r.lo, r.hi}); };
    const auto band = [](const BandConfig& b, const char* key) {
        return Json{{key, b.count}, {"band", Json::array({b.band_lo, b.band_hi})}};
    };
    Json j;
    j["dilation"] = matrix_to_json(c.dilation);
    j["translation"] = matrix_to_json(c.translation);
    j["wavelet"] = std::move(w);
    j["grid"] = {{"L", c.grid.half_width}, {"N", c.grid.samples}};
    j["j_range"] = jr(c.j_range);
    j["frame_j_range"] = c.frame_j_range ? jr(*c.frame_j_range) : Json(nullptr);
    j["k_box"] = c.k_box ? kbox_to_json(*c.k_box) : Json(nullptr);
    j["truncation"] = c.truncation;
    j["tolerance"] = c.tolerance;
    j["allowance"] = c.allowance;
    j["identity_tolerance"] = c.identity_tolerance;
    j["boundary_tol"] = c.boundary_tol;
    j["power_cap"] = c.power_cap;
    j["seed"] = c.seed;
    j["test_space"] = band(c.test_space, "dimension");
    j["test_functions"] = band(c.test_functions, "count");
    j["quasilattice"] = {{"j_range", jr(c.quasilattice.j_range)},
                         {"k_box", c.quasilattice.k_box ? kbox_to_json(*c.quasilattice.k_box) : Json(nullptr)},
                         {"probes", c.quasilattice.probes},
                         {"cell", c.quasilattice.cell},
                         {"max_points", c.quasilattice.max_points}};
    j["grid_2d"] = {{"L", c.grid_2d.half_width}, {"N", c.grid_2d.samples}};
    j["outputs"] = {{"dir", c.out_dir}, {"csv", c.write_csv}};
    return j;
}

SampledSpectrum read_sampled_spectrum(const std::filesystem::path& sidecar) {
    std::ifstream in(sidecar);
    if (!in) {
        throw ConfigError(sidecar.string(), "cannot open sampled-spectrum sidecar");
    }
    Json meta;
    try {
        meta = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(sidecar.string(), e.what());
    }
    const auto need = [&](const char* key) -> const Json& {
        if (!meta.contains(key)) {
            throw ConfigError(sidecar.string() + ": " + key, "missing field");
        }
        return meta[key];
    };
    SampledSpectrum s;
    try {
        s.grid = GridSpec::uniform(need("dim").get<int>(), need("L").get<double>(), need("N").get<int>());
        s.grid.validate();
    } catch (const Json::exception& e) {
        throw ConfigError(sidecar.string(), e.what());
    } catch (const ArgumentError& e) {
        throw ConfigError(sidecar.string(), e.what());
    }
    const bool cplx = meta.value("complex", true);
    const auto path = data_path(sidecar, need("data").get<std::string>());
    std::ifstream raw(path, std::ios::binary);
    if (!raw) {
        throw ConfigError(sidecar.string() + ": data", "file not found: " + path.string());
    }
    static_assert(std::endian::native == std::endian::little, "sampled spectra are stored little-endian");
    const std::size_t count = s.grid.size() * (cplx ? 2 : 1);
    std::vector<double> buf(count);
    raw.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(raw.gcount()) != count * sizeof(double) || raw.peek() != EOF) {
        throw ConfigError(sidecar.string() + ": data", "expected exactly " + std::to_string(count) + " float64 values");
    }
    s.values.resize(s.grid.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        s.values[i] = cplx ? Complex{buf[2 * i], buf[2 * i + 1]} : Complex{buf[i], 0.0};
    }
    return s;
}

void write_sampled_spectrum(const std::filesystem::path& sidecar, const SampledSpectrum& s) {
    std::filesystem::path data = sidecar;
    data.replace_extension(".bin");
    {
        std::ofstream raw(data, std::ios::binary);
        for (const auto& v : s.values) {
            const double re = v.real();
            const double im = v.imag();
            raw.write(reinterpret_cast<const char*>(&re), sizeof re);
            raw.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
        if (!raw) {
            throw ResourceError("cannot write " + data.string());
        }
    }
    const Json meta{{"dim", s.grid.dim()},
                    {"L", s.grid.half_width.front()},
                    {"N", s.grid.samples.front()},
                    {"complex", true},
                    {"data", data.filename().string()}};
    std::ofstream out(sidecar);
    out << meta.dump(2) << '\n';
    if (!out) {
        throw ResourceError("cannot write " + sidecar.string());
    }
}

}  // namespace awf
