#pragma once

#include "awf/group.hpp"
#include "awf/wavelets.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace awf {

using Json = nlohmann::ordered_json;

struct WaveletSpec {
    enum class Kind { builtin, indicator, sampled };
    Kind kind = Kind::builtin;
    std::string builtin = "haar";
    int bell_degree = 3;
    std::vector<FrequencyBox> boxes;
    double amplitude = 1.0;
    /// Sidecar path as written in the config, and resolved against the config directory.
    std::string sampled_path;
    std::filesystem::path sampled_resolved;
    OutsidePolicy outside = OutsidePolicy::error;
};

struct GridConfig {
    double half_width = 16.0;
    int samples = 4096;
};

struct BandConfig {
    std::size_t count = 10;
    double band_lo = 0.25;
    double band_hi = 4.0;
};

struct QuasiLatticeConfig {
    JRange j_range{-3, 3};
    /// Empty means symmetric [-8, 8] per axis.
    std::optional<KBox> k_box;
    std::size_t probes = 1000;
    /// Shrink/enlarge step of the covolume sandwich, in units of the complement's unit cube.
    double cell = 1.0 / 64.0;
    std::size_t max_points = kDefaultMaxWindowPoints;
};

struct ExperimentConfig {
    Matrix dilation = Matrix::Constant(1, 1, 2.0);
    Matrix translation = Matrix::Identity(1, 1);
    WaveletSpec wavelet;
    GridConfig grid;
    /// Scales of the semi-continuous transform.
    JRange j_range{-12, 12};
    /// Scales of the discrete system; unset picks the longest grid-resolved run inside j_range.
    std::optional<JRange> frame_j_range;
    /// Unset uses every translate inside the torus.
    std::optional<KBox> k_box;
    int truncation = 40;
    double tolerance = 1e-6;
    double allowance = 0.05;
    /// Accepted deviation of the Plancherel ratio from 1.
    double identity_tolerance = 0.02;
    double boundary_tol = 1e-9;
    int power_cap = 64;
    std::uint64_t seed = 1;
    BandConfig test_space{64, 0.25, 4.0};
    BandConfig test_functions{10, 0.25, 4.0};
    QuasiLatticeConfig quasilattice;
    /// Grid for the 2D fixture of full-report.
    GridConfig grid_2d{8.0, 64};
    std::string out_dir = ".";
    bool write_csv = true;

    int dim() const { return static_cast<int>(dilation.rows()); }
    GridSpec grid_spec() const;
    LinalgOptions linalg_options() const;
};

/// Parses and validates a config document. Parse errors report "line L, column C";
/// field errors report the JSON path (e.g. "grid.N"). `base_dir` resolves relative file paths.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved config as JSON (every field, defaults filled in).
Json to_json(const ExperimentConfig& config);

FrequencyWavelet build_wavelet(const WaveletSpec& spec);

Json matrix_to_json(const Matrix& m);
Json box_to_json(const FrequencyBox& b);
Json kbox_to_json(const KBox& k);

/// Sampled spectrum on disk: a JSON sidecar {"dim", "L", "N", "complex", "data"} naming a
/// raw file of little-endian float64 values (re/im interleaved when complex), natural order.
struct SampledSpectrum {
    GridSpec grid;
    std::vector<Complex> values;
};

SampledSpectrum read_sampled_spectrum(const std::filesystem::path& sidecar);
void write_sampled_spectrum(const std::filesystem::path& sidecar, const SampledSpectrum& s);

}  // namespace awf
