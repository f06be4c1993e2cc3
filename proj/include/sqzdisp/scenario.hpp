#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sqzdisp/detection.hpp"
#include "sqzdisp/errors.hpp"
#include "sqzdisp/execution.hpp"
#include "sqzdisp/io.hpp"
#include "sqzdisp/ring_cavity.hpp"
#include "sqzdisp/trace.hpp"
#include "sqzdisp/transverse_modes.hpp"

namespace sqzdisp::scenario {

enum class Kind { cavity_scan, noise_floors, modulation, ramp, correlation, sql_table, waist_opt };

[[nodiscard]] std::string_view kind_name(Kind kind);

/// TEM00, TEMf00, TEM0f0, TEMf0f0, TEM11, HG(3,1), HG(f3,1), HG(3,f1).
/// Throws std::invalid_argument.
[[nodiscard]] ModeSpec parse_mode(const std::string& text);

struct Squeezer {
    enum class Path { transmit, reflect, direct };
    enum class Quadrature { amplitude, phase };

    std::string label;
    ModeSpec mode;
    Path path = Path::direct;
    Quadrature quadrature = Quadrature::amplitude;
    /// Exactly one of the three sets the squeezing: the source level, the
    /// floor to reach after the efficiency chain, or the measured
    /// amplitude std relative to the QNL.
    std::optional<double> source_db;
    std::optional<double> target_floor_db;
    std::optional<double> target_std_factor;
    double visibility = 1.0;                  ///< wave-plate mode matching; efficiency V^2
    std::optional<double> cavity_efficiency;  ///< replaces the modelled cavity efficiency
    bool enabled = true;                      ///< disabled squeezers stay in the field as vacuum
};

struct Reported {
    std::string name;
    double value;
};

struct Measurement {
    std::string label;
    Combination combination = Combination::b;
    std::optional<double> coherent_snr;  ///< modulation: coherent SNR the tone is scaled to
    std::vector<Reported> reported;      ///< reference numbers echoed into the summary
};

struct ScanSettings {
    ModeSpec incident = ModeSpec::tem_f0f0();
    double phase_start = 0.0;
    double phase_stop = 0.0;
    int samples = 4096;
    std::optional<double> resolved_finesse;
    int resolved_samples = 16384;
};

struct RampSettings {
    double start = 0.0;  ///< m
    double stop = 0.0;   ///< m
    double anchor_displacement = 0.0;  ///< coherent-beam detection point (m)
    double anchor_confidence = 0.99;
    std::vector<double> confidences{0.99};
    int noise_samples = 1 << 20;
};

struct CorrelationSettings {
    int samples = 65536;
    int scatter_rows = 4096;
    int angles = 36;
};

struct SqlSettings {
    std::vector<double> photons;
    double numerical_aperture = 0.5;
};

struct WaistScan {
    double start = 0.0;
    double stop = 0.0;
    int samples = 0;
    double reference_waist = 0.0;
};

struct Config {
    std::string id;
    std::string description;
    Kind kind = Kind::noise_floors;
    std::uint64_t seed = 1;

    BeamParams beam;
    ModeSpec mean_mode = ModeSpec::tem_f00();
    double power = 1e-3;  ///< W in the mean mode before the beamsplitter
    double mean_visibility = 1.0;
    std::vector<Squeezer> squeezers;
    CavityConfig cavity = CavityConfig::nominal();
    double beamsplitter_reflectivity = 0.95;
    DetectorGeometry detector = DetectorGeometry::etx505q();
    bool detector_loss = true;
    EsaSettings esa;
    std::vector<Measurement> measurements;
    double modulation_frequency = 0.0;

    ScanSettings scan;
    RampSettings ramp;
    CorrelationSettings correlation;
    SqlSettings sql;
    WaistScan waist_scan;

    std::vector<std::string> outputs;  ///< names to write; empty writes all
    std::string source_text;           ///< YAML the config came from
};

/// Parses a scenario. Throws ConfigInvalid with one diagnostic per bad field
/// (unknown keys, missing units, out-of-range values).
[[nodiscard]] Config parse(const std::string& yaml_text);
[[nodiscard]] Config load(const std::filesystem::path& path);

/// Semantic checks beyond parsing: mode orthogonality, ranges, reachable
/// floors, sections the kind needs. Empty when the config is valid.
[[nodiscard]] std::vector<ConfigInvalid::Diagnostic> validate(const Config& config);

struct Options {
    std::optional<std::uint64_t> seed;
    std::optional<int> max_order;  ///< expansion order for cavity calculations (default 58)
    Exec exec = Exec::parallel;
};

struct OutputFile {
    std::string name;  ///< short name used by `outputs`
    std::string file;  ///< file name: <id>_<name>.csv
    std::string content;
};

struct Result {
    std::string id;
    std::uint64_t seed = 0;
    int max_order = 58;
    std::vector<OutputFile> files;
    io::Summary summary;

    [[nodiscard]] const OutputFile& file(const std::string& name) const;
};

/// Runs the pipeline of `config.kind`. Validates first (ConfigInvalid);
/// numerical failures propagate with the scenario id prepended.
[[nodiscard]] Result run(const Config& config, const Options& options = {});

/// Writes the outputs selected by the config and `<id>.manifest` into
/// `dir`, each atomically. Returns the manifest path.
std::filesystem::path write(const Result& result, const Config& config, const std::filesystem::path& dir);

[[nodiscard]] io::Manifest manifest_of(const Result& result, const Config& config);

struct CatalogEntry {
    std::string id;
    std::string yaml;
};

/// Built-in scenarios, sorted by id.
[[nodiscard]] const std::vector<CatalogEntry>& catalog();
/// Throws std::out_of_range for unknown ids.
[[nodiscard]] Config builtin(const std::string& id);

/// Per-squeezer efficiency chain and the variances at both ends of it.
struct SqueezerBudget {
    std::string label;
    double eta_waveplate = 1;
    double eta_cavity = 1;
    double eta_beamsplitter = 1;
    double eta_detector = 1;
    double eta_total = 1;
    double source_var = 1;     ///< amplitude variance at the source
    double delivered_var = 1;  ///< at the detector
};

[[nodiscard]] std::vector<SqueezerBudget> squeezer_budgets(const Config& config, int max_order = 58,
                                                           Exec exec = Exec::serial);

}  // namespace sqzdisp::scenario
