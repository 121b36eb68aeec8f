#pragma once
// Scenario-driven experiments: strict config parsing, the per-kind pipelines,
// and report/manifest persistence.

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bergman/analysis.hpp"
#include "bergman/berezin.hpp"
#include "bergman/symbol.hpp"
#include "bergman/toeplitz.hpp"

namespace bergman::lab {

inline constexpr const char* kVersion = "0.1.0";

enum class ScenarioKind { ToeplitzBuild, BerezinGrid, Invertibility, TheoremCheck, PowerSymbolExample };
/// Config tokens "3.1", "3.2", "3.3", "shift_demo".
enum class CheckKind { SmallRatio, LargeRatio, InvertibilityEquivalence, ShiftDemo };

const char* to_string(ScenarioKind k) noexcept;
const char* to_string(CheckKind k) noexcept;

struct Thresholds {
    std::optional<double> inf_positive;
    std::optional<double> sigma_positive;
    std::optional<double> drift;
};

struct Scenario {
    std::string name;
    ScenarioKind kind = ScenarioKind::Invertibility;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    nlohmann::json echo;  ///< the config as parsed

    std::optional<HarmonicSymbol> symbol;
    std::vector<std::size_t> schedule;
    std::optional<DiscGrid> grid;
    std::optional<QuadratureSpec> quadrature;
    Thresholds thresholds;

    // toeplitz_build
    std::optional<std::size_t> size;
    std::optional<Builder> builder;
    // berezin_grid
    std::optional<BerezinRoute> route;
    std::optional<std::size_t> matrix_size;
    // theorem_check
    std::optional<CheckKind> check;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> dimension;
    std::optional<std::size_t> trials;
    std::optional<Complex> s;
    // example_3_5
    std::optional<double> t;
};

/// Strict parse: unknown keys, missing kind-specific keys and out-of-range values
/// raise ValidationError naming the field. `output_dir_override` replaces (or
/// supplies) output_dir.
Scenario parse_scenario(const nlohmann::json& config,
                        const std::optional<std::filesystem::path>& output_dir_override = std::nullopt);
Scenario load_scenario(const std::filesystem::path& path,
                       const std::optional<std::filesystem::path>& output_dir_override = std::nullopt);

/// Symbol fragment: {"kind": "polynomial", "coeffs": [[re, im], ...]},
/// {"kind": "rational", "p": [...], "q": [...]} or
/// {"kind": "power", "t": real, "base": "ratio" | "one_plus_z" | "one_minus_z"}.
AnalyticSymbol parse_symbol(const nlohmann::json& fragment, const std::string& path = "symbol");

struct FileRecord {
    std::string path;  ///< relative to output_dir
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    nlohmann::json scenario;
    std::map<std::string, std::string> versions;
    std::vector<std::pair<std::string, double>> timings;  ///< stage, seconds
    std::vector<FileRecord> files;
};

nlohmann::json to_json(const RunManifest& m);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_bytes(const std::string& bytes);

/// Result of one scenario: kind-specific report plus any tabular side outputs.
struct RunOutput {
    nlohmann::json report;
    std::vector<std::pair<std::string, std::string>> extra_files;  ///< name, contents
    std::vector<std::pair<std::string, double>> timings;
    bool all_checks_passed = true;
};

/// Runs the pipeline without touching the filesystem.
RunOutput execute(const Scenario& scenario);

/// Executes, writes report.json plus side files into output_dir, then
/// manifest.json listing every other file in the directory.
RunManifest run_scenario(const Scenario& scenario);
RunManifest run_scenario(const std::filesystem::path& config_path,
                         const std::optional<std::filesystem::path>& output_dir_override = std::nullopt);

struct PowerSymbolOptions {
    double t = 1.0;
    std::vector<std::size_t> schedule;
    DiscGrid grid = DiscGrid::dyadic(10, 256);
    double sigma_threshold = kSigmaPositive;
    double drift_threshold = 0.05;
};

/// Power symbol ((1+z)/(1-z))^{it}: grid bounds for phi and its two factors,
/// top-left N/2 block residuals of both factor orderings, and the sigma_min trend.
/// Refuses |t| > 20 with NumericalError.
nlohmann::json run_power_symbol_example(const PowerSymbolOptions& options, bool& passed);

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

}  // namespace bergman::lab
