#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qrx/qsim.hpp"
#include "qrx/rates.hpp"

namespace qrx {

inline constexpr const char* kVersion = "0.1.0";

enum class SweepAxis { Nbar, ErrorParam };

enum class ErrorModel {
    None,
    Transducer,
    GateIndependent,
    GateUniform,
    GatePaired,
    CompressionIndependent,
    CompressionUniform,
    CompressionPaired,
};

ErrorModel error_model_from_string(const std::string& name);
std::string to_string(ErrorModel model);

enum class ChannelPath { Povm, Circuit };

struct Grid {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    bool log_spacing = true;
    std::vector<double> explicit_values;  // wins over min/max/points if non-empty

    std::vector<double> values() const;
};

struct ExperimentConfig {
    std::string config_id = "run";
    PolarCode code = standard_code(4);
    SweepAxis sweep = SweepAxis::Nbar;
    Grid nbar_grid{1e-4, 1e-1, 25, true, {}};
    AlphaGrid alpha_grid{};            // alpha optimization for error sweeps
    ErrorModel error_model = ErrorModel::None;
    Grid error_grid{0, 0, 0, true, {}};
    ChannelPath channel_path = ChannelPath::Povm;
    bool multiphoton = false;
    unsigned seed = 0;                 // reserved; the pipeline is deterministic
    double ba_tol_bits = 1e-10;
    int workers = 0;                   // 0: library default

    void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct SweepRow {
    double nbar = 0.0;
    double alpha = 0.0;
    double mutual_information_bits = 0.0;
    double pie = 0.0;
    double baseline_dolinar_pie = 0.0;
    double baseline_holevo_pie = 0.0;
    ErrorModel error_model = ErrorModel::None;
    double error_param = 0.0;
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<SweepRow> rows;  // grid order
};

SweepResult run_sweep(const ExperimentConfig& config,
                      ExecPolicy policy = ExecPolicy::Parallel);

std::string sweep_csv_header();
void write_csv(const SweepResult& result, std::ostream& os);
void write_metadata(const SweepResult& result, std::ostream& os, bool with_timestamp = true);

/// Builds the channel-vs-alpha closure for one (config, error parameter) cell.
ChannelBuilder make_channel_builder(const ExperimentConfig& config, double error_param,
                                    ExecPolicy policy);

/// Quick verification pass: golden POVM spot checks, completeness, and
/// circuit/POVM agreement. Prints one line per check; returns overall success.
bool selftest(std::ostream& os);

}  // namespace qrx
