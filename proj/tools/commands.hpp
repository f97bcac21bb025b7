#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "microstat/experiment.hpp"
#include "microstat/generators.hpp"
#include "output.hpp"

namespace microstat::cli {

// Every config below is fully resolved: defaults filled in, paths fixed. The
// manifest stores exactly this, and replay rebuilds the config from it.

struct GenerateConfig
{
    std::string type = "od";
    MaterialSpec material; // seed lives inside the spec
    fs::path out;
    ImageFormat format = ImageFormat::PbmBinary;
};

struct InputImage
{
    fs::path path;
    std::optional<double> threshold; // PGM only
};

struct CharacterizeConfig
{
    InputImage input;
    Boundary boundary = Boundary::Nonperiodic;
    int step = 0; // ladder rung of the input; pixel size 2^step
    double band = kCorrelationBand;
    fs::path out; // prefix
};

struct DecimateConfig
{
    InputImage input;
    DecimationMethod method;
    int steps = 8;
    bool crop = false;
    Boundary boundary = Boundary::Nonperiodic;
    fs::path out;
    ImageFormat format = ImageFormat::PbmBinary;
};

struct AutoDecimateConfig
{
    InputImage input;
    DecimationMethod method;
    AutoDecimateOptions options;
    fs::path out;
    ImageFormat format = ImageFormat::PbmBinary;
};

struct ExperimentRunConfig
{
    ExperimentConfig experiment;
    fs::path out; // directory
};

json to_json(const GenerateConfig& c);
json to_json(const CharacterizeConfig& c);
json to_json(const DecimateConfig& c);
json to_json(const AutoDecimateConfig& c);
json to_json(const ExperimentRunConfig& c);

GenerateConfig generate_config_from_json(const json& j);
CharacterizeConfig characterize_config_from_json(const json& j);
DecimateConfig decimate_config_from_json(const json& j);
AutoDecimateConfig autodecimate_config_from_json(const json& j);
ExperimentRunConfig experiment_config_from_json(const json& j);

struct RunContext
{
    const Log& log;
    std::optional<fs::path> replayed_from;
};

void run_generate(const GenerateConfig& c, const RunContext& ctx);
void run_characterize(const CharacterizeConfig& c, const RunContext& ctx);
void run_decimate(const DecimateConfig& c, const RunContext& ctx);
void run_autodecimate(const AutoDecimateConfig& c, const RunContext& ctx);
void run_experiment_command(const ExperimentRunConfig& c, const RunContext& ctx);

/// Re-runs the recorded subcommand. A non-empty out replaces the recorded output location.
void run_replay(const fs::path& manifest, const std::optional<std::string>& out, const RunContext& ctx);

/// Manifest written next to an output: PATH.manifest.json for files, PREFIX.manifest.json for prefixes.
fs::path manifest_path(const fs::path& output);

/// Periodic when the image was written by `generate` (its manifest sits next to it), else nonperiodic.
Boundary default_boundary(const fs::path& input);

} // namespace microstat::cli
