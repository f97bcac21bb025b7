#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "microstat/analysis.hpp"
#include "microstat/image_io.hpp"

namespace microstat::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline constexpr std::string_view kOutputDirEnv = "MICROSTAT_OUTPUT_DIR";

enum class Verbosity { Quiet, Normal, Verbose };

/// Diagnostics go to stderr; stdout stays free for --help and --version.
class Log
{
public:
    Log(std::ostream& err, Verbosity level) : err_(err), level_(level) {}

    void error(std::string_view msg) const;
    void warn(std::string_view msg) const;
    void info(std::string_view msg) const;
    void debug(std::string_view msg) const;

private:
    std::ostream& err_;
    Verbosity level_;
};

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

/// One RFC 4180 record terminated by LF. Fields with commas, quotes or newlines are quoted.
std::string csv_record(std::span<const std::string> fields);

class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header);

    template <class... Ts>
    void add(const Ts&... cells)
    {
        std::vector<std::string> row{cell(cells)...};
        append(row);
    }

    const std::string& text() const { return text_; }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(std::string_view s) { return std::string(s); }
    static std::string cell(const char* s) { return s; }
    static std::string cell(double v) { return format_number(v); }
    template <class T>
        requires std::is_integral_v<T>
    static std::string cell(T v)
    {
        return std::to_string(v);
    }

    void append(std::span<const std::string> row);

    std::size_t width_;
    std::string text_;
};

/// Writes bytes, creating parent directories. Failures raise DataError.
void write_file(const fs::path& path, std::string_view bytes);
std::string read_file(const fs::path& path);

/// PREFIX + suffix, e.g. "out/run" + ".steps.csv".
fs::path with_suffix(const fs::path& prefix, std::string_view suffix);

/// --out when given, else $MICROSTAT_OUTPUT_DIR (or the working directory) joined with fallback_name.
fs::path resolve_output(const std::optional<std::string>& out, std::string_view fallback_name);

std::string image_extension(ImageFormat format);

std::string utc_timestamp();

// Descriptor tables.
std::string descriptor_table_csv(const DescriptorSet& set, Descriptor beta);
std::string long_curves_csv(std::span<const DescriptorSet> sets);
std::string step_table_csv(std::span<const StepRecord> steps, std::span<const CoarsenessPoint> coarseness);

json lengths_json(const LengthTable& table);
json step_json(const StepRecord& step);

/// Paths are recorded absolute so a manifest can be replayed from any directory.
std::string absolute_string(const fs::path& p);

struct Manifest
{
    std::string subcommand;
    json config;
    json seeds = json::object();
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;
    json summary = json::object();
    std::optional<fs::path> replayed_from;
};

/// Manifests are the only artifacts that carry a timestamp.
void write_manifest(const fs::path& path, const Manifest& manifest);

} // namespace microstat::cli
