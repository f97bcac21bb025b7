#include "output.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "microstat/error.hpp"
#include "microstat/rng.hpp"

#ifndef MICROSTAT_VERSION
#define MICROSTAT_VERSION "0.0.0"
#endif

namespace microstat::cli {

void Log::error(std::string_view msg) const { err_ << "error: " << msg << '\n'; }

void Log::warn(std::string_view msg) const
{
    if (level_ != Verbosity::Quiet)
        err_ << "warning: " << msg << '\n';
}

void Log::info(std::string_view msg) const
{
    if (level_ != Verbosity::Quiet)
        err_ << msg << '\n';
}

void Log::debug(std::string_view msg) const
{
    if (level_ == Verbosity::Verbose)
        err_ << "  " << msg << '\n';
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_record(std::span<const std::string> fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            line += ',';
        const auto& f = fields[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            line += f;
            continue;
        }
        line += '"';
        for (char c : f) {
            if (c == '"')
                line += '"';
            line += c;
        }
        line += '"';
    }
    line += '\n';
    return line;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()), text_(csv_record(header)) {}

void CsvTable::append(std::span<const std::string> row)
{
    if (row.size() != width_)
        throw std::logic_error("CSV row width does not match header");
    text_ += csv_record(row);
}

void write_file(const fs::path& path, std::string_view bytes)
{
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw DataError("write failed: " + path.string());
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path with_suffix(const fs::path& prefix, std::string_view suffix)
{
    return fs::path(prefix.string() + std::string(suffix));
}

fs::path resolve_output(const std::optional<std::string>& out, std::string_view fallback_name)
{
    if (out && !out->empty())
        return fs::path(*out);
    const char* dir = std::getenv(std::string(kOutputDirEnv).c_str());
    const fs::path base = (dir && *dir) ? fs::path(dir) : fs::path(".");
    return base / std::string(fallback_name);
}

std::string image_extension(ImageFormat format)
{
    switch (format) {
    case ImageFormat::PbmAscii:
    case ImageFormat::PbmBinary: return ".pbm";
    case ImageFormat::PgmAscii:
    case ImageFormat::PgmBinary: return ".pgm";
    case ImageFormat::Csv: return ".csv";
    }
    return ".img";
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string descriptor_table_csv(const DescriptorSet& set, Descriptor beta)
{
    const auto& c0 = set.at(beta, Phase::Void);
    const auto& c1 = set.at(beta, Phase::Solid);
    CsvTable t({"r", "phase0", "phase1"});
    for (std::size_t l = 0; l < c0.values.size(); ++l)
        t.add(c0.distances[l], c0.values[l], c1.values[l]);
    return t.text();
}

std::string long_curves_csv(std::span<const DescriptorSet> sets)
{
    CsvTable t({"r", "beta", "phase", "k", "value"});
    for (const auto& set : sets)
        for (const auto& c : set.curves)
            for (std::size_t l = 0; l < c.values.size(); ++l)
                t.add(c.distances[l], static_cast<int>(c.beta), index(c.phase), c.step, c.values[l]);
    return t.text();
}

namespace {

std::string slot_label(std::size_t slot)
{
    return "E_" + std::to_string(slot / 2 + 1) + "_" + std::to_string(slot % 2);
}

} // namespace

std::string step_table_csv(std::span<const StepRecord> steps, std::span<const CoarsenessPoint> coarseness)
{
    std::vector<std::string> header{"k", "rows", "cols", "pixel_size", "phi0", "phi1", "s", "s_over_phi0",
                                    "s_over_phi1"};
    for (std::size_t i = 0; i < 6; ++i)
        header.push_back(slot_label(i));
    for (const char* h : {"global_error", "coarseness", "all_defined"})
        header.emplace_back(h);
    CsvTable t(header);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        const double c = i < coarseness.size() ? coarseness[i].value : 0.0;
        const auto& e = s.deviations;
        t.add(s.step, s.rows, s.cols, s.pixel_size, s.phi[0], s.phi[1], s.s, s.s_over_phi[0], s.s_over_phi[1],
              e[0], e[1], e[2], e[3], e[4], e[5], s.global_error, c, s.all_defined ? 1 : 0);
    }
    return t.text();
}

json lengths_json(const LengthTable& table)
{
    json items = json::array();
    for (Descriptor beta : kDescriptors)
        for (Phase j : kPhases) {
            const auto& len = table.at(beta, j);
            items.push_back({{"beta", static_cast<int>(beta)},
                             {"descriptor", descriptor_name(beta)},
                             {"phase", index(j)},
                             {"length", len.length},
                             {"reached", len.reached}});
        }
    return {{"per_descriptor", items}, {"min", table.min}, {"mean", table.mean}, {"max", table.max}};
}

json step_json(const StepRecord& s)
{
    json dev = json::array();
    for (std::size_t i = 0; i < 6; ++i)
        dev.push_back({{"beta", i / 2 + 1}, {"phase", i % 2}, {"value", s.deviations[i]}});
    return {{"k", s.step},
            {"rows", s.rows},
            {"cols", s.cols},
            {"pixel_size", s.pixel_size},
            {"phi", {s.phi[0], s.phi[1]}},
            {"s", s.s},
            {"s_over_phi", {s.s_over_phi[0], s.s_over_phi[1]}},
            {"deviations", dev},
            {"global_error", s.global_error},
            {"all_defined", s.all_defined}};
}

std::string absolute_string(const fs::path& p)
{
    std::error_code ec;
    const auto abs = fs::absolute(p, ec);
    return (ec ? p : abs.lexically_normal()).string();
}

void write_manifest(const fs::path& path, const Manifest& m)
{
    json doc;
    doc["tool"] = "microstat";
    doc["version"] = MICROSTAT_VERSION;
    doc["subcommand"] = m.subcommand;
    doc["config"] = m.config;
    doc["seeds"] = m.seeds;
    doc["rng"] = kRngAlgorithm;
    json inputs = json::array();
    for (const auto& p : m.inputs)
        inputs.push_back(absolute_string(p));
    json outputs = json::array();
    for (const auto& p : m.outputs)
        outputs.push_back(absolute_string(p));
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["summary"] = m.summary;
    if (m.replayed_from)
        doc["replayed_from"] = absolute_string(*m.replayed_from);
    doc["timestamp"] = utc_timestamp();
    write_file(path, doc.dump(2) + "\n");
}

} // namespace microstat::cli
