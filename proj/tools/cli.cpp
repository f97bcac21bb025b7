#include "cli.hpp"

#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "microstat/error.hpp"

#ifndef MICROSTAT_VERSION
#define MICROSTAT_VERSION "0.0.0"
#endif

namespace microstat::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

/// Flag combinations CLI11 cannot express; reported with the usage exit code.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct InputFlags
{
    std::string path;
    std::optional<double> threshold;
    std::optional<std::string> boundary;

    void attach(CLI::App* sub)
    {
        sub->add_option("input", path, "Binary image (PBM P1/P4, PGM P2/P5, CSV)")->required()->check(CLI::ExistingFile);
        sub->add_option("--threshold", threshold, "Gray level at or above which a PGM pixel is phase 1");
        sub->add_option("--boundary", boundary,
                        "Descriptor boundary; default periodic for generated images, else nonperiodic")
            ->check(CLI::IsMember({"periodic", "nonperiodic"}));
    }

    InputImage image() const { return {path, threshold}; }

    Boundary resolved_boundary() const { return boundary ? parse_boundary(*boundary) : default_boundary(path); }
};

struct MethodFlags
{
    std::string name;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* sub)
    {
        sub->add_option("--method", name, "Decimation rule")
            ->required()
            ->check(CLI::IsMember({"random", "bilinear", "bicubic"}));
        sub->add_option("--seed", seed, "Seed of the random rule");
    }

    DecimationMethod resolve(const Log& log) const
    {
        const auto kind = parse_method(name);
        if (kind != DecimationKind::Random) {
            if (seed)
                log.warn("--seed has no effect with --method " + name);
            return {kind, 0};
        }
        if (!seed)
            log.info("no --seed given; using " + std::to_string(kDefaultSeed));
        return DecimationMethod::random(seed.value_or(kDefaultSeed));
    }
};

std::optional<ImageFormat> parse_optional_format(const std::optional<std::string>& name)
{
    if (!name)
        return std::nullopt;
    return parse_format(*name);
}

std::string input_stem(const std::string& path) { return fs::path(path).stem().string(); }

struct GenerateFlags
{
    std::string type = "od";
    int size = 4096;
    std::uint64_t seed = kDefaultSeed;
    std::optional<int> disks, reference_disks, rmin, rmax;
    std::optional<double> mu, sigma;
    std::optional<std::string> order;
    std::optional<int> kernel;
    std::optional<double> threshold;
    std::optional<std::string> out, format;

    void attach(CLI::App* sub)
    {
        sub->add_option("--type", type, "Material: id, od (disks) or logk, logk1, logk2, logk3 (level cut)")
            ->check(CLI::IsMember({"id", "od", "logk", "logk1", "logk2", "logk3"}));
        sub->add_option("--size", size, "Image side in pixels")->capture_default_str();
        sub->add_option("--seed", seed, "Material seed")->capture_default_str();
        auto* g = sub->add_option_group("disks", "Disk materials (id, od)");
        g->add_option("--disks", disks, "Disk count I; default area-scaled from the full-scale count");
        g->add_option("--reference-disks", reference_disks,
                      "Count at which the radius histogram is rounded; 0 rounds at --disks");
        g->add_option("--rmin", rmin, "Smallest radius");
        g->add_option("--rmax", rmax, "Largest radius");
        g->add_option("--mu", mu, "Radius mean before folding");
        g->add_option("--sigma", sigma, "Radius standard deviation before folding");
        g->add_option("--order", order, "Placement order")->check(CLI::IsMember({"shuffled", "largest-first"}));
        auto* l = sub->add_option_group("level cut", "Level-cut materials (logk*)");
        l->add_option("--kernel", kernel, "Odd kernel side b");
        l->add_option("--threshold", threshold, "Level a0 on the 0..255 blurred field");
        sub->add_option("--out", out, "Output image path");
        sub->add_option("--format", format, "pbm, pbm-ascii, pgm, pgm-ascii or csv; default from --out")
            ->check(CLI::IsMember({"pbm", "pbm-ascii", "pgm", "pgm-ascii", "csv"}));
    }

    GenerateConfig resolve() const
    {
        const bool is_log = type.rfind("logk", 0) == 0;
        const bool has_disk_flags = disks || reference_disks || rmin || rmax || mu || sigma || order;
        if (is_log && has_disk_flags)
            throw UsageError("disk flags do not apply to --type " + type);
        if (!is_log && (kernel || threshold))
            throw UsageError("--kernel and --threshold do not apply to --type " + type);
        if (size <= 0)
            throw UsageError("--size must be positive");

        GenerateConfig c;
        c.type = type;
        c.material = material_preset(type == "logk" ? "logk1" : type, size);
        if (auto* d = std::get_if<DiskMaterialSpec>(&c.material)) {
            if (disks) d->disk_count = *disks;
            if (reference_disks) d->reference_count = *reference_disks;
            if (rmin) d->r_min = *rmin;
            if (rmax) d->r_max = *rmax;
            if (mu) d->mu = *mu;
            if (sigma) d->sigma = *sigma;
            if (order) d->order = parse_placement_order(*order);
            d->seed = seed;
            d->validate();
        } else {
            auto& l = std::get<LogMaterialSpec>(c.material);
            if (kernel) l.kernel_size = *kernel;
            if (threshold) l.threshold = *threshold;
            l.seed = seed;
            l.validate();
        }

        const auto explicit_format = parse_optional_format(format);
        const auto fallback = explicit_format.value_or(ImageFormat::PbmBinary);
        c.out = resolve_output(out, type + "_" + std::to_string(size) + "_" + std::to_string(seed) +
                                        image_extension(fallback));
        c.format = explicit_format ? *explicit_format : format_from_extension(c.out).value_or(fallback);
        return c;
    }
};

struct CharacterizeFlags
{
    InputFlags input;
    int step = 0;
    double band = kCorrelationBand;
    std::optional<std::string> out;

    void attach(CLI::App* sub)
    {
        input.attach(sub);
        sub->add_option("--step", step, "Ladder rung k of the input (pixel size 2^k)")->capture_default_str();
        sub->add_option("--band", band, "Correlation band half-width")->capture_default_str();
        sub->add_option("--out", out, "Output prefix");
    }

    CharacterizeConfig resolve() const
    {
        CharacterizeConfig c;
        c.input = input.image();
        c.boundary = input.resolved_boundary();
        c.step = step;
        c.band = band;
        c.out = resolve_output(out, input_stem(input.path));
        return c;
    }
};

struct DecimateFlags
{
    InputFlags input;
    MethodFlags method;
    int steps = 8;
    bool crop = false;
    std::optional<std::string> out, format;

    void attach(CLI::App* sub)
    {
        input.attach(sub);
        method.attach(sub);
        sub->add_option("--steps", steps, "Ladder depth K")->capture_default_str()->check(CLI::Range(0, 30));
        sub->add_flag("--crop", crop, "Trim to the largest dimensions divisible by 2^K");
        sub->add_option("--out", out, "Output prefix");
        sub->add_option("--format", format, "Image format of the rungs")
            ->check(CLI::IsMember({"pbm", "pbm-ascii", "pgm", "pgm-ascii", "csv"}));
    }

    DecimateConfig resolve(const Log& log) const
    {
        DecimateConfig c;
        c.input = input.image();
        c.method = method.resolve(log);
        c.steps = steps;
        c.crop = crop;
        c.boundary = input.resolved_boundary();
        c.out = resolve_output(out, input_stem(input.path) + "." + method.name);
        c.format = parse_optional_format(format).value_or(ImageFormat::PbmBinary);
        return c;
    }
};

struct AutoDecimateFlags
{
    InputFlags input;
    MethodFlags method;
    bool crop = false;
    int verify_steps = 1;
    double band = kCorrelationBand;
    std::optional<std::string> out, format;

    void attach(CLI::App* sub)
    {
        input.attach(sub);
        method.attach(sub);
        sub->add_flag("--crop", crop, "Trim to the largest dimensions divisible by 2^Z");
        sub->add_option("--verify-steps", verify_steps, "Extra rungs past Z analysed for the report")
            ->capture_default_str()
            ->check(CLI::Range(0, 8));
        sub->add_option("--band", band, "Correlation band half-width")->capture_default_str();
        sub->add_option("--out", out, "Output prefix");
        sub->add_option("--format", format, "Image format of the decimated image")
            ->check(CLI::IsMember({"pbm", "pbm-ascii", "pgm", "pgm-ascii", "csv"}));
    }

    AutoDecimateConfig resolve(const Log& log) const
    {
        AutoDecimateConfig c;
        c.input = input.image();
        c.method = method.resolve(log);
        c.options.boundary = input.resolved_boundary();
        c.options.band = band;
        c.options.verify_steps = verify_steps;
        c.options.crop = crop;
        c.out = resolve_output(out, input_stem(input.path) + ".auto");
        c.format = parse_optional_format(format).value_or(ImageFormat::PbmBinary);
        return c;
    }
};

struct ExperimentFlags
{
    ExperimentConfig cfg;
    std::vector<std::string> methods{"all"};
    std::optional<std::string> out;

    ExperimentFlags() { cfg.threads = std::max(1u, std::thread::hardware_concurrency()); }

    void attach(CLI::App* sub)
    {
        sub->add_option("--material", cfg.material, "id, od, logk1, logk2 or logk3")
            ->capture_default_str()
            ->check(CLI::IsMember({"id", "od", "logk1", "logk2", "logk3"}));
        sub->add_option("--size", cfg.size, "Image side in pixels")->capture_default_str();
        sub->add_option("--realizations", cfg.realizations, "Ensemble size W")->capture_default_str();
        sub->add_option("--methods", methods, "all, or a comma separated subset of random,bilinear,bicubic")
            ->delimiter(',');
        sub->add_option("--maxk", cfg.max_step, "Ladder depth K")->capture_default_str()->check(CLI::Range(0, 30));
        sub->add_option("--seed", cfg.seed, "Ensemble seed")->capture_default_str();
        sub->add_option("--band", cfg.band, "Correlation band half-width")->capture_default_str();
        sub->add_option("--threads", cfg.threads, "Worker threads; results do not depend on it")
            ->capture_default_str();
        sub->add_option("--out", out, "Output directory");
    }

    ExperimentRunConfig resolve() const
    {
        ExperimentRunConfig c;
        c.experiment = cfg;
        if (cfg.size <= 0 || cfg.realizations <= 0)
            throw UsageError("--size and --realizations must be positive");
        if (cfg.threads == 0)
            throw UsageError("--threads must be positive");
        auto& ms = c.experiment.methods;
        ms.clear();
        for (const auto& m : methods) {
            if (m == "all") {
                if (methods.size() != 1)
                    throw UsageError("--methods all cannot be combined with named methods");
                ms = {DecimationKind::Random, DecimationKind::Bilinear, DecimationKind::Bicubic};
            } else {
                try {
                    ms.push_back(parse_method(m));
                } catch (const DataError& e) {
                    throw UsageError(e.what());
                }
            }
        }
        c.out = resolve_output(out, "experiment_" + cfg.material + "_" + std::to_string(cfg.size));
        return c;
    }
};

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Statistically sensitive decimation of two-phase microstructure images", "microstat"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", MICROSTAT_VERSION);
    bool quiet = false;
    bool verbose = false;
    auto* q = app.add_flag("-q,--quiet", quiet, "Only report errors");
    app.add_flag("-v,--verbose", verbose, "Report progress in detail")->excludes(q);
    app.footer("Outputs default to $" + std::string(kOutputDirEnv) + " (or the working directory) when --out is absent.");

    GenerateFlags gen;
    gen.attach(app.add_subcommand("generate", "Generate a synthetic two-phase material"));
    CharacterizeFlags chr;
    chr.attach(app.add_subcommand("characterize", "Compute normalized descriptors and correlation lengths"));
    DecimateFlags dec;
    dec.attach(app.add_subcommand("decimate", "Build a decimation ladder and measure the information loss"));
    AutoDecimateFlags aut;
    aut.attach(app.add_subcommand("autodecimate", "Decimate by the optimal number of steps"));
    ExperimentFlags exp;
    exp.attach(app.add_subcommand("experiment", "Ensemble error curves for a material"));
    std::string manifest;
    std::optional<std::string> replay_out;
    auto* rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    rep->add_option("manifest", manifest, "Manifest written by an earlier run")->required()->check(CLI::ExistingFile);
    rep->add_option("--out", replay_out, "Write to this path, prefix or directory instead of the recorded one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const Log log(err, quiet ? Verbosity::Quiet : verbose ? Verbosity::Verbose : Verbosity::Normal);
    const RunContext ctx{log, std::nullopt};
    try {
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "generate")
            run_generate(gen.resolve(), ctx);
        else if (name == "characterize")
            run_characterize(chr.resolve(), ctx);
        else if (name == "decimate")
            run_decimate(dec.resolve(log), ctx);
        else if (name == "autodecimate")
            run_autodecimate(aut.resolve(log), ctx);
        else if (name == "experiment")
            run_experiment_command(exp.resolve(), ctx);
        else
            run_replay(manifest, replay_out, ctx);
    } catch (const UsageError& e) {
        log.error(e.what());
        return kExitUsage;
    } catch (const NumericError& e) {
        log.error(e.what());
        return kExitNumeric;
    } catch (const DataError& e) {
        log.error(e.what());
        return kExitData;
    } catch (const std::exception& e) {
        log.error(e.what());
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace microstat::cli
