#include "commands.hpp"

#include <cmath>
#include <sstream>

#include "microstat/error.hpp"

namespace microstat::cli {

namespace {

double ratio_or_nan(double num, double den) { return den > 0.0 ? num / den : std::nan(""); }

json phi_summary(const BinaryImage& img, Boundary boundary)
{
    const double phi0 = surface_fraction(img, Phase::Void);
    const double phi1 = surface_fraction(img, Phase::Solid);
    const double s = specific_interface_area(img, boundary);
    return {{"rows", img.rows()},
            {"cols", img.cols()},
            {"phi", {phi0, phi1}},
            {"s", s},
            {"s_over_phi", {ratio_or_nan(s, phi0), ratio_or_nan(s, phi1)}}};
}

void require_two_phases(const BinaryImage& img, const fs::path& path)
{
    if (img.count(Phase::Void) == 0 || img.count(Phase::Solid) == 0)
        throw NumericError(path.string() + ": image holds a single phase; descriptors cannot be normalized");
}

BinaryImage load_input(const InputImage& in, const Log& log)
{
    LoadOptions opts;
    opts.threshold = in.threshold;
    auto img = load_image(in.path, opts);
    std::ostringstream msg;
    msg << "loaded " << in.path.string() << " (" << img.rows() << " x " << img.cols() << ")";
    log.info(msg.str());
    return img;
}

json input_json(const InputImage& in)
{
    json j{{"path", absolute_string(in.path)}};
    j["threshold"] = in.threshold ? json(*in.threshold) : json(nullptr);
    return j;
}

InputImage input_from_json(const json& j)
{
    InputImage in;
    in.path = j.at("path").get<std::string>();
    if (j.contains("threshold") && !j.at("threshold").is_null())
        in.threshold = j.at("threshold").get<double>();
    return in;
}

json method_json(const DecimationMethod& m)
{
    json j{{"name", method_name(m.kind)}};
    if (m.kind == DecimationKind::Random)
        j["seed"] = m.seed;
    return j;
}

DecimationMethod method_from_json(const json& j)
{
    DecimationMethod m;
    m.kind = parse_method(j.at("name").get<std::string>());
    m.seed = m.kind == DecimationKind::Random ? j.at("seed").get<std::uint64_t>() : 0;
    return m;
}

json material_json(const MaterialSpec& spec)
{
    if (const auto* d = std::get_if<DiskMaterialSpec>(&spec))
        return {{"kind", "disks"},
                {"variant", d->variant == DiskVariant::Impenetrable ? "impenetrable" : "overlapping"},
                {"disks", d->disk_count},
                {"reference_disks", d->reference_count},
                {"order", placement_order_name(d->order)},
                {"rmin", d->r_min},
                {"rmax", d->r_max},
                {"mu", d->mu},
                {"sigma", d->sigma},
                {"size", d->side},
                {"seed", d->seed}};
    const auto& l = std::get<LogMaterialSpec>(spec);
    return {{"kind", "log"},
            {"kernel", l.kernel_size},
            {"threshold", l.threshold},
            {"size", l.side},
            {"seed", l.seed}};
}

MaterialSpec material_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "disks") {
        DiskMaterialSpec d;
        const auto variant = j.at("variant").get<std::string>();
        if (variant != "impenetrable" && variant != "overlapping")
            throw DataError("unknown disk variant '" + variant + "'");
        d.variant = variant == "impenetrable" ? DiskVariant::Impenetrable : DiskVariant::Overlapping;
        d.disk_count = j.at("disks").get<int>();
        d.reference_count = j.at("reference_disks").get<int>();
        d.order = parse_placement_order(j.at("order").get<std::string>());
        d.r_min = j.at("rmin").get<int>();
        d.r_max = j.at("rmax").get<int>();
        d.mu = j.at("mu").get<double>();
        d.sigma = j.at("sigma").get<double>();
        d.side = j.at("size").get<int>();
        d.seed = j.at("seed").get<std::uint64_t>();
        return d;
    }
    if (kind == "log") {
        LogMaterialSpec l;
        l.kernel_size = j.at("kernel").get<int>();
        l.threshold = j.at("threshold").get<double>();
        l.side = j.at("size").get<int>();
        l.seed = j.at("seed").get<std::uint64_t>();
        return l;
    }
    throw DataError("unknown material kind '" + kind + "'");
}

std::uint64_t material_seed(const MaterialSpec& spec)
{
    return std::visit([](const auto& s) { return s.seed; }, spec);
}

void save_output(const BinaryImage& img, const fs::path& path, ImageFormat format)
{
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    save_image(img, path, format);
}

std::string rung_name(int k) { return ".k" + std::to_string(k); }

/// One long-format CSV per ladder rung, PREFIX.k<k>.curves.csv.
void write_rung_curves(const fs::path& prefix, std::span<const DescriptorSet> sets, std::vector<fs::path>& outputs)
{
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto path = with_suffix(prefix, rung_name(static_cast<int>(k)) + ".curves.csv");
        write_file(path, long_curves_csv(std::span<const DescriptorSet>(&sets[k], 1)));
        outputs.push_back(path);
    }
}

json experiment_methods_json(const ExperimentConfig& c)
{
    json arr = json::array();
    for (auto kind : c.methods)
        arr.push_back(method_name(kind));
    return arr;
}

} // namespace

fs::path manifest_path(const fs::path& output) { return with_suffix(output, ".manifest.json"); }

Boundary default_boundary(const fs::path& input)
{
    const auto sidecar = manifest_path(input);
    std::error_code ec;
    if (!fs::is_regular_file(sidecar, ec))
        return Boundary::Nonperiodic;
    try {
        const auto doc = json::parse(read_file(sidecar));
        if (doc.value("subcommand", "") == "generate")
            return Boundary::Periodic;
    } catch (const json::exception&) {
    }
    return Boundary::Nonperiodic;
}

// ---- config <-> json -------------------------------------------------------

json to_json(const GenerateConfig& c)
{
    return {{"type", c.type},
            {"material", material_json(c.material)},
            {"out", absolute_string(c.out)},
            {"format", format_name(c.format)}};
}

GenerateConfig generate_config_from_json(const json& j)
{
    GenerateConfig c;
    c.type = j.at("type").get<std::string>();
    c.material = material_from_json(j.at("material"));
    c.out = j.at("out").get<std::string>();
    c.format = parse_format(j.at("format").get<std::string>());
    return c;
}

json to_json(const CharacterizeConfig& c)
{
    return {{"input", input_json(c.input)},
            {"boundary", boundary_name(c.boundary)},
            {"step", c.step},
            {"band", c.band},
            {"out", absolute_string(c.out)}};
}

CharacterizeConfig characterize_config_from_json(const json& j)
{
    CharacterizeConfig c;
    c.input = input_from_json(j.at("input"));
    c.boundary = parse_boundary(j.at("boundary").get<std::string>());
    c.step = j.at("step").get<int>();
    c.band = j.at("band").get<double>();
    c.out = j.at("out").get<std::string>();
    return c;
}

json to_json(const DecimateConfig& c)
{
    return {{"input", input_json(c.input)},
            {"method", method_json(c.method)},
            {"steps", c.steps},
            {"crop", c.crop},
            {"boundary", boundary_name(c.boundary)},
            {"out", absolute_string(c.out)},
            {"format", format_name(c.format)}};
}

DecimateConfig decimate_config_from_json(const json& j)
{
    DecimateConfig c;
    c.input = input_from_json(j.at("input"));
    c.method = method_from_json(j.at("method"));
    c.steps = j.at("steps").get<int>();
    c.crop = j.at("crop").get<bool>();
    c.boundary = parse_boundary(j.at("boundary").get<std::string>());
    c.out = j.at("out").get<std::string>();
    c.format = parse_format(j.at("format").get<std::string>());
    return c;
}

json to_json(const AutoDecimateConfig& c)
{
    return {{"input", input_json(c.input)},
            {"method", method_json(c.method)},
            {"boundary", boundary_name(c.options.boundary)},
            {"band", c.options.band},
            {"verify_steps", c.options.verify_steps},
            {"crop", c.options.crop},
            {"out", absolute_string(c.out)},
            {"format", format_name(c.format)}};
}

AutoDecimateConfig autodecimate_config_from_json(const json& j)
{
    AutoDecimateConfig c;
    c.input = input_from_json(j.at("input"));
    c.method = method_from_json(j.at("method"));
    c.options.boundary = parse_boundary(j.at("boundary").get<std::string>());
    c.options.band = j.at("band").get<double>();
    c.options.verify_steps = j.at("verify_steps").get<int>();
    c.options.crop = j.at("crop").get<bool>();
    c.out = j.at("out").get<std::string>();
    c.format = parse_format(j.at("format").get<std::string>());
    return c;
}

json to_json(const ExperimentRunConfig& c)
{
    const auto& e = c.experiment;
    return {{"material", e.material},
            {"size", e.size},
            {"realizations", e.realizations},
            {"methods", experiment_methods_json(e)},
            {"maxk", e.max_step},
            {"seed", e.seed},
            {"band", e.band},
            {"threads", e.threads},
            {"out", absolute_string(c.out)}};
}

ExperimentRunConfig experiment_config_from_json(const json& j)
{
    ExperimentRunConfig c;
    auto& e = c.experiment;
    e.material = j.at("material").get<std::string>();
    e.size = j.at("size").get<int>();
    e.realizations = j.at("realizations").get<int>();
    e.methods.clear();
    for (const auto& m : j.at("methods"))
        e.methods.push_back(parse_method(m.get<std::string>()));
    e.max_step = j.at("maxk").get<int>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.band = j.at("band").get<double>();
    e.threads = j.at("threads").get<unsigned>();
    c.out = j.at("out").get<std::string>();
    return c;
}

// ---- generate --------------------------------------------------------------

void run_generate(const GenerateConfig& c, const RunContext& ctx)
{
    const auto seed = material_seed(c.material);
    const int side = std::visit([](const auto& s) { return s.side; }, c.material);
    ctx.log.info("generating " + c.type + " " + std::to_string(side) + "x" + std::to_string(side) + " seed " +
                 std::to_string(seed));
    const auto gen = generate_material(c.material, seed);
    save_output(gen.image, c.out, c.format);

    Manifest m;
    m.subcommand = "generate";
    m.replayed_from = ctx.replayed_from;
    m.config = to_json(c);
    m.seeds = {{"material", seed}};
    m.outputs = {c.out};
    m.summary = phi_summary(gen.image, Boundary::Periodic);
    if (const auto* d = std::get_if<DiskMaterialSpec>(&c.material)) {
        m.summary["requested_disks"] = d->disk_count;
        m.summary["achieved_disks"] = gen.disks.size();
        m.summary["histogram_total"] = gen.draw.histogram_total;
        json records = json::array();
        for (const auto& disk : gen.disks)
            records.push_back({{"x", disk.x}, {"y", disk.y}, {"r", disk.radius}});
        m.summary["disk_records"] = records;
        if (static_cast<long>(gen.disks.size()) != d->disk_count)
            ctx.log.info("placed " + std::to_string(gen.disks.size()) + " disks (" + std::to_string(d->disk_count) +
                         " requested)");
    }
    ctx.log.info("phi0 = " + format_number(m.summary["phi"][0].get<double>()) + ", wrote " + c.out.string());
    write_manifest(manifest_path(c.out), m);
}

// ---- characterize ----------------------------------------------------------

void run_characterize(const CharacterizeConfig& c, const RunContext& ctx)
{
    if (c.step < 0 || c.step > 30)
        throw DataError("--step must lie in [0, 30]");
    auto img = load_input(c.input, ctx.log);
    require_two_phases(img, c.input.path);
    img = img.with_provenance(c.step, std::size_t{1} << c.step);

    const auto set = compute_descriptors(img, c.boundary);
    const auto lengths = correlation_lengths(set.curves, c.band);
    const auto rows0 = img.rows() * img.pixel_size();
    const auto cols0 = img.cols() * img.pixel_size();
    const int z = optimal_steps(lengths.min, rows0, cols0);

    std::vector<fs::path> outputs;
    for (Descriptor beta : kDescriptors) {
        const auto path = with_suffix(c.out, "." + std::string(descriptor_name(beta)) + ".csv");
        write_file(path, descriptor_table_csv(set, beta));
        outputs.push_back(path);
    }
    const auto curves_path = with_suffix(c.out, ".curves.csv");
    write_file(curves_path, long_curves_csv(std::span<const DescriptorSet>(&set, 1)));
    outputs.push_back(curves_path);

    json sidecar{{"rows", img.rows()},
                 {"cols", img.cols()},
                 {"k", img.step()},
                 {"pixel_size", img.pixel_size()},
                 {"boundary", boundary_name(c.boundary)},
                 {"phi", {set.phi[0], set.phi[1]}},
                 {"s", set.s},
                 {"s_over_phi", {ratio_or_nan(set.s, set.phi[0]), ratio_or_nan(set.s, set.phi[1])}},
                 {"range_limit", range_limit(img)},
                 {"band", c.band},
                 {"lengths", lengths_json(lengths)},
                 {"ell", lengths.min},
                 {"optimal_steps", z}};
    const auto sidecar_path = with_suffix(c.out, ".summary.json");
    write_file(sidecar_path, sidecar.dump(2) + "\n");
    outputs.push_back(sidecar_path);
    if (!lengths.all_reached())
        ctx.log.warn("some descriptors never enter the correlation band; their length is the sampled range");
    ctx.log.info("ell = " + format_number(lengths.min) + ", Z = " + std::to_string(z));

    Manifest m;
    m.subcommand = "characterize";
    m.replayed_from = ctx.replayed_from;
    m.config = to_json(c);
    m.inputs = {c.input.path};
    m.outputs = outputs;
    m.summary = {{"phi", sidecar["phi"]},
                 {"s_over_phi", sidecar["s_over_phi"]},
                 {"ell", lengths.min},
                 {"optimal_steps", z}};
    write_manifest(manifest_path(c.out), m);
}

// ---- decimate --------------------------------------------------------------

void run_decimate(const DecimateConfig& c, const RunContext& ctx)
{
    const auto img = load_input(c.input, ctx.log);
    require_two_phases(img, c.input.path);
    const auto ladder = build_ladder(img, c.method, c.steps, c.crop);
    if (ladder.cropped())
        ctx.log.info("cropped to " + std::to_string(ladder.images[0].rows()) + " x " +
                     std::to_string(ladder.images[0].cols()));
    const auto analysis = analyze_ladder(ladder, c.boundary);
    const auto trace = coarseness_trace(ladder.images[0], c.steps);

    std::vector<fs::path> outputs;
    const auto ext = image_extension(c.format);
    for (std::size_t k = 0; k < ladder.images.size(); ++k) {
        const auto path = with_suffix(c.out, rung_name(static_cast<int>(k)) + ext);
        save_output(ladder.images[k], path, c.format);
        outputs.push_back(path);
        ctx.log.debug("k = " + std::to_string(k) + ": " + path.string());
    }
    const auto steps_path = with_suffix(c.out, ".steps.csv");
    write_file(steps_path, step_table_csv(analysis.steps, trace));
    outputs.push_back(steps_path);
    write_rung_curves(c.out, analysis.descriptors, outputs);

    Manifest m;
    m.subcommand = "decimate";
    m.replayed_from = ctx.replayed_from;
    m.config = to_json(c);
    if (c.method.kind == DecimationKind::Random)
        m.seeds = {{"decimation", c.method.seed}};
    m.inputs = {c.input.path};
    m.outputs = outputs;
    const auto& first = analysis.steps.front();
    json errors = json::array();
    for (const auto& s : analysis.steps)
        errors.push_back(s.global_error);
    m.summary = {{"source", {{"rows", ladder.source_rows}, {"cols", ladder.source_cols}}},
                 {"cropped", ladder.cropped()},
                 {"trimmed", {{"rows", ladder.images[0].rows()}, {"cols", ladder.images[0].cols()}}},
                 {"phi", {first.phi[0], first.phi[1]}},
                 {"s_over_phi", {first.s_over_phi[0], first.s_over_phi[1]}},
                 {"global_error", errors}};
    write_manifest(manifest_path(c.out), m);
    ctx.log.info("wrote " + std::to_string(ladder.images.size()) + " rungs to " + c.out.string() + ".k*");
}

// ---- autodecimate ----------------------------------------------------------

void run_autodecimate(const AutoDecimateConfig& c, const RunContext& ctx)
{
    const auto img = load_input(c.input, ctx.log);
    const auto result = auto_decimate(img, c.method, c.options);
    const auto& r = result.report;
    for (const auto& n : r.notices)
        ctx.log.warn(n);

    std::vector<fs::path> outputs;
    const auto image_path = with_suffix(c.out, image_extension(c.format));
    save_output(result.image, image_path, c.format);
    outputs.push_back(image_path);

    json steps = json::array();
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
        auto s = step_json(r.steps[k]);
        s["coarseness"] = k < r.coarseness.size() ? r.coarseness[k].value : std::nan("");
        steps.push_back(s);
    }
    json report{{"input", {{"rows", r.rows0}, {"cols", r.cols0}}},
                {"cropped", {{"rows", r.cropped_rows}, {"cols", r.cropped_cols}}},
                {"method", method_json(c.method)},
                {"boundary", boundary_name(c.options.boundary)},
                {"band", c.options.band},
                {"lengths", lengths_json(r.lengths)},
                {"ell", r.ell},
                {"Z", r.optimal_step},
                {"output",
                 {{"rows", result.image.rows()},
                  {"cols", result.image.cols()},
                  {"pixel_size", result.image.pixel_size()}}},
                {"steps", steps},
                {"notices", r.notices}};
    const auto report_path = with_suffix(c.out, ".report.json");
    write_file(report_path, report.dump(2) + "\n");
    outputs.push_back(report_path);
    const auto steps_path = with_suffix(c.out, ".steps.csv");
    write_file(steps_path, step_table_csv(r.steps, r.coarseness));
    outputs.push_back(steps_path);
    write_rung_curves(c.out, r.descriptors, outputs);

    Manifest m;
    m.subcommand = "autodecimate";
    m.replayed_from = ctx.replayed_from;
    m.config = to_json(c);
    if (c.method.kind == DecimationKind::Random)
        m.seeds = {{"decimation", c.method.seed}};
    m.inputs = {c.input.path};
    m.outputs = outputs;
    const auto& first = r.steps.front();
    m.summary = {{"phi", {first.phi[0], first.phi[1]}},
                 {"s_over_phi", {first.s_over_phi[0], first.s_over_phi[1]}},
                 {"ell", r.ell},
                 {"Z", r.optimal_step},
                 {"output_rows", result.image.rows()},
                 {"output_cols", result.image.cols()}};
    write_manifest(manifest_path(c.out), m);
    ctx.log.info("ell = " + format_number(r.ell) + ", Z = " + std::to_string(r.optimal_step) + ", wrote " +
                 image_path.string());
}

// ---- experiment ------------------------------------------------------------

void run_experiment_command(const ExperimentRunConfig& c, const RunContext& ctx)
{
    const auto& cfg = c.experiment;
    ctx.log.info("experiment: " + cfg.material + " " + std::to_string(cfg.size) + "^2, " +
                 std::to_string(cfg.realizations) + " realizations, K = " + std::to_string(cfg.max_step));
    const auto res = run_experiment(cfg);

    std::vector<fs::path> outputs;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = c.out / name;
        write_file(path, text);
        outputs.push_back(path);
    };

    CsvTable errors({"method", "k", "mean", "std"});
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
        for (std::size_t k = 0; k < res.errors[mi].size(); ++k)
            errors.add(method_name(cfg.methods[mi]), k, res.errors[mi][k].mean, res.errors[mi][k].stddev);
    emit("errors.csv", errors.text());

    std::vector<std::string> header{"member", "seed", "method", "k", "phi0", "phi1"};
    for (int beta = 1; beta <= 3; ++beta)
        for (int j = 0; j < 2; ++j)
            header.push_back("E_" + std::to_string(beta) + "_" + std::to_string(j));
    header.emplace_back("global_error");
    CsvTable members(header);
    for (std::size_t w = 0; w < res.members.size(); ++w) {
        const auto& mem = res.members[w];
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
            for (const auto& s : mem.steps[mi]) {
                const auto& e = s.deviations;
                members.add(w, mem.seed, method_name(cfg.methods[mi]), s.step, s.phi[0], s.phi[1], e[0], e[1], e[2],
                            e[3], e[4], e[5], s.global_error);
            }
    }
    emit("member_errors.csv", members.text());

    DescriptorSet mean_set;
    mean_set.curves = res.mean_curves;
    emit("curves.csv", long_curves_csv(std::span<const DescriptorSet>(&mean_set, 1)));

    CsvTable lengths({"source", "beta", "phase", "length", "reached"});
    auto add_lengths = [&](const std::string& source, const LengthTable& t) {
        for (Descriptor beta : kDescriptors)
            for (Phase j : kPhases) {
                const auto& len = t.at(beta, j);
                lengths.add(source, static_cast<int>(beta), index(j), len.length, len.reached ? 1 : 0);
            }
    };
    add_lengths("mean", res.lengths);
    for (std::size_t w = 0; w < res.members.size(); ++w)
        add_lengths(std::to_string(w), res.members[w].lengths);
    emit("lengths.csv", lengths.text());

    CsvTable coarse({"k", "window", "mean", "std"});
    for (std::size_t k = 0; k < res.coarseness.size(); ++k)
        coarse.add(k, std::size_t{1} << k, res.coarseness[k].mean, res.coarseness[k].stddev);
    emit("coarseness.csv", coarse.text());

    json member_z = json::array();
    json member_seeds = json::array();
    for (const auto& mem : res.members) {
        member_z.push_back(mem.optimal_step);
        member_seeds.push_back(mem.seed);
    }
    json summary{{"phi_mean", {res.phi[0].mean, res.phi[1].mean}},
                 {"phi_std", {res.phi[0].stddev, res.phi[1].stddev}},
                 {"lengths", lengths_json(res.lengths)},
                 {"ell", res.lengths.min},
                 {"Z", {{"min_length", res.optimal_steps[0]},
                        {"mean_length", res.optimal_steps[1]},
                        {"max_length", res.optimal_steps[2]}}},
                 {"member_Z", member_z}};
    emit("summary.json", summary.dump(2) + "\n");

    Manifest m;
    m.subcommand = "experiment";
    m.replayed_from = ctx.replayed_from;
    m.config = to_json(c);
    m.seeds = {{"ensemble", cfg.seed}, {"members", member_seeds}};
    m.outputs = outputs;
    m.summary = {{"phi", summary["phi_mean"]}, {"ell", res.lengths.min}, {"Z", res.optimal_steps[0]}};
    write_manifest(c.out / "manifest.json", m);
    ctx.log.info("ell = " + format_number(res.lengths.min) + ", Z = " + std::to_string(res.optimal_steps[0]) +
                 ", wrote " + c.out.string());
}

// ---- replay ----------------------------------------------------------------

void run_replay(const fs::path& manifest, const std::optional<std::string>& out, const RunContext& ctx)
{
    json doc;
    try {
        doc = json::parse(read_file(manifest));
    } catch (const json::exception& e) {
        throw DataError(manifest.string() + ": not a JSON manifest (" + e.what() + ")");
    }
    const RunContext replay{ctx.log, manifest};
    try {
        const auto sub = doc.at("subcommand").get<std::string>();
        const auto& cfg = doc.at("config");
        ctx.log.info("replaying " + sub + " from " + manifest.string());
        auto redirect = [&](auto& c) {
            if (out && !out->empty())
                c.out = *out;
        };
        if (sub == "generate") {
            auto c = generate_config_from_json(cfg);
            redirect(c);
            run_generate(c, replay);
        } else if (sub == "characterize") {
            auto c = characterize_config_from_json(cfg);
            redirect(c);
            run_characterize(c, replay);
        } else if (sub == "decimate") {
            auto c = decimate_config_from_json(cfg);
            redirect(c);
            run_decimate(c, replay);
        } else if (sub == "autodecimate") {
            auto c = autodecimate_config_from_json(cfg);
            redirect(c);
            run_autodecimate(c, replay);
        } else if (sub == "experiment") {
            auto c = experiment_config_from_json(cfg);
            redirect(c);
            run_experiment_command(c, replay);
        } else {
            throw DataError("manifest names unknown subcommand '" + sub + "'");
        }
    } catch (const json::exception& e) {
        throw DataError(manifest.string() + ": malformed manifest (" + e.what() + ")");
    }
}

} // namespace microstat::cli
