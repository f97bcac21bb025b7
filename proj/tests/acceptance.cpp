// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "microstat/analysis.hpp"
#include "microstat/experiment.hpp"
#include "microstat/generators.hpp"
#include "microstat/image_io.hpp"
#include "oracles.hpp"

using namespace microstat;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// The full-scale overlapping disk preset with every length divided by 8 and the disk count
/// scaled to keep the covered fraction: the 4096^2 material seen at 1/8 scale.
DiskMaterialSpec od_like(int side, std::uint64_t seed)
{
    DiskMaterialSpec d;
    d.variant = DiskVariant::Overlapping;
    d.r_min = 1;
    d.r_max = 31;
    d.mu = 50.0 / 8.0;
    d.sigma = 60.0 / 8.0;
    d.side = side;
    d.disk_count = static_cast<int>(round_half_even(640.0 * 64.0 * (side / 4096.0) * (side / 4096.0)));
    d.seed = seed;
    return d;
}

Outcome oracle_equivalence()
{
    const auto t0 = Clock::now();
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SplitMix64 dims(seed * 7919 + 1);
        const std::size_t rows = 1 + dims.below(24);
        const std::size_t cols = 1 + dims.below(24);
        const auto img = oracle::random_image(seed, rows, cols, 0.15 + 0.7 * dims.uniform01());
        for (auto b : {Boundary::Periodic, Boundary::Nonperiodic})
            for (auto j : kPhases) {
                const auto s2 = two_point_counts(img, j, b);
                const auto s2_ref = oracle::two_point(img, j, b);
                const auto lp = lineal_path_counts(img, j, b);
                const auto lp_ref = oracle::lineal_path(img, j, b);
                mismatches += s2.hits != s2_ref.hits || s2.trials != s2_ref.trials;
                mismatches += lp.hits != lp_ref.hits || lp.trials != lp_ref.trials;
                mismatches += pore_size_histogram(img, j, b) != oracle::pore_histogram(img, j, b);
            }
    }
    const double t = seconds_since(t0);
    return {mismatches == 0 && t < 10.0,
            std::to_string(mismatches) + " mismatches over 50 images x 2 boundaries x 2 phases, " + fmt("%.2f s", t)};
}

Outcome normalization_limits()
{
    std::string detail;
    bool ok = true;
    for (const char* name : {"id", "od", "logk1", "logk2", "logk3"}) {
        // Impenetrable disks with unscaled radii do not always fit at 512^2;
        // take the first seed that places.
        GeneratedMaterial g;
        std::uint64_t seed = 1;
        int skipped = 0;
        for (;; ++seed) {
            try {
                g = generate_material(material_preset(name, 512), seed);
                break;
            } catch (const PlacementError&) {
                ++skipped;
            }
        }
        const auto set = compute_descriptors(g.image, Boundary::Periodic);
        double asym = 0.0;
        const auto& c0 = set.at(Descriptor::Autocovariance, Phase::Void).values;
        const auto& c1 = set.at(Descriptor::Autocovariance, Phase::Solid).values;
        for (std::size_t l = 0; l < c0.size(); ++l)
            asym = std::max(asym, std::abs(c0[l] - c1[l]));
        bool m_ok = asym < 1e-12;
        for (auto j : kPhases) {
            m_ok = m_ok && set.at(Descriptor::Autocovariance, j).values[0] == 1.0;
            m_ok = m_ok && set.at(Descriptor::PoreSize, j).values[0] == 1.0;
            m_ok = m_ok && lineal_path_counts(g.image, j).probability(0) == surface_fraction(g.image, j);
            m_ok = m_ok && set.at(Descriptor::LinealPath, j).values[0] == 1.0;
        }
        ok = ok && m_ok;
        detail += std::string(detail.empty() ? "" : "; ") + name + (m_ok ? " ok" : " BAD") +
                  fmt(" (max |chi0-chi1| %.1e", asym) + (skipped ? ", " + std::to_string(skipped) + " seeds unplaceable)" : ")");
    }
    return {ok, detail};
}

Outcome generator_statistics()
{
    const auto t0 = Clock::now();
    double od = 0.0, lk = 0.0;
    for (std::uint64_t w = 0; w < 10; ++w) {
        const auto spec = std::get<DiskMaterialSpec>(material_preset("od", 1024));
        od += surface_fraction(generate_material(spec, member_seed(2024, static_cast<int>(w))).image, Phase::Void);
        lk += surface_fraction(generate_material(material_preset("logk1", 1024), member_seed(2025, static_cast<int>(w))).image,
                               Phase::Void);
    }
    od /= 10.0;
    lk /= 10.0;
    const double t = seconds_since(t0);
    const bool ok = std::abs(od - 0.5059) <= 0.05 && std::abs(lk - 0.4969) <= 0.03 && t < 300.0;
    return {ok, fmt("OD I=40 <phi0> = %.4f (0.5059 +- 0.05)", od) + fmt(", LoGK1 <phi0> = %.4f (0.4969 +- 0.03)", lk) +
                    fmt(", %.1f s", t)};
}

Outcome z_identity()
{
    int bad = 0;
    for (int ell = 1; ell <= 4096; ++ell) {
        const int want = std::max(0, static_cast<int>(std::floor(std::log2(ell / 3.0))));
        bad += optimal_steps(ell, 4096, 4096) != want;
    }
    return {bad == 0, std::to_string(bad) + " of 4096 lengths disagree"};
}

struct ShapeEnsemble
{
    std::vector<MemberResult> members;
    ExperimentConfig config;
};

ShapeEnsemble shape_ensemble()
{
    ShapeEnsemble e;
    e.config.max_step = 6;
    e.config.seed = 5;
    for (int w = 0; w < 5; ++w) {
        const auto seed = member_seed(e.config.seed, w);
        e.members.push_back(run_member(MaterialSpec{od_like(1024, seed)}, seed, e.config));
    }
    return e;
}

Outcome error_curve_shape(const ShapeEnsemble& e)
{
    int passing = 0;
    std::string detail;
    for (const auto& m : e.members) {
        const int z = m.optimal_step;
        bool ok = z >= 1 && z + 2 <= e.config.max_step;
        std::string row = "Z=" + std::to_string(z);
        for (std::size_t mi = 0; ok && mi < m.steps.size(); ++mi) {
            const auto& s = m.steps[mi];
            double lo = s[1].global_error, hi = s[1].global_error;
            for (int k = 1; k <= z; ++k) {
                lo = std::min(lo, s[static_cast<std::size_t>(k)].global_error);
                hi = std::max(hi, s[static_cast<std::size_t>(k)].global_error);
            }
            const double flat = hi / lo;
            const double rise = s[static_cast<std::size_t>(z + 2)].global_error / s[static_cast<std::size_t>(z)].global_error;
            ok = ok && flat < 3.0 && rise > 5.0;
            row += " " + std::string(method_name(e.config.methods[mi])) + fmt(" flat %.2f", flat) + fmt(" rise %.1f", rise);
        }
        passing += ok;
        detail += std::string(detail.empty() ? "" : " | ") + row;
    }
    return {passing >= 4, std::to_string(passing) + "/5 seeds: " + detail};
}

Outcome coarseness_gate(const ShapeEnsemble& e)
{
    int above = 0;
    bool exact0 = true, monotone = true;
    std::string detail;
    for (const auto& m : e.members) {
        exact0 = exact0 && m.coarseness[0].value == 1.0;
        for (std::size_t k = 1; k < m.coarseness.size(); ++k)
            monotone = monotone && m.coarseness[k].value <= m.coarseness[k - 1].value + 0.02;
        const double cz = m.coarseness[static_cast<std::size_t>(m.optimal_step)].value;
        above += cz > 0.9;
        detail += fmt(" %.3f", cz);
    }
    return {exact0 && monotone && above >= 4, "C*_0 = 1: " + std::string(exact0 ? "yes" : "no") +
                                                   ", non-increasing: " + (monotone ? "yes" : "no") +
                                                   ", C*_Z per seed:" + detail};
}

Outcome determinism_and_size_law()
{
    const auto t0 = Clock::now();
    const auto spec = std::get<DiskMaterialSpec>(material_preset("od", 4096));
    const auto a0 = generate_material(spec, 77).image;
    const auto b0 = generate_material(spec, 77).image;
    bool ok = a0 == b0;
    std::string detail = std::string("4096^2 OD regenerated ") + (ok ? "identically" : "DIFFERENTLY");
    for (const auto& method : {DecimationMethod::random(77), DecimationMethod::bilinear(), DecimationMethod::bicubic()}) {
        const auto a = build_ladder(a0, method, 8);
        const auto b = build_ladder(b0, method, 8);
        bool same = a.images.size() == 9 && b.images.size() == 9;
        bool sizes = same;
        for (std::size_t k = 0; same && k < a.images.size(); ++k) {
            same = encode_image(a.images[k], ImageFormat::PbmBinary) == encode_image(b.images[k], ImageFormat::PbmBinary);
            sizes = sizes && a.images[k].rows() == (4096u >> k) && a.images[k].cols() == (4096u >> k);
        }
        sizes = sizes && a.images.back().rows() == 16;
        ok = ok && same && sizes;
        detail += std::string(", ") + std::string(method_name(method.kind)) + (same ? " identical" : " DIFFERENT") +
                  (sizes ? " 4096->16" : " BAD SIZES");
    }
    return {ok, detail + fmt(", %.1f s", seconds_since(t0))};
}

Outcome sem_style()
{
    const auto fixture = place_disks(od_like(768, 31)).image;
    // Treated like a user-supplied micrograph: default (nonperiodic) sampling.
    const auto r = auto_decimate(fixture, DecimationMethod::bicubic());
    const double ell = r.report.ell;
    const bool bracket = ell >= 12.0 && ell < 24.0;
    const int identity = std::max(0, static_cast<int>(std::floor(std::log2(ell / 3.0))));
    const bool ok = bracket && r.report.optimal_step == 2 && identity == 2 && r.image.rows() == 192 &&
                    r.image.cols() == 192;
    return {ok, fmt("measured ell = %.0f", ell) + ", Z = " + std::to_string(r.report.optimal_step) +
                    " (identity " + std::to_string(identity) + "), output " + std::to_string(r.image.rows()) + "x" +
                    std::to_string(r.image.cols())};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Outcome()>& run) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "descriptor counts equal brute-force oracles", oracle_equivalence);
    report(2, "normalization limits on 512^2 materials", normalization_limits);
    report(3, "generator surface fractions at 1024^2", generator_statistics);
    report(4, "optimal step identity", z_identity);

    ShapeEnsemble ensemble;
    std::string ensemble_error;
    try {
        ensemble = shape_ensemble();
    } catch (const std::exception& e) {
        ensemble_error = e.what();
    }
    auto with_ensemble = [&](Outcome (*f)(const ShapeEnsemble&)) {
        return [&, f] {
            if (!ensemble_error.empty())
                return Outcome{false, "ensemble failed: " + ensemble_error};
            return f(ensemble);
        };
    };
    report(5, "error curve flat up to Z then rising", with_ensemble(error_curve_shape));
    report(6, "coarseness gate", with_ensemble(coarseness_gate));
    report(7, "ladder determinism and size law", determinism_and_size_law);
    report(8, "768^2 end-to-end decimation", sem_style);

    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
