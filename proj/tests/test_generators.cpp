#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <numbers>

#include "microstat/generators.hpp"
#include "microstat/rng.hpp"
#include "oracles.hpp"

using namespace microstat;

namespace {

double folded_normal(double r, double mu, double sigma)
{
    const double s2 = sigma * sigma;
    return std::sqrt(2.0 / (std::numbers::pi * s2)) * std::exp(-(r * r + mu * mu) / (2.0 * s2)) *
           std::cosh(r * mu / s2);
}

DiskMaterialSpec small_disks(DiskVariant variant, int count, int side, std::uint64_t seed)
{
    DiskMaterialSpec s;
    s.variant = variant;
    s.disk_count = count;
    s.r_min = 1;
    s.r_max = 12;
    s.mu = 4.0;
    s.sigma = 5.0;
    s.side = side;
    s.seed = seed;
    return s;
}

} // namespace

TEST_CASE("round half to even")
{
    CHECK(round_half_even(0.5) == 0);
    CHECK(round_half_even(1.5) == 2);
    CHECK(round_half_even(2.5) == 2);
    CHECK(round_half_even(2.4999) == 2);
    CHECK(round_half_even(-1.5) == -2);
    CHECK(round_half_even(7.0) == 7);
}

TEST_CASE("radius histogram follows the folded normal")
{
    DiskMaterialSpec spec; // r 1..250, mu 50, sigma 60
    spec.disk_count = 640;
    const auto bins = radius_histogram(spec);
    REQUIRE(bins.size() == 250);

    double independent_sum = 0.0;
    long rounded = 0;
    for (int r = 1; r <= 250; ++r) {
        const double e = 640.0 * folded_normal(r, 50.0, 60.0);
        independent_sum += e;
        const auto& b = bins[static_cast<std::size_t>(r - 1)];
        CHECK(b.radius == r);
        CHECK(b.expected == doctest::Approx(e).epsilon(1e-12));
        CHECK(b.count == std::lround(e));
        rounded += b.count;
    }
    CHECK(std::abs(independent_sum - 640.0) / 640.0 < 0.02);
    CHECK(std::abs(static_cast<double>(rounded) - 640.0) / 640.0 < 0.02);
}

TEST_CASE("radius histogram with mu = 0 is a half normal")
{
    DiskMaterialSpec spec;
    spec.mu = 0.0;
    spec.sigma = 10.0;
    spec.r_max = 40;
    spec.disk_count = 1000;
    const auto bins = radius_histogram(spec);
    for (const auto& b : bins) {
        const double r = b.radius;
        CHECK(b.expected / bins.front().expected == doctest::Approx(std::exp(-(r * r - 1.0) / 200.0)));
    }
}

TEST_CASE("single radius bin")
{
    DiskMaterialSpec spec;
    spec.r_min = spec.r_max = 30;
    spec.disk_count = 5000;
    const auto bins = radius_histogram(spec);
    REQUIRE(bins.size() == 1);
    CHECK(bins[0].count == std::lround(5000.0 * folded_normal(30.0, 50.0, 60.0)));

    spec.sigma = 0.0;
    CHECK_THROWS_AS(radius_histogram(spec), DataError);
}

TEST_CASE("radius draw uses the rounded histogram as is")
{
    for (int count : {491, 640, 2000}) {
        DiskMaterialSpec spec;
        spec.disk_count = count;
        spec.seed = 11;
        long total = 0;
        for (const auto& b : radius_histogram(spec))
            total += b.count;
        const auto draw = draw_radii(spec);
        CHECK(draw.histogram_total == total);
        CHECK(static_cast<long>(draw.radii.size()) == total);
        CHECK(std::abs(total - count) <= count / 50);
    }
    DiskMaterialSpec starved;
    starved.disk_count = 40;
    CHECK_THROWS_AS(draw_radii(starved), DataError);
}

TEST_CASE("area rescaled draws take a share of the reference multiset")
{
    DiskMaterialSpec full;
    full.disk_count = 640;
    std::map<int, long> reference;
    for (const auto& b : radius_histogram(full))
        reference[b.radius] = b.count;
    const long total = draw_radii(full).histogram_total;

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        DiskMaterialSpec small = full;
        small.disk_count = 40;
        small.reference_count = 640;
        small.seed = seed;
        const auto draw = draw_radii(small);
        CHECK(draw.histogram_total == total);
        CHECK(static_cast<long>(draw.radii.size()) == round_half_even(40.0 * total / 640.0));
        std::map<int, long> seen;
        for (int r : draw.radii)
            ++seen[r];
        for (const auto& [r, c] : seen)
            CHECK(c <= reference[r]);
    }

    DiskMaterialSpec big = full;
    big.disk_count = 2000;
    big.reference_count = 640;
    const auto draw = draw_radii(big);
    CHECK(static_cast<long>(draw.radii.size()) == round_half_even(2000.0 * total / 640.0));
    std::map<int, long> seen;
    for (int r : draw.radii)
        ++seen[r];
    for (const auto& [r, c] : reference) {
        CHECK(seen[r] >= 3 * c);
        CHECK(seen[r] <= 4 * c);
    }
}

TEST_CASE("one disk in a 4x4 domain")
{
    const auto img = rasterize_disks(4, {Disk{2.0, 2.0, 1}});
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n) {
            const double dx = n + 0.5 - 2.0;
            const double dy = m + 0.5 - 2.0;
            CHECK(img(m, n) == (dx * dx + dy * dy <= 1.0 ? 1 : 0));
        }
    CHECK(img.count(Phase::Solid) == 4);
}

TEST_CASE("rasterization wraps periodically")
{
    const int side = 9;
    const Disk d{0.3, 8.6, 2};
    const auto img = rasterize_disks(side, {d});
    for (std::size_t m = 0; m < 9; ++m)
        for (std::size_t n = 0; n < 9; ++n) {
            const Disk pixel{n + 0.5, m + 0.5, 0};
            CHECK(img(m, n) == (periodic_distance_sq(pixel, d, side) <= 4.0 ? 1 : 0));
        }
}

TEST_CASE("periodic minimum image distance")
{
    CHECK(periodic_distance_sq({0.5, 0.5, 1}, {9.5, 0.5, 1}, 10.0) == doctest::Approx(1.0));
    CHECK(periodic_distance_sq({0.0, 0.0, 1}, {5.0, 5.0, 1}, 10.0) == doctest::Approx(50.0));
    CHECK(periodic_distance_sq({1.0, 2.0, 1}, {4.0, 6.0, 1}, 100.0) == doctest::Approx(25.0));
}

TEST_CASE("impenetrable disks keep their distance")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto spec = small_disks(DiskVariant::Impenetrable, 40, 128, seed);
        const auto packing = place_disks(spec);
        REQUIRE(packing.disks.size() == draw_radii(spec).radii.size());
        for (std::size_t h = 0; h < packing.disks.size(); ++h)
            for (std::size_t i = h + 1; i < packing.disks.size(); ++i) {
                const auto& a = packing.disks[h];
                const auto& b = packing.disks[i];
                const double need = a.radius + b.radius;
                CHECK(periodic_distance_sq(a, b, 128.0) >= need * need);
            }
    }
}

TEST_CASE("overlapping disks never swallow a center circle")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto spec = small_disks(DiskVariant::Overlapping, 120, 128, seed);
        const auto packing = place_disks(spec);
        REQUIRE(packing.disks.size() == draw_radii(spec).radii.size());
        for (std::size_t h = 0; h < packing.disks.size(); ++h)
            for (std::size_t i = h + 1; i < packing.disks.size(); ++i) {
                const auto& a = packing.disks[h];
                const auto& b = packing.disks[i];
                const double gap = a.radius - b.radius;
                CHECK(periodic_distance_sq(a, b, 128.0) > gap * gap);
            }
        for (const auto& d : packing.disks) {
            CHECK(d.x >= 0.0);
            CHECK(d.x < 128.0);
            CHECK(d.y >= 0.0);
            CHECK(d.y < 128.0);
        }
    }
}

TEST_CASE("placement order follows the shuffled radius draw and rasterizes to the image")
{
    const auto spec = small_disks(DiskVariant::Overlapping, 60, 96, 5);
    const auto packing = place_disks(spec);
    const auto draw = draw_radii(spec);
    REQUIRE(packing.disks.size() == draw.radii.size());
    for (std::size_t i = 0; i < draw.radii.size(); ++i)
        CHECK(packing.disks[i].radius == draw.radii[i]);
    CHECK(rasterize_disks(96, packing.disks) == packing.image);
}

TEST_CASE("infeasible impenetrable packing fails deterministically")
{
    DiskMaterialSpec spec;
    spec.variant = DiskVariant::Impenetrable;
    spec.disk_count = 5; // the single bin rounds to two disks
    spec.side = 8;
    spec.r_min = spec.r_max = 8;
    spec.mu = 8.0;
    spec.sigma = 1.0;
    spec.seed = 3;
    try {
        place_disks(spec);
        FAIL("placement should have failed");
    } catch (const PlacementError& e) {
        CHECK(e.disk_index() == 1);
        CHECK(e.placed() == 1);
        CHECK(e.attempts() == kPlacementBudget);
    }
}

TEST_CASE("disk generation is deterministic per seed")
{
    const auto spec = small_disks(DiskVariant::Overlapping, 80, 128, 42);
    const auto a = place_disks(spec);
    const auto b = place_disks(spec);
    CHECK(a.image == b.image);
    auto other = spec;
    other.seed = 43;
    CHECK(!(place_disks(other).image == a.image));
}

TEST_CASE("log kernel weights")
{
    const auto k1 = log_kernel(1);
    REQUIRE(k1.size() == 1);
    CHECK(k1[0] == 1.0);

    const auto k3 = log_kernel(3);
    REQUIRE(k3.size() == 9);
    const double edge = 0.5 * std::exp(-0.5);
    const double total = 1.0 + 4.0 * edge;
    CHECK(k3[4] == doctest::Approx(1.0 / total).epsilon(1e-14));
    for (int idx : {1, 3, 5, 7})
        CHECK(k3[static_cast<std::size_t>(idx)] == doctest::Approx(edge / total).epsilon(1e-14));
    for (int idx : {0, 2, 6, 8})
        CHECK(std::abs(k3[static_cast<std::size_t>(idx)]) < 1e-15);

    for (int b : {1, 3, 5, 11, 75}) {
        double sum = 0.0;
        for (double w : log_kernel(b))
            sum += w;
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(log_kernel(4), DataError);
}

TEST_CASE("b = 1 thresholds the raw noise")
{
    LogMaterialSpec spec;
    spec.kernel_size = 1;
    spec.threshold = 100.5;
    spec.side = 64;
    spec.seed = 8;
    const auto noise = uniform_noise(64, 8);
    const auto img = generate_log(spec);
    for (std::size_t p = 0; p < noise.size(); ++p)
        CHECK(img.pixels()[p] == (noise[p] >= 100.5 ? 1 : 0));
}

TEST_CASE("uniform noise covers 0..255 evenly")
{
    const auto noise = uniform_noise(256, 17);
    std::array<int, 256> hist{};
    for (auto v : noise)
        ++hist[v];
    for (int c : hist) {
        CHECK(c > 256 - 5 * 16);
        CHECK(c < 256 + 5 * 16);
    }
}

TEST_CASE("blurred field equals the direct periodic convolution")
{
    for (int b : {3, 9, 11, 21}) {
        CAPTURE(b);
        LogMaterialSpec spec;
        spec.kernel_size = b;
        spec.side = 40;
        spec.seed = static_cast<std::uint64_t>(b);
        const auto field = log_blurred_field(spec);
        const auto direct = oracle::direct_log_field(uniform_noise(40, spec.seed), 40, log_kernel(b), b);
        REQUIRE(field.size() == direct.size());
        double worst = 0.0;
        for (std::size_t p = 0; p < field.size(); ++p)
            worst = std::max(worst, std::abs(field[p] - direct[p]));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("kernel larger than the domain wraps")
{
    LogMaterialSpec spec;
    spec.kernel_size = 15;
    spec.side = 8;
    spec.seed = 2;
    const auto field = log_blurred_field(spec);
    const auto direct = oracle::direct_log_field(uniform_noise(8, 2), 8, log_kernel(15), 15);
    for (std::size_t p = 0; p < field.size(); ++p)
        CHECK(field[p] == doctest::Approx(direct[p]).epsilon(1e-10));
}

TEST_CASE("log material is deterministic and near half filled at a0 = 127.5")
{
    LogMaterialSpec spec;
    spec.kernel_size = 15;
    spec.side = 256;
    spec.seed = 77;
    const auto a = generate_log(spec);
    CHECK(a == generate_log(spec));
    const double phi0 = surface_fraction(a, Phase::Void);
    CHECK(phi0 > 0.4);
    CHECK(phi0 < 0.6);
}

TEST_CASE("material presets")
{
    const auto od = std::get<DiskMaterialSpec>(material_preset("od", 1024));
    CHECK(od.disk_count == 40);
    CHECK(od.reference_count == 640);
    CHECK(od.variant == DiskVariant::Overlapping);
    CHECK(od.r_max == 250);
    const auto id = std::get<DiskMaterialSpec>(material_preset("id", 4096));
    CHECK(id.disk_count == 491);
    CHECK(id.variant == DiskVariant::Impenetrable);
    CHECK(std::get<LogMaterialSpec>(material_preset("logk2", 512)).threshold == 127.0);
    CHECK(std::get<LogMaterialSpec>(material_preset("logk3", 512)).kernel_size == 75);
    CHECK_THROWS_AS(material_preset("xx", 64), DataError);

    const auto g = generate_material(material_preset("od", 512), 5);
    CHECK(g.disks.size() == g.draw.radii.size());
    CHECK(g.disks.size() == 10);
    CHECK(g.image.rows() == 512);
}

TEST_CASE("counter hash streams are reproducible")
{
    CHECK(counter_hash(1, 2) == counter_hash(1, 2));
    CHECK(counter_hash(1, 2) != counter_hash(2, 1));
    SplitMix64 a(5), b(5);
    for (int i = 0; i < 10; ++i)
        CHECK(a.next() == b.next());
    SplitMix64 c(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(c.below(7) < 7);
    }
    // Reference value of SplitMix64 seeded with 0 (first output).
    SplitMix64 z(0);
    CHECK(z.next() == 0xe220a8397b1dcdafULL);
}

TEST_CASE("level cuts of the b = 75 field match the tabulated fractions")
{
    // The blurred field is close to Gaussian with mean 127.5 and standard
    // deviation sigma_noise * ||K||_2, so phi0 ~ Phi((a0 - 127.5) / sigma_f).
    double sum_sq = 0.0;
    for (double w : log_kernel(75))
        sum_sq += w * w;
    const double sigma_noise = std::sqrt((256.0 * 256.0 - 1.0) / 12.0);
    const double sigma_f = sigma_noise * std::sqrt(sum_sq);
    auto phi0 = [&](double a0) { return 0.5 * std::erfc(-(a0 - 127.5) / sigma_f / std::sqrt(2.0)); };
    CHECK(phi0(127.50) == doctest::Approx(0.5));
    CHECK(std::abs(phi0(127.00) - 0.3272) < 0.01);
    CHECK(std::abs(phi0(126.75) - 0.2475) < 0.01);
}

TEST_CASE("largest first placement order")
{
    auto spec = small_disks(DiskVariant::Impenetrable, 60, 256, 4);
    spec.order = PlacementOrder::LargestFirst;
    const auto draw = draw_radii(spec);
    CHECK(std::is_sorted(draw.radii.rbegin(), draw.radii.rend()));
    auto shuffled = spec;
    shuffled.order = PlacementOrder::Shuffled;
    auto a = draw_radii(shuffled).radii;
    auto b = draw.radii;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(std::get<DiskMaterialSpec>(material_preset("id", 1024)).order == PlacementOrder::LargestFirst);
    CHECK(std::get<DiskMaterialSpec>(material_preset("od", 1024)).order == PlacementOrder::Shuffled);
    CHECK(parse_placement_order(placement_order_name(PlacementOrder::LargestFirst)) == PlacementOrder::LargestFirst);
    CHECK_THROWS_AS(parse_placement_order("random"), DataError);
}
