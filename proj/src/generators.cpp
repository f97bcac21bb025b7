#include "microstat/generators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "microstat/rng.hpp"

namespace microstat {

namespace {

// Stream labels under a material seed.
constexpr std::uint64_t kRadiusStream = 1;
constexpr std::uint64_t kCenterStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

// Below this kernel size the blur is summed directly; FFT round-off could
// otherwise move integer-valued intensities across an integer threshold.
constexpr int kDirectKernelLimit = 9;

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<double> convolve_direct(const std::vector<std::uint8_t>& noise, int side,
                                    const std::vector<double>& kernel, int b)
{
    const int half = b / 2;
    std::vector<double> out(static_cast<std::size_t>(side) * side, 0.0);
    for (int m = 0; m < side; ++m)
        for (int n = 0; n < side; ++n) {
            double acc = 0.0;
            for (int h = -half; h <= half; ++h) {
                const int mm = ((m + h) % side + side) % side;
                for (int i = -half; i <= half; ++i) {
                    const int nn = ((n + i) % side + side) % side;
                    acc += kernel[static_cast<std::size_t>(h + half) * b + (i + half)] *
                           noise[static_cast<std::size_t>(mm) * side + nn];
                }
            }
            out[static_cast<std::size_t>(m) * side + n] = acc;
        }
    return out;
}

struct FftwFree
{
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T> using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T> FftwBuffer<T> fftw_buffer(std::size_t count)
{
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (!p)
        throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

std::vector<double> convolve_fft(const std::vector<std::uint8_t>& noise, int side,
                                 const std::vector<double>& kernel, int b)
{
    const auto n = static_cast<std::size_t>(side);
    const std::size_t spectrum = n * (n / 2 + 1);
    auto field = fftw_buffer<double>(n * n);
    auto weights = fftw_buffer<double>(n * n);
    auto field_hat = fftw_buffer<fftw_complex>(spectrum);
    auto weights_hat = fftw_buffer<fftw_complex>(spectrum);

    fftw_plan forward_field{};
    fftw_plan forward_weights{};
    fftw_plan backward{};
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward_field = fftw_plan_dft_r2c_2d(side, side, field.get(), field_hat.get(), FFTW_ESTIMATE);
        forward_weights = fftw_plan_dft_r2c_2d(side, side, weights.get(), weights_hat.get(), FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_2d(side, side, field_hat.get(), field.get(), FFTW_ESTIMATE);
    }

    for (std::size_t i = 0; i < n * n; ++i) {
        field[i] = noise[i];
        weights[i] = 0.0;
    }
    // out(m,n) = sum K(h,i) a(m+h, n+i): a circular correlation, so the
    // weight for offset (h,i) goes to (-h,-i) of a convolution kernel.
    const int half = b / 2;
    for (int h = -half; h <= half; ++h)
        for (int i = -half; i <= half; ++i) {
            const auto r = static_cast<std::size_t>(((-h) % side + side) % side);
            const auto c = static_cast<std::size_t>(((-i) % side + side) % side);
            weights[r * n + c] += kernel[static_cast<std::size_t>(h + half) * b + (i + half)];
        }

    fftw_execute(forward_field);
    fftw_execute(forward_weights);
    for (std::size_t i = 0; i < spectrum; ++i) {
        const std::complex<double> a(field_hat[i][0], field_hat[i][1]);
        const std::complex<double> w(weights_hat[i][0], weights_hat[i][1]);
        const auto p = a * w;
        field_hat[i][0] = p.real();
        field_hat[i][1] = p.imag();
    }
    fftw_execute(backward);

    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward_field);
        fftw_destroy_plan(forward_weights);
        fftw_destroy_plan(backward);
    }

    const double scale = 1.0 / static_cast<double>(n * n);
    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        out[i] = field[i] * scale;
    return out;
}

} // namespace

void DiskMaterialSpec::validate() const
{
    if (disk_count < 1)
        throw DataError("disk count must be positive");
    if (reference_count < 0)
        throw DataError("reference disk count must be non-negative");
    if (r_min < 1 || r_max < r_min)
        throw DataError("radius range must satisfy 1 <= r_min <= r_max");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DataError("folded-normal scale sigma must be positive");
    if (!std::isfinite(mu))
        throw DataError("folded-normal location mu must be finite");
    if (side < 1)
        throw DataError("side length must be positive");
}

void LogMaterialSpec::validate() const
{
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw DataError("kernel size must be an odd positive integer");
    if (!(threshold >= 0.0 && threshold <= 255.0))
        throw DataError("level-cut threshold must lie in [0, 255]");
    if (side < 1)
        throw DataError("side length must be positive");
}

PlacementError::PlacementError(std::size_t disk_index, std::size_t placed, long attempts)
    : DataError("disk placement stalled: disk " + std::to_string(disk_index) + " found no valid center after " +
                std::to_string(attempts) + " attempts (" + std::to_string(placed) + " disks placed)"),
      disk_index_(disk_index), placed_(placed), attempts_(attempts)
{
}

long round_half_even(double value)
{
    return static_cast<long>(std::nearbyint(value)); // default FE_TONEAREST
}

std::vector<RadiusBin> radius_histogram(const DiskMaterialSpec& spec)
{
    spec.validate();
    const double s2 = spec.sigma * spec.sigma;
    const double norm = static_cast<double>(spec.histogram_count()) * std::sqrt(2.0 / (std::numbers::pi * s2));
    std::vector<RadiusBin> bins;
    bins.reserve(static_cast<std::size_t>(spec.r_max - spec.r_min + 1));
    for (int r = spec.r_min; r <= spec.r_max; ++r) {
        const double rr = r;
        const double expected =
            norm * std::exp(-(rr * rr + spec.mu * spec.mu) / (2.0 * s2)) * std::cosh(rr * spec.mu / s2);
        bins.push_back({r, expected, round_half_even(expected)});
    }
    return bins;
}

std::string_view placement_order_name(PlacementOrder order)
{
    return order == PlacementOrder::Shuffled ? "shuffled" : "largest-first";
}

PlacementOrder parse_placement_order(std::string_view name)
{
    if (name == "shuffled")
        return PlacementOrder::Shuffled;
    if (name == "largest-first")
        return PlacementOrder::LargestFirst;
    throw DataError("unknown placement order '" + std::string(name) + "' (shuffled, largest-first)");
}

RadiusDraw draw_radii(const DiskMaterialSpec& spec)
{
    const auto bins = radius_histogram(spec);
    SplitMix64 rng(derive_seed(spec.seed, kRadiusStream));

    RadiusDraw draw;
    std::vector<int> multiset;
    for (const auto& bin : bins)
        multiset.insert(multiset.end(), static_cast<std::size_t>(bin.count), bin.radius);
    draw.histogram_total = static_cast<long>(multiset.size());
    if (multiset.empty())
        throw DataError("radius histogram rounds to zero disks at I = " + std::to_string(spec.histogram_count()) +
                        "; raise the (reference) disk count");

    if (spec.histogram_count() == spec.disk_count) {
        draw.radii = std::move(multiset);
    } else {
        const long total = draw.histogram_total;
        const long wanted = std::max(
            1L, round_half_even(static_cast<double>(spec.disk_count) * static_cast<double>(total) /
                                static_cast<double>(spec.histogram_count())));
        for (long copy = 0; copy < wanted / total; ++copy)
            draw.radii.insert(draw.radii.end(), multiset.begin(), multiset.end());
        // Partial Fisher-Yates: the first `rest` entries become a uniform subset.
        const auto rest = static_cast<std::size_t>(wanted % total);
        for (std::size_t i = 0; i < rest; ++i)
            std::swap(multiset[i], multiset[i + rng.below(multiset.size() - i)]);
        draw.radii.insert(draw.radii.end(), multiset.begin(), multiset.begin() + static_cast<std::ptrdiff_t>(rest));
    }

    for (std::size_t i = draw.radii.size(); i > 1; --i)
        std::swap(draw.radii[i - 1], draw.radii[rng.below(i)]);
    if (spec.order == PlacementOrder::LargestFirst)
        std::stable_sort(draw.radii.begin(), draw.radii.end(), std::greater<>());
    return draw;
}

double periodic_distance_sq(const Disk& a, const Disk& b, double side)
{
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    dx = std::min(dx, side - dx);
    dy = std::min(dy, side - dy);
    return dx * dx + dy * dy;
}

BinaryImage rasterize_disks(int side, const std::vector<Disk>& disks)
{
    if (side < 1)
        throw DataError("side length must be positive");
    const auto n = static_cast<std::size_t>(side);
    std::vector<std::uint8_t> pixels(n * n, 0);
    for (const auto& d : disks) {
        const double r = d.radius;
        const double r2 = r * r;
        // Pixel centers (n + 1/2) inside [x - r, x + r], on the unwrapped plane.
        const auto m0 = static_cast<long>(std::ceil(d.y - r - 0.5));
        const auto m1 = static_cast<long>(std::floor(d.y + r - 0.5));
        const auto n0 = static_cast<long>(std::ceil(d.x - r - 0.5));
        const auto n1 = static_cast<long>(std::floor(d.x + r - 0.5));
        for (long m = m0; m <= m1; ++m) {
            const double dy = (static_cast<double>(m) + 0.5) - d.y;
            const auto row = static_cast<std::size_t>(((m % side) + side) % side);
            for (long c = n0; c <= n1; ++c) {
                const double dx = (static_cast<double>(c) + 0.5) - d.x;
                if (dx * dx + dy * dy <= r2)
                    pixels[row * n + static_cast<std::size_t>(((c % side) + side) % side)] = 1;
            }
        }
    }
    return BinaryImage(n, n, std::move(pixels));
}

DiskPacking place_disks(const DiskMaterialSpec& spec)
{
    spec.validate();
    DiskPacking out;
    out.draw = draw_radii(spec);
    SplitMix64 rng(derive_seed(spec.seed, kCenterStream));
    const double side = spec.side;
    const bool impenetrable = spec.variant == DiskVariant::Impenetrable;

    out.disks.reserve(out.draw.radii.size());
    for (std::size_t i = 0; i < out.draw.radii.size(); ++i) {
        Disk candidate{0.0, 0.0, out.draw.radii[i]};
        long attempts = 0;
        bool placed = false;
        while (attempts < kPlacementBudget) {
            ++attempts;
            candidate.x = rng.uniform01() * side;
            candidate.y = rng.uniform01() * side;
            const bool ok = std::all_of(out.disks.begin(), out.disks.end(), [&](const Disk& h) {
                const double d2 = periodic_distance_sq(h, candidate, side);
                if (impenetrable) {
                    const double sum = static_cast<double>(h.radius + candidate.radius);
                    return d2 >= sum * sum;
                }
                const double diff = static_cast<double>(std::abs(h.radius - candidate.radius));
                return d2 > diff * diff;
            });
            if (ok) {
                placed = true;
                break;
            }
        }
        if (!placed)
            throw PlacementError(i, out.disks.size(), attempts);
        out.disks.push_back(candidate);
    }
    out.image = rasterize_disks(spec.side, out.disks);
    return out;
}

std::vector<double> log_kernel(int kernel_size)
{
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw DataError("kernel size must be an odd positive integer");
    const int half = kernel_size / 2;
    std::vector<double> w(static_cast<std::size_t>(kernel_size) * kernel_size, 0.0);
    if (half == 0) {
        w[0] = 1.0;
        return w;
    }
    const double scale = 2.0 * static_cast<double>(half) * half;
    for (int h = -half; h <= half; ++h)
        for (int i = -half; i <= half; ++i) {
            const double q = static_cast<double>(h * h + i * i) / scale;
            w[static_cast<std::size_t>(h + half) * kernel_size + (i + half)] = (1.0 - q) * std::exp(-q);
        }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& v : w)
        v /= total;
    return w;
}

std::vector<std::uint8_t> uniform_noise(int side, std::uint64_t seed)
{
    const auto n = static_cast<std::size_t>(side);
    std::vector<std::uint8_t> noise(n * n);
    SplitMix64 rng(derive_seed(seed, kNoiseStream));
    for (auto& v : noise)
        v = static_cast<std::uint8_t>(rng.next() >> 56);
    return noise;
}

std::vector<double> log_blurred_field(const LogMaterialSpec& spec)
{
    spec.validate();
    const auto noise = uniform_noise(spec.side, spec.seed);
    const auto kernel = log_kernel(spec.kernel_size);
    if (spec.kernel_size <= kDirectKernelLimit)
        return convolve_direct(noise, spec.side, kernel, spec.kernel_size);
    return convolve_fft(noise, spec.side, kernel, spec.kernel_size);
}

BinaryImage generate_log(const LogMaterialSpec& spec)
{
    const auto field = log_blurred_field(spec);
    std::vector<std::uint8_t> pixels(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        pixels[i] = field[i] >= spec.threshold ? 1 : 0;
    const auto n = static_cast<std::size_t>(spec.side);
    return BinaryImage(n, n, std::move(pixels));
}

MaterialSpec material_preset(std::string_view name, int side)
{
    const double area_ratio = (static_cast<double>(side) / 4096.0) * (static_cast<double>(side) / 4096.0);
    auto disks = [&](DiskVariant variant, int full_scale_count) {
        DiskMaterialSpec spec;
        spec.variant = variant;
        spec.disk_count = std::max(1L, round_half_even(full_scale_count * area_ratio));
        spec.reference_count = full_scale_count;
        if (variant == DiskVariant::Impenetrable)
            spec.order = PlacementOrder::LargestFirst;
        spec.side = side;
        return MaterialSpec{spec};
    };
    auto logk = [&](double threshold) {
        LogMaterialSpec spec;
        spec.threshold = threshold;
        spec.side = side;
        return MaterialSpec{spec};
    };
    if (name == "id") return disks(DiskVariant::Impenetrable, 491);
    if (name == "od") return disks(DiskVariant::Overlapping, 640);
    if (name == "logk1") return logk(127.50);
    if (name == "logk2") return logk(127.00);
    if (name == "logk3") return logk(126.75);
    throw DataError("unknown material '" + std::string(name) + "'");
}

GeneratedMaterial generate_material(MaterialSpec spec, std::uint64_t seed)
{
    if (auto* d = std::get_if<DiskMaterialSpec>(&spec)) {
        d->seed = seed;
        auto packing = place_disks(*d);
        return {std::move(packing.image), std::move(packing.disks), std::move(packing.draw)};
    }
    auto& l = std::get<LogMaterialSpec>(spec);
    l.seed = seed;
    return {generate_log(l), {}, {}};
}

} // namespace microstat
