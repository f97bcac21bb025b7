#include "microstat/descriptors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "microstat/error.hpp"

namespace microstat {

namespace {

using Int128 = __int128;

std::vector<std::uint8_t> indicator(std::span<const std::uint8_t> pixels, Phase j)
{
    std::vector<std::uint8_t> out(pixels.size());
    const auto want = label(j);
    std::transform(pixels.begin(), pixels.end(), out.begin(),
                   [want](std::uint8_t v) -> std::uint8_t { return v == want ? 1 : 0; });
    return out;
}

/// Adds, for r = 0 .. hits.size() - 1, the number of set pairs (p, p + r)
/// along each of `lines` rows of length `len`. A line is packed twice over
/// (periodic) or followed by zeros (nonperiodic), so any 64-bit window at
/// offset p + r can be read without a bounds test.
void accumulate_pair_hits(const std::vector<std::uint8_t>& lines_data, std::size_t lines, std::size_t len,
                          bool periodic, std::vector<std::uint64_t>& hits)
{
    const std::size_t base_words = (len + 63) / 64;
    const std::size_t words = (2 * len + 63) / 64 + 1;
    const std::uint64_t tail_mask = len % 64 == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << (len % 64)) - 1;
    std::vector<std::uint64_t> bits(words);
    auto window = [&bits](std::size_t pos) {
        const std::size_t q = pos / 64;
        const unsigned s = pos % 64;
        return s == 0 ? bits[q] : (bits[q] >> s) | (bits[q + 1] << (64 - s));
    };
    for (std::size_t line = 0; line < lines; ++line) {
        std::fill(bits.begin(), bits.end(), 0);
        const auto* src = lines_data.data() + line * len;
        for (std::size_t p = 0; p < len; ++p)
            if (src[p]) {
                bits[p / 64] |= std::uint64_t{1} << (p % 64);
                if (periodic)
                    bits[(p + len) / 64] |= std::uint64_t{1} << ((p + len) % 64);
            }
        for (std::size_t r = 0; r < hits.size(); ++r) {
            std::uint64_t c = 0;
            for (std::size_t w = 0; w < base_words; ++w) {
                std::uint64_t a = bits[w];
                if (w + 1 == base_words)
                    a &= tail_mask;
                c += static_cast<std::uint64_t>(std::popcount(a & window(64 * w + r)));
            }
            hits[r] += c;
        }
    }
}

/// Adds, for r = 0 .. counts.size() - 1, the start positions of r + 1
/// consecutive set pixels along each line.
void accumulate_segment_hits(const std::vector<std::uint8_t>& lines_data, std::size_t lines, std::size_t len,
                             bool periodic, std::vector<std::uint64_t>& counts)
{
    std::vector<std::uint64_t> runs(len + 1, 0); // runs[R] = number of maximal runs of length R
    std::uint64_t full_lines = 0;
    for (std::size_t line = 0; line < lines; ++line) {
        const auto* src = lines_data.data() + line * len;
        std::size_t start = 0;
        if (periodic) {
            const auto* gap = std::find(src, src + len, std::uint8_t{0});
            if (gap == src + len) {
                ++full_lines;
                continue;
            }
            start = static_cast<std::size_t>(gap - src);
        }
        std::size_t run = 0;
        for (std::size_t i = 0; i < len; ++i) {
            if (src[(start + i) % len]) {
                ++run;
            } else {
                ++runs[run];
                run = 0;
            }
        }
        ++runs[run];
    }
    // count(r) = sum over R > r of (R - r) runs[R], via suffix sums.
    std::uint64_t tail_runs = 0;
    std::uint64_t tail_length = 0;
    std::vector<std::uint64_t> above_runs(len + 1, 0);
    std::vector<std::uint64_t> above_length(len + 1, 0);
    for (std::size_t R = len; R-- > 0;) {
        tail_runs += runs[R + 1];
        tail_length += (R + 1) * runs[R + 1];
        above_runs[R] = tail_runs;
        above_length[R] = tail_length;
    }
    for (std::size_t r = 0; r < counts.size(); ++r)
        counts[r] += above_length[r] - r * above_runs[r] + full_lines * len;
}

std::uint64_t axial_trials(std::size_t lines, std::size_t len, std::size_t r, bool periodic)
{
    return static_cast<std::uint64_t>(lines) * (periodic ? len : len - r);
}

template <typename Accumulate>
SampleCounts axial_counts(const BinaryImage& img, Phase j, Boundary boundary, Accumulate accumulate)
{
    const bool periodic = boundary == Boundary::Periodic;
    const std::size_t limit = range_limit(img);
    SampleCounts out{std::vector<std::uint64_t>(limit + 1, 0), std::vector<std::uint64_t>(limit + 1, 0)};
    const auto rows = indicator(img.pixels(), j);
    accumulate(rows, img.rows(), img.cols(), periodic, out.hits);
    const auto transposed = img.transposed();
    const auto cols = indicator(transposed.pixels(), j);
    accumulate(cols, img.cols(), img.rows(), periodic, out.hits);
    for (std::size_t r = 0; r <= limit; ++r)
        out.trials[r] = axial_trials(img.rows(), img.cols(), r, periodic) +
                        axial_trials(img.cols(), img.rows(), r, periodic);
    return out;
}

constexpr std::int64_t kFar = std::int64_t{1} << 60;

/// Lower-envelope squared distance transform of one line (Felzenszwalb and
/// Huttenlocher). f holds kFar where there is no site.
void distance_transform_1d(const std::int64_t* f, std::size_t n, std::int64_t* d, std::vector<std::size_t>& v,
                           std::vector<double>& z)
{
    v.resize(n);
    z.resize(n + 1);
    std::size_t q0 = 0;
    while (q0 < n && f[q0] >= kFar)
        ++q0;
    if (q0 == n) {
        std::fill(d, d + n, kFar);
        return;
    }
    auto key = [f](std::size_t q) { return static_cast<double>(f[q]) + static_cast<double>(q) * static_cast<double>(q); };
    std::size_t k = 0;
    v[0] = q0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (std::size_t q = q0 + 1; q < n; ++q) {
        if (f[q] >= kFar)
            continue;
        double s = (key(q) - key(v[k])) / (2.0 * static_cast<double>(q) - 2.0 * static_cast<double>(v[k]));
        while (s <= z[k]) {
            --k;
            s = (key(q) - key(v[k])) / (2.0 * static_cast<double>(q) - 2.0 * static_cast<double>(v[k]));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q))
            ++k;
        const auto dq = static_cast<std::int64_t>(q) - static_cast<std::int64_t>(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

/// Transforms `lines` lines of length len in place. Periodic lines are
/// processed as three concatenated copies; the middle copy then sees every
/// minimum image within len / 2.
void distance_transform_lines(std::vector<std::int64_t>& data, std::size_t lines, std::size_t len, bool periodic)
{
    const std::size_t ext = periodic ? 3 * len : len;
    std::vector<std::int64_t> in(ext);
    std::vector<std::int64_t> out(ext);
    std::vector<std::size_t> v;
    std::vector<double> z;
    for (std::size_t line = 0; line < lines; ++line) {
        auto* row = data.data() + line * len;
        if (periodic) {
            for (std::size_t c = 0; c < 3; ++c)
                std::copy(row, row + len, in.begin() + static_cast<std::ptrdiff_t>(c * len));
            distance_transform_1d(in.data(), ext, out.data(), v, z);
            std::copy(out.begin() + static_cast<std::ptrdiff_t>(len),
                      out.begin() + static_cast<std::ptrdiff_t>(2 * len), row);
        } else {
            std::copy(row, row + len, in.begin());
            distance_transform_1d(in.data(), ext, out.data(), v, z);
            std::copy(out.begin(), out.end(), row);
        }
    }
}

std::vector<double> distances_for(const BinaryImage& img)
{
    const auto limit = range_limit(img);
    std::vector<double> r(limit + 1);
    for (std::size_t l = 0; l <= limit; ++l)
        r[l] = static_cast<double>(img.pixel_size() * l);
    return r;
}

DescriptorCurve blank_curve(const BinaryImage& img, Descriptor beta, Phase j, double phi, double s)
{
    DescriptorCurve c;
    c.beta = beta;
    c.phase = j;
    c.step = img.step();
    c.pixel_size = img.pixel_size();
    c.distances = distances_for(img);
    c.values.assign(c.distances.size(), 0.0);
    c.phi = phi;
    c.s_over_phi = phi > 0.0 ? s / phi : 0.0;
    return c;
}

std::string phase_text(Phase j) { return "phase " + std::to_string(index(j)); }

} // namespace

std::string_view boundary_name(Boundary b)
{
    return b == Boundary::Periodic ? "periodic" : "nonperiodic";
}

Boundary parse_boundary(std::string_view name)
{
    if (name == "periodic")
        return Boundary::Periodic;
    if (name == "nonperiodic")
        return Boundary::Nonperiodic;
    throw DataError("unknown boundary mode '" + std::string(name) + "'");
}

std::string_view descriptor_name(Descriptor beta)
{
    switch (beta) {
    case Descriptor::Autocovariance: return "autocovariance";
    case Descriptor::LinealPath: return "lineal_path";
    case Descriptor::PoreSize: return "pore_size";
    }
    return "unknown";
}

std::size_t range_limit(const BinaryImage& img) { return std::min(img.rows(), img.cols()) / 2; }

SampleCounts two_point_counts(const BinaryImage& img, Phase j, Boundary boundary)
{
    return axial_counts(img, j, boundary, accumulate_pair_hits);
}

std::vector<double> two_point_correlation(const BinaryImage& img, Phase j, Boundary boundary)
{
    const auto counts = two_point_counts(img, j, boundary);
    std::vector<double> s2(counts.hits.size());
    for (std::size_t l = 0; l < s2.size(); ++l)
        s2[l] = counts.probability(l);
    return s2;
}

SampleCounts lineal_path_counts(const BinaryImage& img, Phase j, Boundary boundary)
{
    return axial_counts(img, j, boundary, accumulate_segment_hits);
}

std::vector<std::uint64_t> interface_distance_sq(const BinaryImage& img, Phase j, Boundary boundary)
{
    const bool periodic = boundary == Boundary::Periodic;
    const std::size_t rows = img.rows();
    const std::size_t cols = img.cols();
    const auto target = label(j);

    std::vector<std::int64_t> grid(img.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = img.pixels()[i] == target ? kFar : 0;
    distance_transform_lines(grid, rows, cols, periodic);

    std::vector<std::int64_t> columns(img.size());
    for (std::size_t m = 0; m < rows; ++m)
        for (std::size_t n = 0; n < cols; ++n)
            columns[n * rows + m] = grid[m * cols + n];
    distance_transform_lines(columns, cols, rows, periodic);

    std::vector<std::uint64_t> out(img.size());
    for (std::size_t m = 0; m < rows; ++m)
        for (std::size_t n = 0; n < cols; ++n) {
            const auto d = columns[n * rows + m];
            out[m * cols + n] = d >= kFar ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(d);
        }
    return out;
}

std::size_t pore_size_bin(std::uint64_t distance_sq)
{
    // Largest l with (2l + 1)^2 <= 4 d^2, i.e. floor(d - 1/2).
    const std::uint64_t four = 4 * distance_sq;
    auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(four)));
    while (s * s > four)
        --s;
    while ((s + 1) * (s + 1) <= four)
        ++s;
    return s == 0 ? 0 : static_cast<std::size_t>((s - 1) / 2);
}

std::vector<std::uint64_t> pore_size_histogram(const BinaryImage& img, Phase j, Boundary boundary)
{
    const auto limit = range_limit(img);
    std::vector<std::uint64_t> hist(limit + 1, 0);
    const auto dist = interface_distance_sq(img, j, boundary);
    const auto target = label(j);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (img.pixels()[i] != target || dist[i] == std::numeric_limits<std::uint64_t>::max())
            continue;
        const auto bin = pore_size_bin(dist[i]);
        if (bin <= limit)
            ++hist[bin];
    }
    return hist;
}

double specific_interface_area(const BinaryImage& img, Boundary boundary)
{
    const bool periodic = boundary == Boundary::Periodic;
    const std::size_t rows = img.rows();
    const std::size_t cols = img.cols();
    std::uint64_t edges = 0;
    for (std::size_t m = 0; m < rows; ++m)
        for (std::size_t n = 0; n < cols; ++n) {
            const auto v = img(m, n);
            if (n + 1 < cols)
                edges += v != img(m, n + 1);
            else if (periodic && cols > 1)
                edges += v != img(m, 0);
            if (m + 1 < rows)
                edges += v != img(m + 1, n);
            else if (periodic && rows > 1)
                edges += v != img(0, n);
        }
    return static_cast<double>(edges) / static_cast<double>(img.size()) / static_cast<double>(img.pixel_size());
}

DescriptorCurve autocovariance_normalized(const BinaryImage& img, Phase j, Boundary boundary)
{
    const auto n = static_cast<Int128>(img.size());
    const auto c = static_cast<Int128>(img.count(j));
    if (c == 0 || c == n)
        throw NumericError("autocovariance undefined for single-phase image (" + phase_text(j) + ")");
    const auto counts = two_point_counts(img, j, boundary);
    auto curve = blank_curve(img, Descriptor::Autocovariance, j, surface_fraction(img, j),
                             specific_interface_area(img, boundary));
    // (S2 - phi^2) / (phi (1 - phi)) = (h n^2 - c^2 t) / (t c (n - c)), in integers.
    for (std::size_t l = 0; l < curve.values.size(); ++l) {
        const auto h = static_cast<Int128>(counts.hits[l]);
        const auto t = static_cast<Int128>(counts.trials[l]);
        const Int128 num = h * n * n - c * c * t;
        const Int128 den = t * c * (n - c);
        curve.values[l] = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
    }
    return curve;
}

DescriptorCurve lineal_path_normalized(const BinaryImage& img, Phase j, Boundary boundary)
{
    const auto n = static_cast<Int128>(img.size());
    const auto c = static_cast<Int128>(img.count(j));
    if (c == 0)
        throw NumericError("lineal-path normalization undefined: " + phase_text(j) + " absent");
    const auto counts = lineal_path_counts(img, j, boundary);
    auto curve = blank_curve(img, Descriptor::LinealPath, j, surface_fraction(img, j),
                             specific_interface_area(img, boundary));
    for (std::size_t l = 0; l < curve.values.size(); ++l) {
        const Int128 num = static_cast<Int128>(counts.hits[l]) * n;
        const Int128 den = static_cast<Int128>(counts.trials[l]) * c;
        curve.values[l] = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
    }
    return curve;
}

DescriptorCurve pore_size_normalized(const BinaryImage& img, Phase j, Boundary boundary)
{
    const auto c = img.count(j);
    if (c == 0 || c == img.size())
        throw NumericError("pore-size distribution undefined for single-phase image (" + phase_text(j) + ")");
    const auto hist = pore_size_histogram(img, j, boundary);
    if (hist[0] == 0)
        throw NumericError("pore-size distribution has an empty first bin (" + phase_text(j) + ")");
    auto curve = blank_curve(img, Descriptor::PoreSize, j, surface_fraction(img, j),
                             specific_interface_area(img, boundary));
    for (std::size_t l = 0; l < curve.values.size(); ++l)
        curve.values[l] = static_cast<double>(hist[l]) / static_cast<double>(hist[0]);
    return curve;
}

DescriptorCurve normalized_descriptor(const BinaryImage& img, Descriptor beta, Phase j, Boundary boundary)
{
    switch (beta) {
    case Descriptor::Autocovariance: return autocovariance_normalized(img, j, boundary);
    case Descriptor::LinealPath: return lineal_path_normalized(img, j, boundary);
    case Descriptor::PoreSize: return pore_size_normalized(img, j, boundary);
    }
    throw DataError("unknown descriptor");
}

DescriptorSet compute_descriptors(const BinaryImage& img, Boundary boundary)
{
    DescriptorSet set;
    set.s = specific_interface_area(img, boundary);
    for (auto j : kPhases)
        set.phi[static_cast<std::size_t>(index(j))] = surface_fraction(img, j);
    for (auto beta : kDescriptors)
        for (auto j : kPhases) {
            try {
                set.at(beta, j) = normalized_descriptor(img, beta, j, boundary);
            } catch (const NumericError&) {
                auto curve = blank_curve(img, beta, j, set.phi[static_cast<std::size_t>(index(j))], set.s);
                curve.defined = false;
                set.at(beta, j) = std::move(curve);
            }
        }
    return set;
}

namespace {

/// Sum over tiled blocks of (phase-j pixels in block)^2.
Int128 block_square_sum(const BinaryImage& img, std::size_t window, Phase j)
{
    if (window == 0 || img.rows() % window != 0 || img.cols() % window != 0)
        throw DataError("image " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                        " is not divisible into " + std::to_string(window) + "-pixel windows");
    const auto target = label(j);
    const std::size_t block_cols = img.cols() / window;
    std::vector<std::uint64_t> sums(block_cols);
    Int128 total = 0;
    for (std::size_t bm = 0; bm < img.rows() / window; ++bm) {
        std::fill(sums.begin(), sums.end(), 0);
        for (std::size_t m = bm * window; m < (bm + 1) * window; ++m) {
            const auto row = img.row(m);
            for (std::size_t n = 0; n < img.cols(); ++n)
                sums[n / window] += row[n] == target;
        }
        for (auto s : sums)
            total += static_cast<Int128>(s) * s;
    }
    return total;
}

} // namespace

double local_fraction_variance(const BinaryImage& img, std::size_t window, Phase j)
{
    const auto squares = block_square_sum(img, window, j);
    const auto n = static_cast<Int128>(img.size());
    const auto c = static_cast<Int128>(img.count(j));
    const auto area = static_cast<Int128>(window) * window;
    // <tau^2> - phi^2 = (sum s_b^2 n - c^2 area) / (n^2 area)
    const Int128 num = squares * n - c * c * area;
    const long double den = static_cast<long double>(n) * static_cast<long double>(n) * static_cast<long double>(area);
    return static_cast<double>(static_cast<long double>(num) / den);
}

CoarsenessPoint coarseness(const BinaryImage& img, int k)
{
    if (k < 0 || k > 62)
        throw DataError("window exponent out of range");
    const std::size_t window = std::size_t{1} << k;
    const auto n = static_cast<Int128>(img.size());
    const auto c1 = static_cast<Int128>(img.count(Phase::Solid));
    const Int128 c0 = n - c1;
    if (c1 == 0 || c0 == 0)
        throw NumericError("coarseness undefined for single-phase image");
    const auto squares = block_square_sum(img, window, Phase::Solid);
    const auto area = static_cast<Int128>(window) * window;
    // sigma^2 / (phi0 phi1) = (sum s_b^2 n - c1^2 area) / (area c0 c1)
    const Int128 num = squares * n - c1 * c1 * area;
    const long double ratio = static_cast<long double>(num) /
                              (static_cast<long double>(area) * static_cast<long double>(c0) * static_cast<long double>(c1));
    return {window, static_cast<double>(std::sqrt(std::max(ratio, 0.0L)))};
}

} // namespace microstat
