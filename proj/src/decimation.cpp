#include "microstat/decimation.hpp"

#include <algorithm>

#include "microstat/error.hpp"
#include "microstat/rng.hpp"

namespace microstat {

std::string_view method_name(DecimationKind kind)
{
    switch (kind) {
    case DecimationKind::Random: return "random";
    case DecimationKind::Bilinear: return "bilinear";
    case DecimationKind::Bicubic: return "bicubic";
    }
    return "unknown";
}

DecimationKind parse_method(std::string_view name)
{
    for (auto k : {DecimationKind::Random, DecimationKind::Bilinear, DecimationKind::Bicubic})
        if (method_name(k) == name)
            return k;
    throw DataError("unknown decimation method '" + std::string(name) + "'");
}

unsigned random_xi(std::uint64_t seed, int step, std::size_t m, std::size_t n)
{
    const std::uint64_t key = derive_seed(seed, static_cast<std::uint64_t>(step));
    const std::uint64_t counter = (static_cast<std::uint64_t>(m) << 32) ^ static_cast<std::uint64_t>(n);
    return static_cast<unsigned>(counter_hash(key, counter) >> 62);
}

std::uint8_t random_rule(const BinaryImage& source, std::size_t m, std::size_t n, unsigned xi)
{
    return source(2 * m + xi / 2, 2 * n + xi % 2);
}

std::uint8_t bilinear_rule(const std::array<std::uint8_t, 4>& block)
{
    // alpha = ones / 4 >= 1/2
    return block[0] + block[1] + block[2] + block[3] >= 2 ? 1 : 0;
}

int bicubic_alpha_256(const std::array<std::array<std::uint8_t, 4>, 4>& nb)
{
    auto g16 = [](int g0, int g1, int g2, int g3) { return -g0 + 9 * g1 + 9 * g2 - g3; };
    std::array<int, 4> q{};
    for (std::size_t t = 0; t < 4; ++t)
        q[t] = g16(nb[t][0], nb[t][1], nb[t][2], nb[t][3]);
    return g16(q[0], q[1], q[2], q[3]);
}

std::uint8_t bicubic_rule(const std::array<std::array<std::uint8_t, 4>, 4>& nb)
{
    return bicubic_alpha_256(nb) >= 128 ? 1 : 0;
}

std::array<std::array<std::uint8_t, 4>, 4> bicubic_neighbourhood(const BinaryImage& source, std::size_t m,
                                                                  std::size_t n)
{
    const auto last_row = static_cast<std::ptrdiff_t>(source.rows()) - 1;
    const auto last_col = static_cast<std::ptrdiff_t>(source.cols()) - 1;
    std::array<std::array<std::uint8_t, 4>, 4> nb{};
    for (std::ptrdiff_t t = 0; t < 4; ++t) {
        const auto r = std::clamp<std::ptrdiff_t>(2 * static_cast<std::ptrdiff_t>(m) - 1 + t, 0, last_row);
        for (std::ptrdiff_t u = 0; u < 4; ++u) {
            const auto c = std::clamp<std::ptrdiff_t>(2 * static_cast<std::ptrdiff_t>(n) - 1 + u, 0, last_col);
            nb[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)] =
                source(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return nb;
}

BinaryImage decimate_step(const BinaryImage& img, const DecimationMethod& method)
{
    if (img.rows() % 2 != 0)
        throw DataError("cannot halve image: row count " + std::to_string(img.rows()) + " is odd");
    if (img.cols() % 2 != 0)
        throw DataError("cannot halve image: column count " + std::to_string(img.cols()) + " is odd");
    const std::size_t rows = img.rows() / 2;
    const std::size_t cols = img.cols() / 2;
    const int step = img.step() + 1;
    std::vector<std::uint8_t> out(rows * cols);
    switch (method.kind) {
    case DecimationKind::Random:
        for (std::size_t m = 0; m < rows; ++m)
            for (std::size_t n = 0; n < cols; ++n)
                out[m * cols + n] = random_rule(img, m, n, random_xi(method.seed, step, m, n));
        break;
    case DecimationKind::Bilinear:
        for (std::size_t m = 0; m < rows; ++m)
            for (std::size_t n = 0; n < cols; ++n)
                out[m * cols + n] = bilinear_rule(
                    {img(2 * m, 2 * n), img(2 * m, 2 * n + 1), img(2 * m + 1, 2 * n), img(2 * m + 1, 2 * n + 1)});
        break;
    case DecimationKind::Bicubic:
        for (std::size_t m = 0; m < rows; ++m)
            for (std::size_t n = 0; n < cols; ++n)
                out[m * cols + n] = bicubic_rule(bicubic_neighbourhood(img, m, n));
        break;
    }
    return BinaryImage(rows, cols, std::move(out), step, img.pixel_size() * 2);
}

BinaryImage crop_to_multiple(const BinaryImage& img, int steps)
{
    const std::size_t unit = std::size_t{1} << steps;
    const std::size_t rows = img.rows() / unit * unit;
    const std::size_t cols = img.cols() / unit * unit;
    if (rows == 0 || cols == 0)
        throw DataError("image " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                        " is smaller than 2^" + std::to_string(steps));
    if (rows == img.rows() && cols == img.cols())
        return img;
    return img.crop(rows, cols);
}

DecimationLadder build_ladder(const BinaryImage& img, const DecimationMethod& method, int steps, bool crop)
{
    if (steps < 0 || steps > 30)
        throw DataError("ladder depth must lie in [0, 30]");
    const std::size_t unit = std::size_t{1} << steps;
    DecimationLadder ladder;
    ladder.method = method;
    ladder.source_rows = img.rows();
    ladder.source_cols = img.cols();
    if (!crop) {
        if (img.rows() % unit != 0)
            throw DataError("row count " + std::to_string(img.rows()) + " is not divisible by 2^" +
                            std::to_string(steps) + " (use crop)");
        if (img.cols() % unit != 0)
            throw DataError("column count " + std::to_string(img.cols()) + " is not divisible by 2^" +
                            std::to_string(steps) + " (use crop)");
    }
    ladder.images.reserve(static_cast<std::size_t>(steps) + 1);
    ladder.images.push_back(crop ? crop_to_multiple(img, steps) : img);
    for (int k = 1; k <= steps; ++k)
        ladder.images.push_back(decimate_step(ladder.images.back(), method));
    return ladder;
}

} // namespace microstat
