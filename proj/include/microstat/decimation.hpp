#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "microstat/image.hpp"

namespace microstat {

enum class DecimationKind { Random, Bilinear, Bicubic };

struct DecimationMethod
{
    DecimationKind kind = DecimationKind::Random;
    std::uint64_t seed = 0; // used by Random only

    static DecimationMethod random(std::uint64_t seed) { return {DecimationKind::Random, seed}; }
    static DecimationMethod bilinear() { return {DecimationKind::Bilinear, 0}; }
    static DecimationMethod bicubic() { return {DecimationKind::Bicubic, 0}; }
};

std::string_view method_name(DecimationKind kind);
DecimationKind parse_method(std::string_view name);

/// xi in [0, 3] for output pixel (m, n) of decimation step k. Counter-based,
/// so every step and pixel is independently reproducible.
unsigned random_xi(std::uint64_t seed, int step, std::size_t m, std::size_t n);

/// A_k(m, n) = A_{k-1}(2m + floor(xi/2), 2n + xi mod 2).
std::uint8_t random_rule(const BinaryImage& source, std::size_t m, std::size_t n, unsigned xi);

/// 1 iff the mean of the 2x2 block is >= 1/2, i.e. at least two ones.
std::uint8_t bilinear_rule(const std::array<std::uint8_t, 4>& block);

/// 256 * alpha for a 4x4 neighbourhood (rows 2m-1 .. 2m+2, columns 2n-1 .. 2n+2),
/// with alpha = G(G(row 0), .., G(row 3)) and G(g) = (-g0 + 9 g1 + 9 g2 - g3) / 16.
int bicubic_alpha_256(const std::array<std::array<std::uint8_t, 4>, 4>& neighbourhood);

/// 1 iff alpha >= 1/2.
std::uint8_t bicubic_rule(const std::array<std::array<std::uint8_t, 4>, 4>& neighbourhood);

/// The 4x4 bicubic neighbourhood of output pixel (m, n); indices outside the
/// source are clamped to the nearest valid row/column.
std::array<std::array<std::uint8_t, 4>, 4> bicubic_neighbourhood(const BinaryImage& source, std::size_t m,
                                                                  std::size_t n);

/// Halves both dimensions. Throws DataError naming the odd axis.
BinaryImage decimate_step(const BinaryImage& img, const DecimationMethod& method);

/// A_0 .. A_K. crop_rows/crop_cols record the size A_0 was trimmed from.
struct DecimationLadder
{
    DecimationMethod method;
    std::vector<BinaryImage> images;
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;

    bool cropped() const
    {
        return !images.empty() && (images.front().rows() != source_rows || images.front().cols() != source_cols);
    }
};

/// Trims to the largest dimensions divisible by 2^steps (top-left corner kept).
BinaryImage crop_to_multiple(const BinaryImage& img, int steps);

/// Applies `steps` successive halvings. Without `crop`, dimensions must be
/// divisible by 2^steps.
DecimationLadder build_ladder(const BinaryImage& img, const DecimationMethod& method, int steps, bool crop = false);

} // namespace microstat
