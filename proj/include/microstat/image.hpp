#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "microstat/error.hpp"

namespace microstat {

/// Phase label. Only two phases exist: 0 is the void phase, 1 the solid phase.
enum class Phase : std::uint8_t { Void = 0, Solid = 1 };

inline constexpr std::array<Phase, 2> kPhases{Phase::Void, Phase::Solid};

constexpr int index(Phase j) { return static_cast<int>(j); }
constexpr std::uint8_t label(Phase j) { return static_cast<std::uint8_t>(j); }
constexpr Phase other(Phase j) { return j == Phase::Void ? Phase::Solid : Phase::Void; }

/**
 * Row-major M x N raster of phase labels, one byte per pixel.
 *
 * Besides the pixels an image carries its position on a decimation ladder:
 * the number of halvings applied (step k) and the pixel size in
 * full-resolution pixels (2^k for ladder-produced images). Images are
 * immutable once constructed.
 */
class BinaryImage
{
public:
    BinaryImage() = default;

    /// Constant image. Throws DataError if fill is not 0 or 1 or a dimension is zero.
    BinaryImage(std::size_t rows, std::size_t cols, std::uint8_t fill = 0);

    /// Takes ownership of row-major pixels; every value must be 0 or 1.
    BinaryImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels,
                int step = 0, std::size_t pixel_size = 1);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    int step() const { return step_; }
    std::size_t pixel_size() const { return pixel_size_; }

    std::uint8_t operator()(std::size_t m, std::size_t n) const { return pixels_[m * cols_ + n]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<const std::uint8_t> row(std::size_t m) const
    {
        return std::span<const std::uint8_t>(pixels_).subspan(m * cols_, cols_);
    }

    /// Number of pixels labelled j.
    std::size_t count(Phase j) const;

    /// Same pixels, different ladder bookkeeping.
    BinaryImage with_provenance(int step, std::size_t pixel_size) const;

    /// Swaps the two phase labels.
    BinaryImage complement() const;

    /// Top-left rows x cols sub-image; keeps provenance.
    BinaryImage crop(std::size_t rows, std::size_t cols) const;

    /// Column-major view as a new image (rows and columns swapped).
    BinaryImage transposed() const;

    friend bool operator==(const BinaryImage& a, const BinaryImage& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.pixels_ == b.pixels_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> pixels_;
    int step_ = 0;
    std::size_t pixel_size_ = 1;
};

/// Surface fraction phi_j: pixels labelled j over all pixels.
double surface_fraction(const BinaryImage& img, Phase j);

} // namespace microstat
