#include "microstat/image.hpp"

#include <algorithm>
#include <string>

#include "microstat/error.hpp"

namespace microstat {

namespace {

void check_dimensions(std::size_t rows, std::size_t cols)
{
    if (rows == 0 || cols == 0)
        throw DataError("image dimensions must be positive, got " + std::to_string(rows) + "x" +
                        std::to_string(cols));
}

} // namespace

BinaryImage::BinaryImage(std::size_t rows, std::size_t cols, std::uint8_t fill)
    : rows_(rows), cols_(cols)
{
    check_dimensions(rows, cols);
    if (fill > 1)
        throw DataError("pixel value must be 0 or 1");
    pixels_.assign(rows * cols, fill);
}

BinaryImage::BinaryImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels,
                         int step, std::size_t pixel_size)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)), step_(step), pixel_size_(pixel_size)
{
    check_dimensions(rows, cols);
    if (pixels_.size() != rows * cols)
        throw DataError("pixel buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                        std::to_string(rows * cols));
    if (step < 0 || pixel_size == 0)
        throw DataError("invalid ladder provenance");
    const auto bad = std::find_if(pixels_.begin(), pixels_.end(), [](std::uint8_t v) { return v > 1; });
    if (bad != pixels_.end()) {
        const auto at = static_cast<std::size_t>(bad - pixels_.begin());
        throw DataError("pixel (" + std::to_string(at / cols) + "," + std::to_string(at % cols) +
                        ") has value " + std::to_string(*bad) + ", expected 0 or 1");
    }
}

std::size_t BinaryImage::count(Phase j) const
{
    const auto ones = static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), std::uint8_t{1}));
    return j == Phase::Solid ? ones : pixels_.size() - ones;
}

BinaryImage BinaryImage::with_provenance(int step, std::size_t pixel_size) const
{
    return BinaryImage(rows_, cols_, pixels_, step, pixel_size);
}

BinaryImage BinaryImage::complement() const
{
    std::vector<std::uint8_t> out(pixels_.size());
    std::transform(pixels_.begin(), pixels_.end(), out.begin(), [](std::uint8_t v) -> std::uint8_t { return v ^ 1U; });
    return BinaryImage(rows_, cols_, std::move(out), step_, pixel_size_);
}

BinaryImage BinaryImage::crop(std::size_t rows, std::size_t cols) const
{
    if (rows > rows_ || cols > cols_)
        throw DataError("crop larger than image");
    std::vector<std::uint8_t> out;
    out.reserve(rows * cols);
    for (std::size_t m = 0; m < rows; ++m) {
        const auto r = row(m);
        out.insert(out.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(cols));
    }
    return BinaryImage(rows, cols, std::move(out), step_, pixel_size_);
}

BinaryImage BinaryImage::transposed() const
{
    std::vector<std::uint8_t> out(pixels_.size());
    for (std::size_t m = 0; m < rows_; ++m)
        for (std::size_t n = 0; n < cols_; ++n)
            out[n * rows_ + m] = pixels_[m * cols_ + n];
    return BinaryImage(cols_, rows_, std::move(out), step_, pixel_size_);
}

double surface_fraction(const BinaryImage& img, Phase j)
{
    if (img.empty())
        return 0.0;
    return static_cast<double>(img.count(j)) / static_cast<double>(img.size());
}

} // namespace microstat
