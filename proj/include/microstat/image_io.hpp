#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "microstat/image.hpp"

namespace microstat {

enum class ImageFormat {
    PbmAscii,  // P1
    PbmBinary, // P4
    PgmAscii,  // P2
    PgmBinary, // P5
    Csv,       // row-major, comma separated, LF line endings, no header
};

struct LoadOptions
{
    /// Detected from the magic number (PNM) or the file extension (.csv) when unset.
    std::optional<ImageFormat> format;
    /// Required for PGM input: gray values >= threshold become phase 1.
    std::optional<double> threshold;
};

std::string_view format_name(ImageFormat format);
ImageFormat parse_format(std::string_view name);

/// Format implied by a file extension: .pbm -> P4, .pgm -> P5, .csv -> CSV.
std::optional<ImageFormat> format_from_extension(const std::filesystem::path& path);

/// Parses an in-memory file. Loaded images have k = 0 and pixel size 1.
BinaryImage decode_image(std::string_view bytes, const LoadOptions& options = {});

/// Serializes pixels. PGM output uses maxval 255 with phase 1 as 255.
std::string encode_image(const BinaryImage& img, ImageFormat format);

BinaryImage load_image(const std::filesystem::path& path, const LoadOptions& options = {});
void save_image(const BinaryImage& img, const std::filesystem::path& path, ImageFormat format);

} // namespace microstat
