#include "microstat/image_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <vector>

#include "microstat/error.hpp"

namespace microstat {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

/// Cursor over PNM headers and ASCII rasters; '#' starts a comment running to end of line.
class PnmReader
{
public:
    explicit PnmReader(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            } else if (is_space(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_unsigned(const char* what)
    {
        skip_space_and_comments();
        std::size_t value = 0;
        const auto* first = bytes_.data() + pos_;
        const auto* last = bytes_.data() + bytes_.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr == first)
            throw DataError(std::string("malformed PNM header: expected ") + what);
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    /// The single whitespace byte separating a binary header from its raster.
    void consume_raster_separator()
    {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
            throw DataError("malformed PNM header: missing whitespace before raster");
        ++pos_;
    }

    char next_raster_char()
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            throw DataError("PNM raster truncated");
        return bytes_[pos_++];
    }

    std::string_view remaining() const { return bytes_.substr(pos_); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

ImageFormat detect_format(std::string_view bytes)
{
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        switch (bytes[1]) {
        case '1': return ImageFormat::PbmAscii;
        case '2': return ImageFormat::PgmAscii;
        case '4': return ImageFormat::PbmBinary;
        case '5': return ImageFormat::PgmBinary;
        default: break;
        }
        throw DataError(std::string("unsupported PNM variant P") + bytes[1]);
    }
    return ImageFormat::Csv;
}

void expect_magic(std::string_view bytes, ImageFormat format)
{
    const char* magic = format == ImageFormat::PbmAscii    ? "P1"
                        : format == ImageFormat::PbmBinary ? "P4"
                        : format == ImageFormat::PgmAscii  ? "P2"
                                                           : "P5";
    if (bytes.substr(0, 2) != magic)
        throw DataError(std::string("malformed header: expected magic ") + magic);
}

BinaryImage decode_pbm(std::string_view bytes, bool binary)
{
    PnmReader reader(bytes.substr(2));
    const auto cols = reader.read_unsigned("width");
    const auto rows = reader.read_unsigned("height");
    if (rows == 0 || cols == 0)
        throw DataError("malformed PNM header: zero dimension");
    std::vector<std::uint8_t> pixels(rows * cols);
    if (binary) {
        reader.consume_raster_separator();
        const auto raster = reader.remaining();
        const std::size_t stride = (cols + 7) / 8;
        if (raster.size() < stride * rows)
            throw DataError("PBM raster truncated: expected " + std::to_string(stride * rows) + " bytes");
        for (std::size_t m = 0; m < rows; ++m)
            for (std::size_t n = 0; n < cols; ++n) {
                const auto byte = static_cast<unsigned char>(raster[m * stride + n / 8]);
                pixels[m * cols + n] = static_cast<std::uint8_t>((byte >> (7 - n % 8)) & 1U);
            }
    } else {
        for (auto& p : pixels) {
            const char c = reader.next_raster_char();
            if (c != '0' && c != '1')
                throw DataError(std::string("PBM pixel value '") + c + "' outside {0,1}");
            p = static_cast<std::uint8_t>(c - '0');
        }
    }
    return BinaryImage(rows, cols, std::move(pixels));
}

BinaryImage decode_pgm(std::string_view bytes, bool binary, std::optional<double> threshold)
{
    if (!threshold)
        throw DataError("PGM input requires a binarization threshold");
    PnmReader reader(bytes.substr(2));
    const auto cols = reader.read_unsigned("width");
    const auto rows = reader.read_unsigned("height");
    const auto maxval = reader.read_unsigned("maxval");
    if (rows == 0 || cols == 0 || maxval == 0 || maxval > 65535)
        throw DataError("malformed PGM header");
    std::vector<std::uint8_t> pixels(rows * cols);
    if (binary) {
        reader.consume_raster_separator();
        const auto raster = reader.remaining();
        const std::size_t width = maxval > 255 ? 2 : 1;
        if (raster.size() < rows * cols * width)
            throw DataError("PGM raster truncated");
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            unsigned gray = static_cast<unsigned char>(raster[i * width]);
            if (width == 2)
                gray = (gray << 8) | static_cast<unsigned char>(raster[i * width + 1]);
            if (gray > maxval)
                throw DataError("PGM gray value exceeds maxval");
            pixels[i] = static_cast<double>(gray) >= *threshold ? 1 : 0;
        }
    } else {
        for (auto& p : pixels) {
            const auto gray = reader.read_unsigned("gray value");
            if (gray > maxval)
                throw DataError("PGM gray value exceeds maxval");
            p = static_cast<double>(gray) >= *threshold ? 1 : 0;
        }
    }
    return BinaryImage(rows, cols, std::move(pixels));
}

BinaryImage decode_csv(std::string_view bytes)
{
    std::vector<std::uint8_t> pixels;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        auto end = bytes.find('\n', pos);
        if (end == std::string_view::npos)
            end = bytes.size();
        auto line = bytes.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        std::size_t fields = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            while (!field.empty() && is_space(field.front()))
                field.remove_prefix(1);
            while (!field.empty() && is_space(field.back()))
                field.remove_suffix(1);
            if (field != "0" && field != "1")
                throw DataError("CSV row " + std::to_string(rows) + ": value '" + std::string(field) +
                                "' outside {0,1}");
            pixels.push_back(static_cast<std::uint8_t>(field[0] - '0'));
            ++fields;
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (rows == 0)
            cols = fields;
        else if (fields != cols)
            throw DataError("CSV row " + std::to_string(rows) + " has " + std::to_string(fields) +
                            " values, expected " + std::to_string(cols));
        ++rows;
    }
    if (rows == 0)
        throw DataError("CSV matrix is empty");
    return BinaryImage(rows, cols, std::move(pixels));
}

} // namespace

std::string_view format_name(ImageFormat format)
{
    switch (format) {
    case ImageFormat::PbmAscii: return "pbm-ascii";
    case ImageFormat::PbmBinary: return "pbm";
    case ImageFormat::PgmAscii: return "pgm-ascii";
    case ImageFormat::PgmBinary: return "pgm";
    case ImageFormat::Csv: return "csv";
    }
    return "unknown";
}

ImageFormat parse_format(std::string_view name)
{
    for (auto f : {ImageFormat::PbmAscii, ImageFormat::PbmBinary, ImageFormat::PgmAscii,
                   ImageFormat::PgmBinary, ImageFormat::Csv})
        if (format_name(f) == name)
            return f;
    if (name == "p1") return ImageFormat::PbmAscii;
    if (name == "p4") return ImageFormat::PbmBinary;
    if (name == "p2") return ImageFormat::PgmAscii;
    if (name == "p5") return ImageFormat::PgmBinary;
    throw DataError("unknown image format '" + std::string(name) + "'");
}

std::optional<ImageFormat> format_from_extension(const std::filesystem::path& path)
{
    auto ext = path.extension().string();
    for (auto& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".pbm") return ImageFormat::PbmBinary;
    if (ext == ".pgm") return ImageFormat::PgmBinary;
    if (ext == ".csv") return ImageFormat::Csv;
    return std::nullopt;
}

BinaryImage decode_image(std::string_view bytes, const LoadOptions& options)
{
    const ImageFormat format = options.format ? *options.format : detect_format(bytes);
    switch (format) {
    case ImageFormat::PbmAscii:
    case ImageFormat::PbmBinary:
        expect_magic(bytes, format);
        return decode_pbm(bytes, format == ImageFormat::PbmBinary);
    case ImageFormat::PgmAscii:
    case ImageFormat::PgmBinary:
        expect_magic(bytes, format);
        return decode_pgm(bytes, format == ImageFormat::PgmBinary, options.threshold);
    case ImageFormat::Csv:
        return decode_csv(bytes);
    }
    throw DataError("unknown image format");
}

std::string encode_image(const BinaryImage& img, ImageFormat format)
{
    const auto rows = img.rows();
    const auto cols = img.cols();
    std::string out;
    const auto dims = std::to_string(cols) + " " + std::to_string(rows) + "\n";
    switch (format) {
    case ImageFormat::PbmAscii:
        out = "P1\n" + dims;
        for (std::size_t m = 0; m < rows; ++m) {
            // Plain PBM lines should stay under 70 characters.
            for (std::size_t n = 0; n < cols; ++n) {
                out += static_cast<char>('0' + img(m, n));
                if ((n + 1) % 64 == 0 && n + 1 != cols)
                    out += '\n';
            }
            out += '\n';
        }
        break;
    case ImageFormat::PbmBinary: {
        out = "P4\n" + dims;
        const std::size_t stride = (cols + 7) / 8;
        const std::size_t header = out.size();
        out.resize(header + stride * rows, '\0');
        for (std::size_t m = 0; m < rows; ++m)
            for (std::size_t n = 0; n < cols; ++n)
                if (img(m, n))
                    out[header + m * stride + n / 8] =
                        static_cast<char>(static_cast<unsigned char>(out[header + m * stride + n / 8]) |
                                          (0x80U >> (n % 8)));
        break;
    }
    case ImageFormat::PgmAscii:
        out = "P2\n" + dims + "255\n";
        for (std::size_t m = 0; m < rows; ++m) {
            for (std::size_t n = 0; n < cols; ++n) {
                if (n)
                    out += (n % 16 == 0) ? '\n' : ' ';
                out += img(m, n) ? "255" : "0";
            }
            out += '\n';
        }
        break;
    case ImageFormat::PgmBinary:
        out = "P5\n" + dims + "255\n";
        for (auto p : img.pixels())
            out += static_cast<char>(p ? 0xFF : 0x00);
        break;
    case ImageFormat::Csv:
        out.reserve(rows * cols * 2);
        for (std::size_t m = 0; m < rows; ++m) {
            for (std::size_t n = 0; n < cols; ++n) {
                if (n)
                    out += ',';
                out += static_cast<char>('0' + img(m, n));
            }
            out += '\n';
        }
        break;
    }
    return out;
}

BinaryImage load_image(const std::filesystem::path& path, const LoadOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path.string() + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    LoadOptions resolved = options;
    if (!resolved.format && !(bytes.size() >= 2 && bytes[0] == 'P'))
        resolved.format = format_from_extension(path).value_or(ImageFormat::Csv);
    try {
        return decode_image(bytes, resolved);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void save_image(const BinaryImage& img, const std::filesystem::path& path, ImageFormat format)
{
    const auto bytes = encode_image(img, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw DataError("write failed for '" + path.string() + "'");
}

} // namespace microstat
