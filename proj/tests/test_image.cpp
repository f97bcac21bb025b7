#include <doctest.h>

#include <filesystem>
#include <string>

#include "microstat/image.hpp"
#include "microstat/image_io.hpp"
#include "oracles.hpp"

using namespace microstat;

TEST_CASE("constant image and surface fraction")
{
    const BinaryImage ones(5, 7, 1);
    CHECK(ones.count(Phase::Solid) == 35);
    CHECK(surface_fraction(ones, Phase::Solid) == 1.0);
    CHECK(surface_fraction(ones, Phase::Void) == 0.0);

    std::vector<std::uint8_t> px(64, 0);
    for (int i = 0; i < 16; ++i)
        px[static_cast<std::size_t>(i * 4)] = 1;
    const BinaryImage eight(8, 8, px);
    CHECK(surface_fraction(eight, Phase::Solid) == 0.25);
}

TEST_CASE("surface fractions of the two phases sum to one")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto img = oracle::random_image(seed, 3 + seed % 11, 5 + seed % 7, 0.1 + 0.02 * seed);
        CHECK(surface_fraction(img, Phase::Void) + surface_fraction(img, Phase::Solid) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(img.count(Phase::Void) + img.count(Phase::Solid) == img.size());
    }
}

TEST_CASE("image construction rejects bad input")
{
    CHECK_THROWS_AS(BinaryImage(0, 4, 0), DataError);
    CHECK_THROWS_AS(BinaryImage(2, 2, 2), DataError);
    CHECK_THROWS_AS(BinaryImage(2, 2, std::vector<std::uint8_t>{0, 1, 2, 0}), DataError);
    CHECK_THROWS_AS(BinaryImage(2, 2, std::vector<std::uint8_t>{0, 1, 1}), DataError);
}

TEST_CASE("complement, crop, transpose")
{
    const auto img = oracle::from_rows({{1, 0, 0}, {1, 1, 0}});
    const auto c = img.complement();
    CHECK(c(0, 0) == 0);
    CHECK(c(0, 1) == 1);
    CHECK(c.complement() == img);

    const auto t = img.transposed();
    REQUIRE(t.rows() == 3);
    REQUIRE(t.cols() == 2);
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t n = 0; n < 3; ++n)
            CHECK(t(n, m) == img(m, n));

    const auto k = img.with_provenance(2, 4).crop(1, 2);
    CHECK(k == oracle::from_rows({{1, 0}}));
    CHECK(k.step() == 2);
    CHECK(k.pixel_size() == 4);
    CHECK_THROWS_AS(img.crop(3, 1), DataError);
}

TEST_CASE("csv of a 2x2 checkerboard")
{
    const auto img = oracle::from_rows({{0, 1}, {1, 0}});
    CHECK(encode_image(img, ImageFormat::Csv) == "0,1\n1,0\n");
    CHECK(decode_image("0,1\n1,0") == img);
    CHECK(decode_image("0,1\r\n1,0\r\n\r\n") == img);
    CHECK_THROWS_AS(decode_image("0,1\n1\n", {ImageFormat::Csv, {}}), DataError);
    CHECK_THROWS_AS(decode_image("0,2\n1,0\n", {ImageFormat::Csv, {}}), DataError);
}

TEST_CASE("pbm headers tolerate comments")
{
    const std::string p1 = "P1\n# made by hand\n3 2 # width height\n1 0 1\n0 1 0\n";
    const auto img = decode_image(p1);
    CHECK(img == oracle::from_rows({{1, 0, 1}, {0, 1, 0}}));

    std::string p4 = "P4\n# c\n10 2\n";
    p4 += static_cast<char>(0b10000000);
    p4 += static_cast<char>(0b01000000);
    p4 += static_cast<char>(0b00000000);
    p4 += static_cast<char>(0b11000000);
    const auto packed = decode_image(p4);
    REQUIRE(packed.cols() == 10);
    CHECK(packed(0, 0) == 1);
    CHECK(packed(0, 9) == 1);
    CHECK(packed(0, 8) == 0);
    CHECK(packed(1, 8) == 1);
    CHECK(packed.count(Phase::Solid) == 4);
}

TEST_CASE("pbm binary payload size")
{
    const BinaryImage img(4096, 4096, 0);
    const auto bytes = encode_image(img, ImageFormat::PbmBinary);
    const std::string header = "P4\n4096 4096\n";
    CHECK(bytes.size() == header.size() + 4096u * 4096u / 8u);
    CHECK(bytes.compare(0, header.size(), header) == 0);

    const BinaryImage odd(3, 9, 1);
    CHECK(encode_image(odd, ImageFormat::PbmBinary).size() == std::string("P4\n9 3\n").size() + 3 * 2);
}

TEST_CASE("pgm needs a threshold")
{
    const std::string p2 = "P2\n2 2\n255\n0 200\n127 128\n";
    CHECK_THROWS_AS(decode_image(p2), DataError);
    const auto img = decode_image(p2, {std::nullopt, 128.0});
    CHECK(img == oracle::from_rows({{0, 1}, {0, 1}}));

    std::string p5 = "P5 2 1 65535\n";
    p5 += '\x80';
    p5 += '\x00';
    p5 += '\x00';
    p5 += '\xff';
    CHECK(decode_image(p5, {std::nullopt, 32768.0}) == oracle::from_rows({{1, 0}}));
}

TEST_CASE("malformed input is a data error")
{
    CHECK_THROWS_AS(decode_image("P1\n2 2\n1 0 1\n"), DataError);
    CHECK_THROWS_AS(decode_image("P4\n8 2\n\x01"), DataError);
    CHECK_THROWS_AS(decode_image("P1\n-2 2\n"), DataError);
    CHECK_THROWS_AS(decode_image("P3\n1 1\n255\n0 0 0\n"), DataError);
    CHECK_THROWS_AS(decode_image(""), DataError);
}

TEST_CASE("round trip is bit exact for every format")
{
    const std::array formats{ImageFormat::PbmAscii, ImageFormat::PbmBinary, ImageFormat::PgmAscii,
                             ImageFormat::PgmBinary, ImageFormat::Csv};
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto img = oracle::random_image(seed, 1 + seed * 3, 1 + seed * 5);
        for (auto f : formats) {
            CAPTURE(format_name(f));
            CHECK(decode_image(encode_image(img, f), {f, 128.0}) == img);
        }
    }
}

TEST_CASE("format names and extensions")
{
    CHECK(parse_format("pbm") == ImageFormat::PbmBinary);
    CHECK(parse_format("p1") == ImageFormat::PbmAscii);
    CHECK(parse_format("csv") == ImageFormat::Csv);
    CHECK_THROWS_AS(parse_format("png"), DataError);
    CHECK(format_from_extension("a/b.PGM") == ImageFormat::PgmBinary);
    CHECK(!format_from_extension("x.png").has_value());
}

TEST_CASE("files on disk")
{
    const auto dir = std::filesystem::temp_directory_path() / "microstat_image_test";
    std::filesystem::create_directories(dir);
    const auto img = oracle::random_image(99, 17, 23);
    save_image(img, dir / "a.pbm", ImageFormat::PbmBinary);
    save_image(img, dir / "a.csv", ImageFormat::Csv);
    CHECK(load_image(dir / "a.pbm") == img);
    CHECK(load_image(dir / "a.csv") == img);
    CHECK_THROWS_AS(load_image(dir / "missing.pbm"), DataError);
    std::filesystem::remove_all(dir);
}
