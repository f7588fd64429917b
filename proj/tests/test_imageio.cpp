#include <gtest/gtest.h>
#include <png.h>

#include <random>
#include <set>
#include <sstream>
#include <string>

#include "sfcm/error.hpp"
#include "sfcm/imageio.hpp"

namespace sfcm {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::string payload_after_header(const std::string& file, int header_lines = 3) {
    std::size_t pos = 0;
    for (int k = 0; k < header_lines; ++k) pos = file.find('\n', pos) + 1;
    return file.substr(pos);
}

// Encodes a PNG in memory; test-only helper.
std::vector<std::uint8_t> encode_png(std::size_t w, std::size_t h, int depth, int color_type,
                                     const std::vector<std::uint8_t>& raw) {
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* v = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
            v->insert(v->end(), data, data + len);
        },
        nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = raw.size() / h;
    for (std::size_t y = 0; y < h; ++y) png_write_row(png, const_cast<png_bytep>(raw.data() + y * stride));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

TEST(LoadGrayscale, DecodesEightBitPgm) {
    const std::string file = std::string("P5\n2 2\n255\n") + std::string{char(0), char(128), char(255), char(64)};
    const auto img = load_grayscale(bytes_of(file));
    EXPECT_EQ(img.width, 2u);
    EXPECT_EQ(img.height, 2u);
    EXPECT_EQ(img.bit_depth, 8);
    EXPECT_EQ(img.samples, (std::vector<std::uint16_t>{0, 128, 255, 64}));
}

TEST(LoadGrayscale, SkipsHeaderComments) {
    const std::string raster{char(1), char(2), char(3), char(4)};
    const auto plain = load_grayscale(bytes_of("P5\n2 2\n255\n" + raster));
    const auto commented = load_grayscale(bytes_of("P5\n# made by hand\n2 # width\n2\n255\n" + raster));
    EXPECT_EQ(plain, commented);
}

TEST(LoadGrayscale, SixteenBitIsBigEndian) {
    const std::string file = std::string("P5 1 1 65535\n") + std::string{char(0x01), char(0x00)};
    const auto img = load_grayscale(bytes_of(file));
    EXPECT_EQ(img.bit_depth, 16);
    EXPECT_EQ(img.samples[0], 256);
}

TEST(LoadGrayscale, HeaderErrors) {
    try {
        load_grayscale(bytes_of("P6\n1 1\n255\n\x01\x02\x03"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 0u);
    }
    try {
        load_grayscale(bytes_of("P5\n2 x\n255\n"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5u);
    }
    EXPECT_THROW(load_grayscale(bytes_of("P5\n1 1\n100\n\x01")), UnsupportedFormatError);
    EXPECT_THROW(load_grayscale(bytes_of("P5\n2 2\n255\n\x01\x02")), ParseError);
    EXPECT_THROW(load_grayscale(bytes_of("P5\n0 2\n255\n")), ParseError);
    EXPECT_THROW(load_grayscale(bytes_of("")), ParseError);
}

TEST(LoadGrayscale, DecodesGrayPng) {
    const std::vector<std::uint8_t> raw8 = {0, 10, 200, 255, 7, 9};
    const auto img8 = load_grayscale(encode_png(3, 2, 8, PNG_COLOR_TYPE_GRAY, raw8));
    EXPECT_EQ(img8.bit_depth, 8);
    EXPECT_EQ(img8.width, 3u);
    EXPECT_EQ(img8.samples, (std::vector<std::uint16_t>{0, 10, 200, 255, 7, 9}));

    const std::vector<std::uint8_t> raw16 = {0x01, 0x00, 0xFF, 0xFF};
    const auto img16 = load_grayscale(encode_png(2, 1, 16, PNG_COLOR_TYPE_GRAY, raw16));
    EXPECT_EQ(img16.bit_depth, 16);
    EXPECT_EQ(img16.samples, (std::vector<std::uint16_t>{256, 65535}));
}

TEST(LoadGrayscale, RejectsMultiChannelPng) {
    const std::vector<std::uint8_t> rgb = {1, 2, 3, 4, 5, 6};
    EXPECT_THROW(load_grayscale(encode_png(2, 1, 8, PNG_COLOR_TYPE_RGB, rgb)), UnsupportedFormatError);
    const std::vector<std::uint8_t> ga = {1, 255};
    EXPECT_THROW(load_grayscale(encode_png(1, 1, 8, PNG_COLOR_TYPE_GRAY_ALPHA, ga)), UnsupportedFormatError);
}

TEST(LoadGrayscale, TruncatedPngIsParseError) {
    const std::vector<std::uint8_t> raw = {1, 2, 3, 4};
    auto png = encode_png(2, 2, 8, PNG_COLOR_TYPE_GRAY, raw);
    png.resize(png.size() / 2);
    EXPECT_THROW(load_grayscale(png), ParseError);
}

TEST(SavePgm, RoundTripsEightAndSixteenBit) {
    std::mt19937_64 rng(31);
    for (int depth : {8, 16}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t w = 1 + rng() % 17, h = 1 + rng() % 13;
            std::vector<std::uint16_t> s(w * h);
            for (auto& v : s) v = static_cast<std::uint16_t>(rng() % (depth == 8 ? 256 : 65536));
            const auto img = ImageGrid::create(w, h, depth, s);
            std::ostringstream out;
            save_pgm(img, out);
            EXPECT_EQ(load_grayscale(bytes_of(out.str())), img);
        }
    }
}

TEST(SaveLabelMap, Quantization) {
    std::ostringstream two;
    save_label_map({2, 1, {0, 1}}, 2, two);
    EXPECT_EQ(payload_after_header(two.str()), (std::string{char(0), char(255)}));

    std::ostringstream five;
    save_label_map({1, 1, {2}}, 5, five);
    EXPECT_EQ(static_cast<unsigned char>(payload_after_header(five.str())[0]), 127);

    std::ostringstream uniform;
    save_label_map({3, 1, {1, 1, 1}}, 3, uniform);
    const auto img = load_grayscale(bytes_of(uniform.str()));
    EXPECT_EQ(std::set<std::uint16_t>(img.samples.begin(), img.samples.end()).size(), 1u);

    std::ostringstream sink;
    EXPECT_THROW(save_label_map({1, 1, {0}}, 1, sink), ParameterError);
    EXPECT_THROW(save_label_map({1, 1, {3}}, 3, sink), ContractViolation);
}

TEST(SaveLabelMap, InverseQuantizationRecoversLabels) {
    for (std::size_t c : {2u, 3u, 5u, 8u, 100u, 200u, 256u}) {
        LabelMap labels{static_cast<std::size_t>(c), 1, {}};
        for (std::size_t l = 0; l < c; ++l) labels.labels.push_back(static_cast<Label>(l));
        std::ostringstream out;
        save_label_map(labels, c, out);
        EXPECT_EQ(labels_from_quantized(load_grayscale(bytes_of(out.str())), c), labels) << "c=" << c;
    }
}

TEST(LabelsFromGrayLevels, RanksDistinctLevels) {
    const auto img = ImageGrid::create(4, 1, 8, {200, 0, 127, 0});
    EXPECT_EQ(labels_from_gray_levels(img).labels, (std::vector<Label>{2, 0, 1, 0}));
}

TEST(SavePseudocolor, PayloadBytes) {
    const Palette red({{255, 0, 0}, {0, 0, 255}});
    std::ostringstream one;
    save_pseudocolor({1, 1, {0}}, red, one);
    EXPECT_EQ(payload_after_header(one.str()), (std::string{char(0xFF), char(0), char(0)}));

    std::ostringstream four;
    save_pseudocolor({2, 2, {0, 1, 1, 0}}, red, four);
    const std::string expected = {char(0xFF), 0, 0, 0, 0, char(0xFF), 0, 0, char(0xFF), char(0xFF), 0, 0};
    EXPECT_EQ(four.str(), "P6\n2 2\n255\n" + expected);

    std::ostringstream sink;
    EXPECT_THROW(save_pseudocolor({1, 1, {2}}, red, sink), ParameterError);
}

TEST(Palette, EntriesAreDistinct) {
    EXPECT_THROW(Palette({{1, 2, 3}, {1, 2, 3}}), ParameterError);
    const auto p = Palette::make_default(256);
    std::set<Rgb> seen;
    for (std::size_t i = 0; i < p.size(); ++i) seen.insert(p[i]);
    EXPECT_EQ(seen.size(), 256u);
}

TEST(ConvergenceCsv, Format) {
    std::ostringstream out;
    write_convergence_csv({{1, 0.25, 1.0}}, out);
    EXPECT_EQ(out.str(), "iteration,objective,max_delta\n1,0.250000000,1.000000000\n");

    std::ostringstream big;
    write_convergence_csv({{1, 123.456, 0.5}, {2, 1e-7, 1e-6}, {3, 0.0, 0.0}}, big);
    EXPECT_EQ(big.str(),
              "iteration,objective,max_delta\n"
              "1,123.456000,0.500000000\n"
              "2,0.000000100000000,0.000001000\n"
              "3,0.000000000,0.000000000\n");

    std::ostringstream empty;
    EXPECT_THROW(write_convergence_csv({}, empty), ContractViolation);
}

TEST(Formatting, PlainDecimals) {
    EXPECT_EQ(format_decimal(1e-5), "0.00001");
    EXPECT_EQ(format_decimal(0.017822265625), "0.017822265625");
    EXPECT_EQ(format_decimal(2.0), "2");
    EXPECT_EQ(format_significant(9.9999999996, 9), "10.0000000");
    EXPECT_EQ(format_significant(-0.5, 3), "-0.500");
}

TEST(WriteFile, FailureIsIoError) {
    EXPECT_THROW(write_file("/nonexistent-dir/x.pgm", [](std::ostream& o) { o << "x"; }), IoError);
    EXPECT_THROW(read_file("/nonexistent-dir/x.pgm"), IoError);
}

}  // namespace
}  // namespace sfcm
