#include "sfcm/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>

#include "sfcm/error.hpp"

namespace sfcm {

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

bool is_space(std::uint8_t b) { return b == ' ' || b == '\t' || b == '\n' || b == '\r' || b == '\v' || b == '\f'; }

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }

    void expect_magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '5') {
            throw ParseError("missing P5 magic", 0);
        }
        pos_ = 2;
    }

    std::size_t read_number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > (1u << 30)) throw ParseError(std::string(what) + " is too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw ParseError("expected whitespace after maxval", pos_);
        }
        ++pos_;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

ImageGrid load_pgm(std::span<const std::uint8_t> bytes) {
    PgmHeaderReader reader(bytes);
    reader.expect_magic();
    const std::size_t width = reader.read_number("width");
    const std::size_t height = reader.read_number("height");
    const std::size_t maxval_at = reader.offset();
    const std::size_t maxval = reader.read_number("maxval");
    if (width == 0 || height == 0) throw ParseError("zero image dimension", maxval_at);
    if (maxval != 255 && maxval != 65535) {
        throw UnsupportedFormatError("PGM maxval " + std::to_string(maxval) + " is not 255 or 65535");
    }
    reader.expect_single_space();

    const int depth = maxval == 255 ? 8 : 16;
    const std::size_t bytes_per_sample = depth / 8;
    const std::size_t n = width * height;
    const std::size_t start = reader.offset();
    if (bytes.size() - start < n * bytes_per_sample) {
        throw ParseError("raster truncated: need " + std::to_string(n * bytes_per_sample) + " bytes", bytes.size());
    }

    std::vector<std::uint16_t> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (depth == 8) {
            samples[i] = bytes[start + i];
        } else {
            samples[i] = static_cast<std::uint16_t>((bytes[start + 2 * i] << 8) | bytes[start + 2 * i + 1]);
        }
    }
    return ImageGrid::create(width, height, depth, std::move(samples));
}

struct PngSource {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

struct PngFailure {
    std::jmp_buf jump;
    char message[256] = {};
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t length) {
    auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
    if (src->bytes.size() - src->pos < length) png_error(png, "unexpected end of PNG data");
    std::memcpy(out, src->bytes.data() + src->pos, length);
    src->pos += length;
}

void png_on_error(png_structp png, png_const_charp msg) {
    auto* failure = static_cast<PngFailure*>(png_get_error_ptr(png));
    std::snprintf(failure->message, sizeof failure->message, "%s", msg);
    std::longjmp(failure->jump, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

ImageGrid load_png(std::span<const std::uint8_t> bytes) {
    PngSource source{bytes, 0};
    PngFailure failure;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &failure, png_on_error, png_on_warning);
    if (!png) throw Error("cannot allocate PNG reader");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("cannot allocate PNG info");
    }

    // No objects with destructors may be created between setjmp and the
    // last libpng call; the raster buffer is allocated with malloc.
    png_bytep raster = nullptr;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int depth = 0;
    int color = 0;
    bool multichannel = false;

    if (setjmp(failure.jump)) {
        std::free(raster);
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(std::string("PNG decode failed: ") + failure.message, source.pos);
    }

    png_set_read_fn(png, &source, png_read_from_span);
    png_read_info(png, info);
    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    depth = png_get_bit_depth(png, info);
    color = png_get_color_type(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
        multichannel = true;
    } else {
        if (depth < 8) {
            png_set_expand_gray_1_2_4_to_8(png);
            depth = 8;
        }
        png_read_update_info(png, info);
        const png_size_t stride = png_get_rowbytes(png, info);
        raster = static_cast<png_bytep>(std::malloc(stride * height));
        if (!raster) png_error(png, "out of memory");
        for (png_uint_32 y = 0; y < height; ++y) png_read_row(png, raster + y * stride, nullptr);
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);

    if (multichannel) {
        throw UnsupportedFormatError("PNG color type " + std::to_string(color) + " is not single-channel grayscale");
    }

    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<std::uint16_t> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples[i] = depth == 8 ? raster[i]
                                : static_cast<std::uint16_t>((raster[2 * i] << 8) | raster[2 * i + 1]);
    }
    std::free(raster);
    return ImageGrid::create(width, height, depth, std::move(samples));
}

void check_stream(std::ostream& out) {
    if (!out) throw IoError("write to output sink failed");
}

void write_header(std::ostream& out, const char* magic, std::size_t w, std::size_t h, std::uint32_t maxval) {
    out << magic << '\n' << w << ' ' << h << '\n' << maxval << '\n';
}

}  // namespace

ImageGrid load_grayscale(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= kPngSignature.size() &&
        std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
        return load_png(bytes);
    }
    return load_pgm(bytes);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

ImageGrid load_grayscale_file(const std::filesystem::path& path) { return load_grayscale(read_file(path)); }

void save_pgm(const ImageGrid& image, std::ostream& out) {
    write_header(out, "P5", image.width, image.height, image.max_value());
    if (image.bit_depth == 8) {
        for (auto s : image.samples) out.put(static_cast<char>(s));
    } else {
        for (auto s : image.samples) {
            out.put(static_cast<char>(s >> 8));
            out.put(static_cast<char>(s & 0xFF));
        }
    }
    check_stream(out);
}

void save_label_map(const LabelMap& labels, std::size_t c, std::ostream& out) {
    if (c < 2 || c > 256) throw ParameterError("label maps need 2 <= c <= 256, got " + std::to_string(c));
    write_header(out, "P5", labels.width, labels.height, 255);
    for (auto l : labels.labels) {
        if (l >= c) throw ContractViolation("label " + std::to_string(l) + " exceeds cluster count");
        out.put(static_cast<char>(l * 255 / (c - 1)));
    }
    check_stream(out);
}

LabelMap labels_from_quantized(const ImageGrid& image, std::size_t c) {
    if (c < 2 || c > 256) throw ParameterError("label maps need 2 <= c <= 256, got " + std::to_string(c));
    LabelMap out{image.width, image.height, std::vector<Label>(image.size())};
    for (std::size_t i = 0; i < image.size(); ++i) {
        // ceil(v (c-1) / 255) undoes floor(l 255 / (c-1)) exactly for c <= 256
        out.labels[i] = static_cast<Label>((image.samples[i] * (c - 1) + 254) / 255);
    }
    return out;
}

LabelMap labels_from_gray_levels(const ImageGrid& image) {
    const std::set<std::uint16_t> levels(image.samples.begin(), image.samples.end());
    std::map<std::uint16_t, Label> rank;
    for (auto v : levels) rank.emplace(v, static_cast<Label>(rank.size()));
    LabelMap out{image.width, image.height, std::vector<Label>(image.size())};
    for (std::size_t i = 0; i < image.size(); ++i) out.labels[i] = rank.at(image.samples[i]);
    return out;
}

Palette::Palette(std::vector<Rgb> colors) : colors_(std::move(colors)) {
    const std::set<Rgb> unique(colors_.begin(), colors_.end());
    if (unique.size() != colors_.size()) throw ParameterError("palette entries must be pairwise distinct");
}

Palette Palette::make_default(std::size_t size) {
    static constexpr std::array<Rgb, 8> kBase = {{{0, 0, 0},
                                                   {230, 25, 75},
                                                   {60, 180, 75},
                                                   {255, 225, 25},
                                                   {0, 130, 200},
                                                   {245, 130, 48},
                                                   {145, 30, 180},
                                                   {255, 255, 255}}};
    std::vector<Rgb> colors;
    std::set<Rgb> used;
    for (std::size_t j = 0; colors.size() < size; ++j) {
        Rgb c = j < kBase.size() ? kBase[j]
                                 : Rgb{static_cast<std::uint8_t>(j * 37), static_cast<std::uint8_t>(j * 91 + 17),
                                       static_cast<std::uint8_t>(j * 173 + 61)};
        if (used.insert(c).second) colors.push_back(c);
    }
    return Palette(std::move(colors));
}

void save_pseudocolor(const LabelMap& labels, const Palette& palette, std::ostream& out) {
    for (auto l : labels.labels) {
        if (l >= palette.size()) {
            throw ParameterError("palette has " + std::to_string(palette.size()) + " entries but label " +
                                 std::to_string(l) + " occurs");
        }
    }
    write_header(out, "P6", labels.width, labels.height, 255);
    for (auto l : labels.labels) {
        const auto& rgb = palette[l];
        out.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
    check_stream(out);
}

std::string format_significant(double value, int digits) {
    if (!std::isfinite(value)) throw ContractViolation("cannot format a non-finite value");
    if (value == 0.0) return "0." + std::string(static_cast<std::size_t>(digits), '0');
    char buf[512];
    // let printf do the rounding so 9.99...e0 lands in the right decade
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, value);
    const int exponent = std::atoi(std::strchr(buf, 'e') + 1);
    const int decimals = std::max(0, digits - 1 - exponent);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::string format_decimal(double value) {
    if (!std::isfinite(value)) throw ContractViolation("cannot format a non-finite value");
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    return {buf, res.ptr};
}

void write_convergence_csv(const ObjectiveTrace& trace, std::ostream& out) {
    if (trace.empty()) throw ContractViolation("convergence trace is empty");
    out << "iteration,objective,max_delta\n";
    char delta[512];
    for (const auto& r : trace) {
        std::snprintf(delta, sizeof delta, "%.9f", r.max_delta);
        out << r.iteration << ',' << format_significant(r.objective, 9) << ',' << delta << '\n';
    }
    check_stream(out);
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sfcm
