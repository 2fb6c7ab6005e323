#include "core/codec.hpp"

#include "core/error.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <jpeglib.h>
#include <jerror.h>
#include <png.h>

namespace illumest {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

// ---------------------------------------------------------------------------
// PNG

struct PngIo {
    const std::uint8_t* data = nullptr;
    std::size_t size = 0;
    std::size_t pos = 0;
    std::vector<std::uint8_t>* sink = nullptr;
    char message[256] = {};
};

void png_on_error(png_structp png, png_const_charp msg)
{
    auto* io = static_cast<PngIo*>(png_get_error_ptr(png));
    std::snprintf(io->message, sizeof io->message, "%s", msg);
    png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

void png_read_bytes(png_structp png, png_bytep out, png_size_t n)
{
    auto* io = static_cast<PngIo*>(png_get_io_ptr(png));
    if (n > io->size - io->pos)
        png_error(png, "truncated PNG stream");
    std::memcpy(out, io->data + io->pos, n);
    io->pos += n;
}

void png_write_bytes(png_structp png, png_bytep in, png_size_t n)
{
    auto* io = static_cast<PngIo*>(png_get_io_ptr(png));
    io->sink->insert(io->sink->end(), in, in + n);
}

void png_flush_noop(png_structp) {}

RgbImage decode_png(std::span<const std::uint8_t> bytes)
{
    PngIo io;
    io.data = bytes.data();
    io.size = bytes.size();

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &io, png_on_error, png_on_warning);
    if (!png)
        throw Error(ErrorCode::Decode, "PNG: cannot allocate decoder");
    png_infop info = png_create_info_struct(png);

    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;

    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        throw Error(ErrorCode::Decode, std::string("PNG: ") + io.message);
    }

    png_set_read_fn(png, &io, png_read_bytes);
    png_read_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int in_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && in_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    const int depth = png_get_bit_depth(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);

    raw.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = raw.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels != 1 && channels != 3)
        throw Error(ErrorCode::Decode, "PNG: unsupported channel layout");
    if (width > 0x7FFFFFFF || height > 0x7FFFFFFF)
        throw Error(ErrorCode::Decode, "PNG: image too large");

    const std::size_t bytes_per_sample = depth == 16 ? 2 : 1;
    auto sample = [&](const std::uint8_t* p) -> std::uint8_t {
        if (bytes_per_sample == 2)
            return static_cast<std::uint8_t>(((p[0] << 8) | p[1]) / 257);
        return p[0];
    };

    std::vector<Rgb> pixels;
    pixels.reserve(static_cast<std::size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
        const std::uint8_t* p = rows[y];
        for (png_uint_32 x = 0; x < width; ++x) {
            if (channels == 1) {
                const std::uint8_t v = sample(p);
                pixels.push_back({v, v, v});
            } else {
                pixels.push_back({sample(p), sample(p + bytes_per_sample),
                                  sample(p + 2 * bytes_per_sample)});
            }
            p += channels * bytes_per_sample;
        }
    }
    return RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> encode_png_raw(int width, int height, int color_type,
                                         const std::uint8_t* data, std::size_t row_bytes)
{
    std::vector<std::uint8_t> out;
    PngIo io;
    io.sink = &out;

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &io, png_on_error, png_on_warning);
    if (!png)
        throw Error(ErrorCode::Io, "PNG: cannot allocate encoder");
    png_infop info = png_create_info_struct(png);

    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        throw Error(ErrorCode::Io, std::string("PNG: ") + io.message);
    }

    png_set_write_fn(png, &io, png_write_bytes, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(data + static_cast<std::size_t>(y) * row_bytes);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

// ---------------------------------------------------------------------------
// JPEG

struct JpegErr {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX] = {};
};

void jpeg_on_error(j_common_ptr cinfo)
{
    auto* err = reinterpret_cast<JpegErr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

void jpeg_on_message(j_common_ptr cinfo, int level)
{
    // A premature end of data is only a warning to libjpeg, which then pads
    // the image with gray. Treat it as a decode failure.
    if (level < 0 && cinfo->err->msg_code == JWRN_JPEG_EOF)
        jpeg_on_error(cinfo);
}

RgbImage decode_jpeg(std::span<const std::uint8_t> bytes)
{
    jpeg_decompress_struct cinfo;
    JpegErr err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_on_error;
    err.mgr.emit_message = jpeg_on_message;

    std::vector<std::uint8_t> raw;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorCode::Decode, std::string("JPEG: ") + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    if (cinfo.output_components != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorCode::Decode, "JPEG: unsupported color space");
    }
    const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) * 3;
    raw.resize(stride * cinfo.output_height);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = raw.data() + stride * cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    jpeg_destroy_decompress(&cinfo);

    std::vector<Rgb> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = {raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
    return RgbImage(width, height, std::move(pixels));
}

} // namespace

RgbImage decode_image(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() >= sizeof kPngSignature &&
        std::memcmp(bytes.data(), kPngSignature, sizeof kPngSignature) == 0)
        return decode_png(bytes);
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
        return decode_jpeg(bytes);
    throw Error(ErrorCode::Decode, "unrecognised image format (expected PNG or JPEG)");
}

std::vector<std::uint8_t> encode_png(const GrayImage& img)
{
    return encode_png_raw(img.width(), img.height(), PNG_COLOR_TYPE_GRAY, img.pixels().data(),
                          static_cast<std::size_t>(img.width()));
}

std::vector<std::uint8_t> encode_png(const RgbImage& img)
{
    static_assert(sizeof(Rgb) == 3);
    return encode_png_raw(img.width(), img.height(), PNG_COLOR_TYPE_RGB,
                          reinterpret_cast<const std::uint8_t*>(img.pixels().data()),
                          static_cast<std::size_t>(img.width()) * 3);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error(ErrorCode::Io, "read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::Io, "cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::Io, "write failed: " + path.string());
}

} // namespace illumest
