#include "augens/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "augens/error.hpp"

namespace augens {

namespace fs = std::filesystem;

std::uint8_t quantize_u8(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

namespace {

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return ext;
}

Image from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t h, std::size_t w, std::size_t c) {
    Image img(h, w, c);
    auto d = img.data();
    for (std::size_t i = 0; i < bytes.size(); ++i) d[i] = bytes[i] / 255.0;
    return img;
}

std::vector<std::uint8_t> to_bytes(const Image& img) {
    std::vector<std::uint8_t> bytes(img.data().size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize_u8(img.data()[i]);
    return bytes;
}

// --- PNG (libpng simplified API) ---

Image load_png(const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        fail(ErrorCode::io, "cannot read PNG " + path.string() + ": " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const std::size_t channels = color ? 3 : 1;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        fail(ErrorCode::io, "cannot decode PNG " + path.string() + ": " + msg);
    }
    return from_bytes(buffer, image.height, image.width, channels);
}

void save_png(const Image& img, const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const auto bytes = to_bytes(img);
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
        fail(ErrorCode::io, "cannot write PNG " + path.string() + ": " + image.message);
    }
}

// --- BMP (uncompressed 8/24/32-bit) ---

std::uint32_t get_u32(const std::uint8_t* p) {
    return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
void put_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}
void put_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(static_cast<std::uint8_t>(x));
    v.push_back(static_cast<std::uint8_t>(x >> 8));
}

Image load_bmp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open " + path.string());
    std::vector<std::uint8_t> file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(file.size() >= 54 && file[0] == 'B' && file[1] == 'M', ErrorCode::io, "not a BMP file: " + path.string());
    const std::uint32_t offset = get_u32(&file[10]);
    const std::uint32_t header_size = get_u32(&file[14]);
    const auto width = static_cast<std::int32_t>(get_u32(&file[18]));
    const auto raw_height = static_cast<std::int32_t>(get_u32(&file[22]));
    const std::uint16_t bpp = get_u16(&file[28]);
    const std::uint32_t compression = get_u32(&file[30]);
    require(compression == 0 && (bpp == 8 || bpp == 24 || bpp == 32), ErrorCode::io,
            "unsupported BMP encoding: " + path.string());
    require(width > 0 && raw_height != 0, ErrorCode::io, "bad BMP dimensions: " + path.string());
    const bool bottom_up = raw_height > 0;
    const std::size_t w = static_cast<std::size_t>(width);
    const std::size_t h = static_cast<std::size_t>(bottom_up ? raw_height : -raw_height);
    const std::size_t stride = ((w * bpp + 31) / 32) * 4;
    require(offset + stride * h <= file.size(), ErrorCode::io, "truncated BMP: " + path.string());

    std::vector<std::array<std::uint8_t, 3>> palette;
    bool gray_palette = true;
    if (bpp == 8) {
        std::uint32_t colors = get_u32(&file[46]);
        if (colors == 0) colors = 256;
        const std::size_t base = 14 + header_size;
        require(base + colors * 4 <= offset, ErrorCode::io, "bad BMP palette: " + path.string());
        for (std::uint32_t i = 0; i < colors; ++i) {
            const std::uint8_t* e = &file[base + 4 * i];
            palette.push_back({e[2], e[1], e[0]});
            gray_palette = gray_palette && e[0] == e[1] && e[1] == e[2];
        }
    }
    const std::size_t channels = (bpp == 8 && gray_palette) ? 1 : 3;
    std::vector<std::uint8_t> bytes(h * w * channels);
    for (std::size_t y = 0; y < h; ++y) {
        const std::size_t src_row = bottom_up ? h - 1 - y : y;
        const std::uint8_t* row = &file[offset + src_row * stride];
        for (std::size_t x = 0; x < w; ++x) {
            std::uint8_t* dst = &bytes[(y * w + x) * channels];
            if (bpp == 8) {
                const std::uint8_t idx = row[x];
                require(idx < palette.size(), ErrorCode::io, "BMP palette index out of range");
                if (channels == 1) {
                    dst[0] = palette[idx][0];
                } else {
                    std::copy(palette[idx].begin(), palette[idx].end(), dst);
                }
            } else {
                const std::uint8_t* px = row + x * (bpp / 8);
                dst[0] = px[2];
                dst[1] = px[1];
                dst[2] = px[0];
            }
        }
    }
    return from_bytes(bytes, h, w, channels);
}

void save_bmp(const Image& img, const fs::path& path) {
    const std::size_t w = img.width(), h = img.height();
    const bool gray = img.channels() == 1;
    const std::uint16_t bpp = gray ? 8 : 24;
    const std::size_t stride = ((w * bpp + 31) / 32) * 4;
    const std::uint32_t palette_bytes = gray ? 256 * 4 : 0;
    const std::uint32_t offset = 54 + palette_bytes;
    const auto image_bytes = static_cast<std::uint32_t>(stride * h);

    std::vector<std::uint8_t> out;
    out.reserve(offset + image_bytes);
    out.push_back('B');
    out.push_back('M');
    put_u32(out, offset + image_bytes);
    put_u32(out, 0);
    put_u32(out, offset);
    put_u32(out, 40);
    put_u32(out, static_cast<std::uint32_t>(w));
    put_u32(out, static_cast<std::uint32_t>(h));
    put_u16(out, 1);
    put_u16(out, bpp);
    put_u32(out, 0);
    put_u32(out, image_bytes);
    put_u32(out, 2835);
    put_u32(out, 2835);
    put_u32(out, gray ? 256 : 0);
    put_u32(out, 0);
    if (gray) {
        for (std::uint32_t i = 0; i < 256; ++i) {
            const auto v = static_cast<std::uint8_t>(i);
            out.insert(out.end(), {v, v, v, 0});
        }
    }
    const auto bytes = to_bytes(img);
    for (std::size_t y = 0; y < h; ++y) {
        const std::size_t src_row = h - 1 - y;
        std::size_t written = 0;
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint8_t* px = &bytes[(src_row * w + x) * img.channels()];
            if (gray) {
                out.push_back(px[0]);
                written += 1;
            } else {
                out.insert(out.end(), {px[2], px[1], px[0]});
                written += 3;
            }
        }
        out.insert(out.end(), stride - written, 0);
    }
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorCode::io, "cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    require(static_cast<bool>(f), ErrorCode::io, "write failed: " + path.string());
}

}  // namespace

Image load_image(const fs::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return load_png(path);
    if (ext == ".bmp") return load_bmp(path);
    fail(ErrorCode::io, "unsupported image extension: " + path.string());
}

void save_image(const Image& img, const fs::path& path) {
    validate_image(img);
    const std::string ext = lower_extension(path);
    if (ext == ".png") return save_png(img, path);
    if (ext == ".bmp") return save_bmp(img, path);
    fail(ErrorCode::io, "unsupported image extension: " + path.string());
}

}  // namespace augens
