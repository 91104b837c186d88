// Copyright 2026 The fieldseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fieldseg/png_io.hpp"

#include <png.h>

#include <cstring>
#include <vector>

#include "fieldseg/errors.hpp"

namespace fieldseg {

namespace {

struct PngReader {
    png_image image;

    explicit PngReader(const std::string& path) {
        std::memset(&image, 0, sizeof image);
        image.version = PNG_IMAGE_VERSION;
        if (!png_image_begin_read_from_file(&image, path.c_str())) {
            throw InputError("cannot read PNG '" + path + "': " + image.message);
        }
    }
    ~PngReader() { png_image_free(&image); }

    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;

    std::vector<std::uint8_t> finish(png_uint_32 format, const std::string& path) {
        image.format = format;
        std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
        if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
            throw InputError("cannot decode PNG '" + path + "': " + image.message);
        }
        return buf;
    }
};

void write_png(const std::string& path, int width, int height, png_uint_32 format, const std::uint8_t* data) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, data, 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw InputError("cannot write PNG '" + path + "': " + msg);
    }
}

}  // namespace

RgbImage read_png_rgb(const std::string& path) {
    PngReader reader(path);
    const int w = static_cast<int>(reader.image.width);
    const int h = static_cast<int>(reader.image.height);
    return RgbImage(w, h, reader.finish(PNG_FORMAT_RGB, path));
}

GrayImage read_png_gray(const std::string& path) {
    PngReader reader(path);
    const png_uint_32 fmt = reader.image.format;
    if ((fmt & PNG_FORMAT_FLAG_COLOR) || (fmt & PNG_FORMAT_FLAG_ALPHA)) {
        throw InputError("PNG '" + path + "' must be single-channel grayscale");
    }
    if (fmt & PNG_FORMAT_FLAG_LINEAR) {
        throw InputError("PNG '" + path + "' must be 8-bit");
    }
    const int w = static_cast<int>(reader.image.width);
    const int h = static_cast<int>(reader.image.height);
    return GrayImage(w, h, reader.finish(PNG_FORMAT_GRAY, path));
}

BinaryMask read_png_mask(const std::string& path) {
    const GrayImage g = read_png_gray(path);
    BinaryMask m(g.width(), g.height());
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) m.set(x, y, g.at(x, y) >= 128);
    }
    return m;
}

void write_png_rgb(const std::string& path, const RgbImage& img) {
    write_png(path, img.width(), img.height(), PNG_FORMAT_RGB, img.data().data());
}

void write_png_gray(const std::string& path, const GrayImage& img) {
    write_png(path, img.width(), img.height(), PNG_FORMAT_GRAY, img.data().data());
}

}  // namespace fieldseg
