// Copyright 2026 The memprop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <png.h>

#include <array>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>

#include "memprop/errors.hpp"
#include "memprop/image.hpp"
#include "memprop/io.hpp"

namespace memprop {

int IndexMask::max_index() const {
  int m = 0;
  for (int v : data) m = std::max(m, v);
  return m;
}

namespace {

// PASCAL VOC / DAVIS palette: bits of the index interleaved into r, g, b.
std::array<png_color, 256> davis_palette() {
  std::array<png_color, 256> pal{};
  for (int i = 0; i < 256; ++i) {
    int r = 0, g = 0, b = 0, cid = i;
    for (int j = 0; j < 8; ++j) {
      r |= ((cid >> 0) & 1) << (7 - j);
      g |= ((cid >> 1) & 1) << (7 - j);
      b |= ((cid >> 2) & 1) << (7 - j);
      cid >>= 3;
    }
    pal[i] = {static_cast<png_byte>(r), static_cast<png_byte>(g), static_cast<png_byte>(b)};
  }
  return pal;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int color_type = 0;
  int bit_depth = 0;
};

// The two setjmp-guarded helpers below keep only trivially destructible
// locals so that a longjmp out of libpng skips no destructors.
bool read_header(png_structp png, png_infop info, std::FILE* fp, PngHeader* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_read_info(png, info);
  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->color_type = png_get_color_type(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  if (out->bit_depth < 8) png_set_packing(png);
  if (out->bit_depth == 16) png_set_strip_16(png);
  if (out->color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  return true;
}

bool read_rows(png_structp png, png_infop info, png_bytep* rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, info);
  return true;
}

}  // namespace

RgbImage read_rgb_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out(static_cast<int>(image.height), static_cast<int>(image.width));
  if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + message);
  }
  return out;
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& img) {
  if (!img.valid()) throw ValidationError("cannot write an empty RGB image");
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.data.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_gray_png(const std::filesystem::path& path, int height, int width,
                    const std::vector<unsigned char>& gray) {
  if (gray.size() != static_cast<std::size_t>(height) * width || height < 1 || width < 1) {
    throw ValidationError("gray image size does not match its dimensions");
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, gray.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_index_png(const std::filesystem::path& path, const IndexMask& mask) {
  if (mask.height < 1 || mask.width < 1 ||
      mask.data.size() != static_cast<std::size_t>(mask.height) * mask.width) {
    throw ValidationError("cannot write an empty mask");
  }
  std::vector<png_byte> indices(mask.data.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (mask.data[i] < 0 || mask.data[i] > 255) {
      throw ValidationError("mask index outside 0..255");
    }
    indices[i] = static_cast<png_byte>(mask.data[i]);
  }
  const auto pal = davis_palette();
  std::array<png_byte, 3 * 256> colormap{};
  for (int i = 0; i < 256; ++i) {
    colormap[3 * i] = pal[i].red;
    colormap[3 * i + 1] = pal[i].green;
    colormap[3 * i + 2] = pal[i].blue;
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(mask.width);
  image.height = static_cast<png_uint_32>(mask.height);
  image.format = PNG_FORMAT_RGB_COLORMAP;
  image.colormap_entries = 256;
  if (!png_image_write_to_file(&image, path.c_str(), 0, indices.data(), 0,
                               colormap.data())) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

IndexMask read_index_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialization failed");
  }
  PngHeader header;
  if (!read_header(png, info, fp.get(), &header)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot decode PNG header of " + path.string());
  }
  const int channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  std::vector<png_byte> buffer(stride * header.height);
  std::vector<png_bytep> rows(header.height);
  for (png_uint_32 y = 0; y < header.height; ++y) rows[y] = buffer.data() + y * stride;
  if (!read_rows(png, info, rows.data())) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot decode PNG " + path.string());
  }
  png_destroy_read_struct(&png, &info, nullptr);

  IndexMask mask(static_cast<int>(header.height), static_cast<int>(header.width));
  const bool color = (header.color_type & PNG_COLOR_MASK_COLOR) &&
                     header.color_type != PNG_COLOR_TYPE_PALETTE;
  std::map<std::array<int, 3>, int> lookup;
  if (color) {
    const auto pal = davis_palette();
    for (int i = 255; i >= 0; --i) lookup[{pal[i].red, pal[i].green, pal[i].blue}] = i;
  }
  for (png_uint_32 y = 0; y < header.height; ++y) {
    for (png_uint_32 x = 0; x < header.width; ++x) {
      const png_byte* px = rows[y] + static_cast<std::size_t>(x) * channels;
      int value = px[0];
      if (color) {
        const auto it = lookup.find({px[0], px[1], px[2]});
        if (it == lookup.end()) {
          throw IoError("RGB mask " + path.string() + " uses a color outside the palette");
        }
        value = it->second;
      }
      mask.at(static_cast<int>(y), static_cast<int>(x)) = value;
    }
  }
  return mask;
}

}  // namespace memprop
