// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fse/error.hpp"
#include "fse/image.hpp"

namespace fse {

enum class ImageFormat { Pgm, Png };

namespace detail {

// ---- PGM (binary P5, maxval 255) ----

inline bool pgm_next_token(const std::vector<std::uint8_t>& data,
                           std::size_t& pos, std::string& tok) {
  tok.clear();
  while (pos < data.size()) {
    const char c = static_cast<char>(data[pos]);
    if (c == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < data.size() &&
         !std::isspace(static_cast<unsigned char>(data[pos])) &&
         data[pos] != '#') {
    tok.push_back(static_cast<char>(data[pos]));
    ++pos;
  }
  return !tok.empty();
}

inline long pgm_parse_number(const std::string& tok) {
  if (tok.empty()) raise(errc::malformed_header, "missing PGM header field");
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      raise(errc::malformed_header, "non-numeric PGM header field '" + tok + "'");
  return std::stol(tok);
}

inline GrayImage load_pgm(const std::vector<std::uint8_t>& data) {
  if (data.size() < 2 || data[0] != 'P' || data[1] != '5')
    raise(errc::malformed_header, "not a binary PGM (P5) file");
  std::size_t pos = 2;
  std::string tok;
  if (!pgm_next_token(data, pos, tok))
    raise(errc::malformed_header, "PGM header ended before width");
  const long w = pgm_parse_number(tok);
  if (!pgm_next_token(data, pos, tok))
    raise(errc::malformed_header, "PGM header ended before height");
  const long h = pgm_parse_number(tok);
  if (!pgm_next_token(data, pos, tok))
    raise(errc::malformed_header, "PGM header ended before maxval");
  const long maxval = pgm_parse_number(tok);
  if (w <= 0 || h <= 0)
    raise(errc::malformed_header, "PGM dimensions must be positive");
  if (maxval > 255)
    raise(errc::unsupported_depth,
          "PGM maxval " + std::to_string(maxval) + " exceeds 8 bit");
  if (maxval <= 0) raise(errc::malformed_header, "PGM maxval must be positive");
  // Exactly one whitespace byte separates the header from the payload.
  if (pos >= data.size() ||
      !std::isspace(static_cast<unsigned char>(data[pos])))
    raise(errc::malformed_header, "missing separator after PGM maxval");
  ++pos;
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (data.size() - pos < need)
    raise(errc::truncated_payload,
          "PGM payload has " + std::to_string(data.size() - pos) +
              " of " + std::to_string(need) + " bytes");
  std::vector<double> samples(need);
  for (std::size_t i = 0; i < need; ++i) samples[i] = data[pos + i];
  return GrayImage::from_samples(static_cast<int>(w), static_cast<int>(h),
                                 std::move(samples));
}

inline void save_pgm(const GrayImage& img, std::vector<std::uint8_t>& out) {
  char header[64];
  const int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n",
                              img.width(), img.height());
  out.insert(out.end(), header, header + n);
  for (double v : img.samples()) {
    double q = std::floor(v + 0.5);  // round half up
    if (q < 0.0) q = 0.0;
    if (q > 255.0) q = 255.0;
    out.push_back(static_cast<std::uint8_t>(q));
  }
}

// ---- PNG via libpng ----

struct PngReadState {
  const std::uint8_t* data = nullptr;
  std::size_t size = 0;
  std::size_t pos = 0;
  bool truncated = false;
};

inline void png_read_callback(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->pos + len > st->size) {
    st->truncated = true;
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, st->data + st->pos, len);
  st->pos += len;
}

inline void png_write_callback(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

inline GrayImage load_png(const std::vector<std::uint8_t>& data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0)
    raise(errc::malformed_header, "not a PNG file");

  PngReadState state{data.data(), data.size(), 0, false};
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, errc::io_failure, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    raise(errc::io_failure, "png_create_info_struct failed");
  }

  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    const bool truncated = state.truncated;
    png_destroy_read_struct(&png, &info, nullptr);
    if (truncated) raise(errc::truncated_payload, "PNG stream ends early");
    raise(errc::malformed_header, "corrupt PNG stream");
  }

  png_set_read_fn(png, &state, &png_read_callback);
  png_read_info(png, info);

  const png_byte depth = png_get_bit_depth(png, info);
  if (depth > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(errc::unsupported_depth,
          "PNG bit depth " + std::to_string(depth) + " exceeds 8");
  }
  // Normalize everything 8-bit to gray8 or rgb8.
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(errc::malformed_header,
          "unsupported PNG channel layout (" + std::to_string(channels) + ")");
  }

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  pixels.resize(stride * height);
  rows.resize(height);
  for (int r = 0; r < height; ++r) rows[r] = pixels.data() + stride * r;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> samples(static_cast<std::size_t>(width) * height);
  if (channels == 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = pixels[i];
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::uint8_t* p = pixels.data() + 3 * i;
      samples[i] = to_luminance(p[0], p[1], p[2]);
    }
  }
  return GrayImage::from_samples(width, height, std::move(samples));
}

inline void save_png(const GrayImage& img, std::vector<std::uint8_t>& out) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, errc::io_failure, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    raise(errc::io_failure, "png_create_info_struct failed");
  }

  std::vector<std::uint8_t> quantized(img.pixel_count());
  std::vector<png_bytep> rows(img.height());
  for (std::size_t i = 0; i < quantized.size(); ++i) {
    double q = std::floor(img.samples()[i] + 0.5);
    if (q < 0.0) q = 0.0;
    if (q > 255.0) q = 255.0;
    quantized[i] = static_cast<std::uint8_t>(q);
  }
  for (int r = 0; r < img.height(); ++r)
    rows[r] = quantized.data() + static_cast<std::size_t>(r) * img.width();

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(errc::io_failure, "PNG encode failed");
  }

  png_set_write_fn(png, &out, &png_write_callback, nullptr);
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace detail

inline GrayImage load_image(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0)
    return detail::load_png(bytes);
  return detail::load_pgm(bytes);
}

inline GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_failure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_image(bytes);
}

inline std::vector<std::uint8_t> save_image(const GrayImage& img,
                                            ImageFormat format) {
  std::vector<std::uint8_t> out;
  if (format == ImageFormat::Pgm)
    detail::save_pgm(img, out);
  else
    detail::save_png(img, out);
  return out;
}

inline ImageFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return ImageFormat::Png;
  return ImageFormat::Pgm;
}

inline void save_image(const GrayImage& img, const std::filesystem::path& path) {
  const auto bytes = save_image(img, format_for_path(path));
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_failure, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  require(out.good(), errc::io_failure, "write failed for " + path.string());
}

// Mask files are ordinary PGM/PNG images where sample > 0 means lost.
inline LossMask mask_from_image(const GrayImage& img) {
  LossMask mask(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      if (img.at(r, c) > 0.0) mask.set_lost(r, c);
  return mask;
}

inline LossMask load_mask(const std::filesystem::path& path) {
  return mask_from_image(load_image(path));
}

inline GrayImage mask_to_image(const LossMask& mask) {
  GrayImage img(mask.width(), mask.height(), 0.0);
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      if (mask.is_lost(r, c)) img.at(r, c) = 255.0;
  return img;
}

inline void save_mask(const LossMask& mask, const std::filesystem::path& path) {
  save_image(mask_to_image(mask), path);
}

}  // namespace fse
