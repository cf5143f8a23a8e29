#pragma once

#include <png.h>

#include <string>
#include <vector>

#include "orient/coarse.hpp"

namespace orient {

/// Reads an RGB raster; alpha and palette images are converted.
inline TorsoCrop read_png(const std::string& path, const TorsoImagePoints& torso = {}) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str()))
    throw Error(ErrorKind::Io, path + ": " + img.message);
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error(ErrorKind::Io, path + ": " + img.message);
  }
  TorsoCrop crop;
  crop.width = static_cast<int>(img.width);
  crop.height = static_cast<int>(img.height);
  crop.pixels.resize(static_cast<std::size_t>(crop.width) * static_cast<std::size_t>(crop.height));
  for (std::size_t i = 0; i < crop.pixels.size(); ++i) crop.pixels[i] = {buf[3 * i], buf[3 * i + 1], buf[3 * i + 2]};
  crop.torso = torso;
  return crop;
}

inline void write_png(const std::string& path, const TorsoCrop& crop) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(crop.width);
  img.height = static_cast<png_uint_32>(crop.height);
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf;
  buf.reserve(crop.pixels.size() * 3);
  for (const auto& p : crop.pixels) {
    buf.push_back(p.r);
    buf.push_back(p.g);
    buf.push_back(p.b);
  }
  if (!png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr))
    throw Error(ErrorKind::Io, path + ": " + img.message);
}

}  // namespace orient
