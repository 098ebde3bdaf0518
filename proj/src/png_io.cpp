#include "segkit/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>

namespace segkit {

namespace {

struct ByteReader {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<ByteReader*>(png_get_io_ptr(png));
  if (reader->offset + count > reader->bytes.size()) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, reader->bytes.data() + reader->offset, count);
  reader->offset += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void flush_callback(png_structp) {}

[[noreturn]] void error_callback(png_structp png, png_const_charp msg) {
  // Stash the message for the catch site, then unwind via libpng's longjmp.
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err != nullptr) *err = msg;
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

class PngWriter {
 public:
  PngWriter() {
    png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error_, error_callback,
                                   warning_callback);
    if (png_ != nullptr) info_ = png_create_info_struct(png_);
    if (png_ == nullptr || info_ == nullptr) throw Error("libpng allocation failed");
  }
  ~PngWriter() { png_destroy_write_struct(&png_, &info_); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;

  png_structp png() { return png_; }
  png_infop info() { return info_; }
  const std::string& error() const { return error_; }

 private:
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
  std::string error_;
};

class PngReader {
 public:
  PngReader() {
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_, error_callback,
                                  warning_callback);
    if (png_ != nullptr) info_ = png_create_info_struct(png_);
    if (png_ == nullptr || info_ == nullptr) throw Error("libpng allocation failed");
  }
  ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  png_structp png() { return png_; }
  png_infop info() { return info_; }
  const std::string& error() const { return error_; }

 private:
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
  std::string error_;
};

std::vector<png_bytep> row_pointers(std::uint8_t* data, int height, std::size_t stride) {
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = data + y * stride;
  return rows;
}

}  // namespace

std::vector<std::uint8_t> encode_label_png(const LabelImage& label) {
  if (label.width <= 0 || label.height <= 0 ||
      label.pixels() != static_cast<std::size_t>(label.width) * label.height) {
    throw Error("label image has inconsistent dimensions");
  }
  if (!valid_label_values(label)) {
    throw Error("label image carries values outside {0..20, 255}");
  }

  PngWriter w;
  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(w.png()))) {
    throw Error("PNG encode failed: " + w.error());
  }
  png_set_write_fn(w.png(), &out, write_callback, flush_callback);
  png_set_IHDR(w.png(), w.info(), static_cast<png_uint_32>(label.width),
               static_cast<png_uint_32>(label.height), 8, PNG_COLOR_TYPE_PALETTE,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

  png_color palette[256];
  for (int i = 0; i < 256; ++i) {
    Rgb8 c = voc_colormap(i);
    palette[i] = {c[0], c[1], c[2]};
  }
  png_set_PLTE(w.png(), w.info(), palette, 256);
  png_write_info(w.png(), w.info());

  // Rows index const data; libpng does not modify them on write.
  auto rows = row_pointers(const_cast<std::uint8_t*>(label.data.data()), label.height,
                           static_cast<std::size_t>(label.width));
  png_write_image(w.png(), rows.data());
  png_write_end(w.png(), w.info());
  return out;
}

LabelImage decode_label_png(std::span<const std::uint8_t> bytes) {
  PngReader r;
  ByteReader reader{bytes};
  if (setjmp(png_jmpbuf(r.png()))) {
    throw Error("PNG decode failed: " + r.error());
  }
  png_set_read_fn(r.png(), &reader, read_callback);
  png_read_info(r.png(), r.info());

  if (png_get_color_type(r.png(), r.info()) != PNG_COLOR_TYPE_PALETTE) {
    throw Error("label PNG must be an indexed-palette image");
  }
  // Sub-byte palette depths unpack to one index per byte; palette stays indices.
  png_set_packing(r.png());
  png_read_update_info(r.png(), r.info());

  LabelImage label(static_cast<int>(png_get_image_width(r.png(), r.info())),
                   static_cast<int>(png_get_image_height(r.png(), r.info())));
  auto rows = row_pointers(label.data.data(), label.height, static_cast<std::size_t>(label.width));
  png_read_image(r.png(), rows.data());
  png_read_end(r.png(), nullptr);

  if (!valid_label_values(label)) {
    throw Error("label PNG carries indices outside {0..20, 255}");
  }
  return label;
}

std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.data.size() != 3 * static_cast<std::size_t>(image.width) * image.height) {
    throw Error("rgb image has inconsistent dimensions");
  }
  PngWriter w;
  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(w.png()))) {
    throw Error("PNG encode failed: " + w.error());
  }
  png_set_write_fn(w.png(), &out, write_callback, flush_callback);
  png_set_IHDR(w.png(), w.info(), static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png(), w.info());
  auto rows = row_pointers(const_cast<std::uint8_t*>(image.data.data()), image.height,
                           3 * static_cast<std::size_t>(image.width));
  png_write_image(w.png(), rows.data());
  png_write_end(w.png(), w.info());
  return out;
}

RgbImage decode_rgb_png(std::span<const std::uint8_t> bytes) {
  PngReader r;
  ByteReader reader{bytes};
  if (setjmp(png_jmpbuf(r.png()))) {
    throw Error("PNG decode failed: " + r.error());
  }
  png_set_read_fn(r.png(), &reader, read_callback);
  png_read_info(r.png(), r.info());

  png_set_palette_to_rgb(r.png());
  png_set_expand_gray_1_2_4_to_8(r.png());
  png_set_gray_to_rgb(r.png());
  png_set_strip_16(r.png());
  png_set_strip_alpha(r.png());
  png_read_update_info(r.png(), r.info());

  if (png_get_channels(r.png(), r.info()) != 3 || png_get_bit_depth(r.png(), r.info()) != 8) {
    throw Error("PNG does not reduce to 8-bit RGB");
  }
  RgbImage image(static_cast<int>(png_get_image_width(r.png(), r.info())),
                 static_cast<int>(png_get_image_height(r.png(), r.info())));
  auto rows =
      row_pointers(image.data.data(), image.height, 3 * static_cast<std::size_t>(image.width));
  png_read_image(r.png(), rows.data());
  png_read_end(r.png(), nullptr);
  return image;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

LabelImage load_label_png(const std::filesystem::path& path) {
  try {
    return decode_label_png(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_label_png(const std::filesystem::path& path, const LabelImage& label) {
  write_file(path, encode_label_png(label));
}

RgbImage load_rgb_png(const std::filesystem::path& path) {
  try {
    return decode_rgb_png(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
  write_file(path, encode_rgb_png(image));
}

}  // namespace segkit
