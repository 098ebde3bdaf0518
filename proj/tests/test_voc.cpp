#include "segkit/png_io.hpp"
#include "segkit/rng.hpp"
#include "segkit/voc.hpp"

#include <zlib.h>

#include <doctest.h>

#include <cstring>

#include "test_util.hpp"

using namespace segkit;

TEST_CASE("voc_colormap known entries") {
  CHECK(voc_colormap(0) == Rgb8{0, 0, 0});
  CHECK(voc_colormap(1) == Rgb8{128, 0, 0});
  CHECK(voc_colormap(15) == Rgb8{192, 128, 128});
  CHECK(voc_colormap(255) == Rgb8{224, 224, 192});
  CHECK_THROWS_AS(voc_colormap(-1), Error);
  CHECK_THROWS_AS(voc_colormap(256), Error);
}

TEST_CASE("voc_colormap matches an independent bit trace") {
  // Re-derive every entry bit by bit, structured differently from the library.
  for (int index = 0; index <= 255; ++index) {
    int r = 0, g = 0, b = 0;
    for (int bit = 0; bit < 8; ++bit) {
      const int chunk = (index >> (3 * bit)) & 7;
      r += ((chunk & 1) != 0) ? (1 << (7 - bit)) : 0;
      g += ((chunk & 2) != 0) ? (1 << (7 - bit)) : 0;
      b += ((chunk & 4) != 0) ? (1 << (7 - bit)) : 0;
    }
    const Rgb8 got = voc_colormap(index);
    CHECK(got[0] == r);
    CHECK(got[1] == g);
    CHECK(got[2] == b);
  }
}

TEST_CASE("taxonomy shape and index stability") {
  const ClassTaxonomy& tax = ClassTaxonomy::pascal_voc();
  CHECK(tax.size() == 21);
  CHECK(tax.name(0) == "background");
  CHECK(tax.name(15) == "person");
  for (int c = 0; c < tax.size(); ++c) {
    CHECK(tax.index_of(tax.name(c)) == c);  // name -> index -> name identity
  }
  CHECK_THROWS_AS(tax.index_of("zebra"), Error);
  CHECK_THROWS_AS(tax.name(21), Error);
}

TEST_CASE("taxonomy constructor rejects bad inputs") {
  std::vector<std::string> names = ClassTaxonomy::pascal_voc().names();
  CHECK_NOTHROW(ClassTaxonomy(names));

  auto dup = names;
  dup[5] = dup[6];
  CHECK_THROWS_AS(ClassTaxonomy(dup), Error);

  auto short_list = names;
  short_list.pop_back();
  CHECK_THROWS_AS(ClassTaxonomy(short_list), Error);

  auto no_bg = names;
  std::swap(no_bg[0], no_bg[1]);
  CHECK_THROWS_AS(ClassTaxonomy(no_bg), Error);
}

TEST_CASE("label png round trips") {
  LabelImage one(1, 1, 0);
  CHECK(decode_label_png(encode_label_png(one)) == one);

  LabelImage two(2, 1);
  two.data = {7, 255};
  CHECK(decode_label_png(encode_label_png(two)) == two);
}

TEST_CASE("label png round trips on random images") {
  SplitMix64 rng(0xC0FFEE);
  for (int i = 0; i < 60; ++i) {
    const LabelImage label = testing::random_label_image(rng);
    CHECK(decode_label_png(encode_label_png(label)) == label);
  }
}

namespace {

// Minimal chunk walk, independent of libpng.
std::vector<std::uint8_t> find_chunk(const std::vector<std::uint8_t>& png, const char* type) {
  std::size_t pos = 8;  // signature
  while (pos + 8 <= png.size()) {
    const std::size_t len = (std::size_t(png[pos]) << 24) | (std::size_t(png[pos + 1]) << 16) |
                            (std::size_t(png[pos + 2]) << 8) | std::size_t(png[pos + 3]);
    if (std::memcmp(png.data() + pos + 4, type, 4) == 0) {
      return {png.begin() + static_cast<long>(pos) + 8,
              png.begin() + static_cast<long>(pos) + 8 + static_cast<long>(len)};
    }
    pos += 12 + len;
  }
  return {};
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char* type,
                  const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  std::vector<std::uint8_t> body(type, type + 4);
  body.insert(body.end(), data.begin(), data.end());
  out.insert(out.end(), body.begin(), body.end());
  put_u32(out, static_cast<std::uint32_t>(crc32(0, body.data(), static_cast<uInt>(body.size()))));
}

// Hand-rolled 1x1 indexed PNG carrying a single palette index; exercises the
// decoder against bytes produced by a foreign encoder.
std::vector<std::uint8_t> tiny_indexed_png(std::uint8_t index) {
  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, 1);
  put_u32(ihdr, 1);
  ihdr.insert(ihdr.end(), {8, 3, 0, 0, 0});  // bit depth 8, palette color type
  append_chunk(png, "IHDR", ihdr);

  std::vector<std::uint8_t> plte(768, 0);
  append_chunk(png, "PLTE", plte);

  const std::uint8_t raw[2] = {0, index};  // filter byte + one pixel
  std::vector<std::uint8_t> idat(compressBound(2));
  uLongf len = static_cast<uLongf>(idat.size());
  REQUIRE(compress(idat.data(), &len, raw, 2) == Z_OK);
  idat.resize(len);
  append_chunk(png, "IDAT", idat);
  append_chunk(png, "IEND", {});
  return png;
}

}  // namespace

TEST_CASE("label png palette is the voc colormap, bit for bit") {
  LabelImage label(3, 2, 0);
  label.data = {0, 1, 15, 20, 255, 5};
  const auto png = encode_label_png(label);
  const auto plte = find_chunk(png, "PLTE");
  REQUIRE(plte.size() == 768);  // 256 palette entries
  for (int i = 0; i < 256; ++i) {
    const Rgb8 expected = voc_colormap(i);
    CHECK(plte[static_cast<std::size_t>(3 * i)] == expected[0]);
    CHECK(plte[static_cast<std::size_t>(3 * i + 1)] == expected[1]);
    CHECK(plte[static_cast<std::size_t>(3 * i + 2)] == expected[2]);
  }
}

TEST_CASE("label decode accepts foreign encoders and rejects bad indices") {
  const LabelImage ok = decode_label_png(tiny_indexed_png(20));
  CHECK(ok.width == 1);
  CHECK(ok.data[0] == 20);
  CHECK(decode_label_png(tiny_indexed_png(255)).data[0] == 255);
  CHECK_THROWS_AS(decode_label_png(tiny_indexed_png(21)), Error);
  CHECK_THROWS_AS(decode_label_png(tiny_indexed_png(254)), Error);
}

TEST_CASE("label codec error paths") {
  LabelImage bad(1, 1, 0);
  bad.data[0] = 30;  // outside {0..20, 255}
  CHECK_THROWS_AS(encode_label_png(bad), Error);

  const std::vector<std::uint8_t> garbage = {1, 2, 3, 4};
  CHECK_THROWS_AS(decode_label_png(garbage), Error);

  RgbImage rgb(2, 2);
  CHECK_THROWS_AS(decode_label_png(encode_rgb_png(rgb)), Error);  // not palette-typed

  auto truncated = encode_label_png(LabelImage(4, 4, 3));
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS(decode_label_png(truncated), Error);
}

TEST_CASE("rgb png round trips") {
  SplitMix64 rng(77);
  const RgbImage image = testing::random_rgb_image(rng, 9, 5);
  CHECK(decode_rgb_png(encode_rgb_png(image)) == image);
}

TEST_CASE("rgb decode expands palette images to color") {
  LabelImage label(2, 1);
  label.data = {1, 15};
  const RgbImage rgb = decode_rgb_png(encode_label_png(label));
  CHECK(pixel_color(rgb, 0, 0) == Eigen::Vector3d(128, 0, 0));
  CHECK(pixel_color(rgb, 1, 0) == Eigen::Vector3d(192, 128, 128));
}

TEST_CASE("box file parse and serialize") {
  const ClassTaxonomy& tax = ClassTaxonomy::pascal_voc();
  const std::string text =
      "img1 car 1 2 10 12\n"
      "img2 person 0 0 5 5\n"
      "img1 dog 3 3 8 9\n";
  const auto anns = parse_box_file(text, tax);
  REQUIRE(anns.size() == 2);
  CHECK(anns[0].image_id == "img1");
  REQUIRE(anns[0].boxes.size() == 2);  // scattered lines regroup
  CHECK(anns[0].boxes[0].class_index == tax.index_of("car"));
  CHECK(anns[0].boxes[1].class_index == tax.index_of("dog"));
  CHECK(anns[0].boxes[1].box == Box{3, 3, 8, 9});
  CHECK(anns[1].boxes[0].class_index == tax.index_of("person"));

  const auto round = parse_box_file(serialize_box_file(anns, tax), tax);
  CHECK(round == anns);
}

TEST_CASE("box file rejects malformed lines") {
  const ClassTaxonomy& tax = ClassTaxonomy::pascal_voc();
  CHECK_THROWS_AS(parse_box_file("img1 zebra 0 0 2 2\n", tax), Error);
  CHECK_THROWS_AS(parse_box_file("img1 car 0 0 2\n", tax), Error);
  CHECK_THROWS_AS(parse_box_file("img1 car 0 0 2 2 junk\n", tax), Error);
  CHECK_THROWS_AS(parse_box_file("img1 background 0 0 2 2\n", tax), Error);
  CHECK(parse_box_file("# comment only\n\n", tax).empty());
}

TEST_CASE("annotation validation enforces bounds and class range") {
  BoxAnnotation ann{"img", {LabeledBox{3, Box{0, 0, 4, 4}}}};
  CHECK_NOTHROW(validate_annotation(ann, 4, 4));
  CHECK_THROWS_AS(validate_annotation(ann, 3, 4), Error);  // xmax exceeds width

  BoxAnnotation empty_box{"img", {LabeledBox{3, Box{2, 2, 2, 4}}}};
  CHECK_THROWS_AS(validate_annotation(empty_box, 4, 4), Error);

  BoxAnnotation bad_class{"img", {LabeledBox{0, Box{0, 0, 2, 2}}}};
  CHECK_THROWS_AS(validate_annotation(bad_class, 4, 4), Error);
}
