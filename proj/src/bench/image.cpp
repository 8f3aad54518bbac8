#include "bpinv/bench/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <vector>

#include "bpinv/error.hpp"

namespace bpinv::bench {
namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long parse_positive(const std::string& tok, const std::string& path) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char ch) { return std::isdigit(ch); })) {
    throw Error(ErrorCode::UnsupportedFormat, path + ": malformed PGM header");
  }
  return std::stol(tok);
}

}  // namespace

GrayImage load_image_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  const std::string magic = next_token(in);
  if (magic != "P5") throw Error(ErrorCode::UnsupportedFormat, path + ": expected binary PGM (P5), got '" + magic + "'");
  const long width = parse_positive(next_token(in), path);
  const long height = parse_positive(next_token(in), path);
  const long maxval = parse_positive(next_token(in), path);
  if (maxval != 255) throw Error(ErrorCode::UnsupportedFormat, path + ": maxval must be 255");
  if (width != height) {
    throw Error(ErrorCode::NonSquare, path + ": image is " + std::to_string(width) + "x" + std::to_string(height));
  }
  if (width <= 0 || (width & (width - 1)) != 0) {
    throw Error(ErrorCode::NonPowerOfTwo, path + ": side " + std::to_string(width) + " is not a power of two");
  }
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width * height));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw Error(ErrorCode::UnsupportedFormat, path + ": truncated pixel data");
  }
  GrayImage img;
  img.side = width;
  img.pixels.resize(static_cast<Index>(bytes.size()));
  for (std::size_t i = 0; i < bytes.size(); ++i) img.pixels(static_cast<Index>(i)) = bytes[i];
  return img;
}

void save_image_pgm(const std::string& path, const Vector& pixels, Index width, Index height) {
  if (pixels.size() != width * height) throw Error(ErrorCode::DimensionMismatch, "pixel count does not match geometry");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "P5\n" << width << " " << height << "\n255\n";
  for (Index i = 0; i < pixels.size(); ++i) {
    const double v = std::clamp(std::round(pixels(i)), 0.0, 255.0);
    out.put(static_cast<char>(static_cast<unsigned char>(v)));
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace bpinv::bench
