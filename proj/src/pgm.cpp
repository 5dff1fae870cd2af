#include "etv/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace etv {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& is, const std::string& path) {
  std::string tok;
  char c = 0;
  while (is.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(is, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(c);
  }
  if (tok.empty()) throw std::runtime_error(path + ": truncated PGM header");
  return tok;
}

long parse_positive(const std::string& tok, const std::string& path, const char* what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || v <= 0) throw std::runtime_error(path + ": bad PGM " + what + " '" + tok + "'");
  return v;
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open image: " + path);
  const std::string magic = next_token(is, path);
  if (magic != "P2" && magic != "P5") throw std::runtime_error(path + ": not a P2/P5 graymap");
  const long width = parse_positive(next_token(is, path), path, "width");
  const long height = parse_positive(next_token(is, path), path, "height");
  const long maxval = parse_positive(next_token(is, path), path, "maxval");
  if (maxval > 65535) throw std::runtime_error(path + ": unsupported bit depth (maxval > 65535)");
  if (width != height) throw std::runtime_error(path + ": only square images are supported");

  const auto n = static_cast<std::size_t>(width);
  std::vector<double> values(n * n);
  if (magic == "P2") {
    for (auto& v : values) {
      const long s = std::stol(next_token(is, path));
      if (s < 0 || s > maxval) throw std::runtime_error(path + ": sample out of range");
      v = static_cast<double>(s) / static_cast<double>(maxval);
    }
  } else {
    const bool wide = maxval > 255;
    for (auto& v : values) {
      unsigned s = 0;
      unsigned char bytes[2] = {0, 0};
      if (!is.read(reinterpret_cast<char*>(bytes), wide ? 2 : 1)) {
        throw std::runtime_error(path + ": truncated pixel data");
      }
      s = wide ? (static_cast<unsigned>(bytes[0]) << 8) | bytes[1] : bytes[0];
      if (s > static_cast<unsigned>(maxval)) throw std::runtime_error(path + ": sample out of range");
      v = static_cast<double>(s) / static_cast<double>(maxval);
    }
  }
  return Image::from_real(n, values);
}

void save_image(const Image& img, const std::string& path, int bits) {
  if (bits != 8 && bits != 16) throw std::invalid_argument("save_image: bits must be 8 or 16");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open image for writing: " + path);
  const unsigned maxval = bits == 8 ? 255u : 65535u;
  os << "P5\n" << img.side() << ' ' << img.side() << '\n' << maxval << '\n';
  for (const auto& z : img.data()) {
    const double v = std::clamp(z.real(), 0.0, 1.0);
    const auto s = static_cast<unsigned>(std::lround(v * maxval));
    if (bits == 16) os.put(static_cast<char>((s >> 8) & 0xff));
    os.put(static_cast<char>(s & 0xff));
  }
  if (!os) throw std::runtime_error("failed writing image: " + path);
}

}  // namespace etv
