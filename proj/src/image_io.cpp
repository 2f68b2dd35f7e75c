#include "sigedge/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sigedge::io {

namespace {

namespace fs = std::filesystem;

constexpr char kF64Magic[] = "SIGEDGE-F64";

// Writes via "<path>.tmp" then renames so readers never see partial files.
template <typename Fn>
void write_atomic(const std::string& path, Fn&& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  fs::rename(tmp, path);
}

void skip_pgm_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string dummy;
      std::getline(in, dummy);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_pgm_int(std::istream& in) {
  skip_pgm_space(in);
  int x = -1;
  in >> x;
  if (!in || x < 0) throw std::runtime_error("malformed PGM header");
  return x;
}

struct PgmData {
  Mask pixels;
  int maxval = 255;
};

PgmData load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2')) {
    throw std::runtime_error("'" + path + "' is not a P2/P5 PGM");
  }
  const int cols = read_pgm_int(in);
  const int rows = read_pgm_int(in);
  const int maxval = read_pgm_int(in);
  if (maxval <= 0 || maxval > 255) throw std::runtime_error("PGM maxval must be in 1..255");
  PgmData out{Mask(rows, cols), maxval};
  if (magic[1] == '5') {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(out.pixels.data().data()),
            static_cast<std::streamsize>(out.pixels.size()));
    if (!in) throw std::runtime_error("truncated PGM '" + path + "'");
  } else {
    for (auto& p : out.pixels.data()) p = static_cast<std::uint8_t>(read_pgm_int(in));
  }
  return out;
}

}  // namespace

void write_f64(const std::string& path, const Image& img) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  write_atomic(path, [&](std::ofstream& out) {
    out << kF64Magic << " 1 " << img.rows() << ' ' << img.cols() << '\n';
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.size() * sizeof(double)));
  });
}

Image read_f64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0, rows = -1, cols = -1;
  hs >> magic >> version >> rows >> cols;
  if (magic != kF64Magic || version != 1 || rows < 0 || cols < 0) {
    throw std::runtime_error("'" + path + "' is not a SIGEDGE-F64 v1 grid");
  }
  Image img(rows, cols);
  in.read(reinterpret_cast<char*>(img.data().data()),
          static_cast<std::streamsize>(img.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated grid '" + path + "'");
  return img;
}

void write_pgm(const std::string& path, const Mask& img) {
  write_atomic(path, [&](std::ofstream& out) {
    out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.size()));
  });
}

Mask read_pgm(const std::string& path) { return load_pgm(path).pixels; }

void write_mask_pgm(const std::string& path, const Mask& mask) {
  Mask out(mask.rows(), mask.cols());
  std::transform(mask.data().begin(), mask.data().end(), out.data().begin(),
                 [](std::uint8_t x) { return static_cast<std::uint8_t>(x ? 255 : 0); });
  write_pgm(path, out);
}

Mask to_grey(const Image& img, double* lo, double* hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  for (double x : img.data()) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  if (img.empty()) mn = mx = 0.0;
  const double span = mx > mn ? mx - mn : 1.0;
  Mask out(img.rows(), img.cols());
  std::transform(img.data().begin(), img.data().end(), out.data().begin(), [&](double x) {
    return static_cast<std::uint8_t>(std::lround(255.0 * (x - mn) / span));
  });
  if (lo) *lo = mn;
  if (hi) *hi = mx;
  return out;
}

Image read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  char head[sizeof(kF64Magic) - 1] = {};
  in.read(head, sizeof(head));
  if (in && std::memcmp(head, kF64Magic, sizeof(head)) == 0) return read_f64(path);
  const PgmData pgm = load_pgm(path);
  Image img(pgm.pixels.rows(), pgm.pixels.cols());
  std::transform(pgm.pixels.data().begin(), pgm.pixels.data().end(), img.data().begin(),
                 [&](std::uint8_t x) { return static_cast<double>(x) / pgm.maxval; });
  return img;
}

void write_text_atomic(const std::string& path, const std::string& contents) {
  write_atomic(path, [&](std::ofstream& out) { out << contents; });
}

}  // namespace sigedge::io
