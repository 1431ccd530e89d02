#include "nsg/tensor_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace nsg::io {
namespace {

constexpr char kMagic[4] = {'N', 'S', 'G', 'T'};
constexpr std::uint32_t kPayloadF64 = 0;
constexpr std::uint32_t kPayloadU32 = 1;
constexpr std::uint64_t kMaxElements = std::uint64_t(1) << 28;

void putU32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void putF64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

class Reader {
 public:
  Reader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  std::uint32_t u32() {
    unsigned char b[4];
    pull(b, 4);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
  }

  double f64() {
    unsigned char b[8];
    pull(b, 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  void pull(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw IoError(path_ + ": truncated at byte offset " + std::to_string(offset_));
    offset_ += n;
  }

  std::size_t offset() const { return offset_; }

 private:
  std::istream& in_;
  std::string path_;
  std::size_t offset_ = 0;
};

struct Header {
  std::vector<Index> dims;
  std::uint32_t kind;
  std::uint64_t count;
};

Header readHeader(Reader& r, const std::string& path) {
  unsigned char magic[4];
  r.pull(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw IoError(path + ": bad magic");
  const std::uint32_t ndim = r.u32();
  if (ndim != 2 && ndim != 3)
    throw IoError(path + ": unsupported ndim " + std::to_string(ndim));
  Header h;
  h.count = 1;
  for (std::uint32_t d = 0; d < ndim; ++d) {
    const std::uint32_t v = r.u32();
    if (v == 0) throw IoError(path + ": zero dimension");
    h.dims.push_back(static_cast<Index>(v));
    h.count *= v;
    if (h.count > kMaxElements) throw IoError(path + ": dimensions too large");
  }
  h.kind = r.u32();
  return h;
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

std::ifstream openIn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  return in;
}

}  // namespace

void saveTensor(const Tensor3& t, const std::string& path) {
  if (t.empty()) throw IoError(path + ": refusing to save empty tensor");
  if (!t.allFinite()) throw IoError(path + ": non-finite values, nothing written");
  auto out = openOut(path);
  out.write(kMagic, 4);
  putU32(out, 3);
  putU32(out, static_cast<std::uint32_t>(t.rows()));
  putU32(out, static_cast<std::uint32_t>(t.cols()));
  putU32(out, static_cast<std::uint32_t>(t.channels()));
  putU32(out, kPayloadF64);
  for (Index n = 0; n < t.size(); ++n) putF64(out, t.data()[n]);
  if (!out) throw IoError(path + ": write failed");
}

Tensor3 loadTensor(const std::string& path) {
  auto in = openIn(path);
  Reader r(in, path);
  const Header h = readHeader(r, path);
  if (h.kind != kPayloadF64)
    throw IoError(path + ": expected f64 payload, got kind " + std::to_string(h.kind));
  Tensor3 t(h.dims[0], h.dims[1], h.dims.size() == 3 ? h.dims[2] : 1);
  for (Index n = 0; n < t.size(); ++n) {
    const std::size_t at = r.offset();
    const double v = r.f64();
    if (!std::isfinite(v))
      throw IoError(path + ": non-finite value at byte offset " + std::to_string(at));
    t.data()[n] = v;
  }
  return t;
}

void saveTokens(const TokenMap& t, const std::string& path) {
  if (t.size() == 0) throw IoError(path + ": refusing to save empty token map");
  auto out = openOut(path);
  out.write(kMagic, 4);
  putU32(out, 2);
  putU32(out, static_cast<std::uint32_t>(t.rows()));
  putU32(out, static_cast<std::uint32_t>(t.cols()));
  putU32(out, kPayloadU32);
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j) putU32(out, t(i, j));
  if (!out) throw IoError(path + ": write failed");
}

TokenMap loadTokens(const std::string& path) {
  auto in = openIn(path);
  Reader r(in, path);
  const Header h = readHeader(r, path);
  if (h.kind != kPayloadU32)
    throw IoError(path + ": expected token payload, got kind " + std::to_string(h.kind));
  if (h.dims.size() != 2) throw IoError(path + ": token maps are 2-dimensional");
  TokenMap t(h.dims[0], h.dims[1]);
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j) t(i, j) = r.u32();
  return t;
}

void writeImage(const Tensor3& t, const std::string& path) {
  if (t.channels() != 1 && t.channels() != 3)
    throw std::invalid_argument("writeImage: needs 1 or 3 channels");
  if (!t.allFinite()) throw IoError(path + ": non-finite values, nothing written");
  auto out = openOut(path);
  out << (t.channels() == 1 ? "P5" : "P6") << "\n"
      << t.cols() << " " << t.rows() << "\n255\n";
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j)
      for (Index c = 0; c < t.channels(); ++c) {
        const double clamped = std::min(1.0, std::max(0.0, t(i, j, c)));
        out.put(static_cast<char>(std::lround(clamped * 255.0)));
      }
  if (!out) throw IoError(path + ": write failed");
}

Tensor3 readImage(const std::string& path) {
  auto in = openIn(path);
  std::string tag;
  in >> tag;
  if (tag != "P5" && tag != "P6") throw IoError(path + ": not a raw PGM/PPM file");
  // header tokens may be separated by whitespace and '#' comment lines
  auto nextInt = [&](const char* what) {
    for (;;) {
      int ch = in.peek();
      if (ch == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      if (std::isspace(ch)) {
        in.get();
        continue;
      }
      break;
    }
    long v = -1;
    if (!(in >> v) || v <= 0)
      throw IoError(path + std::string(": malformed header field ") + what);
    return static_cast<Index>(v);
  };
  const Index w = nextInt("width");
  const Index h = nextInt("height");
  const Index maxval = nextInt("maxval");
  if (maxval != 255) throw IoError(path + ": only maxval 255 is supported");
  in.get();  // single whitespace byte before the raster
  const Index channels = tag == "P5" ? 1 : 3;
  Tensor3 t(h, w, channels);
  std::vector<unsigned char> raster(static_cast<std::size_t>(t.size()));
  in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (static_cast<std::size_t>(in.gcount()) != raster.size())
    throw IoError(path + ": truncated raster");
  for (Index n = 0; n < t.size(); ++n)
    t.data()[n] = raster[static_cast<std::size_t>(n)] / 255.0;
  return t;
}

}  // namespace nsg::io
