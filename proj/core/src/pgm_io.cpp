#include "deblur/pgm_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "deblur/io_util.hpp"

namespace deblur {

namespace {

constexpr int kMaxVal = 65535;

std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path) {
  std::filesystem::path p = pgm_path;
  p += ".meta";
  return p;
}

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

long parse_positive(const std::string& tok, const char* what) {
  if (tok.empty()) throw MalformedFile(std::string("missing ") + what);
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || v <= 0) {
    throw MalformedFile(std::string("bad ") + what + ": " + tok);
  }
  return v;
}

} // namespace

void write_pgm(const std::filesystem::path& path, const Image& X,
               std::optional<std::uint64_t> seed) {
  if (X.rows() < 1 || X.cols() < 1 || !X.allFinite()) {
    throw IoError("write_pgm: image must be nonempty with finite entries");
  }
  const Index p = X.rows();
  const Index q = X.cols();
  const double lo = X.minCoeff();
  const double hi = X.maxCoeff();
  const double scale = (hi > lo) ? kMaxVal / (hi - lo) : 0.0;

  std::string body;
  body.reserve(64 + static_cast<std::size_t>(2 * p * q));
  body += "P5\n" + std::to_string(q) + " " + std::to_string(p) + "\n" +
          std::to_string(kMaxVal) + "\n";
  // PGM raster order is row-major, top row first.
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) {
      const auto v = static_cast<unsigned>(std::lround((X(i, j) - lo) * scale));
      body.push_back(static_cast<char>((v >> 8) & 0xff));
      body.push_back(static_cast<char>(v & 0xff));
    }
  }
  write_file_atomic(path, body);

  std::string meta;
  meta += "min=" + format_double(lo) + "\n";
  meta += "max=" + format_double(hi) + "\n";
  meta += "p=" + std::to_string(p) + "\n";
  meta += "q=" + std::to_string(q) + "\n";
  if (seed) meta += "seed=" + std::to_string(*seed) + "\n";
  write_file_atomic(sidecar_path(path), meta);
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  const std::string magic = next_token(in);
  if (magic != "P5") {
    throw MalformedFile("not a binary PGM (magic '" + magic + "')");
  }
  const long width = parse_positive(next_token(in), "width");
  const long height = parse_positive(next_token(in), "height");
  const long maxval = parse_positive(next_token(in), "maxval");
  if (maxval != kMaxVal) {
    throw MalformedFile("expected maxval 65535, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster; the
  // token reader has already consumed it.

  const Index p = height;
  const Index q = width;
  std::vector<char> raster(static_cast<std::size_t>(2 * p * q));
  in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (in.gcount() != static_cast<std::streamsize>(raster.size())) {
    throw MalformedFile("truncated raster in " + path.string());
  }

  double lo = 0.0;
  double hi = 1.0;
  if (auto meta = read_pgm_metadata(path)) {
    if (meta->p != p || meta->q != q) {
      throw MalformedFile("sidecar dimensions disagree with " + path.string());
    }
    lo = meta->min;
    hi = meta->max;
  }
  const double scale = (hi > lo) ? (hi - lo) / kMaxVal : 0.0;

  Image X(p, q);
  std::size_t k = 0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) {
      const auto msb = static_cast<unsigned char>(raster[k++]);
      const auto lsb = static_cast<unsigned char>(raster[k++]);
      X(i, j) = lo + scale * static_cast<double>((msb << 8) | lsb);
    }
  }
  return X;
}

std::optional<PgmMetadata> read_pgm_metadata(const std::filesystem::path& pgm_path) {
  std::ifstream in(sidecar_path(pgm_path));
  if (!in) return std::nullopt;
  PgmMetadata meta;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "min") meta.min = std::stod(val);
    else if (key == "max") meta.max = std::stod(val);
    else if (key == "p") meta.p = std::stol(val);
    else if (key == "q") meta.q = std::stol(val);
    else if (key == "seed") meta.seed = std::stoull(val);
  }
  return meta;
}

} // namespace deblur
