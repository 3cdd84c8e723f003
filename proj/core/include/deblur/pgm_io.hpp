#ifndef DEBLUR_PGM_IO_HPP
#define DEBLUR_PGM_IO_HPP

#include <filesystem>
#include <optional>

#include "deblur/image.hpp"

namespace deblur {

// Canonical on-disk format: binary PGM (P5) with maxval 65535 plus a
// key=value sidecar ("<file>.meta") recording the linear min-max scaling
// applied at quantization time, so real-valued reconstructions survive a
// round trip up to 16-bit quantization. Files are written atomically
// (temp + rename).

/// Sidecar contents for a quantized image.
struct PgmMetadata {
  double min = 0.0;
  double max = 0.0;
  Index p = 0;
  Index q = 0;
  std::optional<std::uint64_t> seed;
};

/// Write X as 16-bit PGM plus sidecar. Throws IoError on nonfinite pixels or
/// filesystem failure.
void write_pgm(const std::filesystem::path& path, const Image& X,
               std::optional<std::uint64_t> seed = std::nullopt);

/// Read a 16-bit PGM back to real intensities. Uses the sidecar scaling when
/// present, otherwise maps samples to [0, 1]. Throws MalformedFile on a
/// truncated or syntactically invalid file, IoError when unreadable.
Image read_pgm(const std::filesystem::path& path);

/// Sidecar for a previously written image, if any.
std::optional<PgmMetadata> read_pgm_metadata(const std::filesystem::path& pgm_path);

} // namespace deblur

#endif
