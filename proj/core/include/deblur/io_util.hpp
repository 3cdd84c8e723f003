#ifndef DEBLUR_IO_UTIL_HPP
#define DEBLUR_IO_UTIL_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace deblur {

/// Write via a temp file in the same directory, then rename; partially
/// written outputs are never visible. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Whole file as a string; throws IoError when unreadable.
std::string read_text_file(const std::filesystem::path& path);

/// Deterministic shortest-ish decimal for doubles (%.17g).
std::string format_double(double v);

} // namespace deblur

#endif
