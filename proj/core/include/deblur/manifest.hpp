#ifndef DEBLUR_MANIFEST_HPP
#define DEBLUR_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deblur/blur_operator.hpp"

namespace deblur {

/// Ordered key=value text file; the format behind scene manifests and PGM
/// sidecars. Sufficient to re-run a CLI pipeline bit-identically.
class Manifest {
public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, std::uint64_t value);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or_throw(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;

  std::string to_string() const;
  static Manifest parse(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static Manifest load(const std::filesystem::path& path);

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Everything needed to rebuild a blur operator reproducibly.
struct OperatorDescriptor {
  OperatorKind kind = OperatorKind::SeparableToeplitz;
  BoundaryCondition bc = BoundaryCondition::Zero;
  double s = 2.0;
  int half_width = 8;
  Index p = 0;
  Index q = 0;

  void write_to(Manifest& m) const;
  static OperatorDescriptor read_from(const Manifest& m);
};

/// Rebuild the operator (and its PSF) from a descriptor.
BlurOperator operator_from_descriptor(const OperatorDescriptor& desc);

} // namespace deblur

#endif
