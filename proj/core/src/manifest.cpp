#include "deblur/manifest.hpp"

#include <algorithm>

#include "deblur/io_util.hpp"

namespace deblur {

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, format_double(value)); }
void Manifest::set(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }
void Manifest::set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

bool Manifest::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

std::optional<std::string> Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Manifest::get_or_throw(const std::string& key) const {
  if (auto v = get(key)) return *v;
  throw MalformedFile("manifest is missing key '" + key + "'");
}

double Manifest::get_double(const std::string& key) const {
  try {
    return std::stod(get_or_throw(key));
  } catch (const std::invalid_argument&) {
    throw MalformedFile("manifest key '" + key + "' is not a number");
  }
}

std::int64_t Manifest::get_int(const std::string& key) const {
  try {
    return std::stoll(get_or_throw(key));
  } catch (const std::invalid_argument&) {
    throw MalformedFile("manifest key '" + key + "' is not an integer");
  }
}

std::string Manifest::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

Manifest Manifest::parse(const std::string& text) {
  Manifest m;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw MalformedFile("manifest line without '=': " + line);
    }
    m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

void Manifest::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_string());
}

Manifest Manifest::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

void OperatorDescriptor::write_to(Manifest& m) const {
  m.set("variant", std::string(to_string(kind)));
  m.set("bc", std::string(to_string(bc)));
  m.set("s", s);
  m.set("half_width", static_cast<std::int64_t>(half_width));
  m.set("p", static_cast<std::int64_t>(p));
  m.set("q", static_cast<std::int64_t>(q));
}

OperatorDescriptor OperatorDescriptor::read_from(const Manifest& m) {
  OperatorDescriptor d;
  d.kind = operator_kind_from_string(m.get_or_throw("variant"));
  d.bc = boundary_condition_from_string(m.get_or_throw("bc"));
  d.s = m.get_double("s");
  d.half_width = static_cast<int>(m.get_int("half_width"));
  d.p = m.get_int("p");
  d.q = m.get_int("q");
  return d;
}

BlurOperator operator_from_descriptor(const OperatorDescriptor& desc) {
  const GaussianPsf psf = gaussian_psf_2d(desc.half_width, desc.s);
  VariantHint hint = VariantHint::Auto;
  switch (desc.kind) {
    case OperatorKind::Dense: hint = VariantHint::Dense; break;
    case OperatorKind::SeparableToeplitz: hint = VariantHint::SeparableToeplitz; break;
    case OperatorKind::SeparableCirculant: hint = VariantHint::SeparableCirculant; break;
    case OperatorKind::Bccb: hint = VariantHint::Bccb; break;
    case OperatorKind::ReflexiveConv: hint = VariantHint::MatvecOnly; break;
  }
  return build_operator(psf, desc.bc, desc.p, desc.q, hint);
}

} // namespace deblur
