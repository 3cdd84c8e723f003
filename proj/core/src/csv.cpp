#include "deblur/csv.hpp"

#include <limits>

#include "deblur/io_util.hpp"

namespace deblur {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw DimensionMismatch("CSV row width disagrees with header");
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::string out;
  auto append = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += "\r\n";
  };
  append(header);
  for (const auto& row : rows) append(row);
  return out;
}

void CsvTable::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_string());
}

CsvTable sigma_csv(const Vector& sigma) {
  CsvTable t;
  t.header = {"ell", "sigma"};
  for (Index l = 0; l < sigma.size(); ++l) {
    const double clamped = std::max(sigma(l), std::numeric_limits<double>::min());
    t.add_row({std::to_string(l + 1), format_double(clamped)});
  }
  return t;
}

CsvTable picard_csv(const PicardData& data) {
  CsvTable t;
  t.header = {"ell", "sigma", "coeff", "ratio"};
  for (Index l = 0; l < data.sigma.size(); ++l) {
    const double sigma = std::max(data.sigma(l), std::numeric_limits<double>::min());
    t.add_row({std::to_string(l + 1), format_double(sigma), format_double(data.coeffs(l)),
               format_double(data.ratio(l))});
  }
  return t;
}

CsvTable lcurve_csv(const std::vector<LCurvePoint>& points, const LCurveCorner* corner) {
  CsvTable t;
  t.header = {"lambda", "residual", "solution_norm", "curvature", "is_corner"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double curv = corner && i < corner->curvatures.size() ? corner->curvatures[i] : 0.0;
    const bool is_corner = corner && static_cast<Index>(i) == corner->index;
    t.add_row({format_double(points[i].lambda), format_double(points[i].residual),
               format_double(points[i].solution_norm), format_double(curv),
               is_corner ? "1" : "0"});
  }
  return t;
}

CsvTable trace_csv(const std::vector<SolverTraceRow>& trace) {
  CsvTable t;
  t.header = {"iteration", "objective", "residual_norm", "penalty_norm"};
  for (const auto& row : trace) {
    t.add_row({std::to_string(row.iteration), format_double(row.objective),
               format_double(row.residual_norm), format_double(row.penalty_norm)});
  }
  return t;
}

CsvTable coefficients_csv(const Vector& coeff_true, const Vector& coeff_naive) {
  if (coeff_true.size() != coeff_naive.size()) {
    throw DimensionMismatch("coefficients_csv: length mismatch");
  }
  CsvTable t;
  t.header = {"ell", "coeff_true", "coeff_naive"};
  for (Index l = 0; l < coeff_true.size(); ++l) {
    t.add_row({std::to_string(l + 1), format_double(coeff_true(l)),
               format_double(coeff_naive(l))});
  }
  return t;
}

} // namespace deblur
