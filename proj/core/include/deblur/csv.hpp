#ifndef DEBLUR_CSV_HPP
#define DEBLUR_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "deblur/image.hpp"
#include "deblur/param_select.hpp"
#include "deblur/regularization.hpp"
#include "deblur/svd_filter.hpp"

namespace deblur {

/// Minimal RFC-4180 table: header row, CRLF line endings, numeric fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  void save(const std::filesystem::path& path) const;
};

/// Columns ell, sigma. Underflowed values are clamped to the smallest
/// positive normal so log plots stay finite.
CsvTable sigma_csv(const Vector& sigma);

/// Columns ell, sigma, coeff, ratio.
CsvTable picard_csv(const PicardData& data);

/// Columns lambda, residual, solution_norm, curvature, is_corner.
CsvTable lcurve_csv(const std::vector<LCurvePoint>& points, const LCurveCorner* corner);

/// Columns iteration, objective, residual_norm, penalty_norm.
CsvTable trace_csv(const std::vector<SolverTraceRow>& trace);

/// Columns ell, coeff_true, coeff_naive: |v_l^T x| for the true scene and
/// the naive reconstruction.
CsvTable coefficients_csv(const Vector& coeff_true, const Vector& coeff_naive);

} // namespace deblur

#endif
