#include "nptorus/spectral_assembly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nptorus::spectral {

double np_eigenvalue_scale(const TorusShape& shape) {
  const double xi = shape.xi();
  return (1.0 - xi * xi) /
         (8.0 * std::numbers::pi * std::sqrt(2.0) * xi);
}

ModeMatrix build_mode_matrix(const TorusShape& shape, int k, int L,
                             const quad::QuadratureSpec& spec) {
  if (L < 1) throw std::invalid_argument("build_mode_matrix: L must be >= 1");
  modes::validate_mode_arguments(shape, k, L);

  const int n = 2 * L + 1;
  ModeMatrix mm;
  mm.xi = shape.xi();
  mm.k = k;
  mm.L = L;
  mm.entries.resize(n, n);
  mm.s_diag.resize(n);
  mm.ds_diag.resize(n);

  // s_{k,l} and s'_{k,l} are even in l; compute l = 0..L once.
  std::vector<double> s(L + 1), ds(L + 1), s_err(L + 1), ds_err(L + 1);
  for (int l = 0; l <= L; ++l) {
    const auto sv = modes::s_kl(shape, k, l, spec);
    const auto dv = modes::ds_kl(shape, k, l, spec);
    if (!sv.converged || !dv.converged)
      throw std::runtime_error("build_mode_matrix: quadrature did not "
                               "converge at (k,l) = (" + std::to_string(k) +
                               "," + std::to_string(l) + ")");
    if (!(sv.value > 0.0))
      throw std::runtime_error("build_mode_matrix: nonpositive s_kl at l = " +
                               std::to_string(l));
    s[l] = sv.value;
    ds[l] = dv.value;
    s_err[l] = sv.err_estimate;
    ds_err[l] = dv.err_estimate;
  }

  std::vector<double> c(2 * L + 1);
  for (int j = 0; j <= 2 * L; ++j) c[j] = modes::c_m(shape, j);

  const double xi = shape.xi();
  double max_row_err = 0.0;
  for (int m = -L; m <= L; ++m) {
    double row_err = 0.0;
    for (int l = -L; l <= L; ++l) {
      const double sm = s[std::abs(m)];
      const double sl = s[std::abs(l)];
      const double cj = c[std::abs(m - l)];
      double entry = cj * std::sqrt(sm * sl);
      // entry error: d(sqrt(sm*sl)) propagated from both factors
      double err = cj * 0.5 *
                   (std::sqrt(sl / sm) * s_err[std::abs(m)] +
                    std::sqrt(sm / sl) * s_err[std::abs(l)]);
      if (m == l) {
        entry -= xi * ds[std::abs(l)];
        err += xi * ds_err[std::abs(l)];
      }
      mm.entries(m + L, l + L) = entry;
      mm.s_diag(l + L) = sl;
      mm.ds_diag(l + L) = ds[std::abs(l)];
      row_err += err;
    }
    max_row_err = std::max(max_row_err, row_err);
  }
  mm.build_err = np_eigenvalue_scale(shape) * max_row_err;
  return mm;
}

EigenDecomposition symmetric_eigendecomposition(const Eigen::MatrixXd& matrix,
                                                double tol) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("symmetric_eigendecomposition: square input "
                                "required");
  const double scale = std::max(matrix.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument("symmetric_eigendecomposition: input not "
                                "symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigendecomposition: iteration failed");

  const int n = static_cast<int>(matrix.rows());
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.residuals.resize(n);
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  for (int i = 0; i < n; ++i) {
    out.residuals(i) =
        (matrix * out.vectors.col(i) - out.values(i) * out.vectors.col(i))
            .norm();
    if (out.residuals(i) > tol * std::max(scale, 1.0) * n)
      throw std::runtime_error("symmetric_eigendecomposition: residual above "
                               "tolerance");
  }
  return out;
}

std::vector<SpectrumRecord> mode_spectrum(const TorusShape& shape, int k,
                                          int L,
                                          const quad::QuadratureSpec& spec) {
  const ModeMatrix mm = build_mode_matrix(shape, k, L, spec);
  const EigenDecomposition eig =
      symmetric_eigendecomposition(mm.entries, 1e-10);
  const double scale = np_eigenvalue_scale(shape);

  std::vector<SpectrumRecord> records;
  records.reserve(mm.dim());
  for (int i = 0; i < mm.dim(); ++i) {
    SpectrumRecord r;
    r.xi = shape.xi();
    r.k = k;
    r.L = L;
    r.index = i;
    r.lambda_A = eig.values(i);
    r.lambda_np = scale * eig.values(i);
    r.residual = eig.residuals(i);
    r.build_err = mm.build_err;
    records.push_back(r);
  }
  return records;
}

SpectrumTable assemble_spectrum(const TorusShape& shape, int k_max, int L,
                                const quad::QuadratureSpec& spec) {
  SpectrumTable table;
  table.positive_counts.assign(k_max + 1, 0);
  table.negative_counts.assign(k_max + 1, 0);
  for (int k = 0; k <= k_max; ++k) {
    auto recs = mode_spectrum(shape, k, L, spec);
    for (const auto& r : recs) {
      if (r.lambda_np > 0.0) ++table.positive_counts[k];
      if (r.lambda_np < 0.0) ++table.negative_counts[k];
    }
    table.total_positive += table.positive_counts[k];
    table.total_negative += table.negative_counts[k];
    table.records.insert(table.records.end(), recs.begin(), recs.end());
  }
  return table;
}

std::vector<ConvergenceRow> convergence_study(const TorusShape& shape, int k,
                                              const std::vector<int>& L_seq,
                                              const quad::QuadratureSpec&
                                                  spec) {
  if (!std::is_sorted(L_seq.begin(), L_seq.end()))
    throw std::invalid_argument("convergence_study: L sequence must increase");
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < L_seq.size(); ++i) {
    auto recs = mode_spectrum(shape, k, L_seq[i], spec);
    ConvergenceRow row;
    row.L = L_seq[i];
    row.top = recs.front().lambda_np;
    row.bottom = recs.back().lambda_np;
    for (const auto& r : recs) {
      if (r.lambda_np > 0.0) ++row.positive_count;
      if (r.lambda_np < 0.0) ++row.negative_count;
    }
    if (!rows.empty()) {
      row.top_delta = std::abs(row.top - rows.back().top);
      row.bottom_delta = std::abs(row.bottom - rows.back().bottom);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nptorus::spectral
