#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nptorus/mode_integrals.hpp"
#include "nptorus/quadrature.hpp"
#include "nptorus/torus_geometry.hpp"

namespace nptorus::spectral {

/// Symmetrized truncated Galerkin matrix of A_k in the poloidal Fourier
/// basis e^{il eta}, l = -L..L. The Gram matrix of that basis is diagonal
/// (2*pi*s_{k,l}), so a diagonal congruence turns the raw matrix
///   M_{m,l} = c_{m-l} s_{k,l} - xi s'_{k,l} delta_{m,l}
/// into the symmetric, isospectral
///   B_{m,l} = c_{m-l} sqrt(s_{k,m} s_{k,l}) - xi s'_{k,l} delta_{m,l}.
struct ModeMatrix {
  double xi = 0.0;
  int k = 0;
  int L = 0;
  Eigen::MatrixXd entries;   // (2L+1) x (2L+1), symmetric
  Eigen::VectorXd s_diag;    // s_{k,l}, l = -L..L
  Eigen::VectorXd ds_diag;   // s'_{k,l}, l = -L..L
  double build_err = 0.0;    // aggregate quadrature bound, NP-eigenvalue scale

  int dim() const { return 2 * L + 1; }
};

struct SpectrumRecord {
  double xi = 0.0;
  int k = 0;
  int L = 0;
  int index = 0;       // rank, eigenvalues of A_k in descending order
  double lambda_A = 0.0;
  double lambda_np = 0.0;
  double residual = 0.0;
  double build_err = 0.0;
};

struct EigenDecomposition {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXd vectors;   // columns match values
  Eigen::VectorXd residuals; // ||A v - lambda v|| per pair
};

/// NP eigenvalue from an A_k eigenvalue: (1 - xi^2) lambda / (8 pi sqrt2 xi).
double np_eigenvalue_scale(const TorusShape& shape);

ModeMatrix build_mode_matrix(const TorusShape& shape, int k, int L,
                             const quad::QuadratureSpec& spec = {});

/// Dense symmetric eigendecomposition (values descending, orthonormal
/// vectors, per-pair residuals). Throws if the input is not symmetric to
/// 1e-12 relative or the iteration fails.
EigenDecomposition symmetric_eigendecomposition(const Eigen::MatrixXd& matrix,
                                                double tol = 1e-10);

std::vector<SpectrumRecord> mode_spectrum(const TorusShape& shape, int k,
                                          int L,
                                          const quad::QuadratureSpec& spec =
                                              {});

struct SpectrumTable {
  std::vector<SpectrumRecord> records;
  std::vector<int> positive_counts;  // per k = 0..k_max
  std::vector<int> negative_counts;
  int total_negative = 0;
  int total_positive = 0;
};

SpectrumTable assemble_spectrum(const TorusShape& shape, int k_max, int L,
                                const quad::QuadratureSpec& spec = {});

struct ConvergenceRow {
  int L = 0;
  double top = 0.0;      // largest lambda_np
  double bottom = 0.0;   // smallest lambda_np
  double top_delta = 0.0;
  double bottom_delta = 0.0;
  int positive_count = 0;
  int negative_count = 0;
};

std::vector<ConvergenceRow> convergence_study(const TorusShape& shape, int k,
                                              const std::vector<int>& L_seq,
                                              const quad::QuadratureSpec&
                                                  spec = {});

}  // namespace nptorus::spectral
