#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "matchfame/solver.hpp"
#include "matchfame/viewing_graph.hpp"

namespace matchfame {

struct SpectralOptions {
  double tolerance = 1e-8;  // on the change of the Ritz values, relative to the largest
  int max_sweeps = 500;
  int check_every = 10;     // Rayleigh-Ritz / convergence test period
  double theta = 0.25;
  std::uint64_t seed = 0;
};

struct SpectralResult {
  AbsoluteAssignment assignment;
  std::vector<PartialPermutation> matches;  // Z per edge
  Eigen::MatrixXd eigenvectors;             // M x k, orthonormal columns
  Eigen::VectorXd ritz_values;              // descending
  int sweeps = 0;
  bool converged = false;
};

// Spectral rounding baseline. The top-m_hat eigenvectors of the symmetric
// block matrix X (identity diagonal blocks) are found by block subspace
// iteration. k pivot rows are chosen by column-pivoted QR of U^T, U is
// rotated by the orthogonal polar factor of those rows, and every node's
// block of |U R^T| is scaled to a maximum of 1 and projected with
// project_partial. On non-convergence the last iterate is used and
// `converged` is false.
SpectralResult spectral_baseline(const ViewingGraph& g, Index m_hat,
                                 const SpectralOptions& options = {});

}  // namespace matchfame
