#include "matchfame/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include "matchfame/projection.hpp"
#include "matchfame/rng.hpp"

namespace matchfame {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMatrix BlockMatrix(const ViewingGraph& g, std::span<const long long> offset) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    for (Index r = 0; r < g.keypoint_count(i); ++r) {
      triplets.emplace_back(offset[i] + r, offset[i] + r, 1.0);
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    for (const Match& mt : g.block(e).entries()) {
      triplets.emplace_back(offset[edge.i] + mt.row, offset[edge.j] + mt.col, 1.0);
      triplets.emplace_back(offset[edge.j] + mt.col, offset[edge.i] + mt.row, 1.0);
    }
  }
  const auto size = static_cast<Eigen::Index>(offset.back());
  SparseMatrix x(size, size);
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

// Orthonormal basis of span(v). Cholesky-QR, falling back to Householder when
// the Gram matrix is numerically singular.
Eigen::MatrixXd Orthonormalize(const Eigen::MatrixXd& v) {
  const Eigen::MatrixXd gram = v.transpose() * v;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    const double lo = llt.matrixL().toDenseMatrix().diagonal().minCoeff();
    const double hi = llt.matrixL().toDenseMatrix().diagonal().maxCoeff();
    if (lo > 1e-6 * hi) {
      Eigen::MatrixXd q = llt.matrixU().solve<Eigen::OnTheRight>(v);
      return q;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  return qr.householderQ() * Eigen::MatrixXd::Identity(v.rows(), v.cols());
}

}  // namespace

SpectralResult spectral_baseline(const ViewingGraph& g, Index m_hat,
                                 const SpectralOptions& options) {
  if (m_hat < 1) throw std::invalid_argument("spectral_baseline: m_hat must be >= 1");
  if (!(options.theta >= 0.0 && options.theta < 1.0)) {
    throw std::invalid_argument("spectral_baseline: theta must be in [0, 1)");
  }
  if (options.max_sweeps < 1 || options.check_every < 1) {
    throw std::invalid_argument("spectral_baseline: sweep counts must be >= 1");
  }
  const Index n = g.num_nodes();
  std::vector<long long> offset(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) offset[i + 1] = offset[i] + g.keypoint_count(i);
  const auto total = static_cast<Eigen::Index>(offset.back());

  SpectralResult result;
  result.assignment.universe_size = m_hat;
  const auto k = static_cast<Eigen::Index>(std::min<long long>(m_hat, total));
  if (k == 0) {
    for (Index i = 0; i < n; ++i) {
      result.assignment.blocks.emplace_back(g.keypoint_count(i), m_hat);
    }
    result.matches = relative_matches(g, result.assignment);
    result.converged = true;
    return result;
  }

  const SparseMatrix x = BlockMatrix(g, offset);
  CounterRng rng(options.seed, {0x5EC7});
  Eigen::MatrixXd u(total, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < total; ++r) u(r, c) = 2.0 * rng.uniform() - 1.0;
  }
  u = Orthonormalize(u);

  Eigen::VectorXd previous;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    u = Orthonormalize(x * u);
    result.sweeps = sweep;
    if (sweep % options.check_every != 0 && sweep != options.max_sweeps) continue;
    // Rayleigh-Ritz: rotate onto the eigenbasis of U^T X U, descending.
    const Eigen::MatrixXd h = u.transpose() * (x * u);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (h + h.transpose()));
    const Eigen::VectorXd ritz = eig.eigenvalues().reverse();
    u = u * eig.eigenvectors().rowwise().reverse();
    if (previous.size() == ritz.size()) {
      const double scale = std::max(1.0, std::abs(ritz(0)));
      if ((ritz - previous).cwiseAbs().maxCoeff() <= options.tolerance * scale) {
        previous = ritz;
        result.converged = true;
        break;
      }
    }
    previous = ritz;
  }
  result.ritz_values = previous;

  // Pivot rows of U, then the orthogonal polar factor of those rows.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> cpqr(u.transpose());
  Eigen::MatrixXd pivot_rows(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    pivot_rows.row(c) = u.row(cpqr.colsPermutation().indices()(c));
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(pivot_rows, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd polar = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::MatrixXd rotated = (u * polar.transpose()).cwiseAbs();

  for (Index i = 0; i < n; ++i) {
    const Index rows = g.keypoint_count(i);
    const auto block = rotated.middleRows(static_cast<Eigen::Index>(offset[i]), rows);
    const double peak = rows > 0 ? block.maxCoeff() : 0.0;
    std::vector<WeightedEntry> triplets;
    if (peak > 0.0) {
      for (Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) {
          const double v = block(r, c) / peak;
          if (v > options.theta) triplets.push_back({r, static_cast<Index>(c), v});
        }
      }
    }
    result.assignment.blocks.push_back(project_partial(
        SparseNonnegMatrix::FromTriplets(rows, m_hat, std::move(triplets)), options.theta));
  }
  result.matches = relative_matches(g, result.assignment);
  result.eigenvectors = std::move(u);
  return result;
}

}  // namespace matchfame
