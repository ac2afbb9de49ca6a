#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "homocp/sdp.h"

namespace homocp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Gap accepted for a near-optimal exit when only the moment side is feasible.
constexpr double kLooseGap = 1e-5;

// Reduced problem after eliminating the equalities y = y0 + N ξ:
//   min  cξ^T ξ   s.t.  C_k - sum_j ξ_j A_kj ⪰ 0  for every block k,
// solved in the conventional dual form (max b^T ξ with b = -cξ). The primal
// companion is min sum_k <C_k, X_k> s.t. sum_k <A_kj, X_k> = b_j, X ⪰ 0.
struct ReducedBlock {
  int side = 0;
  MatrixXd C;
  MatrixXd A;  // column j = vec(A_kj), side*side rows
};

struct Reduced {
  VectorXd y0;
  MatrixXd basis;  // N
  VectorXd b;
  double objective_offset = 0.0;
  std::vector<ReducedBlock> blocks;
};

MatrixXd Mat(const VectorXd& v, int side) {
  return Eigen::Map<const MatrixXd>(v.data(), side, side);
}

VectorXd Vec(const MatrixXd& m) { return Eigen::Map<const VectorXd>(m.data(), m.size()); }

MatrixXd Sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Largest α such that X + α dX stays PSD, given the Cholesky factor L of X.
double MaxStep(const MatrixXd& L, const MatrixXd& dX) {
  const MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(L.rows(), L.cols()));
  const MatrixXd S = Sym(Linv * dX * Linv.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (lmin >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

bool Cholesky(const MatrixXd& m, MatrixXd* L) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  *L = llt.matrixL();
  return true;
}

}  // namespace

BackendSolution SolveInteriorPoint(const SdpStandardForm& form, const SolverSettings& settings) {
  BackendSolution sol;
  const int n = form.num_vars;
  const VectorXd c = Eigen::Map<const VectorXd>(form.objective.data(), n);

  // ---- equality elimination -------------------------------------------------
  Reduced red;
  const int m_eq = static_cast<int>(form.equalities.size());
  if (m_eq > 0) {
    MatrixXd A = MatrixXd::Zero(m_eq, n);
    VectorXd rhs(m_eq);
    for (int r = 0; r < m_eq; ++r) {
      for (const auto& [var, coef] : form.equalities[r].coeffs) A(r, var) += coef;
      rhs(r) = form.equalities[r].rhs;
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(A.transpose());
    qr.setThreshold(1e-11);
    const int rank = static_cast<int>(qr.rank());
    const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, n);
    red.basis = Q.rightCols(n - rank);
    // Minimum-norm particular solution within range(A^T) = span(Q1).
    const MatrixXd Q1 = Q.leftCols(rank);
    const MatrixXd AQ1 = A * Q1;
    red.y0 = Q1 * AQ1.colPivHouseholderQr().solve(rhs);
    const double residual = (A * red.y0 - rhs).lpNorm<Eigen::Infinity>();
    sol.primal_residual = residual;
    if (residual > 1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
      sol.status = SolveStatus::kInfeasible;
      sol.y = red.y0;
      sol.objective = c.dot(red.y0);
      return sol;
    }
  } else {
    red.basis = MatrixXd::Identity(n, n);
    red.y0 = VectorXd::Zero(n);
  }
  const int k = static_cast<int>(red.basis.cols());
  red.b = -(red.basis.transpose() * c);
  red.objective_offset = c.dot(red.y0);

  for (const auto& blk : form.blocks) {
    ReducedBlock rb;
    rb.side = blk.side;
    const int s = blk.side;
    rb.C = EvaluateBlock(blk, red.y0);
    rb.A = MatrixXd::Zero(static_cast<Eigen::Index>(s) * s, k);
    for (const auto& e : blk.entries) {
      if (e.var == kConstantTerm) continue;
      rb.A.row(e.row + e.col * s) -= e.value * red.basis.row(e.var);
      if (e.row != e.col) rb.A.row(e.col + e.row * s) -= e.value * red.basis.row(e.var);
    }
    red.blocks.push_back(std::move(rb));
  }
  const int nb = static_cast<int>(red.blocks.size());

  const auto finish = [&](const VectorXd& xi, SolveStatus status, int iters) {
    sol.y = red.y0 + red.basis * xi;
    sol.objective = c.dot(sol.y);
    sol.status = status;
    sol.iterations = iters;
    return sol;
  };

  if (k == 0) {
    // Everything is pinned by the equalities.
    double lmin = std::numeric_limits<double>::infinity();
    for (const auto& rb : red.blocks) {
      lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<MatrixXd>(rb.C).eigenvalues()(0));
    }
    return finish(VectorXd(), lmin >= -settings.feasibility_tolerance ? SolveStatus::kOptimal
                                                                        : SolveStatus::kInfeasible,
                  0);
  }
  if (nb == 0) {
    // No cone constraints: bounded only if the reduced objective vanishes.
    return finish(VectorXd::Zero(k),
                  red.b.norm() <= settings.gap_tolerance ? SolveStatus::kOptimal
                                                         : SolveStatus::kUnbounded,
                  0);
  }

  // ---- interior-point iterations --------------------------------------------
  int total_dim = 0;
  double norm_c = 0.0;
  for (const auto& rb : red.blocks) {
    total_dim += rb.side;
    norm_c += rb.C.squaredNorm();
  }
  norm_c = std::sqrt(norm_c);
  const double norm_b = red.b.norm();

  std::vector<MatrixXd> X(nb), Z(nb);
  for (int q = 0; q < nb; ++q) {
    const auto& rb = red.blocks[q];
    const double s = rb.side;
    double x0 = std::max(10.0, std::sqrt(s));
    double z0 = std::max({10.0, std::sqrt(s), rb.C.norm()});
    for (int j = 0; j < k; ++j) {
      const double an = rb.A.col(j).norm();
      x0 = std::max(x0, s * (1.0 + std::abs(red.b(j))) / (1.0 + an));
      z0 = std::max(z0, an);
    }
    X[q] = x0 * MatrixXd::Identity(rb.side, rb.side);
    Z[q] = z0 * MatrixXd::Identity(rb.side, rb.side);
  }
  VectorXd xi = VectorXd::Zero(k);

  const auto apply_a = [&](const std::vector<MatrixXd>& W) {
    VectorXd out = VectorXd::Zero(k);
    for (int q = 0; q < nb; ++q) out += red.blocks[q].A.transpose() * Vec(W[q]);
    return out;
  };

  double best_gap = std::numeric_limits<double>::infinity();
  VectorXd best_xi = xi;
  double best_pinf = 0;
  double best_dinf = 0;
  VectorXd moment_xi;
  double moment_gap = std::numeric_limits<double>::infinity();
  double moment_pinf = 0;
  double moment_dinf = 0;
  std::vector<double> moment_history;
  constexpr std::size_t kStallWindow = 4;

  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    // Residuals and convergence measures.
    const VectorXd rp = red.b - apply_a(X);
    std::vector<MatrixXd> rd(nb);
    double rd_norm = 0.0;
    double pobj = 0.0;
    double xz = 0.0;
    for (int q = 0; q < nb; ++q) {
      const auto& rb = red.blocks[q];
      rd[q] = rb.C - Z[q] - Mat(rb.A * xi, rb.side);
      rd_norm += rd[q].squaredNorm();
      pobj += (rb.C.array() * X[q].array()).sum();
      xz += (X[q].array() * Z[q].array()).sum();
    }
    rd_norm = std::sqrt(rd_norm);
    const double dobj = red.b.dot(xi);
    const double mu = xz / total_dim;
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = rd_norm / (1.0 + norm_c);
    // Gap measured on the original objective scale: moment value offset - b^T ξ,
    // certified bound offset - <C, X>.
    const double gap = std::abs(pobj - dobj) /
                       (1.0 + std::abs(red.objective_offset - pobj) +
                        std::abs(red.objective_offset - dobj));
    if (settings.verbose) {
      std::fprintf(stderr, "ipm %3d  moment % .10e  bound % .10e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e\n",
                   iter, red.objective_offset - dobj, red.objective_offset - pobj, gap, pinf, dinf, mu);
    }
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.relative_gap = gap;
    if (std::max(pinf, dinf) <= 1e-6 && gap < best_gap) {
      best_gap = gap;
      best_xi = xi;
      best_pinf = pinf;
      best_dinf = dinf;
    }
    // The moment side (ξ, Z) can stay exactly feasible while the certificate
    // side X diverges, e.g. when no bounded SOS certificate exists. Keep the
    // latest such iterate.
    if (dinf <= settings.feasibility_tolerance) {
      moment_xi = xi;
      moment_gap = gap;
      moment_pinf = pinf;
      moment_dinf = dinf;
      moment_history.push_back(red.objective_offset - dobj);
      const std::size_t h = moment_history.size();
      if (h > kStallWindow &&
          std::abs(moment_history[h - 1] - moment_history[h - 1 - kStallWindow]) <=
              1e-9 * (1.0 + std::abs(moment_history[h - 1])) &&
          pinf > settings.feasibility_tolerance) {
        break;
      }
    }
    if (gap <= settings.gap_tolerance && pinf <= settings.feasibility_tolerance &&
        dinf <= settings.feasibility_tolerance) {
      return finish(xi, SolveStatus::kOptimal, iter);
    }
    if (dinf <= 1e-6 && dobj > 1e10 * (1.0 + std::abs(pobj))) {
      return finish(xi, SolveStatus::kUnbounded, iter);
    }
    if (pinf <= 1e-6 && pobj < -1e10 * (1.0 + std::abs(dobj))) {
      return finish(xi, SolveStatus::kInfeasible, iter);
    }

    // Schur complement M_ij = Tr(A_i X A_j Z^-1) = <L_X^T A_i R, L_X^T A_j R>
    // with Z^-1 = R R^T, R = L_Z^-T.
    std::vector<MatrixXd> Lx(nb), Zinv(nb);
    MatrixXd M = MatrixXd::Zero(k, k);
    bool factor_ok = true;
    for (int q = 0; q < nb && factor_ok; ++q) {
      const auto& rb = red.blocks[q];
      const int s = rb.side;
      MatrixXd Lz;
      if (!Cholesky(X[q], &Lx[q]) || !Cholesky(Z[q], &Lz)) {
        factor_ok = false;
        break;
      }
      const MatrixXd R = Lz.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(s, s));
      Zinv[q] = R * R.transpose();
      const MatrixXd LxT = Lx[q].transpose();
      MatrixXd B(static_cast<Eigen::Index>(s) * s, k);
      for (int j = 0; j < k; ++j) {
        const MatrixXd Aj = Mat(rb.A.col(j), s);
        B.col(j) = Vec(LxT * Aj * R);
      }
      M.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
    }
    if (!factor_ok) break;
    M = MatrixXd(M.selfadjointView<Eigen::Lower>());
    // Symmetric diagonal scaling before factoring; M goes badly conditioned
    // as μ -> 0.
    const VectorXd dscale = M.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    MatrixXd Ms = dscale.asDiagonal() * M * dscale.asDiagonal();
    Eigen::LLT<MatrixXd> mchol(Ms);
    if (mchol.info() != Eigen::Success) {
      Ms.diagonal().array() += 1e-13;
      mchol.compute(Ms);
      if (mchol.info() != Eigen::Success) break;
    }
    const auto schur_solve = [&](const VectorXd& rhs) -> VectorXd {
      VectorXd x = dscale.asDiagonal() * mchol.solve(dscale.asDiagonal() * rhs);
      for (int round = 0; round < 2; ++round) {
        const VectorXd r = rhs - M * x;
        x += dscale.asDiagonal() * mchol.solve(dscale.asDiagonal() * r);
      }
      return x;
    };

    // Common right-hand side part: A(X) + A(X Rd Z^-1).
    std::vector<MatrixXd> base(nb);
    for (int q = 0; q < nb; ++q) base[q] = X[q] + X[q] * rd[q] * Zinv[q];
    const VectorXd h_base = rp + apply_a(base);

    const auto direction = [&](const std::vector<MatrixXd>& centering, VectorXd* dxi,
                               std::vector<MatrixXd>* dX, std::vector<MatrixXd>* dZ) {
      // centering[q] = (σμI - dXa dZa) Z^-1 for the corrector, zero for the predictor.
      *dxi = schur_solve(h_base - apply_a(centering));
      dX->resize(nb);
      dZ->resize(nb);
      const auto expand = [&] {
        for (int q = 0; q < nb; ++q) {
          const auto& rb = red.blocks[q];
          (*dZ)[q] = rd[q] - Mat(rb.A * (*dxi), rb.side);
          (*dX)[q] = Sym(centering[q] - X[q] - X[q] * (*dZ)[q] * Zinv[q]);
        }
      };
      expand();
      // Refine against the operator itself: A(dX) = rp should hold exactly,
      // and d(A(dX))/d(dxi) = M.
      for (int round = 0; round < 3; ++round) {
        const VectorXd r = rp - apply_a(*dX);
        if (r.norm() <= 1e-12 * (1.0 + rp.norm())) break;
        *dxi += schur_solve(r);
        expand();
      }
    };

    const auto step_lengths = [&](const std::vector<MatrixXd>& dX, const std::vector<MatrixXd>& dZ,
                                  double* ap, double* ad) {
      *ap = std::numeric_limits<double>::infinity();
      *ad = std::numeric_limits<double>::infinity();
      for (int q = 0; q < nb; ++q) {
        MatrixXd Lz;
        Cholesky(Z[q], &Lz);
        *ap = std::min(*ap, MaxStep(Lx[q], dX[q]));
        *ad = std::min(*ad, MaxStep(Lz, dZ[q]));
      }
    };

    // Predictor.
    std::vector<MatrixXd> zero(nb);
    for (int q = 0; q < nb; ++q) zero[q] = MatrixXd::Zero(red.blocks[q].side, red.blocks[q].side);
    VectorXd dxi_a;
    std::vector<MatrixXd> dX_a, dZ_a;
    direction(zero, &dxi_a, &dX_a, &dZ_a);
    double ap = 0;
    double ad = 0;
    step_lengths(dX_a, dZ_a, &ap, &ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xz_aff = 0.0;
    for (int q = 0; q < nb; ++q) {
      xz_aff += ((X[q] + ap * dX_a[q]).array() * (Z[q] + ad * dZ_a[q]).array()).sum();
    }
    const double mu_aff = xz_aff / total_dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3), 0.0, 1.0);

    // Corrector.
    std::vector<MatrixXd> centering(nb);
    for (int q = 0; q < nb; ++q) {
      const int s = red.blocks[q].side;
      centering[q] = (sigma * mu * MatrixXd::Identity(s, s) - dX_a[q] * dZ_a[q]) * Zinv[q];
    }
    VectorXd dxi;
    std::vector<MatrixXd> dX, dZ;
    direction(centering, &dxi, &dX, &dZ);
    step_lengths(dX, dZ, &ap, &ad);
    const double gamma = 0.95;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (ap < 1e-12 && ad < 1e-12) break;

    for (int q = 0; q < nb; ++q) {
      X[q] = Sym(X[q] + ap * dX[q]);
      Z[q] = Sym(Z[q] + ad * dZ[q]);
    }
    xi += ad * dxi;
    sol.iterations = iter + 1;
  }

  // Not converged to the requested accuracy: fall back to the best iterate.
  if (best_gap <= 1e-5) {
    sol.primal_residual = best_pinf;
    sol.dual_residual = best_dinf;
    sol.relative_gap = best_gap;
    return finish(best_xi, SolveStatus::kNearOptimal, sol.iterations);
  }
  if (moment_gap <= kLooseGap) {
    sol.primal_residual = moment_pinf;
    sol.dual_residual = moment_dinf;
    sol.relative_gap = moment_gap;
    return finish(moment_xi, SolveStatus::kNearOptimal, sol.iterations);
  }
  return finish(xi, SolveStatus::kNumericalError, sol.iterations);
}

}  // namespace homocp
