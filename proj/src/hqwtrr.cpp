#include "trc/hqwtrr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trc/kernels.hpp"

namespace trc {

std::size_t SolverConfig::rank(std::size_t k) const {
  if (ranks.empty()) throw ConfigError("solver ranks are not set");
  return ranks.size() == 1 ? ranks[0] : ranks.at(k);
}

void validate(const SolverConfig& cfg, std::size_t order) {
  if (!(cfg.mu0 > 0.0)) throw ConfigError("mu0 must be positive");
  if (!(cfg.alpha >= 1.0)) throw ConfigError("alpha must be at least 1");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(cfg.lambda_factor > 0.0)) throw ConfigError("lambda must be positive");
  if (!(cfg.adaptive.eta > 0.0) || !(cfg.adaptive.c_min > 0.0)) {
    throw ConfigError("eta and c_min must be positive");
  }
  if (cfg.max_iters == 0) throw ConfigError("max_iters must be positive");
  const std::size_t d = cfg.depth(order);
  if (d < 1 || d > order) throw ConfigError("unfolding depth d must lie in [1, N]");
  if (cfg.ranks.size() != 1 && cfg.ranks.size() != order) {
    throw ConfigError("expected 1 or " + std::to_string(order) + " ranks, got " +
                      std::to_string(cfg.ranks.size()));
  }
  for (std::size_t r : cfg.ranks) {
    if (r < 1) throw ConfigError("ranks must be at least 1");
  }
}

SolverState SolverState::initial(const Dims& dims, const SolverConfig& cfg) {
  SolverState s;
  s.x = DenseTensor(dims);
  s.q = DenseTensor(dims);
  s.z.assign(dims.size(), DenseTensor(dims));
  s.g.assign(dims.size(), DenseTensor(dims));
  s.mu = cfg.mu0;
  s.c = cfg.adaptive.c_min;
  return s;
}

std::string_view to_string(Termination t) {
  return t == Termination::converged ? "converged" : "max_iters";
}

double SolveReport::final_rel_change_delta() const {
  if (history.size() < 2) return std::numeric_limits<double>::infinity();
  return std::abs(history[history.size() - 2].rel_change - history.back().rel_change);
}

std::string SolveReport::to_text() const {
  std::ostringstream os;
  os.precision(10);
  os << "iterations " << iterations << "\n";
  os << "termination " << to_string(termination) << "\n";
  os << "final_rel_change " << final_rel_change << "\n";
  os << "iter c mu rel_change x_norm max_dual_residual\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& h = history[i];
    os << i + 1 << ' ' << h.c << ' ' << h.mu << ' ' << h.rel_change << ' ' << h.x_norm << ' '
       << h.max_dual_residual << "\n";
  }
  return os.str();
}

Matrix truncated_svd(const Matrix& m, std::size_t r) {
  if (r < 1) throw ArgumentError("truncated_svd: rank must be at least 1");
  const auto small = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  if (r >= small) return m;
  const auto rr = static_cast<Eigen::Index>(r);
  // Only the factor on the short side is needed: Pi_r(M) = M V_r V_r^T for tall
  // M and U_r U_r^T M for wide M.
  if (m.rows() >= m.cols()) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericError("SVD failed to converge");
    const auto v = svd.matrixV().leftCols(rr);
    return (m * v) * v.transpose();
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) throw NumericError("SVD failed to converge");
  const auto u = svd.matrixU().leftCols(rr);
  return u * (u.transpose() * m);
}

void z_update(SolverState& state, const SolverConfig& cfg) {
  const Dims& dims = state.x.dims();
  const std::size_t n = dims.size();
  const std::size_t d = cfg.depth(n);
  const double inv_mu = 1.0 / state.mu;
  // Each k writes only its own Z^(k), so the result is independent of scheduling.
#pragma omp parallel for schedule(dynamic, 1) if (cfg.parallel_modes && n > 1)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(n); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    DenseTensor shifted(dims);
    const auto& x = state.x.values();
    const auto& g = state.g[k].values();
    auto out = shifted.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - g[i] * inv_mu;
    const UnfoldSpec spec{k + 1, d};
    state.z[k] = tr_fold(truncated_svd(tr_unfold(shifted, spec), cfg.rank(k)), dims, spec);
  }
}

DenseTensor x_update(const std::vector<DenseTensor>& z, const std::vector<DenseTensor>& g,
                     const DenseTensor& q, const DenseTensor& w, const DenseTensor& m, double mu,
                     double lambda) {
  const std::size_t n = z.size();
  if (n == 0 || g.size() != n) throw DimensionError("x_update: need N matching Z and G tensors");
  for (std::size_t k = 0; k < n; ++k) {
    if (!z[k].same_shape(m) || !g[k].same_shape(m)) throw DimensionError("x_update: shape mismatch");
  }
  if (!q.same_shape(m) || !w.same_shape(m)) throw DimensionError("x_update: shape mismatch");
  DenseTensor l(m.dims());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    kernels::parallel::consensus_accumulate(l.values(), z[k].values(), g[k].values(), mu, inv_n);
  }
  DenseTensor x(m.dims());
  kernels::parallel::blend(x.values(), l.values(), m.values(), w.values(), q.values(), lambda,
                           mu * static_cast<double>(n));
  return x;
}

void g_update(std::vector<DenseTensor>& g, const std::vector<DenseTensor>& z, const DenseTensor& x,
              double mu) {
  if (g.size() != z.size()) throw DimensionError("g_update: Z and G counts differ");
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g[k].same_shape(x) || !z[k].same_shape(x)) throw DimensionError("g_update: shape mismatch");
    kernels::parallel::dual_update(g[k].values(), z[k].values(), x.values(), mu);
  }
}

SolveResult solve(const DenseTensor& m, const DenseTensor& w, const SolverConfig& cfg) {
  if (!m.same_shape(w)) throw DimensionError("solve: M and W differ in shape");
  const Dims& dims = m.dims();
  const std::size_t n = dims.size();
  validate(cfg, n);
  for (double v : w.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("solve: weights must lie in [0, 1]");
  }

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) support.push_back(i);
  }

  SolverState state = SolverState::initial(dims, cfg);
  SolveReport report;
  DenseTensor unit_q(dims);
  for (std::size_t i : support) unit_q[i] = 1.0;

  std::vector<double> residuals(support.size());
  DenseTensor residual(dims);
  for (std::size_t t = 0; t < cfg.max_iters; ++t) {
    state.iter = t + 1;
    state.mu = cfg.mu0 * std::pow(cfg.alpha, static_cast<double>(t));

    // c and Q from the residual of the current iterate on the support.
    {
      const auto mv = m.values();
      const auto xv = state.x.values();
      auto rv = residual.values();
      for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = mv[i] - xv[i];
      for (std::size_t j = 0; j < support.size(); ++j) residuals[j] = rv[support[j]];
    }
    state.c = support.empty() ? cfg.adaptive.c_min : adapt_c(cfg.adaptive, residuals);
    state.q = cfg.unit_weights ? unit_q : weight_tensor(Estimator{cfg.estimator, state.c}, residual, w);

    z_update(state, cfg);
    DenseTensor x_next = x_update(state.z, state.g, state.q, w, m, state.mu, cfg.lambda(state.mu, n));
    g_update(state.g, state.z, x_next, state.mu);

    const double prev_norm = frob_norm(state.x);
    const double change = std::sqrt(kernels::parallel::diff_sum_squares(x_next.values(), state.x.values()));
    const double rel = prev_norm > 0.0 ? change / prev_norm : change;

    IterationRecord rec;
    rec.c = state.c;
    rec.mu = state.mu;
    rec.rel_change = rel;
    rec.x_norm = frob_norm(x_next);
    for (const auto& zk : state.z) {
      rec.max_dual_residual = std::max(
          rec.max_dual_residual, std::sqrt(kernels::parallel::diff_sum_squares(zk.values(), x_next.values())));
    }
    report.history.push_back(rec);
    state.rel_change_history.push_back(rel);
    report.iterations = state.iter;
    report.final_rel_change = rel;

    if (!std::isfinite(rec.x_norm) || !std::isfinite(rel)) {
      throw DivergenceError("solver diverged at iteration " + std::to_string(state.iter), report);
    }
    state.x = std::move(x_next);

    const auto& hist = state.rel_change_history;
    if (state.iter >= cfg.min_iters && hist.size() >= 2 &&
        std::abs(hist[hist.size() - 2] - hist.back()) < cfg.epsilon) {
      report.termination = Termination::converged;
      break;
    }
  }
  return {std::move(state.x), std::move(report)};
}

Lemma1Outcome lemma1_check(const Matrix& b, const Matrix& c, std::size_t r) {
  if (b.rows() != c.rows() || b.cols() != c.cols()) throw DimensionError("lemma1_check: shape mismatch");
  const Matrix a = truncated_svd(b - c, r);
  // The projection is computed in floating point, so an exactly feasible B
  // comes back with O(eps) error; allow that much slack on the inequality.
  const double slack =
      64.0 * std::numeric_limits<double>::epsilon() * (b.squaredNorm() + c.squaredNorm());
  Lemma1Outcome out;
  out.norm_decrease = a.squaredNorm() < b.squaredNorm();
  out.bounded_change = (b - a).squaredNorm() <= 2.0 * c.squaredNorm() + slack;
  return out;
}

}  // namespace trc
