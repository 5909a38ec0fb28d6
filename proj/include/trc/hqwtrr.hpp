#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trc/error.hpp"
#include "trc/robust_loss.hpp"
#include "trc/tensor.hpp"

namespace trc {

enum class LambdaMode {
  factor_of_mu_n,  // lambda = lambda_factor * mu * N, recomputed as mu grows
  absolute         // lambda = lambda_factor, fixed
};

/// Hyper-parameters of the half-quadratic weighted tensor-ring solver.
struct SolverConfig {
  double mu0 = 1e-4;
  double lambda_factor = 2.0;
  LambdaMode lambda_mode = LambdaMode::factor_of_mu_n;
  double alpha = 1.1;
  /// Unfolding depth; 0 selects ceil(N/2).
  std::size_t d = 0;
  /// Target rank per unfolding k. A single entry is broadcast to all modes.
  std::vector<std::size_t> ranks;
  double epsilon = 1e-3;
  std::size_t max_iters = 300;
  /// The stopping test is not evaluated before this many iterations.
  std::size_t min_iters = 10;
  LossFamily estimator = LossFamily::cauchy;
  AdaptiveC adaptive;
  /// Force Q = 1 everywhere on the support (plain least-squares fit).
  bool unit_weights = false;
  /// Rank-indicator weights. Under a hard rank constraint they scale a {0, inf}
  /// function, so the iterates do not depend on them.
  std::vector<double> beta;
  /// Run the N per-mode Z updates concurrently.
  bool parallel_modes = true;

  std::size_t depth(std::size_t order) const { return d == 0 ? (order + 1) / 2 : d; }
  std::size_t rank(std::size_t k) const;  // 0-based k
  double lambda(double mu, std::size_t order) const {
    return lambda_mode == LambdaMode::factor_of_mu_n ? lambda_factor * mu * static_cast<double>(order)
                                                     : lambda_factor;
  }
};

/// Throws ConfigError when the configuration cannot drive a solve of `order`.
void validate(const SolverConfig& cfg, std::size_t order);

struct SolverState {
  DenseTensor x;
  DenseTensor q;
  std::vector<DenseTensor> z;
  std::vector<DenseTensor> g;
  double mu = 0.0;
  double c = 0.0;
  std::size_t iter = 0;
  std::vector<double> rel_change_history;

  /// X = Q = 0, Z^(k) = G^(k) = 0 for k = 1..N, mu = mu0.
  static SolverState initial(const Dims& dims, const SolverConfig& cfg);
};

struct IterationRecord {
  double c = 0.0;
  double mu = 0.0;
  double rel_change = 0.0;
  double x_norm = 0.0;
  double max_dual_residual = 0.0;  // max_k ||Z^(k) - X||_F
};

enum class Termination { converged, max_iters };

std::string_view to_string(Termination t);

struct SolveReport {
  std::size_t iterations = 0;
  double final_rel_change = 0.0;
  Termination termination = Termination::max_iters;
  std::vector<IterationRecord> history;

  /// |relchange(t-1) - relchange(t)| at the last iteration (inf if < 2 iterations).
  double final_rel_change_delta() const;
  std::string to_text() const;
};

struct SolveResult {
  DenseTensor x;
  SolveReport report;
};

/// Raised when the iterates become non-finite; carries the partial report.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, SolveReport report)
      : NumericError(what), report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Best rank-r approximation (Eckart-Young). r >= min(rows, cols) returns m.
Matrix truncated_svd(const Matrix& m, std::size_t r);

/// Z^(k) = fold(Pi_{r_k}(unfold(X - G^(k)/mu))) for every k.
void z_update(SolverState& state, const SolverConfig& cfg);

/// X = L + Theta o (M - L), L = mean_k(Z^(k) + G^(k)/mu),
/// Theta = lambda W o Q / (lambda W o Q + mu N).
DenseTensor x_update(const std::vector<DenseTensor>& z, const std::vector<DenseTensor>& g,
                     const DenseTensor& q, const DenseTensor& w, const DenseTensor& m, double mu,
                     double lambda);

/// G^(k) += mu (Z^(k) - X).
void g_update(std::vector<DenseTensor>& g, const std::vector<DenseTensor>& z, const DenseTensor& x,
              double mu);

/// Runs the solver to termination. The observation support is {W > 0}.
SolveResult solve(const DenseTensor& m, const DenseTensor& w, const SolverConfig& cfg);

struct Lemma1Outcome {
  bool norm_decrease = false;   // ||A||^2 < ||B||^2
  bool bounded_change = false;  // ||B - A||^2 <= 2 ||C||^2
};

/// Evaluates both conditions for A = Pi_r(B - C).
Lemma1Outcome lemma1_check(const Matrix& b, const Matrix& c, std::size_t r);

}  // namespace trc
