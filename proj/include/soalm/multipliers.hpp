// Outer multiplier loops on the dual function ϑ_c(λ,μ) = min_x L_c:
// the classic first-order update and the generalized-Newton second-order
// update solving ∇ϑ_c + V Δy = 0 with V from the 𝕍_c set.
#pragma once

#include <limits>
#include <optional>
#include <string>

#include "soalm/aug_lagrangian.hpp"
#include "soalm/program.hpp"

namespace soalm {

struct DualState {
  Vector lambda;
  Vector mu;
  double c = 1.0;
  // inner solution at (lambda, mu) when already available (warm starts and
  // the KKT bookkeeping reuse it)
  std::optional<InnerResult> inner;

  Vector stacked() const;  // (λ, μ)
};

// ∇ϑ_c at y = (λ,μ) given the inner minimizer x⁺:
//   (−h(x⁺), (1/c)Π_K(μ − c g(x⁺)) − μ/c)
Vector grad_theta(const Program& p, double c, const Vector& x_plus,
                  const Vector& lambda, const Vector& mu);

// (λ − c h(x⁺), Π_K(μ − c g(x⁺))): the first-order update, also the
// multipliers at which A_c contracts the Lagrangian Hessian.
struct MultiplierImages {
  Vector lambda_c;
  Vector mu_c;
};
MultiplierImages multiplier_images(const Program& p, double c, const Vector& x_plus,
                                   const Vector& lambda, const Vector& mu);

// A_c = hess_lagrangian(x⁺, λ_c, μ_c) + c JhᵀJh + c JgᵀWJg
SymMatrix build_Ac(const Program& p, double c, const Vector& x_plus,
                   const Vector& lambda, const Vector& mu, const SubdiffElement& W);

struct VOperator {
  SymMatrix V;  // (m+dimZ) square, symmetric negative semidefinite
};

// V = −Bᵀ A_c⁻¹ B − (1/c)·blockdiag(0_m, I−W) with B = [Jhᵀ | JgᵀW].
// Throws std::runtime_error("A_c not positive definite") when the
// factorization of A_c fails; the dual Newton step is not defined there.
VOperator build_V(const Program& p, double c, const Vector& x_plus,
                  const Vector& lambda, const Vector& mu, const SubdiffElement& W);

enum class Method { First, Second };

struct SolveOptions {
  Method method = Method::Second;
  double c = 1.0;
  double outer_tol = 1e-12;   // on the total KKT residual
  int max_outer = 100;
  InnerOptions inner;
  Vector x_start;                // first inner start; zeros when empty
  bool track_reference = false;  // record ηᵏ = ‖yᵏ − y*‖ when a reference exists
  double eta_stop = 1e-20;       // extra stop in reference mode
};

struct HistoryEntry {
  int k = 0;
  Vector lambda, mu, x;
  KKTResidual kkt;
  double eta = std::numeric_limits<double>::quiet_NaN();
  double step_norm = 0.0;  // ‖yᵏ − yᵏ⁻¹‖, 0 for k = 0
  bool fallback = false;   // the step that produced this iterate fell back
};

struct RateEstimate {
  double linear_rate = 0.0;  // geometric mean of consecutive ratios over the tail
  double order_q = 0.0;      // log ηᵏ⁺¹ vs log ηᵏ regression slope over the tail
  int tail_length = 0;       // in-window points used
  bool superlinear_evidence() const { return order_q > 1.2; }
};

struct SolveReport {
  std::string problem;
  std::string method;
  double c = 1.0;
  std::vector<HistoryEntry> history;  // length = outer_iterations + 1
  bool converged = false;
  bool inner_failed = false;
  std::optional<RateEstimate> rate;   // from the η history when computable

  int outer_iterations() const { return int(history.size()) - 1; }
  int fallback_count() const;
  double kkt_total() const;  // at the last iterate
};

// One classic update λ⁺ = λ − c h(x⁺), μ⁺ = Π_K(μ − c g(x⁺)). Runs the inner
// solve at (λ,μ) unless state.inner is already set.
DualState first_order_step(const Program& p, const DualState& state,
                           const InnerOptions& opt = {});

// One generalized-Newton update; falls back to the first-order image when
// −V fails the SPD factorization, the trial inner solve fails, or the trial
// point worsens the total KKT residual by more than 10x. fallback_used
// reports which branch was taken.
DualState second_order_step(const Program& p, const DualState& state,
                            const InnerOptions& opt, bool& fallback_used);

SolveReport solve(const Program& p, const Vector& y0, const SolveOptions& opt);

// Checks the generalized Hessian positivity (every sampled A ≻ 0) and the
// Newton-well-posedness (every sampled V ≺ 0) at a KKT point, sampling the
// deterministic subdifferential element plus the per-kink-block alternatives.
struct AssumptionReport {
  bool pass = false;
  double min_eig_A = 0.0;  // worst over samples
  double max_eig_V = 0.0;  // worst over samples
  int sampled = 0;
  std::string detail;
};

AssumptionReport check_assumptions(const Program& p, double c, const Vector& x,
                                   const Vector& lambda, const Vector& mu);

}  // namespace soalm
