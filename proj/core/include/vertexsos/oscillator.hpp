#pragma once

#include <functional>
#include <vector>

#include "vertexsos/tensor.hpp"

namespace vsos {

/// Truncated q-oscillator on Fock states |0> .. |n_max>.
/// A|n> = [n]_q |n-1>, Adag|n> = |n+1> (top state annihilated), D = diag(0..n_max).
struct QOscillatorRep {
  std::size_t n_max = 1;
  cx q{0.5, 0};
  SquareOperator a, adag, d, qd, qd_inv;

  QOscillatorRep() : a(2), adag(2), d(2), qd(2), qd_inv(2) {}
};

QOscillatorRep build_q_oscillator(std::size_t n_max, cx q);

struct LOperatorParams {
  cx xi{1, 0};
  double s = 0, s_i = 0, s_j = 0;  // xi exponents
  // lambda_3, evaluated at q^{-2} xi^s for the scalar transfer prefactor.
  std::function<cx(cx)> lambda3 = [](cx x) { return x; };
  int site_j = 0, site_k = 0;
};

/// 3x3 block operator on C^3 (x) Fock (x) Fock; block (3,1) is zero.
SquareOperator l_operator(const QOscillatorRep& osc, const LOperatorParams& p);

struct TransferPlan {
  std::size_t m = 0, n = 0;  // volume bounds: j = 0..m, k = 0..n
  std::vector<double> u_seq, v_seq, w_seq;
  // Per-site phase, default 0; called as alpha(i, j, k) with i = 0.
  std::function<double(int, int, int)> alpha = [](int, int, int) { return 0.0; };
  double field_h = 0;
  std::size_t n_max = 1;
  cx q{0.5, 0};

  std::size_t factor_count() const { return (m + 1) * (n + 1); }
};

struct TransferResult {
  SquareOperator matrix;
  cx trace;
  TransferResult() : matrix(1), trace(0) {}
};

/// Ordered product (j-major, then k ascending) of scalar-prefactored
/// L-operators; returns the product and its trace over the full space.
TransferResult finite_volume_transfer(const TransferPlan& plan, const LOperatorParams& p);

/// Same product with the per-factor diag(e^H, e^H, e^H) field prefactor and
/// the per-site exp(alpha) phases; equals e^{H F} times the field-free
/// product for F factors.
SquareOperator monodromy_with_field(const TransferPlan& plan, const LOperatorParams& p);

struct ConvergenceReport {
  std::vector<cx> normalized_traces;            // trace / dim, one per plan
  std::vector<double> successive_differences;   // Frobenius diffs of normalized matrices
};

/// Reports trace values and successive differences along a plan sequence;
/// never asserts convergence.
ConvergenceReport convergence_probe(const std::vector<TransferPlan>& plans,
                                    const LOperatorParams& p);

}  // namespace vsos
