#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "vertexsos/tensor.hpp"

namespace vsos {

struct QParams {
  cx q{0.5, 0};
  double hbar = 0;
  /// Rejects q for which some 1 - q^i vanishes, i <= order.
  void validate(int order = 64) const;
};

struct TruncationSpec {
  int series_order = 16;  // q-exponential partial-sum order, <= 64
  int m_max = -1;         // imaginary-root cutoff; -1 means empty product
  int rank = 1;           // r, the bound in the double sums
  void validate() const;
};

/// Concrete matrices for the e/f/h generator families plus coefficient
/// tables. Coefficient lookups never fail: missing entries default to 1.
struct GeneratorRep {
  std::size_t dim = 2;

  // Positive-root generators at m = 0, simple roots first.
  std::vector<SquareOperator> e_root, f_root;
  std::size_t n_simple = 1;  // first n_simple roots are simple

  // Cartan generators, one per simple root.
  std::vector<SquareOperator> h;

  // Optional per-(root, m) overrides; default falls back to the m = 0 matrix.
  std::map<std::pair<int, int>, SquareOperator> e_override, f_override;
  std::map<std::pair<int, int>, SquareOperator> e_ge_override, f_ge_override;
  // Imaginary-root generators keyed (m, simple-root index), default e_root.
  std::map<std::pair<int, int>, SquareOperator> e_im_override, f_im_override;

  // Coefficient tables, default value 1.
  std::map<std::pair<int, int>, cx> s_coef;          // (m, root)
  std::map<std::pair<int, int>, cx> s_ge_coef;       // (m, root), the delta-gamma side
  std::map<std::tuple<int, int, int>, cx> u_coef;    // (m, i, j)
  std::map<std::pair<int, int>, cx> b_coef;          // (i, j)
  std::map<std::pair<int, int>, cx> beta_coef;       // (i, j)

  std::size_t n_roots() const { return e_root.size(); }

  SquareOperator e(int root, int m) const;
  SquareOperator f(int root, int m) const;
  SquareOperator e_ge(int root, int m) const;
  SquareOperator f_ge(int root, int m) const;
  SquareOperator e_im(int m, int i) const;  // i is 1-based
  SquareOperator f_im(int m, int i) const;

  cx s(int m, int root) const;
  cx s_ge(int m, int root) const;
  cx u(int m, int i, int j) const;
  cx b(int i, int j) const;
  cx beta(int i, int j) const;

  void validate() const;

  /// 2-dim fundamental rep: one root, nilpotent E/F, h = diag(1,-1).
  static GeneratorRep fundamental2();
  /// 3-dim rep with two simple roots and their sum.
  static GeneratorRep fundamental3();
};

enum class FactorKind { LeDelta, SimDelta, GeDelta, K, Windowed };
enum class WindowedFamily { QExpTensor, CartanTensor };  // u e(x)f vs beta h(x)h

struct FactorSpec {
  FactorKind kind = FactorKind::LeDelta;
  // Inclusive window bounds on the summation index for Windowed factors.
  int lo = 1, hi = 0;  // lo > hi means empty
  bool plus_one = false;
  WindowedFamily family = WindowedFamily::QExpTensor;
  bool q_series = false;  // exp_q instead of exp for the windowed factor
  bool window_empty() const { return lo > hi; }
};

cx q_factorial(int n, cx q);

cx q_exponential(cx z, cx q, int n_max);
SquareOperator q_exponential(const SquareOperator& x, cx q, int n_max);

/// K = exp[hbar * sum_ij b_ij h_i (x) h_j], on dim^2.
SquareOperator k_matrix(const GeneratorRep& rep, const QParams& qp);

SquareOperator universal_r_factor(const FactorSpec& spec, const GeneratorRep& rep,
                                  const TruncationSpec& trunc, const QParams& qp);

/// Ordered product R_{<=delta} R_{~delta} R_{>=delta} K.
SquareOperator compose_universal_r(const GeneratorRep& rep, const TruncationSpec& trunc,
                                   const QParams& qp);

/// The exponent of a windowed factor. Windows select the index pairs
/// (i, j) in [1, r]^2 whose larger index lies in [lo, hi], so that
/// exponent(lo, hi) = exponent(lo, mid) + exponent(mid+1, hi) exactly and
/// the full window (1, r) coincides with the middle-factor exponent.
SquareOperator windowed_exponent(const FactorSpec& spec, const GeneratorRep& rep,
                                 const TruncationSpec& trunc, const QParams& qp);

SquareOperator windowed_factor(const FactorSpec& spec, const GeneratorRep& rep,
                               const TruncationSpec& trunc, const QParams& qp);

/// T1 (T2 T3 + I) (T2' T3' + I)^{-1} T4.
SquareOperator t_ratio(const SquareOperator& t1, const SquareOperator& t2,
                       const SquareOperator& t3, const SquareOperator& t2p,
                       const SquareOperator& t3p, const SquareOperator& t4);

}  // namespace vsos
