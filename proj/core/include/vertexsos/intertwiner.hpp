#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "vertexsos/errors.hpp"
#include "vertexsos/tensor.hpp"

namespace vsos {

enum class CompKind { Beta, Gamma, Zed };

/// The three components of an intertwining vector X_l(u).
struct ComponentVector {
  cx beta{1, 0}, gamma{1, 0}, z{1, 0};
  int site = 0;
  cx spectral{0, 0};

  cx comp(CompKind k) const {
    switch (k) {
      case CompKind::Beta: return beta;
      case CompKind::Gamma: return gamma;
      default: return z;
    }
  }
};

// ---------------------------------------------------------------------------
// Relation system
// ---------------------------------------------------------------------------

/// One scalar relation R[e] * X_l(u)[p] * X_{l+1}(v)[p'] =
/// X_l(v)[p] * X_{l+1}(u)[p'] * W[e].
struct ScalarRelation {
  std::size_t entry_row, entry_col;  // e = (row, col) of R and W
  std::size_t comp_l, comp_r;        // p, p' component indices
  std::size_t group;                 // which of the d^2 component pairings
};

struct RelationSystem {
  std::size_t d = 3;  // local dimension: 3 (20V) or 2 (reduced)
  cx u, v;
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // (p, p') pairings
  std::vector<ScalarRelation> full;          // over all d^2 x d^2 entries
  std::vector<ScalarRelation> as_displayed;  // 4x4-indexed corner subsystem
};

RelationSystem build_relation_system(const SquareOperator& r, cx u, cx v);

// ---------------------------------------------------------------------------
// Sequence identifications
// ---------------------------------------------------------------------------

/// One side of a pairing: an ordered product K1_{site}(v) K2_{site'}(u).
struct ProductTerm {
  CompKind first_kind, second_kind;
  int first_site, second_site;  // offsets from l: 0 or 1
  bool operator==(const ProductTerm&) const = default;
};

/// The involutive map on the 9 component products: the order of the
/// spectral parameters is maintained, the (kind, site) labels swap.
ProductTerm sequence_identification(const ProductTerm& t);
std::vector<ProductTerm> sequence_identification_domain();

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

struct GaugePin {
  std::size_t vector_id;  // 0 = psi_u_ab, 1 = psi_v_bc, 2 = psi_v_ab', 3 = psi_u_b'c
  std::size_t component;
  cx value{1, 0};
};

struct IntertwinerGauge {
  std::vector<GaugePin> pins;
  static IntertwinerGauge default_for(std::size_t d);
  void validate() const;  // at least 3 pins
};

enum class WeightMode { Full, Theorem };

struct HeightMove {
  // Three lattice positions mapped to three others, as (from, to) rows.
  std::array<std::array<int, 2>, 3> rows;
};

struct SOSWeightMatrix {
  WeightMode mode = WeightMode::Full;
  SquareOperator full{1};
  cx c1{1, 0}, c2{1, 0}, c3{1, 0};
  std::array<HeightMove, 3> moves{};

  /// Theorem mode projects onto c1 * I; the height-move triples do not
  /// index matrix entries, so c2/c3 stay attached to their moves only.
  SquareOperator as_full(std::size_t d2) const;
};

enum class SolveMethod { Numeric, Theorem };

struct IntertwinerSolution {
  std::vector<cx> psi_ab_prime, psi_bprime_c;  // the published vectors
  std::vector<cx> psi_u_ab, psi_v_bc;          // the left-hand-side vectors
  SOSWeightMatrix w;
  double residual = 0;
  SolveMethod method = SolveMethod::Numeric;
  int height_a = 0, height_b_prime = 1, height_c = 2;
  std::vector<double> residual_history;  // per ALS sweep
  std::size_t iterations = 0;
  bool converged = true;
};

/// NonConvergence carrying the best solution reached so far.
struct NonConvergenceWithSolution : NonConvergence {
  IntertwinerSolution partial;
  NonConvergenceWithSolution(const std::string& m, IntertwinerSolution p)
      : NonConvergence(m), partial(std::move(p)) {}
};

/// Heights adjacent to both a and c (|step| = 1 admissibility).
std::vector<int> admissible_intermediate_heights(int a, int c);

/// Alternating least squares on the bilinear componentwise system. The
/// stored residual is the Frobenius norm over all (entry, component)
/// relations; deterministic all-ones initialization of free entries.
IntertwinerSolution solve_intertwiner_numeric(const SquareOperator& r, cx u, cx v,
                                              const IntertwinerGauge& gauge,
                                              double tol = 1e-12,
                                              std::size_t max_iter = 500);

/// Closed-form construction: psi_ab' = [1, 1, C1], psi_b'c = [1, 1/C1, 1],
/// C1 = R11(u) + 1, C2 = R11(u+l+w)/R11(l+w), C3 = R11(u(1+l+w))/R11(l+w).
IntertwinerSolution theorem_solution(int l, cx u, const std::function<cx(cx)>& r11_of,
                                     cx w_aux);

/// (*_gamma, *_beta) with *_gamma = T1 (T2 T3 + 1)/(T2' T3' + 1) and
/// *_beta its reciprocal.
std::pair<cx, cx> star_gamma_beta(cx t1, cx t2, cx t3, cx t2p, cx t3p);

/// Frobenius norm over all (entry, component) pairs of
/// R[e] (psi_u_ab (x) psi_v_bc)[g] - W[e] (sum_b' psi_v_ab' (x) psi_u_b'c)[g].
double intertwining_residual(const SquareOperator& r, const std::vector<cx>& psi_u_ab,
                             const std::vector<cx>& psi_v_bc,
                             const std::vector<std::vector<cx>>& psi_v_abp,
                             const std::vector<std::vector<cx>>& psi_u_bpc,
                             const SquareOperator& w);

// ---------------------------------------------------------------------------
// Relation chain
// ---------------------------------------------------------------------------

struct ChainInputs {
  ComponentVector l_u, l_v;     // site l at u and at v
  ComponentVector l1_u, l1_v;   // site l+1
  ComponentVector l2_w;         // site l+2 at the third parameter
};

struct ChainReport {
  std::vector<double> two_param;    // per-identity |rho - T rho|
  std::vector<double> three_param;  // with the third-parameter insertions
};

ChainReport relation_chain_check(const ChainInputs& in, cx t_ratio_value);

}  // namespace vsos
