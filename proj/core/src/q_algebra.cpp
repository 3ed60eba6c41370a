#include "vertexsos/q_algebra.hpp"

#include <cmath>

namespace vsos {

namespace {

constexpr double kRootTol = 1e-14;

SquareOperator unit_matrix(std::size_t dim, std::size_t i, std::size_t j) {
  SquareOperator m(dim);
  m(i, j) = cx(1, 0);
  return m;
}

}  // namespace

void QParams::validate(int order) const {
  if (q == cx(0, 0)) throw SchemaError("q must be nonzero");
  cx p(1, 0);
  for (int i = 1; i <= order; ++i) {
    p *= q;
    if (std::abs(cx(1, 0) - p) < kRootTol) {
      throw RootOfUnity("1 - q^" + std::to_string(i) + " vanishes");
    }
  }
  if (!std::isfinite(hbar)) throw SchemaError("hbar must be finite");
}

void TruncationSpec::validate() const {
  if (series_order < 0 || series_order > 64) throw SchemaError("series_order must be in [0, 64]");
  if (m_max < -1) throw SchemaError("m_max must be >= -1");
  if (rank < 1) throw SchemaError("rank must be positive");
}

SquareOperator GeneratorRep::e(int root, int m) const {
  if (auto it = e_override.find({root, m}); it != e_override.end()) return it->second;
  if (root < 0 || root >= static_cast<int>(e_root.size())) {
    throw DimensionMismatch("missing generator entry e(" + std::to_string(root) + ")");
  }
  return e_root[static_cast<std::size_t>(root)];
}

SquareOperator GeneratorRep::f(int root, int m) const {
  if (auto it = f_override.find({root, m}); it != f_override.end()) return it->second;
  if (root < 0 || root >= static_cast<int>(f_root.size())) {
    throw DimensionMismatch("missing generator entry f(" + std::to_string(root) + ")");
  }
  return f_root[static_cast<std::size_t>(root)];
}

SquareOperator GeneratorRep::e_ge(int root, int m) const {
  if (auto it = e_ge_override.find({root, m}); it != e_ge_override.end()) return it->second;
  return e(root, m);
}

SquareOperator GeneratorRep::f_ge(int root, int m) const {
  if (auto it = f_ge_override.find({root, m}); it != f_ge_override.end()) return it->second;
  return f(root, m);
}

SquareOperator GeneratorRep::e_im(int m, int i) const {
  if (auto it = e_im_override.find({m, i}); it != e_im_override.end()) return it->second;
  if (i < 1 || i > static_cast<int>(n_simple)) {
    throw DimensionMismatch("missing generator entry e_im(" + std::to_string(i) + ")");
  }
  return e_root[static_cast<std::size_t>(i - 1)];
}

SquareOperator GeneratorRep::f_im(int m, int i) const {
  if (auto it = f_im_override.find({m, i}); it != f_im_override.end()) return it->second;
  if (i < 1 || i > static_cast<int>(n_simple)) {
    throw DimensionMismatch("missing generator entry f_im(" + std::to_string(i) + ")");
  }
  return f_root[static_cast<std::size_t>(i - 1)];
}

cx GeneratorRep::s(int m, int root) const {
  auto it = s_coef.find({m, root});
  return it == s_coef.end() ? cx(1, 0) : it->second;
}

cx GeneratorRep::s_ge(int m, int root) const {
  auto it = s_ge_coef.find({m, root});
  return it == s_ge_coef.end() ? cx(1, 0) : it->second;
}

cx GeneratorRep::u(int m, int i, int j) const {
  auto it = u_coef.find({m, i, j});
  return it == u_coef.end() ? cx(1, 0) : it->second;
}

cx GeneratorRep::b(int i, int j) const {
  auto it = b_coef.find({i, j});
  return it == b_coef.end() ? cx(1, 0) : it->second;
}

cx GeneratorRep::beta(int i, int j) const {
  auto it = beta_coef.find({i, j});
  return it == beta_coef.end() ? cx(1, 0) : it->second;
}

void GeneratorRep::validate() const {
  if (dim == 0) throw SchemaError("rep dim must be positive");
  if (e_root.size() != f_root.size()) throw SchemaError("e/f root table sizes differ");
  if (n_simple > e_root.size()) throw SchemaError("n_simple exceeds root count");
  auto check = [&](const SquareOperator& m) {
    if (m.dim() != dim) throw DimensionMismatch("generator dim mismatch");
  };
  for (const auto& m : e_root) check(m);
  for (const auto& m : f_root) check(m);
  for (const auto& m : h) check(m);
}

GeneratorRep GeneratorRep::fundamental2() {
  GeneratorRep r;
  r.dim = 2;
  r.e_root = {unit_matrix(2, 0, 1)};
  r.f_root = {unit_matrix(2, 1, 0)};
  r.n_simple = 1;
  r.h = {SquareOperator::diagonal({cx(1, 0), cx(-1, 0)})};
  return r;
}

GeneratorRep GeneratorRep::fundamental3() {
  GeneratorRep r;
  r.dim = 3;
  // Simple roots first, then their sum.
  r.e_root = {unit_matrix(3, 0, 1), unit_matrix(3, 1, 2), unit_matrix(3, 0, 2)};
  r.f_root = {unit_matrix(3, 1, 0), unit_matrix(3, 2, 1), unit_matrix(3, 2, 0)};
  r.n_simple = 2;
  r.h = {SquareOperator::diagonal({cx(1, 0), cx(-1, 0), cx(0, 0)}),
         SquareOperator::diagonal({cx(0, 0), cx(1, 0), cx(-1, 0)})};
  return r;
}

cx q_factorial(int n, cx q) {
  if (n < 0) throw SchemaError("q_factorial: n must be nonnegative");
  // [n]_q! = prod_{1<=i<=n} (1 - q^i) / (1 - q)^n
  cx num(1, 0), pw(1, 0);
  for (int i = 1; i <= n; ++i) {
    pw *= q;
    const cx term = cx(1, 0) - pw;
    if (std::abs(term) < kRootTol) {
      throw RootOfUnity("q_factorial: 1 - q^" + std::to_string(i) + " vanishes");
    }
    num *= term;
  }
  cx den(1, 0);
  for (int i = 0; i < n; ++i) den *= (cx(1, 0) - q);
  return num / den;
}

cx q_exponential(cx z, cx q, int n_max) {
  cx sum(0, 0), zn(1, 0);
  for (int n = 0; n <= n_max; ++n) {
    sum += zn / q_factorial(n, q);
    zn *= z;
  }
  return sum;
}

SquareOperator q_exponential(const SquareOperator& x, cx q, int n_max) {
  SquareOperator sum = SquareOperator::identity(x.dim());
  SquareOperator xn = SquareOperator::identity(x.dim());
  for (int n = 1; n <= n_max; ++n) {
    xn = xn * x;
    if (xn.frobenius_norm() == 0) break;  // nilpotent: series terminates
    sum = sum + xn.scaled(cx(1, 0) / q_factorial(n, q));
  }
  return sum;
}

SquareOperator k_matrix(const GeneratorRep& rep, const QParams& qp) {
  rep.validate();
  const std::size_t d2 = rep.dim * rep.dim;
  SquareOperator exponent(d2);
  const int r = static_cast<int>(rep.h.size());
  for (int i = 1; i <= r; ++i) {
    for (int j = 1; j <= r; ++j) {
      exponent = exponent +
                 kron(rep.h[i - 1], rep.h[j - 1]).scaled(rep.b(i, j) * cx(qp.hbar, 0));
    }
  }
  return exponent.expm();
}

namespace {

SquareOperator root_factor_product(const GeneratorRep& rep, const TruncationSpec& trunc,
                                   const QParams& qp, bool ge_side) {
  const std::size_t d2 = rep.dim * rep.dim;
  SquareOperator prod = SquareOperator::identity(d2);
  const cx coef = qp.q - cx(1, 0) / qp.q;
  // Ordering pinned: root-major ascending, then m ascending.
  for (int root = 0; root < static_cast<int>(rep.n_roots()); ++root) {
    for (int m = 0; m <= trunc.m_max; ++m) {
      const cx s = ge_side ? rep.s_ge(m, root) : rep.s(m, root);
      if (s == cx(0, 0)) throw SingularDenominator("root factor: s coefficient is zero");
      const SquareOperator em = ge_side ? rep.e_ge(root, m) : rep.e(root, m);
      const SquareOperator fm = ge_side ? rep.f_ge(root, m) : rep.f(root, m);
      const SquareOperator arg = kron(em, fm).scaled(coef / s);
      prod = prod * q_exponential(arg, qp.q, trunc.series_order);
    }
  }
  return prod;
}

SquareOperator sim_delta_exponent(const GeneratorRep& rep, const TruncationSpec& trunc,
                                  const QParams& qp) {
  const std::size_t d2 = rep.dim * rep.dim;
  SquareOperator exponent(d2);
  const cx coef = qp.q - cx(1, 0) / qp.q;
  for (int m = 1; m <= trunc.m_max; ++m) {
    for (int i = 1; i <= trunc.rank; ++i) {
      for (int j = 1; j <= trunc.rank; ++j) {
        exponent = exponent +
                   kron(rep.e_im(m, i), rep.f_im(m, j)).scaled(coef * rep.u(m, i, j));
      }
    }
  }
  return exponent;
}

}  // namespace

SquareOperator windowed_exponent(const FactorSpec& spec, const GeneratorRep& rep,
                                 const TruncationSpec& trunc, const QParams& qp) {
  rep.validate();
  trunc.validate();
  const std::size_t d2 = rep.dim * rep.dim;
  SquareOperator exponent(d2);
  if (spec.window_empty()) return exponent;
  const int lo = std::max(spec.lo, 1);
  const int hi = std::min(spec.hi, trunc.rank);
  for (int i = 1; i <= trunc.rank; ++i) {
    for (int j = 1; j <= trunc.rank; ++j) {
      const int idx = std::max(i, j);
      if (idx < lo || idx > hi) continue;
      if (spec.family == WindowedFamily::QExpTensor) {
        const cx coef = qp.q - cx(1, 0) / qp.q;
        for (int m = 1; m <= trunc.m_max; ++m) {
          exponent = exponent +
                     kron(rep.e_im(m, i), rep.f_im(m, j)).scaled(coef * rep.u(m, i, j));
        }
      } else {
        if (i == j) continue;  // the beta sums exclude coincident Cartan indices
        if (i > static_cast<int>(rep.h.size()) || j > static_cast<int>(rep.h.size())) {
          throw DimensionMismatch("missing generator entry h(" + std::to_string(i) + ")");
        }
        exponent = exponent + kron(rep.h[i - 1], rep.h[j - 1])
                                  .scaled(cx(qp.hbar, 0) * rep.beta(i, j));
      }
    }
  }
  return exponent;
}

SquareOperator windowed_factor(const FactorSpec& spec, const GeneratorRep& rep,
                               const TruncationSpec& trunc, const QParams& qp) {
  const std::size_t d2 = rep.dim * rep.dim;
  if (spec.window_empty()) {
    SquareOperator id = SquareOperator::identity(d2);
    return spec.plus_one ? id + id : id;  // exp(0) = I, shifted when asked
  }
  const SquareOperator exponent = windowed_exponent(spec, rep, trunc, qp);
  SquareOperator factor = spec.q_series ? q_exponential(exponent, qp.q, trunc.series_order)
                                        : exponent.expm();
  if (spec.plus_one) factor = factor + SquareOperator::identity(d2);
  return factor;
}

SquareOperator universal_r_factor(const FactorSpec& spec, const GeneratorRep& rep,
                                  const TruncationSpec& trunc, const QParams& qp) {
  rep.validate();
  trunc.validate();
  qp.validate(trunc.series_order);
  const std::size_t d2 = rep.dim * rep.dim;
  switch (spec.kind) {
    case FactorKind::LeDelta:
      return root_factor_product(rep, trunc, qp, /*ge_side=*/false);
    case FactorKind::GeDelta:
      return root_factor_product(rep, trunc, qp, /*ge_side=*/true);
    case FactorKind::SimDelta:
      return sim_delta_exponent(rep, trunc, qp).expm();
    case FactorKind::K:
      return k_matrix(rep, qp);
    case FactorKind::Windowed:
      return windowed_factor(spec, rep, trunc, qp);
  }
  return SquareOperator::identity(d2);
}

SquareOperator compose_universal_r(const GeneratorRep& rep, const TruncationSpec& trunc,
                                   const QParams& qp) {
  const SquareOperator le = universal_r_factor({FactorKind::LeDelta}, rep, trunc, qp);
  const SquareOperator sim = universal_r_factor({FactorKind::SimDelta}, rep, trunc, qp);
  const SquareOperator ge = universal_r_factor({FactorKind::GeDelta}, rep, trunc, qp);
  const SquareOperator k = universal_r_factor({FactorKind::K}, rep, trunc, qp);
  return le * sim * ge * k;
}

SquareOperator t_ratio(const SquareOperator& t1, const SquareOperator& t2,
                       const SquareOperator& t3, const SquareOperator& t2p,
                       const SquareOperator& t3p, const SquareOperator& t4) {
  const SquareOperator eye = SquareOperator::identity(t1.dim());
  SquareOperator denom = t2p * t3p + eye;
  SquareOperator denom_inv(t1.dim());
  try {
    denom_inv = denom.inverse();
  } catch (const SingularMatrix&) {
    throw SingularDenominator("t_ratio: T2' T3' + I is singular");
  }
  return t1 * (t2 * t3 + eye) * denom_inv * t4;
}

}  // namespace vsos
