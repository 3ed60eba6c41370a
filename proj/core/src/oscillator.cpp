#include "vertexsos/oscillator.hpp"

#include <cmath>
#include <limits>

namespace vsos {

namespace {

cx q_int(int n, cx q) {
  // [n]_q = (1 - q^n) / (1 - q), with the q -> 1 limit value n.
  if (std::abs(cx(1, 0) - q) < 1e-14) return cx(double(n), 0);
  return (cx(1, 0) - std::pow(q, n)) / (cx(1, 0) - q);
}

cx cpow(cx base, double expo) {
  if (expo == 0) return cx(1, 0);
  if (base == cx(0, 0)) throw SchemaError("zero base with nonzero exponent");
  return std::pow(base, cx(expo, 0));
}

}  // namespace

QOscillatorRep build_q_oscillator(std::size_t n_max, cx q) {
  if (n_max < 1) throw SchemaError("build_q_oscillator: n_max must be >= 1");
  const std::size_t dim = n_max + 1;
  QOscillatorRep rep;
  rep.n_max = n_max;
  rep.q = q;
  rep.a = SquareOperator(dim);
  rep.adag = SquareOperator(dim);
  std::vector<cx> dd(dim), qdd(dim), qdd_inv(dim);
  for (std::size_t n = 0; n < dim; ++n) {
    dd[n] = cx(double(n), 0);
    qdd[n] = std::pow(q, double(n));
    qdd_inv[n] = cx(1, 0) / qdd[n];
    if (n >= 1) rep.a(n - 1, n) = q_int(static_cast<int>(n), q);
    if (n + 1 < dim) rep.adag(n + 1, n) = cx(1, 0);
  }
  rep.d = SquareOperator::diagonal(dd);
  rep.qd = SquareOperator::diagonal(qdd);
  rep.qd_inv = SquareOperator::diagonal(qdd_inv);
  return rep;
}

namespace {

// q^{alpha D_i + beta D_j} on Fock (x) Fock, diagonal.
SquareOperator q_power_d(const QOscillatorRep& osc, double ai, double aj) {
  const std::size_t f = osc.n_max + 1;
  std::vector<cx> diag(f * f);
  for (std::size_t ni = 0; ni < f; ++ni)
    for (std::size_t nj = 0; nj < f; ++nj)
      diag[ni * f + nj] = std::pow(osc.q, ai * double(ni) + aj * double(nj));
  return SquareOperator::diagonal(diag);
}

}  // namespace

SquareOperator l_operator(const QOscillatorRep& osc, const LOperatorParams& p) {
  const std::size_t f = osc.n_max + 1;
  const std::size_t fock2 = f * f;
  const SquareOperator eye_f = SquareOperator::identity(f);
  const SquareOperator ai = kron(osc.a, eye_f);
  const SquareOperator aj = kron(eye_f, osc.a);
  const SquareOperator ai_dag = kron(osc.adag, eye_f);
  const SquareOperator aj_dag = kron(eye_f, osc.adag);
  const cx q = osc.q;
  const cx qm2 = cx(1, 0) / (q * q);

  std::vector<SquareOperator> block(9, SquareOperator(fock2));
  auto B = [&](int r, int c) -> SquareOperator& { return block[r * 3 + c]; };

  B(0, 0) = q_power_d(osc, 1, 0);
  B(0, 1) = (ai * q_power_d(osc, -1, -1)).scaled(qm2 * cpow(p.xi, p.s - p.s_i));
  B(0, 2) = (ai * aj * q_power_d(osc, -1, -3)).scaled(cpow(p.xi, p.s - p.s_i - p.s_j));
  B(1, 0) = (ai_dag * q_power_d(osc, 1, 0)).scaled(cpow(p.xi, p.s_i));
  B(1, 1) = q_power_d(osc, -1, 1) - q_power_d(osc, 1, -1).scaled(qm2 * cpow(p.xi, p.s));
  B(1, 2) = (aj * q_power_d(osc, 1, -3)).scaled(-cpow(p.xi, p.s - p.s_j));
  // block (2,0) stays zero
  B(2, 1) = (aj_dag * q_power_d(osc, 0, 1)).scaled(cpow(p.xi, p.s_j));
  B(2, 2) = q_power_d(osc, 0, -1);

  SquareOperator out(3 * fock2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const SquareOperator& blk = B(r, c);
      for (std::size_t x = 0; x < fock2; ++x)
        for (std::size_t y = 0; y < fock2; ++y)
          out(r * fock2 + x, c * fock2 + y) = blk(x, y);
    }
  return out;
}

TransferResult finite_volume_transfer(const TransferPlan& plan, const LOperatorParams& p) {
  const QOscillatorRep osc = build_q_oscillator(plan.n_max, plan.q);
  const std::size_t dim = 3 * (plan.n_max + 1) * (plan.n_max + 1);
  if (dim > 4096) throw PatchTooLarge("finite_volume_transfer: factor dimension guard");

  const SquareOperator site = l_operator(osc, p);
  const cx prefactor = std::exp(p.lambda3(cx(1, 0) / (plan.q * plan.q) * cpow(p.xi, p.s)));

  TransferResult res;
  res.matrix = SquareOperator::identity(dim);
  // Product order pinned: j-major, then k ascending.
  for (std::size_t j = 0; j <= plan.m; ++j) {
    for (std::size_t k = 0; k <= plan.n; ++k) {
      res.matrix = res.matrix * site.scaled(prefactor);
    }
  }
  res.trace = res.matrix.trace();
  return res;
}

SquareOperator monodromy_with_field(const TransferPlan& plan, const LOperatorParams& p) {
  const QOscillatorRep osc = build_q_oscillator(plan.n_max, plan.q);
  const std::size_t dim = 3 * (plan.n_max + 1) * (plan.n_max + 1);
  if (dim > 4096) throw PatchTooLarge("monodromy_with_field: factor dimension guard");

  const SquareOperator site = l_operator(osc, p);
  SquareOperator out = SquareOperator::identity(dim);
  for (std::size_t j = 0; j <= plan.m; ++j) {
    for (std::size_t k = 0; k <= plan.n; ++k) {
      // diag(e^H, e^H, e^H) on the auxiliary C^3 is a scalar on the full space.
      const double phase = plan.alpha(0, static_cast<int>(j), static_cast<int>(k));
      out = out * site.scaled(std::exp(cx(plan.field_h + phase, 0)));
    }
  }
  return out;
}

ConvergenceReport convergence_probe(const std::vector<TransferPlan>& plans,
                                    const LOperatorParams& p) {
  ConvergenceReport report;
  SquareOperator prev(1);
  bool have_prev = false;
  for (const TransferPlan& plan : plans) {
    TransferResult r = finite_volume_transfer(plan, p);
    const double dim = static_cast<double>(r.matrix.dim());
    report.normalized_traces.push_back(r.trace / dim);
    SquareOperator normalized = r.matrix.scaled(cx(1.0 / dim, 0));
    if (have_prev && prev.dim() == normalized.dim()) {
      report.successive_differences.push_back((normalized - prev).frobenius_norm());
    } else if (have_prev) {
      report.successive_differences.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    prev = normalized;
    have_prev = true;
  }
  return report;
}

}  // namespace vsos
