#include <doctest.h>

#include <cmath>

#include "vertexsos/q_algebra.hpp"
#include "vertexsos/rng.hpp"

using namespace vsos;

TEST_CASE("q-factorial matches the direct product and the q->1 limit") {
  cx q(0.6, 0);
  for (int n = 0; n <= 6; ++n) {
    cx prod(1, 0);
    for (int i = 1; i <= n; ++i)
      prod *= (cx(1, 0) - std::pow(q, i)) / (cx(1, 0) - q);
    CHECK(std::abs(q_factorial(n, q) - prod) < 1e-13);
  }
  // near q = 1 the q-factorial approaches n!
  double fact = 1;
  for (int n = 1; n <= 5; ++n) {
    fact *= n;
    CHECK(std::abs(q_factorial(n, cx(1 + 1e-9, 0)) - cx(fact, 0)) < 1e-5 * fact);
  }
}

TEST_CASE("q-factorial rejects roots of unity") {
  CHECK_THROWS_AS(q_factorial(4, cx(-1, 0)), RootOfUnity);
}

TEST_CASE("q-exponential truncation at order 1 is exactly 1 + z") {
  CHECK(q_exponential(cx(0.37, 0.11), cx(0.5, 0), 1) == cx(1, 0) + cx(0.37, 0.11));
}

TEST_CASE("q-exponential approaches exp as q -> 1") {
  for (double z : {0.3, 1.0, 2.0})
    for (double eps : {1e-3, 1e-4}) {
      cx got = q_exponential(cx(z, 0), cx(1 + eps, 0), 40);
      CHECK(std::abs(got - std::exp(cx(z, 0))) <= 50 * eps);
    }
}

TEST_CASE("q-exponential of a nilpotent matrix terminates exactly") {
  SquareOperator x(3);
  x(0, 1) = 2.0;  // x^2 = 0
  auto e = q_exponential(x, cx(0.5, 0), 30);
  auto want = SquareOperator::identity(3) + x;
  CHECK((e - want).max_abs() == 0.0);
}

TEST_CASE("K-matrix: hbar = 0 gives the identity, diagonal oracle otherwise") {
  auto rep = GeneratorRep::fundamental2();
  QParams qp;
  qp.q = cx(0.5, 0);
  qp.hbar = 0;
  CHECK(k_matrix(rep, qp).approx_equal(SquareOperator::identity(4), 1e-15));

  qp.hbar = 0.3;
  auto k = k_matrix(rep, qp);
  // h = diag(1,-1), so K = exp(0.3 * diag(1,-1,-1,1))
  CHECK(std::abs(k(0, 0) - std::exp(cx(0.3, 0))) < 1e-13);
  CHECK(std::abs(k(1, 1) - std::exp(cx(-0.3, 0))) < 1e-13);
  CHECK(std::abs(k(2, 2) - std::exp(cx(-0.3, 0))) < 1e-13);
  CHECK(std::abs(k(3, 3) - std::exp(cx(0.3, 0))) < 1e-13);
}

TEST_CASE("empty truncation composes to K alone") {
  for (auto* rep_ptr : {&GeneratorRep::fundamental2, &GeneratorRep::fundamental3}) {
    auto rep = (*rep_ptr)();
    TruncationSpec tr;
    tr.series_order = 0;  // kills the root-factor series
    tr.m_max = -1;        // empty imaginary-root product
    QParams qp;
    qp.q = cx(0.5, 0);
    qp.hbar = 0;
    auto r = compose_universal_r(rep, tr, qp);
    CHECK(r.approx_equal(SquareOperator::identity(rep.dim * rep.dim), 1e-15));
    qp.hbar = 0.2;
    auto r2 = compose_universal_r(rep, tr, qp);
    CHECK((r2 - k_matrix(rep, qp)).max_abs() < 1e-13);
  }
}

TEST_CASE("root factors act nilpotently in the fundamental rep") {
  auto rep = GeneratorRep::fundamental2();
  TruncationSpec tr;
  tr.series_order = 8;
  tr.m_max = 0;  // the single m = 0 root factor
  QParams qp;
  qp.q = cx(0.5, 0);
  FactorSpec le;
  le.kind = FactorKind::LeDelta;
  auto f = universal_r_factor(le, rep, tr, qp);
  // (q - q^{-1}) s^{-1} e (x) f is nilpotent of order 2 on C^2 (x) C^2,
  // so the q-exponential is I plus that single term.
  cx coef = qp.q - cx(1, 0) / qp.q;
  auto want = SquareOperator::identity(4) + kron(rep.e(0, 0), rep.f(0, 0)).scaled(coef);
  CHECK((f - want).max_abs() < 1e-14);
}

TEST_CASE("windowed exponent additivity is exact across splits") {
  auto rep = GeneratorRep::fundamental3();
  TruncationSpec tr;
  tr.rank = 2;
  tr.m_max = 3;
  tr.series_order = 10;
  QParams qp;
  qp.q = cx(0.7, 0);
  FactorSpec spec;
  spec.kind = FactorKind::Windowed;
  spec.family = WindowedFamily::QExpTensor;
  FactorSpec whole = spec, left = spec, right = spec;
  whole.lo = 1;
  whole.hi = 2;
  left.lo = 1;
  left.hi = 1;
  right.lo = 2;
  right.hi = 2;
  auto sum = windowed_exponent(left, rep, tr, qp) + windowed_exponent(right, rep, tr, qp);
  CHECK((windowed_exponent(whole, rep, tr, qp) - sum).max_abs() == 0.0);
}

TEST_CASE("the full window reproduces the middle factor entrywise") {
  auto rep = GeneratorRep::fundamental3();
  TruncationSpec tr;
  tr.rank = 2;
  tr.m_max = 2;
  tr.series_order = 20;
  QParams qp;
  qp.q = cx(0.7, 0);
  FactorSpec sim;
  sim.kind = FactorKind::SimDelta;
  FactorSpec win;
  win.kind = FactorKind::Windowed;
  win.family = WindowedFamily::QExpTensor;
  win.lo = 1;
  win.hi = 2;
  auto middle = universal_r_factor(sim, rep, tr, qp);
  auto windowed = windowed_factor(win, rep, tr, qp);
  CHECK((middle - windowed).max_abs() < 1e-12);
}

TEST_CASE("empty windows give the identity and plus_one shifts by it") {
  auto rep = GeneratorRep::fundamental2();
  TruncationSpec tr;
  tr.rank = 1;
  tr.m_max = 1;
  QParams qp;
  qp.q = cx(0.5, 0);
  FactorSpec win;
  win.kind = FactorKind::Windowed;
  win.lo = 2;
  win.hi = 1;  // empty
  CHECK(windowed_factor(win, rep, tr, qp)
            .approx_equal(SquareOperator::identity(4), 1e-15));
  win.plus_one = true;
  CHECK(windowed_factor(win, rep, tr, qp)
            .approx_equal(SquareOperator::identity(4).scaled(2), 1e-15));
}

TEST_CASE("t_ratio matches the scalar oracle on diagonal input") {
  auto d = [](cx z) { return SquareOperator::diagonal({z, z * z}); };
  auto got = t_ratio(d(cx(2, 0)), d(cx(3, 0)), d(cx(4, 0)), d(cx(1, 0)), d(cx(5, 0)),
                     d(cx(7, 0)));
  // entry 0: 2 * (12 + 1) / (5 + 1) * 7
  CHECK(std::abs(got(0, 0) - cx(2.0 * 13 / 6 * 7, 0)) < 1e-12);
  // entry 1: 4 * (9*16 + 1) / (25 + 1) * 49
  CHECK(std::abs(got(1, 1) - cx(4.0 * 145 / 26 * 49, 0)) < 1e-10);
}

TEST_CASE("t_ratio flags a singular denominator") {
  auto id = SquareOperator::identity(2);
  auto minus = SquareOperator::identity(2).scaled(cx(-1, 0));
  // t2' t3' + I = 0
  CHECK_THROWS_AS(t_ratio(id, id, id, minus, id, id), SingularDenominator);
}

TEST_CASE("QParams validation rejects roots of unity in range") {
  QParams qp;
  qp.q = cx(-1, 0);
  CHECK_THROWS_AS(qp.validate(4), RootOfUnity);
}
