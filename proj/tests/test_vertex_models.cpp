#include <doctest.h>

#include <cmath>

#include "vertexsos/rng.hpp"
#include "vertexsos/vertex_models.hpp"

using namespace vsos;

namespace {

SixVertexWeights random_weights(CounterRng& rng) {
  SixVertexWeights w;
  w.a1 = rng.uniform(0.2, 2);
  w.a2 = rng.uniform(0.2, 2);
  w.b1 = rng.uniform(0.2, 2);
  w.b2 = rng.uniform(0.2, 2);
  w.c1 = rng.uniform(0.2, 2);
  w.c2 = rng.uniform(0.2, 2);
  return w;
}

}  // namespace

TEST_CASE("field parametrization produces the displayed weight system") {
  FieldParams p;
  p.a = 1.5;
  p.b = 0.8;
  p.c = 1.1;
  p.H = 0.3;
  p.V = -0.2;
  p.lambda = 1.4;
  auto w = weights_from_fields(p);
  CHECK(w.a1 == doctest::Approx(1.5 * std::exp(0.1)));
  CHECK(w.a2 == doctest::Approx(1.5 * std::exp(-0.1)));
  CHECK(w.b1 == doctest::Approx(0.8 * std::exp(0.5)));
  CHECK(w.b2 == doctest::Approx(0.8 * std::exp(-0.5)));
  CHECK(w.c1 == doctest::Approx(1.1 * 1.4));
  CHECK(w.c2 == doctest::Approx(1.1 / 1.4));
  // c1 c2 = c^2 independent of lambda
  CHECK(w.c1 * w.c2 == doctest::Approx(1.1 * 1.1));
}

TEST_CASE("disorder parameter hits the free-fermion and symmetric values") {
  SixVertexWeights w;  // all ones
  CHECK(disorder_parameter(w) == doctest::Approx(0.5));
  w.c1 = w.c2 = std::sqrt(2.0);  // a^2 + b^2 = c^2: free-fermion point
  CHECK(disorder_parameter(w) == doctest::Approx(0.0));
}

TEST_CASE("twenty-vertex composite weights are derived on read") {
  auto w = twenty_vertex_weights({1, 2, 3}, {4, 5, 6}, {7, 8, 9});
  auto c = w.composite();
  CHECK(c[0] == doctest::Approx(1.0 * 2 * 3));
  CHECK(c[1] == doctest::Approx(4.0 * 2 * 6));
  CHECK(c[2] == doctest::Approx(4.0 * 2 * 9));
  CHECK(c[3] == doctest::Approx(1.0 * 5 * 6 + 7.0 * 8 * 9));
  CHECK(c[4] == doctest::Approx(7.0 * 2 * 3));
  CHECK(c[5] == doctest::Approx(4.0 * 8 * 3));
  CHECK(c[6] == doctest::Approx(4.0 * 5 * 3));
}

TEST_CASE("there are exactly 20 valid line-state triples") {
  const auto& pats = twenty_vertex_patterns();
  CHECK(pats.size() == 20);
  // each triple balances sources against sinks
  for (const auto& p : pats) {
    int src = 0, snk = 0;
    for (auto s : p) {
      if (s == LineState::Source) ++src;
      if (s == LineState::Sink) ++snk;
    }
    CHECK(src == snk);
  }
}

TEST_CASE("2x2 torus with unit weights counts 18 ice states") {
  LatticePatch patch;
  patch.m = 2;
  patch.n = 2;
  VertexWeights w;
  w.six = SixVertexWeights{};
  auto configs = enumerate_configs(patch);
  CHECK(configs.size() == 18);
  CHECK(partition_function_bruteforce(patch, w) == doctest::Approx(18.0));
}

TEST_CASE("single valence-6 vertex admits exactly 20 ice states") {
  LatticePatch patch;
  patch.kind = PatchKind::TriangularPatch;
  patch.boundary = BoundaryKind::Free;
  patch.m = 1;
  CHECK(patch.edge_count() == 6);
  CHECK(enumerate_configs(patch).size() == 20);
}

TEST_CASE("fixed boundary edges filter the ensemble") {
  LatticePatch patch;
  patch.m = 2;
  patch.n = 2;
  auto all = enumerate_configs(patch);
  patch.fixed_edges[0] = 1;
  auto restricted = enumerate_configs(patch);
  CHECK(restricted.size() < all.size());
  for (const auto& c : restricted) CHECK(c.edges[0] == 1);
}

TEST_CASE("probabilities normalize on random weight draws") {
  CounterRng rng(101);
  LatticePatch patch;
  patch.m = 3;
  patch.n = 2;
  for (int draw = 0; draw < 5; ++draw) {
    VertexWeights w;
    w.six = random_weights(rng);
    auto configs = enumerate_configs(patch);
    double sum = 0;
    for (const auto& c : configs) sum += config_probability(c, patch, w);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transfer matrix agrees with brute force on asymmetric weights") {
  CounterRng rng(55);
  for (int draw = 0; draw < 5; ++draw) {
    LatticePatch patch;
    patch.m = 1 + draw % 3;
    patch.n = 1 + (draw + 1) % 3;
    VertexWeights w;
    w.six = random_weights(rng);
    double zb = partition_function_bruteforce(patch, w);
    double zt = partition_function_transfer(patch, w);
    CHECK(zt == doctest::Approx(zb).epsilon(1e-12));
  }
}

TEST_CASE("zero partition function raises") {
  LatticePatch patch;
  patch.m = 2;
  patch.n = 1;
  VertexWeights w;
  w.six = SixVertexWeights{0, 0, 0, 0, 0, 0};
  auto configs = enumerate_configs(patch);
  REQUIRE(!configs.empty());
  CHECK_THROWS_AS(config_probability(configs[0], patch, w), ZeroPartitionFunction);
}

TEST_CASE("Yang-Baxter residual: identity family is exactly zero") {
  auto id = [](double) { return SquareOperator::identity(4); };
  CHECK(yang_baxter_residual(id, 0.4, 0.9) == 0.0);
}

TEST_CASE("Yang-Baxter residual separates symmetric from field-skewed weights") {
  double eta = 0.7;
  auto sym = [eta](double u) {
    SquareOperator r(4);
    r(0, 0) = r(3, 3) = std::sin(u + eta);
    r(1, 1) = r(2, 2) = std::sin(u);
    r(1, 2) = r(2, 1) = std::sin(eta);
    return r;
  };
  CHECK(yang_baxter_residual(sym, 0.3, 0.5) < 1e-10);

  FieldParams skew;
  skew.H = 0.4;
  skew.V = 0.1;
  skew.b = 0.7;
  skew.c = 1.3;
  SquareOperator r = six_vertex_r_matrix(skew);
  auto skew_of = [r](double) { return r; };
  CHECK(yang_baxter_residual(skew_of, 0.3, 0.5) > 1e-3);
}

TEST_CASE("oversized patches are rejected, not enumerated") {
  LatticePatch patch;
  patch.m = 5;
  patch.n = 4;  // 40 edges
  CHECK_THROWS_AS(enumerate_configs(patch), PatchTooLarge);
}
