#include "vertexsos/vertex_models.hpp"

#include <algorithm>
#include <cmath>

namespace vsos {

namespace {

void require_nonneg(double x, const char* what) {
  if (!(x >= 0)) throw SchemaError(std::string(what) + " must be nonnegative");
}

}  // namespace

void FieldParams::validate() const {
  require_nonneg(a, "a");
  require_nonneg(b, "b");
  require_nonneg(c, "c");
  if (!(lambda >= 1)) throw SchemaError("lambda must be >= 1");
  if (!std::isfinite(H) || !std::isfinite(V)) throw SchemaError("fields must be finite");
}

void SixVertexWeights::validate() const {
  for (double w : {a1, a2, b1, b2, c1, c2}) require_nonneg(w, "six-vertex weight");
}

double SixVertexWeights::type_weight(int t) const {
  switch (t) {
    case 0: return a1;
    case 1: return a2;
    case 2: return b1;
    case 3: return b2;
    case 4: return c1;
    case 5: return c2;
    default: throw DimensionMismatch("six-vertex type out of range");
  }
}

std::array<double, 7> TwentyVertexWeights::composite() const {
  return {
      a[0] * a[1] * a[2],                      // w0
      b[0] * a[1] * b[2],                      // w1
      b[0] * a[1] * c[2],                      // w2
      a[0] * b[1] * b[2] + c[0] * c[1] * c[2], // w3
      c[0] * a[1] * a[2],                      // w4
      b[0] * c[1] * a[2],                      // w5
      b[0] * b[1] * a[2],                      // w6
  };
}

void TwentyVertexWeights::validate() const {
  for (int i = 0; i < 3; ++i) {
    require_nonneg(a[i], "twenty-vertex a");
    require_nonneg(b[i], "twenty-vertex b");
    require_nonneg(c[i], "twenty-vertex c");
  }
}

SixVertexWeights weights_from_fields(const FieldParams& p) {
  p.validate();
  SixVertexWeights w;
  w.a1 = p.a * std::exp(p.H + p.V);
  w.a2 = p.a * std::exp(-p.H - p.V);
  w.b1 = p.b * std::exp(p.H - p.V);
  w.b2 = p.b * std::exp(-p.H + p.V);
  w.c1 = p.c * p.lambda;
  w.c2 = p.c / p.lambda;
  return w;
}

double disorder_parameter(const SixVertexWeights& w) {
  const double denom2 = w.a1 * w.a2 * w.b1 * w.b2;
  if (!(denom2 > 0)) throw DegenerateWeights("disorder parameter: a1*a2*b1*b2 is zero");
  return (w.a1 * w.a2 + w.b1 * w.b2 - w.c1 * w.c2) / (2.0 * std::sqrt(denom2));
}

TwentyVertexWeights twenty_vertex_weights(const std::array<double, 3>& a,
                                          const std::array<double, 3>& b,
                                          const std::array<double, 3>& c) {
  TwentyVertexWeights w;
  w.a = a;
  w.b = b;
  w.c = c;
  w.validate();
  return w;
}

// ---------------------------------------------------------------------------
// Patches
// ---------------------------------------------------------------------------

void LatticePatch::validate() const {
  if (m < 1 || n < 1) throw SchemaError("patch extents must be >= 1");
  if (kind == PatchKind::SquareTorus && boundary != BoundaryKind::Periodic) {
    throw SchemaError("square torus is periodic by definition");
  }
  for (const auto& [e, v] : fixed_edges) {
    if (e >= edge_count()) throw SchemaError("fixed edge index out of range");
    if (v != 1 && v != -1) throw SchemaError("fixed edge value must be +-1");
  }
}

std::size_t LatticePatch::vertex_count() const {
  switch (kind) {
    case PatchKind::SquareTorus:
    case PatchKind::SquareOpen: return m * n;
    case PatchKind::TriangularPatch: return m;
  }
  return 0;
}

std::size_t LatticePatch::edge_count() const {
  switch (kind) {
    case PatchKind::SquareTorus: return 2 * m * n;
    case PatchKind::SquareOpen: return n * (m + 1) + (n + 1) * m;
    case PatchKind::TriangularPatch: return 5 * m + 1;
  }
  return 0;
}

std::vector<LatticePatch::IncidentEdge> LatticePatch::incident(std::size_t v) const {
  std::vector<IncidentEdge> out;
  if (kind == PatchKind::SquareTorus) {
    // horizontal edge h(r,c) east of vertex (r,c): index r*m + c
    // vertical edge   e(r,c) north of vertex (r,c): index m*n + r*m + c
    const std::size_t r = v / m, c = v % m;
    auto h = [&](std::size_t rr, std::size_t cc) { return rr * m + cc; };
    auto ve = [&](std::size_t rr, std::size_t cc) { return m * n + rr * m + cc; };
    out.push_back({h(r, (c + m - 1) % m), true, 0});   // W
    out.push_back({ve((r + n - 1) % n, c), true, 1});  // S
    out.push_back({h(r, c), false, 0});                // E
    out.push_back({ve(r, c), false, 1});               // N
  } else if (kind == PatchKind::SquareOpen) {
    // horizontal h(r,c), c = 0..m, west stub at c=0: index r*(m+1) + c
    // vertical  ve(r,c), r = 0..n: index n*(m+1) + r*m + c
    const std::size_t r = v / m, c = v % m;
    auto h = [&](std::size_t rr, std::size_t cc) { return rr * (m + 1) + cc; };
    auto ve = [&](std::size_t rr, std::size_t cc) { return n * (m + 1) + rr * m + cc; };
    out.push_back({h(r, c), true, 0});       // W
    out.push_back({ve(r, c), true, 1});      // S
    out.push_back({h(r, c + 1), false, 0});  // E
    out.push_back({ve(r + 1, c), false, 1}); // N
  } else {
    // Chain of m six-valent vertices sharing the direction-0 line; the
    // direction-0 edge east of vertex i has index i+1, stubs elsewhere.
    const std::size_t L = m;
    const std::size_t stub0 = L + 1 + 4 * v;
    out.push_back({v, true, 0});          // in, direction 0
    out.push_back({stub0 + 0, true, 1});  // in, direction 1
    out.push_back({stub0 + 1, true, 2});  // in, direction 2
    out.push_back({v + 1, false, 0});     // out, direction 0
    out.push_back({stub0 + 2, false, 1}); // out, direction 1
    out.push_back({stub0 + 3, false, 2}); // out, direction 2
  }
  return out;
}

const std::array<std::array<LineState, 3>, 20>& twenty_vertex_patterns() {
  static const auto patterns = [] {
    std::array<std::array<LineState, 3>, 20> out{};
    std::size_t k = 0;
    for (int s0 = 0; s0 < 4; ++s0)
      for (int s1 = 0; s1 < 4; ++s1)
        for (int s2 = 0; s2 < 4; ++s2) {
          const std::array<LineState, 3> t = {LineState(s0), LineState(s1), LineState(s2)};
          int sources = 0, sinks = 0;
          for (LineState s : t) {
            sources += s == LineState::Source;
            sinks += s == LineState::Sink;
          }
          if (sources == sinks) out[k++] = t;  // 3-in-3-out
        }
    return out;
  }();
  return patterns;
}

TwentyVertexClassTable default_twenty_vertex_class_table() {
  // Through-only triples pair up by global arrow reversal; source/sink
  // triples are grouped by the direction their through-line occupies.
  TwentyVertexClassTable table{};
  const auto& pats = twenty_vertex_patterns();
  for (std::size_t k = 0; k < pats.size(); ++k) {
    const auto& t = pats[k];
    int n_through = 0;
    int through_dir = -1;
    for (int d = 0; d < 3; ++d) {
      if (t[d] == LineState::ThroughPlus || t[d] == LineState::ThroughMinus) {
        ++n_through;
        through_dir = d;
      }
    }
    if (n_through == 3) {
      auto plus = [&](int d) { return t[d] == LineState::ThroughPlus; };
      const bool p0 = plus(0), p1 = plus(1), p2 = plus(2);
      if (p0 == p1 && p1 == p2) table[k] = 0;        // +++ / ---
      else if (p0 == p2 && p0 != p1) table[k] = 1;   // +-+ / -+-
      else if (p1 == p2 && p0 != p1) table[k] = 2;   // -++ / +--
      else table[k] = 3;                             // ++- / --+
    } else {
      table[k] = 4 + through_dir;
    }
  }
  return table;
}

SquareOperator six_vertex_r_matrix(const FieldParams& p) {
  p.validate();
  SquareOperator r(4);
  r(0, 0) = p.a * std::exp(p.H + p.V);
  r(3, 3) = p.a * std::exp(-p.H - p.V);
  r(1, 1) = p.b * std::exp(p.H - p.V);
  r(2, 2) = p.b * std::exp(-p.H + p.V);
  r(1, 2) = p.c;
  r(2, 1) = p.c;
  return r;
}

double yang_baxter_residual(const std::function<SquareOperator(double)>& r_of,
                            double u, double v) {
  const SquareOperator ru = r_of(u);
  const std::size_t d2 = ru.dim();
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(d2))));
  if (d * d != d2) throw DimensionMismatch("yang_baxter_residual: R is not d^2 x d^2");
  const SquareOperator r12 = embed_two_site(ru, d, 3, 0);
  const SquareOperator r23 = embed_two_site(r_of(v), d, 3, 1);
  const SquareOperator r13 = embed_pair(r_of(u + v), d, 3, 0, 2);
  return (r12 * r13 * r23 - r23 * r13 * r12).frobenius_norm();
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

struct IceChecker {
  const LatticePatch& patch;
  std::vector<std::vector<LatticePatch::IncidentEdge>> inc;
  std::vector<std::size_t> last_edge;  // highest edge index incident to vertex

  explicit IceChecker(const LatticePatch& p) : patch(p) {
    const std::size_t nv = p.vertex_count();
    inc.reserve(nv);
    last_edge.reserve(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      inc.push_back(p.incident(v));
      std::size_t hi = 0;
      for (const auto& e : inc.back()) hi = std::max(hi, e.edge);
      last_edge.push_back(hi);
    }
  }

  int in_count(const std::vector<int>& edges, std::size_t v) const {
    int c = 0;
    for (const auto& e : inc[v]) {
      const bool incoming = e.in_side ? edges[e.edge] > 0 : edges[e.edge] < 0;
      c += incoming;
    }
    return c;
  }

  bool ice_ok(const std::vector<int>& edges, std::size_t v) const {
    return in_count(edges, v) == static_cast<int>(inc[v].size() / 2);
  }
};

}  // namespace

std::vector<LatticeConfig> enumerate_configs(const LatticePatch& patch) {
  patch.validate();
  const std::size_t ne = patch.edge_count();
  if (ne > 24) throw PatchTooLarge("enumerate_configs: more than 2^24 raw states");

  const IceChecker chk(patch);
  const std::size_t nv = patch.vertex_count();
  // Vertices whose incident edges are all assigned once edge e is set.
  std::vector<std::vector<std::size_t>> complete_at(ne);
  for (std::size_t v = 0; v < nv; ++v) complete_at[chk.last_edge[v]].push_back(v);

  std::vector<LatticeConfig> out;
  std::vector<int> edges(ne, 0);
  // DFS in edge-index order with -1 before +1 gives lexicographic output.
  auto rec = [&](auto&& self, std::size_t e) -> void {
    if (e == ne) {
      out.push_back(LatticeConfig{edges});
      return;
    }
    const auto fixed = patch.fixed_edges.find(e);
    for (int val : {-1, +1}) {
      if (fixed != patch.fixed_edges.end() && fixed->second != val) continue;
      edges[e] = val;
      bool ok = true;
      for (std::size_t v : complete_at[e]) {
        if (!chk.ice_ok(edges, v)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, e + 1);
    }
    edges[e] = 0;
  };
  rec(rec, 0);
  return out;
}

int classify_vertex(const LatticeConfig& cfg, const LatticePatch& patch,
                    std::size_t v, const TwentyVertexClassTable& table) {
  const auto inc = patch.incident(v);
  if (patch.valence() == 4) {
    const int wl = cfg.edges.at(inc[0].edge), wb = cfg.edges.at(inc[1].edge);
    const int wr = cfg.edges.at(inc[2].edge), wt = cfg.edges.at(inc[3].edge);
    if (wl > 0 && wb > 0 && wr > 0 && wt > 0) return 0;  // a1
    if (wl < 0 && wb < 0 && wr < 0 && wt < 0) return 1;  // a2
    if (wl > 0 && wb < 0 && wr > 0 && wt < 0) return 2;  // b1
    if (wl < 0 && wb > 0 && wr < 0 && wt > 0) return 3;  // b2
    if (wl > 0 && wb < 0 && wr < 0 && wt > 0) return 4;  // c1
    if (wl < 0 && wb > 0 && wr > 0 && wt < 0) return 5;  // c2
    throw DegenerateWeights("unclassifiable 4-valent vertex pattern (ice rule violated)");
  }
  // 20V: line state per direction from the (in-side, out-side) arrow pair.
  std::array<LineState, 3> t{};
  for (int d = 0; d < 3; ++d) {
    int ain = 0, aout = 0;
    for (const auto& e : inc) {
      if (e.direction != d) continue;
      (e.in_side ? ain : aout) = cfg.edges.at(e.edge);
    }
    if (ain > 0 && aout > 0) t[d] = LineState::ThroughPlus;
    else if (ain < 0 && aout < 0) t[d] = LineState::ThroughMinus;
    else if (ain < 0 && aout > 0) t[d] = LineState::Source;
    else t[d] = LineState::Sink;
  }
  const auto& pats = twenty_vertex_patterns();
  for (std::size_t k = 0; k < pats.size(); ++k) {
    if (pats[k] == t) return table[k];
  }
  throw DegenerateWeights("unclassifiable 6-valent vertex pattern (ice rule violated)");
}

double config_weight(const LatticeConfig& cfg, const LatticePatch& patch,
                     const VertexWeights& w) {
  if (cfg.edges.size() != patch.edge_count()) {
    throw DimensionMismatch("config_weight: edge count mismatch");
  }
  double prod = 1;
  const std::size_t nv = patch.vertex_count();
  for (std::size_t v = 0; v < nv; ++v) {
    const int t = classify_vertex(cfg, patch, v, w.table);
    if (patch.valence() == 4) {
      if (!w.six) throw SchemaError("config_weight: six-vertex weights required");
      prod *= w.six->type_weight(t);
    } else {
      if (!w.twenty) throw SchemaError("config_weight: twenty-vertex weights required");
      prod *= w.twenty->composite()[static_cast<std::size_t>(t)];
    }
  }
  return prod;
}

double partition_function_bruteforce(const LatticePatch& patch, const VertexWeights& w) {
  double z = 0;
  for (const LatticeConfig& cfg : enumerate_configs(patch)) {
    z += config_weight(cfg, patch, w);
  }
  return z;
}

double config_probability(const LatticeConfig& cfg, const LatticePatch& patch,
                          const VertexWeights& w) {
  const double z = partition_function_bruteforce(patch, w);
  if (!(z > 0)) throw ZeroPartitionFunction("config_probability: Z = 0");
  return config_weight(cfg, patch, w) / z;
}

double partition_function_transfer(const LatticePatch& patch, const VertexWeights& w) {
  if (patch.kind != PatchKind::SquareTorus) {
    throw DimensionMismatch("partition_function_transfer: square torus only");
  }
  if (!w.six) throw SchemaError("partition_function_transfer: six-vertex weights required");
  patch.validate();
  const std::size_t M = patch.m, N = patch.n;
  const std::size_t dim = std::size_t(1) << M;
  if (dim > (std::size_t(1) << 12)) {
    throw PatchTooLarge("partition_function_transfer: transfer dimension exceeds 2^12");
  }

  // Local weight for arrows (west, south, east, north), 0 for non-ice patterns.
  auto lw = [&](int wl, int wb, int wr, int wt) -> double {
    if (wl > 0 && wb > 0 && wr > 0 && wt > 0) return w.six->a1;
    if (wl < 0 && wb < 0 && wr < 0 && wt < 0) return w.six->a2;
    if (wl > 0 && wb < 0 && wr > 0 && wt < 0) return w.six->b1;
    if (wl < 0 && wb > 0 && wr < 0 && wt > 0) return w.six->b2;
    if (wl > 0 && wb < 0 && wr < 0 && wt > 0) return w.six->c1;
    if (wl < 0 && wb > 0 && wr > 0 && wt < 0) return w.six->c2;
    return 0;
  };
  auto arrow = [](std::size_t bits, std::size_t c) { return (bits >> c) & 1 ? +1 : -1; };

  // Row transfer matrix over the M vertical edges; the horizontal edges of
  // the row are summed as a length-M periodic chain of 2x2 carriers.
  std::vector<double> t(dim * dim, 0.0);
  for (std::size_t top = 0; top < dim; ++top) {
    for (std::size_t bot = 0; bot < dim; ++bot) {
      // chain[h][h'] over the west/east horizontal arrow of each vertex
      double chain[2][2] = {{1, 0}, {0, 1}};
      for (std::size_t c = 0; c < M; ++c) {
        double step[2][2];
        for (int hw = 0; hw < 2; ++hw)
          for (int he = 0; he < 2; ++he)
            step[hw][he] = lw(hw ? +1 : -1, arrow(bot, c), he ? +1 : -1, arrow(top, c));
        double next[2][2] = {{0, 0}, {0, 0}};
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) next[i][j] += chain[i][k] * step[k][j];
        chain[0][0] = next[0][0];
        chain[0][1] = next[0][1];
        chain[1][0] = next[1][0];
        chain[1][1] = next[1][1];
      }
      t[top * dim + bot] = chain[0][0] + chain[1][1];  // periodic row closure
    }
  }

  // Z = tr(T^N) via repeated multiplication.
  std::vector<double> acc = t, tmp(dim * dim);
  for (std::size_t p = 1; p < N; ++p) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) {
        const double a = acc[i * dim + k];
        if (a == 0) continue;
        for (std::size_t j = 0; j < dim; ++j) tmp[i * dim + j] += a * t[k * dim + j];
      }
    acc.swap(tmp);
  }
  double z = 0;
  for (std::size_t i = 0; i < dim; ++i) z += acc[i * dim + i];
  return z;
}

}  // namespace vsos
