#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "vertexsos/tensor.hpp"

namespace vsos {

// ---------------------------------------------------------------------------
// Weight systems
// ---------------------------------------------------------------------------

struct FieldParams {
  double a = 1, b = 1, c = 1;  // bare weights, >= 0
  double H = 0, V = 0;         // external fields
  double lambda = 1;           // c-asymmetry, >= 1
  void validate() const;
};

struct SixVertexWeights {
  double a1 = 1, a2 = 1, b1 = 1, b2 = 1, c1 = 1, c2 = 1;
  void validate() const;
  double type_weight(int t) const;  // t in [0,6): a1,a2,b1,b2,c1,c2
};

struct TwentyVertexWeights {
  std::array<double, 3> a{1, 1, 1}, b{1, 1, 1}, c{1, 1, 1};
  // w0..w6 are derived on read, never stored.
  std::array<double, 7> composite() const;
  void validate() const;
};

SixVertexWeights weights_from_fields(const FieldParams& p);
double disorder_parameter(const SixVertexWeights& w);
TwentyVertexWeights twenty_vertex_weights(const std::array<double, 3>& a,
                                          const std::array<double, 3>& b,
                                          const std::array<double, 3>& c);

// ---------------------------------------------------------------------------
// Lattice patches and configurations
// ---------------------------------------------------------------------------

enum class PatchKind { SquareTorus, SquareOpen, TriangularPatch };
enum class BoundaryKind { Periodic, Free, Fixed };

// A 20V vertex is classified by one line state per lattice direction:
// through-positive, through-negative, source (both arrows out), sink (both in).
enum class LineState : std::uint8_t { ThroughPlus, ThroughMinus, Source, Sink };

struct LatticePatch {
  PatchKind kind = PatchKind::SquareTorus;
  std::size_t m = 1, n = 1;  // torus / open extents; triangular: m = row length
  BoundaryKind boundary = BoundaryKind::Periodic;
  // Fixed boundary: values for boundary stub edges by edge index.
  std::map<std::size_t, int> fixed_edges;

  std::size_t valence() const { return kind == PatchKind::TriangularPatch ? 6 : 4; }
  std::size_t vertex_count() const;
  std::size_t edge_count() const;

  // Edge indices incident to vertex v, in slot order. Square: W,S,E,N
  // (slon order fixed); triangular: three in-side slots then three out-side.
  // Entries are edge index plus an orientation sign: +1 when the edge's
  // stored arrow points into the vertex if positive.
  struct IncidentEdge {
    std::size_t edge;
    bool in_side;  // arrow +1 means "into this vertex" iff in_side
    int direction; // 0..1 (square: 0 horizontal, 1 vertical); 0..2 triangular
  };
  std::vector<IncidentEdge> incident(std::size_t v) const;

  void validate() const;
};

struct LatticeConfig {
  std::vector<int> edges;  // per-edge arrow in {+1,-1}
};

// 20V pattern -> weight-class table. Entry k maps the k-th ice pattern
// (deterministic enumeration order) to a class index 0..6. Overridable.
using TwentyVertexClassTable = std::array<int, 20>;
TwentyVertexClassTable default_twenty_vertex_class_table();

// The 20 valid line-state triples, in table order.
const std::array<std::array<LineState, 3>, 20>& twenty_vertex_patterns();

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

SquareOperator six_vertex_r_matrix(const FieldParams& p);

/// Frobenius residual of R12(u) R13(u+v) R23(v) - R23(v) R13(u+v) R12(u)
/// on (C^d)^(x3).
double yang_baxter_residual(const std::function<SquareOperator(double)>& r_of,
                            double u, double v);

std::vector<LatticeConfig> enumerate_configs(const LatticePatch& patch);

struct VertexWeights {
  // Exactly one is set, matching the patch valence.
  std::optional<SixVertexWeights> six;
  std::optional<TwentyVertexWeights> twenty;
  TwentyVertexClassTable table = default_twenty_vertex_class_table();
};

/// Classifies vertex v of cfg: 6V type 0..5 or 20V class 0..6.
int classify_vertex(const LatticeConfig& cfg, const LatticePatch& patch,
                    std::size_t v, const TwentyVertexClassTable& table);

double config_weight(const LatticeConfig& cfg, const LatticePatch& patch,
                     const VertexWeights& w);

double partition_function_bruteforce(const LatticePatch& patch, const VertexWeights& w);

double config_probability(const LatticeConfig& cfg, const LatticePatch& patch,
                          const VertexWeights& w);

/// Row-transfer-matrix partition function on a square torus; equals the
/// brute-force sum within 1e-12 relative.
double partition_function_transfer(const LatticePatch& patch, const VertexWeights& w);

}  // namespace vsos
