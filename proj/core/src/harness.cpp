#include "vertexsos/harness.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vertexsos/intertwiner.hpp"
#include "vertexsos/oscillator.hpp"
#include "vertexsos/q_algebra.hpp"
#include "vertexsos/rng.hpp"
#include "vertexsos/vertex_models.hpp"

namespace vsos {

using json = nlohmann::json;

std::string command_name(Command c) {
  switch (c) {
    case Command::YbeCheck: return "YBE_CHECK";
    case Command::Partition: return "PARTITION";
    case Command::Intertwine: return "INTERTWINE";
    case Command::QrCompose: return "QR_COMPOSE";
    case Command::Transfer: return "TRANSFER";
    default: return "PLOT_DATA";
  }
}

Command command_from_name(const std::string& name) {
  if (name == "YBE_CHECK") return Command::YbeCheck;
  if (name == "PARTITION") return Command::Partition;
  if (name == "INTERTWINE") return Command::Intertwine;
  if (name == "QR_COMPOSE") return Command::QrCompose;
  if (name == "TRANSFER") return Command::Transfer;
  if (name == "PLOT_DATA") return Command::PlotData;
  throw SchemaError("unknown command '" + name + "'");
}

// ---------------------------------------------------------------------------
// Schema helpers
// ---------------------------------------------------------------------------

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw UnknownKeyError("unknown key '" + path + it.key() + "'");
  }
}

double need_finite(double v, const std::string& path) {
  if (!std::isfinite(v)) throw SchemaError("non-finite value at '" + path + "'");
  return v;
}

double num(json& obj, const std::string& key, double dflt, const std::string& path) {
  if (!obj.contains(key)) obj[key] = dflt;
  if (!obj[key].is_number()) throw SchemaError("'" + path + key + "' must be a number");
  return need_finite(obj[key].get<double>(), path + key);
}

long long inum(json& obj, const std::string& key, long long dflt, const std::string& path) {
  if (!obj.contains(key)) obj[key] = dflt;
  if (!obj[key].is_number_integer())
    throw SchemaError("'" + path + key + "' must be an integer");
  return obj[key].get<long long>();
}

std::string str(json& obj, const std::string& key, const std::string& dflt,
                const std::string& path, const std::vector<std::string>& choices) {
  if (!obj.contains(key)) obj[key] = dflt;
  if (!obj[key].is_string()) throw SchemaError("'" + path + key + "' must be a string");
  std::string v = obj[key].get<std::string>();
  bool ok = choices.empty();
  for (const auto& c : choices)
    if (v == c) ok = true;
  if (!ok) throw SchemaError("'" + path + key + "' has unsupported value '" + v + "'");
  return v;
}

std::array<double, 2> range2(json& obj, const std::string& key,
                             std::array<double, 2> dflt, const std::string& path) {
  if (!obj.contains(key)) obj[key] = {dflt[0], dflt[1]};
  if (!obj[key].is_array() || obj[key].size() != 2)
    throw SchemaError("'" + path + key + "' must be a 2-element array");
  return {need_finite(obj[key][0].get<double>(), path + key),
          need_finite(obj[key][1].get<double>(), path + key)};
}

json cnum(cx z) { return json::array({z.real(), z.imag()}); }

json cvec(const std::vector<cx>& v) {
  json out = json::array();
  for (cx z : v) out.push_back(cnum(z));
  return out;
}

SquareOperator symmetric_six_vertex_r(double u, double eta) {
  double a = std::sin(u + eta), b = std::sin(u), c = std::sin(eta);
  SquareOperator r(4);
  r(0, 0) = a;
  r(3, 3) = a;
  r(1, 1) = b;
  r(2, 2) = b;
  r(1, 2) = c;
  r(2, 1) = c;
  return r;
}

// --- per-command schema normalization (defaults recorded in place) ---------

void normalize_weights6(json& w, const std::string& path) {
  for (const char* k : {"a1", "a2", "b1", "b2", "c1", "c2"}) num(w, k, 1.0, path);
  reject_unknown(w, {"a1", "a2", "b1", "b2", "c1", "c2"}, path);
}

void normalize_fields(json& f, const std::string& path) {
  num(f, "a", 1.0, path);
  num(f, "b", 1.0, path);
  num(f, "c", 1.0, path);
  num(f, "H", 0.0, path);
  num(f, "V", 0.0, path);
  num(f, "lambda", 1.0, path);
  reject_unknown(f, {"a", "b", "c", "H", "V", "lambda"}, path);
}

void normalize_weights20(json& w, const std::string& path) {
  for (const char* k : {"a", "b", "c"}) {
    if (!w.contains(k)) w[k] = {1.0, 1.0, 1.0};
    if (!w[k].is_array() || w[k].size() != 3)
      throw SchemaError("'" + path + k + "' must be a 3-element array");
    for (auto& v : w[k]) need_finite(v.get<double>(), path + k);
  }
  reject_unknown(w, {"a", "b", "c"}, path);
}

void normalize_r11(json& r, const std::string& path) {
  str(r, "kind", "affine", path, {"affine"});
  num(r, "alpha", 1.0, path);
  num(r, "beta", 0.0, path);
  reject_unknown(r, {"kind", "alpha", "beta"}, path);
}

void normalize_params(Command cmd, json& p) {
  const std::string path = "params.";
  switch (cmd) {
    case Command::YbeCheck: {
      str(p, "mode", "symmetric", path, {"identity", "symmetric", "fields"});
      num(p, "eta", 0.7, path);
      inum(p, "sweeps", 20, path);
      range2(p, "u_range", {0.05, 0.85}, path);
      if (!p.contains("fields")) p["fields"] = json::object();
      normalize_fields(p["fields"], path + "fields.");
      reject_unknown(p, {"mode", "eta", "sweeps", "u_range", "fields"}, path);
      break;
    }
    case Command::Partition: {
      std::string model =
          str(p, "model", "six_vertex", path, {"six_vertex", "twenty_vertex"});
      str(p, "method", "both", path, {"both", "brute", "transfer"});
      if (!p.contains("lattice")) p["lattice"] = json::object();
      json& lat = p["lattice"];
      str(lat, "kind", "square_torus", path + "lattice.",
          {"square_torus", "square_open", "triangular"});
      inum(lat, "m", 2, path + "lattice.");
      inum(lat, "n", 2, path + "lattice.");
      if (!lat.contains("fixed_edges")) lat["fixed_edges"] = json::object();
      for (auto it = lat["fixed_edges"].begin(); it != lat["fixed_edges"].end(); ++it)
        if (!it.value().is_number_integer())
          throw SchemaError("'params.lattice.fixed_edges' values must be +1/-1");
      reject_unknown(lat, {"kind", "m", "n", "fixed_edges"}, path + "lattice.");
      if (!p.contains("weights")) p["weights"] = json::object();
      if (model == "six_vertex")
        normalize_weights6(p["weights"], path + "weights.");
      else
        normalize_weights20(p["weights"], path + "weights.");
      reject_unknown(p, {"model", "method", "lattice", "weights"}, path);
      break;
    }
    case Command::Intertwine: {
      std::string mode = str(p, "mode", "numeric", path, {"numeric", "theorem"});
      if (mode == "numeric") {
        if (!p.contains("r")) p["r"] = json::object();
        json& r = p["r"];
        str(r, "kind", "scaled_identity", path + "r.",
            {"scaled_identity", "six_vertex_symmetric"});
        num(r, "scale", 1.0, path + "r.");
        inum(r, "d", 3, path + "r.");
        num(r, "eta", 0.7, path + "r.");
        reject_unknown(r, {"kind", "scale", "d", "eta"}, path + "r.");
        num(p, "u", 0.3, path);
        num(p, "v", 0.5, path);
        num(p, "tol", 1e-12, path);
        inum(p, "max_iter", 500, path);
        if (!p.contains("gauge")) p["gauge"] = json::array();
        if (!p["gauge"].is_array())
          throw SchemaError("'params.gauge' must be an array of [vector, component, value]");
        for (auto& pin : p["gauge"])
          if (!pin.is_array() || pin.size() != 3)
            throw SchemaError("'params.gauge' pins must be [vector, component, value]");
        reject_unknown(p, {"mode", "r", "u", "v", "tol", "max_iter", "gauge"}, path);
      } else {
        inum(p, "l", 0, path);
        num(p, "u", 0.3, path);
        num(p, "w_aux", 0.25, path);
        if (!p.contains("r11")) p["r11"] = json::object();
        normalize_r11(p["r11"], path + "r11.");
        reject_unknown(p, {"mode", "l", "u", "w_aux", "r11"}, path);
      }
      break;
    }
    case Command::QrCompose: {
      str(p, "rep", "fundamental2", path, {"fundamental2", "fundamental3"});
      num(p, "q", 0.5, path);
      num(p, "hbar", 0.1, path);
      inum(p, "series_order", 16, path);
      inum(p, "m_max", -1, path);
      inum(p, "rank", 1, path);
      inum(p, "window_splits", 0, path);
      reject_unknown(
          p, {"rep", "q", "hbar", "series_order", "m_max", "rank", "window_splits"},
          path);
      break;
    }
    case Command::Transfer: {
      inum(p, "n_max", 1, path);
      num(p, "q", 0.9, path);
      num(p, "xi", 0.5, path);
      num(p, "s", 1.0, path);
      num(p, "s_i", 0.0, path);
      num(p, "s_j", 0.0, path);
      inum(p, "m", 0, path);
      inum(p, "n", 0, path);
      num(p, "field_h", 0.0, path);
      reject_unknown(p, {"n_max", "q", "xi", "s", "s_i", "s_j", "m", "n", "field_h"},
                     path);
      break;
    }
    default: {  // PlotData
      std::string sweep = str(p, "sweep", "delta_vs_h", path, {"delta_vs_h", "c_vs_u"});
      inum(p, "count", 21, path);
      if (sweep == "delta_vs_h") {
        if (!p.contains("fields")) p["fields"] = json::object();
        normalize_fields(p["fields"], path + "fields.");
        range2(p, "h_range", {-1.0, 1.0}, path);
        reject_unknown(p, {"sweep", "count", "fields", "h_range"}, path);
      } else {
        inum(p, "l", 0, path);
        num(p, "w_aux", 0.25, path);
        if (!p.contains("r11")) p["r11"] = json::object();
        normalize_r11(p["r11"], path + "r11.");
        range2(p, "u_range", {0.1, 1.0}, path);
        reject_unknown(p, {"sweep", "count", "l", "w_aux", "r11", "u_range"}, path);
      }
      break;
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config is not well-formed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("config root must be a JSON object");
  if (!j.contains("command")) throw SchemaError("missing required key 'command'");
  if (!j["command"].is_string()) throw SchemaError("'command' must be a string");

  RunConfig cfg;
  cfg.command = command_from_name(j["command"].get<std::string>());
  inum(j, "seed", 0, "");
  if (j["seed"].get<long long>() < 0) throw SchemaError("'seed' must be nonnegative");
  cfg.seed = j["seed"].get<std::uint64_t>();
  if (!j.contains("params")) j["params"] = json::object();
  if (!j["params"].is_object()) throw SchemaError("'params' must be an object");
  reject_unknown(j, {"command", "seed", "params"}, "");
  normalize_params(cfg.command, j["params"]);
  cfg.canonical = j;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_digest(const json& canonical) {
  std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

namespace {

void run_ybe(const json& p, RunReport& rep, CounterRng& rng) {
  std::string mode = p.at("mode").get<std::string>();
  double eta = p.at("eta").get<double>();
  long long sweeps = p.at("sweeps").get<long long>();
  auto ur = p.at("u_range");
  double lo = ur[0].get<double>(), hi = ur[1].get<double>();

  std::function<SquareOperator(double)> r_of;
  if (mode == "identity") {
    r_of = [](double) { return SquareOperator::identity(4); };
  } else if (mode == "symmetric") {
    r_of = [eta](double u) { return symmetric_six_vertex_r(u, eta); };
  } else {
    FieldParams fp;
    fp.a = p.at("fields").at("a").get<double>();
    fp.b = p.at("fields").at("b").get<double>();
    fp.c = p.at("fields").at("c").get<double>();
    fp.H = p.at("fields").at("H").get<double>();
    fp.V = p.at("fields").at("V").get<double>();
    fp.lambda = p.at("fields").at("lambda").get<double>();
    SquareOperator r = six_vertex_r_matrix(fp);
    r_of = [r](double) { return r; };
  }

  json residuals = json::array();
  double max_res = 0;
  long long n = std::max<long long>(sweeps, 1);
  for (long long k = 0; k < n; ++k) {
    double u = (mode == "symmetric") ? rng.uniform(lo, hi) : 0.3;
    double v = (mode == "symmetric") ? rng.uniform(lo, hi) : 0.5;
    double res = yang_baxter_residual(r_of, u, v);
    residuals.push_back(res);
    max_res = std::max(max_res, res);
  }
  rep.results["residuals"] = residuals;
  rep.results["max_residual"] = max_res;
  rep.results["mode"] = mode;
}

VertexWeights weights_from_json(const json& p) {
  VertexWeights w;
  if (p.at("model").get<std::string>() == "six_vertex") {
    SixVertexWeights sv;
    const json& wj = p.at("weights");
    sv.a1 = wj.at("a1").get<double>();
    sv.a2 = wj.at("a2").get<double>();
    sv.b1 = wj.at("b1").get<double>();
    sv.b2 = wj.at("b2").get<double>();
    sv.c1 = wj.at("c1").get<double>();
    sv.c2 = wj.at("c2").get<double>();
    sv.validate();
    w.six = sv;
  } else {
    const json& wj = p.at("weights");
    std::array<double, 3> a, b, c;
    for (int i = 0; i < 3; ++i) {
      a[i] = wj.at("a")[i].get<double>();
      b[i] = wj.at("b")[i].get<double>();
      c[i] = wj.at("c")[i].get<double>();
    }
    w.twenty = twenty_vertex_weights(a, b, c);
  }
  return w;
}

LatticePatch patch_from_json(const json& lat) {
  LatticePatch patch;
  std::string kind = lat.at("kind").get<std::string>();
  if (kind == "square_torus") {
    patch.kind = PatchKind::SquareTorus;
    patch.boundary = BoundaryKind::Periodic;
  } else if (kind == "square_open") {
    patch.kind = PatchKind::SquareOpen;
    patch.boundary = BoundaryKind::Free;
  } else {
    patch.kind = PatchKind::TriangularPatch;
    patch.boundary = BoundaryKind::Free;
  }
  patch.m = lat.at("m").get<std::size_t>();
  patch.n = lat.at("n").get<std::size_t>();
  for (auto it = lat.at("fixed_edges").begin(); it != lat.at("fixed_edges").end(); ++it)
    patch.fixed_edges[std::stoul(it.key())] = it.value().get<int>();
  patch.validate();
  return patch;
}

void run_partition(const json& p, RunReport& rep) {
  VertexWeights w = weights_from_json(p);
  LatticePatch patch = patch_from_json(p.at("lattice"));
  if (patch.kind == PatchKind::TriangularPatch && !w.twenty)
    throw SchemaError("triangular patches require twenty_vertex weights");
  if (patch.kind != PatchKind::TriangularPatch && !w.six)
    throw SchemaError("square patches require six_vertex weights");
  std::string method = p.at("method").get<std::string>();

  rep.results["edge_count"] = patch.edge_count();
  rep.results["vertex_count"] = patch.vertex_count();
  bool want_brute = method != "transfer";
  bool want_transfer =
      method != "brute" && patch.kind == PatchKind::SquareTorus && w.six.has_value();
  if (method == "transfer" && !want_transfer)
    throw SchemaError("transfer method requires a six_vertex square torus");

  double zb = 0, zt = 0;
  if (want_brute) {
    auto configs = enumerate_configs(patch);
    rep.results["config_count"] = configs.size();
    zb = partition_function_bruteforce(patch, w);
    rep.results["z_bruteforce"] = zb;
    if (zb > 0 && patch.edge_count() <= 22) {
      double psum = 0;
      for (const auto& c : configs) psum += config_probability(c, patch, w);
      rep.results["probability_sum"] = psum;
    }
  }
  if (want_transfer) {
    zt = partition_function_transfer(patch, w);
    rep.results["z_transfer"] = zt;
  }
  if (want_brute && want_transfer) {
    double denom = std::max(std::abs(zb), std::abs(zt));
    rep.results["relative_difference"] = denom == 0 ? 0 : std::abs(zb - zt) / denom;
  }
}

std::function<cx(cx)> r11_from_json(const json& r) {
  double alpha = r.at("alpha").get<double>();
  double beta = r.at("beta").get<double>();
  return [alpha, beta](cx z) { return cx(alpha, 0) * z + cx(beta, 0); };
}

void fill_solution(const IntertwinerSolution& sol, RunReport& rep) {
  rep.results["psi_ab_prime"] = cvec(sol.psi_ab_prime);
  rep.results["psi_bprime_c"] = cvec(sol.psi_bprime_c);
  rep.results["psi_u_ab"] = cvec(sol.psi_u_ab);
  rep.results["psi_v_bc"] = cvec(sol.psi_v_bc);
  rep.results["residual"] = sol.residual;
  rep.results["residual_history"] = sol.residual_history;
  rep.results["iterations"] = sol.iterations;
  rep.results["converged"] = sol.converged;
  rep.results["heights"] = {sol.height_a, sol.height_b_prime, sol.height_c};
  if (sol.w.mode == WeightMode::Full) {
    rep.matrices.push_back({"w", sol.w.full});
  } else {
    rep.results["c1"] = cnum(sol.w.c1);
    rep.results["c2"] = cnum(sol.w.c2);
    rep.results["c3"] = cnum(sol.w.c3);
    json moves = json::array();
    for (const auto& mv : sol.w.moves) {
      json rows = json::array();
      for (const auto& row : mv.rows) rows.push_back({row[0], row[1]});
      moves.push_back(rows);
    }
    rep.results["height_moves"] = moves;
  }
}

void run_intertwine(const json& p, RunReport& rep) {
  if (p.at("mode").get<std::string>() == "theorem") {
    auto sol = theorem_solution(int(p.at("l").get<long long>()),
                                cx(p.at("u").get<double>(), 0),
                                r11_from_json(p.at("r11")),
                                cx(p.at("w_aux").get<double>(), 0));
    fill_solution(sol, rep);
    return;
  }
  const json& rj = p.at("r");
  std::size_t d = rj.at("d").get<std::size_t>();
  double u = p.at("u").get<double>(), v = p.at("v").get<double>();
  SquareOperator r(1);
  if (rj.at("kind").get<std::string>() == "scaled_identity") {
    r = SquareOperator::identity(d * d).scaled(cx(rj.at("scale").get<double>(), 0));
  } else {
    d = 2;
    r = symmetric_six_vertex_r(u - v, rj.at("eta").get<double>());
  }
  auto gauge = IntertwinerGauge::default_for(d);
  if (!p.at("gauge").empty()) {
    gauge.pins.clear();
    for (const auto& pin : p.at("gauge"))
      gauge.pins.push_back({pin[0].get<std::size_t>(), pin[1].get<std::size_t>(),
                            cx(pin[2].get<double>(), 0)});
  }
  double tol = p.at("tol").get<double>();
  auto max_iter = p.at("max_iter").get<std::size_t>();
  try {
    auto sol = solve_intertwiner_numeric(r, cx(u, 0), cx(v, 0), gauge, tol, max_iter);
    fill_solution(sol, rep);
  } catch (const NonConvergenceWithSolution& e) {
    fill_solution(e.partial, rep);
    rep.results["error"] = e.what();
    rep.exit_code = 5;
  }
}

void run_qr_compose(const json& p, RunReport& rep, CounterRng& rng) {
  GeneratorRep rep_gen = p.at("rep").get<std::string>() == "fundamental2"
                             ? GeneratorRep::fundamental2()
                             : GeneratorRep::fundamental3();
  QParams qp;
  qp.q = cx(p.at("q").get<double>(), 0);
  qp.hbar = p.at("hbar").get<double>();
  TruncationSpec tr;
  tr.series_order = int(p.at("series_order").get<long long>());
  tr.m_max = int(p.at("m_max").get<long long>());
  tr.rank = int(p.at("rank").get<long long>());
  tr.validate();
  qp.validate(tr.series_order);

  // The config may ask for more index pairs than the rep's simple roots;
  // fill the imaginary-root tables by cycling the simple roots.
  if (tr.rank > int(rep_gen.n_simple))
    for (int m = 1; m <= std::max(tr.m_max, 1); ++m)
      for (int i = 1; i <= tr.rank; ++i) {
        rep_gen.e_im_override.insert_or_assign(
            {m, i}, rep_gen.e_root[std::size_t(i - 1) % rep_gen.n_simple]);
        rep_gen.f_im_override.insert_or_assign(
            {m, i}, rep_gen.f_root[std::size_t(i - 1) % rep_gen.n_simple]);
      }

  SquareOperator r = compose_universal_r(rep_gen, tr, qp);
  rep.matrices.push_back({"r_composed", r});
  rep.results["trace"] = cnum(r.trace());
  rep.results["frobenius_norm"] = r.frobenius_norm();
  if (tr.m_max < 0) {
    SquareOperator k = k_matrix(rep_gen, qp);
    rep.results["k_matrix_max_abs_diff"] = (r - k).max_abs();
  }

  long long splits = p.at("window_splits").get<long long>();
  if (splits > 0 && tr.rank >= 2) {
    double worst = 0;
    FactorSpec spec;
    spec.kind = FactorKind::Windowed;
    spec.family = WindowedFamily::QExpTensor;
    for (long long k = 0; k < splits; ++k) {
      int mid = rng.uniform_int(1, tr.rank - 1);
      FactorSpec whole = spec, left = spec, right = spec;
      whole.lo = 1;
      whole.hi = tr.rank;
      left.lo = 1;
      left.hi = mid;
      right.lo = mid + 1;
      right.hi = tr.rank;
      SquareOperator diff = windowed_exponent(whole, rep_gen, tr, qp) -
                            (windowed_exponent(left, rep_gen, tr, qp) +
                             windowed_exponent(right, rep_gen, tr, qp));
      worst = std::max(worst, diff.max_abs());
    }
    rep.results["window_split_max_deviation"] = worst;
  }
}

void run_transfer(const json& p, RunReport& rep) {
  TransferPlan plan;
  plan.m = p.at("m").get<std::size_t>();
  plan.n = p.at("n").get<std::size_t>();
  plan.n_max = p.at("n_max").get<std::size_t>();
  plan.q = cx(p.at("q").get<double>(), 0);
  plan.field_h = p.at("field_h").get<double>();
  LOperatorParams lp;
  lp.xi = cx(p.at("xi").get<double>(), 0);
  lp.s = p.at("s").get<double>();
  lp.s_i = p.at("s_i").get<double>();
  lp.s_j = p.at("s_j").get<double>();

  auto res = finite_volume_transfer(plan, lp);
  rep.results["dim"] = res.matrix.dim();
  rep.results["trace"] = cnum(res.trace);
  rep.results["frobenius_norm"] = res.matrix.frobenius_norm();
  if (res.matrix.dim() <= 81) rep.matrices.push_back({"transfer", res.matrix});
}

void run_plot_data(const json& p, RunReport& rep) {
  long long count = p.at("count").get<long long>();
  if (count < 0) throw SchemaError("'params.count' must be nonnegative");
  SweepOutput sweep;
  if (p.at("sweep").get<std::string>() == "delta_vs_h") {
    sweep.name = "delta_vs_h";
    sweep.columns = {"H", "delta"};
    auto hr = p.at("h_range");
    double h0 = hr[0].get<double>(), h1 = hr[1].get<double>();
    for (long long k = 0; k < count; ++k) {
      double t = count == 1 ? 0 : double(k) / double(count - 1);
      FieldParams fp;
      fp.a = p.at("fields").at("a").get<double>();
      fp.b = p.at("fields").at("b").get<double>();
      fp.c = p.at("fields").at("c").get<double>();
      fp.V = p.at("fields").at("V").get<double>();
      fp.lambda = p.at("fields").at("lambda").get<double>();
      fp.H = h0 + (h1 - h0) * t;
      sweep.rows.push_back({fp.H, disorder_parameter(weights_from_fields(fp))});
    }
  } else {
    sweep.name = "c_vs_u";
    sweep.columns = {"u", "c1_re", "c1_im", "c2_re", "c2_im", "c3_re", "c3_im"};
    auto urange = p.at("u_range");
    double u0 = urange[0].get<double>(), u1 = urange[1].get<double>();
    auto r11 = r11_from_json(p.at("r11"));
    int l = int(p.at("l").get<long long>());
    cx w_aux(p.at("w_aux").get<double>(), 0);
    for (long long k = 0; k < count; ++k) {
      double t = count == 1 ? 0 : double(k) / double(count - 1);
      double u = u0 + (u1 - u0) * t;
      auto sol = theorem_solution(l, cx(u, 0), r11, w_aux);
      sweep.rows.push_back({u, sol.w.c1.real(), sol.w.c1.imag(), sol.w.c2.real(),
                            sol.w.c2.imag(), sol.w.c3.real(), sol.w.c3.imag()});
    }
  }
  rep.results["rows"] = sweep.rows.size();
  rep.sweeps.push_back(std::move(sweep));
}

}  // namespace

RunReport run_command(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = command_name(cfg.command);
  rep.config = cfg.canonical;
  rep.digest = config_digest(cfg.canonical);
  rep.results = json::object();
  CounterRng rng(cfg.seed);
  const json& p = cfg.canonical.at("params");

  switch (cfg.command) {
    case Command::YbeCheck: run_ybe(p, rep, rng); break;
    case Command::Partition: run_partition(p, rep); break;
    case Command::Intertwine: run_intertwine(p, rep); break;
    case Command::QrCompose: run_qr_compose(p, rep, rng); break;
    case Command::Transfer: run_transfer(p, rep); break;
    default: run_plot_data(p, rep); break;
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw SchemaError("cannot write to '" + tmp + "'");
    out << content;
    if (!out) throw SchemaError("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string matrix_csv(const SquareOperator& m) {
  std::string out = "i,j,re,im\n";
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             format_double(m(i, j).real()) + "," + format_double(m(i, j).imag()) + "\n";
    }
  return out;
}

std::string sweep_csv(const SweepOutput& s) {
  std::string out;
  for (std::size_t c = 0; c < s.columns.size(); ++c)
    out += (c ? "," : "") + s.columns[c];
  out += "\n";
  for (const auto& row : s.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out += (c ? "," : "") + format_double(row[c]);
    out += "\n";
  }
  return out;
}

}  // namespace

std::string report_json(const RunReport& rep) {
  json j;
  j["command"] = rep.command;
  j["config"] = rep.config;
  j["digest"] = rep.digest;
  j["results"] = rep.results;
  j["exit_code"] = rep.exit_code;
  j["version"] = rep.version;
  j["wall_time_s"] = rep.wall_time_s;
  json mats = json::object(), sweeps = json::object();
  for (const auto& m : rep.matrices) mats[m.name] = m.name + ".csv";
  for (const auto& s : rep.sweeps) sweeps[s.name] = s.name + ".csv";
  j["outputs"] = {{"matrices", mats}, {"sweeps", sweeps}};
  return j.dump(2) + "\n";
}

void write_matrix_csv(const std::string& path, const SquareOperator& m) {
  atomic_write(path, matrix_csv(m));
}

SquareOperator read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "i,j,re,im")
    throw SchemaError("CSV '" + path + "' missing 'i,j,re,im' header");
  struct Entry {
    std::size_t i, j;
    double re, im;
  };
  std::vector<Entry> entries;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Entry e;
    const char* s = line.c_str();
    const char* end = s + line.size();
    auto field = [&](auto& v) {
      auto r = std::from_chars(s, end, v);
      if (r.ec != std::errc{}) throw SchemaError("bad CSV field in '" + path + "'");
      s = r.ptr;
      if (s < end && *s == ',') ++s;
    };
    field(e.i);
    field(e.j);
    field(e.re);
    field(e.im);
    dim = std::max({dim, e.i + 1, e.j + 1});
    entries.push_back(e);
  }
  SquareOperator m(std::max<std::size_t>(dim, 1));
  for (const auto& e : entries) m(e.i, e.j) = cx(e.re, e.im);
  return m;
}

void emit_outputs(const RunReport& rep, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto in_dir = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  for (const auto& m : rep.matrices) write_matrix_csv(in_dir(m.name + ".csv"), m.matrix);
  for (const auto& s : rep.sweeps) atomic_write(in_dir(s.name + ".csv"), sweep_csv(s));
  atomic_write(in_dir("report.json"), report_json(rep));
}

int exit_code_for(const std::exception& e) {
  if (auto* err = dynamic_cast<const Error*>(&e)) return err->exit_code();
  return 1;
}

}  // namespace vsos
