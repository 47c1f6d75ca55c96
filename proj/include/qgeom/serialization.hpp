#pragma once

// JSON forms of scenes, cylindrical functions, Weyl descriptors and
// stratified-map parameters (schema 1).

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgeom/stratdiffeo.hpp"
#include "qgeom/weylops.hpp"

namespace qgeom {

using json = nlohmann::json;

inline constexpr int kSchema = 1;

// ---------------------------------------------------------------------------
// Small values

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Vec vec_from_json(const json& j, int dim = -1) {
  if (!j.is_array()) throw ValidationError("point must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError("point coordinates must be numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  if (dim >= 0 && v.size() != dim) throw ValidationError("point has the wrong dimension");
  return v;
}

inline json cplx_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx cplx_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ValidationError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json cmat_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(cplx_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

inline CMat cmat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMat m(n, static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != m.cols()) throw ValidationError("matrix rows differ in length");
    for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = cplx_from_json(j[i][k]);
  }
  return m;
}

inline Mat rmat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = vec_from_json(j[i], static_cast<int>(m.cols())).transpose();
  return m;
}

inline json group_element_to_json(const GroupElement& g) { return cmat_to_json(g.matrix()); }

inline GroupElement group_element_from_json(Group group, const json& j) {
  return GroupElement::from_matrix(group, cmat_from_json(j));
}

// ---------------------------------------------------------------------------
// Scenes

inline IntersectionRule rule_from_string(const std::string& s) {
  if (s == "natural") return IntersectionRule::Natural;
  if (s == "topological") return IntersectionRule::Topological;
  throw ValidationError("unknown intersection rule '" + s + "'");
}

inline std::string to_string(IntersectionRule r) { return r == IntersectionRule::Natural ? "natural" : "topological"; }

struct Scene {
  int dimension = 2;
  std::vector<std::string> path_ids;
  std::vector<PolyPath> paths;
  std::vector<std::string> surface_ids;
  std::vector<OrientedSurface> surfaces;
  json extra = json::object();  // suite-specific fields, passed through

  const OrientedSurface& surface(const std::string& id) const {
    for (std::size_t i = 0; i < surface_ids.size(); ++i) {
      if (surface_ids[i] == id) return surfaces[i];
    }
    throw DomainError("scene has no surface '" + id + "'");
  }

  const PolyPath& path(const std::string& id) const {
    for (std::size_t i = 0; i < path_ids.size(); ++i) {
      if (path_ids[i] == id) return paths[i];
    }
    throw DomainError("scene has no path '" + id + "'");
  }

  /// The paths as edges of one graph; they must meet only at endpoints.
  GraphPtr graph() const {
    Graph g(paths, path_ids);
    g.validate();
    return make_graph(std::move(g));
  }
};

inline json surface_to_json(const std::string& id, const OrientedSurface& S) {
  if (S.components().size() != 1 || S.components().front().sign != 1) {
    throw UnsupportedError("only single-component surfaces with the plain sign are stored in scenes");
  }
  json simp = json::array(), normals = json::array(), open = json::array();
  bool any_open = false;
  for (const auto& s : S.simplices()) {
    json vs = json::array();
    for (const auto& v : s.vertices()) vs.push_back(vec_to_json(v));
    simp.push_back(vs);
    normals.push_back(s.normal() ? vec_to_json(*s.normal()) : json(nullptr));
    open.push_back(s.open_faces());
    any_open = any_open || !s.open_faces().empty();
  }
  json j{{"id", id}, {"simplices", simp}, {"normals", normals}, {"rule", to_string(S.components().front().rule)}};
  if (any_open) j["open_faces"] = open;
  return j;
}

inline OrientedSurface surface_from_json(const json& j, int dim) {
  const json& simp = j.at("simplices");
  if (!simp.is_array() || simp.empty()) throw ValidationError("surface needs a non-empty simplex list");
  const json normals = j.value("normals", json::array());
  const json open = j.value("open_faces", json::array());
  std::vector<Simplex> out;
  for (std::size_t i = 0; i < simp.size(); ++i) {
    std::vector<Vec> vs;
    for (const auto& v : simp[i]) vs.push_back(vec_from_json(v, dim));
    std::vector<int> of;
    if (i < open.size()) of = open[i].get<std::vector<int>>();
    if (i < normals.size() && !normals[i].is_null()) {
      out.emplace_back(std::move(vs), vec_from_json(normals[i], dim), std::move(of));
    } else if (static_cast<int>(vs.size()) == dim) {
      out.push_back(Simplex::oriented(std::move(vs), std::move(of)));
    } else {
      out.emplace_back(std::move(vs), std::nullopt, std::move(of));
    }
  }
  return OrientedSurface(std::move(out), rule_from_string(j.value("rule", std::string("natural"))));
}

inline Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("scene must be a JSON object");
  if (j.value("schema", kSchema) != kSchema) throw ValidationError("unsupported scene schema");
  Scene s;
  s.dimension = j.at("dimension").get<int>();
  if (s.dimension < 2) throw ValidationError("scene dimension must be at least 2");
  for (const auto& p : j.value("paths", json::array())) {
    std::vector<Vec> vs;
    for (const auto& v : p.at("vertices")) vs.push_back(vec_from_json(v, s.dimension));
    s.path_ids.push_back(p.at("id").get<std::string>());
    s.paths.emplace_back(std::move(vs));
  }
  for (const auto& q : j.value("surfaces", json::array())) {
    s.surface_ids.push_back(q.at("id").get<std::string>());
    s.surfaces.push_back(surface_from_json(q, s.dimension));
  }
  for (const auto& [k, v] : j.items()) {
    if (k != "schema" && k != "dimension" && k != "paths" && k != "surfaces") s.extra[k] = v;
  }
  return s;
}

inline json scene_to_json(const Scene& s) {
  json paths = json::array(), surfaces = json::array();
  for (std::size_t i = 0; i < s.paths.size(); ++i) {
    json vs = json::array();
    for (const auto& v : s.paths[i].vertices()) vs.push_back(vec_to_json(v));
    paths.push_back({{"id", s.path_ids[i]}, {"vertices", vs}});
  }
  for (std::size_t i = 0; i < s.surfaces.size(); ++i) surfaces.push_back(surface_to_json(s.surface_ids[i], s.surfaces[i]));
  json j{{"schema", kSchema}, {"dimension", s.dimension}, {"paths", paths}, {"surfaces", surfaces}};
  for (const auto& [k, v] : s.extra.items()) j[k] = v;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Cylindrical functions

inline json factor_to_json(const Factor& f) {
  if (f.is_trivial()) return "trivial";
  return {{"irrep", f.rho.name()}, {"m", f.m}, {"n", f.n}};
}

inline Factor factor_from_json(const json& j, Group g) {
  if (j.is_string() && j.get<std::string>() == "trivial") return Factor::trivial(g);
  const Irrep rho = Irrep::parse(j.at("irrep").get<std::string>());
  if (rho.group() != g) throw ValidationError("factor irrep belongs to the wrong group");
  return {rho, j.at("m").get<int>(), j.at("n").get<int>()};
}

/// Plain products only; the function is multiplied out first.
inline json cylfun_to_json(const CylFun& f, const std::string& graph_id = "graph") {
  const CylFun e = f.expanded();
  json monos = json::array();
  for (const auto& mo : e.monomials()) {
    json fs = json::object();
    const FactorVec fv = mo.factors();
    for (int k = 0; k < f.graph()->size(); ++k) {
      if (!fv[k].is_trivial()) fs[f.graph()->ids[k]] = factor_to_json(fv[k]);
    }
    monos.push_back({{"coeff", cplx_to_json(mo.coeff)}, {"factors", fs}});
  }
  return {{"graph", graph_id}, {"group", to_string(f.group())}, {"monomials", monos}};
}

inline CylFun cylfun_from_json(const json& j, const GraphPtr& graph) {
  const Group g = group_from_string(j.value("group", std::string("su2")));
  CylFun f(graph, g);
  for (const auto& mo : j.at("monomials")) {
    FactorVec fv(graph->size(), Factor::trivial(g));
    const json fs = mo.value("factors", json::object());
    for (const auto& [id, fj] : fs.items()) fv[graph->index_of(id)] = factor_from_json(fj, g);
    f.add(cplx_from_json(mo.at("coeff")), fv);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Weyl descriptors

inline json weyl_to_json(const WeylDescriptor& W, const std::string& surface_id) {
  json labels = json::object();
  for (const auto& [k, v] : W.labels.per_stratum) labels[std::to_string(k)] = group_element_to_json(v);
  json j{{"surface", surface_id},
         {"rule", W.inverse_rule ? "inverse" : "natural"},
         {"group", to_string(W.labels.group)},
         {"labels", labels}};
  if (!W.labels.at_points.empty()) {
    json pts = json::array();
    for (const auto& [p, g] : W.labels.at_points) pts.push_back({{"point", vec_to_json(p)}, {"value", group_element_to_json(g)}});
    j["point_labels"] = pts;
  }
  return j;
}

inline WeylDescriptor weyl_from_json(const json& j, const Scene& scene) {
  const OrientedSurface& S = scene.surface(j.at("surface").get<std::string>());
  const std::string rule = j.value("rule", std::string("natural"));
  if (rule != "natural" && rule != "inverse") throw ValidationError("weyl rule must be 'natural' or 'inverse'");
  FluxLabels d{group_from_string(j.value("group", std::string("su2"))), {}, {}};
  const json labels = j.value("labels", json::object());
  for (const auto& [k, v] : labels.items()) {
    int idx = 0;
    try {
      idx = std::stoi(k);
    } catch (const std::logic_error&) {
      throw ValidationError("stratum id '" + k + "' is not an index");
    }
    d.per_stratum.emplace(idx, group_element_from_json(d.group, v));
  }
  for (const auto& p : j.value("point_labels", json::array())) {
    d.at_points.emplace_back(vec_from_json(p.at("point"), scene.dimension), group_element_from_json(d.group, p.at("value")));
  }
  return make_weyl(S, std::move(d), rule == "inverse");
}

// ---------------------------------------------------------------------------
// Stratified maps

inline Minkowski body_from_json(const json& j) {
  if (j.contains("ball")) return Minkowski::ball(j.at("ball").get<double>());
  if (j.contains("simplex")) {
    std::vector<Vec> vs;
    for (const auto& v : j.at("simplex")) vs.push_back(vec_from_json(v));
    return Minkowski::simplex(std::move(vs));
  }
  throw ValidationError("body must be {\"ball\": r} or {\"simplex\": [...]}");
}

/// Builds a map from its constructor parameters.
inline StratMap stratmap_from_json(const json& j) {
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "bump") {
    return bump_map(j.at("tau1").get<double>(), j.at("tau2").get<double>(), j.at("eps").get<double>(),
                    j.at("a").get<double>(), j.at("n").get<int>());
  }
  if (fam == "scaling") {
    return scaling_map(body_from_json(j.at("body")), j.at("lambda").get<double>(), j.at("eps").get<double>(),
                       j.at("n").get<int>());
  }
  if (fam == "interp_two_surfaces") {
    return interp_two_surfaces(body_from_json(j.at("p0")), body_from_json(j.at("p1")), j.at("lambda_minus").get<double>(),
                               j.at("lambda_plus").get<double>(), j.at("lambda0_minus").get<double>(),
                               j.at("lambda0_plus").get<double>(), j.at("n").get<int>());
  }
  if (fam == "rotation") return rotation_map(rmat_from_json(j.at("X")), j.at("r1").get<double>(), j.at("r2").get<double>());
  if (fam == "path_rotation") {
    return path_rotation_map(j.at("alpha").get<double>(), j.at("k").get<int>(), j.at("eps").get<double>());
  }
  if (fam == "winding") {
    return winding_map(WindingParams{j.at("taus").get<std::vector<double>>(), j.at("levels").get<std::vector<int>>(),
                                     j.at("z_centers").get<std::vector<double>>(), j.at("a").get<double>(),
                                     j.at("eps").get<double>()});
  }
  if (fam == "composite") {
    std::vector<StratMap> ms;
    for (const auto& m : j.at("maps")) ms.push_back(stratmap_from_json(m));
    return compose(std::move(ms));
  }
  throw ValidationError("unknown stratified map family '" + fam + "'");
}

/// Family, dimension and numeric parameters of a built map.
inline json stratmap_to_json(const StratMap& m) {
  json j{{"family", m.family}, {"dim", m.dim}, {"params", m.params}};
  if (m.composite()) {
    json c = json::array();
    for (const auto& x : m.chain) c.push_back(stratmap_to_json(x));
    j["chain"] = c;
  }
  return j;
}

}  // namespace qgeom
