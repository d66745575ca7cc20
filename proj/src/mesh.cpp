#include "acmc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "acmc/errors.hpp"

namespace acmc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec2 ring_center(const DomainSpec& s, double t) {
  if (s.kind == DomainKind::EccentricAnnulus) return (1.0 - t) * s.hole_offset;
  return {0, 0};
}

// ---- structured ring meshes for the circle-bounded kinds ------------------

// Stitch two concentric node rings (inner a, outer b, both listed CCW at
// equally spaced angles) into a triangle strip by merging the two angle
// sequences.  Produces size(a) + size(b) triangles.
void stitch(const std::vector<int>& a, const std::vector<int>& b,
            std::vector<std::array<int, 3>>& tris) {
  int na = int(a.size()), nb = int(b.size());
  int i = 0, j = 0;
  while (i < na || j < nb) {
    double a_next = 2 * kPi * (i + 1) / na;
    double b_next = 2 * kPi * (j + 1) / nb;
    if (i < na && (j >= nb || a_next <= b_next)) {
      tris.push_back({a[i % na], b[j % nb], a[(i + 1) % na]});
      ++i;
    } else {
      tris.push_back({a[i % na], b[j % nb], b[(j + 1) % nb]});
      ++j;
    }
  }
}

void build_rings(DomainMesh& m) {
  const DomainSpec& s = m.spec;
  bool has_hole = s.r_in > 0;
  double span = s.r_out - s.r_in + norm(s.hole_offset);
  int K = std::max(3, int(std::lround(span / s.h)));

  std::vector<std::vector<int>> rings(K + 1);
  for (int k = 0; k <= K; ++k) {
    double t = double(k) / K;
    double rho = s.r_in + t * (s.r_out - s.r_in);
    Vec2 c = ring_center(s, t);
    if (k == 0 && !has_hole) {
      rings[k].push_back(int(m.nodes.size()));
      m.nodes.push_back(c);
      continue;
    }
    int n = std::max(8, int(std::lround(2 * kPi * rho / s.h)));
    for (int q = 0; q < n; ++q) {
      double phi = 2 * kPi * q / n;
      rings[k].push_back(int(m.nodes.size()));
      m.nodes.push_back(c + Vec2{rho * std::cos(phi), rho * std::sin(phi)});
    }
  }

  for (int k = 0; k < K; ++k) {
    if (rings[k].size() == 1) {
      // center fan of the disk
      int c = rings[k][0];
      const auto& b = rings[k + 1];
      int nb = int(b.size());
      for (int q = 0; q < nb; ++q) m.tris.push_back({c, b[q], b[(q + 1) % nb]});
    } else {
      stitch(rings[k], rings[k + 1], m.tris);
    }
  }

  m.node_component.assign(m.nodes.size(), -1);
  for (int id : rings[K]) m.node_component[id] = 0;
  m.loops.push_back(rings[K]);  // outer loop, CCW: domain on the left
  if (has_hole) {
    for (int id : rings[0]) m.node_component[id] = 1;
    std::vector<int> hole(rings[0].rbegin(), rings[0].rend());  // CW: domain on the left
    m.loops.push_back(hole);
  }
}

void build_rect(DomainMesh& m) {
  const DomainSpec& s = m.spec;
  int nx = std::max(2, int(std::lround(s.width / s.h)));
  int ny = std::max(2, int(std::lround(s.height / s.h)));
  auto id = [&](int ix, int iy) { return iy * (nx + 1) + ix; };
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix)
      m.nodes.push_back({s.width * ix / nx, s.height * iy / ny});
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int a = id(ix, iy), b = id(ix + 1, iy), c = id(ix + 1, iy + 1), d = id(ix, iy + 1);
      if ((ix + iy) % 2 == 0) {
        m.tris.push_back({a, b, c});
        m.tris.push_back({a, c, d});
      } else {
        m.tris.push_back({a, b, d});
        m.tris.push_back({b, c, d});
      }
    }
  m.node_component.assign(m.nodes.size(), -1);
  std::vector<int> loop;
  for (int ix = 0; ix < nx; ++ix) loop.push_back(id(ix, 0));
  for (int iy = 0; iy < ny; ++iy) loop.push_back(id(nx, iy));
  for (int ix = nx; ix > 0; --ix) loop.push_back(id(ix, ny));
  for (int iy = ny; iy > 0; --iy) loop.push_back(id(0, iy));
  for (int v : loop) m.node_component[v] = 0;
  m.loops.push_back(loop);
}

// ---- shared finalization: orientation, operators, boundary data -----------

void assemble(DomainMesh& m) {
  int n = m.n_nodes();
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(m.tris.size() * 9);
  tm.reserve(m.tris.size() * 9);
  m.ML = Eigen::VectorXd::Zero(n);
  m.area = 0;
  for (auto& t : m.tris) {
    Vec2 a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
    double twice = cross(b - a, c - a);
    if (twice < 0) {
      std::swap(t[1], t[2]);
      std::swap(b, c);
      twice = -twice;
    }
    if (twice <= 1e-14 * (dot(b - a, b - a) + dot(c - a, c - a)))
      throw MeshFailure("degenerate triangle in mesh");
    double T = 0.5 * twice;
    m.area += T;
    Vec2 g[3] = {{(b.y - c.y) / twice, (c.x - b.x) / twice},
                 {(c.y - a.y) / twice, (a.x - c.x) / twice},
                 {(a.y - b.y) / twice, (b.x - a.x) / twice}};
    for (int p = 0; p < 3; ++p) {
      m.ML[t[p]] += T / 3.0;
      for (int q = 0; q < 3; ++q) {
        tk.emplace_back(t[p], t[q], T * dot(g[p], g[q]));
        tm.emplace_back(t[p], t[q], T / 12.0 * (p == q ? 2.0 : 1.0));
      }
    }
  }
  m.K.resize(n, n);
  m.K.setFromTriplets(tk.begin(), tk.end());
  m.M.resize(n, n);
  m.M.setFromTriplets(tm.begin(), tm.end());
}

void boundary_data(DomainMesh& m) {
  int n = m.n_nodes();
  m.curvature.assign(n, 0.0);
  m.loop_length.assign(m.loops.size(), 0.0);
  for (size_t l = 0; l < m.loops.size(); ++l) {
    const auto& lp = m.loops[l];
    int nl = int(lp.size());
    for (int i = 0; i < nl; ++i)
      m.loop_length[l] += dist(m.nodes[lp[i]], m.nodes[lp[(i + 1) % nl]]);
    if (nl < 3) continue;
    for (int i = 0; i < nl; ++i) {
      Vec2 a = m.nodes[lp[(i + nl - 1) % nl]], b = m.nodes[lp[i]], c = m.nodes[lp[(i + 1) % nl]];
      double cr = cross(b - a, c - a);
      if (std::abs(cr) < 1e-30) continue;  // collinear: straight wall
      double R = dist(a, b) * dist(b, c) * dist(c, a) / (2 * std::abs(cr));
      // loops run with the domain on the left, so a left turn is a convex wall
      m.curvature[lp[i]] = (cross(b - a, c - b) > 0 ? 1.0 : -1.0) / R;
    }
  }

  for (int i = 0; i < n; ++i)
    (m.node_component[i] >= 0 ? m.boundary_nodes : m.interior_nodes).push_back(i);

  // projection validity per loop: caustic distance on the convex side and
  // half the gap to the other loops
  double gap = kInf;
  if (m.loops.size() > 1) {
    for (size_t l1 = 0; l1 < m.loops.size(); ++l1)
      for (size_t l2 = l1 + 1; l2 < m.loops.size(); ++l2)
        for (int i : m.loops[l1])
          for (int j : m.loops[l2]) gap = std::min(gap, dist(m.nodes[i], m.nodes[j]));
  }
  m.inj_estimate.assign(m.loops.size(), 0.0);
  for (size_t l = 0; l < m.loops.size(); ++l) {
    double kmax = 0;
    for (int i : m.loops[l]) kmax = std::max(kmax, m.curvature[i]);
    double caustic = kmax > 1e-12 ? 1.0 / kmax : kInf;
    double inj = std::min(caustic, gap / 2);
    if (!std::isfinite(inj)) inj = m.diameter / 2;
    m.inj_estimate[l] = inj;
  }
}

void validate_spec(const DomainSpec& s) {
  if (s.h <= 0) throw InvalidGeometry("mesh size h must be positive");
  switch (s.kind) {
    case DomainKind::Disk:
      if (s.r_out <= 0) throw InvalidGeometry("disk radius must be positive");
      if (s.r_in != 0) throw InvalidGeometry("disk cannot have a hole radius");
      break;
    case DomainKind::Annulus:
    case DomainKind::EccentricAnnulus: {
      if (s.r_in <= 0 || s.r_out <= s.r_in)
        throw InvalidGeometry("annulus needs 0 < r_in < r_out");
      double off = s.kind == DomainKind::EccentricAnnulus ? norm(s.hole_offset) : 0.0;
      if (s.r_in + off >= s.r_out)
        throw InvalidGeometry("hole touches or leaves the outer circle");
      break;
    }
    case DomainKind::Rectangle:
      if (s.width <= 0 || s.height <= 0)
        throw InvalidGeometry("rectangle needs positive width and height");
      break;
  }
}

double spec_min_feature(const DomainSpec& s) {
  switch (s.kind) {
    case DomainKind::Disk:
      return s.r_out;
    case DomainKind::Annulus:
      return std::min(s.r_out - s.r_in, s.r_in);
    case DomainKind::EccentricAnnulus:
      return std::min(s.r_out - s.r_in - norm(s.hole_offset), s.r_in);
    case DomainKind::Rectangle:
      return std::min(s.width, s.height);
  }
  return 0;
}

}  // namespace

MeshPtr build_domain(const DomainSpec& spec) {
  validate_spec(spec);
  double feat = spec_min_feature(spec);
  if (spec.h > 0.5 * feat)
    throw InvalidGeometry("h too coarse for the domain's smallest feature");

  if (spec.delta_M < 0 || spec.delta_M > feat)
    throw InvalidGeometry("collar depth outside (0, min_feature]");

  auto m = std::make_shared<DomainMesh>();
  m->spec = spec;
  m->min_feature = feat;
  m->delta_M = spec.delta_M > 0 ? spec.delta_M : 0.25 * feat;

  if (spec.kind == DomainKind::Rectangle) {
    m->geom.is_rect = true;
    m->geom.rect_w = spec.width;
    m->geom.rect_h = spec.height;
    m->diameter = std::hypot(spec.width, spec.height);
    build_rect(*m);
  } else {
    m->geom.outer_radius = spec.r_out;
    if (spec.r_in > 0) {
      m->geom.has_hole = true;
      m->geom.hole_radius = spec.r_in;
      m->geom.hole_center = ring_center(spec, 0.0);
    }
    m->diameter = 2 * spec.r_out;
    build_rings(*m);
  }
  assemble(*m);
  boundary_data(*m);
  return m;
}

BoundaryPoint project_to_boundary(const DomainMesh& mesh, Vec2 x, bool strict) {
  BoundaryPoint best;
  double bestd = kInf;
  auto scan = [&](auto&& accept) {
    for (size_t l = 0; l < mesh.loops.size(); ++l) {
      const auto& lp = mesh.loops[l];
      int nl = int(lp.size());
      double s0 = 0;
      for (int i = 0; i < nl; ++i) {
        Vec2 p = mesh.nodes[lp[i]], q = mesh.nodes[lp[(i + 1) % nl]];
        Vec2 d = q - p;
        double len = norm(d);
        if (len < 1e-300) continue;
        double t = std::clamp(dot(x - p, d) / (len * len), 0.0, 1.0);
        Vec2 proj = p + t * d;
        accept(dist(x, proj), int(l), s0 + t * len, proj, Vec2{-d.y / len, d.x / len});
        s0 += len;
      }
    }
  };
  scan([&](double dd, int l, double s, Vec2 p, Vec2 nrm) {
    if (dd < bestd) {
      bestd = dd;
      best = {l, s, p, nrm};
    }
  });
  if (bestd == kInf) throw InvalidGeometry("mesh has no boundary");
  if (strict) {
    double sep = std::max(3 * mesh.spec.h, 1e-6);
    double rival = kInf;
    scan([&](double dd, int, double, Vec2 p, Vec2) {
      if (dist(p, best.p) > sep) rival = std::min(rival, dd);
    });
    if (rival - bestd <= 1e-9 * (1 + bestd))
      throw AmbiguousProjection("two boundary points at the same distance");
  }
  return best;
}

Vec2 project_to_domain(const DomainMesh& mesh, Vec2 x) {
  if (mesh.has_geom) {
    if (geom_contains(mesh.geom, x)) return x;
    return project_to_boundary(mesh, x).p;
  }
  // loaded mesh: decide the inside by which side of the nearest wall x sits on
  BoundaryPoint bp = project_to_boundary(mesh, x);
  return dot(x - bp.p, bp.normal) >= 0 ? x : bp.p;
}

BoundaryPoint boundary_point(const DomainMesh& mesh, int component, double s) {
  if (component < 0 || component >= int(mesh.loops.size()))
    throw InvalidGeometry("no such boundary component");
  const auto& lp = mesh.loops[component];
  double L = mesh.loop_length[component];
  s = std::fmod(s, L);
  if (s < 0) s += L;
  int nl = int(lp.size());
  for (int i = 0; i < nl; ++i) {
    Vec2 p = mesh.nodes[lp[i]], q = mesh.nodes[lp[(i + 1) % nl]];
    double len = dist(p, q);
    if (s <= len || i == nl - 1) {
      double t = len > 0 ? std::min(s / len, 1.0) : 0.0;
      Vec2 d = q - p;
      double dn = norm(d);
      return {component, s, p + t * d, {-d.y / dn, d.x / dn}};
    }
    s -= len;
  }
  return {component, 0, mesh.nodes[lp[0]], {0, 0}};  // unreachable
}

BallRegion ball_indicator(const DomainMesh& mesh, Vec2 center, double mass) {
  if (!(mass > 0) || mass >= mesh.area)
    throw MassOutOfRange("ball mass must lie strictly inside (0, vol(M))");
  auto vol = [&](double r) {
    double s = 0;
    for (const auto& t : mesh.tris) {
      Vec2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
      // skip triangles entirely beyond the ball
      double dmin = dist(center, a) - 2 * (dist(a, b) + dist(a, c));
      if (dmin > r) continue;
      s += disk_triangle_area(center, r, a, b, c);
    }
    return s;
  };
  double r_hi = std::sqrt(mass / kPi), r_lo = 0;
  int guard = 0;
  while (vol(r_hi) < mass) {
    r_lo = r_hi;
    r_hi *= 1.5;
    if (++guard > 60 || r_hi > 4 * mesh.diameter)
      throw MassOutOfRange("mass not reachable by any ball");
  }
  double tol = 1e-8 * mesh.area;
  double r = r_hi, v = 0;
  for (int it = 0; it < 200; ++it) {
    r = 0.5 * (r_lo + r_hi);
    v = vol(r);
    if (std::abs(v - mass) <= tol) break;
    (v < mass ? r_lo : r_hi) = r;
  }
  BallRegion reg;
  reg.center = center;
  reg.radius = r;
  reg.vol = v;
  if (mesh.has_geom) {
    ClippedBall cb = clip_ball(mesh.geom, center, r);
    reg.has_arcs = true;
    reg.arcs = cb.free_arcs;
    reg.clipped = cb.wall_length > 1e-12;
  }
  return reg;
}

Eigen::VectorXd signed_distance(const DomainMesh& mesh, const BallRegion& region) {
  if (!region.has_arcs) {
    std::vector<char> in(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i)
      in[i] = dist(mesh.nodes[i], region.center) <= region.radius;
    return signed_distance(mesh, in);
  }
  if (region.arcs.empty()) throw EmptyRegion("ball has no free interface");
  Eigen::VectorXd d(mesh.n_nodes());
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    double dd = dist_to_arcs(mesh.nodes[i], region.center, region.radius, region.arcs);
    bool inside = dist(mesh.nodes[i], region.center) <= region.radius;
    d[i] = inside ? dd : -dd;
  }
  return d;
}

Eigen::VectorXd signed_distance(const DomainMesh& mesh, const std::vector<char>& inside) {
  int n = mesh.n_nodes();
  if (int(inside.size()) != n) throw EmptyRegion("indicator size mismatch");
  std::vector<std::pair<Vec2, Vec2>> segs;
  for (const auto& t : mesh.tris) {
    std::vector<Vec2> cuts;
    for (int e = 0; e < 3; ++e) {
      int i = t[e], j = t[(e + 1) % 3];
      if (inside[i] != inside[j]) cuts.push_back(0.5 * (mesh.nodes[i] + mesh.nodes[j]));
    }
    if (cuts.size() == 2) segs.push_back({cuts[0], cuts[1]});
  }
  if (segs.empty()) throw EmptyRegion("indicator has no interface inside the domain");
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    Vec2 x = mesh.nodes[i];
    double best = kInf;
    for (auto& [p, q] : segs) {
      Vec2 dd = q - p;
      double l2 = dot(dd, dd);
      double t = l2 > 0 ? std::clamp(dot(x - p, dd) / l2, 0.0, 1.0) : 0.0;
      best = std::min(best, dist(x, p + t * dd));
    }
    d[i] = inside[i] ? best : -best;
  }
  return d;
}

void save_mesh(const DomainMesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.precision(17);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    int comp = mesh.node_component[i];
    f << mesh.nodes[i].x << " " << mesh.nodes[i].y << " " << (comp >= 0 ? 1 : 0) << " "
      << std::max(comp, 0) << "\n";
  }
  for (const auto& t : mesh.tris) f << t[0] << " " << t[1] << " " << t[2] << "\n";
}

MeshPtr load_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  auto m = std::make_shared<DomainMesh>();
  m->has_geom = false;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::vector<double> v;
    double x;
    while (ss >> x) v.push_back(x);
    if (v.size() == 4) {
      m->nodes.push_back({v[0], v[1]});
      m->node_component.push_back(v[2] != 0 ? int(v[3]) : -1);
    } else if (v.size() == 3) {
      m->tris.push_back({int(v[0]), int(v[1]), int(v[2])});
    } else if (!v.empty()) {
      throw Error("unrecognized line in mesh file: " + line);
    }
  }
  if (m->nodes.empty() || m->tris.empty()) throw Error("mesh file has no nodes or triangles");
  for (auto& t : m->tris)
    for (int v : t)
      if (v < 0 || v >= m->n_nodes()) throw Error("triangle index out of range");

  assemble(*m);

  // directed boundary edges (each lies in exactly one CCW triangle, domain on
  // the left) chained into loops
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m->tris)
    for (int e = 0; e < 3; ++e) {
      int i = t[e], j = t[(e + 1) % 3];
      count[{std::min(i, j), std::max(i, j)}]++;
    }
  std::map<int, int> next;
  for (const auto& t : m->tris)
    for (int e = 0; e < 3; ++e) {
      int i = t[e], j = t[(e + 1) % 3];
      if (count[{std::min(i, j), std::max(i, j)}] == 1) next[i] = j;
    }
  std::map<int, bool> seen;
  for (auto& [start, _] : next) {
    if (seen[start]) continue;
    std::vector<int> loop;
    int v = start;
    while (!seen[v]) {
      seen[v] = true;
      loop.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) throw MeshFailure("open boundary chain in mesh file");
      v = it->second;
    }
    m->loops.push_back(loop);
  }
  // order loops by the component id recorded in the file
  std::sort(m->loops.begin(), m->loops.end(), [&](const auto& a, const auto& b) {
    return m->node_component[a[0]] < m->node_component[b[0]];
  });

  // boundary flags may disagree with edge topology; trust the topology
  for (size_t l = 0; l < m->loops.size(); ++l)
    for (int v : m->loops[l]) m->node_component[v] = int(l);

  double elen = 0;
  int ecount = 0;
  for (const auto& lp : m->loops) {
    int nl = int(lp.size());
    for (int i = 0; i < nl; ++i) {
      elen += dist(m->nodes[lp[i]], m->nodes[lp[(i + 1) % nl]]);
      ++ecount;
    }
  }
  m->spec.h = ecount ? elen / ecount : 0.05;

  double diam = 0;
  for (const auto& la : m->loops)
    for (int i : la)
      for (const auto& lb : m->loops)
        for (int j : lb) diam = std::max(diam, dist(m->nodes[i], m->nodes[j]));
  m->diameter = diam;

  boundary_data(*m);
  double inj = kInf;
  for (double v : m->inj_estimate) inj = std::min(inj, v);
  m->min_feature = 2 * inj;
  m->delta_M = 0.25 * m->min_feature;
  return m;
}

}  // namespace acmc
