// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "homog/error.hpp"

namespace homog {

namespace {

// Bilinear shape function derivatives at (xi, eta) in the reference square.
Eigen::Matrix<double, 2, 4> shape_gradients(double xi, double eta) {
  Eigen::Matrix<double, 2, 4> d;
  d << -(1 - eta), (1 - eta), (1 + eta), -(1 + eta), -(1 - xi), -(1 + xi), (1 + xi), (1 - xi);
  return 0.25 * d;
}

}  // namespace

void Mesh::validate() const {
  if (elements.size() != material.size()) fail(ErrorKind::Geometry, "material ids do not match element count");
  if (!(thickness > 0.0)) fail(ErrorKind::Geometry, "thickness must be positive");
  const double g = 1.0 / std::sqrt(3.0);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    Eigen::Matrix<double, 4, 2> xy;
    for (int a = 0; a < 4; ++a) {
      const int n = elements[e][a];
      if (n < 0 || static_cast<std::size_t>(n) >= nodes.size()) {
        fail(ErrorKind::Geometry, "element " + std::to_string(e) + " references missing node " + std::to_string(n));
      }
      xy.row(a) = nodes[n].transpose();
    }
    for (double xi : {-g, g}) {
      for (double eta : {-g, g}) {
        const Eigen::Matrix2d jac = shape_gradients(xi, eta) * xy;
        if (!(jac.determinant() > 0.0)) {
          fail(ErrorKind::Geometry, "element " + std::to_string(e) + " has a non-positive Jacobian");
        }
      }
    }
  }
}

Eigen::Vector2d Mesh::min_corner() const {
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  for (const auto& n : nodes) lo = lo.cwiseMin(n);
  return lo;
}

Eigen::Vector2d Mesh::max_corner() const {
  Eigen::Vector2d hi = Eigen::Vector2d::Constant(-std::numeric_limits<double>::infinity());
  for (const auto& n : nodes) hi = hi.cwiseMax(n);
  return hi;
}

double Mesh::element_area(std::size_t e) const {
  const auto& c = elements[e];
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d& p = nodes[c[i]];
    const Eigen::Vector2d& q = nodes[c[(i + 1) % 4]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e) a += element_area(e);
  return a;
}

Eigen::Vector2d Mesh::centroid(std::size_t e) const {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (int n : elements[e]) c += nodes[n];
  return 0.25 * c;
}

void FlemishGeometry::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::Geometry, what); };
  if (!(joint > 0.0)) bad("joint thickness must be positive");
  if (!(unit_height > 0.0)) bad("unit height must be positive");
  if (!(stretcher_length > 3.0 * joint)) bad("stretcher length must exceed three joint thicknesses");
  if (!(max_element_size > 0.0)) bad("max element size must be positive");
  if (courses < 1) bad("courses must be at least 1");
  if (units < 1) bad("units must be at least 1");
  if (resolution < 1) bad("resolution must be at least 1");
}

namespace {

struct Pattern {
  const FlemishGeometry& g;
  double ls, lh, j, px, ch;

  explicit Pattern(const FlemishGeometry& geo)
      : g(geo), ls(geo.stretcher_length), lh(geo.header_length()), j(geo.joint), px(geo.period_x()),
        ch(geo.course_height()) {}

  // Head-joint intervals of one period, per course parity.
  std::array<std::array<double, 2>, 2> head_joints(int parity) const {
    if (parity == 0) return {{{ls, ls + j}, {px - j, px}}};
    const double a = 0.5 * ls - 0.5 * lh;
    const double b = 0.5 * ls + 0.5 * lh;
    return {{{a - j, a}, {b, b + j}}};
  }

  std::vector<double> period_breaks() const {
    std::vector<double> out{0.0, px};
    for (int parity = 0; parity < 2; ++parity) {
      for (const auto& hj : head_joints(parity)) {
        out.push_back(hj[0]);
        out.push_back(hj[1]);
      }
    }
    return out;
  }

  bool in_head_joint(double x, int parity) const {
    const double local = x - px * std::floor(x / px);
    for (const auto& hj : head_joints(parity)) {
      if (local > hj[0] && local < hj[1]) return true;
    }
    return false;
  }

  bool in_bed_joint(double y) const {
    const double local = y - ch * std::floor(y / ch);
    return local < j;
  }

  int material_at(double x, double y) const {
    if (in_bed_joint(y)) return kMortar;
    const int course = static_cast<int>(std::floor(y / ch));
    return in_head_joint(x, course % 2) ? kMortar : kBrick;
  }
};

// Sorted, de-duplicated breaklines clipped to [0, limit].
std::vector<double> clean_breaks(std::vector<double> b, double limit) {
  const double tol = 1e-9 * limit;
  b.push_back(0.0);
  b.push_back(limit);
  std::sort(b.begin(), b.end());
  std::vector<double> out;
  for (double v : b) {
    if (v < -tol || v > limit + tol) continue;
    v = std::clamp(v, 0.0, limit);
    if (out.empty() || v - out.back() > tol) {
      out.push_back(v);
    } else {
      out.back() = std::max(out.back(), v);
    }
  }
  out.front() = 0.0;
  out.back() = limit;
  return out;
}

std::vector<double> subdivide(const std::vector<double>& breaks, const std::function<bool(double, double)>& is_joint,
                              int resolution, double h_max) {
  std::vector<double> coords{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const int n = is_joint(a, b) ? resolution : std::max(1, static_cast<int>(std::ceil((b - a) / h_max - 1e-9)));
    for (int k = 1; k < n; ++k) coords.push_back(a + (b - a) * k / n);
    coords.push_back(b);
  }
  return coords;
}

Mesh tensor_mesh(const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::function<int(double, double)>& material_at) {
  Mesh m;
  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());
  m.nodes.reserve(static_cast<std::size_t>(nx) * ny);
  for (int jy = 0; jy < ny; ++jy) {
    for (int ix = 0; ix < nx; ++ix) m.nodes.emplace_back(xs[ix], ys[jy]);
  }
  for (int jy = 0; jy + 1 < ny; ++jy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const int n0 = jy * nx + ix;
      m.elements.push_back({n0, n0 + 1, n0 + 1 + nx, n0 + nx});
      m.material.push_back(material_at(0.5 * (xs[ix] + xs[ix + 1]), 0.5 * (ys[jy] + ys[jy + 1])));
    }
  }
  return m;
}

Mesh flemish(const FlemishGeometry& g, double width, double height, int units, int courses) {
  const Pattern pat(g);
  std::vector<double> bx;
  for (int u = 0; u <= units; ++u) {
    for (double v : pat.period_breaks()) bx.push_back(u * pat.px + v);
  }
  std::vector<double> by;
  for (int c = 0; c <= courses; ++c) {
    by.push_back(c * pat.ch);
    by.push_back(c * pat.ch + pat.j);
  }
  bx = clean_breaks(bx, width);
  by = clean_breaks(by, height);

  const double jw = pat.j * (1.0 + 1e-9);
  auto x_joint = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    return b - a <= jw && (pat.in_head_joint(mid, 0) || pat.in_head_joint(mid, 1));
  };
  auto y_joint = [&](double a, double b) { return b - a <= jw && pat.in_bed_joint(0.5 * (a + b)); };

  const auto xs = subdivide(bx, x_joint, g.resolution, g.max_element_size);
  const auto ys = subdivide(by, y_joint, g.resolution, g.max_element_size);
  Mesh m = tensor_mesh(xs, ys, [&](double x, double y) { return pat.material_at(x, y); });
  m.validate();
  return m;
}

}  // namespace

Mesh generate_flemish_rve(const FlemishGeometry& g) {
  g.validate();
  return flemish(g, g.units * g.period_x(), g.courses * g.course_height(), g.units, g.courses);
}

Mesh generate_flemish_wall(const FlemishGeometry& g, double width, double height) {
  g.validate();
  if (!(width > 0.0) || !(height > 0.0)) fail(ErrorKind::Geometry, "wall dimensions must be positive");
  const int units = static_cast<int>(std::ceil(width / g.period_x())) + 1;
  const int courses = static_cast<int>(std::ceil(height / g.course_height())) + 1;
  return flemish(g, width, height, units, courses);
}

Mesh generate_grid(double width, double height, int nx, int ny, int material) {
  if (!(width > 0.0) || !(height > 0.0) || nx < 1 || ny < 1) {
    fail(ErrorKind::Geometry, "grid needs positive dimensions and at least one element per direction");
  }
  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = width * i / nx;
  for (int j = 0; j <= ny; ++j) ys[j] = height * j / ny;
  return tensor_mesh(xs, ys, [material](double, double) { return material; });
}

double mortar_fraction(const Mesh& m) {
  double mortar = 0.0, total = 0.0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    const double a = m.element_area(e);
    total += a;
    if (m.material[e] == kMortar) mortar += a;
  }
  return total > 0.0 ? mortar / total : 0.0;
}

CharacteristicLengths characteristic_lengths(const Mesh& m) {
  CharacteristicLengths out;
  out.per_element.reserve(m.num_elements());
  double sum = 0.0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    out.per_element.push_back(std::sqrt(m.element_area(e)));
    sum += out.per_element.back();
  }
  out.l_rse = m.num_elements() > 0 ? sum / static_cast<double>(m.num_elements()) : 0.0;
  return out;
}

std::string format_mesh(const Mesh& m) {
  std::string out;
  char buf[128];
  out += std::to_string(m.nodes.size()) + "\n";
  for (const auto& n : m.nodes) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", n.x(), n.y());
    out += buf;
  }
  out += std::to_string(m.elements.size()) + "\n";
  for (std::size_t e = 0; e < m.elements.size(); ++e) {
    const auto& c = m.elements[e];
    std::snprintf(buf, sizeof(buf), "%d %d %d %d %d\n", c[0], c[1], c[2], c[3], m.material[e]);
    out += buf;
  }
  return out;
}

Mesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  Mesh m;
  std::size_t nn = 0, ne = 0;
  if (!(in >> nn)) fail(ErrorKind::Geometry, "mesh: missing node count");
  m.nodes.resize(nn);
  for (auto& n : m.nodes) {
    if (!(in >> n.x() >> n.y())) fail(ErrorKind::Geometry, "mesh: truncated node list");
  }
  if (!(in >> ne)) fail(ErrorKind::Geometry, "mesh: missing element count");
  m.elements.resize(ne);
  m.material.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    auto& c = m.elements[e];
    if (!(in >> c[0] >> c[1] >> c[2] >> c[3] >> m.material[e])) fail(ErrorKind::Geometry, "mesh: truncated element list");
  }
  m.validate();
  return m;
}

void write_mesh(const Mesh& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << format_mesh(m);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh(ss.str());
}

std::uint64_t mesh_hash(const Mesh& m) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : format_mesh(m)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace homog
