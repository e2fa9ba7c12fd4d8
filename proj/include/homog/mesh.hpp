// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Quadrilateral meshes and the Flemish-bond masonry generator.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace homog {

enum MaterialTag : int { kBrick = 0, kMortar = 1 };

struct Mesh {
  std::vector<Eigen::Vector2d> nodes;
  /// Counter-clockwise node indices.
  std::vector<std::array<int, 4>> elements;
  std::vector<int> material;
  double thickness = 1.0;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_elements() const { return elements.size(); }

  /// Throws Geometry on dangling indices or non-positive Jacobians.
  void validate() const;

  Eigen::Vector2d min_corner() const;
  Eigen::Vector2d max_corner() const;
  double element_area(std::size_t e) const;
  double total_area() const;
  Eigen::Vector2d centroid(std::size_t e) const;
};

/// Brick and joint dimensions of the Flemish pattern. The header length is
/// (stretcher - joint) / 2 so two headers and a joint span one stretcher.
struct FlemishGeometry {
  double stretcher_length = 0.25;
  double unit_height = 0.055;
  double joint = 0.01;
  int courses = 2;
  int units = 1;
  /// Elements across every joint.
  int resolution = 2;
  /// Target element size inside bricks.
  double max_element_size = 0.01;

  double header_length() const { return 0.5 * (stretcher_length - joint); }
  double period_x() const { return stretcher_length + header_length() + 2.0 * joint; }
  double course_height() const { return unit_height + joint; }
  void validate() const;
};

/// Conforming tensor-grid mesh of `units` x `courses` pattern periods.
Mesh generate_flemish_rve(const FlemishGeometry& g);

/// The same pattern cropped to a width x height panel.
Mesh generate_flemish_wall(const FlemishGeometry& g, double width, double height);

/// Structured single-material grid of nx x ny elements.
Mesh generate_grid(double width, double height, int nx, int ny, int material = kMortar);

double mortar_fraction(const Mesh& m);

struct CharacteristicLengths {
  std::vector<double> per_element;
  double l_rse = 0.0;
};

CharacteristicLengths characteristic_lengths(const Mesh& m);

std::string format_mesh(const Mesh& m);
Mesh parse_mesh(const std::string& text);
void write_mesh(const Mesh& m, const std::string& path);
Mesh read_mesh(const std::string& path);

/// FNV-1a over the serialised mesh.
std::uint64_t mesh_hash(const Mesh& m);

}  // namespace homog
