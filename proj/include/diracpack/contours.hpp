#pragma once

// Zero level sets and negative regions of a sampled half-plane field.
//
// A grid value v counts as negative iff v < -floor; values within the
// floor of zero are treated as non-negative, so roundoff far from the
// packet does not produce spurious crossings. floor = 0 gives the plain
// zero level set.

#include "diracpack/grid_scan.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace diracpack {

struct Point2 {
  double x = 0.0, z = 0.0;
};

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;
};

namespace detail {

// Marching squares on values laid out as index(i, j) = i * nz + j with
// coordinates x(i), z(j). Extracts the level -floor with linear
// interpolation along cell edges; saddles are resolved by the cell mean.
class MarchingSquares {
public:
  MarchingSquares(const HalfPlaneGrid &g, std::span<const double> values,
                  double floor)
      : g_(g), v_(values), floor_(floor) {}

  std::vector<Polyline> run() const {
    const std::size_t nx = g_.nx, nz = g_.nz;
    // each crossed edge gets a point; segments join two edge ids
    std::unordered_map<std::size_t, Point2> points;
    std::vector<std::pair<std::size_t, std::size_t>> segments;

    for (std::size_t i = 0; i + 1 < nx; ++i)
      for (std::size_t j = 0; j + 1 < nz; ++j) {
        const std::array<double, 4> c{shifted(i, j), shifted(i + 1, j),
                                      shifted(i + 1, j + 1),
                                      shifted(i, j + 1)};
        int mask = 0;
        for (int k = 0; k < 4; ++k)
          if (c[k] < 0.0) mask |= 1 << k;
        if (mask == 0 || mask == 15) continue;

        // edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left
        // (c0-c3)
        const std::array<std::size_t, 4> id{h_edge(i, j), v_edge(i + 1, j),
                                            h_edge(i, j + 1), v_edge(i, j)};
        auto crossed = [&](int e) {
          const std::size_t key = id[e];
          if (!points.count(key)) points[key] = crossing(i, j, e, c);
          return key;
        };
        auto seg = [&](int a, int b) {
          segments.emplace_back(crossed(a), crossed(b));
        };
        const double centre = 0.25 * (c[0] + c[1] + c[2] + c[3]);
        switch (mask) {
        case 1: case 14: seg(3, 0); break;
        case 2: case 13: seg(0, 1); break;
        case 4: case 11: seg(1, 2); break;
        case 8: case 7: seg(2, 3); break;
        case 3: case 12: seg(3, 1); break;
        case 6: case 9: seg(0, 2); break;
        case 5: // c0, c2 negative
          if (centre < 0.0) { seg(0, 1); seg(2, 3); }
          else { seg(3, 0); seg(1, 2); }
          break;
        case 10: // c1, c3 negative
          if (centre < 0.0) { seg(3, 0); seg(1, 2); }
          else { seg(0, 1); seg(2, 3); }
          break;
        default: break;
        }
      }
    return link(points, segments);
  }

private:
  double shifted(std::size_t i, std::size_t j) const {
    return v_[g_.index(i, j)] + floor_;
  }
  std::size_t h_edge(std::size_t i, std::size_t j) const {
    return i * g_.nz + j;
  }
  std::size_t v_edge(std::size_t i, std::size_t j) const {
    return g_.nx * g_.nz + i * g_.nz + j;
  }

  Point2 crossing(std::size_t i, std::size_t j, int edge,
                  const std::array<double, 4> &c) const {
    static constexpr std::array<std::array<int, 2>, 4> ends{
        {{0, 1}, {1, 2}, {3, 2}, {0, 3}}};
    static constexpr std::array<std::array<int, 2>, 4> offset{
        {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    const int a = ends[edge][0], b = ends[edge][1];
    const double va = c[a], vb = c[b];
    double s = va / (va - vb);
    s = std::clamp(s, 0.0, 1.0);
    const double xa = g_.x(i + offset[a][0]), za = g_.z(j + offset[a][1]);
    const double xb = g_.x(i + offset[b][0]), zb = g_.z(j + offset[b][1]);
    return {xa + s * (xb - xa), za + s * (zb - za)};
  }

  static std::vector<Polyline>
  link(const std::unordered_map<std::size_t, Point2> &points,
       const std::vector<std::pair<std::size_t, std::size_t>> &segments) {
    std::unordered_map<std::size_t, std::vector<std::size_t>> adj;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      adj[segments[s].first].push_back(s);
      adj[segments[s].second].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);

    auto walk = [&](std::size_t start) {
      Polyline line;
      line.points.push_back(points.at(start));
      std::size_t at = start;
      for (;;) {
        std::size_t next_seg = segments.size();
        for (std::size_t s : adj[at])
          if (!used[s]) { next_seg = s; break; }
        if (next_seg == segments.size()) break;
        used[next_seg] = true;
        const auto &sg = segments[next_seg];
        at = sg.first == at ? sg.second : sg.first;
        line.points.push_back(points.at(at));
        if (at == start) { line.closed = true; break; }
      }
      return line;
    };

    // deterministic order: sort endpoint ids
    std::vector<std::size_t> keys;
    keys.reserve(adj.size());
    for (const auto &kv : adj) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());

    std::vector<Polyline> out;
    for (std::size_t k : keys) // open lines start at degree-1 points
      if (adj[k].size() == 1 && !used[adj[k][0]]) out.push_back(walk(k));
    for (std::size_t k : keys)
      for (std::size_t s : adj[k])
        if (!used[s]) out.push_back(walk(k));
    return out;
  }

  const HalfPlaneGrid &g_;
  std::span<const double> v_;
  double floor_;
};

} // namespace detail

inline std::vector<Polyline> zero_contours(const FieldMap &map,
                                           double floor = 0.0) {
  return detail::MarchingSquares(map.grid, map.values, floor).run();
}

struct GridIndex {
  std::size_t i = 0, j = 0;
};

struct NegativeRegion {
  std::vector<GridIndex> cells;
  double min_value = 0.0;
  Point2 centroid;
  /// Level set of the region's indicator; several polylines when the region
  /// has holes or touches the grid edge.
  std::vector<Polyline> boundary;
};

/// 4-connected components of cells with value < -floor, ordered by their
/// first cell in grid order.
inline std::vector<NegativeRegion> negative_components(const FieldMap &map,
                                                       double floor = 0.0) {
  const HalfPlaneGrid &g = map.grid;
  const std::size_t n = g.size();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(n, none);
  auto negative = [&](std::size_t idx) { return map.values[idx] < -floor; };

  std::vector<NegativeRegion> regions;
  for (std::size_t start = 0; start < n; ++start) {
    if (!negative(start) || label[start] != none) continue;
    const std::size_t id = regions.size();
    NegativeRegion region;
    region.min_value = map.values[start];
    std::queue<std::size_t> todo;
    todo.push(start);
    label[start] = id;
    std::size_t i_lo = g.nx, i_hi = 0, j_lo = g.nz, j_hi = 0;
    double sx = 0.0, sz = 0.0;
    while (!todo.empty()) {
      const std::size_t idx = todo.front();
      todo.pop();
      const std::size_t i = idx / g.nz, j = idx % g.nz;
      region.cells.push_back({i, j});
      region.min_value = std::min(region.min_value, map.values[idx]);
      sx += g.x(i);
      sz += g.z(j);
      i_lo = std::min(i_lo, i); i_hi = std::max(i_hi, i);
      j_lo = std::min(j_lo, j); j_hi = std::max(j_hi, j);
      auto visit = [&](std::size_t ni, std::size_t nj) {
        const std::size_t nidx = g.index(ni, nj);
        if (negative(nidx) && label[nidx] == none) {
          label[nidx] = id;
          todo.push(nidx);
        }
      };
      if (i > 0) visit(i - 1, j);
      if (i + 1 < g.nx) visit(i + 1, j);
      if (j > 0) visit(i, j - 1);
      if (j + 1 < g.nz) visit(i, j + 1);
    }
    const double count = static_cast<double>(region.cells.size());
    region.centroid = {sx / count, sz / count};

    // indicator on the bounding box plus a one-cell margin
    const std::size_t i0 = i_lo > 0 ? i_lo - 1 : 0;
    const std::size_t i1 = std::min(g.nx - 1, i_hi + 1);
    const std::size_t j0 = j_lo > 0 ? j_lo - 1 : 0;
    const std::size_t j1 = std::min(g.nz - 1, j_hi + 1);
    HalfPlaneGrid sub;
    sub.x_min = g.x(i0); sub.x_max = g.x(i1);
    sub.z_min = g.z(j0); sub.z_max = g.z(j1);
    sub.nx = i1 - i0 + 1;
    sub.nz = j1 - j0 + 1;
    if (sub.nx >= 2 && sub.nz >= 2) {
      std::vector<double> indicator(sub.size());
      for (std::size_t i = 0; i < sub.nx; ++i)
        for (std::size_t j = 0; j < sub.nz; ++j)
          indicator[sub.index(i, j)] =
              label[g.index(i0 + i, j0 + j)] == id ? -1.0 : 1.0;
      region.boundary = detail::MarchingSquares(sub, indicator, 0.0).run();
    }
    regions.push_back(std::move(region));
  }
  return regions;
}

} // namespace diracpack
