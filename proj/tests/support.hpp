#pragma once

// Independent oracles and fixtures shared by the unit tests and the
// acceptance binary. Nothing here calls into the code under test except to
// build inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dpdp/genome.hpp"
#include "dpdp/scenario_io.hpp"
#include "dpdp/world.hpp"

#ifndef DPDP_SCENARIO_DIR
#define DPDP_SCENARIO_DIR "scenarios"
#endif

namespace dpdp::test {

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(DPDP_SCENARIO_DIR) / (name + ".json");
}

inline ScenarioDocument bundled(const std::string& name) { return load_scenario(scenario_path(name)); }

inline bool near_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

// ---- oracles ---------------------------------------------------------------

/// Every ordering of `stops` where each pickup precedes its delivery, by
/// exhaustive permutation.
inline std::vector<Genome> feasible_orderings(std::vector<Stop> stops) {
  std::sort(stops.begin(), stops.end());
  std::vector<Genome> out;
  do {
    std::map<RequestId, int> seen_pickup;
    bool ok = true;
    for (const auto& s : stops) {
      if (s.kind == StopKind::pickup) seen_pickup[s.request] = 1;
      else if (!seen_pickup.count(s.request)) {
        // Only a violation if the pickup is present at all.
        if (std::find(stops.begin(), stops.end(), Stop::pickup(s.request)) != stops.end()) ok = false;
      }
    }
    if (ok) out.push_back(stops);
  } while (std::next_permutation(stops.begin(), stops.end()));
  return out;
}

/// Pickup-before-delivery check written independently of the library.
inline bool precedence_ok(const Genome& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].kind != StopKind::delivery) continue;
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g[j] == Stop::pickup(g[i].request)) return false;
  }
  return true;
}

inline bool same_multiset(Genome a, Genome b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline double euclid(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double polyline_length(const std::vector<Point2D>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += euclid(pts[i - 1], pts[i]);
  return total;
}

/// Closed segment vs closed axis-aligned rectangle via endpoint containment
/// and orientation tests against the four edges.
inline bool segment_hits_rect_oracle(Point2D a, Point2D b, const Rect& r) {
  auto inside = [&](Point2D p) {
    return p.x >= r.min.x && p.x <= r.max.x && p.y >= r.min.y && p.y <= r.max.y;
  };
  if (inside(a) || inside(b)) return true;
  auto orient = [](Point2D p, Point2D q, Point2D s) {
    const double v = (q.x - p.x) * (s.y - p.y) - (q.y - p.y) * (s.x - p.x);
    return (v > 0) - (v < 0);
  };
  auto on_seg = [](Point2D p, Point2D q, Point2D s) {
    return std::min(p.x, q.x) <= s.x && s.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= s.y &&
           s.y <= std::max(p.y, q.y);
  };
  auto cross = [&](Point2D p1, Point2D p2, Point2D q1, Point2D q2) {
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2), o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_seg(p1, p2, q1)) return true;
    if (o2 == 0 && on_seg(p1, p2, q2)) return true;
    if (o3 == 0 && on_seg(q1, q2, p1)) return true;
    if (o4 == 0 && on_seg(q1, q2, p2)) return true;
    return false;
  };
  const std::array<Point2D, 4> c{r.min, Point2D{r.max.x, r.min.y}, r.max, Point2D{r.min.x, r.max.y}};
  for (int i = 0; i < 4; ++i)
    if (cross(a, b, c[i], c[(i + 1) % 4])) return true;
  return false;
}

inline double legacy_oracle(double f1, double f2, double w1, double w2) { return 1.0 / (w1 / f1 + w2 / f2); }

/// Solves min sum (w1*x_i + w2*y_i - z_i)^2 through the 2x2 normal equations.
inline std::array<double, 2> least_squares_2(const std::vector<std::array<double, 3>>& rows) {
  long double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
  for (const auto& r : rows) {
    sxx += (long double)r[0] * r[0];
    sxy += (long double)r[0] * r[1];
    syy += (long double)r[1] * r[1];
    sxz += (long double)r[0] * r[2];
    syz += (long double)r[1] * r[2];
  }
  const long double det = sxx * syy - sxy * sxy;
  return {static_cast<double>((sxz * syy - syz * sxy) / det), static_cast<double>((syz * sxx - sxz * sxy) / det)};
}

// ---- fixtures --------------------------------------------------------------

inline Request make_request(int id, const std::string& depot, const std::string& article, const std::string& client,
                            int qty, const std::string& agent) {
  return Request{RequestId{id}, DepotId{depot}, ArticleId{article}, ClientId{client}, qty, AgentId{agent}, false, 0};
}

/// The depots, clients and articles of the bundled t0 scenario, built in
/// code so tests do not depend on the JSON loader.
inline World t0_world() {
  World w;
  w.bounds = {{0, 0}, {2000, 1200}};
  for (int i = 1; i <= 5; ++i) w.articles.insert(ArticleId{"Art" + std::to_string(i)});
  auto depot = [&](const std::string& id, Point2D p, const std::string& art) {
    w.depots[DepotId{id}] = Depot{DepotId{id}, p, {{ArticleId{art}, 10000}}};
  };
  depot("S1", {200, 150}, "Art1");
  depot("S2", {1800, 120}, "Art2");
  depot("S3", {180, 1000}, "Art3");
  depot("S4", {1750, 1010}, "Art4");
  auto client = [&](const std::string& id, Point2D p) { w.clients[ClientId{id}] = Client{ClientId{id}, p}; };
  client("T1", {500, 100});
  client("T2", {100, 800});
  client("T3", {800, 800});
  client("T4", {1800, 720});
  client("T5", {650, 670});
  client("T6", {800, 320});
  client("T7", {850, 700});
  return w;
}

inline RequestTable t0_requests() {
  RequestTable t;
  for (const auto& r : {make_request(1, "S1", "Art1", "T3", 100, "A1"), make_request(2, "S3", "Art3", "T4", 50, "A1"),
                        make_request(3, "S2", "Art2", "T1", 150, "A1"), make_request(4, "S3", "Art3", "T2", 150, "A2"),
                        make_request(5, "S4", "Art4", "T5", 50, "A2"), make_request(6, "S2", "Art2", "T7", 300, "A2"),
                        make_request(7, "S1", "Art1", "T6", 200, "A2"), make_request(8, "S2", "Art2", "T3", 150, "A3"),
                        make_request(9, "S1", "Art1", "T2", 150, "A3"), make_request(10, "S4", "Art4", "T1", 200, "A3")})
    t[r.id] = r;
  return t;
}

inline Genome stops_of(std::initializer_list<int> pickups) {
  Genome g;
  for (int id : pickups) {
    g.push_back(Stop::pickup(RequestId{id}));
    g.push_back(Stop::delivery(RequestId{id}));
  }
  return g;
}

inline Stop pu(int id) { return Stop::pickup(RequestId{id}); }
inline Stop de(int id) { return Stop::delivery(RequestId{id}); }

}  // namespace dpdp::test
