#pragma once

// Incremental Bowyer-Watson Delaunay triangulation of a planar point set.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "framed/errors.hpp"
#include "framed/point.hpp"

namespace framed {

namespace detail {

inline long double orient(Complex a, Complex b, Complex c) {
  return (static_cast<long double>(b.real()) - a.real()) * (static_cast<long double>(c.imag()) - a.imag()) -
         (static_cast<long double>(b.imag()) - a.imag()) * (static_cast<long double>(c.real()) - a.real());
}

/// > 0 when d lies inside the circumcircle of the counterclockwise triangle abc.
inline long double incircle(Complex a, Complex b, Complex c, Complex d) {
  const long double adx = a.real() - static_cast<long double>(d.real()), ady = a.imag() - static_cast<long double>(d.imag());
  const long double bdx = b.real() - static_cast<long double>(d.real()), bdy = b.imag() - static_cast<long double>(d.imag());
  const long double cdx = c.real() - static_cast<long double>(d.real()), cdy = c.imag() - static_cast<long double>(d.imag());
  const long double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

class BowyerWatson {
 public:
  explicit BowyerWatson(const std::vector<Complex>& pts) : P_(pts) {
    double lo_x = INFINITY, lo_y = INFINITY, hi_x = -INFINITY, hi_y = -INFINITY;
    for (const auto& p : pts) {
      lo_x = std::min(lo_x, p.real());
      hi_x = std::max(hi_x, p.real());
      lo_y = std::min(lo_y, p.imag());
      hi_y = std::max(hi_y, p.imag());
    }
    const Complex c(0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y));
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12}) * 50.0;
    n_ = static_cast<int>(pts.size());
    P_.push_back(c + span * Complex(-1.0, -1.0));
    P_.push_back(c + span * Complex(1.0, -1.0));
    P_.push_back(c + span * Complex(0.0, 1.5));
    T_.push_back({{n_, n_ + 1, n_ + 2}, {-1, -1, -1}, true});
  }

  void insert_all() {
    // spatially coherent insertion order keeps point location walks short
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    double lo_y = INFINITY, hi_y = -INFINITY;
    for (int i = 0; i < n_; ++i) {
      lo_y = std::min(lo_y, P_[i].imag());
      hi_y = std::max(hi_y, P_[i].imag());
    }
    const int bands = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_)) / 2));
    const double bh = std::max(1e-300, (hi_y - lo_y) / bands);
    auto band = [&](int i) { return std::min(bands - 1, static_cast<int>((P_[i].imag() - lo_y) / bh)); };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const int ba = band(a), bb = band(b);
      if (ba != bb) return ba < bb;
      return (ba % 2 == 0) ? P_[a].real() < P_[b].real() : P_[a].real() > P_[b].real();
    });
    for (int i : order) insert(i);
  }

  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : T_)
      if (t.alive && t.v[0] < n_ && t.v[1] < n_ && t.v[2] < n_) out.push_back(t.v);
    return out;
  }

 private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // neighbour across the edge opposite v[i]
    bool alive;
  };
  std::vector<Complex> P_;
  std::vector<Tri> T_;
  int n_ = 0;
  int last_ = 0;

  int locate(Complex p) {
    int t = last_;
    if (!T_[t].alive) {
      for (t = static_cast<int>(T_.size()) - 1; t >= 0 && !T_[t].alive; --t) {
      }
    }
    for (std::size_t steps = 0; steps < 4 * T_.size() + 10; ++steps) {
      const Tri& tr = T_[t];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int i = (k + static_cast<int>(steps)) % 3;
        if (orient(P_[tr.v[(i + 1) % 3]], P_[tr.v[(i + 2) % 3]], p) < 0) {
          next = tr.n[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    throw MeshQuality("point location failed");
  }

  void insert(int pi) {
    const Complex p = P_[pi];
    const int start = locate(p);
    std::vector<int> bad{start}, stack{start};
    std::vector<char> seen(T_.size(), 0);
    seen[start] = 1;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int nb : T_[t].n) {
        if (nb < 0 || seen[nb]) continue;
        seen[nb] = 1;
        const Tri& q = T_[nb];
        if (incircle(P_[q.v[0]], P_[q.v[1]], P_[q.v[2]], p) > 0) {
          bad.push_back(nb);
          stack.push_back(nb);
        }
      }
    }
    std::vector<char> is_bad(T_.size(), 0);
    for (int t : bad) is_bad[t] = 1;
    struct Edge {
      int a, b, outside;
    };
    std::vector<Edge> boundary;
    for (int t : bad) {
      const Tri& tr = T_[t];
      for (int i = 0; i < 3; ++i) {
        const int nb = tr.n[i];
        if (nb < 0 || !is_bad[nb]) boundary.push_back({tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], nb});
      }
    }
    for (int t : bad) T_[t].alive = false;
    std::vector<std::pair<int, int>> starts, ends;  // vertex -> new triangle
    std::vector<int> created;
    for (const auto& e : boundary) {
      const int id = static_cast<int>(T_.size());
      T_.push_back({{e.a, e.b, pi}, {-1, -1, e.outside}, true});
      if (e.outside >= 0) {
        Tri& o = T_[e.outside];
        for (int k = 0; k < 3; ++k)
          if (o.n[k] >= 0 && !T_[o.n[k]].alive && is_bad_at(is_bad, o.n[k])) {
            const int a = o.v[(k + 1) % 3], b = o.v[(k + 2) % 3];
            if (a == e.b && b == e.a) o.n[k] = id;
          }
      }
      starts.emplace_back(e.a, id);
      ends.emplace_back(e.b, id);
      created.push_back(id);
    }
    auto find = [](const std::vector<std::pair<int, int>>& m, int v) {
      for (const auto& [k, t] : m)
        if (k == v) return t;
      throw MeshQuality("cavity boundary is not a simple polygon");
    };
    for (int id : created) {
      Tri& t = T_[id];
      t.n[0] = find(starts, t.v[1]);
      t.n[1] = find(ends, t.v[0]);
    }
    last_ = created.empty() ? last_ : created.back();
  }

  static bool is_bad_at(const std::vector<char>& is_bad, int t) {
    return t < static_cast<int>(is_bad.size()) && is_bad[t];
  }
};

}  // namespace detail

/// Delaunay triangles (counterclockwise) of the given points.
inline std::vector<std::array<int, 3>> delaunay(const std::vector<Complex>& pts) {
  if (pts.size() < 3) return {};
  detail::BowyerWatson bw(pts);
  bw.insert_all();
  return bw.triangles();
}

}  // namespace framed
