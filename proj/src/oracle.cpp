#include "dre/oracle.hpp"

namespace dre::oracle {

SiteMask up_set_closure(const SiteMask& a) {
  const Box& q = a.box();
  SiteMask out(q);
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i) {
    if (!a.test(i)) continue;
    out |= up_cone(q.site_at(i), q);
  }
  return out;
}

SiteMask lower_boundary(const SiteMask& g) {
  const Box& q = g.box();
  const int d = q.dim();
  SiteMask out(q);
  for (int axis = 0; axis < d; ++axis) {
    // Lines along `axis`: bases are the sites of the lo-face.
    Point face_hi = q.hi;
    face_hi[axis] = q.lo[axis];
    Box face(q.lo, face_hi);
    const int64_t lines = face.size();
    for (int64_t l = 0; l < lines; ++l) {
      Point x = face.site_at(l);
      bool prev_in = false;  // the predecessor of lo[axis] is outside the box
      for (int32_t v = q.lo[axis]; v <= q.hi[axis]; ++v) {
        x[axis] = v;
        bool cur_in = g.test_point(x);
        if (cur_in && v > q.lo[axis] && !prev_in) out.set_point(x);
        prev_in = cur_in;
      }
    }
  }
  return out;
}

SiteMask forward_cluster(const ConfigGrid& g, const Point& x) {
  const Box& q = g.box;
  const int d = q.dim();
  SiteMask reach(q);
  reach.set_point(x);
  bool changed = true;
  while (changed) {
    changed = false;
    const int64_t n = q.size();
    for (int64_t i = 0; i < n; ++i) {
      if (!reach.test(i)) continue;
      Point site = q.site_at(i);
      StepSet steps = g.step_set(i);
      for (int k = 0; k < d; ++k) {
        if (steps & (1u << k)) {
          Point nxt = site.shifted(k, +1);
          if (q.contains(nxt) && !reach.test_point(nxt)) {
            reach.set_point(nxt);
            changed = true;
          }
        }
        if (steps & (1u << (d + k))) {
          Point nxt = site.shifted(k, -1);
          if (q.contains(nxt) && !reach.test_point(nxt)) {
            reach.set_point(nxt);
            changed = true;
          }
        }
      }
    }
  }
  return reach;
}

}  // namespace dre::oracle
