#include "dre/reachability.hpp"

#include <algorithm>

namespace dre {

ClusterScratch::ClusterScratch(const Box& box) : idx_(box) {
  visited.assign(size_t(box.size()), 0);
  queue.reserve(size_t(box.size()));
  parent.assign(size_t(box.size()), -1);
}

namespace {

// Core BFS. Pushes x, expands arrows that stay in the box, calls visit(idx)
// on every dequeued site; stops early when visit returns true.
template <bool kParents, typename Visit>
void bfs(const ConfigGrid& g, const BoxIndexer& idx, std::vector<uint8_t>& visited,
         std::vector<int64_t>& queue, std::vector<int64_t>& parent, int64_t start, Visit visit) {
  const int d = idx.dim();
  std::fill(visited.begin(), visited.end(), 0);
  queue.clear();
  if constexpr (kParents) std::fill(parent.begin(), parent.end(), int64_t(-1));

  visited[size_t(start)] = 1;
  queue.push_back(start);
  for (size_t head = 0; head < queue.size(); ++head) {
    int64_t cur = queue[head];
    if (visit(cur)) return;
    StepSet steps = g.step_set(cur);
    for (int k = 0; k < d; ++k) {
      if (steps & (1u << k)) {  // +e_k
        if (idx.offset(cur, k) + 1 < idx.extent(k)) {
          int64_t nxt = cur + idx.stride(k);
          if (!visited[size_t(nxt)]) {
            visited[size_t(nxt)] = 1;
            if constexpr (kParents) parent[size_t(nxt)] = cur;
            queue.push_back(nxt);
          }
        }
      }
      if (steps & (1u << (d + k))) {  // -e_k
        if (idx.offset(cur, k) > 0) {
          int64_t nxt = cur - idx.stride(k);
          if (!visited[size_t(nxt)]) {
            visited[size_t(nxt)] = 1;
            if constexpr (kParents) parent[size_t(nxt)] = cur;
            queue.push_back(nxt);
          }
        }
      }
    }
  }
}

// Is the site at `index` in target_-, i.e. <= target componentwise?
bool in_down_set(const BoxIndexer& idx, int64_t index, const Point& target) {
  for (int k = 0; k < idx.dim(); ++k)
    if (idx.coord(index, k) > target[k]) return false;
  return true;
}

}  // namespace

SiteMask Reach::forward_cluster(const ConfigGrid& g, const Point& x) {
  ClusterScratch scratch(g.box);
  return forward_cluster(g, x, scratch);
}

SiteMask Reach::forward_cluster(const ConfigGrid& g, const Point& x, ClusterScratch& scratch) {
  DRE_REQUIRE(g.box.contains(x), "cluster source outside box");
  DRE_REQUIRE(scratch.idx_.box() == g.box, "scratch box mismatch");
  bfs<false>(g, scratch.idx_, scratch.visited, scratch.queue, scratch.parent, g.box.index_of(x),
             [](int64_t) { return false; });
  SiteMask m(g.box);
  for (int64_t i : scratch.queue) m.set(i);
  return m;
}

bool Reach::connects_to_down_set(const ConfigGrid& g, const Point& x, const Point& target,
                                 ClusterScratch& scratch) {
  DRE_REQUIRE(g.box.contains(x), "cluster source outside box");
  bool hit = false;
  bfs<false>(g, scratch.idx_, scratch.visited, scratch.queue, scratch.parent, g.box.index_of(x),
             [&](int64_t cur) {
               if (in_down_set(scratch.idx_, cur, target)) {
                 hit = true;
                 return true;
               }
               return false;
             });
  return hit;
}

Reach::DownSetResult Reach::connects_to_down_set_witness(const ConfigGrid& g, const Point& x,
                                                         const Point& target) {
  DRE_REQUIRE(g.box.contains(x), "cluster source outside box");
  ClusterScratch scratch(g.box);
  int64_t hit = -1;
  bfs<true>(g, scratch.idx_, scratch.visited, scratch.queue, scratch.parent, g.box.index_of(x),
            [&](int64_t cur) {
              if (in_down_set(scratch.idx_, cur, target)) {
                hit = cur;
                return true;
              }
              return false;
            });
  DownSetResult out;
  out.connected = hit >= 0;
  if (hit >= 0) {
    std::vector<Point> rev;
    for (int64_t cur = hit; cur >= 0; cur = scratch.parent[size_t(cur)])
      rev.push_back(g.box.site_at(cur));
    out.witness.points.assign(rev.rbegin(), rev.rend());
  }
  return out;
}

SiteMask Reach::reaches_down_set(const ConfigGrid& g, const Point& target,
                                 ClusterScratch& scratch) {
  const BoxIndexer& idx = scratch.idx_;
  const int d = idx.dim();
  std::fill(scratch.visited.begin(), scratch.visited.end(), 0);
  scratch.queue.clear();

  // Seed with target_- inside the box.
  Point b = g.box.hi;
  bool empty = false;
  for (int k = 0; k < d; ++k) {
    b[k] = std::min(target[k], g.box.hi[k]);
    if (b[k] < g.box.lo[k]) empty = true;
  }
  SiteMask out(g.box);
  if (empty) return out;
  Box seed(g.box.lo, b);
  const int64_t ns = seed.size();
  for (int64_t i = 0; i < ns; ++i) {
    int64_t j = g.box.index_of(seed.site_at(i));
    scratch.visited[size_t(j)] = 1;
    scratch.queue.push_back(j);
  }

  // Walk arrows backwards: a -> b exists iff the step b - a is in a's set.
  for (size_t head = 0; head < scratch.queue.size(); ++head) {
    int64_t cur = scratch.queue[head];
    for (int k = 0; k < d; ++k) {
      // Predecessor below: arrow +e_k, present in both step sets of every model
      // that pivotality works on, but check anyway.
      if (idx.offset(cur, k) > 0) {
        int64_t pre = cur - idx.stride(k);
        if (!scratch.visited[size_t(pre)] && (g.step_set(pre) & (1u << k))) {
          scratch.visited[size_t(pre)] = 1;
          scratch.queue.push_back(pre);
        }
      }
      // Predecessor above: arrow -e_k.
      if (idx.offset(cur, k) + 1 < idx.extent(k)) {
        int64_t pre = cur + idx.stride(k);
        if (!scratch.visited[size_t(pre)] && (g.step_set(pre) & (1u << (d + k)))) {
          scratch.visited[size_t(pre)] = 1;
          scratch.queue.push_back(pre);
        }
      }
    }
  }
  for (int64_t i : scratch.queue) out.set(i);
  return out;
}

std::vector<LValueRecord> l_values(const ConfigGrid& g, const Point& source, int axis) {
  DRE_REQUIRE(g.box.contains(source), "source outside box");
  DRE_REQUIRE(axis >= 0 && axis < g.dim(), "axis out of range");
  SiteMask cluster = Reach::forward_cluster(g, source);

  // One record per line: bases carry the source's coordinate along `axis`.
  Point lo = g.box.lo, hi = g.box.hi;
  lo[axis] = hi[axis] = source[axis];
  Box bases(lo, hi);
  std::vector<LValueRecord> out;
  const int64_t n = bases.size();
  out.reserve(size_t(n));
  for (int64_t i = 0; i < n; ++i) {
    LValueRecord rec;
    rec.base = bases.site_at(i);
    rec.axis = axis;
    for (int32_t x = g.box.lo[axis]; x <= g.box.hi[axis]; ++x) {
      Point pt = rec.base;
      pt[axis] = x;
      if (cluster.test_point(pt)) {
        rec.found = true;
        rec.value = x - rec.base[axis];
        break;
      }
    }
    out.push_back(rec);
  }
  return out;
}

namespace {

bool step_available(const EnvironmentField& env, const Point& at, int axis, bool minus) {
  SiteConfig cfg = env.config_unbounded(at);
  StepSet steps = (cfg == SiteConfig::E) ? env.spec().e_steps() : env.spec().f_steps();
  int bit = minus ? env.spec().dim + axis : axis;
  return (steps >> bit) & 1u;
}

}  // namespace

LatticePath wn_se_path(const EnvironmentField& env, const Point& start, int axis_i, int axis_j,
                       PathVariant variant, const std::function<bool(const Point&)>& stop,
                       int64_t budget) {
  DRE_REQUIRE(axis_i != axis_j, "plane needs two distinct axes");
  DRE_REQUIRE(axis_i >= 0 && axis_i < env.spec().dim && axis_j >= 0 && axis_j < env.spec().dim,
              "axis out of range");
  const int dec_axis = (variant == PathVariant::wn) ? axis_i : axis_j;
  const int inc_axis = (variant == PathVariant::wn) ? axis_j : axis_i;

  LatticePath path;
  Point cur = start;
  path.points.push_back(cur);
  while (!stop(cur)) {
    if (int64_t(path.points.size()) > budget) {
      path.complete = false;
      return path;
    }
    if (step_available(env, cur, dec_axis, true))
      cur = cur.shifted(dec_axis, -1);
    else
      cur = cur.shifted(inc_axis, +1);
    path.points.push_back(cur);
  }
  return path;
}

std::optional<LineHit> staged_line_hit(const EnvironmentField& env, const Point& u, const Point& v,
                                       int axis_j, int64_t budget) {
  require_same_dim(u, v);
  DRE_REQUIRE(axis_j >= 0 && axis_j < u.dim, "axis out of range");
  const int d = u.dim;

  LineHit out;
  out.path.points.push_back(u);
  Point cur = u;
  int64_t used = 0;
  for (int s = 0; s < d; ++s) {
    if (s == axis_j) continue;
    // Match coordinate s: walk in the (s, axis_j) plane; a wn walk lowers
    // coordinate s, an se walk raises it.
    PathVariant variant = (v[s] < cur[s]) ? PathVariant::wn : PathVariant::se;
    auto stop = [&](const Point& z) { return z[s] == v[s]; };
    LatticePath leg = wn_se_path(env, cur, s, axis_j, variant, stop, budget - used);
    used += leg.length();
    if (!leg.complete) {
      out.path.points.insert(out.path.points.end(), leg.points.begin() + 1, leg.points.end());
      out.path.complete = false;
      return std::nullopt;
    }
    out.path.points.insert(out.path.points.end(), leg.points.begin() + 1, leg.points.end());
    cur = out.path.points.back();
  }
  out.k = cur[axis_j] - v[axis_j];
  return out;
}

bool path_consistent(const EnvironmentField& env, const LatticePath& path) {
  for (size_t i = 0; i + 1 < path.points.size(); ++i) {
    const Point& a = path.points[i];
    const Point& b = path.points[i + 1];
    int axis = -1;
    int32_t delta = 0;
    for (int k = 0; k < a.dim; ++k) {
      if (a[k] != b[k]) {
        if (axis >= 0) return false;  // more than one coordinate moved
        axis = k;
        delta = b[k] - a[k];
      }
    }
    if (axis < 0 || (delta != 1 && delta != -1)) return false;
    if (!step_available(env, a, axis, delta < 0)) return false;
  }
  return true;
}

}  // namespace dre
