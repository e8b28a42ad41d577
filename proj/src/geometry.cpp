#include "dre/geometry.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace dre {

Point::Point(std::initializer_list<int32_t> xs) {
  DRE_REQUIRE(int(xs.size()) <= kMaxDim, "point dimension exceeds cap");
  dim = int(xs.size());
  int k = 0;
  for (int32_t v : xs) c[size_t(k++)] = v;
}

Point Point::zero(int d) {
  DRE_REQUIRE(d >= 1 && d <= kMaxDim, "dimension out of range");
  Point p;
  p.dim = d;
  return p;
}

Point Point::constant(int d, int32_t v) {
  Point p = zero(d);
  for (int k = 0; k < d; ++k) p[k] = v;
  return p;
}

Point Point::unit(int d, int axis) {
  DRE_REQUIRE(axis >= 0 && axis < d, "axis out of range");
  Point p = zero(d);
  p[axis] = 1;
  return p;
}

void require_same_dim(const Point& a, const Point& b) {
  DRE_REQUIRE(a.dim == b.dim, "dimension mismatch");
}

Point Point::operator+(const Point& o) const {
  require_same_dim(*this, o);
  Point r = *this;
  for (int k = 0; k < dim; ++k) r[k] += o[k];
  return r;
}

Point Point::operator-(const Point& o) const {
  require_same_dim(*this, o);
  Point r = *this;
  for (int k = 0; k < dim; ++k) r[k] -= o[k];
  return r;
}

Point Point::shifted(int axis, int32_t delta) const {
  Point r = *this;
  r[axis] += delta;
  return r;
}

bool Point::operator==(const Point& o) const {
  if (dim != o.dim) return false;
  for (int k = 0; k < dim; ++k)
    if (c[size_t(k)] != o.c[size_t(k)]) return false;
  return true;
}

bool Point::operator<(const Point& o) const {
  require_same_dim(*this, o);
  for (int k = 0; k < dim; ++k)
    if (c[size_t(k)] != o.c[size_t(k)]) return c[size_t(k)] < o.c[size_t(k)];
  return false;
}

bool Point::leq(const Point& o) const {
  require_same_dim(*this, o);
  for (int k = 0; k < dim; ++k)
    if (c[size_t(k)] > o.c[size_t(k)]) return false;
  return true;
}

bool Point::geq(const Point& o) const { return o.leq(*this); }

int64_t Point::l1_dist(const Point& o) const {
  require_same_dim(*this, o);
  int64_t s = 0;
  for (int k = 0; k < dim; ++k) s += std::abs(int64_t(c[size_t(k)]) - o.c[size_t(k)]);
  return s;
}

int32_t Point::linf_dist(const Point& o) const {
  require_same_dim(*this, o);
  int32_t s = 0;
  for (int k = 0; k < dim; ++k)
    s = std::max(s, std::abs(c[size_t(k)] - o.c[size_t(k)]));
  return s;
}

std::string Point::str() const {
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < dim; ++k) os << (k ? "," : "") << c[size_t(k)];
  os << ")";
  return os.str();
}

Box::Box(const Point& a, const Point& b) : lo(a), hi(b) {
  require_same_dim(a, b);
  DRE_REQUIRE(a.dim >= 1, "box needs dimension >= 1");
  DRE_REQUIRE(a.leq(b), "box corners must satisfy lo <= hi");
}

Box Box::centered(const Point& c, int32_t n) {
  DRE_REQUIRE(n >= 0, "box half-width must be >= 0");
  return Box(c - Point::constant(c.dim, n), c + Point::constant(c.dim, n));
}

int64_t Box::size() const {
  int64_t s = 1;
  for (int k = 0; k < dim(); ++k) s *= extent(k);
  return s;
}

bool Box::contains(const Point& x) const {
  if (x.dim != dim()) return false;
  for (int k = 0; k < dim(); ++k)
    if (x[k] < lo[k] || x[k] > hi[k]) return false;
  return true;
}

bool Box::contains_box(const Box& q) const {
  return contains(q.lo) && contains(q.hi);
}

int64_t Box::index_of(const Point& x) const {
  int64_t idx = 0;
  for (int k = 0; k < dim(); ++k) idx = idx * extent(k) + (x[k] - lo[k]);
  return idx;
}

Point Box::site_at(int64_t index) const {
  Point x = lo;
  for (int k = dim() - 1; k >= 0; --k) {
    int32_t e = extent(k);
    x[k] = lo[k] + int32_t(index % e);
    index /= e;
  }
  return x;
}

bool Box::intersects(const Box& other) const {
  require_same_dim(lo, other.lo);
  for (int k = 0; k < dim(); ++k)
    if (std::max(lo[k], other.lo[k]) > std::min(hi[k], other.hi[k])) return false;
  return true;
}

Box Box::intersect(const Box& other) const {
  DRE_REQUIRE(intersects(other), "box intersection is empty");
  Point a = lo, b = hi;
  for (int k = 0; k < dim(); ++k) {
    a[k] = std::max(lo[k], other.lo[k]);
    b[k] = std::min(hi[k], other.hi[k]);
  }
  return Box(a, b);
}

std::string Box::str() const { return "[" + lo.str() + "," + hi.str() + "]"; }

Box shift_box(const Box& q, const Point& v) { return Box(q.lo + v, q.hi + v); }

BoxIndexer::BoxIndexer(const Box& box) : box_(box) {
  const int d = box.dim();
  size_ = box.size();
  int64_t s = 1;
  for (int k = d - 1; k >= 0; --k) {
    strides_[size_t(k)] = s;
    extents_[size_t(k)] = box.extent(k);
    s *= box.extent(k);
  }
  offsets_.resize(size_t(d));
  for (int k = 0; k < d; ++k) {
    offsets_[size_t(k)].resize(size_t(size_));
    const int64_t stride = strides_[size_t(k)];
    const int32_t ext = extents_[size_t(k)];
    for (int64_t i = 0; i < size_; ++i)
      offsets_[size_t(k)][size_t(i)] = int32_t((i / stride) % ext);
  }
}

Point BoxIndexer::site_at(int64_t index) const {
  Point x = box_.lo;
  for (int k = 0; k < dim(); ++k) x[k] += offset(index, k);
  return x;
}

SiteMask::SiteMask(const Box& box)
    : box_(box), nbits_(box.size()), words_(size_t((box.size() + 63) / 64), 0) {}

void SiteMask::clear() { std::fill(words_.begin(), words_.end(), 0); }

void SiteMask::fill() {
  std::fill(words_.begin(), words_.end(), ~0ULL);
  int tail = int(nbits_ & 63);
  if (tail) words_.back() &= (1ULL << tail) - 1;
}

int64_t SiteMask::count() const {
  int64_t n = 0;
  for (uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool SiteMask::operator==(const SiteMask& o) const {
  return box_ == o.box_ && words_ == o.words_;
}

bool SiteMask::is_subset_of(const SiteMask& o) const {
  DRE_REQUIRE(box_ == o.box_, "mask boxes differ");
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

SiteMask& SiteMask::operator|=(const SiteMask& o) {
  DRE_REQUIRE(box_ == o.box_, "mask boxes differ");
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

SiteMask& SiteMask::operator&=(const SiteMask& o) {
  DRE_REQUIRE(box_ == o.box_, "mask boxes differ");
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

SiteMask& SiteMask::subtract(const SiteMask& o) {
  DRE_REQUIRE(box_ == o.box_, "mask boxes differ");
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

std::vector<Point> SiteMask::points() const {
  std::vector<Point> out;
  for (int64_t i = 0; i < nbits_; ++i)
    if (test(i)) out.push_back(box_.site_at(i));
  return out;
}

std::vector<int64_t> SiteMask::indices() const {
  std::vector<int64_t> out;
  for (int64_t i = 0; i < nbits_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

SiteMask mask_from_points(const Box& box, const std::vector<Point>& pts) {
  SiteMask m(box);
  for (const Point& p : pts) {
    DRE_REQUIRE(box.contains(p), "point outside box: " + p.str());
    m.set_point(p);
  }
  return m;
}

SiteMask restrict_mask(const SiteMask& m, const Box& q) {
  DRE_REQUIRE(m.box().contains_box(q), "restriction box not inside mask box");
  SiteMask out(q);
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i)
    if (m.test_point(q.site_at(i))) out.set(i);
  return out;
}

SiteMask up_cone(const Point& z, const Box& q) {
  require_same_dim(z, q.lo);
  SiteMask m(q);
  // Clip the cone to the box; empty intersection gives an empty mask.
  Point a = q.lo;
  bool empty = false;
  for (int k = 0; k < q.dim(); ++k) {
    a[k] = std::max(z[k], q.lo[k]);
    if (a[k] > q.hi[k]) empty = true;
  }
  if (empty) return m;
  Box sub(a, q.hi);
  const int64_t n = sub.size();
  for (int64_t i = 0; i < n; ++i) m.set_point(sub.site_at(i));
  return m;
}

SiteMask down_cone(const Point& z, const Box& q) {
  require_same_dim(z, q.lo);
  SiteMask m(q);
  Point b = q.hi;
  bool empty = false;
  for (int k = 0; k < q.dim(); ++k) {
    b[k] = std::min(z[k], q.hi[k]);
    if (b[k] < q.lo[k]) empty = true;
  }
  if (empty) return m;
  Box sub(q.lo, b);
  const int64_t n = sub.size();
  for (int64_t i = 0; i < n; ++i) m.set_point(sub.site_at(i));
  return m;
}

SiteMask up_set_closure(const SiteMask& a) {
  const Box& q = a.box();
  const int d = q.dim();
  SiteMask s = a;
  int64_t strides[kMaxDim];
  int64_t s_acc = 1;
  for (int k = d - 1; k >= 0; --k) {
    strides[k] = s_acc;
    s_acc *= q.extent(k);
  }
  // Increasing-index sweep: predecessors y - e_k all have smaller index, so a
  // single pass closes the set upward.
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i) {
    if (s.test(i)) continue;
    bool hit = false;
    int64_t rem = i;
    for (int k = 0; k < d && !hit; ++k) {
      int64_t off = (i / strides[k]) % q.extent(k);
      if (off > 0 && s.test(i - strides[k])) hit = true;
      (void)rem;
    }
    if (hit) s.set(i);
  }
  return s;
}

SiteMask up_set_closure(const std::vector<Point>& a, const Box& q) {
  return up_set_closure(mask_from_points(q, a));
}

SiteMask down_set_closure(const SiteMask& a) {
  const Box& q = a.box();
  const int d = q.dim();
  SiteMask s = a;
  int64_t strides[kMaxDim];
  int64_t s_acc = 1;
  for (int k = d - 1; k >= 0; --k) {
    strides[k] = s_acc;
    s_acc *= q.extent(k);
  }
  const int64_t n = q.size();
  for (int64_t i = n - 1; i >= 0; --i) {
    if (s.test(i)) continue;
    bool hit = false;
    for (int k = 0; k < d && !hit; ++k) {
      int64_t off = (i / strides[k]) % q.extent(k);
      if (off + 1 < q.extent(k) && s.test(i + strides[k])) hit = true;
    }
    if (hit) s.set(i);
  }
  return s;
}

bool is_solid_above(const SiteMask& a) {
  const Box& q = a.box();
  const int d = q.dim();
  int64_t strides[kMaxDim];
  int64_t s_acc = 1;
  for (int k = d - 1; k >= 0; --k) {
    strides[k] = s_acc;
    s_acc *= q.extent(k);
  }
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i) {
    if (!a.test(i)) continue;
    for (int k = 0; k < d; ++k) {
      int64_t off = (i / strides[k]) % q.extent(k);
      if (off + 1 < q.extent(k) && !a.test(i + strides[k])) return false;
    }
  }
  return true;
}

RelativeBoundary relative_boundary(const Box& q, const Box& r) {
  DRE_REQUIRE(r.contains_box(q), "window box not contained in ambient box");
  RelativeBoundary out{SiteMask(q), SiteMask(q)};
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i) {
    Point x = q.site_at(i);
    if (on_relative_boundary(x, q, r))
      out.boundary.set(i);
    else
      out.interior.set(i);
  }
  return out;
}

bool on_relative_boundary(const Point& x, const Box& q, const Box& r) {
  if (!q.contains(x)) return false;
  for (int k = 0; k < q.dim(); ++k) {
    // Neighbour below / above x lies in R \ Q?
    if (x[k] - 1 < q.lo[k] && x[k] - 1 >= r.lo[k]) return true;
    if (x[k] + 1 > q.hi[k] && x[k] + 1 <= r.hi[k]) return true;
  }
  return false;
}

SiteMask relative_interior_mask(const Box& q, const Box& r) {
  DRE_REQUIRE(r.contains_box(q), "window box not contained in ambient box");
  SiteMask m(r);
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i) {
    Point x = q.site_at(i);
    if (!on_relative_boundary(x, q, r)) m.set_point(x);
  }
  return m;
}

int32_t smallest_prime_above(int32_t n) {
  auto is_prime = [](int32_t m) {
    if (m < 2) return false;
    for (int32_t f = 2; f * f <= m; ++f)
      if (m % f == 0) return false;
    return true;
  };
  int32_t m = n + 1;
  while (!is_prime(m)) ++m;
  return m;
}

VdLattice::VdLattice(int d) : dim(d) {
  DRE_REQUIRE(d >= 2 && d <= kMaxDim, "VdLattice needs 2 <= d <= 16");
  rho = smallest_prime_above(2 * ((d + 1) / 2));
  for (int k = 0; k < d; ++k) {
    // 1-based coordinate 2i-1 carries +i, coordinate 2i carries -i.
    int i = k / 2 + 1;
    coeff[size_t(k)] = (k % 2 == 0) ? int32_t(i) : int32_t(-i);
  }
}

int32_t VdLattice::h_mod(const Point& x) const {
  DRE_REQUIRE(x.dim == dim, "dimension mismatch");
  int64_t h = 0;
  for (int k = 0; k < dim; ++k) h += int64_t(coeff[size_t(k)]) * x[k];
  int64_t m = h % rho;
  if (m < 0) m += rho;  // representative in [0, rho)
  return int32_t(m);
}

}  // namespace dre
