#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dre/util.hpp"

namespace dre {

// Coordinates are 32-bit; dimensions above this cap are rejected everywhere.
inline constexpr int kMaxDim = 16;

// A site of Z^d. Fixed-capacity storage so points are cheap to copy.
struct Point {
  int dim = 0;
  std::array<int32_t, kMaxDim> c{};

  Point() = default;
  Point(std::initializer_list<int32_t> xs);
  static Point zero(int d);
  static Point constant(int d, int32_t v);
  static Point unit(int d, int axis);  // e_axis

  int32_t operator[](int k) const { return c[size_t(k)]; }
  int32_t& operator[](int k) { return c[size_t(k)]; }

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point shifted(int axis, int32_t delta) const;

  bool operator==(const Point& o) const;
  bool operator!=(const Point& o) const { return !(*this == o); }
  // Lexicographic order (coordinate 0 most significant).
  bool operator<(const Point& o) const;

  // Componentwise comparisons: o in this_+ / this_-.
  bool leq(const Point& o) const;  // this <= o componentwise
  bool geq(const Point& o) const;  // this >= o componentwise

  int64_t l1_dist(const Point& o) const;
  int32_t linf_dist(const Point& o) const;

  std::string str() const;
};

void require_same_dim(const Point& a, const Point& b);

// Axis-aligned box [lo, hi] with lo <= hi componentwise; always non-empty.
// Sites are addressed by a row-major linear index (coordinate 0 slowest,
// coordinate d-1 fastest), which is also lexicographic order.
struct Box {
  Point lo, hi;

  Box() = default;
  Box(const Point& a, const Point& b);
  // Q_n centred at c: [c - n*1, c + n*1].
  static Box centered(const Point& c, int32_t n);

  int dim() const { return lo.dim; }
  int32_t extent(int k) const { return hi[k] - lo[k] + 1; }
  int64_t size() const;
  bool contains(const Point& x) const;
  bool contains_box(const Box& q) const;
  bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }

  int64_t index_of(const Point& x) const;   // precondition: contains(x)
  Point site_at(int64_t index) const;

  // (q + this) clipped to outer; empty result throws.
  Box intersect(const Box& other) const;
  bool intersects(const Box& other) const;

  std::string str() const;
};

// Shifted copy q + v.
Box shift_box(const Box& q, const Point& v);

// Precomputed indexing helpers for one box: per-axis strides and per-site
// coordinate offsets, so hot loops avoid division.
class BoxIndexer {
public:
  explicit BoxIndexer(const Box& box);

  const Box& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int64_t size() const { return size_; }
  int64_t stride(int k) const { return strides_[size_t(k)]; }
  int32_t extent(int k) const { return extents_[size_t(k)]; }
  // Offset of site `index` along axis k, i.e. x_k - lo_k.
  int32_t offset(int64_t index, int k) const { return offsets_[size_t(k)][size_t(index)]; }
  int32_t coord(int64_t index, int k) const { return box_.lo[k] + offset(index, k); }
  Point site_at(int64_t index) const;

private:
  Box box_;
  int64_t size_ = 0;
  std::array<int64_t, kMaxDim> strides_{};
  std::array<int32_t, kMaxDim> extents_{};
  std::vector<std::vector<int32_t>> offsets_;
};

// One membership bit per site of a box. Used both for up-sets (Q-solid-above
// sets such as clusters and terrace up-sets) and for plain site indicators
// (e.g. Omega_1 masks).
class SiteMask {
public:
  SiteMask() = default;
  explicit SiteMask(const Box& box);

  const Box& box() const { return box_; }
  int64_t size() const { return nbits_; }

  bool test(int64_t index) const {
    return (words_[size_t(index >> 6)] >> (index & 63)) & 1u;
  }
  void set(int64_t index) { words_[size_t(index >> 6)] |= (1ULL << (index & 63)); }
  void reset(int64_t index) { words_[size_t(index >> 6)] &= ~(1ULL << (index & 63)); }
  void assign(int64_t index, bool v) { v ? set(index) : reset(index); }

  bool test_point(const Point& x) const { return test(box_.index_of(x)); }
  void set_point(const Point& x) { set(box_.index_of(x)); }

  // x in box and set; safe for out-of-box points.
  bool contains(const Point& x) const { return box_.contains(x) && test_point(x); }

  void clear();
  void fill();
  int64_t count() const;
  bool none() const { return count() == 0; }
  bool all() const { return count() == nbits_; }

  bool operator==(const SiteMask& o) const;
  bool is_subset_of(const SiteMask& o) const;

  SiteMask& operator|=(const SiteMask& o);
  SiteMask& operator&=(const SiteMask& o);
  SiteMask& subtract(const SiteMask& o);  // this &= ~o

  std::vector<Point> points() const;
  std::vector<int64_t> indices() const;

  const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

private:
  Box box_;
  int64_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

SiteMask mask_from_points(const Box& box, const std::vector<Point>& pts);

// m restricted to a sub-box of its own box.
SiteMask restrict_mask(const SiteMask& m, const Box& q);

// ---- cones and closures ------------------------------------------------

// {y in Q : y >= z componentwise}; empty if the cone misses Q.
SiteMask up_cone(const Point& z, const Box& q);
// {y in Q : y <= z componentwise}.
SiteMask down_cone(const Point& z, const Box& q);

// A_+ \cap Q for A given as points inside Q. Single increasing-index sweep;
// equivalent to the union of cones (checked against the naive oracle).
SiteMask up_set_closure(const std::vector<Point>& a, const Box& q);
SiteMask up_set_closure(const SiteMask& a);
SiteMask down_set_closure(const SiteMask& a);

bool is_solid_above(const SiteMask& a);

// ---- relative boundary --------------------------------------------------

// Sites of Q adjacent to R \ Q, and the complementary interior Q^{R:o}.
// Both masks are indexed over Q.
struct RelativeBoundary {
  SiteMask boundary;
  SiteMask interior;
};
RelativeBoundary relative_boundary(const Box& q, const Box& r);

// Membership tests that avoid materializing the masks.
bool on_relative_boundary(const Point& x, const Box& q, const Box& r);
inline bool in_relative_interior(const Point& x, const Box& q, const Box& r) {
  return q.contains(x) && !on_relative_boundary(x, q, r);
}

// Q^{R:o} as a mask indexed over the ambient box R.
SiteMask relative_interior_mask(const Box& q, const Box& r);

// ---- enhancement sub-lattice ---------------------------------------------

// Sparse sub-lattice V_d = {x : h(x) = 0 mod rho_d} where h weights coordinate
// 2i-1 by +i and coordinate 2i by -i (1-based), and rho_d is the smallest
// prime greater than 2*ceil(d/2). Any rho_d consecutive sites on an axis line
// contain a member.
struct VdLattice {
  int dim = 0;
  int32_t rho = 0;
  std::array<int32_t, kMaxDim> coeff{};

  explicit VdLattice(int d);

  // h(x) reduced to [0, rho).
  int32_t h_mod(const Point& x) const;
  bool contains(const Point& x) const { return h_mod(x) == 0; }
};

int32_t smallest_prime_above(int32_t n);

}  // namespace dre
