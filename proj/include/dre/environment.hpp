#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dre/geometry.hpp"

namespace dre {

// Step sets are subsets of E(d) = {+e_i} u {-e_i}, packed as bit k = +e_k,
// bit d+k = -e_k.
using StepSet = uint32_t;

StepSet steps_plus(int d);   // E_+
StepSet steps_minus(int d);  // E_-
StepSet steps_all(int d);    // E

enum class ModelKind : uint8_t { orthant = 0, half_orthant = 1, disturbed = 2, slab = 3 };

const char* model_name(ModelKind k);
std::optional<ModelKind> model_from_name(const std::string& s);

// Which of the two step sets a site carries.
enum class SiteConfig : uint8_t { E = 1, F = 0 };

// Model parameters. `dim` is the lattice dimension sites live in; for the
// slab model that is base_dim + 1 and the last coordinate ranges over {1,2}.
struct ModelSpec {
  ModelKind kind = ModelKind::half_orthant;
  int dim = 2;
  double p = 0.5;
  double q = 0.5;  // disturbed only: threshold at V_d sites

  static ModelSpec orthant(int d, double p);
  static ModelSpec half_orthant(int d, double p);
  static ModelSpec disturbed(int d, double p, double q);
  static ModelSpec slab(int base_d, double p);

  int base_dim() const { return kind == ModelKind::slab ? dim - 1 : dim; }
  StepSet e_steps() const;
  StepSet f_steps() const;
  bool operator==(const ModelSpec& o) const;
};

// 53-bit site uniform, a pure function of (seed, coordinates).
uint64_t site_hash53(uint64_t seed, const Point& x);

// Integer threshold for "U_x <= p" comparisons: site is E iff hash53 < threshold.
// Exact at p = 0 (never) and p = 1 (always), monotone in p.
uint64_t acceptance_threshold(double p);

// An explicit {E_+, E}-valued configuration on a box plus the step semantics,
// the object pivotality and modification work on. `omega` holds the E-sites
// (Omega_1); the complement carries the F step set.
struct ConfigGrid {
  Box box;
  SiteMask omega;
  StepSet e_steps = 0;
  StepSet f_steps = 0;

  ConfigGrid() = default;
  ConfigGrid(const Box& b, StepSet e, StepSet f)
      : box(b), omega(b), e_steps(e), f_steps(f) {}

  int dim() const { return box.dim(); }
  bool is_e(int64_t index) const { return omega.test(index); }
  StepSet step_set(int64_t index) const { return omega.test(index) ? e_steps : f_steps; }
};

// The coupled random field: derives per-site configurations from (seed, x)
// with optional per-site overrides. Immutable; queries are pure.
class EnvironmentField {
public:
  EnvironmentField(const ModelSpec& spec, const Box& box, uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  const Box& box() const { return box_; }
  uint64_t seed() const { return seed_; }

  // Configuration at x; rejects sites outside the declared box.
  SiteConfig site_config(const Point& x) const;

  // Configuration at any lattice site; used by unbounded path constructions,
  // which follow the coupling over all of Z^d.
  SiteConfig config_unbounded(const Point& x) const;

  double uniform_at(const Point& x) const;

  // Bitmask of Omega_1 over Q (Q inside the declared box).
  SiteMask omega_mask(const Box& q) const;

  // Explicit configuration grid over Q with the model's step sets.
  ConfigGrid config_grid(const Box& q) const;

  // Derived environment equal to this one except at the override sites.
  EnvironmentField force_config(const std::map<Point, SiteConfig>& overrides) const;

  bool has_overrides() const { return overrides_ && !overrides_->empty(); }

private:
  ModelSpec spec_;
  Box box_;
  uint64_t seed_;
  uint64_t thresh_p_;
  uint64_t thresh_q_;
  std::optional<VdLattice> vd_;  // disturbed model only
  std::shared_ptr<const std::map<Point, SiteConfig>> overrides_;

  bool raw_is_e(const Point& x) const;
};

// ---- slab helpers ---------------------------------------------------------

// base x {1,2} as a (d+1)-dimensional box; the layer is the last coordinate.
Box slab_box(const Box& base);
Point slab_site(const Point& base_site, int32_t layer);
Point slab_project(const Point& slab_site_);  // drops the layer coordinate

// ---- derived slab environments (eta / zeta) -------------------------------

// From a slab field, the d-dimensional environments on layer 1:
//   x in Omega_1(eta)  iff  (x,1) in Omega_1 and ((x,1)+W) meets Omega_1,
//     where W = e_{d+1} + ({o} u E_-(d)),
//   zeta uses eta's rule at V_d sites and the raw layer-1 rule elsewhere.
// Always Omega_1(eta) is a subset of Omega_1(zeta). Both grids use
// half-orthant step semantics in dimension d.
struct EtaZetaFields {
  ConfigGrid eta;
  ConfigGrid zeta;
};
EtaZetaFields derive_eta_zeta(const EnvironmentField& slab_env, const Box& base_box);

// ---- snapshot file --------------------------------------------------------

// Binary environment snapshot: little-endian header
//   magic "DRE1", u32 d, i32 lo[d], i32 hi[d], u64 seed, u8 model, f64 p, f64 q
// followed by the Omega_1 bits in row-major site order, packed LSB-first.
void write_snapshot(const EnvironmentField& env, const std::string& path);

struct Snapshot {
  ModelSpec spec;
  Box box;
  uint64_t seed = 0;
  SiteMask omega;
};
Snapshot read_snapshot(const std::string& path);

}  // namespace dre
