#include "dre/environment.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace dre {

StepSet steps_plus(int d) { return (1u << d) - 1u; }
StepSet steps_minus(int d) { return ((1u << d) - 1u) << d; }
StepSet steps_all(int d) { return steps_plus(d) | steps_minus(d); }

const char* model_name(ModelKind k) {
  switch (k) {
    case ModelKind::orthant: return "orthant";
    case ModelKind::half_orthant: return "half";
    case ModelKind::disturbed: return "disturbed";
    case ModelKind::slab: return "slab";
  }
  return "?";
}

std::optional<ModelKind> model_from_name(const std::string& s) {
  if (s == "orthant") return ModelKind::orthant;
  if (s == "half" || s == "half_orthant" || s == "half-orthant") return ModelKind::half_orthant;
  if (s == "disturbed") return ModelKind::disturbed;
  if (s == "slab") return ModelKind::slab;
  return std::nullopt;
}

static void check_prob(double p) {
  DRE_REQUIRE(p >= 0.0 && p <= 1.0, "probability outside [0,1]");
}

ModelSpec ModelSpec::orthant(int d, double p) {
  check_prob(p);
  return ModelSpec{ModelKind::orthant, d, p, p};
}
ModelSpec ModelSpec::half_orthant(int d, double p) {
  check_prob(p);
  return ModelSpec{ModelKind::half_orthant, d, p, p};
}
ModelSpec ModelSpec::disturbed(int d, double p, double q) {
  check_prob(p);
  check_prob(q);
  return ModelSpec{ModelKind::disturbed, d, p, q};
}
ModelSpec ModelSpec::slab(int base_d, double p) {
  check_prob(p);
  return ModelSpec{ModelKind::slab, base_d + 1, p, p};
}

StepSet ModelSpec::e_steps() const { return steps_plus(dim); }

StepSet ModelSpec::f_steps() const {
  switch (kind) {
    case ModelKind::orthant: return steps_minus(dim);
    case ModelKind::half_orthant:
    case ModelKind::disturbed:
    case ModelKind::slab: return steps_all(dim);
  }
  return 0;
}

bool ModelSpec::operator==(const ModelSpec& o) const {
  return kind == o.kind && dim == o.dim && p == o.p && q == o.q;
}

uint64_t site_hash53(uint64_t seed, const Point& x) {
  uint64_t h = splitmix64(seed ^ 0xdf900294d8f554a5ULL);
  for (int k = 0; k < x.dim; ++k)
    h = splitmix64(h ^ (uint64_t(uint32_t(x[k])) + 0x9e3779b97f4a7c15ULL * uint64_t(k + 1)));
  return h >> 11;
}

uint64_t acceptance_threshold(double p) {
  check_prob(p);
  long double t = std::llroundl((long double)p * 9007199254740992.0L);  // p * 2^53
  if (t < 0) t = 0;
  if (t > 9007199254740992.0L) t = 9007199254740992.0L;
  return uint64_t(t);
}

EnvironmentField::EnvironmentField(const ModelSpec& spec, const Box& box, uint64_t seed)
    : spec_(spec), box_(box), seed_(seed) {
  DRE_REQUIRE(box.dim() == spec.dim, "box dimension does not match model");
  DRE_REQUIRE(spec.dim >= 2 && spec.dim <= kMaxDim, "model dimension out of range");
  if (spec.kind == ModelKind::slab)
    DRE_REQUIRE(box.lo[spec.dim - 1] >= 1 && box.hi[spec.dim - 1] <= 2,
                "slab box layer coordinate must stay in {1,2}");
  thresh_p_ = acceptance_threshold(spec.p);
  thresh_q_ = acceptance_threshold(spec.q);
  if (spec.kind == ModelKind::disturbed) vd_.emplace(spec.dim);
}

bool EnvironmentField::raw_is_e(const Point& x) const {
  uint64_t h = site_hash53(seed_, x);
  uint64_t t = thresh_p_;
  if (spec_.kind == ModelKind::disturbed && vd_->contains(x)) t = thresh_q_;
  return h < t;
}

SiteConfig EnvironmentField::config_unbounded(const Point& x) const {
  DRE_REQUIRE(x.dim == spec_.dim, "dimension mismatch");
  if (overrides_) {
    auto it = overrides_->find(x);
    if (it != overrides_->end()) return it->second;
  }
  return raw_is_e(x) ? SiteConfig::E : SiteConfig::F;
}

SiteConfig EnvironmentField::site_config(const Point& x) const {
  DRE_REQUIRE(box_.contains(x), "site outside environment box: " + x.str());
  return config_unbounded(x);
}

double EnvironmentField::uniform_at(const Point& x) const {
  // (hash + 1) / 2^53, in (0, 1]; "U <= p" matches hash < threshold(p).
  return double(site_hash53(seed_, x) + 1) * 0x1.0p-53;
}

SiteMask EnvironmentField::omega_mask(const Box& q) const {
  DRE_REQUIRE(box_.contains_box(q), "query box not inside environment box");
  SiteMask m(q);
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i)
    if (config_unbounded(q.site_at(i)) == SiteConfig::E) m.set(i);
  return m;
}

ConfigGrid EnvironmentField::config_grid(const Box& q) const {
  ConfigGrid g(q, spec_.e_steps(), spec_.f_steps());
  g.omega = omega_mask(q);
  return g;
}

EnvironmentField EnvironmentField::force_config(const std::map<Point, SiteConfig>& ov) const {
  for (const auto& [x, cfg] : ov) {
    (void)cfg;
    DRE_REQUIRE(box_.contains(x), "override site outside box: " + x.str());
  }
  EnvironmentField out = *this;
  auto merged = std::make_shared<std::map<Point, SiteConfig>>();
  if (overrides_) *merged = *overrides_;
  for (const auto& kv : ov) (*merged)[kv.first] = kv.second;
  out.overrides_ = std::move(merged);
  return out;
}

Box slab_box(const Box& base) {
  const int d = base.dim();
  DRE_REQUIRE(d + 1 <= kMaxDim, "slab would exceed dimension cap");
  Point lo = Point::zero(d + 1), hi = Point::zero(d + 1);
  for (int k = 0; k < d; ++k) {
    lo[k] = base.lo[k];
    hi[k] = base.hi[k];
  }
  lo[d] = 1;
  hi[d] = 2;
  return Box(lo, hi);
}

Point slab_site(const Point& base_site, int32_t layer) {
  DRE_REQUIRE(layer == 1 || layer == 2, "slab layer must be 1 or 2");
  Point x = Point::zero(base_site.dim + 1);
  for (int k = 0; k < base_site.dim; ++k) x[k] = base_site[k];
  x[base_site.dim] = layer;
  return x;
}

Point slab_project(const Point& s) {
  Point x = Point::zero(s.dim - 1);
  for (int k = 0; k < s.dim - 1; ++k) x[k] = s[k];
  return x;
}

EtaZetaFields derive_eta_zeta(const EnvironmentField& slab_env, const Box& base_box) {
  DRE_REQUIRE(slab_env.spec().kind == ModelKind::slab, "eta/zeta need a slab environment");
  const int d = slab_env.spec().base_dim();
  DRE_REQUIRE(base_box.dim() == d, "base box dimension mismatch");
  // The W-neighbourhood looks one step in every -e_j direction on layer 2.
  Box needed = slab_box(Box(base_box.lo - Point::constant(d, 1), base_box.hi));
  DRE_REQUIRE(slab_env.box().contains_box(needed),
              "slab box too small for W lookups from the base box");

  VdLattice vd(d);
  EtaZetaFields out{ConfigGrid(base_box, steps_plus(d), steps_all(d)),
                    ConfigGrid(base_box, steps_plus(d), steps_all(d))};
  const int64_t n = base_box.size();
  for (int64_t i = 0; i < n; ++i) {
    Point x = base_box.site_at(i);
    bool raw = slab_env.site_config(slab_site(x, 1)) == SiteConfig::E;
    bool w_hit = slab_env.site_config(slab_site(x, 2)) == SiteConfig::E;
    for (int j = 0; j < d && !w_hit; ++j)
      w_hit = slab_env.site_config(slab_site(x.shifted(j, -1), 2)) == SiteConfig::E;
    bool eta = raw && w_hit;
    bool zeta = vd.contains(x) ? eta : raw;
    if (eta) out.eta.omega.set(i);
    if (zeta) out.zeta.omega.set(i);
  }
  return out;
}

// ---- snapshot IO ------------------------------------------------------------

namespace {

template <typename T>
void put_le(std::string& buf, T v) {
  for (size_t b = 0; b < sizeof(T); ++b) buf.push_back(char((uint64_t(v) >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(const std::string& buf, size_t& pos) {
  DRE_REQUIRE(pos + sizeof(T) <= buf.size(), "snapshot file truncated");
  uint64_t v = 0;
  for (size_t b = 0; b < sizeof(T); ++b) v |= uint64_t(uint8_t(buf[pos + b])) << (8 * b);
  pos += sizeof(T);
  return T(v);
}

uint64_t double_bits(double x) {
  uint64_t b;
  std::memcpy(&b, &x, 8);
  return b;
}

double bits_double(uint64_t b) {
  double x;
  std::memcpy(&x, &b, 8);
  return x;
}

}  // namespace

void write_snapshot(const EnvironmentField& env, const std::string& path) {
  const Box& box = env.box();
  const int d = box.dim();
  std::string buf;
  buf.append("DRE1");
  put_le<uint32_t>(buf, uint32_t(d));
  for (int k = 0; k < d; ++k) put_le<int32_t>(buf, box.lo[k]);
  for (int k = 0; k < d; ++k) put_le<int32_t>(buf, box.hi[k]);
  put_le<uint64_t>(buf, env.seed());
  put_le<uint8_t>(buf, uint8_t(env.spec().kind));
  put_le<uint64_t>(buf, double_bits(env.spec().p));
  put_le<uint64_t>(buf, double_bits(env.spec().q));

  SiteMask omega = env.omega_mask(box);
  const int64_t n = box.size();
  uint8_t acc = 0;
  int fill = 0;
  for (int64_t i = 0; i < n; ++i) {
    if (omega.test(i)) acc |= uint8_t(1u << fill);
    if (++fill == 8) {
      buf.push_back(char(acc));
      acc = 0;
      fill = 0;
    }
  }
  if (fill) buf.push_back(char(acc));

  std::ofstream f(path, std::ios::binary);
  DRE_REQUIRE(f.good(), "cannot open snapshot file for writing: " + path);
  f.write(buf.data(), std::streamsize(buf.size()));
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  DRE_REQUIRE(f.good(), "cannot open snapshot file: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  DRE_REQUIRE(buf.size() >= 4 && buf.compare(0, 4, "DRE1") == 0, "bad snapshot magic");
  size_t pos = 4;
  uint32_t d = get_le<uint32_t>(buf, pos);
  DRE_REQUIRE(d >= 2 && d <= uint32_t(kMaxDim), "bad snapshot dimension");
  Point lo = Point::zero(int(d)), hi = Point::zero(int(d));
  for (uint32_t k = 0; k < d; ++k) lo[int(k)] = get_le<int32_t>(buf, pos);
  for (uint32_t k = 0; k < d; ++k) hi[int(k)] = get_le<int32_t>(buf, pos);
  uint64_t seed = get_le<uint64_t>(buf, pos);
  uint8_t kind = get_le<uint8_t>(buf, pos);
  DRE_REQUIRE(kind <= 3, "bad snapshot model");
  double p = bits_double(get_le<uint64_t>(buf, pos));
  double q = bits_double(get_le<uint64_t>(buf, pos));

  Snapshot snap;
  snap.spec = ModelSpec{ModelKind(kind), int(d), p, q};
  snap.box = Box(lo, hi);
  snap.seed = seed;
  snap.omega = SiteMask(snap.box);
  const int64_t n = snap.box.size();
  DRE_REQUIRE(buf.size() - pos >= size_t((n + 7) / 8), "snapshot payload truncated");
  for (int64_t i = 0; i < n; ++i) {
    uint8_t byte = uint8_t(buf[pos + size_t(i >> 3)]);
    if ((byte >> (i & 7)) & 1) snap.omega.set(i);
  }
  return snap;
}

}  // namespace dre
