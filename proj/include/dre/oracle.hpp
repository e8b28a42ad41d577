#pragma once

#include "dre/environment.hpp"
#include "dre/geometry.hpp"

// Naive reference implementations, deliberately independent of the optimized
// code paths they are used to verify. Kept in the library so the `validate`
// command and the test suites share them.

namespace dre::oracle {

// Union of up cones, clipped to the box.
SiteMask up_set_closure(const SiteMask& a);

// Lower boundary by per-line ascending scans.
SiteMask lower_boundary(const SiteMask& solid_above);

// Reachability as the reflexive-transitive closure of the arrow relation,
// by repeated relaxation to a fixpoint.
SiteMask forward_cluster(const ConfigGrid& g, const Point& x);

}  // namespace dre::oracle
