#pragma once

#include <optional>
#include <vector>

#include "orbitcat/derivedcat.hpp"
#include "orbitcat/meshpath.hpp"

namespace orbitcat {

// Windowed presentation of the regular Nakajima category attached to a
// configuration: the framed repetition quiver keeps the frozen companion
// (i',n) iff (i,n+1) is a member, and mesh relators are imposed at the
// non-frozen vertices only. The singular category is the full subcategory
// on `singular`.
struct NakajimaPresentation {
  PresentedCategory regular;
  std::vector<ZVertex> singular;  // the kept frozen vertices, canonical order
};

NakajimaPresentation nakajima_build(const Quiver& q, const Configuration& c,
                                    int pmin, int pmax);

struct AdmissibilityWitness {
  ZVertex w, x;        // test object, anchor vertex
  bool dual = false;   // false: Hom(w,x) -> (+)_{x->y} Hom(w,y) not injective
                       // true:  Hom(x,w) -> (+)_{y->x} Hom(y,w) not injective
  int dim = 0;         // dim of the domain hom space
  int rank = 0;        // rank of the stacked arrow map, < dim
};

struct AdmissibilityResult {
  bool admissible = true;
  std::optional<AdmissibilityWitness> witness;  // first failure, if any
  int pairs_checked = 0;
};

// Certifies, on the level band [tmin, tmax], that for every non-frozen anchor
// x and every test object w the maps induced by the arrows out of (resp.
// into) x are injective. Throws std::invalid_argument unless
// pmin < tmin and tmax < pmax, so that every arrow incident to the band stays
// inside the presentation window.
AdmissibilityResult is_admissible(const NakajimaPresentation& np, int tmin, int tmax);

// Combinatorial action of F = suspension after inverse translation on the
// repetition quiver, read off a validated chart: F(i,p) = (nu[i], p + s[i]).
struct FRule {
  std::vector<int> nu;  // permutation of base quiver vertex indices
  std::vector<int> s;   // level offset per base vertex
};

FRule f_rule(const DerivedCategory& dc);

// F(C) = C, decided on one period of residues via the charted F action.
bool is_f_invariant(const Configuration& c, const Quiver& q);

}  // namespace orbitcat
