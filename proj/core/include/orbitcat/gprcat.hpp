#pragma once

#include <memory>
#include <string>
#include <vector>

#include "orbitcat/nakajima.hpp"

namespace orbitcat {

// The singular category on the kept frozen vertices: object list, hom bases
// and composition, precomputed from the regular presentation. Morphisms
// between distinct frozen vertices strictly increase the level, so the
// radical is graded and nilpotent on any window.
class SingularCategory {
 public:
  explicit SingularCategory(std::shared_ptr<const NakajimaPresentation> np);

  const NakajimaPresentation& presentation() const { return *np_; }
  const PresentedCategory& regular() const { return np_->regular; }

  int num_objects() const { return int(objects_.size()); }
  const ZVertex& object(int f) const { return objects_[f]; }
  int object_index(const ZVertex& v) const;  // -1 when absent

  int hom_dim(int f, int g) const { return int(basis_[f][g].size()); }
  const HomElt& basis_morphism(int f, int g, int k) const { return basis_[f][g][k]; }
  // coordinates of (k2: g->h) after (k1: f->g) in the basis of Hom(f,h)
  std::vector<Rat> compose_coords(int f, int g, int h, int k1, int k2) const;
  // basis positions of Hom(f,g) that complete the span of the two-step
  // composites through intermediate objects; since the category is directed,
  // every morphism f -> g is a combination of composites of these. Empty on
  // the diagonal.
  const std::vector<int>& generators(int f, int g) const { return gens_[f][g]; }

 private:
  std::shared_ptr<const NakajimaPresentation> np_;
  std::vector<ZVertex> objects_;
  std::vector<std::vector<std::vector<HomElt>>> basis_;
  std::vector<std::vector<std::vector<int>>> gens_;
};

// Right module over the singular category, stored on the window: a value
// dimension per object and, contravariantly, a matrix value(g) -> value(f)
// per basis morphism f -> g.
struct FinSuppModule {
  std::shared_ptr<const SingularCategory> cat;
  std::vector<int> values;
  std::vector<std::vector<std::vector<QMat>>> action;  // [f][g][k]

  int total_dim() const;
  std::vector<int> support() const;  // objects with nonzero value
  bool is_zero() const { return total_dim() == 0; }
};

FinSuppModule zero_module(std::shared_ptr<const SingularCategory> cat);
FinSuppModule representable_module(std::shared_ptr<const SingularCategory> cat, int f);
FinSuppModule simple_module(std::shared_ptr<const SingularCategory> cat, int f);
FinSuppModule direct_sum_module(const FinSuppModule& a, const FinSuppModule& b);
// Functoriality on all composable basis pairs and identities; throws
// std::logic_error on a violation.
void module_check(const FinSuppModule& m);

// Restriction of the representable at x to the frozen vertices. Values are
// the hom dimensions Hom(f, x); the action is precomposition.
struct GprObject {
  ZVertex anchor;
  FinSuppModule module;
};

// Throws std::invalid_argument when x is outside the window or so close to
// the bottom edge that the generators of the module would be truncated.
GprObject restrict_projective(std::shared_ptr<const SingularCategory> cat, const ZVertex& x);

// Natural transformation between modules, one matrix per object.
struct ModuleHom {
  std::vector<QMat> components;  // [f]: M(f) -> N(f)
};

ModuleHom compose_module_hom(const ModuleHom& g, const ModuleHom& f);
// The map rep(f) -> rep(g) induced by w in Hom(f,g): postcomposition.
ModuleHom yoneda_module_hom(const std::shared_ptr<const SingularCategory>& cat, int f, int g,
                            const HomElt& w);

int module_hom_dim(const FinSuppModule& m, const FinSuppModule& n);
std::vector<ModuleHom> module_hom_basis(const FinSuppModule& m, const FinSuppModule& n);

// Minimal projective cover read off the radical top, with the kernel as a
// submodule. The epi is checked surjective and the inclusion injective.
struct GprCover {
  FinSuppModule p0;
  std::vector<int> multiplicities;  // representable count per object
  ModuleHom epi;                    // p0 -> m
  FinSuppModule syzygy;
  ModuleHom incl;                   // syzygy -> p0
};

GprCover projective_cover(const FinSuppModule& m);

// dim coker( Hom(P0, n) -> Hom(syzygy(m), n) ) over a minimal cover of m.
int ext1_dim(const FinSuppModule& m, const FinSuppModule& n);
// dim Hom(m,n) minus the rank of the maps factoring through a cover of n.
int stable_hom_dim(const FinSuppModule& m, const FinSuppModule& n);

// Windowed verification of both halves of a complete resolution: iterated
// minimal covers to the left, iterated minimal embeddings into
// representables to the right, with hom-exactness against every
// representable checked at each step.
struct ResolutionCheck {
  bool ok = false;
  int left_steps = 0;
  int right_steps = 0;
  std::string detail;  // empty when ok; otherwise the first failure
};

ResolutionCheck complete_resolution_check(const FinSuppModule& m, int width);
// The minimal embedding step used on the right: m -> p with projective p and
// cokernel the co-syzygy. Throws std::runtime_error when m does not embed.
struct GprCoCover {
  FinSuppModule p0;
  std::vector<int> multiplicities;
  ModuleHom mono;  // m -> p0
  FinSuppModule cosyzygy;
};
GprCoCover projective_co_cover(const FinSuppModule& m);

std::string module_to_json(const FinSuppModule& m);

}  // namespace orbitcat
