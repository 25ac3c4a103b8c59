#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitcat/gprcat.hpp"

namespace orbitcat {

// A windowed category with a free automorphism F, realized on a presented
// translation-quiver category: F acts on vertices by (i,p) -> (nu(i), p+s_i)
// (primed copies move with the same shift), on arrows by the unique arrow
// between image vertices, and on morphisms by transporting basis paths.
// Downward vanishing Hom(x, F^l y) = 0 for l below the per-pair feasible
// range is structural (no arrow decreases the level and every s_i >= 1);
// upward support is truncated to the window. When the category has a finite
// hom gap on the window (the unframed case) the constructor also certifies a
// two-sided band: outside it every graded piece vanishes, window or not.
class FCategory {
 public:
  FCategory(std::shared_ptr<const PresentedCategory> base, FRule rule, int omin, int omax);

  const PresentedCategory& base() const { return *base_; }
  const std::shared_ptr<const PresentedCategory>& base_ptr() const { return base_; }
  const FRule& rule() const { return rule_; }
  const TranslationQuiver& tq() const { return base_->tq(); }

  // band objects: vertices whose level lies in [omin, omax]
  const std::vector<int>& objects() const { return objects_; }
  int omin() const { return omin_; }
  int omax() const { return omax_; }

  // largest |l| with a nonzero graded piece over the band objects
  int band() const { return band_; }
  // largest level gap with a nonzero hom between window vertices
  int max_gap() const { return max_gap_; }
  // true when the gap bound plus window headroom certify that every graded
  // piece outside [-band, band] vanishes in the unwindowed category
  bool band_certified() const { return band_certified_; }

  // F^power of a vertex; -1 once the iteration leaves the window
  int f_vertex(int v, int power) const;
  int f_arrow(int a) const { return fwd_arrow_[a]; }
  int f_arrow_inv(int a) const { return inv_arrow_[a]; }

  // exact transport Hom(x,y) -> Hom(F^power x, F^power y)
  HomElt transport(const HomElt& h, int power) const;

  // degrees l with F^l y in the window and level(F^l y) >= level(x),
  // ascending; every graded piece of Hom(x, F^. y) outside this list is
  // either structurally zero (below) or outside the window (above)
  std::vector<int> feasible_degrees(int x, int y) const;

 private:
  std::shared_ptr<const PresentedCategory> base_;
  FRule rule_;
  int omin_ = 0, omax_ = 0;
  std::vector<int> objects_;
  std::vector<int> fwd_vertex_, inv_vertex_;
  std::vector<int> fwd_arrow_, inv_arrow_;
  int band_ = 0;
  int max_gap_ = -1;
  bool band_certified_ = false;
};

// Graded hom of the orbit category: piece l is Hom(x, F^l y). Only nonzero
// pieces are stored; total is their dimension sum over the feasible range.
struct GradedHom {
  int x = -1, y = -1;
  std::map<int, int> piece_dims;
  int total = 0;
};

GradedHom orbit_hom(const FCategory& fc, int x, int y);

// A morphism x -> y of the orbit category: finitely many homogeneous terms,
// the degree-l term living in Hom(x, F^l y). Zero terms are never stored, so
// equality of maps is equality of the term lists.
struct OrbitElt {
  int x = -1, y = -1;
  std::map<int, HomElt> terms;

  bool is_zero() const { return terms.empty(); }
};

bool orbit_eq(const OrbitElt& a, const OrbitElt& b);
OrbitElt orbit_zero(int x, int y);
OrbitElt orbit_identity(const FCategory& fc, int x);
OrbitElt orbit_term(const FCategory& fc, int y, int degree, const HomElt& h);
OrbitElt orbit_add(const OrbitElt& a, const OrbitElt& b);
OrbitElt orbit_scale(const Rat& c, const OrbitElt& a);
// f after g: the degree-c term is sum over a+b=c of F^b(f_a) . g_b
OrbitElt orbit_compose(const FCategory& fc, const OrbitElt& f, const OrbitElt& g);

// Locality certificate for the endomorphism ring of p(x_1) + ... + p(x_k) in
// the orbit category. Checks that negative degrees vanish, then that the
// degree-zero-singular elements form a nilpotent ideal (so everything
// outside it is invertible and the ring is local). A direct sum is refuted
// by a nontrivial idempotent among the degree-zero basis elements.
struct LocalEndResult {
  bool local = false;
  bool precondition_ok = false;
  int end_dim = 0;
  int nilpotency = 0;
  std::string witness;
};

LocalEndResult check_local_end(const FCategory& fc, const std::vector<int>& summands);

// The orbit category of the singular subcategory on one representative per
// F-orbit of the window's frozen vertices: Hom(i, j) is the sum over slots m
// with F^m rep_i in the window of Hom(F^m rep_i, rep_j), composition
// normalizes the slot and truncates when the normalized source leaves the
// window. Modules pushed forward along the projection carry an orbit-power
// grading on their value spaces (slot_of), the hom systems run degree by
// degree over the translate transports of the singular generators, and the
// module calculus (covers, syzygies, ext, stable homs) stays graded so that
// every degree piece is a plain singular-category computation.
class OrbitSingular {
 public:
  OrbitSingular(std::shared_ptr<const SingularCategory> cat,
                std::shared_ptr<const FCategory> fc);

  const SingularCategory& cat() const { return *cat_; }
  const std::shared_ptr<const SingularCategory>& cat_ptr() const { return cat_; }
  const FCategory& fc() const { return *fc_; }

  int num_objects() const { return int(domain_.size()); }
  int domain_rep(int i) const { return domain_[i]; }           // singular object index
  int orbit_index_of(int sing_obj) const { return orbit_of_[sing_obj]; }

  int hom_dim(int i, int j) const;
  int piece_dim(int i, int j, int l) const;
  int basis_degree(int i, int j, int k) const { return basis_[i][j][k].first; }
  std::vector<Rat> compose_coords(int i, int j, int h, int k1, int k2) const;

  struct OModule {
    std::vector<int> values;
    std::vector<std::vector<std::vector<QMat>>> action;  // [i][j][k]
    // orbit power of each value coordinate; empty when the module lost its
    // grading (extension middle terms), which bars it from the hom systems
    std::vector<std::vector<int>> slot_of;
    int total_dim() const;
  };

  OModule pi_module(const FinSuppModule& l) const;
  OModule o_representable(int i) const;
  OModule o_direct_sum(const OModule& a, const OModule& b) const;
  void o_module_check(const OModule& m) const;

  int o_hom_dim(const OModule& m, const OModule& n) const;
  int o_ext1_dim(const OModule& m, const OModule& n) const;
  int o_stable_dim(const OModule& m, const OModule& n) const;
  // middle term of an extension representing a nonzero class in
  // Ext^1(m, n); requires o_ext1_dim(m, n) > 0
  OModule o_ext_middle(const OModule& m, const OModule& n) const;

  // stable hom dimensions for all ordered pairs, covers computed once
  std::vector<std::vector<int>> stable_table(const std::vector<OModule>& mods) const;

 private:
  struct OCover {
    OModule p0;
    std::vector<QMat> epi, incl;
    OModule syzygy;
  };
  // the graded naturality systems, one independent system per degree; when
  // collect is set the solutions are appended as component matrices, and the
  // return value is the total solution dimension either way
  int hom_systems(const OModule& m, const OModule& n,
                  std::vector<std::vector<QMat>>* collect) const;
  std::vector<std::vector<QMat>> o_hom_basis(const OModule& m, const OModule& n) const;
  OCover o_cover(const OModule& m) const;
  int arc_slot(int i, const ZVertex& v) const;  // slot of v on the arc of rep_i
  bool slot_in_window(int i, int m) const;

  std::shared_ptr<const SingularCategory> cat_;
  std::shared_ptr<const FCategory> fc_;
  std::vector<int> domain_;
  std::vector<int> orbit_of_;
  // basis_[i][j] = ascending (slot m, element of Hom(F^m rep_i, rep_j))
  std::vector<std::vector<std::vector<std::pair<int, HomElt>>>> basis_;
  // one naturality-row source per generator of each singular pair (f, g),
  // rewritten over the representatives: class pair (i, j), normalized slot b,
  // transport position mu of the original pair, the offset of the slot-b
  // block in basis_[i][j], and the generator's coordinates over that block
  struct GenRow {
    int i = -1, j = -1, b = 0, mu = 0, pos0 = 0;
    std::vector<Rat> coords;
  };
  std::vector<GenRow> gen_rows_;
  std::vector<int> id_index_;          // identity position in basis_[i][i]
  std::vector<std::vector<int>> arc_;  // in-window slots per class, ascending
};

// F^power pushforward of a module over the singular category: values move
// along the orbit, the action transports contravariantly.
FinSuppModule f_star_module(const OrbitSingular& os, const FinSuppModule& m, int power);

struct CheckResult {
  bool pass = false;
  int lhs = 0, rhs = 0;
  std::string detail;
};

// dim Ext^i over the orbit category against the graded sum of base ext
// dimensions, both sides computed independently; i is 0 or 1.
CheckResult check_ext_product(const OrbitSingular& os, const FinSuppModule& l,
                              const FinSuppModule& m, int i);

// stable hom of pi-images modulo the orbit projectives against the graded
// sum of base stable homs; x, y are regular (non-frozen) anchors.
CheckResult check_psi_pair(const OrbitSingular& os, const ZVertex& x, const ZVertex& y);
bool check_psi_fully_faithful(const OrbitSingular& os, const std::vector<ZVertex>& anchors);

}  // namespace orbitcat
