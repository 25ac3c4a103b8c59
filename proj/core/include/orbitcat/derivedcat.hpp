#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitcat/repmod.hpp"
#include "orbitcat/translation_quiver.hpp"

namespace orbitcat {

// Indecomposable object of the bounded derived category of a Dynkin path
// algebra: a module index (into DerivedCategory::modules) plus a shift.
struct DIndec {
  int module = -1;
  int shift = 0;
  auto operator<=>(const DIndec&) const = default;
};

// Shift-graded model of ind D^b(kQ). Homs live in shift offsets 0 and 1
// only; tau acts by the module translate away from projectives and drops
// a projective P_i to (I_i, shift-1).
class DerivedCategory {
 public:
  explicit DerivedCategory(std::shared_ptr<const Quiver> q);

  const Quiver& quiver() const { return *q_; }
  std::shared_ptr<const Quiver> quiver_ptr() const { return q_; }
  const std::vector<QuiverRep>& modules() const { return modules_; }
  int num_modules() const { return int(modules_.size()); }

  bool is_projective(int module) const { return proj_vertex_[module] >= 0; }
  bool is_injective(int module) const { return inj_vertex_[module] >= 0; }
  int projective_at(int vertex) const { return proj_of_[vertex]; }
  int injective_at(int vertex) const { return inj_of_[vertex]; }
  // Index of an indecomposable representation, by isomorphism.
  int module_index(const QuiverRep& m) const;

  DIndec dtau(DIndec x) const;
  DIndec dtau_inverse(DIndec x) const;
  // F = suspension after inverse translation, iterated l times (any sign).
  DIndec fshift(DIndec x, long l) const;

  int dhom_dim(DIndec x, DIndec y) const;
  // dim rad/rad^2 between objects: multiplicity of irreducible maps.
  int irr_dim(DIndec x, DIndec y) const;

  std::string str(DIndec x) const;  // "([1,1],0)"

 private:
  std::shared_ptr<const Quiver> q_;
  std::vector<QuiverRep> modules_;
  std::vector<int> proj_vertex_, inj_vertex_;  // -1 or the defining vertex
  std::vector<int> proj_of_, inj_of_;          // per quiver vertex
  std::vector<int> tau_, tau_inv_;             // -1 at projectives/injectives
  std::vector<std::vector<int>> hom_, ext_;    // cached dimensions
  // precomputed pairwise bases, immutable after construction
  std::vector<std::vector<std::vector<RepHom>>> hom_bases_;
  std::vector<std::vector<std::optional<Ext1Presentation>>> ext_pres_;
  std::vector<std::vector<std::vector<std::vector<QMat>>>> ext_cocycles_;
};

// Bijection between a window of the repetition quiver ZQ and objects of the
// derived category, knitted from a slice carrying the projectives. The
// orientation of the slice is fixed by validating the arrow/irreducible-map
// and tau compatibilities during construction.
struct ZQChart {
  TranslationQuiver tq;
  std::vector<DIndec> objects;  // by tq vertex index
  std::vector<int> slice;       // level carrying (P_i, 0), by quiver vertex

  std::optional<int> find(DIndec x) const;  // tq vertex index in window
};

// Throws std::runtime_error("chart validation failed") if neither slice
// orientation satisfies the invariants; cannot happen for Dynkin input.
ZQChart build_chart(const DerivedCategory& dc, int pmin, int pmax);

std::string chart_hom_csv(const DerivedCategory& dc, const ZQChart& chart);
std::string chart_dot(const DerivedCategory& dc, const ZQChart& chart);

}  // namespace orbitcat
