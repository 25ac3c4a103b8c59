#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitcat/linalg.hpp"
#include "orbitcat/quiver.hpp"
#include "orbitcat/rational.hpp"

namespace orbitcat {

// Representation of a quiver: a space per vertex, a matrix per arrow
// (shape dims[tgt] x dims[src]).
struct QuiverRep {
  std::shared_ptr<const Quiver> q;
  std::vector<int> dims;
  std::vector<QMat> maps;

  int total_dim() const;
  bool is_zero() const { return total_dim() == 0; }
};

QuiverRep make_rep(std::shared_ptr<const Quiver> q, std::vector<int> dims,
                   std::vector<QMat> maps);  // validates shapes
QuiverRep zero_rep(std::shared_ptr<const Quiver> q);
QuiverRep simple_rep(std::shared_ptr<const Quiver> q, int vertex);
// P_i: paths out of i, arrows act by appending.
QuiverRep projective_rep(std::shared_ptr<const Quiver> q, int vertex);
// I_i: dual of paths into i.
QuiverRep injective_rep(std::shared_ptr<const Quiver> q, int vertex);
QuiverRep direct_sum(const QuiverRep& a, const QuiverRep& b);
// Same spaces over the opposite quiver, all maps transposed.
QuiverRep dual_rep(const QuiverRep& m, std::shared_ptr<const Quiver> opposite);

struct RepHom {
  QuiverRep source, target;
  std::vector<QMat> components;  // per vertex
};

bool hom_commutes(const RepHom& f);  // exact commuting-square check
RepHom identity_hom(const QuiverRep& m);
RepHom compose_hom(const RepHom& f, const RepHom& g);  // f after g

// Phi: (+)_i Hom(M_i,N_i) -> (+)_{a:i->j} Hom(M_i,N_j), f |-> f_j M_a - N_a f_i.
// Hom = ker Phi; Ext1 = coker Phi (kQ is hereditary).
QMat hom_ext_matrix(const QuiverRep& m, const QuiverRep& n);
int hom_dim(const QuiverRep& m, const QuiverRep& n);
std::vector<RepHom> hom_basis(const QuiverRep& m, const QuiverRep& n);
int ext1_dim(const QuiverRep& m, const QuiverRep& n);

// <d,e> = sum_i d_i e_i - sum_{a:i->j} d_i e_j = dim Hom - dim Ext1.
long euler_form(const Quiver& q, const std::vector<int>& d, const std::vector<int>& e);

// Arrows incident to v reversed.
Quiver reflect_quiver(const Quiver& q, int v);
// BGP reflection at a sink (all arrows into v): new space at v is the kernel
// of the summed arrow map. Result lives over reflect_quiver.
QuiverRep reflect_plus(const QuiverRep& m, int v, std::shared_ptr<const Quiver> reflected);
// At a source: cokernel version.
QuiverRep reflect_minus(const QuiverRep& m, int v, std::shared_ptr<const Quiver> reflected);

// One representative per isomorphism class, built by reflection functor
// composites seeded at simples; dimension vectors are exactly the positive
// roots. Deterministic order.
std::vector<QuiverRep> indecomposables(std::shared_ptr<const Quiver> q);

struct Presentation {
  QuiverRep p0, p1;
  RepHom cover;  // p0 ->> m
  RepHom phi;    // p1 -> p0, image = ker(cover)
};
Presentation minimal_projective_presentation(const QuiverRep& m);
std::vector<int> top_multiplicities(const QuiverRep& m);

// tau = DTr via minimal presentation and the Nakayama functor; nullopt for
// projectives. tau_inverse by duality over the opposite quiver.
std::optional<QuiverRep> ar_translate(const QuiverRep& m);
std::optional<QuiverRep> ar_translate_inverse(const QuiverRep& m);

// Multiplicities m_X solving dim Hom(X', M) = sum_X m_X dim Hom(X', X) over
// the given indecomposable list (its hom matrix is invertible in finite type).
std::vector<int> decompose(const QuiverRep& m, const std::vector<QuiverRep>& indecs);
bool is_isomorphic(const QuiverRep& a, const QuiverRep& b,
                   const std::vector<QuiverRep>& indecs);

// Ext1 classes in deterministic cokernel coordinates. Cocycles are one
// matrix per arrow (shape N_tgt x M_src).
class Ext1Presentation {
 public:
  Ext1Presentation(const QuiverRep& m, const QuiverRep& n);
  int dim() const { return int(free_.size()); }
  std::vector<Rat> project(const std::vector<QMat>& cocycle) const;
  std::vector<QMat> basis_cocycle(int k) const;

 private:
  QuiverRep m_, n_;
  EchelonBasis image_;
  std::vector<int> free_;
  std::vector<int> offsets_;  // per arrow block
  std::vector<Rat> flatten(const std::vector<QMat>& cocycle) const;
};

// Yoneda actions on cocycles: pullback along f: X -> M gives Ext1(X,N),
// pushforward along g: N -> Y gives Ext1(M,Y).
std::vector<QMat> ext_pullback(const RepHom& f, const QuiverRep& n,
                               const std::vector<QMat>& cocycle);
std::vector<QMat> ext_pushforward(const RepHom& g, const QuiverRep& m,
                                  const std::vector<QMat>& cocycle);
// Middle term of the extension 0 -> N -> E -> M -> 0 with class `cocycle`.
QuiverRep extension_middle(const QuiverRep& m, const QuiverRep& n,
                           const std::vector<QMat>& cocycle);

std::string rep_to_json(const QuiverRep& m);

}  // namespace orbitcat
