#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "orbitcat/linalg.hpp"
#include "orbitcat/rational.hpp"
#include "orbitcat/translation_quiver.hpp"

namespace orbitcat {

// Composable arrow sequence, first arrow first. Empty = identity at src.
struct Path {
  int src = -1;
  int tgt = -1;
  std::vector<int> arrows;
  bool operator==(const Path&) const = default;
};

// A morphism class, held as coordinates in the sweep basis of Hom(src, tgt).
struct HomElt {
  int src = -1;
  int tgt = -1;
  std::vector<Rat> coords;
  bool is_zero() const;
  bool operator==(const HomElt&) const = default;
};

struct HomSpace {
  ZVertex source, target;
  int dim = 0;
  // The class of each path is one basis element of Hom(source, target).
  std::vector<Path> basis_paths;
};

// Hom(source, -) for every target at once. dims/basis indexed by vertex,
// arrow_mat[a] is "postcompose with arrow a" in the chosen bases.
struct SweepData {
  int source = -1;
  std::vector<int> dims;
  std::vector<std::vector<Path>> basis;
  std::vector<QMat> arrow_mat;
};

// Full literal computation for one pair, exponential in window height:
// every path and the echelon form of the relation subspace.
struct LiteralHom {
  std::vector<Path> paths;
  int relation_rank = 0;
  int dim = 0;
  std::vector<int> basis_positions;  // non-pivot path indices, increasing
};

// Hom spaces of the windowed path category modulo the mesh ideal.
//
// The production algorithm processes vertices in the (topological) canonical
// order: Hom(x,x) = k on the empty path, and for v != x
//   Hom(x,v) = coker( Hom(x,tau v) --(sigma(beta) o -)--> (+)_{beta: w->v} Hom(x,w) )
// when v is non-frozen (the mesh map is zero when the mesh is a dropped
// boundary mesh, which only happens when Hom(x,tau v) would be zero anyway),
// and the plain direct sum when v is frozen. Every path from x to y stays in
// the level slab [level x, level y] because no arrow decreases level, and
// every relator anchored in that slab is complete, so in-window answers agree
// with the unbounded quiver. The cokernel basis is taken on non-pivot
// coordinates, hence every basis element is the class of a single path.
class PresentedCategory {
 public:
  explicit PresentedCategory(TranslationQuiver tq);
  PresentedCategory(PresentedCategory&&) noexcept;
  PresentedCategory& operator=(PresentedCategory&&) noexcept;
  ~PresentedCategory();

  const TranslationQuiver& tq() const { return tq_; }
  const std::vector<MeshRelator>& relators() const { return relators_; }

  const SweepData& sweep(int source_vertex) const;  // cached, thread-safe

  int hom_dim(const ZVertex& x, const ZVertex& y) const;
  HomSpace hom_space(const ZVertex& x, const ZVertex& y) const;

  HomElt identity(const ZVertex& x) const;
  HomElt zero(const ZVertex& x, const ZVertex& y) const;
  HomElt class_of_path(const Path& p) const;
  HomElt class_of_arrow(int arrow) const;
  // f after g (g: x->y, f: y->z). Throws on a composability mismatch.
  HomElt compose(const HomElt& f, const HomElt& g) const;
  HomElt add(const HomElt& f, const HomElt& g) const;
  HomElt scale(const Rat& c, const HomElt& f) const;

  // "postcompose with arrow a": Hom(src_vertex, src a) -> Hom(src_vertex, tgt a).
  const QMat& postcompose_matrix(int src_vertex, int arrow) const;
  // "precompose with g: x->y": Hom(y,z) -> Hom(x,z) in sweep bases.
  QMat precompose_matrix(const HomElt& g, const ZVertex& z) const;

  // Literal path/relation oracle; throws when cap is exceeded.
  std::vector<Path> enumerate_paths(const ZVertex& x, const ZVertex& y,
                                    size_t cap = 2000000) const;
  QMat relation_subspace(const ZVertex& x, const ZVertex& y, size_t cap = 2000000) const;
  LiteralHom hom_space_literal(const ZVertex& x, const ZVertex& y, size_t cap = 2000000) const;

  // Recomputes on the window enlarged by `enlargement` both ways and compares.
  bool window_stable(const ZVertex& x, const ZVertex& y, int enlargement) const;

  std::string path_str(const Path& p) const;

 private:
  void sweep_compute(int sx, SweepData& out) const;

  TranslationQuiver tq_;
  std::vector<MeshRelator> relators_;  // canonical order over non-frozen vertices
  std::vector<int> relator_at_;        // vertex index -> index into relators_, or -1
  struct SweepCache;                   // mutex-guarded read-through memo
  std::unique_ptr<SweepCache> cache_;
};

Path make_path(const TranslationQuiver& tq, const ZVertex& src,
               const std::vector<std::string>& arrow_ids);

// "source,target,dim" lines / [{"source":...,"target":...,"dim":...}] dumps.
std::string hom_table_csv(const PresentedCategory& pc, const std::vector<ZVertex>& xs,
                          const std::vector<ZVertex>& ys);
std::string hom_table_json(const PresentedCategory& pc, const std::vector<ZVertex>& xs,
                           const std::vector<ZVertex>& ys);

}  // namespace orbitcat
