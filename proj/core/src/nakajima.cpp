#include "orbitcat/nakajima.hpp"

#include <memory>
#include <stdexcept>
#include <utility>

#include "orbitcat/linalg.hpp"

namespace orbitcat {

NakajimaPresentation nakajima_build(const Quiver& q, const Configuration& c,
                                    int pmin, int pmax) {
  PresentedCategory regular(TranslationQuiver(q, pmin, pmax, true, c));
  std::vector<ZVertex> singular;
  for (const ZVertex& v : regular.tq().zvertices())
    if (v.frozen) singular.push_back(v);
  return {std::move(regular), std::move(singular)};
}

namespace {

// Stacks the blocks on top of each other; `width` fixes the shape when the
// list is empty.
QMat stack_all(const std::vector<QMat>& blocks, int width) {
  QMat out(0, width);
  for (const QMat& b : blocks) out = vstack(out, b);
  return out;
}

}  // namespace

AdmissibilityResult is_admissible(const NakajimaPresentation& np, int tmin, int tmax) {
  const PresentedCategory& pc = np.regular;
  const TranslationQuiver& tq = pc.tq();
  if (!(tq.pmin() < tmin && tmax < tq.pmax()))
    throw std::invalid_argument("test band must leave a level of margin inside the window");

  std::vector<int> anchors, tests;
  for (int v = 0; v < tq.num_vertices(); ++v) {
    const ZVertex& z = tq.zvertex(v);
    if (z.level < tmin || z.level > tmax) continue;
    tests.push_back(v);
    if (!z.frozen) anchors.push_back(v);
  }

  AdmissibilityResult res;
  for (int xi : anchors) {
    const ZVertex& x = tq.zvertex(xi);
    for (int wi : tests) {
      const ZVertex& w = tq.zvertex(wi);

      // Hom(w,x) -> (+)_{a: x->y} Hom(w,y), postcomposition with each arrow.
      ++res.pairs_checked;
      if (int dom = pc.hom_dim(w, x); dom > 0) {
        std::vector<QMat> blocks;
        for (int a : tq.arrows_from(xi)) blocks.push_back(pc.postcompose_matrix(wi, a));
        int rk = rank(stack_all(blocks, dom));
        if (rk < dom) {
          res.admissible = false;
          res.witness = AdmissibilityWitness{w, x, false, dom, rk};
          return res;
        }
      }

      // Hom(x,w) -> (+)_{b: y->x} Hom(y,w), precomposition with each arrow.
      ++res.pairs_checked;
      if (int dom = pc.hom_dim(x, w); dom > 0) {
        std::vector<QMat> blocks;
        for (int b : tq.arrows_to(xi))
          blocks.push_back(pc.precompose_matrix(pc.class_of_arrow(b), w));
        int rk = rank(stack_all(blocks, dom));
        if (rk < dom) {
          res.admissible = false;
          res.witness = AdmissibilityWitness{w, x, true, dom, rk};
          return res;
        }
      }
    }
  }
  return res;
}

FRule f_rule(const DerivedCategory& dc) {
  const Quiver& q = dc.quiver();
  int n = q.num_vertices();
  auto t = classify_dynkin(q);
  if (!t) throw std::invalid_argument("f_rule: not a Dynkin quiver");
  int h = coxeter_number(*t);

  ZQChart chart = build_chart(dc, -(n + 2), h + n + 2);
  FRule fr{std::vector<int>(n, -1), std::vector<int>(n, 0)};
  for (int i = 0; i < n; ++i) {
    ZVertex src{q.vertices()[i], chart.slice[i], false};
    int si = chart.tq.index_of(src);
    DIndec img = dc.fshift(chart.objects[si], 1);
    auto ti = chart.find(img);
    if (!ti) throw std::runtime_error("f_rule: image left the chart window");
    const ZVertex& dst = chart.tq.zvertex(*ti);
    fr.nu[i] = q.vertex_index(dst.base);
    fr.s[i] = dst.level - src.level;
  }
  return fr;
}

bool is_f_invariant(const Configuration& c, const Quiver& q) {
  if (c.is_all() || c.is_empty()) return true;
  DerivedCategory dc(std::make_shared<Quiver>(q));
  FRule fr = f_rule(dc);
  for (int i = 0; i < q.num_vertices(); ++i) {
    for (int r = 0; r < c.period(); ++r) {
      bool member = c.contains(q.vertices()[i], r);
      bool image = c.contains(q.vertices()[fr.nu[i]], r + fr.s[i]);
      if (member != image) return false;
    }
  }
  return true;
}

}  // namespace orbitcat
