#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "orbitcat/derivedcat.hpp"
#include "orbitcat/gprcat.hpp"
#include "orbitcat/linalg.hpp"

using namespace orbitcat;

namespace {

Quiver dynkin(const char* name) { return dynkin_quiver(*parse_dynkin(name)); }

ZVertex zv(const char* text) { return *parse_zvertex(text); }

std::shared_ptr<const SingularCategory> a2_cat(int pmin = -7, int pmax = 3) {
  auto np = std::make_shared<const NakajimaPresentation>(
      nakajima_build(dynkin("A2"), Configuration::all(), pmin, pmax));
  return std::make_shared<const SingularCategory>(np);
}

std::vector<Rat> flatten(const ModuleHom& h) {
  std::vector<Rat> out;
  for (const QMat& c : h.components)
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) out.push_back(c.at(i, j));
  return out;
}

int flat_rank(const std::vector<ModuleHom>& homs) {
  if (homs.empty()) return 0;
  EchelonBasis eb(int(flatten(homs.front()).size()));
  for (const ModuleHom& h : homs) eb.insert(flatten(h));
  return eb.rank();
}

// dim rad/rad^2 inside the listed objects; valid when every factorization
// stays level-wise between i and j.
int irr_dim(const std::vector<GprObject>& objs, int i, int j) {
  auto homs = module_hom_basis(objs[i].module, objs[j].module);
  int dim = int(homs.size());
  if (dim == 0) return 0;
  EchelonBasis eb(int(flatten(homs.front()).size()));
  for (int z = 0; z < int(objs.size()); ++z) {
    if (z == i || z == j) continue;
    auto f1 = module_hom_basis(objs[i].module, objs[z].module);
    auto f2 = module_hom_basis(objs[z].module, objs[j].module);
    for (const ModuleHom& f : f1)
      for (const ModuleHom& g : f2) eb.insert(flatten(compose_module_hom(g, f)));
  }
  return dim - eb.rank();
}

}  // namespace

TEST_CASE("restriction of representables to the singular category") {
  auto cat = a2_cat();
  const PresentedCategory& pc = cat->regular();

  GprObject y = restrict_projective(cat, zv("(1,0)"));
  CHECK(y.anchor == zv("(1,0)"));
  for (int f = 0; f < cat->num_objects(); ++f)
    CHECK(y.module.values[f] == pc.hom_dim(cat->object(f), zv("(1,0)")));
  CHECK(y.module.values[cat->object_index(zv("(1',-1)"))] == 1);
  CHECK(y.module.values[cat->object_index(zv("(2',-2)"))] == 1);
  CHECK(y.module.values[cat->object_index(zv("(2',-1)"))] == 0);
  CHECK(y.module.values[cat->object_index(zv("(1',0)"))] == 0);
  module_check(y.module);

  // A frozen anchor restricts to its own representable.
  int f0 = cat->object_index(zv("(1',0)"));
  GprObject p = restrict_projective(cat, zv("(1',0)"));
  FinSuppModule rep = representable_module(cat, f0);
  CHECK(p.module.values == rep.values);
  CHECK(rep.values[f0] == 1);
  module_check(rep);
  module_check(direct_sum_module(y.module, rep));

  CHECK_THROWS_AS(restrict_projective(cat, zv("(1,17)")), std::invalid_argument);
  CHECK_THROWS_AS(restrict_projective(cat, zv("(1,-6)")), std::invalid_argument);
}

TEST_CASE("module homs recover the regular category homs") {
  auto cat = a2_cat();
  const PresentedCategory& pc = cat->regular();
  const TranslationQuiver& tq = pc.tq();

  std::vector<ZVertex> anchors;
  for (const ZVertex& v : tq.zvertices())
    if (v.level >= -1 && v.level <= 2) anchors.push_back(v);
  REQUIRE(anchors.size() == 16);

  std::vector<GprObject> objs;
  for (const ZVertex& v : anchors) objs.push_back(restrict_projective(cat, v));
  for (size_t i = 0; i < objs.size(); ++i)
    for (size_t j = 0; j < objs.size(); ++j)
      CHECK(module_hom_dim(objs[i].module, objs[j].module) ==
            pc.hom_dim(anchors[i], anchors[j]));

  // Yoneda on representables and the zero module.
  int f = cat->object_index(zv("(1',0)"));
  int g = cat->object_index(zv("(2',1)"));
  CHECK(module_hom_dim(representable_module(cat, f), representable_module(cat, g)) ==
        cat->hom_dim(f, g));
  CHECK(module_hom_dim(representable_module(cat, f), representable_module(cat, f)) == 1);
  CHECK(module_hom_dim(objs[0].module, zero_module(cat)) == 0);
}

TEST_CASE("projective covers and syzygies") {
  auto cat = a2_cat();

  // A representable covers itself.
  int f = cat->object_index(zv("(2',0)"));
  GprCover cf = projective_cover(representable_module(cat, f));
  CHECK(cf.multiplicities[f] == 1);
  CHECK(cf.p0.values == representable_module(cat, f).values);
  CHECK(cf.syzygy.is_zero());

  // The cover of Y(1,0) is generated at (1',-1) and (2',-2).
  GprObject y = restrict_projective(cat, zv("(1,0)"));
  GprCover cy = projective_cover(y.module);
  std::vector<int> expected(cat->num_objects(), 0);
  expected[cat->object_index(zv("(1',-1)"))] = 1;
  expected[cat->object_index(zv("(2',-2)"))] = 1;
  CHECK(cy.multiplicities == expected);
  CHECK_FALSE(cy.syzygy.is_zero());
  module_check(cy.syzygy);

  // Syzygy is additive, at the level of value dimensions.
  GprObject y2 = restrict_projective(cat, zv("(2,0)"));
  GprCover both = projective_cover(direct_sum_module(y.module, y2.module));
  GprCover c2 = projective_cover(y2.module);
  for (int e = 0; e < cat->num_objects(); ++e)
    CHECK(both.syzygy.values[e] == cy.syzygy.values[e] + c2.syzygy.values[e]);

  // Cover of a simple: the representable, with the radical as syzygy.
  int s = cat->object_index(zv("(1',0)"));
  GprCover cs = projective_cover(simple_module(cat, s));
  CHECK(cs.multiplicities[s] == 1);
  CHECK(cs.syzygy.values[s] == 0);
  CHECK(cs.syzygy.values[cat->object_index(zv("(1',-1)"))] == 1);
}

TEST_CASE("ext groups vanish against the frozen projective-injectives") {
  auto cat = a2_cat();

  std::vector<GprObject> objs;
  for (const ZVertex& v : cat->regular().tq().zvertices())
    if (v.level >= -1 && v.level <= 2 && !v.frozen)
      objs.push_back(restrict_projective(cat, v));

  for (const GprObject& m : objs) {
    for (int g = 0; g < cat->num_objects(); ++g) {
      FinSuppModule rep = representable_module(cat, g);
      CHECK(ext1_dim(m.module, rep) == 0);
      CHECK(ext1_dim(rep, m.module) == 0);
    }
  }
}

TEST_CASE("ext and stable hom tables match the derived category") {
  auto cat = a2_cat();
  auto q = std::make_shared<Quiver>(dynkin("A2"));
  DerivedCategory dc(q);
  ZQChart chart = build_chart(dc, -3, 3);

  std::vector<ZVertex> anchors;
  for (const ZVertex& v : cat->regular().tq().zvertices())
    if (v.level >= -1 && v.level <= 2 && !v.frozen) anchors.push_back(v);
  REQUIRE(anchors.size() == 8);

  std::vector<GprObject> objs;
  std::vector<DIndec> imgs;
  for (const ZVertex& v : anchors) {
    objs.push_back(restrict_projective(cat, v));
    int idx = chart.tq.index_of(ZVertex{v.base, v.level, false});
    REQUIRE(idx >= 0);
    imgs.push_back(chart.objects[idx]);
  }

  int nonsplit = 0;
  for (size_t i = 0; i < objs.size(); ++i) {
    for (size_t j = 0; j < objs.size(); ++j) {
      DIndec shifted{imgs[j].module, imgs[j].shift + 1};
      int ext = ext1_dim(objs[i].module, objs[j].module);
      CHECK(ext == dc.dhom_dim(imgs[i], shifted));
      CHECK(stable_hom_dim(objs[i].module, objs[j].module) == dc.dhom_dim(imgs[i], imgs[j]));
      nonsplit += ext;
    }
  }
  CHECK(nonsplit > 0);

  CHECK(ext1_dim(objs[0].module, objs[0].module) == 0);
  GprObject y11 = restrict_projective(cat, zv("(1,1)"));
  GprObject y10 = restrict_projective(cat, zv("(1,0)"));
  GprObject y20 = restrict_projective(cat, zv("(2,0)"));
  GprObject y2m1 = restrict_projective(cat, zv("(2,-1)"));
  CHECK(ext1_dim(y20.module, y2m1.module) == 1);
  CHECK(ext1_dim(y10.module, y2m1.module) == 0);
  CHECK(ext1_dim(y11.module, y10.module) == 1);

  // Stable homs through a representable vanish both ways.
  FinSuppModule rep = representable_module(cat, cat->object_index(zv("(1',0)")));
  CHECK(stable_hom_dim(rep, y10.module) == 0);
  CHECK(stable_hom_dim(y10.module, rep) == 0);
  CHECK(stable_hom_dim(y10.module, y10.module) == 1);
}

TEST_CASE("auslander-reiten adjacency matches the framed translation quiver") {
  auto cat = a2_cat();
  const TranslationQuiver& tq = cat->regular().tq();

  std::vector<GprObject> objs;
  std::vector<int> vidx;
  for (int v = 0; v < tq.num_vertices(); ++v) {
    const ZVertex& z = tq.zvertex(v);
    if (z.level < -1 || z.level > 1) continue;
    objs.push_back(restrict_projective(cat, z));
    vidx.push_back(v);
  }

  for (size_t i = 0; i < objs.size(); ++i) {
    for (size_t j = 0; j < objs.size(); ++j) {
      if (i == j) continue;
      int arrows = 0;
      for (int a : tq.arrows_from(vidx[i]))
        if (tq.zarrow(a).tgt == vidx[j]) ++arrows;
      CHECK(irr_dim(objs, int(i), int(j)) == arrows);
    }
  }
}

TEST_CASE("mesh conflations are valuewise exact on frozen test objects") {
  auto cat = a2_cat();
  const PresentedCategory& pc = cat->regular();
  const TranslationQuiver& tq = pc.tq();

  for (int xi = 0; xi < tq.num_vertices(); ++xi) {
    const ZVertex& x = tq.zvertex(xi);
    if (x.frozen || x.level < -2 || x.level > 1) continue;
    auto txv = tq.tau_inverse(x);
    REQUIRE(txv.has_value());
    int vi = tq.index_of(*txv);

    const auto& outs = tq.arrows_from(xi);
    for (int fi = 0; fi < cat->num_objects(); ++fi) {
      const ZVertex& f = cat->object(fi);
      if (f.level < -5) continue;
      int fidx = tq.index_of(f);

      int dim_x = pc.hom_dim(f, x), dim_v = pc.hom_dim(f, *txv), dim_mid = 0;
      std::vector<int> col_off;
      QMat a_mat(0, dim_x);
      for (int a : outs) {
        col_off.push_back(dim_mid);
        const QMat& blk = pc.postcompose_matrix(fidx, a);
        dim_mid += blk.rows();
        a_mat = vstack(a_mat, blk);
      }
      QMat b_mat(dim_v, dim_mid);
      for (int b : tq.arrows_to(vi)) {
        int a = tq.sigma_arrow(b);
        auto it = std::find(outs.begin(), outs.end(), a);
        REQUIRE(it != outs.end());
        b_mat.paste(0, col_off[it - outs.begin()], pc.postcompose_matrix(fidx, b));
      }

      CHECK((b_mat * a_mat).is_zero());
      CHECK(rank(a_mat) == dim_x);
      CHECK(rank(b_mat) == dim_v);
      CHECK(dim_mid == dim_x + dim_v);
    }
  }
}

TEST_CASE("windowed complete resolutions") {
  auto cat = a2_cat();

  GprObject y = restrict_projective(cat, zv("(1,0)"));
  ResolutionCheck rc = complete_resolution_check(y.module, 2);
  CHECK(rc.ok);
  CHECK(rc.detail.empty());
  CHECK(rc.left_steps == 2);
  CHECK(rc.right_steps == 2);

  FinSuppModule rep = representable_module(cat, cat->object_index(zv("(1',0)")));
  CHECK(complete_resolution_check(rep, 2).ok);

  ResolutionCheck bad = complete_resolution_check(
      simple_module(cat, cat->object_index(zv("(1',0)"))), 2);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.detail.empty());

  // Syzygy and co-syzygy represent ext and stable hom functorially.
  GprCover cov = projective_cover(y.module);
  GprCoCover coc = projective_co_cover(y.module);
  for (const char* name : {"(1,0)", "(2,0)", "(1,1)", "(2,-1)"}) {
    FinSuppModule a = restrict_projective(cat, zv(name)).module;
    CHECK(stable_hom_dim(a, coc.cosyzygy) == ext1_dim(a, y.module));
    CHECK(stable_hom_dim(cov.syzygy, a) == ext1_dim(y.module, a));
  }
}

TEST_CASE("module json dump") {
  auto cat = a2_cat(-4, 2);
  GprObject y = restrict_projective(cat, zv("(1,0)"));
  std::string js = module_to_json(y.module);
  CHECK(js.find("\"values\"") != std::string::npos);
  CHECK(js.find("(1',-1)") != std::string::npos);
  CHECK(js.find("\"action\"") != std::string::npos);
}
