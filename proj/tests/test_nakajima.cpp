#include <memory>
#include <vector>

#include "doctest.h"
#include "orbitcat/linalg.hpp"
#include "orbitcat/nakajima.hpp"

using namespace orbitcat;

namespace {

Quiver dynkin(const char* name) { return dynkin_quiver(*parse_dynkin(name)); }

ZVertex zv(const char* text) { return *parse_zvertex(text); }

// Independent recomputation of a reported witness: compose basis path
// classes with the incident arrows one at a time and take the rank of the
// resulting coordinate rows.
int witness_rank_recheck(const PresentedCategory& pc, const AdmissibilityWitness& wit) {
  const TranslationQuiver& tq = pc.tq();
  int xi = tq.index_of(wit.x);
  REQUIRE(xi >= 0);
  HomSpace hs = wit.dual ? pc.hom_space(wit.x, wit.w) : pc.hom_space(wit.w, wit.x);
  REQUIRE(hs.dim == wit.dim);
  std::vector<std::vector<Rat>> rows;
  for (const Path& p : hs.basis_paths) {
    HomElt f = pc.class_of_path(p);
    std::vector<Rat> row;
    if (!wit.dual) {
      for (int a : tq.arrows_from(xi)) {
        HomElt g = pc.compose(pc.class_of_arrow(a), f);
        row.insert(row.end(), g.coords.begin(), g.coords.end());
      }
    } else {
      for (int b : tq.arrows_to(xi)) {
        HomElt g = pc.compose(f, pc.class_of_arrow(b));
        row.insert(row.end(), g.coords.begin(), g.coords.end());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) return 0;
  return rank(QMat::from_rows(rows));
}

}  // namespace

TEST_CASE("build: empty configuration reproduces the plain mesh category") {
  for (const char* name : {"A2", "A3"}) {
    Quiver q = dynkin(name);
    NakajimaPresentation np = nakajima_build(q, Configuration::none(), -2, 3);
    PresentedCategory plain(TranslationQuiver(q, -2, 3, false, Configuration::none()));

    CHECK(np.singular.empty());
    REQUIRE(np.regular.tq().num_vertices() == plain.tq().num_vertices());
    for (const ZVertex& x : plain.tq().zvertices())
      for (const ZVertex& y : plain.tq().zvertices())
        CHECK(np.regular.hom_dim(x, y) == plain.hom_dim(x, y));
  }
}

TEST_CASE("build: frozen companions follow the configuration") {
  Quiver q = dynkin("A2");

  // Full configuration: every frozen companion in the window is kept.
  NakajimaPresentation all = nakajima_build(q, Configuration::all(), 0, 2);
  std::vector<ZVertex> expected = {zv("(1',0)"), zv("(2',0)"), zv("(1',1)"),
                                   zv("(2',1)"), zv("(1',2)"), zv("(2',2)")};
  CHECK(all.singular == expected);

  // (i',n) is kept iff (i,n+1) is a member: period 2 with residue (1,0)
  // keeps exactly the odd-level companions of vertex 1.
  Configuration c(2, {{"1", 0}});
  NakajimaPresentation part = nakajima_build(q, c, 0, 3);
  CHECK(part.singular == std::vector<ZVertex>{zv("(1',1)"), zv("(1',3)")});

  // No relator is anchored at a frozen vertex.
  for (const MeshRelator& r : all.regular.relators()) CHECK_FALSE(r.at.frozen);
  // Meshes at members gain the frame arm: the relator at (1,1) has the
  // sigma-frame term next to the plain mesh term.
  for (const MeshRelator& r : all.regular.relators()) {
    if (r.at == zv("(1,1)")) {
      CHECK(r.complete);
      CHECK(r.terms.size() == 2);  // sigma(a) and the frame arm
    }
  }
}

TEST_CASE("admissibility: full configuration is admissible") {
  for (const char* name : {"A1", "A2", "A3"}) {
    Quiver q = dynkin(name);
    NakajimaPresentation np = nakajima_build(q, Configuration::all(), -4, 4);
    AdmissibilityResult res = is_admissible(np, -2, 2);
    CHECK(res.admissible);
    CHECK_FALSE(res.witness.has_value());
    CHECK(res.pairs_checked > 0);
  }

  // Same verdict after translating the window by the period.
  Quiver q = dynkin("A2");
  NakajimaPresentation shifted = nakajima_build(q, Configuration::all(), -3, 5);
  CHECK(is_admissible(shifted, -1, 3).admissible);
}

TEST_CASE("admissibility: empty configuration fails with a checkable witness") {
  // With no frozen vertices the full mesh relators kill composites around
  // every complete mesh, e.g. (2,p-1) -> (1,p) -> (2,p) vanishes, so the
  // stacked arrow map drops rank.
  for (const char* name : {"A1", "A2"}) {
    Quiver q = dynkin(name);
    NakajimaPresentation np = nakajima_build(q, Configuration::none(), -4, 4);
    AdmissibilityResult res = is_admissible(np, -2, 2);
    CHECK_FALSE(res.admissible);
    REQUIRE(res.witness.has_value());
    const AdmissibilityWitness& wit = *res.witness;
    CHECK_FALSE(wit.x.frozen);
    CHECK(wit.rank < wit.dim);
    CHECK(wit.dim >= 1);
    CHECK(witness_rank_recheck(np.regular, wit) == wit.rank);
  }
}

TEST_CASE("admissibility: test band must leave margin inside the window") {
  NakajimaPresentation np = nakajima_build(dynkin("A2"), Configuration::all(), -2, 2);
  CHECK_THROWS_AS(is_admissible(np, -2, 1), std::invalid_argument);
  CHECK_THROWS_AS(is_admissible(np, -1, 2), std::invalid_argument);
  CHECK_NOTHROW(is_admissible(np, -1, 1));
}

TEST_CASE("f_rule matches the charted suspension-translate action") {
  {
    DerivedCategory dc(std::make_shared<Quiver>(dynkin("A2")));
    FRule fr = f_rule(dc);
    CHECK(fr.nu == std::vector<int>{1, 0});  // F(1,p)=(2,p+2), F(2,p)=(1,p+3)
    CHECK(fr.s == std::vector<int>{2, 3});
  }
  {
    DerivedCategory dc(std::make_shared<Quiver>(dynkin("A3")));
    FRule fr = f_rule(dc);
    CHECK(fr.nu == std::vector<int>{2, 1, 0});
    CHECK(fr.s == std::vector<int>{2, 3, 4});
  }

  // Structural checks on D4: nu is a permutation, the rule commutes with F
  // at every chart vertex, and it maps arrows to arrows.
  DerivedCategory dc(std::make_shared<Quiver>(dynkin("D4")));
  const Quiver& q = dc.quiver();
  FRule fr = f_rule(dc);
  std::vector<int> seen(q.num_vertices(), 0);
  for (int i = 0; i < q.num_vertices(); ++i) {
    REQUIRE(fr.nu[i] >= 0);
    ++seen[fr.nu[i]];
  }
  CHECK(seen == std::vector<int>(q.num_vertices(), 1));

  ZQChart chart = build_chart(dc, -8, 16);
  for (int v = 0; v < chart.tq.num_vertices(); ++v) {
    const ZVertex& z = chart.tq.zvertex(v);
    if (z.level < -2 || z.level > 2) continue;
    int i = q.vertex_index(z.base);
    int img = chart.tq.index_of({q.vertices()[fr.nu[i]], z.level + fr.s[i], false});
    REQUIRE(img >= 0);
    CHECK(chart.objects[img] == dc.fshift(chart.objects[v], 1));
  }
  for (const ZArrow& a : chart.tq.zarrows()) {
    const ZVertex& s = chart.tq.zvertex(a.src);
    const ZVertex& t = chart.tq.zvertex(a.tgt);
    if (s.level < -2 || s.level > 2 || t.level < -2 || t.level > 2) continue;
    int si = q.vertex_index(s.base), ti = q.vertex_index(t.base);
    ZVertex fs{q.vertices()[fr.nu[si]], s.level + fr.s[si], false};
    ZVertex ft{q.vertices()[fr.nu[ti]], t.level + fr.s[ti], false};
    bool found = false;
    for (int b : chart.tq.arrows_from(chart.tq.index_of(fs)))
      if (chart.tq.zvertex(chart.tq.zarrow(b).tgt) == ft) found = true;
    CHECK(found);
  }
}

TEST_CASE("f_invariance of configurations") {
  Quiver a2 = dynkin("A2");
  CHECK(is_f_invariant(Configuration::all(), a2));
  CHECK(is_f_invariant(Configuration::none(), a2));

  // Single tau-orbit of vertex 1: its F image lands on vertex 2.
  CHECK_FALSE(is_f_invariant(Configuration(1, {{"1", 0}}), a2));

  // F orbit closures read off the A2 rule: (1,0) -> (2,2) -> (1,5).
  CHECK(is_f_invariant(Configuration(5, {{"1", 0}, {"2", 2}}), a2));
  CHECK_FALSE(is_f_invariant(Configuration(5, {{"1", 0}, {"2", 1}}), a2));

  // A3: the middle vertex has F(2,p) = (2,p+3), a singleton orbit mod 3.
  Quiver a3 = dynkin("A3");
  CHECK(is_f_invariant(Configuration(3, {{"2", 0}}), a3));
  CHECK_FALSE(is_f_invariant(Configuration(3, {{"1", 0}}), a3));
  CHECK(is_f_invariant(Configuration(6, {{"1", 0}, {"3", 2}}), a3));
}
