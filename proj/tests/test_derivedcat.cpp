#include <memory>
#include <set>

#include "doctest.h"
#include "orbitcat/derivedcat.hpp"
#include "orbitcat/meshpath.hpp"

using namespace orbitcat;

namespace {

std::shared_ptr<const Quiver> dynkin(const char* name) {
  return std::make_shared<const Quiver>(dynkin_quiver(*parse_dynkin(name)));
}

DIndec obj_at(const DerivedCategory& dc, const ZQChart& chart, const char* vertex) {
  int idx = chart.tq.index_of(*parse_zvertex(vertex));
  REQUIRE(idx >= 0);
  (void)dc;
  return chart.objects[idx];
}

}  // namespace

TEST_CASE("derived category tables on A2") {
  auto q = dynkin("A2");
  DerivedCategory dc(q);
  REQUIRE(dc.num_modules() == 3);

  int p1 = dc.projective_at(0), p2 = dc.projective_at(1);
  int i1 = dc.injective_at(0), i2 = dc.injective_at(1);
  int s1 = dc.module_index(simple_rep(q, 0));
  CHECK(i1 == s1);          // I1 = S1
  CHECK(i2 == p1);          // I2 = P1
  CHECK(dc.is_projective(p1));
  CHECK_FALSE(dc.is_projective(s1));
  CHECK(dc.is_injective(s1));
  CHECK_THROWS(dc.module_index(direct_sum(simple_rep(q, 0), simple_rep(q, 0))));

  // tau rules
  CHECK(dc.dtau({s1, 0}) == DIndec{p2, 0});
  CHECK(dc.dtau({p1, 0}) == DIndec{i1, -1});
  CHECK(dc.dtau({p2, 5}) == DIndec{i2, 4});
  CHECK(dc.dtau_inverse(dc.dtau({s1, 3})) == DIndec{s1, 3});
  for (int m = 0; m < dc.num_modules(); ++m) {
    DIndec x{m, 0};
    CHECK(dc.dtau_inverse(dc.dtau(x)) == x);
    CHECK(dc.dtau(dc.dtau_inverse(x)) == x);
  }

  // hom dimensions by shift offset
  CHECK(dc.dhom_dim({p2, 0}, {p1, 0}) == 1);
  CHECK(dc.dhom_dim({p1, 0}, {p2, 0}) == 0);
  CHECK(dc.dhom_dim({s1, 0}, {p2, 1}) == 1);  // Ext1(S1, P2)
  CHECK(dc.dhom_dim({s1, 0}, {p1, 1}) == 0);
  for (int m = 0; m < dc.num_modules(); ++m) {
    CHECK(dc.dhom_dim({m, 0}, {m, 0}) == 1);
    for (int n = 0; n < dc.num_modules(); ++n) {
      CHECK(dc.dhom_dim({m, 0}, {n, 2}) == 0);
      CHECK(dc.dhom_dim({m, 0}, {n, -1}) == 0);
    }
  }

  // fshift basics
  DIndec x{s1, 0};
  CHECK(dc.fshift(x, 0) == x);
  CHECK(dc.fshift(dc.fshift(x, 1), -1) == x);
  CHECK(dc.fshift(dc.fshift(x, -2), 2) == x);
  CHECK(dc.fshift({p1, 0}, 1) == DIndec{p2, 2});  // Sigma tau^{-1} P1
}

TEST_CASE("A2 chart knits the expected objects") {
  auto q = dynkin("A2");
  DerivedCategory dc(q);
  ZQChart chart = build_chart(dc, -2, 2);

  int p1 = dc.projective_at(0), p2 = dc.projective_at(1);
  int s1 = dc.module_index(simple_rep(q, 0));
  CHECK(obj_at(dc, chart, "(1,0)") == DIndec{p1, 0});
  CHECK(obj_at(dc, chart, "(2,-1)") == DIndec{p2, 0});
  CHECK(obj_at(dc, chart, "(2,0)") == DIndec{s1, 0});
  CHECK(obj_at(dc, chart, "(1,1)") == DIndec{p2, 1});
  CHECK(obj_at(dc, chart, "(2,1)") == DIndec{p1, 1});
  CHECK(obj_at(dc, chart, "(1,2)") == DIndec{s1, 1});
  CHECK(obj_at(dc, chart, "(1,-1)") == DIndec{s1, -1});
  CHECK(obj_at(dc, chart, "(2,-2)") == DIndec{p1, -1});

  // F in chart coordinates: (1,p) -> (2,p+2), (2,p) -> (1,p+3)
  for (int v = 0; v < chart.tq.num_vertices(); ++v) {
    const ZVertex& z = chart.tq.zvertex(v);
    ZVertex img{z.base == "1" ? "2" : "1", z.level + (z.base == "1" ? 2 : 3), false};
    if (!chart.tq.has_vertex(img)) continue;
    CHECK(chart.objects[chart.tq.index_of(img)] == dc.fshift(chart.objects[v], 1));
  }

  // spec-sized window: 8 vertices, bijective
  ZQChart small = build_chart(dc, 0, 3);
  CHECK(small.tq.num_vertices() == 8);
  std::set<DIndec> seen(small.objects.begin(), small.objects.end());
  CHECK(int(seen.size()) == 8);
  CHECK(small.find(DIndec{p1, 0}).has_value());
  CHECK_FALSE(small.find(DIndec{p2, 0}).has_value());  // lives at (2,-1)
}

TEST_CASE("chart tau-compatibility and irreducible multiplicities") {
  for (const char* name : {"A2", "A3", "D4"}) {
    CAPTURE(name);
    auto q = dynkin(name);
    DerivedCategory dc(q);
    ZQChart chart = build_chart(dc, -3, 3);

    for (int v = 0; v < chart.tq.num_vertices(); ++v) {
      auto t = chart.tq.tau(chart.tq.zvertex(v));
      if (!t) continue;
      CHECK(chart.objects[chart.tq.index_of(*t)] == dc.dtau(chart.objects[v]));
    }

    // every window arrow carries exactly one irreducible map
    for (const ZArrow& a : chart.tq.zarrows())
      CHECK(dc.irr_dim(chart.objects[a.src], chart.objects[a.tgt]) == 1);
  }
}

TEST_CASE("chart hom dims equal mesh category hom dims") {
  for (const char* name : {"A2", "A3"}) {
    CAPTURE(name);
    auto q = dynkin(name);
    DerivedCategory dc(q);
    const int pmin = -3, pmax = 3;
    ZQChart chart = build_chart(dc, pmin, pmax);
    PresentedCategory mesh(TranslationQuiver(*q, pmin, pmax, false, Configuration::none()));

    int pairs = 0;
    for (int v = 0; v < chart.tq.num_vertices(); ++v)
      for (int w = 0; w < chart.tq.num_vertices(); ++w) {
        const ZVertex &zv = chart.tq.zvertex(v), &zw = chart.tq.zvertex(w);
        if (!mesh.window_stable(zv, zw, 2)) continue;
        ++pairs;
        CHECK(mesh.hom_dim(zv, zw) == dc.dhom_dim(chart.objects[v], chart.objects[w]));
      }
    CHECK(pairs > 50);
  }
}

TEST_CASE("euler identity, F-invariance and graded vanishing") {
  for (const char* name : {"A2", "A3"}) {
    CAPTURE(name);
    auto q = dynkin(name);
    DerivedCategory dc(q);
    for (int m = 0; m < dc.num_modules(); ++m)
      for (int n = 0; n < dc.num_modules(); ++n) {
        DIndec x{m, 0}, y{n, 0};
        long lhs = dc.dhom_dim(x, y) - dc.dhom_dim(x, {n, 1});
        CHECK(lhs == euler_form(*q, dc.modules()[m].dims, dc.modules()[n].dims));

        for (long l : {-3L, -1L, 1L, 2L})
          CHECK(dc.dhom_dim(x, y) == dc.dhom_dim(dc.fshift(x, l), dc.fshift(y, l)));

        // graded hom support is finite with bound 1 on module pairs
        for (long l = -6; l <= 6; ++l) {
          if (l >= 0 && l <= 1) continue;
          CHECK(dc.dhom_dim(x, dc.fshift(y, l)) == 0);
        }
      }
  }
}

TEST_CASE("chart exports") {
  auto q = dynkin("A2");
  DerivedCategory dc(q);
  ZQChart chart = build_chart(dc, 0, 1);
  std::string csv = chart_hom_csv(dc, chart);
  CHECK(csv.find("source,target,dim") == 0);
  CHECK(csv.find("(1,0),(2,0),1") != std::string::npos);
  std::string dot = chart_dot(dc, chart);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("([1,1],0)") != std::string::npos);
  CHECK(dot.find("\"(1,0)\" -> \"(2,0)\"") != std::string::npos);
}
