#include "orbitcat/derivedcat.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace orbitcat {

DerivedCategory::DerivedCategory(std::shared_ptr<const Quiver> q)
    : q_(std::move(q)), modules_(indecomposables(q_)) {
  const int n = q_->num_vertices(), nm = int(modules_.size());
  proj_vertex_.assign(nm, -1);
  inj_vertex_.assign(nm, -1);
  proj_of_.resize(n);
  inj_of_.resize(n);
  for (int v = 0; v < n; ++v) {
    proj_of_[v] = module_index(projective_rep(q_, v));
    inj_of_[v] = module_index(injective_rep(q_, v));
    proj_vertex_[proj_of_[v]] = v;
    inj_vertex_[inj_of_[v]] = v;
  }
  tau_.assign(nm, -1);
  tau_inv_.assign(nm, -1);
  for (int m = 0; m < nm; ++m) {
    if (auto t = ar_translate(modules_[m])) tau_[m] = module_index(*t);
    if (auto t = ar_translate_inverse(modules_[m])) tau_inv_[m] = module_index(*t);
  }
  hom_.assign(nm, std::vector<int>(nm));
  ext_.assign(nm, std::vector<int>(nm));
  hom_bases_.resize(nm);
  ext_pres_.resize(nm);
  ext_cocycles_.resize(nm);
  for (int i = 0; i < nm; ++i) {
    for (int j = 0; j < nm; ++j) {
      hom_bases_[i].push_back(hom_basis(modules_[i], modules_[j]));
      ext_pres_[i].emplace_back(Ext1Presentation(modules_[i], modules_[j]));
      hom_[i][j] = int(hom_bases_[i][j].size());
      ext_[i][j] = ext_pres_[i][j]->dim();
      std::vector<std::vector<QMat>> cocycles;
      for (int k = 0; k < ext_[i][j]; ++k) cocycles.push_back(ext_pres_[i][j]->basis_cocycle(k));
      ext_cocycles_[i].push_back(std::move(cocycles));
    }
  }
}

int DerivedCategory::module_index(const QuiverRep& m) const {
  std::vector<int> mult = decompose(m, modules_);
  int found = -1, total = 0;
  for (int j = 0; j < int(mult.size()); ++j) {
    total += mult[j];
    if (mult[j] == 1) found = j;
  }
  if (total != 1 || found < 0)
    throw std::invalid_argument("module_index: representation is not indecomposable");
  return found;
}

DIndec DerivedCategory::dtau(DIndec x) const {
  int v = proj_vertex_[x.module];
  if (v >= 0) return {inj_of_[v], x.shift - 1};
  return {tau_[x.module], x.shift};
}

DIndec DerivedCategory::dtau_inverse(DIndec x) const {
  int v = inj_vertex_[x.module];
  if (v >= 0) return {proj_of_[v], x.shift + 1};
  return {tau_inv_[x.module], x.shift};
}

DIndec DerivedCategory::fshift(DIndec x, long l) const {
  for (; l > 0; --l) {
    x = dtau_inverse(x);
    x.shift += 1;
  }
  for (; l < 0; ++l) {
    x.shift -= 1;
    x = dtau(x);
  }
  return x;
}

int DerivedCategory::dhom_dim(DIndec x, DIndec y) const {
  int delta = y.shift - x.shift;
  if (delta == 0) return hom_[x.module][y.module];
  if (delta == 1) return ext_[x.module][y.module];
  return 0;
}

namespace {

std::vector<Rat> flatten_hom(const RepHom& f) {
  std::vector<Rat> out;
  for (const QMat& c : f.components)
    for (int r = 0; r < c.rows(); ++r)
      for (int cc = 0; cc < c.cols(); ++cc) out.push_back(c.at(r, cc));
  return out;
}

}  // namespace

int DerivedCategory::irr_dim(DIndec x, DIndec y) const {
  if (x == y) return 0;  // endomorphism rings are local with radical zero here
  const int radical = dhom_dim(x, y);
  if (radical == 0) return 0;
  const int delta = y.shift - x.shift;
  const QuiverRep &m = modules_[x.module], &n = modules_[y.module];

  if (delta == 0) {
    int width = 0;
    for (int v = 0; v < q_->num_vertices(); ++v) width += m.dims[v] * n.dims[v];
    EchelonBasis span(width);
    for (int z = 0; z < num_modules(); ++z) {
      if (z == x.module || z == y.module) continue;
      for (const RepHom& f : hom_bases_[x.module][z])
        for (const RepHom& g : hom_bases_[z][y.module])
          span.insert(flatten_hom(compose_hom(g, f)));
    }
    return radical - span.rank();
  }

  // delta == 1: factor through objects at either shift.
  const Ext1Presentation& pres = *ext_pres_[x.module][y.module];
  EchelonBasis span(pres.dim());
  for (int z = 0; z < num_modules(); ++z) {
    if (z != x.module)  // hom into Z, then an extension class Z -> Y
      for (const RepHom& f : hom_bases_[x.module][z])
        for (const auto& c : ext_cocycles_[z][y.module])
          span.insert(pres.project(ext_pullback(f, n, c)));
    if (z != y.module)  // an extension class X -> Z, then hom to Y
      for (const auto& c : ext_cocycles_[x.module][z])
        for (const RepHom& g : hom_bases_[z][y.module])
          span.insert(pres.project(ext_pushforward(g, m, c)));
  }
  return radical - span.rank();
}

std::string DerivedCategory::str(DIndec x) const {
  std::ostringstream os;
  os << "([";
  const auto& dims = modules_[x.module].dims;
  for (size_t v = 0; v < dims.size(); ++v) os << (v ? "," : "") << dims[v];
  os << "]," << x.shift << ")";
  return os.str();
}

std::optional<int> ZQChart::find(DIndec x) const {
  for (int i = 0; i < int(objects.size()); ++i)
    if (objects[i] == x) return i;
  return std::nullopt;
}

namespace {

// Slice levels across the underlying tree: each arrow i->j forces
// p0_j = p0_i + step, normalized so the top of the slice sits at level 0.
std::vector<int> slice_levels(const Quiver& q, int step) {
  const int n = q.num_vertices();
  std::vector<int> p0(n, 0);
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int a = 0; a < q.num_arrows(); ++a) {
      int i = q.arrow_src(a), j = q.arrow_tgt(a);
      if (i == v && !seen[j]) {
        p0[j] = p0[v] + step;
        seen[j] = true;
        stack.push_back(j);
      } else if (j == v && !seen[i]) {
        p0[i] = p0[v] - step;
        seen[i] = true;
        stack.push_back(i);
      }
    }
  }
  int top = *std::max_element(p0.begin(), p0.end());
  for (int& p : p0) p -= top;
  return p0;
}

bool chart_valid(const DerivedCategory& dc, const ZQChart& chart) {
  const TranslationQuiver& tq = chart.tq;
  // bijective on the window
  std::set<DIndec> seen;
  for (DIndec x : chart.objects)
    if (!seen.insert(x).second) return false;

  // tau on ZQ matches dtau
  for (int v = 0; v < tq.num_vertices(); ++v) {
    auto t = tq.tau(tq.zvertex(v));
    if (!t) continue;
    if (chart.objects[tq.index_of(*t)] != dc.dtau(chart.objects[v])) return false;
  }

  // arrow multiplicities match irreducible-map dimensions
  for (int v = 0; v < tq.num_vertices(); ++v) {
    for (int w = 0; w < tq.num_vertices(); ++w) {
      int dl = tq.zvertex(w).level - tq.zvertex(v).level;
      if (v == w || dl < 0 || dl > 1) continue;
      int arrows = 0;
      for (int a : tq.arrows_from(v))
        if (tq.zarrow(a).tgt == w) ++arrows;
      if (dc.irr_dim(chart.objects[v], chart.objects[w]) != arrows) return false;
    }
  }
  return true;
}

}  // namespace

ZQChart build_chart(const DerivedCategory& dc, int pmin, int pmax) {
  const Quiver& q = dc.quiver();
  for (int step : {-1, 1}) {
    std::vector<int> p0 = slice_levels(q, step);
    ZQChart chart{TranslationQuiver(q, pmin, pmax, false, Configuration::none()), {}, p0};
    chart.objects.reserve(chart.tq.num_vertices());
    for (int v = 0; v < chart.tq.num_vertices(); ++v) {
      const ZVertex& z = chart.tq.zvertex(v);
      int i = q.vertex_index(z.base);
      DIndec x{dc.projective_at(i), 0};
      for (int m = z.level - p0[i]; m > 0; --m) x = dc.dtau_inverse(x);
      for (int m = z.level - p0[i]; m < 0; ++m) x = dc.dtau(x);
      chart.objects.push_back(x);
    }
    if (chart_valid(dc, chart)) return chart;
  }
  throw std::runtime_error("chart validation failed");
}

std::string chart_hom_csv(const DerivedCategory& dc, const ZQChart& chart) {
  std::ostringstream os;
  os << "source,target,dim\n";
  for (int v = 0; v < chart.tq.num_vertices(); ++v)
    for (int w = 0; w < chart.tq.num_vertices(); ++w)
      os << chart.tq.zvertex(v).str() << "," << chart.tq.zvertex(w).str() << ","
         << dc.dhom_dim(chart.objects[v], chart.objects[w]) << "\n";
  return os.str();
}

std::string chart_dot(const DerivedCategory& dc, const ZQChart& chart) {
  std::ostringstream os;
  os << "digraph chart {\n  rankdir=LR;\n";
  for (int v = 0; v < chart.tq.num_vertices(); ++v)
    os << "  \"" << chart.tq.zvertex(v).str() << "\" [label=\""
       << chart.tq.zvertex(v).str() << "\\n" << dc.str(chart.objects[v]) << "\"];\n";
  for (const ZArrow& a : chart.tq.zarrows())
    os << "  \"" << chart.tq.zvertex(a.src).str() << "\" -> \""
       << chart.tq.zvertex(a.tgt).str() << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace orbitcat
