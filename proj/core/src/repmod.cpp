#include "orbitcat/repmod.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace orbitcat {

namespace {

// All paths of an acyclic quiver, DFS in arrow order (empty path first).
struct PathTable {
  // seqs[s][t]: arrow sequences s -> t; index[s][t]: sequence -> position
  std::vector<std::vector<std::vector<std::vector<int>>>> seqs;
  std::vector<std::vector<std::map<std::vector<int>, int>>> index;
};

PathTable path_table(const Quiver& q) {
  const int n = q.num_vertices();
  PathTable pt;
  pt.seqs.assign(n, std::vector<std::vector<std::vector<int>>>(n));
  pt.index.assign(n, std::vector<std::map<std::vector<int>, int>>(n));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack;
    std::function<void(int)> walk = [&](int v) {
      pt.index[s][v][stack] = int(pt.seqs[s][v].size());
      pt.seqs[s][v].push_back(stack);
      for (int a : q.arrows_from(v)) {
        stack.push_back(a);
        walk(q.arrow_tgt(a));
        stack.pop_back();
      }
    };
    walk(s);
  }
  return pt;
}

void check_same_quiver(const QuiverRep& a, const QuiverRep& b, const char* who) {
  if (!(a.q == b.q || *a.q == *b.q)) throw std::invalid_argument(std::string(who) + ": quiver mismatch");
}

QMat path_action(const QuiverRep& m, int src, const std::vector<int>& arrows) {
  QMat x = QMat::identity(m.dims[src]);
  for (int a : arrows) x = m.maps[a] * x;
  return x;
}

QMat from_columns(int rows, const std::vector<std::vector<Rat>>& cols) {
  QMat m(rows, int(cols.size()));
  for (int j = 0; j < int(cols.size()); ++j) m.set_col(j, cols[j]);
  return m;
}

// Vertexwise subspace bases (columns) closed under the action: the subrep
// with the induced maps.
QuiverRep subrep_from_bases(const QuiverRep& x, const std::vector<QMat>& bases) {
  QuiverRep s;
  s.q = x.q;
  s.dims.resize(x.q->num_vertices());
  for (int v = 0; v < x.q->num_vertices(); ++v) s.dims[v] = bases[v].cols();
  s.maps.resize(x.q->num_arrows());
  for (int a = 0; a < x.q->num_arrows(); ++a) {
    int i = x.q->arrow_src(a), j = x.q->arrow_tgt(a);
    auto sol = solve_matrix(bases[j], x.maps[a] * bases[i]);
    if (!sol) throw std::logic_error("subrep_from_bases: subspace not closed under action");
    s.maps[a] = std::move(*sol);
  }
  return s;
}

}  // namespace

int QuiverRep::total_dim() const {
  int t = 0;
  for (int d : dims) t += d;
  return t;
}

QuiverRep make_rep(std::shared_ptr<const Quiver> q, std::vector<int> dims,
                   std::vector<QMat> maps) {
  if (int(dims.size()) != q->num_vertices() || int(maps.size()) != q->num_arrows())
    throw std::invalid_argument("make_rep: size mismatch");
  for (int a = 0; a < q->num_arrows(); ++a) {
    if (maps[a].rows() != dims[q->arrow_tgt(a)] || maps[a].cols() != dims[q->arrow_src(a)])
      throw std::invalid_argument("make_rep: map shape mismatch at arrow " + q->arrows()[a].id);
  }
  return QuiverRep{std::move(q), std::move(dims), std::move(maps)};
}

QuiverRep zero_rep(std::shared_ptr<const Quiver> q) {
  std::vector<int> dims(q->num_vertices(), 0);
  std::vector<QMat> maps(q->num_arrows(), QMat(0, 0));
  return QuiverRep{std::move(q), std::move(dims), std::move(maps)};
}

QuiverRep simple_rep(std::shared_ptr<const Quiver> q, int vertex) {
  QuiverRep m = zero_rep(q);
  m.dims[vertex] = 1;
  for (int a = 0; a < m.q->num_arrows(); ++a)
    m.maps[a] = QMat(m.dims[m.q->arrow_tgt(a)], m.dims[m.q->arrow_src(a)]);
  return m;
}

QuiverRep projective_rep(std::shared_ptr<const Quiver> q, int vertex) {
  PathTable pt = path_table(*q);
  QuiverRep m;
  m.q = q;
  m.dims.resize(q->num_vertices());
  for (int v = 0; v < q->num_vertices(); ++v) m.dims[v] = int(pt.seqs[vertex][v].size());
  m.maps.resize(q->num_arrows());
  for (int a = 0; a < q->num_arrows(); ++a) {
    int i = q->arrow_src(a), j = q->arrow_tgt(a);
    QMat map(m.dims[j], m.dims[i]);
    for (int c = 0; c < m.dims[i]; ++c) {
      std::vector<int> ext = pt.seqs[vertex][i][c];
      ext.push_back(a);
      map.at(pt.index[vertex][j].at(ext), c) = 1;
    }
    m.maps[a] = std::move(map);
  }
  return m;
}

QuiverRep injective_rep(std::shared_ptr<const Quiver> q, int vertex) {
  auto op = std::make_shared<const Quiver>(q->opposite());
  return dual_rep(projective_rep(op, vertex), q);
}

QuiverRep direct_sum(const QuiverRep& a, const QuiverRep& b) {
  check_same_quiver(a, b, "direct_sum");
  QuiverRep s;
  s.q = a.q;
  s.dims.resize(a.dims.size());
  for (size_t v = 0; v < a.dims.size(); ++v) s.dims[v] = a.dims[v] + b.dims[v];
  s.maps.resize(a.maps.size());
  for (size_t k = 0; k < a.maps.size(); ++k) s.maps[k] = block_diag({a.maps[k], b.maps[k]});
  return s;
}

QuiverRep dual_rep(const QuiverRep& m, std::shared_ptr<const Quiver> opposite) {
  if (!(*opposite == m.q->opposite()))
    throw std::invalid_argument("dual_rep: quiver is not the opposite");
  QuiverRep d;
  d.q = std::move(opposite);
  d.dims = m.dims;
  d.maps.resize(m.maps.size());
  for (size_t a = 0; a < m.maps.size(); ++a) d.maps[a] = m.maps[a].transpose();
  return d;
}

bool hom_commutes(const RepHom& f) {
  const Quiver& q = *f.source.q;
  for (int a = 0; a < q.num_arrows(); ++a) {
    int i = q.arrow_src(a), j = q.arrow_tgt(a);
    if (!(f.components[j] * f.source.maps[a] == f.target.maps[a] * f.components[i]))
      return false;
  }
  return true;
}

RepHom identity_hom(const QuiverRep& m) {
  RepHom f{m, m, {}};
  for (int d : m.dims) f.components.push_back(QMat::identity(d));
  return f;
}

RepHom compose_hom(const RepHom& f, const RepHom& g) {
  RepHom h{g.source, f.target, {}};
  for (size_t v = 0; v < f.components.size(); ++v)
    h.components.push_back(f.components[v] * g.components[v]);
  return h;
}

namespace {

struct HomIndexing {
  std::vector<int> dom_off, cod_off;
  int dom = 0, cod = 0;
};

HomIndexing hom_indexing(const QuiverRep& m, const QuiverRep& n) {
  const Quiver& q = *m.q;
  HomIndexing ix;
  ix.dom_off.resize(q.num_vertices());
  for (int v = 0; v < q.num_vertices(); ++v) {
    ix.dom_off[v] = ix.dom;
    ix.dom += n.dims[v] * m.dims[v];
  }
  ix.cod_off.resize(q.num_arrows());
  for (int a = 0; a < q.num_arrows(); ++a) {
    ix.cod_off[a] = ix.cod;
    ix.cod += n.dims[q.arrow_tgt(a)] * m.dims[q.arrow_src(a)];
  }
  return ix;
}

}  // namespace

QMat hom_ext_matrix(const QuiverRep& m, const QuiverRep& n) {
  check_same_quiver(m, n, "hom_ext_matrix");
  const Quiver& q = *m.q;
  HomIndexing ix = hom_indexing(m, n);
  QMat phi(ix.cod, ix.dom);
  for (int a = 0; a < q.num_arrows(); ++a) {
    int i = q.arrow_src(a), j = q.arrow_tgt(a);
    // (f_j M_a)[r][c'] depends on f_j[r][k] with coefficient M_a[k][c'].
    for (int r = 0; r < n.dims[j]; ++r)
      for (int k = 0; k < m.dims[j]; ++k)
        for (int c = 0; c < m.dims[i]; ++c)
          phi.at(ix.cod_off[a] + r * m.dims[i] + c, ix.dom_off[j] + r * m.dims[j] + k) +=
              m.maps[a].at(k, c);
    // -(N_a f_i)[r][c'] depends on f_i[k][c'] with coefficient -N_a[r][k].
    for (int r = 0; r < n.dims[j]; ++r)
      for (int k = 0; k < n.dims[i]; ++k)
        for (int c = 0; c < m.dims[i]; ++c)
          phi.at(ix.cod_off[a] + r * m.dims[i] + c, ix.dom_off[i] + k * m.dims[i] + c) -=
              n.maps[a].at(r, k);
  }
  return phi;
}

int hom_dim(const QuiverRep& m, const QuiverRep& n) {
  QMat phi = hom_ext_matrix(m, n);
  return phi.cols() - rank(phi);
}

std::vector<RepHom> hom_basis(const QuiverRep& m, const QuiverRep& n) {
  const Quiver& q = *m.q;
  HomIndexing ix = hom_indexing(m, n);
  std::vector<RepHom> out;
  for (const auto& k : kernel_basis(hom_ext_matrix(m, n))) {
    RepHom f{m, n, {}};
    for (int v = 0; v < q.num_vertices(); ++v) {
      QMat comp(n.dims[v], m.dims[v]);
      for (int r = 0; r < n.dims[v]; ++r)
        for (int c = 0; c < m.dims[v]; ++c) comp.at(r, c) = k[ix.dom_off[v] + r * m.dims[v] + c];
      f.components.push_back(std::move(comp));
    }
    if (!hom_commutes(f)) throw std::logic_error("hom_basis: non-commuting kernel vector");
    out.push_back(std::move(f));
  }
  return out;
}

int ext1_dim(const QuiverRep& m, const QuiverRep& n) {
  return cokernel_dim(hom_ext_matrix(m, n));
}

long euler_form(const Quiver& q, const std::vector<int>& d, const std::vector<int>& e) {
  long s = 0;
  for (int v = 0; v < q.num_vertices(); ++v) s += long(d[v]) * e[v];
  for (int a = 0; a < q.num_arrows(); ++a) s -= long(d[q.arrow_src(a)]) * e[q.arrow_tgt(a)];
  return s;
}

Quiver reflect_quiver(const Quiver& q, int v) {
  std::vector<Arrow> as = q.arrows();
  const std::string& id = q.vertices()[v];
  for (Arrow& a : as)
    if (a.src == id || a.tgt == id) std::swap(a.src, a.tgt);
  return Quiver(q.vertices(), std::move(as));
}

QuiverRep reflect_plus(const QuiverRep& m, int v, std::shared_ptr<const Quiver> reflected) {
  const Quiver& q = *m.q;
  if (!q.arrows_from(v).empty()) throw std::invalid_argument("reflect_plus: not a sink");
  const auto& in = q.arrows_to(v);
  std::vector<int> off(in.size() + 1, 0);
  for (size_t k = 0; k < in.size(); ++k) off[k + 1] = off[k] + m.dims[q.arrow_src(in[k])];

  QMat theta(m.dims[v], off.back());
  for (size_t k = 0; k < in.size(); ++k) theta.paste(0, off[k], m.maps[in[k]]);
  QMat kb = from_columns(off.back(), kernel_basis(theta));

  QuiverRep r;
  r.q = std::move(reflected);
  r.dims = m.dims;
  r.dims[v] = kb.cols();
  r.maps.assign(q.num_arrows(), QMat(0, 0));
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto it = std::find(in.begin(), in.end(), a);
    if (it == in.end()) {
      r.maps[a] = m.maps[a];
      continue;
    }
    size_t k = it - in.begin();
    // Reversed arrow v -> src(a): project the kernel onto its k-th block.
    QMat proj(m.dims[q.arrow_src(a)], kb.cols());
    for (int rr = 0; rr < proj.rows(); ++rr)
      for (int cc = 0; cc < proj.cols(); ++cc) proj.at(rr, cc) = kb.at(off[k] + rr, cc);
    r.maps[a] = std::move(proj);
  }
  return r;
}

QuiverRep reflect_minus(const QuiverRep& m, int v, std::shared_ptr<const Quiver> reflected) {
  const Quiver& q = *m.q;
  if (!q.arrows_to(v).empty()) throw std::invalid_argument("reflect_minus: not a source");
  const auto& out = q.arrows_from(v);
  std::vector<int> off(out.size() + 1, 0);
  for (size_t k = 0; k < out.size(); ++k) off[k + 1] = off[k] + m.dims[q.arrow_tgt(out[k])];
  const int total = off.back();

  EchelonBasis image(total);
  for (int c = 0; c < m.dims[v]; ++c) {
    std::vector<Rat> col(total, Rat(0));
    for (size_t k = 0; k < out.size(); ++k) {
      const QMat& mp = m.maps[out[k]];
      for (int rr = 0; rr < mp.rows(); ++rr) col[off[k] + rr] = mp.at(rr, c);
    }
    image.insert(std::move(col));
  }
  std::vector<int> free = image.free_positions();

  QuiverRep r;
  r.q = std::move(reflected);
  r.dims = m.dims;
  r.dims[v] = int(free.size());
  r.maps.assign(q.num_arrows(), QMat(0, 0));
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto it = std::find(out.begin(), out.end(), a);
    if (it == out.end()) {
      r.maps[a] = m.maps[a];
      continue;
    }
    size_t k = it - out.begin();
    // Reversed arrow tgt(a) -> v: include into the sum, project to cokernel.
    QMat pr(int(free.size()), m.dims[q.arrow_tgt(a)]);
    for (int c = 0; c < m.dims[q.arrow_tgt(a)]; ++c) {
      std::vector<Rat> e(total, Rat(0));
      e[off[k] + c] = 1;
      auto red = image.reduce(std::move(e));
      for (size_t j = 0; j < free.size(); ++j) pr.at(int(j), c) = red[free[j]];
    }
    r.maps[a] = std::move(pr);
  }
  return r;
}

std::vector<QuiverRep> indecomposables(std::shared_ptr<const Quiver> q) {
  const int n = q->num_vertices();
  if (n == 0) return {};
  auto type = classify_dynkin(*q);
  if (!type) throw std::invalid_argument("indecomposables: quiver is not Dynkin");

  // One full sweep of source reflections is the Coxeter functor computing
  // the inverse translate; it kills exactly the injectives. Orbits seeded
  // at distinct projectives are disjoint and jointly exhaust the
  // indecomposables in finite type.
  const std::vector<int> topo = q->topo_order();
  auto coxeter_minus = [&](QuiverRep x) {
    for (int k = 0; k < n; ++k) {
      auto refl = std::make_shared<const Quiver>(reflect_quiver(*x.q, topo[k]));
      x = reflect_minus(x, topo[k], refl);
    }
    x.q = q;  // double toggle restored the original orientation
    return x;
  };

  std::vector<QuiverRep> out;
  const int expected = positive_root_count(*type);
  for (int i = 0; i < n; ++i) {
    QuiverRep x = projective_rep(q, i);
    for (int guard = 0; !x.is_zero(); ++guard) {
      if (guard > expected) throw std::logic_error("indecomposables: orbit does not terminate");
      out.push_back(x);
      x = coxeter_minus(std::move(x));
    }
  }
  std::set<std::vector<int>> seen;
  for (const auto& m : out)
    if (!seen.insert(m.dims).second)
      throw std::logic_error("indecomposables: duplicate dimension vector");
  if (int(out.size()) != expected) throw std::logic_error("indecomposables: wrong count");
  return out;
}

std::vector<int> top_multiplicities(const QuiverRep& m) {
  const Quiver& q = *m.q;
  std::vector<int> t(q.num_vertices());
  for (int v = 0; v < q.num_vertices(); ++v) {
    EchelonBasis rad(m.dims[v]);
    for (int a : q.arrows_to(v))
      for (int c = 0; c < m.maps[a].cols(); ++c) rad.insert(m.maps[a].col(c));
    t[v] = m.dims[v] - rad.rank();
  }
  return t;
}

namespace {

struct Cover {
  QuiverRep p;                 // direct sum of projectives
  RepHom onto;                 // p ->> m
  std::vector<int> gen_vertices;
  std::vector<int> block_off_at_gen;  // offset of each summand inside p at its own vertex
};

// Projective cover built from a basis of the top.
Cover projective_cover(const QuiverRep& m) {
  const Quiver& q = *m.q;
  PathTable pt = path_table(q);

  Cover cv;
  std::vector<std::vector<Rat>> gens;  // generator vector in m at gen_vertices[g]
  for (int v = 0; v < q.num_vertices(); ++v) {
    EchelonBasis rad(m.dims[v]);
    for (int a : q.arrows_to(v))
      for (int c = 0; c < m.maps[a].cols(); ++c) rad.insert(m.maps[a].col(c));
    for (int f : rad.free_positions()) {
      std::vector<Rat> e(m.dims[v], Rat(0));
      e[f] = 1;
      cv.gen_vertices.push_back(v);
      gens.push_back(std::move(e));
    }
  }

  // Assemble P = (+)_g P_{vertex(g)} and the covering map.
  const int ng = int(cv.gen_vertices.size());
  cv.p.q = m.q;
  cv.p.dims.assign(q.num_vertices(), 0);
  std::vector<std::vector<int>> off(ng, std::vector<int>(q.num_vertices()));
  for (int g = 0; g < ng; ++g)
    for (int v = 0; v < q.num_vertices(); ++v) {
      off[g][v] = cv.p.dims[v];
      cv.p.dims[v] += int(pt.seqs[cv.gen_vertices[g]][v].size());
    }
  cv.block_off_at_gen.resize(ng);
  for (int g = 0; g < ng; ++g) cv.block_off_at_gen[g] = off[g][cv.gen_vertices[g]];

  cv.p.maps.assign(q.num_arrows(), QMat(0, 0));
  for (int a = 0; a < q.num_arrows(); ++a) {
    int i = q.arrow_src(a), j = q.arrow_tgt(a);
    QMat map(cv.p.dims[j], cv.p.dims[i]);
    for (int g = 0; g < ng; ++g) {
      const int s = cv.gen_vertices[g];
      for (int c = 0; c < int(pt.seqs[s][i].size()); ++c) {
        std::vector<int> ext = pt.seqs[s][i][c];
        ext.push_back(a);
        map.at(off[g][j] + pt.index[s][j].at(ext), off[g][i] + c) = 1;
      }
    }
    cv.p.maps[a] = std::move(map);
  }

  cv.onto.source = cv.p;
  cv.onto.target = m;
  for (int v = 0; v < q.num_vertices(); ++v) {
    QMat comp(m.dims[v], cv.p.dims[v]);
    for (int g = 0; g < ng; ++g) {
      const int s = cv.gen_vertices[g];
      for (int c = 0; c < int(pt.seqs[s][v].size()); ++c) {
        auto img = path_action(m, s, pt.seqs[s][v][c]).apply(gens[g]);
        for (int r = 0; r < m.dims[v]; ++r) comp.at(r, off[g][v] + c) = img[r];
      }
    }
    cv.onto.components.push_back(std::move(comp));
  }
  if (!hom_commutes(cv.onto)) throw std::logic_error("projective_cover: cover does not commute");
  for (int v = 0; v < q.num_vertices(); ++v)
    if (rank(cv.onto.components[v]) != m.dims[v])
      throw std::logic_error("projective_cover: not onto");
  return cv;
}

}  // namespace

Presentation minimal_projective_presentation(const QuiverRep& m) {
  const Quiver& q = *m.q;
  Cover c0 = projective_cover(m);

  // Kernel subrepresentation of the cover.
  std::vector<QMat> kb(q.num_vertices(), QMat(0, 0));
  for (int v = 0; v < q.num_vertices(); ++v)
    kb[v] = from_columns(c0.p.dims[v], kernel_basis(c0.onto.components[v]));
  QuiverRep k = subrep_from_bases(c0.p, kb);

  Cover c1 = projective_cover(k);

  Presentation pr;
  pr.p0 = c0.p;
  pr.cover = c0.onto;
  pr.p1 = c1.p;
  // phi = (kernel inclusion) o (cover of the kernel)
  RepHom incl{k, c0.p, kb};
  pr.phi = compose_hom(incl, c1.onto);
  if (!hom_commutes(pr.phi)) throw std::logic_error("presentation: phi does not commute");
  return pr;
}

namespace {

// Generator positions of a projective cover: p is a sum of P_v blocks; the
// block generator is the empty path, first in its block at vertex v.
struct ProjSum {
  std::vector<int> vertices;
  std::vector<int> gen_pos;  // position inside p.dims[vertices[g]]
};

ProjSum decompose_cover(const QuiverRep& p, const Quiver& q) {
  // Reconstruct summand structure from top multiplicities and path counts.
  PathTable pt = path_table(q);
  ProjSum ps;
  std::vector<int> t = top_multiplicities(p);
  for (int v = 0; v < q.num_vertices(); ++v)
    for (int c = 0; c < t[v]; ++c) ps.vertices.push_back(v);
  // Blocks were laid out generator-major in projective_cover: recompute.
  std::vector<int> cursor(q.num_vertices(), 0);
  for (int g = 0; g < int(ps.vertices.size()); ++g) {
    ps.gen_pos.push_back(cursor[ps.vertices[g]]);
    for (int v = 0; v < q.num_vertices(); ++v)
      cursor[v] += int(pt.seqs[ps.vertices[g]][v].size());
  }
  return ps;
}

}  // namespace

std::optional<QuiverRep> ar_translate(const QuiverRep& m) {
  if (m.is_zero()) return std::nullopt;
  const Quiver& q = *m.q;
  Presentation pr = minimal_projective_presentation(m);
  if (pr.p1.is_zero()) return std::nullopt;  // projective

  PathTable pt = path_table(q);
  ProjSum s0 = decompose_cover(pr.p0, q);
  ProjSum s1 = decompose_cover(pr.p1, q);

  // Path coefficients of phi: block (s,t) is sum_pi c_pi (map of path pi),
  // read off the image of the t-th generator.
  // nu(pi): I_{b_t} -> I_{a_s} at vertex l sends the dual basis so that its
  // matrix entry [w][w.pi] is 1 for w: l ~> a_s.
  const int ns = int(s0.vertices.size()), nt = int(s1.vertices.size());

  // Injective block layout at each vertex.
  auto inj_dims = [&](const ProjSum& ps, int l) {
    std::vector<int> d;
    for (int g = 0; g < int(ps.vertices.size()); ++g)
      d.push_back(int(pt.seqs[l][ps.vertices[g]].size()));
    return d;
  };

  // nu(P1) and nu(P0) as explicit representations (sums of injectives).
  auto build_inj_sum = [&](const ProjSum& ps) {
    QuiverRep r = zero_rep(m.q);
    for (int v : ps.vertices) r = direct_sum(r, injective_rep(m.q, v));
    return r;
  };
  QuiverRep nu1 = build_inj_sum(s1), nu0 = build_inj_sum(s0);

  // Assemble nu(phi) vertexwise.
  std::vector<QMat> nphi(q.num_vertices());
  for (int l = 0; l < q.num_vertices(); ++l) {
    std::vector<int> rd = inj_dims(s0, l), cd = inj_dims(s1, l);
    std::vector<int> roff(ns + 1, 0), coff(nt + 1, 0);
    for (int i = 0; i < ns; ++i) roff[i + 1] = roff[i] + rd[i];
    for (int i = 0; i < nt; ++i) coff[i + 1] = coff[i] + cd[i];
    QMat big(roff[ns], coff[nt]);
    for (int t = 0; t < nt; ++t) {
      const int bt = s1.vertices[t];
      // Image of the t-th generator under phi at vertex bt.
      std::vector<Rat> gen(pr.p1.dims[bt], Rat(0));
      gen[s1.gen_pos[t] + 0] = 1;  // empty path is first in its block
      auto img = pr.phi.components[bt].apply(gen);
      for (int s = 0; s < ns; ++s) {
        const int as = s0.vertices[s];
        // Coefficients over paths as ~> bt sit in block s of p0 at vertex bt.
        int base = 0;
        for (int g = 0; g < s; ++g) base += int(pt.seqs[s0.vertices[g]][bt].size());
        const auto& pis = pt.seqs[as][bt];
        for (int pi = 0; pi < int(pis.size()); ++pi) {
          const Rat& c = img[base + pi];
          if (c == 0) continue;
          // Entry [w][w.pi] += c for every w: l ~> as with w.pi: l ~> bt.
          const auto& ws = pt.seqs[l][as];
          for (int w = 0; w < int(ws.size()); ++w) {
            std::vector<int> wpi = ws[w];
            wpi.insert(wpi.end(), pis[pi].begin(), pis[pi].end());
            big.at(roff[s] + w, coff[t] + pt.index[l][bt].at(wpi)) += c;
          }
        }
      }
    }
    nphi[l] = std::move(big);
  }

  RepHom nmap{nu1, nu0, nphi};
  if (!hom_commutes(nmap)) throw std::logic_error("ar_translate: nu(phi) does not commute");

  // tau M = ker(nu phi) as a subrepresentation of nu(P1).
  std::vector<QMat> kb(q.num_vertices(), QMat(0, 0));
  for (int l = 0; l < q.num_vertices(); ++l)
    kb[l] = from_columns(nu1.dims[l], kernel_basis(nphi[l]));
  return subrep_from_bases(nu1, kb);
}

std::optional<QuiverRep> ar_translate_inverse(const QuiverRep& m) {
  auto op = std::make_shared<const Quiver>(m.q->opposite());
  auto t = ar_translate(dual_rep(m, op));
  if (!t) return std::nullopt;
  return dual_rep(*t, m.q);
}

std::vector<int> decompose(const QuiverRep& m, const std::vector<QuiverRep>& indecs) {
  const int n = int(indecs.size());
  QMat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h.at(i, j) = hom_dim(indecs[i], indecs[j]);
  std::vector<Rat> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = hom_dim(indecs[i], m);
  auto sol = solve(h, rhs);
  if (!sol) throw std::logic_error("decompose: hom system inconsistent");
  std::vector<int> mult(n);
  std::vector<long> check(m.dims.size(), 0);
  for (int j = 0; j < n; ++j) {
    if ((*sol)[j].get_den() != 1 || (*sol)[j] < 0)
      throw std::logic_error("decompose: non-integral multiplicity");
    mult[j] = int((*sol)[j].get_num().get_si());
    for (size_t v = 0; v < check.size(); ++v) check[v] += long(mult[j]) * indecs[j].dims[v];
  }
  for (size_t v = 0; v < check.size(); ++v)
    if (check[v] != m.dims[v]) throw std::logic_error("decompose: dimension vector mismatch");
  return mult;
}

bool is_isomorphic(const QuiverRep& a, const QuiverRep& b,
                   const std::vector<QuiverRep>& indecs) {
  if (a.dims != b.dims) return false;
  return decompose(a, indecs) == decompose(b, indecs);
}

Ext1Presentation::Ext1Presentation(const QuiverRep& m, const QuiverRep& n)
    : m_(m), n_(n), image_(0) {
  QMat phi = hom_ext_matrix(m, n);
  image_ = EchelonBasis(phi.rows());
  for (int c = 0; c < phi.cols(); ++c) image_.insert(phi.col(c));
  free_ = image_.free_positions();
  const Quiver& q = *m.q;
  offsets_.assign(q.num_arrows() + 1, 0);
  for (int a = 0; a < q.num_arrows(); ++a)
    offsets_[a + 1] = offsets_[a] + n.dims[q.arrow_tgt(a)] * m.dims[q.arrow_src(a)];
}

std::vector<Rat> Ext1Presentation::flatten(const std::vector<QMat>& cocycle) const {
  const Quiver& q = *m_.q;
  std::vector<Rat> flat(offsets_.back(), Rat(0));
  for (int a = 0; a < q.num_arrows(); ++a) {
    const QMat& c = cocycle[a];
    if (c.rows() != n_.dims[q.arrow_tgt(a)] || c.cols() != m_.dims[q.arrow_src(a)])
      throw std::invalid_argument("Ext1Presentation: cocycle shape mismatch");
    for (int r = 0; r < c.rows(); ++r)
      for (int cc = 0; cc < c.cols(); ++cc) flat[offsets_[a] + r * c.cols() + cc] = c.at(r, cc);
  }
  return flat;
}

std::vector<Rat> Ext1Presentation::project(const std::vector<QMat>& cocycle) const {
  auto red = image_.reduce(flatten(cocycle));
  std::vector<Rat> coords(free_.size());
  for (size_t i = 0; i < free_.size(); ++i) coords[i] = red[free_[i]];
  return coords;
}

std::vector<QMat> Ext1Presentation::basis_cocycle(int k) const {
  const Quiver& q = *m_.q;
  std::vector<QMat> out;
  for (int a = 0; a < q.num_arrows(); ++a) {
    QMat c(n_.dims[q.arrow_tgt(a)], m_.dims[q.arrow_src(a)]);
    int pos = free_.at(k);
    if (pos >= offsets_[a] && pos < offsets_[a + 1]) {
      int rel = pos - offsets_[a];
      c.at(rel / std::max(1, c.cols()), rel % std::max(1, c.cols())) = 1;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<QMat> ext_pullback(const RepHom& f, const QuiverRep& n,
                               const std::vector<QMat>& cocycle) {
  const Quiver& q = *f.source.q;
  (void)n;
  std::vector<QMat> out;
  for (int a = 0; a < q.num_arrows(); ++a)
    out.push_back(cocycle[a] * f.components[q.arrow_src(a)]);
  return out;
}

std::vector<QMat> ext_pushforward(const RepHom& g, const QuiverRep& m,
                                  const std::vector<QMat>& cocycle) {
  const Quiver& q = *g.source.q;
  (void)m;
  std::vector<QMat> out;
  for (int a = 0; a < q.num_arrows(); ++a)
    out.push_back(g.components[q.arrow_tgt(a)] * cocycle[a]);
  return out;
}

QuiverRep extension_middle(const QuiverRep& m, const QuiverRep& n,
                           const std::vector<QMat>& cocycle) {
  const Quiver& q = *m.q;
  QuiverRep e;
  e.q = m.q;
  e.dims.resize(q.num_vertices());
  for (int v = 0; v < q.num_vertices(); ++v) e.dims[v] = n.dims[v] + m.dims[v];
  e.maps.resize(q.num_arrows());
  for (int a = 0; a < q.num_arrows(); ++a) {
    int i = q.arrow_src(a), j = q.arrow_tgt(a);
    QMat map(e.dims[j], e.dims[i]);
    map.paste(0, 0, n.maps[a]);
    map.paste(0, n.dims[i], cocycle[a]);
    map.paste(n.dims[j], n.dims[i], m.maps[a]);
    e.maps[a] = std::move(map);
  }
  return e;
}

std::string rep_to_json(const QuiverRep& m) {
  const Quiver& q = *m.q;
  nlohmann::json j;
  for (int v = 0; v < q.num_vertices(); ++v) j["dims"][q.vertices()[v]] = m.dims[v];
  j["maps"] = nlohmann::json::object();
  for (int a = 0; a < q.num_arrows(); ++a) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.maps[a].rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < m.maps[a].cols(); ++c) row.push_back(rat_str(m.maps[a].at(r, c)));
      rows.push_back(row);
    }
    j["maps"][q.arrows()[a].id] = rows;
  }
  return j.dump(2);
}

}  // namespace orbitcat
