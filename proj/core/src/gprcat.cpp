#include "orbitcat/gprcat.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "orbitcat/linalg.hpp"

namespace orbitcat {

SingularCategory::SingularCategory(std::shared_ptr<const NakajimaPresentation> np)
    : np_(std::move(np)), objects_(np_->singular) {
  const PresentedCategory& pc = np_->regular;
  const TranslationQuiver& tq = pc.tq();
  int s = num_objects();
  basis_.assign(s, std::vector<std::vector<HomElt>>(s));
  for (int f = 0; f < s; ++f) {
    int fi = tq.index_of(objects_[f]);
    for (int g = 0; g < s; ++g) {
      int gi = tq.index_of(objects_[g]);
      int dim = pc.hom_dim(objects_[f], objects_[g]);
      basis_[f][g].reserve(dim);
      for (int k = 0; k < dim; ++k) {
        HomElt h;
        h.src = fi;
        h.tgt = gi;
        h.coords.assign(dim, Rat(0));
        h.coords[k] = 1;
        basis_[f][g].push_back(std::move(h));
      }
    }
    if (int(basis_[f][f].size()) != 1)
      throw std::logic_error("singular endomorphism spaces must be scalar");
  }
  gens_.assign(s, std::vector<std::vector<int>>(s));
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g) {
      if (f == g) continue;
      int dim = hom_dim(f, g);
      if (dim == 0) continue;
      EchelonBasis two_step(dim);
      for (int h = 0; h < s; ++h) {
        if (h == f || h == g) continue;
        int d1 = hom_dim(f, h), d2 = hom_dim(h, g);
        for (int k1 = 0; k1 < d1; ++k1)
          for (int k2 = 0; k2 < d2; ++k2) two_step.insert(compose_coords(f, h, g, k1, k2));
      }
      gens_[f][g] = two_step.free_positions();
    }
}

int SingularCategory::object_index(const ZVertex& v) const {
  for (int f = 0; f < num_objects(); ++f)
    if (objects_[f] == v) return f;
  return -1;
}

std::vector<Rat> SingularCategory::compose_coords(int f, int g, int h, int k1, int k2) const {
  return np_->regular.compose(basis_[g][h][k2], basis_[f][g][k1]).coords;
}

int FinSuppModule::total_dim() const {
  int t = 0;
  for (int v : values) t += v;
  return t;
}

std::vector<int> FinSuppModule::support() const {
  std::vector<int> out;
  for (int f = 0; f < int(values.size()); ++f)
    if (values[f] > 0) out.push_back(f);
  return out;
}

namespace {

void init_actions(FinSuppModule& m) {
  const SingularCategory& cat = *m.cat;
  int s = cat.num_objects();
  m.action.assign(s, std::vector<std::vector<QMat>>(s));
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g)
      m.action[f][g].assign(cat.hom_dim(f, g), QMat(m.values[f], m.values[g]));
}

FinSuppModule restrict_module(std::shared_ptr<const SingularCategory> cat, const ZVertex& x) {
  const PresentedCategory& pc = cat->regular();
  FinSuppModule m;
  m.cat = cat;
  int s = cat->num_objects();
  m.values.resize(s);
  for (int f = 0; f < s; ++f) m.values[f] = pc.hom_dim(cat->object(f), x);
  m.action.assign(s, std::vector<std::vector<QMat>>(s));
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g) {
      int dim = cat->hom_dim(f, g);
      m.action[f][g].reserve(dim);
      for (int k = 0; k < dim; ++k)
        m.action[f][g].push_back(pc.precompose_matrix(cat->basis_morphism(f, g, k), x));
    }
  return m;
}

// Unknowns of a natural transformation m -> n, flattened object by object,
// each component matrix row-major. flatten_hom uses the same order.
int hom_unknowns(const FinSuppModule& m, const FinSuppModule& n) {
  int t = 0;
  for (size_t f = 0; f < m.values.size(); ++f) t += n.values[f] * m.values[f];
  return t;
}

std::vector<Rat> flatten_hom(const ModuleHom& h) {
  std::vector<Rat> out;
  for (const QMat& c : h.components)
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) out.push_back(c.at(i, j));
  return out;
}

// Rows are the naturality constraints N(u) eta_g = eta_f M(u) over the
// generating morphisms u: f -> g; naturality at composites and sums follows,
// so the solution space is unchanged while the system stays small.
QMat hom_system(const FinSuppModule& m, const FinSuppModule& n, const std::vector<int>& off) {
  const SingularCategory& cat = *m.cat;
  int s = cat.num_objects();
  int rows = 0;
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g)
      rows += int(cat.generators(f, g).size()) * n.values[f] * m.values[g];
  QMat sys(rows, off.back());
  int row = 0;
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g)
      for (int k : cat.generators(f, g)) {
        const QMat& nu = n.action[f][g][k];
        const QMat& mu = m.action[f][g][k];
        for (int r = 0; r < n.values[f]; ++r)
          for (int c = 0; c < m.values[g]; ++c) {
            for (int t = 0; t < n.values[g]; ++t)
              sys.at(row, off[g] + t * m.values[g] + c) += nu.at(r, t);
            for (int p = 0; p < m.values[f]; ++p)
              sys.at(row, off[f] + r * m.values[f] + p) -= mu.at(p, c);
            ++row;
          }
      }
  return sys;
}

std::vector<int> hom_offsets(const FinSuppModule& m, const FinSuppModule& n) {
  std::vector<int> off(m.values.size() + 1, 0);
  for (size_t f = 0; f < m.values.size(); ++f)
    off[f + 1] = off[f] + n.values[f] * m.values[f];
  return off;
}

std::string step_detail(const char* what, const ZVertex& obj, int step) {
  std::ostringstream os;
  os << what << " at " << obj.str() << ", step " << step;
  return os.str();
}

}  // namespace

FinSuppModule zero_module(std::shared_ptr<const SingularCategory> cat) {
  FinSuppModule m;
  m.cat = std::move(cat);
  m.values.assign(m.cat->num_objects(), 0);
  init_actions(m);
  return m;
}

FinSuppModule representable_module(std::shared_ptr<const SingularCategory> cat, int f) {
  ZVertex obj = cat->object(f);
  return restrict_module(std::move(cat), obj);
}

FinSuppModule simple_module(std::shared_ptr<const SingularCategory> cat, int f) {
  FinSuppModule m;
  m.cat = std::move(cat);
  m.values.assign(m.cat->num_objects(), 0);
  m.values[f] = 1;
  init_actions(m);
  m.action[f][f][0] = QMat::identity(1);
  return m;
}

FinSuppModule direct_sum_module(const FinSuppModule& a, const FinSuppModule& b) {
  if (a.cat != b.cat) throw std::logic_error("direct sum across different categories");
  FinSuppModule m;
  m.cat = a.cat;
  int s = m.cat->num_objects();
  m.values.resize(s);
  for (int f = 0; f < s; ++f) m.values[f] = a.values[f] + b.values[f];
  m.action.assign(s, std::vector<std::vector<QMat>>(s));
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g) {
      int dim = m.cat->hom_dim(f, g);
      m.action[f][g].reserve(dim);
      for (int k = 0; k < dim; ++k)
        m.action[f][g].push_back(block_diag({a.action[f][g][k], b.action[f][g][k]}));
    }
  return m;
}

void module_check(const FinSuppModule& m) {
  const SingularCategory& cat = *m.cat;
  int s = cat.num_objects();
  if (int(m.values.size()) != s || int(m.action.size()) != s)
    throw std::logic_error("module shape does not match the category");
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g) {
      if (int(m.action[f][g].size()) != cat.hom_dim(f, g))
        throw std::logic_error("module action is missing basis morphisms");
      for (const QMat& a : m.action[f][g])
        if (a.rows() != m.values[f] || a.cols() != m.values[g])
          throw std::logic_error("module action has a wrong shape");
    }
  for (int f = 0; f < s; ++f)
    if (!(m.action[f][f][0] == QMat::identity(m.values[f])))
      throw std::logic_error("identity does not act as the identity");
  for (int f = 0; f < s; ++f)
    for (int g = 0; g < s; ++g)
      for (int h = 0; h < s; ++h)
        for (int k1 = 0; k1 < cat.hom_dim(f, g); ++k1)
          for (int k2 = 0; k2 < cat.hom_dim(g, h); ++k2) {
            QMat lhs = m.action[f][g][k1] * m.action[g][h][k2];
            QMat rhs(m.values[f], m.values[h]);
            std::vector<Rat> coords = cat.compose_coords(f, g, h, k1, k2);
            for (int t = 0; t < int(coords.size()); ++t)
              if (coords[t] != 0) rhs = rhs + m.action[f][h][t] * coords[t];
            if (!(lhs == rhs)) throw std::logic_error("module action is not functorial");
          }
}

GprObject restrict_projective(std::shared_ptr<const SingularCategory> cat, const ZVertex& x) {
  const TranslationQuiver& tq = cat->regular().tq();
  if (tq.index_of(x) < 0) throw std::invalid_argument("anchor outside the window");
  if (!x.frozen && x.level < tq.pmin() + 2)
    throw std::invalid_argument("anchor too close to the bottom edge of the window");
  GprObject out;
  out.anchor = x;
  out.module = restrict_module(std::move(cat), x);
  return out;
}

ModuleHom compose_module_hom(const ModuleHom& g, const ModuleHom& f) {
  ModuleHom out;
  out.components.reserve(f.components.size());
  for (size_t e = 0; e < f.components.size(); ++e)
    out.components.push_back(g.components[e] * f.components[e]);
  return out;
}

ModuleHom yoneda_module_hom(const std::shared_ptr<const SingularCategory>& cat, int f, int g,
                            const HomElt& w) {
  const PresentedCategory& pc = cat->regular();
  ModuleHom out;
  int s = cat->num_objects();
  out.components.reserve(s);
  for (int e = 0; e < s; ++e) {
    QMat comp(cat->hom_dim(e, g), cat->hom_dim(e, f));
    for (int j = 0; j < comp.cols(); ++j)
      comp.set_col(j, pc.compose(w, cat->basis_morphism(e, f, j)).coords);
    out.components.push_back(std::move(comp));
  }
  return out;
}

int module_hom_dim(const FinSuppModule& m, const FinSuppModule& n) {
  std::vector<int> off = hom_offsets(m, n);
  if (off.back() == 0) return 0;
  return off.back() - rank(hom_system(m, n, off));
}

std::vector<ModuleHom> module_hom_basis(const FinSuppModule& m, const FinSuppModule& n) {
  std::vector<int> off = hom_offsets(m, n);
  std::vector<ModuleHom> out;
  if (off.back() == 0) return out;
  for (const std::vector<Rat>& v : kernel_basis(hom_system(m, n, off))) {
    ModuleHom h;
    int s = int(m.values.size());
    h.components.reserve(s);
    for (int f = 0; f < s; ++f) {
      QMat comp(n.values[f], m.values[f]);
      for (int r = 0; r < comp.rows(); ++r)
        for (int c = 0; c < comp.cols(); ++c) comp.at(r, c) = v[off[f] + r * m.values[f] + c];
      h.components.push_back(std::move(comp));
    }
    out.push_back(std::move(h));
  }
  return out;
}

GprCover projective_cover(const FinSuppModule& m) {
  const SingularCategory& cat = *m.cat;
  int s = cat.num_objects();
  GprCover out;
  out.multiplicities.assign(s, 0);

  // Generators: a basis of each value space modulo the radical image.
  std::vector<std::vector<std::vector<Rat>>> tops(s);
  for (int f = 0; f < s; ++f) {
    if (m.values[f] == 0) continue;
    EchelonBasis rad(m.values[f]);
    for (int g = 0; g < s; ++g)
      for (int k = 0; k < cat.hom_dim(f, g); ++k) {
        if (f == g) continue;
        const QMat& a = m.action[f][g][k];
        for (int j = 0; j < a.cols(); ++j) rad.insert(a.col(j));
      }
    for (int pos : rad.free_positions()) {
      std::vector<Rat> t(m.values[f], Rat(0));
      t[pos] = 1;
      tops[f].push_back(std::move(t));
    }
    out.multiplicities[f] = int(tops[f].size());
  }

  out.p0 = zero_module(m.cat);
  for (int f = 0; f < s; ++f)
    for (int c = 0; c < out.multiplicities[f]; ++c)
      out.p0 = direct_sum_module(out.p0, representable_module(m.cat, f));

  out.epi.components.reserve(s);
  for (int e = 0; e < s; ++e) {
    QMat ep(m.values[e], out.p0.values[e]);
    int col = 0;
    for (int f = 0; f < s; ++f) {
      int dim = cat.hom_dim(e, f);
      for (const std::vector<Rat>& t : tops[f])
        for (int k = 0; k < dim; ++k) ep.set_col(col++, m.action[e][f][k].apply(t));
    }
    if (rank(ep) != m.values[e]) throw std::logic_error("cover misses part of the module");
    out.epi.components.push_back(std::move(ep));
  }

  out.syzygy.cat = m.cat;
  out.syzygy.values.resize(s);
  out.incl.components.reserve(s);
  for (int e = 0; e < s; ++e) {
    auto ker = kernel_basis(out.epi.components[e]);
    out.syzygy.values[e] = int(ker.size());
    QMat incl(out.p0.values[e], int(ker.size()));
    for (int j = 0; j < int(ker.size()); ++j) incl.set_col(j, ker[j]);
    out.incl.components.push_back(std::move(incl));
  }
  out.syzygy.action.assign(s, std::vector<std::vector<QMat>>(s));
  for (int e = 0; e < s; ++e)
    for (int g = 0; g < s; ++g) {
      int dim = cat.hom_dim(e, g);
      out.syzygy.action[e][g].reserve(dim);
      for (int k = 0; k < dim; ++k) {
        auto sol = solve_matrix(out.incl.components[e],
                                out.p0.action[e][g][k] * out.incl.components[g]);
        if (!sol) throw std::logic_error("syzygy is not a submodule");
        out.syzygy.action[e][g].push_back(std::move(*sol));
      }
    }
  return out;
}

int ext1_dim(const FinSuppModule& m, const FinSuppModule& n) {
  GprCover c = projective_cover(m);
  int target = module_hom_dim(c.syzygy, n);
  if (target == 0) return 0;
  EchelonBasis eb(hom_unknowns(c.syzygy, n));
  for (const ModuleHom& phi : module_hom_basis(c.p0, n))
    eb.insert(flatten_hom(compose_module_hom(phi, c.incl)));
  return target - eb.rank();
}

int stable_hom_dim(const FinSuppModule& m, const FinSuppModule& n) {
  int full = module_hom_dim(m, n);
  if (full == 0) return 0;
  GprCover c = projective_cover(n);
  EchelonBasis eb(hom_unknowns(m, n));
  for (const ModuleHom& psi : module_hom_basis(m, c.p0))
    eb.insert(flatten_hom(compose_module_hom(c.epi, psi)));
  return full - eb.rank();
}

GprCoCover projective_co_cover(const FinSuppModule& m) {
  const SingularCategory& cat = *m.cat;
  int s = cat.num_objects();

  std::vector<FinSuppModule> reps;
  reps.reserve(s);
  for (int g = 0; g < s; ++g) reps.push_back(representable_module(m.cat, g));

  struct Cand {
    int g;
    ModuleHom phi;
  };
  std::vector<Cand> kept;
  for (int g = 0; g < s; ++g)
    for (ModuleHom& phi : module_hom_basis(m, reps[g])) kept.push_back({g, std::move(phi)});

  // Drop every candidate that factors through the remaining ones.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < kept.size(); ++i) {
      EchelonBasis eb(hom_unknowns(m, reps[kept[i].g]));
      for (size_t j = 0; j < kept.size(); ++j) {
        if (j == i) continue;
        for (int k = 0; k < cat.hom_dim(kept[j].g, kept[i].g); ++k)
          eb.insert(flatten_hom(compose_module_hom(
              yoneda_module_hom(m.cat, kept[j].g, kept[i].g,
                                cat.basis_morphism(kept[j].g, kept[i].g, k)),
              kept[j].phi)));
      }
      if (eb.contains(flatten_hom(kept[i].phi))) {
        kept.erase(kept.begin() + i);
        changed = true;
        break;
      }
    }
  }

  GprCoCover out;
  out.multiplicities.assign(s, 0);
  out.p0 = zero_module(m.cat);
  for (const Cand& c : kept) {
    ++out.multiplicities[c.g];
    out.p0 = direct_sum_module(out.p0, reps[c.g]);
  }

  out.mono.components.reserve(s);
  for (int e = 0; e < s; ++e) {
    QMat mono(out.p0.values[e], m.values[e]);
    int row = 0;
    for (const Cand& c : kept) {
      mono.paste(row, 0, c.phi.components[e]);
      row += c.phi.components[e].rows();
    }
    if (rank(mono) != m.values[e])
      throw std::runtime_error("module does not embed into the projectives");
    out.mono.components.push_back(std::move(mono));
  }

  // Quotient by the image, in the coordinates of the non-pivot positions.
  out.cosyzygy.cat = m.cat;
  out.cosyzygy.values.resize(s);
  std::vector<QMat> proj(s), sect(s);
  for (int e = 0; e < s; ++e) {
    int pe = out.p0.values[e];
    EchelonBasis image(pe);
    for (int c = 0; c < m.values[e]; ++c) image.insert(out.mono.components[e].col(c));
    std::vector<int> free = image.free_positions();
    out.cosyzygy.values[e] = int(free.size());
    proj[e] = QMat(int(free.size()), pe);
    sect[e] = QMat(pe, int(free.size()));
    for (int c = 0; c < pe; ++c) {
      std::vector<Rat> unit(pe, Rat(0));
      unit[c] = 1;
      std::vector<Rat> red = image.reduce(unit);
      for (int r = 0; r < int(free.size()); ++r) proj[e].at(r, c) = red[free[r]];
    }
    for (int r = 0; r < int(free.size()); ++r) sect[e].at(free[r], r) = 1;
  }
  out.cosyzygy.action.assign(s, std::vector<std::vector<QMat>>(s));
  for (int e = 0; e < s; ++e)
    for (int g = 0; g < s; ++g) {
      int dim = cat.hom_dim(e, g);
      out.cosyzygy.action[e][g].reserve(dim);
      for (int k = 0; k < dim; ++k)
        out.cosyzygy.action[e][g].push_back(proj[e] * out.p0.action[e][g][k] * sect[g]);
    }
  return out;
}

ResolutionCheck complete_resolution_check(const FinSuppModule& m, int width) {
  const SingularCategory& cat = *m.cat;
  int s = cat.num_objects();
  ResolutionCheck res;
  res.ok = true;

  std::vector<FinSuppModule> reps;
  reps.reserve(s);
  for (int g = 0; g < s; ++g) reps.push_back(representable_module(m.cat, g));

  FinSuppModule cur = m;
  for (int step = 0; step < width && res.ok; ++step) {
    if (cur.is_zero()) break;
    GprCover c = projective_cover(cur);
    for (int g = 0; g < s && res.ok; ++g) {
      int hm = module_hom_dim(cur, reps[g]);
      int hp = module_hom_dim(c.p0, reps[g]);
      int ho = module_hom_dim(c.syzygy, reps[g]);
      if (ho != hp - hm) {
        res.ok = false;
        res.detail = step_detail("homs to a projective persist under the cover", cat.object(g), step);
      }
    }
    if (res.ok) res.left_steps = step + 1;
    cur = std::move(c.syzygy);
  }

  cur = m;
  for (int step = 0; step < width && res.ok; ++step) {
    if (cur.is_zero()) break;
    GprCoCover co;
    try {
      co = projective_co_cover(cur);
    } catch (const std::runtime_error& e) {
      res.ok = false;
      res.detail = e.what();
      break;
    }
    for (int g = 0; g < s && res.ok; ++g) {
      int hm = module_hom_dim(cur, reps[g]);
      int hp = module_hom_dim(co.p0, reps[g]);
      int hq = module_hom_dim(co.cosyzygy, reps[g]);
      EchelonBasis eb(hom_unknowns(cur, reps[g]));
      for (const ModuleHom& psi : module_hom_basis(co.p0, reps[g]))
        eb.insert(flatten_hom(compose_module_hom(psi, co.mono)));
      if (eb.rank() != hm) {
        res.ok = false;
        res.detail = step_detail("the embedding is not a left approximation", cat.object(g), step);
      } else if (hq != hp - hm) {
        res.ok = false;
        res.detail = step_detail("homs from the co-syzygy break additivity", cat.object(g), step);
      }
    }
    if (res.ok) res.right_steps = step + 1;
    cur = std::move(co.cosyzygy);
  }
  return res;
}

std::string module_to_json(const FinSuppModule& m) {
  const SingularCategory& cat = *m.cat;
  nlohmann::json j;
  j["values"] = nlohmann::json::array();
  for (int f = 0; f < cat.num_objects(); ++f)
    j["values"].push_back({{"object", cat.object(f).str()}, {"dim", m.values[f]}});
  j["action"] = nlohmann::json::array();
  for (int f = 0; f < cat.num_objects(); ++f)
    for (int g = 0; g < cat.num_objects(); ++g)
      for (int k = 0; k < cat.hom_dim(f, g); ++k) {
        const QMat& a = m.action[f][g][k];
        if (a.is_zero()) continue;
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < a.rows(); ++r) {
          nlohmann::json row = nlohmann::json::array();
          for (int c = 0; c < a.cols(); ++c) row.push_back(rat_str(a.at(r, c)));
          rows.push_back(std::move(row));
        }
        j["action"].push_back({{"from", cat.object(f).str()},
                               {"to", cat.object(g).str()},
                               {"k", k},
                               {"matrix", std::move(rows)}});
      }
  return j.dump(1);
}

}  // namespace orbitcat
