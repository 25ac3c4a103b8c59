#include "orbitcat/meshpath.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace orbitcat {

bool HomElt::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Rat& c) { return c == 0; });
}

struct PresentedCategory::SweepCache {
  std::mutex mu;
  std::map<int, std::shared_ptr<const SweepData>> sweeps;
};

PresentedCategory::PresentedCategory(TranslationQuiver tq)
    : tq_(std::move(tq)), cache_(std::make_unique<SweepCache>()) {
  relators_ = mesh_relators(tq_);
  relator_at_.assign(tq_.num_vertices(), -1);
  for (int i = 0; i < int(relators_.size()); ++i) relator_at_[relators_[i].at_index] = i;
}

PresentedCategory::PresentedCategory(PresentedCategory&&) noexcept = default;
PresentedCategory& PresentedCategory::operator=(PresentedCategory&&) noexcept = default;
PresentedCategory::~PresentedCategory() = default;

const SweepData& PresentedCategory::sweep(int source_vertex) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->sweeps.find(source_vertex);
    if (it != cache_->sweeps.end()) return *it->second;
  }
  auto fresh = std::make_shared<SweepData>();
  sweep_compute(source_vertex, *fresh);
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto [it, inserted] = cache_->sweeps.emplace(source_vertex, std::move(fresh));
  return *it->second;
}

void PresentedCategory::sweep_compute(int sx, SweepData& out) const {
  const int nv = tq_.num_vertices();
  out.source = sx;
  out.dims.assign(nv, 0);
  out.basis.assign(nv, {});
  out.arrow_mat.assign(tq_.num_arrows(), QMat(0, 0));

  out.dims[sx] = 1;
  out.basis[sx].push_back(Path{sx, sx, {}});

  for (int v = 0; v < nv; ++v) {
    const auto& in = tq_.arrows_to(v);
    if (v == sx) {
      // Identity seed; in-arrows come from strictly earlier vertices, all of
      // which have zero homs from x, so their matrices are 1 x 0.
      for (int b : in) out.arrow_mat[b] = QMat(1, out.dims[tq_.zarrow(b).src]);
      continue;
    }

    std::vector<int> offset(in.size() + 1, 0);
    for (size_t k = 0; k < in.size(); ++k)
      offset[k + 1] = offset[k] + out.dims[tq_.zarrow(in[k]).src];
    const int total = offset[in.size()];

    const ZVertex& vv = tq_.zvertex(v);
    const int rel = vv.frozen ? -1 : relator_at_[v];
    const bool mesh = rel >= 0 && relators_[rel].complete;
    int taudim = 0;
    int tauidx = -1;
    if (mesh) {
      tauidx = tq_.index_of(ZVertex{vv.base, vv.level - 1, false});
      taudim = out.dims[tauidx];
    }

    if (taudim == 0) {
      // Plain direct sum over the last arrow: frozen vertex, boundary mesh,
      // or a mesh map out of the zero space.
      out.dims[v] = total;
      for (size_t k = 0; k < in.size(); ++k) {
        const int b = in[k];
        const int w = tq_.zarrow(b).src;
        QMat inj(total, out.dims[w]);
        for (int i = 0; i < out.dims[w]; ++i) {
          inj.at(offset[k] + i, i) = 1;
          Path p = out.basis[w][i];
          p.arrows.push_back(b);
          p.tgt = v;
          out.basis[v].push_back(std::move(p));
        }
        out.arrow_mat[b] = std::move(inj);
      }
      continue;
    }

    // Mesh vertex: quotient the sum by the image of Hom(x, tau v).
    EchelonBasis image(total);
    for (int k = 0; k < taudim; ++k) {
      std::vector<Rat> s(total, Rat(0));
      for (size_t t = 0; t < in.size(); ++t) {
        const int b = in[t];
        const int sb = tq_.sigma_arrow(b);
        const QMat& msb = out.arrow_mat[sb];  // Hom(x,tau v) -> Hom(x, src b)
        for (int i = 0; i < msb.rows(); ++i) s[offset[t] + i] = msb.at(i, k);
      }
      image.insert(std::move(s));
    }
    const std::vector<int> free = image.free_positions();
    out.dims[v] = int(free.size());

    auto locate = [&](int pos) {
      size_t k = 0;
      while (offset[k + 1] <= pos) ++k;
      return std::pair<int, int>(int(k), pos - offset[k]);
    };
    for (int f : free) {
      auto [k, i] = locate(f);
      const int b = in[k];
      Path p = out.basis[tq_.zarrow(b).src][i];
      p.arrows.push_back(b);
      p.tgt = v;
      out.basis[v].push_back(std::move(p));
    }

    // Projection of each standard coordinate onto the cokernel basis.
    std::vector<std::vector<Rat>> proj(total);
    for (int t = 0; t < total; ++t) {
      std::vector<Rat> e(total, Rat(0));
      e[t] = 1;
      auto r = image.reduce(std::move(e));
      std::vector<Rat> coords(free.size());
      for (size_t j = 0; j < free.size(); ++j) coords[j] = r[free[j]];
      proj[t] = std::move(coords);
    }
    for (size_t k = 0; k < in.size(); ++k) {
      const int b = in[k];
      const int w = tq_.zarrow(b).src;
      QMat m(out.dims[v], out.dims[w]);
      for (int i = 0; i < out.dims[w]; ++i)
        for (int j = 0; j < out.dims[v]; ++j) m.at(j, i) = proj[offset[k] + i][j];
      out.arrow_mat[b] = std::move(m);
    }
  }
}

namespace {

int need_index(const TranslationQuiver& tq, const ZVertex& v, const char* who) {
  int i = tq.index_of(v);
  if (i < 0) throw std::invalid_argument(std::string(who) + ": vertex " + v.str() + " not in window");
  return i;
}

}  // namespace

int PresentedCategory::hom_dim(const ZVertex& x, const ZVertex& y) const {
  int sx = need_index(tq_, x, "hom_dim");
  int ty = need_index(tq_, y, "hom_dim");
  return sweep(sx).dims[ty];
}

HomSpace PresentedCategory::hom_space(const ZVertex& x, const ZVertex& y) const {
  int sx = need_index(tq_, x, "hom_space");
  int ty = need_index(tq_, y, "hom_space");
  const SweepData& s = sweep(sx);
  return HomSpace{x, y, s.dims[ty], s.basis[ty]};
}

HomElt PresentedCategory::identity(const ZVertex& x) const {
  int sx = need_index(tq_, x, "identity");
  return HomElt{sx, sx, {Rat(1)}};
}

HomElt PresentedCategory::zero(const ZVertex& x, const ZVertex& y) const {
  int sx = need_index(tq_, x, "zero");
  int ty = need_index(tq_, y, "zero");
  return HomElt{sx, ty, std::vector<Rat>(sweep(sx).dims[ty], Rat(0))};
}

HomElt PresentedCategory::class_of_path(const Path& p) const {
  const SweepData& s = sweep(p.src);
  HomElt e{p.src, p.src, {Rat(1)}};
  for (int a : p.arrows) {
    const ZArrow& ar = tq_.zarrow(a);
    if (ar.src != e.tgt) throw std::invalid_argument("class_of_path: not composable");
    e.coords = s.arrow_mat[a].apply(e.coords);
    e.tgt = ar.tgt;
  }
  if (p.tgt >= 0 && e.tgt != p.tgt) throw std::invalid_argument("class_of_path: bad target");
  return e;
}

HomElt PresentedCategory::class_of_arrow(int arrow) const {
  const ZArrow& ar = tq_.zarrow(arrow);
  return class_of_path(Path{ar.src, ar.tgt, {arrow}});
}

HomElt PresentedCategory::compose(const HomElt& f, const HomElt& g) const {
  if (g.tgt != f.src) throw std::invalid_argument("compose: target(g) != source(f)");
  const SweepData& s = sweep(g.src);
  HomElt out = zero(tq_.zvertex(g.src), tq_.zvertex(f.tgt));
  const SweepData& sf = sweep(f.src);
  for (size_t j = 0; j < f.coords.size(); ++j) {
    if (f.coords[j] == 0) continue;
    // Walk g's coordinates along the j-th basis path of Hom(f.src, f.tgt).
    std::vector<Rat> cur = g.coords;
    for (int a : sf.basis[f.tgt][j].arrows) cur = s.arrow_mat[a].apply(cur);
    for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += f.coords[j] * cur[i];
  }
  return out;
}

HomElt PresentedCategory::add(const HomElt& f, const HomElt& g) const {
  if (f.src != g.src || f.tgt != g.tgt) throw std::invalid_argument("add: shape mismatch");
  HomElt out = f;
  for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += g.coords[i];
  return out;
}

HomElt PresentedCategory::scale(const Rat& c, const HomElt& f) const {
  HomElt out = f;
  for (auto& e : out.coords) e *= c;
  return out;
}

const QMat& PresentedCategory::postcompose_matrix(int src_vertex, int arrow) const {
  return sweep(src_vertex).arrow_mat[arrow];
}

QMat PresentedCategory::precompose_matrix(const HomElt& g, const ZVertex& z) const {
  int zi = need_index(tq_, z, "precompose_matrix");
  const SweepData& sy = sweep(g.tgt);
  const SweepData& sx = sweep(g.src);
  QMat out(sx.dims[zi], sy.dims[zi]);
  for (int j = 0; j < sy.dims[zi]; ++j) {
    std::vector<Rat> cur = g.coords;
    for (int a : sy.basis[zi][j].arrows) cur = sx.arrow_mat[a].apply(cur);
    out.set_col(j, cur);
  }
  return out;
}

std::vector<Path> PresentedCategory::enumerate_paths(const ZVertex& x, const ZVertex& y,
                                                     size_t cap) const {
  int sx = need_index(tq_, x, "enumerate_paths");
  int ty = need_index(tq_, y, "enumerate_paths");
  std::vector<Path> out;
  std::vector<int> stack;
  // Depth-first in arrow order: paths come out lexicographically sorted.
  std::function<void(int)> walk = [&](int v) {
    if (v == ty) {
      out.push_back(Path{sx, ty, stack});
      if (out.size() > cap) throw std::runtime_error("enumerate_paths: cap exceeded");
    }
    if (v >= ty) return;  // canonical order is topological
    for (int a : tq_.arrows_from(v)) {
      stack.push_back(a);
      walk(tq_.zarrow(a).tgt);
      stack.pop_back();
    }
  };
  walk(sx);
  return out;
}

QMat PresentedCategory::relation_subspace(const ZVertex& x, const ZVertex& y, size_t cap) const {
  need_index(tq_, x, "relation_subspace");
  need_index(tq_, y, "relation_subspace");
  auto paths = enumerate_paths(x, y, cap);
  std::map<std::vector<int>, int> column;
  for (int i = 0; i < int(paths.size()); ++i) column[paths[i].arrows] = i;

  std::vector<std::vector<Rat>> rows;
  for (const MeshRelator& r : relators_) {
    const ZVertex& z = r.at;
    if (!r.complete) {
      // A dropped boundary mesh can only matter if some path from x could
      // reach tau(z); levels never decrease, so this means x at or below
      // the missing level. Guard for soundness.
      if (z.level - 1 >= x.level && z.level <= y.level && !z.frozen)
        throw std::runtime_error("relation_subspace: unstable window at " + z.str());
      continue;
    }
    ZVertex tz{z.base, z.level - 1, false};
    if (tq_.index_of(tz) < 0) continue;
    if (!(tz.level >= x.level && z.level <= y.level)) continue;
    auto pre = enumerate_paths(x, tz, cap);
    if (pre.empty()) continue;
    auto post = enumerate_paths(z, y, cap);
    if (post.empty()) continue;
    for (const Path& u : post) {
      for (const Path& w : pre) {
        std::vector<Rat> row(paths.size(), Rat(0));
        for (auto [beta, sbeta] : r.terms) {
          std::vector<int> arrows = w.arrows;
          arrows.push_back(sbeta);
          arrows.push_back(beta);
          arrows.insert(arrows.end(), u.arrows.begin(), u.arrows.end());
          auto it = column.find(arrows);
          if (it == column.end())
            throw std::logic_error("relation_subspace: relation term is not an x->y path");
          row[it->second] += 1;
        }
        rows.push_back(std::move(row));
        if (rows.size() > cap) throw std::runtime_error("relation_subspace: cap exceeded");
      }
    }
  }
  if (rows.empty()) return QMat(0, int(paths.size()));
  return QMat::from_rows(rows);
}

LiteralHom PresentedCategory::hom_space_literal(const ZVertex& x, const ZVertex& y,
                                                size_t cap) const {
  LiteralHom out;
  out.paths = enumerate_paths(x, y, cap);
  QMat rel = relation_subspace(x, y, cap);
  EchelonBasis eb(rel.cols());
  for (int i = 0; i < rel.rows(); ++i) eb.insert(rel.row(i));
  out.relation_rank = eb.rank();
  out.dim = int(out.paths.size()) - out.relation_rank;
  out.basis_positions = eb.free_positions();
  return out;
}

bool PresentedCategory::window_stable(const ZVertex& x, const ZVertex& y, int enlargement) const {
  if (enlargement == 0) return true;
  if (enlargement < 0) throw std::invalid_argument("window_stable: negative enlargement");
  TranslationQuiver big(tq_.base_quiver(), tq_.pmin() - enlargement, tq_.pmax() + enlargement,
                        tq_.with_frame(), tq_.config());
  PresentedCategory bigger(std::move(big));
  return bigger.hom_dim(x, y) == hom_dim(x, y);
}

std::string PresentedCategory::path_str(const Path& p) const {
  if (p.arrows.empty()) return "id_" + tq_.zvertex(p.src).str();
  std::ostringstream os;
  os << tq_.zvertex(p.src).str();
  for (int a : p.arrows) os << " -" << tq_.zarrow(a).id << "-> " << tq_.zvertex(tq_.zarrow(a).tgt).str();
  return os.str();
}

Path make_path(const TranslationQuiver& tq, const ZVertex& src,
               const std::vector<std::string>& arrow_ids) {
  Path p;
  p.src = p.tgt = tq.index_of(src);
  if (p.src < 0) throw std::invalid_argument("make_path: unknown source");
  for (const auto& id : arrow_ids) {
    int a = tq.zarrow_index(id);
    if (a < 0) throw std::invalid_argument("make_path: unknown arrow " + id);
    if (tq.zarrow(a).src != p.tgt) throw std::invalid_argument("make_path: not composable at " + id);
    p.arrows.push_back(a);
    p.tgt = tq.zarrow(a).tgt;
  }
  return p;
}

std::string hom_table_csv(const PresentedCategory& pc, const std::vector<ZVertex>& xs,
                          const std::vector<ZVertex>& ys) {
  std::ostringstream os;
  os << "source,target,dim\n";
  for (const auto& x : xs)
    for (const auto& y : ys)
      os << x.str() << "," << y.str() << "," << pc.hom_dim(x, y) << "\n";
  return os.str();
}

std::string hom_table_json(const PresentedCategory& pc, const std::vector<ZVertex>& xs,
                           const std::vector<ZVertex>& ys) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : xs)
    for (const auto& y : ys)
      arr.push_back({{"source", x.str()}, {"target", y.str()}, {"dim", pc.hom_dim(x, y)}});
  return arr.dump(2);
}

}  // namespace orbitcat
