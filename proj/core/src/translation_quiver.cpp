#include "orbitcat/translation_quiver.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace orbitcat {

std::string ZVertex::str() const {
  std::ostringstream os;
  os << "(" << base << (frozen ? "'" : "") << "," << level << ")";
  return os.str();
}

std::optional<ZVertex> parse_zvertex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  auto comma = s.rfind(',');
  if (comma == std::string::npos || comma == 0) return std::nullopt;
  std::string base = s.substr(0, comma);
  bool frozen = false;
  if (base.back() == '\'') {
    frozen = true;
    base.pop_back();
    if (base.empty()) return std::nullopt;
  }
  try {
    size_t used = 0;
    int level = std::stoi(s.substr(comma + 1), &used);
    if (used != s.size() - comma - 1) return std::nullopt;
    return ZVertex{base, level, frozen};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

TranslationQuiver::TranslationQuiver(Quiver q, int pmin, int pmax, bool with_frame,
                                     Configuration config)
    : q_(std::move(q)), pmin_(pmin), pmax_(pmax), framed_(with_frame), config_(std::move(config)) {
  if (pmin_ > pmax_) throw std::invalid_argument("TranslationQuiver: empty window");

  for (int p = pmin_; p <= pmax_; ++p) {
    for (int v : q_.topo_order()) verts_.push_back({q_.vertices()[v], p, false});
    if (framed_) {
      for (int v : q_.topo_order()) {
        const std::string& id = q_.vertices()[v];
        if (config_.contains(id, p + 1)) verts_.push_back({id, p, true});
      }
    }
  }

  std::map<ZVertex, int> index;
  for (int i = 0; i < num_vertices(); ++i) index[verts_[i]] = i;
  auto idx = [&](const ZVertex& v) -> int {
    auto it = index.find(v);
    return it == index.end() ? -1 : it->second;
  };

  out_.assign(verts_.size(), {});
  in_.assign(verts_.size(), {});
  // Structural key (kind, base, level) -> arrow index, for the sigma pairing.
  std::map<std::tuple<int, std::string, int>, int> by_key;
  auto add_arrow = [&](ZArrowKind kind, const std::string& base, int p, const ZVertex& sv,
                       const ZVertex& tv) {
    int s = idx(sv), t = idx(tv);
    if (s < 0 || t < 0) return;
    std::ostringstream os;
    if (kind == ZArrowKind::SigmaQ || kind == ZArrowKind::SigmaFrame) os << "s";
    os << "(" << (kind == ZArrowKind::Frame || kind == ZArrowKind::SigmaFrame ? "f_" : "") << base
       << "," << p << ")";
    int a = int(arrows_.size());
    arrows_.push_back({os.str(), s, t, kind, base, p});
    out_[s].push_back(a);
    in_[t].push_back(a);
    by_key[{int(kind), base, p}] = a;
  };

  for (int p = pmin_; p <= pmax_; ++p) {
    for (const Arrow& al : q_.arrows()) {
      add_arrow(ZArrowKind::Q, al.id, p, {al.src, p, false}, {al.tgt, p, false});
      add_arrow(ZArrowKind::SigmaQ, al.id, p, {al.tgt, p - 1, false}, {al.src, p, false});
    }
    if (framed_) {
      for (const std::string& v : q_.vertices()) {
        add_arrow(ZArrowKind::Frame, v, p, {v, p, false}, {v, p, true});
        add_arrow(ZArrowKind::SigmaFrame, v, p, {v, p - 1, true}, {v, p, false});
      }
    }
  }

  sigma_.assign(arrows_.size(), -1);
  auto find_key = [&](ZArrowKind kind, const std::string& base, int p) -> int {
    auto it = by_key.find({int(kind), base, p});
    return it == by_key.end() ? -1 : it->second;
  };
  for (int a = 0; a < num_arrows(); ++a) {
    const ZArrow& ar = arrows_[a];
    switch (ar.kind) {
      case ZArrowKind::Q:
        sigma_[a] = find_key(ZArrowKind::SigmaQ, ar.base, ar.level);
        break;
      case ZArrowKind::SigmaQ:
        sigma_[a] = find_key(ZArrowKind::Q, ar.base, ar.level - 1);
        break;
      case ZArrowKind::Frame:
        sigma_[a] = find_key(ZArrowKind::SigmaFrame, ar.base, ar.level);
        break;
      case ZArrowKind::SigmaFrame:
        sigma_[a] = find_key(ZArrowKind::Frame, ar.base, ar.level - 1);
        break;
    }
  }
}

int TranslationQuiver::zarrow_index(const std::string& id) const {
  for (int a = 0; a < num_arrows(); ++a)
    if (arrows_[a].id == id) return a;
  return -1;
}

int TranslationQuiver::index_of(const ZVertex& v) const {
  if (v.level < pmin_ || v.level > pmax_) return -1;
  // Vertices are sorted by (level, frozen, topo position); binary search is
  // overkill at this scale, scan the level block.
  for (int i = 0; i < num_vertices(); ++i) {
    if (verts_[i].level == v.level && verts_[i].frozen == v.frozen && verts_[i].base == v.base)
      return i;
  }
  return -1;
}

std::optional<ZVertex> TranslationQuiver::tau(const ZVertex& v) const {
  if (v.frozen) return std::nullopt;
  ZVertex t{v.base, v.level - 1, false};
  if (!has_vertex(t)) return std::nullopt;
  return t;
}

std::optional<ZVertex> TranslationQuiver::tau_inverse(const ZVertex& v) const {
  if (v.frozen) return std::nullopt;
  ZVertex t{v.base, v.level + 1, false};
  if (!has_vertex(t)) return std::nullopt;
  return t;
}

ZVertex TranslationQuiver::sigma_vertex(const ZVertex& v) const {
  if (v.frozen) return {v.base, v.level + 1, false};
  return {v.base, v.level - 1, true};
}

std::string TranslationQuiver::dot(bool with_tau) const {
  std::ostringstream os;
  os << "digraph ZQ {\n  rankdir=LR;\n";
  for (int p = pmin_; p <= pmax_; ++p) {
    os << "  { rank=same;";
    for (const ZVertex& v : verts_)
      if (v.level == p) os << " \"" << v.str() << "\";";
    os << " }\n";
  }
  for (const ZVertex& v : verts_)
    os << "  \"" << v.str() << "\" [shape=" << (v.frozen ? "box" : "circle") << "];\n";
  for (const ZArrow& a : arrows_)
    os << "  \"" << verts_[a.src].str() << "\" -> \"" << verts_[a.tgt].str() << "\";\n";
  if (with_tau) {
    for (const ZVertex& v : verts_) {
      auto t = tau(v);
      if (t)
        os << "  \"" << v.str() << "\" -> \"" << t->str()
           << "\" [style=dashed, constraint=false];\n";
    }
  }
  os << "}\n";
  return os.str();
}

TranslationQuiver repetition(const Quiver& q, int pmin, int pmax, bool with_frame,
                             const Configuration& config) {
  return TranslationQuiver(q, pmin, pmax, with_frame, config);
}

std::vector<MeshRelator> mesh_relators(const TranslationQuiver& tq) {
  std::vector<MeshRelator> out;
  for (int x = 0; x < tq.num_vertices(); ++x) {
    const ZVertex& v = tq.zvertex(x);
    if (v.frozen) continue;
    MeshRelator r;
    r.at = v;
    r.at_index = x;
    r.complete = v.level - 1 >= tq.pmin();
    if (r.complete) {
      for (int b : tq.arrows_to(x)) {
        int sb = tq.sigma_arrow(b);
        if (sb < 0) throw std::logic_error("mesh_relators: sigma partner missing in window");
        if (tq.zarrow(sb).tgt != tq.zarrow(b).src)
          throw std::logic_error("mesh_relators: term not composable");
        r.terms.push_back({b, sb});
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace orbitcat
