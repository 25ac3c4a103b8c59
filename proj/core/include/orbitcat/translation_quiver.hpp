#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitcat/configuration.hpp"
#include "orbitcat/quiver.hpp"

namespace orbitcat {

struct ZVertex {
  std::string base;  // Q vertex id, unprimed even when frozen
  int level = 0;
  bool frozen = false;
  auto operator<=>(const ZVertex&) const = default;
  std::string str() const;  // "(1,0)" / "(1',0)"
};

std::optional<ZVertex> parse_zvertex(const std::string& text);

enum class ZArrowKind { Q, SigmaQ, Frame, SigmaFrame };

struct ZArrow {
  std::string id;
  int src = -1;  // canonical vertex indices
  int tgt = -1;
  ZArrowKind kind = ZArrowKind::Q;
  std::string base;  // Q arrow id for Q/SigmaQ, Q vertex id for Frame/SigmaFrame
  int level = 0;     // the p of (alpha,p) / sigma(alpha,p)
};

struct MeshRelator {
  ZVertex at;
  int at_index = -1;
  // (beta, sigma(beta)) arrow-index pairs; each is the path tau(at) -> src(beta) -> at.
  std::vector<std::pair<int, int>> terms;
  bool complete = false;  // false: boundary vertex, no relator imposed
};

// Windowed slice of the repetition quiver ZQ, optionally framed with frozen
// companions restricted by a configuration: frozen (i',n) is kept iff
// (i,n+1) is a member. Vertices are ordered by (level, frozen flag, topo
// position of base), which is a topological order of the arrow set.
class TranslationQuiver {
 public:
  TranslationQuiver(Quiver q, int pmin, int pmax, bool with_frame, Configuration config);

  const Quiver& base_quiver() const { return q_; }
  int pmin() const { return pmin_; }
  int pmax() const { return pmax_; }
  bool with_frame() const { return framed_; }
  const Configuration& config() const { return config_; }

  int num_vertices() const { return int(verts_.size()); }
  const std::vector<ZVertex>& zvertices() const { return verts_; }
  const ZVertex& zvertex(int i) const { return verts_[i]; }
  int index_of(const ZVertex& v) const;  // -1 when absent
  bool has_vertex(const ZVertex& v) const { return index_of(v) >= 0; }

  int num_arrows() const { return int(arrows_.size()); }
  const std::vector<ZArrow>& zarrows() const { return arrows_; }
  const ZArrow& zarrow(int a) const { return arrows_[a]; }
  int zarrow_index(const std::string& id) const;  // -1 when absent
  const std::vector<int>& arrows_from(int v) const { return out_[v]; }
  const std::vector<int>& arrows_to(int v) const { return in_[v]; }

  // sigma(beta) arrow pairing: (alpha,p)->sigma(alpha,p), sigma(alpha,p)->(alpha,p-1),
  // same for frame arrows. -1 when the partner leaves the window.
  int sigma_arrow(int a) const { return sigma_[a]; }

  std::optional<ZVertex> tau(const ZVertex& v) const;          // non-frozen, in-window
  std::optional<ZVertex> tau_inverse(const ZVertex& v) const;  // non-frozen, in-window
  // The involution (i,p) <-> (i',p-1), regardless of window membership.
  ZVertex sigma_vertex(const ZVertex& v) const;

  std::string dot(bool with_tau = false) const;

 private:
  Quiver q_;
  int pmin_, pmax_;
  bool framed_;
  Configuration config_;
  std::vector<ZVertex> verts_;
  std::vector<ZArrow> arrows_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> sigma_;
};

TranslationQuiver repetition(const Quiver& q, int pmin, int pmax, bool with_frame = false,
                             const Configuration& config = Configuration::all());

// One entry per non-frozen vertex in canonical order; complete==false flags a
// boundary mesh (tau(x) outside the window), which imposes no relation.
std::vector<MeshRelator> mesh_relators(const TranslationQuiver& tq);

}  // namespace orbitcat
