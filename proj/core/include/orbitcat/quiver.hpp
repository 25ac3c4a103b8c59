#pragma once

#include <optional>
#include <string>
#include <vector>

namespace orbitcat {

struct Arrow {
  std::string id;
  std::string src;
  std::string tgt;
  bool operator==(const Arrow&) const = default;
};

// Finite acyclic quiver with string vertex/arrow ids. Construction validates:
// declared endpoints, unique ids, no loops, no directed cycles.
class Quiver {
 public:
  Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows);

  int num_vertices() const { return int(vertices_.size()); }
  int num_arrows() const { return int(arrows_.size()); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  bool has_vertex(const std::string& id) const;
  int vertex_index(const std::string& id) const;  // throws on unknown id
  int arrow_index(const std::string& id) const;
  int arrow_src(int a) const { return src_[a]; }
  int arrow_tgt(int a) const { return tgt_[a]; }

  const std::vector<int>& arrows_from(int v) const { return out_[v]; }
  const std::vector<int>& arrows_to(int v) const { return in_[v]; }

  // Deterministic topological order (sources first, declaration order ties).
  const std::vector<int>& topo_order() const { return topo_; }
  int topo_position(int v) const { return topo_pos_[v]; }

  Quiver opposite() const;
  std::string dot() const;

  bool operator==(const Quiver& o) const {
    return vertices_ == o.vertices_ && arrows_ == o.arrows_;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::vector<int> src_, tgt_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> topo_, topo_pos_;
};

enum class DynkinFamily { A, D, E };

struct DynkinType {
  DynkinFamily family;
  int rank;
  bool operator==(const DynkinType&) const = default;
};

// Classification of the underlying undirected graph; nullopt when the graph
// is not a simply laced Dynkin diagram (disconnected, cyclic, multi-edge,
// bad branch shape).
std::optional<DynkinType> classify_dynkin(const Quiver& q);

// Standard orientation used throughout: A_n is the chain 1->2->...->n;
// D_n is 1->2->...->(n-2) with (n-2)->(n-1) and (n-2)->n;
// E_n is the chain 1->...->(n-1) with 3->n.
Quiver dynkin_quiver(const DynkinType& t);

int coxeter_number(const DynkinType& t);
int positive_root_count(const DynkinType& t);

std::string dynkin_name(const DynkinType& t);               // "A2", "D4", ...
std::optional<DynkinType> parse_dynkin(const std::string&);  // inverse of above

// Adds a frozen companion i' per vertex i and an arrow f_i : i -> i'.
Quiver framed(const Quiver& q);

// {"vertices":[...], "arrows":[{"id":...,"src":...,"tgt":...}]}
std::string quiver_to_json(const Quiver& q);
Quiver quiver_from_json(const std::string& text);

}  // namespace orbitcat
