#include "orbitcat/quiver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace orbitcat {

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
  std::map<std::string, int> vidx;
  for (int i = 0; i < int(vertices_.size()); ++i) {
    if (!vidx.emplace(vertices_[i], i).second)
      throw std::invalid_argument("Quiver: duplicate vertex id " + vertices_[i]);
  }
  std::set<std::string> aids;
  out_.assign(vertices_.size(), {});
  in_.assign(vertices_.size(), {});
  for (int a = 0; a < int(arrows_.size()); ++a) {
    const Arrow& ar = arrows_[a];
    if (!aids.insert(ar.id).second)
      throw std::invalid_argument("Quiver: duplicate arrow id " + ar.id);
    auto s = vidx.find(ar.src), t = vidx.find(ar.tgt);
    if (s == vidx.end() || t == vidx.end())
      throw std::invalid_argument("Quiver: arrow " + ar.id + " has undeclared endpoint");
    if (s->second == t->second)
      throw std::invalid_argument("Quiver: loop at " + ar.src);
    src_.push_back(s->second);
    tgt_.push_back(t->second);
    out_[s->second].push_back(a);
    in_[t->second].push_back(a);
  }
  // Kahn's algorithm; smallest declaration index first for determinism.
  std::vector<int> indeg(vertices_.size());
  for (int t : tgt_) ++indeg[t];
  std::set<int> ready;
  for (int v = 0; v < num_vertices(); ++v)
    if (indeg[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(v);
    for (int a : out_[v])
      if (--indeg[tgt_[a]] == 0) ready.insert(tgt_[a]);
  }
  if (int(topo_.size()) != num_vertices())
    throw std::invalid_argument("Quiver: directed cycle");
  topo_pos_.assign(num_vertices(), -1);
  for (int i = 0; i < num_vertices(); ++i) topo_pos_[topo_[i]] = i;
}

bool Quiver::has_vertex(const std::string& id) const {
  return std::find(vertices_.begin(), vertices_.end(), id) != vertices_.end();
}

int Quiver::vertex_index(const std::string& id) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end()) throw std::invalid_argument("Quiver: unknown vertex " + id);
  return int(it - vertices_.begin());
}

int Quiver::arrow_index(const std::string& id) const {
  for (int a = 0; a < num_arrows(); ++a)
    if (arrows_[a].id == id) return a;
  throw std::invalid_argument("Quiver: unknown arrow " + id);
}

Quiver Quiver::opposite() const {
  std::vector<Arrow> rev;
  rev.reserve(arrows_.size());
  for (const Arrow& a : arrows_) rev.push_back({a.id, a.tgt, a.src});
  return Quiver(vertices_, std::move(rev));
}

std::string Quiver::dot() const {
  std::ostringstream os;
  os << "digraph Q {\n";
  for (const auto& v : vertices_) os << "  \"" << v << "\";\n";
  for (const auto& a : arrows_)
    os << "  \"" << a.src << "\" -> \"" << a.tgt << "\" [label=\"" << a.id << "\"];\n";
  os << "}\n";
  return os.str();
}

std::optional<DynkinType> classify_dynkin(const Quiver& q) {
  const int n = q.num_vertices();
  if (n == 0) return std::nullopt;
  // Simply laced diagrams are trees without multi-edges.
  if (q.num_arrows() != n - 1) return std::nullopt;
  std::set<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj(n);
  for (const Arrow& a : q.arrows()) {
    int s = q.vertex_index(a.src), t = q.vertex_index(a.tgt);
    auto e = std::minmax(s, t);
    if (!edges.insert({e.first, e.second}).second) return std::nullopt;
    adj[s].push_back(t);
    adj[t].push_back(s);
  }
  // Connectivity.
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != n) return std::nullopt;

  std::vector<int> branch;
  for (int v = 0; v < n; ++v) {
    if (int(adj[v].size()) > 3) return std::nullopt;
    if (int(adj[v].size()) == 3) branch.push_back(v);
  }
  if (branch.empty()) return DynkinType{DynkinFamily::A, n};
  if (branch.size() > 1) return std::nullopt;

  // Arm lengths from the unique branch vertex.
  std::vector<int> arms;
  for (int start : adj[branch[0]]) {
    int prev = branch[0], cur = start, len = 1;
    while (int(adj[cur].size()) == 2) {
      int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = nxt;
      ++len;
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  if (arms[0] == 1 && arms[1] == 1) return DynkinType{DynkinFamily::D, arms[2] + 3};
  if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4)
    return DynkinType{DynkinFamily::E, arms[2] + 4};
  return std::nullopt;
}

Quiver dynkin_quiver(const DynkinType& t) {
  const int n = t.rank;
  auto name = [](int i) { return std::to_string(i); };
  std::vector<std::string> vs;
  for (int i = 1; i <= n; ++i) vs.push_back(name(i));
  std::vector<Arrow> as;
  auto add = [&](int s, int tg) {
    as.push_back({"a" + std::to_string(int(as.size()) + 1), name(s), name(tg)});
  };
  switch (t.family) {
    case DynkinFamily::A:
      if (n < 1) throw std::invalid_argument("A_n needs n>=1");
      for (int i = 1; i < n; ++i) add(i, i + 1);
      break;
    case DynkinFamily::D:
      if (n < 4) throw std::invalid_argument("D_n needs n>=4");
      for (int i = 1; i < n - 2; ++i) add(i, i + 1);
      add(n - 2, n - 1);
      add(n - 2, n);
      break;
    case DynkinFamily::E:
      if (n < 6 || n > 8) throw std::invalid_argument("E_n needs 6<=n<=8");
      for (int i = 1; i < n - 1; ++i) add(i, i + 1);
      add(3, n);
      break;
  }
  return Quiver(std::move(vs), std::move(as));
}

int coxeter_number(const DynkinType& t) {
  switch (t.family) {
    case DynkinFamily::A:
      return t.rank + 1;
    case DynkinFamily::D:
      return 2 * t.rank - 2;
    case DynkinFamily::E:
      return t.rank == 6 ? 12 : t.rank == 7 ? 18 : 30;
  }
  throw std::logic_error("coxeter_number");
}

int positive_root_count(const DynkinType& t) {
  switch (t.family) {
    case DynkinFamily::A:
      return t.rank * (t.rank + 1) / 2;
    case DynkinFamily::D:
      return t.rank * (t.rank - 1);
    case DynkinFamily::E:
      return t.rank == 6 ? 36 : t.rank == 7 ? 63 : 120;
  }
  throw std::logic_error("positive_root_count");
}

std::string dynkin_name(const DynkinType& t) {
  const char* f = t.family == DynkinFamily::A ? "A" : t.family == DynkinFamily::D ? "D" : "E";
  return f + std::to_string(t.rank);
}

std::optional<DynkinType> parse_dynkin(const std::string& s) {
  if (s.size() < 2) return std::nullopt;
  DynkinFamily fam;
  if (s[0] == 'A')
    fam = DynkinFamily::A;
  else if (s[0] == 'D')
    fam = DynkinFamily::D;
  else if (s[0] == 'E')
    fam = DynkinFamily::E;
  else
    return std::nullopt;
  int rank = 0;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    rank = rank * 10 + (s[i] - '0');
  }
  DynkinType t{fam, rank};
  if (fam == DynkinFamily::A && rank >= 1) return t;
  if (fam == DynkinFamily::D && rank >= 4) return t;
  if (fam == DynkinFamily::E && rank >= 6 && rank <= 8) return t;
  return std::nullopt;
}

Quiver framed(const Quiver& q) {
  std::vector<std::string> vs = q.vertices();
  for (const auto& v : q.vertices()) vs.push_back(v + "'");
  std::vector<Arrow> as = q.arrows();
  for (const auto& v : q.vertices()) as.push_back({"f_" + v, v, v + "'"});
  return Quiver(std::move(vs), std::move(as));
}

std::string quiver_to_json(const Quiver& q) {
  nlohmann::json j;
  j["vertices"] = q.vertices();
  j["arrows"] = nlohmann::json::array();
  for (const Arrow& a : q.arrows())
    j["arrows"].push_back({{"id", a.id}, {"src", a.src}, {"tgt", a.tgt}});
  return j.dump(2);
}

Quiver quiver_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::string> vs;
  for (const auto& v : j.at("vertices")) vs.push_back(v.get<std::string>());
  std::vector<Arrow> as;
  for (const auto& a : j.at("arrows"))
    as.push_back({a.at("id").get<std::string>(), a.at("src").get<std::string>(),
                  a.at("tgt").get<std::string>()});
  return Quiver(std::move(vs), std::move(as));
}

}  // namespace orbitcat
