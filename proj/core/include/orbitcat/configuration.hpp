#pragma once

#include <set>
#include <string>
#include <utility>

namespace orbitcat {

// Level-periodic subset of Q0 x Z: (i,p) is a member iff (i, p mod m) is a
// listed residue. "all" is every vertex at every level.
class Configuration {
 public:
  static Configuration all();
  static Configuration none();
  Configuration(int period, std::set<std::pair<std::string, int>> residues);

  bool is_all() const { return all_; }
  bool is_empty() const { return !all_ && residues_.empty(); }
  int period() const { return period_; }
  const std::set<std::pair<std::string, int>>& residues() const { return residues_; }

  bool contains(const std::string& base, int level) const;

  // "period=1; residues=all" / "period=2; residues=(1,0),(2,1)" / "...=none"
  std::string str() const;
  static Configuration parse(const std::string& text);

  bool operator==(const Configuration&) const = default;

 private:
  Configuration() = default;
  int period_ = 1;
  bool all_ = false;
  std::set<std::pair<std::string, int>> residues_;  // residue already reduced mod period
};

}  // namespace orbitcat
