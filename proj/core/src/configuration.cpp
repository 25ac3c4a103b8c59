#include "orbitcat/configuration.hpp"

#include <sstream>
#include <stdexcept>

namespace orbitcat {

namespace {

int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Configuration Configuration::all() {
  Configuration c;
  c.all_ = true;
  return c;
}

Configuration Configuration::none() { return Configuration(); }

Configuration::Configuration(int period, std::set<std::pair<std::string, int>> residues) {
  if (period < 1) throw std::invalid_argument("Configuration: period must be positive");
  period_ = period;
  for (auto& [v, r] : residues) residues_.emplace(v, mod(r, period));
}

bool Configuration::contains(const std::string& base, int level) const {
  if (all_) return true;
  return residues_.count({base, mod(level, period_)}) > 0;
}

std::string Configuration::str() const {
  std::ostringstream os;
  os << "period=" << period_ << "; residues=";
  if (all_) {
    os << "all";
  } else if (residues_.empty()) {
    os << "none";
  } else {
    bool first = true;
    for (const auto& [v, r] : residues_) {
      if (!first) os << ",";
      first = false;
      os << "(" << v << "," << r << ")";
    }
  }
  return os.str();
}

Configuration Configuration::parse(const std::string& text) {
  int period = 1;
  bool have_period = false;
  std::string residues_text;
  bool have_residues = false;

  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("Configuration: expected key=value in '" + part + "'");
    std::string key = trim(part.substr(0, eq));
    std::string val = trim(part.substr(eq + 1));
    if (key == "period") {
      period = std::stoi(val);
      have_period = true;
    } else if (key == "residues") {
      residues_text = val;
      have_residues = true;
    } else {
      throw std::invalid_argument("Configuration: unknown key '" + key + "'");
    }
  }
  if (!have_period || !have_residues)
    throw std::invalid_argument("Configuration: need both period and residues");
  if (residues_text == "all") {
    Configuration c = Configuration::all();
    c.period_ = period;
    return c;
  }
  if (residues_text == "none" || residues_text.empty()) {
    Configuration c;
    c.period_ = period;
    return c;
  }

  std::set<std::pair<std::string, int>> residues;
  size_t i = 0;
  while (i < residues_text.size()) {
    while (i < residues_text.size() && (residues_text[i] == ',' || residues_text[i] == ' ')) ++i;
    if (i >= residues_text.size()) break;
    if (residues_text[i] != '(')
      throw std::invalid_argument("Configuration: expected '(' in residues");
    size_t close = residues_text.find(')', i);
    if (close == std::string::npos)
      throw std::invalid_argument("Configuration: unbalanced '(' in residues");
    std::string pair_text = residues_text.substr(i + 1, close - i - 1);
    auto comma = pair_text.rfind(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("Configuration: residue needs (vertex,residue)");
    std::string v = trim(pair_text.substr(0, comma));
    int r = std::stoi(trim(pair_text.substr(comma + 1)));
    residues.emplace(v, r);
    i = close + 1;
  }
  return Configuration(period, std::move(residues));
}

}  // namespace orbitcat
