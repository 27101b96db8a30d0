#ifndef MTLSMC_ATOMS_HPP
#define MTLSMC_ATOMS_HPP

#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "mtlsmc/formula.hpp"

namespace mtlsmc {

/// Assignment of a state-space region to each atomic proposition.
class AtomMap {
 public:
  AtomMap() = default;
  AtomMap(std::initializer_list<std::pair<const std::string, RegionSet>> init) : regions_(init) {}

  void set(const std::string& name, RegionSet region) { regions_[name] = std::move(region); }

  const RegionSet& region(const std::string& name) const {
    auto it = regions_.find(name);
    if (it == regions_.end()) throw UnknownAtom(name);
    return it->second;
  }

  bool contains(const std::string& name) const { return regions_.count(name) != 0; }
  const std::map<std::string, RegionSet>& regions() const noexcept { return regions_; }

 private:
  std::map<std::string, RegionSet> regions_;
};

/// Reads `name = <region notation>` lines; blank lines and '#' comments are
/// skipped. Duplicate names are an error.
inline AtomMap read_atom_map(std::istream& in) {
  AtomMap atoms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw FormatError("expected 'name = region'", lineno);
    const std::string name(detail::trim(body.substr(0, eq)));
    if (name.empty()) throw FormatError("missing atom name", lineno);
    if (atoms.contains(name)) throw FormatError("duplicate atom '" + name + "'", lineno);
    try {
      atoms.set(name, parse_interval_set(body.substr(eq + 1)));
    } catch (const Error& e) {
      throw FormatError(e.what(), lineno);
    }
  }
  return atoms;
}

inline AtomMap parse_atom_map(const std::string& text) {
  std::istringstream in(text);
  return read_atom_map(in);
}

inline void write_atom_map(std::ostream& out, const AtomMap& atoms) {
  for (const auto& [name, region] : atoms.regions()) out << name << " = " << to_string(region) << "\n";
}

/// The state region B_p on which a propositional formula holds.
inline RegionSet propositional_region(const Formula& p, const AtomMap& atoms) {
  switch (p.op()) {
    case Op::Top: return RegionSet::line();
    case Op::Bot: return {};
    case Op::Atom: return atoms.region(p.name());
    case Op::Not: return complement_line(propositional_region(p.child(), atoms));
    case Op::And: return set_intersect(propositional_region(p.lhs(), atoms), propositional_region(p.rhs(), atoms));
    case Op::Or: return set_union(propositional_region(p.lhs(), atoms), propositional_region(p.rhs(), atoms));
    default: throw NotPropositional("temporal operator in propositional position: " + to_string(p));
  }
}

/// True iff the canonical components have pairwise disjoint closures.
inline bool check_separated(const RegionSet& b) {
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i].lo().value <= b[i - 1].hi().value) return false;
  }
  return true;
}

}  // namespace mtlsmc

#endif  // MTLSMC_ATOMS_HPP
