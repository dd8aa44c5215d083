#pragma once

// Instance files: line-oriented descriptions of the finite Galois models the
// tool runs on — the ambient permutation group, the field stabilizer /
// conjugation / totally-real level, an optional declared embedding type, and
// optional realization and nesting blocks — plus a byte-stable serializer
// and the built-in catalog.

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plectic/cm.hpp"
#include "plectic/weil.hpp"

namespace plectic {

struct InstanceFile {
  std::string name;
  GroupRef group;
  std::vector<Perm> group_generators;  // as declared; fixes element numbering
  CMRef instance;
  std::optional<Subgroup> level;  // totally-real stabilizer, contains H and cH
  std::optional<std::vector<int>> declared_type;  // embedding coset ids
  bool realize_galois = false;
  std::optional<Subgroup> mid;  // intermediate stabilizer between H and the level

  const Subgroup& level_subgroup() const { return *level; }
};

namespace ioutil {

inline void syntax_error(int line, const std::string& msg) {
  fail("line " + std::to_string(line) + ": " + msg);
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

/// Greedy minimal generating list: walk the members in order, keep the ones
/// that enlarge the closure.  Empty for the trivial subgroup.
inline std::vector<int> minimal_generator_indices(const Subgroup& s) {
  std::vector<int> gens;
  Subgroup cur = Subgroup::trivial(s.parent());
  for (int m : s.members()) {
    if (cur.contains(m)) continue;
    gens.push_back(m);
    cur = Subgroup::from_generator_indices(s.parent(), gens);
    if (cur.order() == s.order()) break;
  }
  return gens;
}

inline std::string generator_text(const GroupRef& G, const std::vector<int>& gens) {
  if (gens.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) out += " ; ";
    out += G->element(gens[i]).cycles();
  }
  return out;
}

inline std::string subgroup_text(const Subgroup& s) {
  return generator_text(s.parent(), minimal_generator_indices(s));
}

}  // namespace ioutil

inline InstanceFile parse_instance_text(const std::string& text, const std::string& name) {
  using ioutil::Entry;
  static const std::map<std::string, std::vector<std::string>> kSections = {
      {"group", {"degree", "generators"}},
      {"cm", {"H.generators", "c.perm", "F.generators"}},
      {"cmtype", {"cmtype.cosets"}},
      {"weil", {"realize"}},
      {"nested", {"mid.generators"}},
  };

  std::map<std::string, std::map<std::string, Entry>> entries;
  std::string section;
  bool any_content = false;
  int lineno = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = ioutil::trim(line);
    if (line.empty()) continue;
    any_content = true;
    if (line.front() == '[') {
      if (line.back() != ']') ioutil::syntax_error(lineno, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (!kSections.count(section))
        ioutil::syntax_error(lineno, "unknown section [" + section + "]");
      if (entries.count(section))
        ioutil::syntax_error(lineno, "duplicate section [" + section + "]");
      entries[section];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) ioutil::syntax_error(lineno, "expected key = value");
    std::string key = ioutil::trim(line.substr(0, eq));
    std::string value = ioutil::trim(line.substr(eq + 1));
    if (section.empty()) ioutil::syntax_error(lineno, "key outside any section");
    const auto& allowed = kSections.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      ioutil::syntax_error(lineno, "unknown key '" + key + "' in [" + section + "]");
    if (entries[section].count(key)) ioutil::syntax_error(lineno, "duplicate key '" + key + "'");
    if (value.empty()) ioutil::syntax_error(lineno, "empty value for '" + key + "'");
    entries[section][key] = Entry{value, lineno};
  }
  if (!any_content) ioutil::syntax_error(1, "empty instance file");

  auto need = [&](const std::string& sec, const std::string& key) -> const Entry& {
    auto s = entries.find(sec);
    if (s == entries.end()) fail("missing section [" + sec + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) fail("missing key '" + key + "' in [" + sec + "]");
    return k->second;
  };
  auto have = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto s = entries.find(sec);
    if (s == entries.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };

  InstanceFile out;
  out.name = name;

  const Entry& deg_e = need("group", "degree");
  int degree = 0;
  try {
    std::size_t used = 0;
    degree = std::stoi(deg_e.value, &used);
    if (used != deg_e.value.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    ioutil::syntax_error(deg_e.line, "degree must be an integer");
  }
  if (degree <= 0) ioutil::syntax_error(deg_e.line, "degree must be positive");

  auto parse_perms = [&](const Entry& e) {
    std::vector<Perm> perms;
    for (const std::string& piece : ioutil::split(e.value, ';')) {
      std::string p = ioutil::trim(piece);
      if (p.empty()) ioutil::syntax_error(e.line, "empty permutation in list");
      try {
        perms.push_back(Perm::parse_cycles(p, degree));
      } catch (const Error& err) {
        ioutil::syntax_error(e.line, err.what());
      }
    }
    return perms;
  };

  out.group_generators = parse_perms(need("group", "generators"));
  out.group = FiniteGroup::from_generators(degree, out.group_generators);
  const GroupRef& G = out.group;

  auto element_indices = [&](const Entry& e) {
    std::vector<int> idx;
    for (const Perm& p : parse_perms(e)) {
      try {
        idx.push_back(G->index_of(p));
      } catch (const Error& err) {
        ioutil::syntax_error(e.line, err.what());
      }
    }
    return idx;
  };
  auto subgroup_of = [&](const Entry& e) {
    return Subgroup::from_generator_indices(G, element_indices(e));
  };

  Subgroup H = subgroup_of(need("cm", "H.generators"));
  const Entry& c_e = need("cm", "c.perm");
  std::vector<int> c_idx = element_indices(c_e);
  if (c_idx.size() != 1) ioutil::syntax_error(c_e.line, "c.perm must be a single permutation");
  out.instance = CMInstance::make(G, H, c_idx[0]);

  if (const Entry* f_e = have("cm", "F.generators")) {
    Subgroup F = subgroup_of(*f_e);
    require(out.instance->real_subgroup().is_subgroup_of(F),
            "the real stabilizer must lie inside the declared level");
    validate_totally_real(G, F, c_idx[0]);
    out.level = std::move(F);
  } else {
    out.level = out.instance->real_subgroup();
  }

  if (const Entry* t_e = have("cmtype", "cmtype.cosets")) {
    std::vector<int> ids;
    for (const std::string& piece : ioutil::split(t_e->value, ' ')) {
      std::string p = ioutil::trim(piece);
      if (p.empty()) continue;
      int rep = 0;
      try {
        std::size_t used = 0;
        rep = std::stoi(p, &used);
        if (used != p.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        ioutil::syntax_error(t_e->line, "coset representatives must be integers");
      }
      if (rep < 1 || rep > G->order())
        ioutil::syntax_error(t_e->line, "coset representative out of range");
      int id = rep - 1;
      const auto& ids_all = out.instance->sigmaK().ids();
      if (std::find(ids_all.begin(), ids_all.end(), id) == ids_all.end())
        ioutil::syntax_error(t_e->line, "not a minimal embedding representative");
      ids.push_back(id);
    }
    if (ids.empty()) ioutil::syntax_error(t_e->line, "empty embedding list");
    out.declared_type = std::move(ids);
  }

  if (const Entry* r_e = have("weil", "realize")) {
    if (r_e->value != "galois")
      ioutil::syntax_error(r_e->line, "unknown realization '" + r_e->value + "'");
    out.realize_galois = true;
    galois_realized_datum(out.instance);  // must be constructible; errors propagate
  }

  if (const Entry* m_e = have("nested", "mid.generators")) {
    Subgroup mid = subgroup_of(*m_e);
    require(out.instance->sub().is_subgroup_of(mid),
            "nested stabilizer must contain the field stabilizer");
    require(mid.is_subgroup_of(*out.level), "nested stabilizer must lie inside the level");
    require(!mid.contains(c_idx[0]), "conjugation must stay outside the nested stabilizer");
    CMInstance::make(G, mid, c_idx[0]);  // the coarser field must be a valid model
    out.mid = std::move(mid);
  }

  return out;
}

inline InstanceFile parse_instance(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  std::size_t slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  std::size_t dot = stem.find_last_of('.');
  if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_instance_text(buf.str(), stem);
}

inline std::string serialize_instance(const InstanceFile& inst) {
  const GroupRef& G = inst.group;
  std::ostringstream out;
  out << "[group]\n";
  out << "degree = " << G->degree() << "\n";
  out << "generators = ";
  for (std::size_t i = 0; i < inst.group_generators.size(); ++i) {
    if (i) out << " ; ";
    out << inst.group_generators[i].cycles();
  }
  out << "\n\n[cm]\n";
  out << "H.generators = " << ioutil::subgroup_text(inst.instance->sub()) << "\n";
  out << "c.perm = " << G->element(inst.instance->conj()).cycles() << "\n";
  out << "F.generators = " << ioutil::subgroup_text(*inst.level) << "\n";
  if (inst.declared_type) {
    std::vector<int> ids = *inst.declared_type;
    std::sort(ids.begin(), ids.end());
    out << "\n[cmtype]\ncmtype.cosets =";
    for (int id : ids) out << " " << (id + 1);
    out << "\n";
  }
  if (inst.realize_galois) out << "\n[weil]\nrealize = galois\n";
  if (inst.mid) out << "\n[nested]\nmid.generators = " << ioutil::subgroup_text(*inst.mid) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Built-in catalog: residue models on the sorted unit lists mod n, one
// dihedral model, and the nested residue pair.

namespace ioutil {

inline std::vector<int> units_mod(int n) {
  std::vector<int> out;
  for (int a = 1; a < n; ++a)
    if (std::gcd(a, n) == 1) out.push_back(a);
  return out;
}

/// The permutation x -> a*x mod n of the sorted unit list.
inline Perm residue_perm(int n, int a) {
  auto us = units_mod(n);
  auto pos = [&](int r) {
    for (std::size_t i = 0; i < us.size(); ++i)
      if (us[i] == r) return static_cast<int>(i);
    fail("not a unit");
    return -1;
  };
  std::vector<int> im(us.size());
  for (std::size_t i = 0; i < us.size(); ++i)
    im[i] = pos(a * us[i] % n);
  return Perm(im);
}

struct ResidueModel {
  GroupRef group;
  std::vector<Perm> generators;
};

inline ResidueModel residue_model(int n, const std::vector<int>& gens) {
  ResidueModel m;
  for (int g : gens) m.generators.push_back(residue_perm(n, g));
  m.group = FiniteGroup::from_generators(static_cast<int>(units_mod(n).size()), m.generators);
  return m;
}

inline Subgroup residue_subgroup(const GroupRef& G, int n, const std::vector<int>& residues) {
  std::vector<int> idx;
  for (int r : residues) idx.push_back(G->index_of(residue_perm(n, r)));
  return Subgroup::from_indices(G, idx);
}

inline std::vector<int> canonical_type(const CMRef& inst) {
  std::vector<int> ids;
  for (const auto& [rho, crho] : inst->fibers()) ids.push_back(rho);
  return ids;
}

}  // namespace ioutil

inline std::vector<std::string> catalog_names() {
  return {"zeta5", "zeta8", "zeta15", "zeta15-nested", "dihedral"};
}

inline InstanceFile builtin_instance(const std::string& name) {
  using namespace ioutil;
  InstanceFile out;
  out.name = name;
  out.realize_galois = true;
  if (name == "zeta5") {
    ResidueModel m = residue_model(5, {2});
    out.group = m.group;
    out.group_generators = m.generators;
    out.instance =
        CMInstance::make(m.group, Subgroup::trivial(m.group), m.group->index_of(residue_perm(5, 4)));
    out.level = Subgroup::whole(m.group);
  } else if (name == "zeta8") {
    ResidueModel m = residue_model(8, {3, 5});
    out.group = m.group;
    out.group_generators = m.generators;
    out.instance = CMInstance::make(m.group, residue_subgroup(m.group, 8, {1, 5}),
                                    m.group->index_of(residue_perm(8, 7)));
    out.level = Subgroup::whole(m.group);
  } else if (name == "zeta15") {
    ResidueModel m = residue_model(15, {2, 14});
    out.group = m.group;
    out.group_generators = m.generators;
    out.instance = CMInstance::make(m.group, residue_subgroup(m.group, 15, {1, 11}),
                                    m.group->index_of(residue_perm(15, 14)));
    out.level = residue_subgroup(m.group, 15, {1, 4, 11, 14});
  } else if (name == "zeta15-nested") {
    ResidueModel m = residue_model(15, {2, 14});
    out.group = m.group;
    out.group_generators = m.generators;
    out.instance = CMInstance::make(m.group, Subgroup::trivial(m.group),
                                    m.group->index_of(residue_perm(15, 14)));
    out.level = residue_subgroup(m.group, 15, {1, 4, 11, 14});
    out.mid = residue_subgroup(m.group, 15, {1, 11});
  } else if (name == "dihedral") {
    std::vector<Perm> gens = {Perm::parse_cycles("(1 2 3 4)", 4), Perm::parse_cycles("(2 4)", 4)};
    GroupRef G = group_from_generators(4, gens);
    out.group = G;
    out.group_generators = gens;
    int r = G->index_of(gens[0]);
    int s = G->index_of(gens[1]);
    out.instance = CMInstance::make(G, Subgroup::from_generator_indices(G, {r}), s);
    out.level = Subgroup::whole(G);
  } else {
    fail("unknown catalog instance: " + name);
  }
  out.declared_type = canonical_type(out.instance);
  return out;
}

}  // namespace plectic
