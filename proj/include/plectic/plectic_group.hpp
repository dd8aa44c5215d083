#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "plectic/group.hpp"

namespace plectic {

/// An automorphism of G as a right H-set: a bijection a of G's elements with
/// a(g·h) = a(g)·h for all h in H.  Stored as the full image table over G's
/// element indices.  These form the group G#H under composition.
class PlecticElement {
 public:
  PlecticElement(GroupRef group, Subgroup sub, std::vector<int> mapping)
      : group_(std::move(group)), sub_(std::move(sub)), mapping_(std::move(mapping)) {
    require(sub_.parent() == group_, "subgroup belongs to a different group");
    const auto& G = *group_;
    require(mapping_.size() == static_cast<std::size_t>(G.order()),
            "mapping must cover every group element");
    std::vector<char> seen(G.order(), 0);
    for (int v : mapping_) {
      require(v >= 0 && v < G.order(), "mapping image out of range");
      require(!seen[v], "mapping is not a bijection");
      seen[v] = 1;
    }
    for (int g = 0; g < G.order(); ++g)
      for (int h : sub_.members())
        require(mapping_[G.mul(g, h)] == G.mul(mapping_[g], h),
                "mapping is not right-equivariant for the subgroup");
  }

  const GroupRef& group() const { return group_; }
  const Subgroup& sub() const { return sub_; }
  const std::vector<int>& mapping() const { return mapping_; }
  int apply(int elem) const { return mapping_[elem]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < mapping_.size(); ++i)
      if (mapping_[i] != static_cast<int>(i)) return false;
    return true;
  }

  friend bool operator==(const PlecticElement& a, const PlecticElement& b) {
    return a.group_ == b.group_ && a.sub_.same_set(b.sub_) && a.mapping_ == b.mapping_;
  }

 private:
  GroupRef group_;
  Subgroup sub_;
  std::vector<int> mapping_;
};

inline PlecticElement plectic_identity(GroupRef group, Subgroup sub) {
  std::vector<int> im(group->order());
  std::iota(im.begin(), im.end(), 0);
  return PlecticElement(std::move(group), std::move(sub), std::move(im));
}

/// Function composition: (a∘b)(g) = a(b(g)).
inline PlecticElement compose(const PlecticElement& a, const PlecticElement& b) {
  require(a.group() == b.group() && a.sub().same_set(b.sub()),
          "composing automorphisms over different data");
  std::vector<int> im(a.mapping().size());
  for (std::size_t g = 0; g < im.size(); ++g) im[g] = a.apply(b.apply(static_cast<int>(g)));
  return PlecticElement(a.group(), a.sub(), std::move(im));
}

inline PlecticElement inverse(const PlecticElement& a) {
  std::vector<int> im(a.mapping().size());
  for (std::size_t g = 0; g < im.size(); ++g) im[a.apply(static_cast<int>(g))] = static_cast<int>(g);
  return PlecticElement(a.group(), a.sub(), std::move(im));
}

/// Left translation L_g: x -> g·x, the canonical embedding of G into G#H.
inline PlecticElement left_translate(const GroupRef& group, const Subgroup& sub, int g) {
  const auto& G = *group;
  std::vector<int> im(G.order());
  for (int x = 0; x < G.order(); ++x) im[x] = G.mul(g, x);
  return PlecticElement(group, sub, std::move(im));
}

/// Wreath coordinates of a in G#H relative to a section s of X = G/H:
/// pi(x) = coset of a(s_x), and h_x = s_{pi(x)}^{-1} · a(s_x) in H.
struct WreathDatum {
  std::map<int, int> pi;  // coset id -> coset id
  std::map<int, int> h;   // coset id -> element index, lies in H

  friend bool operator==(const WreathDatum&, const WreathDatum&) = default;

  /// "pi: <cycles>; h: <label> -> <element cycles>, ...".  Coset labels are
  /// 1-based positions in the table's id order (cosets sorted by minimal
  /// element index), so they run 1..|X|.
  std::string str(const FiniteGroup& G, const CosetTable& X) const {
    std::vector<int> images(X.count());
    for (const auto& [x, px] : pi) images[X.position(x)] = X.position(px);
    std::string out = "pi: " + Perm(images).cycles() + "; h:";
    bool first = true;
    for (const auto& [x, hx] : h) {
      out += first ? " " : ", ";
      out += std::to_string(X.position(x) + 1) + " -> " + G.element(hx).cycles();
      first = false;
    }
    return out;
  }
};

/// Parses the WreathDatum::str format.  Every coset must get an h entry; the
/// pi cycles act on the 1-based coset labels.
inline WreathDatum parse_wreath(const std::string& text, const FiniteGroup& G,
                                const CosetTable& X) {
  auto strip = [](std::string s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  auto semi = text.find(';');
  require(semi != std::string::npos, "wreath form needs 'pi: ...; h: ...'");
  std::string pi_part = strip(text.substr(0, semi));
  std::string h_part = strip(text.substr(semi + 1));
  require(pi_part.rfind("pi:", 0) == 0, "wreath form must start with 'pi:'");
  require(h_part.rfind("h:", 0) == 0, "wreath form needs an 'h:' part");
  WreathDatum d;
  Perm pi_perm = Perm::parse_cycles(strip(pi_part.substr(3)), X.count());
  for (int p = 0; p < X.count(); ++p) d.pi[X.id_at(p)] = X.id_at(pi_perm(p));
  std::string rest = strip(h_part.substr(2));
  std::size_t start = 0;
  while (start <= rest.size()) {
    auto comma = rest.find(',', start);
    std::string entry =
        strip(comma == std::string::npos ? rest.substr(start) : rest.substr(start, comma - start));
    auto arrow = entry.find("->");
    require(arrow != std::string::npos, "h entry needs '<label> -> <cycles>'");
    std::string label_s = strip(entry.substr(0, arrow));
    int label = 0;
    try {
      std::size_t used = 0;
      label = std::stoi(label_s, &used);
      require(used == label_s.size(), "bad coset label");
    } catch (const std::exception&) {
      fail("bad coset label '" + label_s + "'");
    }
    require(label >= 1 && label <= X.count(), "coset label out of range");
    int id = X.id_at(label - 1);
    require(!d.h.count(id), "duplicate h entry for a coset");
    d.h[id] = G.index_of(Perm::parse_cycles(strip(entry.substr(arrow + 2)), G.degree()));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  require(d.h.size() == static_cast<std::size_t>(X.count()),
          "h part must cover every coset");
  return d;
}

inline WreathDatum to_wreath(const PlecticElement& a, const CosetTable& X,
                             const CosetSection& s) {
  const auto& G = *a.group();
  WreathDatum d;
  for (int x : X.ids()) {
    int image = a.apply(s.rep(x));
    int pix = X.id_of_element(image);
    int hx = G.mul(G.inv(s.rep(pix)), image);
    require(a.sub().contains(hx), "wreath coordinate escaped the subgroup");
    d.pi[x] = pix;
    d.h[x] = hx;
  }
  return d;
}

inline PlecticElement from_wreath(const GroupRef& group, const Subgroup& sub,
                                  const CosetTable& X, const CosetSection& s,
                                  const WreathDatum& d) {
  const auto& G = *group;
  for (const auto& [x, hx] : d.h)
    require(sub.contains(hx), "wreath h-coordinate must lie in the subgroup");
  std::vector<int> im(G.order());
  for (int g = 0; g < G.order(); ++g) {
    int x = X.id_of_element(g);
    int rest = G.mul(G.inv(s.rep(x)), g);  // g = s_x · rest with rest in H
    im[g] = G.mul(G.mul(s.rep(d.pi.at(x)), d.h.at(x)), rest);
  }
  return PlecticElement(group, sub, std::move(im));
}

/// The same bijection viewed in G#H' for H' <= H.
inline PlecticElement include_into_finer(const PlecticElement& a, const Subgroup& finer) {
  require(finer.is_subgroup_of(a.sub()), "inclusion needs H' <= H");
  return PlecticElement(a.group(), finer, a.mapping());
}

inline Subgroup conjugate_subgroup(const Subgroup& H, int u) {
  const auto& G = *H.parent();
  std::vector<int> members;
  for (int h : H.members()) members.push_back(G.conj(u, h));
  return Subgroup::from_indices(H.parent(), std::move(members));
}

/// Transport [u]: G#H -> G#(uHu^{-1}), a -> (g -> a(g·u)·u^{-1}).  Depends
/// only on the coset u·H.
inline PlecticElement conjugate_transport(const PlecticElement& a, int u) {
  const auto& G = *a.group();
  std::vector<int> im(G.order());
  for (int g = 0; g < G.order(); ++g) im[g] = G.mul(a.apply(G.mul(g, u)), G.inv(u));
  return PlecticElement(a.group(), conjugate_subgroup(a.sub(), u), std::move(im));
}

/// G#H materialized: all |X|!·|H|^{|X|} elements in a fixed deterministic
/// order (coset permutations in lexicographic order, then the H-families as
/// an odometer over the coset list, entries in element-index order).
class PlecticGroup {
 public:
  static PlecticGroup materialize(GroupRef group, Subgroup sub,
                                  std::size_t cap = wreath_enum_cap()) {
    PlecticGroup P(std::move(group), std::move(sub));
    const int nx = P.cosets_.count();
    std::size_t total = 1;
    for (int i = 2; i <= nx; ++i) {
      total *= static_cast<std::size_t>(i);
      require(total <= cap, "automorphism group exceeds enumeration cap");
    }
    for (int i = 0; i < nx; ++i) {
      total *= static_cast<std::size_t>(P.sub_.order());
      require(total <= cap, "automorphism group exceeds enumeration cap");
    }
    std::vector<int> pos(nx);
    std::iota(pos.begin(), pos.end(), 0);
    do {
      WreathDatum d;
      for (int i = 0; i < nx; ++i) d.pi[P.cosets_.id_at(i)] = P.cosets_.id_at(pos[i]);
      std::vector<std::size_t> digit(nx, 0);
      while (true) {
        for (int i = 0; i < nx; ++i)
          d.h[P.cosets_.id_at(i)] = P.sub_.members()[digit[i]];
        P.push(from_wreath(P.group_, P.sub_, P.cosets_, P.section_, d));
        int k = nx - 1;
        for (; k >= 0; --k) {
          if (++digit[k] < static_cast<std::size_t>(P.sub_.order())) break;
          digit[k] = 0;
        }
        if (k < 0) break;
      }
    } while (std::next_permutation(pos.begin(), pos.end()));
    return P;
  }

  const GroupRef& group() const { return group_; }
  const Subgroup& sub() const { return sub_; }
  const CosetTable& cosets() const { return cosets_; }
  const CosetSection& section() const { return section_; }

  int order() const { return static_cast<int>(elements_.size()); }
  const PlecticElement& element(int i) const { return elements_[i]; }
  int index_of(const PlecticElement& a) const {
    auto it = index_.find(a.mapping());
    require(it != index_.end(), "automorphism not in the materialized group");
    return it->second;
  }
  int mul(int a, int b) const { return index_of(compose(elements_[a], elements_[b])); }
  int inv(int a) const { return index_of(inverse(elements_[a])); }
  int identity() const { return id_; }

 private:
  PlecticGroup(GroupRef group, Subgroup sub)
      : group_(std::move(group)),
        sub_(std::move(sub)),
        cosets_(left_cosets(group_, sub_)),
        section_(CosetSection::canonical(cosets_)) {}

  void push(PlecticElement e) {
    if (e.is_identity()) id_ = static_cast<int>(elements_.size());
    index_.emplace(e.mapping(), static_cast<int>(elements_.size()));
    elements_.push_back(std::move(e));
  }

  GroupRef group_;
  Subgroup sub_;
  CosetTable cosets_;
  CosetSection section_;
  std::vector<PlecticElement> elements_;
  std::map<std::vector<int>, int> index_;
  int id_ = -1;
};

}  // namespace plectic
