#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "plectic/perm.hpp"

namespace plectic {

class FiniteGroup;
using GroupRef = std::shared_ptr<const FiniteGroup>;

/// A finite permutation group materialized as an explicit element list.
///
/// Element indices are stable and deterministic: from_generators enumerates
/// by breadth-first closure from the identity, multiplying each discovered
/// element on the right by the generators in the order given.  Index 0 is
/// always the identity there.  from_elements keeps the caller's order.
class FiniteGroup : public std::enable_shared_from_this<FiniteGroup> {
 public:
  static GroupRef from_generators(int degree, std::vector<Perm> generators,
                                  std::size_t cap = group_closure_cap()) {
    for (const Perm& g : generators)
      require(g.degree() == degree, "generator degree mismatch");
    auto grp = std::shared_ptr<FiniteGroup>(new FiniteGroup(degree));
    grp->generators_ = generators;
    grp->push_element(Perm::identity(degree));
    std::deque<int> todo{0};
    while (!todo.empty()) {
      int cur = todo.front();
      todo.pop_front();
      for (const Perm& g : generators) {
        Perm next = grp->elements_[cur] * g;
        if (grp->index_.count(next)) continue;
        require(grp->elements_.size() < cap,
                "group closure exceeds enumeration cap; instance too large");
        todo.push_back(grp->push_element(std::move(next)));
      }
    }
    grp->finish();
    return grp;
  }

  /// Wraps an explicit element list (order preserved).  The list must be
  /// duplicate-free and closed under composition.
  static GroupRef from_elements(int degree, std::vector<Perm> elements) {
    require(!elements.empty(), "empty element list");
    auto grp = std::shared_ptr<FiniteGroup>(new FiniteGroup(degree));
    for (Perm& p : elements) {
      require(p.degree() == degree, "element degree mismatch");
      require(!grp->index_.count(p), "duplicate element in list");
      grp->push_element(std::move(p));
    }
    for (int i = 0; i < grp->order(); ++i)
      for (int j = 0; j < grp->order(); ++j)
        require(grp->index_.count(grp->elements_[i] * grp->elements_[j]),
                "element list is not closed under composition");
    grp->finish();
    return grp;
  }

  int degree() const { return degree_; }
  int order() const { return static_cast<int>(elements_.size()); }
  const Perm& element(int i) const { return elements_[i]; }
  const std::vector<Perm>& elements() const { return elements_; }
  const std::vector<Perm>& generators() const { return generators_; }
  int identity_index() const { return identity_; }

  int find_index(const Perm& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
  }
  int index_of(const Perm& p) const {
    int i = find_index(p);
    require(i >= 0, "permutation is not a group element");
    return i;
  }

  int mul(int a, int b) const {
    if (!mult_.empty()) return mult_[a][b];
    return index_of(elements_[a] * elements_[b]);
  }
  int inv(int a) const { return inv_[a]; }
  int conj(int g, int a) const { return mul(mul(g, a), inv(g)); }  // g a g^-1

 private:
  explicit FiniteGroup(int degree) : degree_(degree) {}

  int push_element(Perm p) {
    int idx = static_cast<int>(elements_.size());
    index_.emplace(p, idx);
    elements_.push_back(std::move(p));
    return idx;
  }

  void finish() {
    identity_ = index_of(Perm::identity(degree_));
    inv_.resize(elements_.size());
    for (int i = 0; i < order(); ++i) inv_[i] = index_of(elements_[i].inverse());
    if (order() <= 512) {
      mult_.assign(order(), std::vector<int>(order()));
      for (int i = 0; i < order(); ++i)
        for (int j = 0; j < order(); ++j)
          mult_[i][j] = index_of(elements_[i] * elements_[j]);
    }
  }

  int degree_;
  int identity_ = 0;
  std::vector<Perm> elements_;
  std::vector<Perm> generators_;
  std::map<Perm, int> index_;
  std::vector<int> inv_;
  std::vector<std::vector<int>> mult_;
};

inline GroupRef group_from_generators(int degree, std::vector<Perm> generators,
                                      std::size_t cap = group_closure_cap()) {
  return FiniteGroup::from_generators(degree, std::move(generators), cap);
}

/// A subgroup, stored as a sorted list of parent element indices.
class Subgroup {
 public:
  static Subgroup from_indices(GroupRef parent, std::vector<int> members) {
    Subgroup s(std::move(parent), std::move(members));
    for (int a : s.members_)
      for (int b : s.members_)
        require(s.mask_[s.parent_->mul(a, b)], "subgroup members not closed under product");
    return s;
  }

  static Subgroup from_generator_indices(GroupRef parent, const std::vector<int>& gens) {
    std::vector<char> mask(parent->order(), 0);
    std::deque<int> todo;
    int e = parent->identity_index();
    mask[e] = 1;
    todo.push_back(e);
    while (!todo.empty()) {
      int cur = todo.front();
      todo.pop_front();
      for (int g : gens) {
        int nxt = parent->mul(cur, g);
        if (!mask[nxt]) {
          mask[nxt] = 1;
          todo.push_back(nxt);
        }
      }
    }
    std::vector<int> members;
    for (int i = 0; i < parent->order(); ++i)
      if (mask[i]) members.push_back(i);
    return Subgroup(std::move(parent), std::move(members));
  }

  static Subgroup from_generators(GroupRef parent, const std::vector<Perm>& gens) {
    std::vector<int> idx;
    idx.reserve(gens.size());
    for (const Perm& g : gens) idx.push_back(parent->index_of(g));
    return from_generator_indices(std::move(parent), idx);
  }

  static Subgroup whole(GroupRef parent) {
    std::vector<int> all(parent->order());
    std::iota(all.begin(), all.end(), 0);
    return Subgroup(std::move(parent), std::move(all));
  }

  static Subgroup trivial(GroupRef parent) {
    std::vector<int> id{parent->identity_index()};
    return Subgroup(std::move(parent), std::move(id));
  }

  const GroupRef& parent() const { return parent_; }
  const std::vector<int>& members() const { return members_; }
  int order() const { return static_cast<int>(members_.size()); }
  bool contains(int elem) const { return mask_[elem]; }

  bool same_set(const Subgroup& other) const {
    return parent_ == other.parent_ && members_ == other.members_;
  }
  bool is_subgroup_of(const Subgroup& other) const {
    if (parent_ != other.parent_) return false;
    for (int m : members_)
      if (!other.contains(m)) return false;
    return true;
  }
  bool is_normal_in(const Subgroup& other) const {
    if (!is_subgroup_of(other)) return false;
    for (int h : other.members_)
      for (int n : members_)
        if (!contains(parent_->conj(h, n))) return false;
    return true;
  }
  bool is_abelian() const {
    for (int a : members_)
      for (int b : members_)
        if (parent_->mul(a, b) != parent_->mul(b, a)) return false;
    return true;
  }

 private:
  Subgroup(GroupRef parent, std::vector<int> members)
      : parent_(std::move(parent)), members_(std::move(members)) {
    require(!members_.empty(), "subgroup needs at least the identity");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    mask_.assign(parent_->order(), 0);
    for (int m : members_) {
      require(m >= 0 && m < parent_->order(), "subgroup member index out of range");
      mask_[m] = 1;
    }
    require(mask_[parent_->identity_index()], "subgroup must contain the identity");
  }

  GroupRef parent_;
  std::vector<int> members_;
  std::vector<char> mask_;
};

/// Left cosets x·S of a subgroup S inside a domain subgroup D (most often the
/// whole group).  A coset's id is the minimal element index it contains, so
/// the id doubles as a canonical representative.  Serialized coset labels are
/// 1-based positions in id order, so they always run 1..count.
class CosetTable {
 public:
  CosetTable(Subgroup domain, Subgroup sub)
      : domain_(std::move(domain)), sub_(std::move(sub)) {
    require(sub_.is_subgroup_of(domain_), "coset table needs sub <= domain");
    const auto& G = *domain_.parent();
    coset_of_.assign(G.order(), -1);
    for (int d : domain_.members()) {
      if (coset_of_[d] >= 0) continue;
      // d is the minimal not-yet-assigned member, hence minimal in its coset.
      ids_.push_back(d);
      for (int s : sub_.members()) coset_of_[G.mul(d, s)] = d;
    }
    for (std::size_t p = 0; p < ids_.size(); ++p) pos_[ids_[p]] = static_cast<int>(p);
  }

  const Subgroup& domain() const { return domain_; }
  const Subgroup& sub() const { return sub_; }
  const GroupRef& parent() const { return domain_.parent(); }

  int count() const { return static_cast<int>(ids_.size()); }
  const std::vector<int>& ids() const { return ids_; }
  int id_of_element(int elem) const {
    require(coset_of_[elem] >= 0, "element outside the coset domain");
    return coset_of_[elem];
  }
  int position(int id) const { return pos_.at(id); }
  int id_at(int position) const { return ids_[position]; }

  /// Id of g·(coset); g must normalize the situation, i.e. g·rep stays in the
  /// domain (always true when the domain is the whole group).
  int act(int g, int id) const { return id_of_element(parent()->mul(g, id)); }

  std::vector<int> coset_members(int id) const {
    std::vector<int> out;
    for (int d : domain_.members())
      if (coset_of_[d] == id) out.push_back(d);
    return out;
  }

 private:
  Subgroup domain_;
  Subgroup sub_;
  std::vector<int> ids_;
  std::vector<int> coset_of_;
  std::map<int, int> pos_;
};

inline CosetTable left_cosets(const Subgroup& domain, const Subgroup& sub) {
  return CosetTable(domain, sub);
}
inline CosetTable left_cosets(const GroupRef& group, const Subgroup& sub) {
  return CosetTable(Subgroup::whole(group), sub);
}

/// A choice of representative per left coset.
class CosetSection {
 public:
  CosetSection(const CosetTable& table, std::map<int, int> rep)
      : rep_(std::move(rep)) {
    require(rep_.size() == static_cast<std::size_t>(table.count()),
            "section must pick one representative per coset");
    for (const auto& [id, elem] : rep_)
      require(table.id_of_element(elem) == id,
              "section representative lies outside its coset");
  }

  static CosetSection canonical(const CosetTable& table) {
    std::map<int, int> rep;
    for (int id : table.ids()) rep[id] = id;
    return CosetSection(table, std::move(rep));
  }

  int rep(int id) const { return rep_.at(id); }
  const std::map<int, int>& reps() const { return rep_; }

 private:
  std::map<int, int> rep_;
};

/// All sections of a coset table (product over cosets of coset sizes); guarded
/// by the wreath enumeration cap since callers use it for exhaustive checks.
inline std::vector<CosetSection> all_sections(const CosetTable& table,
                                              std::size_t cap = wreath_enum_cap()) {
  std::vector<std::vector<int>> choices;
  std::size_t total = 1;
  for (int id : table.ids()) {
    choices.push_back(table.coset_members(id));
    total *= choices.back().size();
    require(total <= cap, "section enumeration exceeds cap");
  }
  std::vector<CosetSection> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    std::map<int, int> rep;
    for (std::size_t k = 0; k < choices.size(); ++k)
      rep[table.id_at(static_cast<int>(k))] = choices[k][pick[k]];
    out.emplace_back(table, std::move(rep));
    std::size_t k = 0;
    for (; k < choices.size(); ++k) {
      if (++pick[k] < choices[k].size()) break;
      pick[k] = 0;
    }
    if (k == choices.size()) break;
  }
  return out;
}

class QuotientGroup;
using QuotRef = std::shared_ptr<const QuotientGroup>;

/// D/N for N normal in D.  Classes are materialized as a permutation group
/// (left-regular action on the classes), so a quotient can serve anywhere a
/// FiniteGroup does; as_group element index == class position.
class QuotientGroup {
 public:
  static QuotRef make(Subgroup domain, Subgroup normal) {
    require(normal.is_normal_in(domain), "quotient needs a normal subgroup of the domain");
    return std::shared_ptr<const QuotientGroup>(
        new QuotientGroup(std::move(domain), std::move(normal)));
  }

  const Subgroup& domain() const { return classes_.domain(); }
  const Subgroup& normal() const { return classes_.sub(); }
  const CosetTable& classes() const { return classes_; }
  int order() const { return classes_.count(); }

  /// Class position (== as_group element index) of a domain element.
  int project(int elem) const { return classes_.position(classes_.id_of_element(elem)); }
  /// Canonical parent representative of a class.
  int class_rep(int cls) const { return classes_.id_at(cls); }

  int mul(int a, int b) const {
    return project(parent()->mul(class_rep(a), class_rep(b)));
  }
  int inv(int a) const { return project(parent()->inv(class_rep(a))); }
  int identity() const { return project(parent()->identity_index()); }

  const GroupRef& as_group() const { return grp_; }
  const GroupRef& parent() const { return classes_.parent(); }

  /// Cycle string of the canonical representative; the printable form of a
  /// quotient element.
  std::string rep_cycles(int cls) const {
    return parent()->element(class_rep(cls)).cycles();
  }

 private:
  QuotientGroup(Subgroup domain, Subgroup normal)
      : classes_(std::move(domain), std::move(normal)) {
    int n = classes_.count();
    std::vector<Perm> regular;
    regular.reserve(n);
    for (int p = 0; p < n; ++p) {
      std::vector<int> im(n);
      for (int q = 0; q < n; ++q)
        im[q] = classes_.position(
            classes_.id_of_element(parent()->mul(classes_.id_at(p), classes_.id_at(q))));
      regular.emplace_back(std::move(im));
    }
    grp_ = FiniteGroup::from_elements(n, std::move(regular));
  }

  CosetTable classes_;
  GroupRef grp_;
};

inline Subgroup commutator_subgroup(const Subgroup& H) {
  const auto& G = *H.parent();
  std::vector<int> gens;
  for (int a : H.members())
    for (int b : H.members())
      gens.push_back(G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))));
  return Subgroup::from_generator_indices(H.parent(), gens);
}

inline QuotRef abelianization(const Subgroup& H) {
  return QuotientGroup::make(H, commutator_subgroup(H));
}

/// Transfer (Verlagerung) Ver: H^ab -> H'^ab for H' <= H, computed on a
/// representative h in H as the class of prod_y t_{hy}^{-1} h t_y over the
/// left cosets y of H' in H.  `hp_ab` must be the abelianization of H'.
/// Independent of the section t and of the representative of h's class.
inline int transfer(const Subgroup& H, const QuotRef& hp_ab, int h,
                    const std::optional<CosetSection>& section = std::nullopt) {
  const Subgroup& Hp = hp_ab->domain();
  require(Hp.is_subgroup_of(H), "transfer needs H' <= H");
  require(H.contains(h), "transfer argument must lie in H");
  const auto& G = *H.parent();
  CosetTable Y = left_cosets(H, Hp);
  CosetSection t = section ? *section : CosetSection::canonical(Y);
  int acc = G.identity_index();
  for (int y : Y.ids()) {
    int ty = t.rep(y);
    int thy = t.rep(Y.id_of_element(G.mul(h, ty)));
    int factor = G.mul(G.mul(G.inv(thy), h), ty);
    require(Hp.contains(factor), "transfer factor escaped H'");
    acc = G.mul(acc, factor);
  }
  return hp_ab->project(acc);
}

}  // namespace plectic
