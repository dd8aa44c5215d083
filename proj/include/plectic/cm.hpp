#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plectic/plectic_group.hpp"

namespace plectic {

/// A finite model of a totally real field: a stabilizer subgroup that
/// absorbs every conjugate s^{-1}·c·s of the complex conjugation c.
class TotallyRealInstance {
 public:
  static TotallyRealInstance make(GroupRef G, Subgroup F_sub, int c) {
    require(F_sub.parent() == G, "stabilizer belongs to a different group");
    require(c >= 0 && c < G->order(), "conjugation index out of range");
    require(G->mul(c, c) == G->identity_index(),
            "complex conjugation must square to the identity");
    for (int s = 0; s < G->order(); ++s)
      require(F_sub.contains(G->mul(G->mul(G->inv(s), c), s)),
              "not totally real: s^-1·c·s escapes the stabilizer at s = " +
                  G->element(s).cycles());
    return TotallyRealInstance(std::move(G), std::move(F_sub), c);
  }

  const GroupRef& group() const { return group_; }
  const Subgroup& sub() const { return sub_; }
  int conj() const { return conj_; }

 private:
  TotallyRealInstance(GroupRef G, Subgroup F_sub, int c)
      : group_(std::move(G)), sub_(std::move(F_sub)), conj_(c) {}

  GroupRef group_;
  Subgroup sub_;
  int conj_;
};

inline TotallyRealInstance validate_totally_real(GroupRef G, Subgroup F_sub, int c) {
  return TotallyRealInstance::make(std::move(G), std::move(F_sub), c);
}

class CMInstance;
using CMRef = std::shared_ptr<const CMInstance>;

/// A finite model of a CM field: ambient group G, field stabilizer H, and a
/// complex conjugation c with c of order exactly 2, c outside H, and
/// s^{-1}·c·s ∈ c·H for every s.  The totally real stabilizer is H ∪ cH.
/// Embeddings of the field are the left cosets G/H; real places are G/(H∪cH);
/// each real place carries exactly the conjugate pair {rho, c·rho}.
class CMInstance {
 public:
  static CMRef make(GroupRef G, Subgroup H, int c) {
    require(H.parent() == G, "subgroup belongs to a different group");
    require(c >= 0 && c < G->order(), "conjugation index out of range");
    require(c != G->identity_index() && G->mul(c, c) == G->identity_index(),
            "complex conjugation must have order exactly 2");
    require(!H.contains(c), "complex conjugation must lie outside the field stabilizer");
    for (int s = 0; s < G->order(); ++s) {
      int cs = G->mul(G->mul(G->inv(s), c), s);  // s^{-1}·c·s
      require(H.contains(G->mul(c, cs)),
              "CM condition fails at s = " + G->element(s).cycles() +
                  ": s^-1·c·s is not in c·H");
    }
    std::vector<int> both = H.members();
    for (int h : H.members()) both.push_back(G->mul(c, h));
    std::optional<Subgroup> real;
    try {
      real.emplace(Subgroup::from_indices(G, both));
    } catch (const Error&) {
      fail("H together with c·H does not close into a subgroup");
    }
    return CMRef(new CMInstance(std::move(G), std::move(H), c, std::move(*real)));
  }

  const GroupRef& group() const { return group_; }
  const Subgroup& sub() const { return sub_; }            // stabilizer of the CM field
  int conj() const { return conj_; }
  const Subgroup& real_subgroup() const { return real_; }  // H ∪ cH
  const CosetTable& sigmaK() const { return sigmaK_; }     // embeddings, G/H
  const CosetTable& sigmaF() const { return sigmaF_; }     // real places, G/(H∪cH)
  const QuotRef& h_ab() const { return hab_; }             // abelianized stabilizer

  int conj_embedding(int rho) const { return sigmaK_.act(conj_, rho); }

  /// Conjugate pairs (rho, c·rho), one per real place, ordered by place; the
  /// first entry of each pair is the place's id.
  const std::vector<std::pair<int, int>>& fibers() const { return fibers_; }

  TotallyRealInstance real_part() const {
    return TotallyRealInstance::make(group_, real_, conj_);
  }

 private:
  CMInstance(GroupRef G, Subgroup H, int c, Subgroup real)
      : group_(std::move(G)),
        sub_(std::move(H)),
        conj_(c),
        real_(std::move(real)),
        sigmaK_(left_cosets(group_, sub_)),
        sigmaF_(left_cosets(group_, real_)),
        hab_(abelianization(sub_)) {
    std::map<int, std::vector<int>> by_place;
    for (int rho : sigmaK_.ids()) by_place[sigmaF_.id_of_element(rho)].push_back(rho);
    for (const auto& [place, pair] : by_place) {
      require(pair.size() == 2, "real place does not carry exactly two embeddings");
      require(conj_embedding(pair[0]) == pair[1] && conj_embedding(pair[1]) == pair[0],
              "conjugation must swap the two embeddings over a real place");
      require(pair[0] == place, "embedding ids out of step with place ids");
      fibers_.emplace_back(pair[0], pair[1]);
    }
  }

  GroupRef group_;
  Subgroup sub_;
  int conj_;
  Subgroup real_;
  CosetTable sigmaK_;
  CosetTable sigmaF_;
  QuotRef hab_;
  std::vector<std::pair<int, int>> fibers_;
};

inline CMRef validate_cm(GroupRef G, Subgroup H, int c) {
  return CMInstance::make(std::move(G), std::move(H), c);
}

/// A CM type: one embedding out of each conjugate pair.
class CMType {
 public:
  static CMType from_members(CMRef inst, std::set<int> members) {
    for (const auto& [rho, crho] : inst->fibers())
      require(members.count(rho) + members.count(crho) == 1,
              "CM type must pick exactly one embedding per conjugate pair");
    require(members.size() == inst->fibers().size(), "CM type contains a stray coset");
    return CMType(std::move(inst), std::move(members));
  }

  const CMRef& instance() const { return inst_; }
  const std::set<int>& members() const { return members_; }
  bool contains(int rho) const { return members_.count(rho) != 0; }

  /// Structural equality: same ambient data and the same embedding set, so
  /// types over separately validated copies of one instance still compare.
  friend bool operator==(const CMType& a, const CMType& b) {
    return a.inst_->group() == b.inst_->group() && a.inst_->sub().same_set(b.inst_->sub()) &&
           a.inst_->conj() == b.inst_->conj() && a.members_ == b.members_;
  }

 private:
  CMType(CMRef inst, std::set<int> members)
      : inst_(std::move(inst)), members_(std::move(members)) {}

  CMRef inst_;
  std::set<int> members_;
};

/// All 2^(#places) CM types in a fixed order: type n takes the conjugate
/// embedding at place i exactly when bit i of n is set (places in id order).
inline std::vector<CMType> enumerate_cm_types(const CMRef& inst,
                                              std::size_t cap = wreath_enum_cap()) {
  const auto& fib = inst->fibers();
  std::size_t total = 1;
  for (std::size_t i = 0; i < fib.size(); ++i) {
    total *= 2;
    require(total <= cap, "CM type enumeration exceeds cap");
  }
  std::vector<CMType> out;
  for (std::size_t n = 0; n < total; ++n) {
    std::set<int> members;
    for (std::size_t i = 0; i < fib.size(); ++i)
      members.insert((n >> i) & 1 ? fib[i].second : fib[i].first);
    out.push_back(CMType::from_members(inst, std::move(members)));
  }
  return out;
}

/// Coset representatives w with w_rho in rho and w_{c·rho} = c·w_rho.
class ConjCompatibleSection {
 public:
  static ConjCompatibleSection from_map(CMRef inst, std::map<int, int> w) {
    const auto& G = *inst->group();
    require(w.size() == inst->sigmaK().ids().size(), "section must cover every embedding");
    for (const auto& [rho, g] : w)
      require(inst->sigmaK().id_of_element(g) == rho,
              "section representative lies outside its coset");
    for (const auto& [rho, crho] : inst->fibers())
      require(w.at(crho) == G.mul(inst->conj(), w.at(rho)),
              "section must intertwine conjugation: w_{c·rho} = c·w_rho");
    return ConjCompatibleSection(std::move(inst), std::move(w));
  }

  const CMRef& instance() const { return inst_; }
  int rep(int rho) const { return w_.at(rho); }
  const std::map<int, int>& reps() const { return w_; }

 private:
  ConjCompatibleSection(CMRef inst, std::map<int, int> w)
      : inst_(std::move(inst)), w_(std::move(w)) {}

  CMRef inst_;
  std::map<int, int> w_;
};

/// All |H|^(#places) conjugation-compatible sections: the representative over
/// each place's first embedding ranges over that coset, the conjugate
/// embedding then gets c times it.
inline std::vector<ConjCompatibleSection> enumerate_conj_sections(
    const CMRef& inst, std::size_t cap = wreath_enum_cap()) {
  const auto& G = *inst->group();
  std::vector<std::vector<int>> choices;
  std::size_t total = 1;
  for (const auto& [rho, crho] : inst->fibers()) {
    choices.push_back(inst->sigmaK().coset_members(rho));
    total *= choices.back().size();
    require(total <= cap, "section enumeration exceeds cap");
  }
  std::vector<ConjCompatibleSection> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    std::map<int, int> w;
    for (std::size_t i = 0; i < choices.size(); ++i) {
      const auto& [rho, crho] = inst->fibers()[i];
      w[rho] = choices[i][pick[i]];
      w[crho] = G.mul(inst->conj(), w[rho]);
    }
    out.push_back(ConjCompatibleSection::from_map(inst, std::move(w)));
    std::size_t i = 0;
    for (; i < choices.size(); ++i) {
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == choices.size()) break;
  }
  return out;
}

/// Pulls a type back along the coset coarsening G/H' -> G/H for H' <= H with
/// the same conjugation: keep exactly the finer cosets lying over members.
inline CMType induced_cm_type(const CMType& phi, const CMRef& finer) {
  const CMRef& coarse = phi.instance();
  require(finer->group() == coarse->group() && finer->conj() == coarse->conj(),
          "induced type needs the same ambient group and conjugation");
  require(finer->sub().is_subgroup_of(coarse->sub()),
          "induced type needs a nested stabilizer");
  std::set<int> members;
  for (int rho : finer->sigmaK().ids())
    if (phi.contains(coarse->sigmaK().id_of_element(rho))) members.insert(rho);
  return CMType::from_members(finer, std::move(members));
}

/// Transport along u: the type {rho·u^{-1}} over the conjugate instance
/// (G, uHu^{-1}, c).
inline CMType transported_cm_type(const CMType& phi, int u) {
  const CMRef& inst = phi.instance();
  const auto& G = *inst->group();
  CMRef moved = CMInstance::make(inst->group(), conjugate_subgroup(inst->sub(), u),
                                 inst->conj());
  std::set<int> members;
  for (int rho : phi.members())
    members.insert(moved->sigmaK().id_of_element(G.mul(rho, G.inv(u))));
  return CMType::from_members(std::move(moved), std::move(members));
}

/// Image {a(rho)} of a type under an automorphism that is right-equivariant
/// for the field stabilizer (so it acts on embeddings).
inline CMType cm_type_image(const PlecticElement& alpha, const CMType& phi) {
  const CMRef& inst = phi.instance();
  require(alpha.group() == inst->group(), "automorphism over a different group");
  require(inst->sub().is_subgroup_of(alpha.sub()),
          "automorphism must be right-equivariant for the field stabilizer");
  std::set<int> members;
  for (int rho : phi.members())
    members.insert(inst->sigmaK().id_of_element(alpha.apply(rho)));
  return CMType::from_members(inst, std::move(members));
}

}  // namespace plectic
