#pragma once

// Crossed morphisms from an automorphism-group model into the module of
// lattice-valued pairings, the two-cocycles their lifts produce, and the
// twisted group extensions built from those cocycles.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "plectic/weil.hpp"

namespace plectic {

class ValueModule;
using ModuleRef = std::shared_ptr<const ValueModule>;

/// The module of all coefficient-valued functions on the lattice basis,
/// acted on by the automorphism-group model through the star action, with a
/// designated rational subgroup that defect terms are allowed to land in.
class ValueModule {
 public:
  /// Enumerates the module, the automorphism group and the action tables.
  /// The rational members must form a subgroup stable under both the star
  /// action and the Galois action.
  static ModuleRef make(WeilRef d, const std::vector<TaniyamaValue>& rational,
                        std::size_t cap = wreath_enum_cap()) {
    auto mod = std::shared_ptr<ValueModule>(new ValueModule(std::move(d)));
    const auto& datum = mod->datum_;
    const auto& W = *datum->weil_group();
    const auto& members = datum->coeff_subgroup().members();
    const int rank = datum->lattice().rank();
    std::size_t total = 1;
    for (int k = 0; k < rank; ++k) {
      total *= members.size();
      require(total <= cap, "value module exceeds enumeration cap");
    }
    std::vector<std::size_t> digit(rank, 0);
    while (true) {
      std::vector<int> vals(rank);
      for (int k = 0; k < rank; ++k) vals[k] = members[digit[k]];
      mod->index_.emplace(vals, static_cast<int>(mod->values_.size()));
      mod->values_.emplace_back(datum, std::move(vals));
      int k = 0;
      for (; k < rank; ++k) {
        if (++digit[k] < members.size()) break;
        digit[k] = 0;
      }
      if (k == rank) break;
    }
    const int n = mod->module_order();
    mod->mul_.assign(static_cast<std::size_t>(n) * n, -1);
    mod->inv_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      std::vector<int> vals(rank);
      for (int b = 0; b < n; ++b) {
        for (int k = 0; k < rank; ++k)
          vals[k] = W.mul(mod->values_[a].vals()[k], mod->values_[b].vals()[k]);
        mod->mul_[static_cast<std::size_t>(a) * n + b] = mod->index_.at(vals);
      }
      for (int k = 0; k < rank; ++k) vals[k] = W.inv(mod->values_[a].vals()[k]);
      mod->inv_[a] = mod->index_.at(vals);
    }
    mod->id_ = mod->index_.at(std::vector<int>(rank, W.identity_index()));

    mod->group_ = std::make_unique<PlecticGroup>(
        PlecticGroup::materialize(datum->weil_group(), datum->level_subgroup(), cap));
    const int g = mod->group_->order();
    mod->gmul_.assign(static_cast<std::size_t>(g) * g, -1);
    mod->ginv_.assign(g, -1);
    for (int i = 0; i < g; ++i) {
      mod->ginv_[i] = mod->group_->inv(i);
      for (int j = 0; j < g; ++j)
        mod->gmul_[static_cast<std::size_t>(i) * g + j] = mod->group_->mul(i, j);
    }
    mod->act_.assign(static_cast<std::size_t>(g) * n, -1);
    for (int i = 0; i < g; ++i) {
      PlecticElement pushed = quotient_push(datum, mod->group_->element(i));
      for (int m = 0; m < n; ++m)
        mod->act_[static_cast<std::size_t>(i) * n + m] =
            mod->index_of(star_action(pushed, mod->values_[m]));
    }

    mod->rational_mask_.assign(n, false);
    for (const auto& v : rational) {
      require(v.datum() == datum, "rational member belongs to a different datum");
      mod->rational_mask_[mod->index_of(v)] = true;
    }
    require(mod->rational_mask_[mod->id_], "rational subgroup must contain the identity");
    for (int a = 0; a < n; ++a) {
      if (!mod->rational_mask_[a]) continue;
      mod->rational_.push_back(a);
      require(mod->rational_mask_[mod->inv(a)], "rational members must be closed under inverse");
      for (int b : mod->rational_) {
        require(mod->rational_mask_[mod->mul(a, b)],
                "rational members must be closed under the product");
      }
      for (int i = 0; i < g; ++i)
        require(mod->rational_mask_[mod->act(i, a)],
                "rational subgroup must be stable under the star action");
      for (int tau = 0; tau < datum->gamma()->order(); ++tau)
        require(mod->rational_mask_[mod->index_of(galois_action(tau, mod->values_[a]))],
                "rational subgroup must be stable under the Galois action");
    }
    return mod;
  }

  const WeilRef& datum() const { return datum_; }
  const PlecticGroup& group() const { return *group_; }
  int group_order() const { return group_->order(); }
  int group_mul(int i, int j) const { return gmul_[static_cast<std::size_t>(i) * group_->order() + j]; }
  int group_inv(int i) const { return ginv_[i]; }
  int group_identity() const { return group_->identity(); }
  int module_order() const { return static_cast<int>(values_.size()); }
  const TaniyamaValue& value(int m) const { return values_[m]; }
  int index_of(const TaniyamaValue& v) const {
    require(v.datum() == datum_, "value belongs to a different datum");
    return index_.at(v.vals());
  }
  int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a) * values_.size() + b]; }
  int inv(int a) const { return inv_[a]; }
  int identity() const { return id_; }
  /// Left action of the i-th group element on the m-th value.
  int act(int i, int m) const { return act_[static_cast<std::size_t>(i) * values_.size() + m]; }
  bool is_rational(int m) const { return rational_mask_[m]; }
  const std::vector<int>& rational_members() const { return rational_; }
  /// Whether two values agree modulo the rational subgroup.
  bool congruent(int a, int b) const { return rational_mask_[mul(a, inv(b))]; }

 private:
  explicit ValueModule(WeilRef d) : datum_(std::move(d)) {}

  WeilRef datum_;
  std::unique_ptr<PlecticGroup> group_;
  std::vector<int> gmul_;
  std::vector<int> ginv_;
  std::vector<TaniyamaValue> values_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> mul_;
  std::vector<int> inv_;
  int id_ = -1;
  std::vector<int> act_;
  std::vector<bool> rational_mask_;
  std::vector<int> rational_;
};

/// The one-member subgroup: only the identity assignment is rational.
inline std::vector<TaniyamaValue> trivial_rational_subgroup(const WeilRef& d) {
  const auto& W = *d->weil_group();
  return {TaniyamaValue(d, std::vector<int>(d->lattice().rank(), W.identity_index()))};
}

/// Constant assignments: each coefficient element a contributes the value
/// sending a basis character to a raised to the character's degree.
inline std::vector<TaniyamaValue> constant_rational_subgroup(const WeilRef& d) {
  std::vector<TaniyamaValue> out;
  for (int a : d->coeff_subgroup().members()) {
    std::vector<int> vals;
    vals.reserve(d->lattice().rank());
    for (const auto& v : d->lattice().basis())
      vals.push_back(group_power(*d->weil_group(), a, v.degree()));
    out.emplace_back(d, std::move(vals));
  }
  return out;
}

/// A function from the automorphism-group model into the module, understood
/// modulo the rational subgroup when verified and exactly when lifted.
struct CocycleMap {
  std::vector<int> values;  // module index per group element
};

/// Constantly the identity value.
inline CocycleMap identity_cocycle(const ModuleRef& mod) {
  return CocycleMap{std::vector<int>(static_cast<std::size_t>(mod->group_order()),
                                     mod->identity())};
}

/// g -> f(g^{-1})^{-1} where f is the pairing value of the automorphism.
inline CocycleMap taniyama_cocycle(const ModuleRef& mod, const WeilSection& w) {
  require(w.datum() == mod->datum(), "section belongs to a different datum");
  CocycleMap b;
  b.values.reserve(mod->group_order());
  for (int i = 0; i < mod->group_order(); ++i) {
    const PlecticElement& a = mod->group().element(mod->group_inv(i));
    b.values.push_back(mod->index_of(pointwise_inverse(taniyama_value(w, a))));
  }
  return b;
}

struct CocycleCheck {
  bool ok = true;
  int gamma1 = -1;  // witness pair when the law fails
  int gamma2 = -1;
};

/// Checks b(g1 g2) = b(g1) * (g1 . b(g2)) modulo the rational subgroup for
/// every pair; reports the first violating pair.
inline CocycleCheck verify_cocycle(const ModuleRef& mod, const CocycleMap& b) {
  const int g = mod->group_order();
  require(b.values.size() == static_cast<std::size_t>(g), "cocycle map has the wrong length");
  for (int g1 = 0; g1 < g; ++g1)
    for (int g2 = 0; g2 < g; ++g2) {
      int lhs = b.values[mod->group_mul(g1, g2)];
      int rhs = mod->mul(b.values[g1], mod->act(g1, b.values[g2]));
      if (!mod->congruent(lhs, rhs)) return {false, g1, g2};
    }
  return {};
}

struct InvarianceCheck {
  bool ok = true;
  int tau = -1;  // witness when some value moves
  int gamma = -1;
};

/// Checks every value is fixed by the Galois action modulo the rational
/// subgroup; reports the first moving pair.
inline InvarianceCheck verify_invariance(const ModuleRef& mod, const CocycleMap& b) {
  const int g = mod->group_order();
  require(b.values.size() == static_cast<std::size_t>(g), "cocycle map has the wrong length");
  for (int tau = 0; tau < mod->datum()->gamma()->order(); ++tau)
    for (int gamma = 0; gamma < g; ++gamma) {
      int moved = mod->index_of(galois_action(tau, mod->value(b.values[gamma])));
      if (!mod->congruent(moved, b.values[gamma])) return {false, tau, gamma};
    }
  return {};
}

/// A rational-valued defect table on pairs of group elements.
struct TwoCocycle {
  int group_size = 0;
  std::vector<int> table;  // module index per pair, row-major

  int at(int g1, int g2) const {
    return table[static_cast<std::size_t>(g1) * group_size + g2];
  }
};

/// d(g1,g2) = b(g1) * (g1 . b(g2)) * b(g1 g2)^{-1} for an exact lift b.
/// Every value must land in the rational subgroup, and the resulting table
/// must satisfy the two-cocycle identity; both are checked exhaustively.
inline TwoCocycle two_cocycle_from_lift(const ModuleRef& mod, const CocycleMap& b) {
  const int g = mod->group_order();
  require(b.values.size() == static_cast<std::size_t>(g), "cocycle map has the wrong length");
  require(b.values[mod->group_identity()] == mod->identity(),
          "lift must send the identity to the identity");
  TwoCocycle d;
  d.group_size = g;
  d.table.assign(static_cast<std::size_t>(g) * g, -1);
  for (int g1 = 0; g1 < g; ++g1)
    for (int g2 = 0; g2 < g; ++g2) {
      int v = mod->mul(mod->mul(b.values[g1], mod->act(g1, b.values[g2])),
                       mod->inv(b.values[mod->group_mul(g1, g2)]));
      require(mod->is_rational(v), "cocycle defect escapes the rational subgroup");
      d.table[static_cast<std::size_t>(g1) * g + g2] = v;
    }
  for (int g1 = 0; g1 < g; ++g1)
    for (int g2 = 0; g2 < g; ++g2)
      for (int g3 = 0; g3 < g; ++g3) {
        int lhs = mod->mul(mod->act(g1, d.at(g2, g3)), d.at(g1, mod->group_mul(g2, g3)));
        int rhs = mod->mul(d.at(mod->group_mul(g1, g2), g3), d.at(g1, g2));
        require(lhs == rhs, "defect table is not a two-cocycle");
      }
  return d;
}

/// The extension of the automorphism-group model by the module along a
/// rational-valued two-cocycle.  Elements are encoded as m * |group| + g.
class TwistedExtension {
 public:
  TwistedExtension(ModuleRef mod, TwoCocycle d) : mod_(std::move(mod)), d_(std::move(d)) {
    require(d_.group_size == mod_->group_order(), "cocycle table has the wrong size");
    for (int v : d_.table) require(mod_->is_rational(v), "cocycle table must be rational-valued");
    const int g = d_.group_size;
    for (int i = 0; i < g; ++i) {
      require(d_.at(mod_->group_identity(), i) == mod_->identity() &&
                  d_.at(i, mod_->group_identity()) == mod_->identity(),
              "cocycle table must be normalized");
    }
  }

  const ModuleRef& module() const { return mod_; }
  const TwoCocycle& cocycle() const { return d_; }
  int order() const { return mod_->module_order() * mod_->group_order(); }

  int encode(int m, int g) const { return m * mod_->group_order() + g; }
  int value_part(int x) const { return x / mod_->group_order(); }
  int group_part(int x) const { return x % mod_->group_order(); }

  int identity() const { return encode(mod_->identity(), mod_->group_identity()); }

  int mul(int x, int y) const {
    int m1 = value_part(x), g1 = group_part(x);
    int m2 = value_part(y), g2 = group_part(y);
    int m = mod_->mul(mod_->mul(m1, mod_->act(g1, m2)), d_.at(g1, g2));
    return encode(m, mod_->group_mul(g1, g2));
  }

  int inverse(int x) const {
    int m = value_part(x), g = group_part(x);
    int gi = mod_->group_inv(g);
    int n = mod_->act(gi, mod_->mul(mod_->inv(m), mod_->inv(d_.at(g, gi))));
    return encode(n, gi);
  }

  /// Projection onto the group part; a homomorphism with kernel the module.
  int project(int x) const { return group_part(x); }
  int kernel_element(int m) const { return encode(m, mod_->group_identity()); }

  /// The set-theoretic section attached to a lift: g -> (b(g)^{-1}, g).
  /// A homomorphism exactly when the cocycle came from that lift.
  int section(const CocycleMap& b, int g) const { return encode(mod_->inv(b.values[g]), g); }

 private:
  ModuleRef mod_;
  TwoCocycle d_;
};

/// The semidirect-product cocycle: identically the identity value.
inline TwoCocycle identity_two_cocycle(const ModuleRef& mod) {
  TwoCocycle d;
  d.group_size = mod->group_order();
  d.table.assign(static_cast<std::size_t>(d.group_size) * d.group_size, mod->identity());
  return d;
}

inline TwistedExtension build_twisted_extension(const ModuleRef& mod, const TwoCocycle& d) {
  return TwistedExtension(mod, d);
}

}  // namespace plectic
