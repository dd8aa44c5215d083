#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plectic/cm.hpp"
#include "plectic/plectic_group.hpp"

namespace plectic {

class CharContext;
using CharCtx = std::shared_ptr<const CharContext>;

/// Index context for character lattices of (F ⊗ E)-type tori: pairs (j, σ)
/// with j a place in Σ_F = Γ/Γ_F and σ ∈ Γ, where Γ models the Galois group
/// of a CM field E over Q (so complex conjugation c is a central involution)
/// and Γ_F the stabilizer of a totally real F inside E.  The level-E torus
/// T_E is the F = Q case: Γ_F = Γ, a single place.
class CharContext : public std::enable_shared_from_this<CharContext> {
 public:
  static CharCtx make(GroupRef gamma, Subgroup gammaF, int c) {
    // E CM with Galois Γ: conjugation must be a central involution, which is
    // exactly the CM condition over the trivial stabilizer.
    CMRef level = CMInstance::make(gamma, Subgroup::trivial(gamma), c);
    validate_totally_real(gamma, gammaF, c);  // forces c ∈ Γ_F via s = 1
    return CharCtx(new CharContext(std::move(gamma), std::move(gammaF), c, std::move(level)));
  }

  const GroupRef& gamma() const { return gamma_; }
  const Subgroup& gammaF() const { return gammaF_; }
  int conj() const { return conj_; }
  const CosetTable& places() const { return places_; }  // Σ_F
  /// The CM instance (Γ, {1}, c); CM types of E itself live over it, and its
  /// fibers enumerate the conjugation pairs {σ, cσ}.
  const CMRef& level_instance() const { return level_; }

  int place_count() const { return places_.count(); }
  int size() const { return places_.count() * gamma_->order(); }
  bool is_place(int id) const {
    return id >= 0 && id < gamma_->order() && places_.id_of_element(id) == id;
  }
  int flat(int place_id, int sigma) const {
    require(is_place(place_id), "not a place id");
    require(sigma >= 0 && sigma < gamma_->order(), "element index out of range");
    return places_.position(place_id) * gamma_->order() + sigma;
  }

 private:
  CharContext(GroupRef gamma, Subgroup gammaF, int c, CMRef level)
      : gamma_(std::move(gamma)),
        gammaF_(std::move(gammaF)),
        conj_(c),
        level_(std::move(level)),
        places_(left_cosets(gamma_, gammaF_)) {}

  GroupRef gamma_;
  Subgroup gammaF_;
  int conj_;
  CMRef level_;
  CosetTable places_;
};

/// An integer character vector over a CharContext, stored in the [j, σ]
/// labeling.  The tensor labeling [j ⊗ σ] of the same character has
/// b_{j⊗σ} = a_{σ^{-1}∘j, σ}; crossing between the two is always explicit.
class CharacterVector {
 public:
  explicit CharacterVector(CharCtx ctx)
      : ctx_(std::move(ctx)), coeffs_(ctx_->size(), 0) {}

  CharacterVector(CharCtx ctx, std::vector<int> char_coeffs)
      : ctx_(std::move(ctx)), coeffs_(std::move(char_coeffs)) {
    require(coeffs_.size() == static_cast<std::size_t>(ctx_->size()),
            "coefficient vector does not match the index set");
  }

  static CharacterVector from_tensor(CharCtx ctx, const std::vector<int>& tensor_coeffs) {
    CharacterVector out(std::move(ctx));
    require(tensor_coeffs.size() == static_cast<std::size_t>(out.ctx_->size()),
            "coefficient vector does not match the index set");
    const auto& C = *out.ctx_;
    const auto& G = *C.gamma();
    for (int j : C.places().ids())
      for (int s = 0; s < G.order(); ++s) {
        int jt = C.places().id_of_element(G.mul(s, j));  // σ∘j
        out.coeffs_[C.flat(j, s)] = tensor_coeffs[C.flat(jt, s)];
      }
    return out;
  }

  const CharCtx& context() const { return ctx_; }
  int coeff(int place_id, int sigma) const { return coeffs_[ctx_->flat(place_id, sigma)]; }
  void set_coeff(int place_id, int sigma, int value) {
    coeffs_[ctx_->flat(place_id, sigma)] = value;
  }
  void add_coeff(int place_id, int sigma, int value) {
    coeffs_[ctx_->flat(place_id, sigma)] += value;
  }
  const std::vector<int>& char_coeffs() const { return coeffs_; }

  /// Tensor-labeled coefficients, flat-indexed like the char labeling.
  std::vector<int> tensor_coeffs() const {
    const auto& C = *ctx_;
    const auto& G = *C.gamma();
    std::vector<int> out(C.size());
    for (int j : C.places().ids())
      for (int s = 0; s < G.order(); ++s) {
        int jt = C.places().id_of_element(G.mul(G.inv(s), j));  // σ^{-1}∘j
        out[C.flat(j, s)] = coeffs_[C.flat(jt, s)];
      }
    return out;
  }

  bool is_zero() const {
    for (int v : coeffs_)
      if (v != 0) return false;
    return true;
  }

  /// Sum of all coefficients; the same in either labeling.
  int degree() const {
    int d = 0;
    for (int v : coeffs_) d += v;
    return d;
  }

  friend CharacterVector operator+(const CharacterVector& a, const CharacterVector& b) {
    require(a.ctx_ == b.ctx_, "character vectors over different index sets");
    CharacterVector out(a.ctx_);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i)
      out.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return out;
  }
  friend CharacterVector operator-(const CharacterVector& a, const CharacterVector& b) {
    require(a.ctx_ == b.ctx_, "character vectors over different index sets");
    CharacterVector out(a.ctx_);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i)
      out.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return out;
  }
  friend CharacterVector operator*(int n, const CharacterVector& a) {
    CharacterVector out(a.ctx_);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = n * a.coeffs_[i];
    return out;
  }
  friend bool operator==(const CharacterVector& a, const CharacterVector& b) {
    return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
  }

 private:
  CharCtx ctx_;
  std::vector<int> coeffs_;
};

/// Pairing of a character with a cocharacter represented over the same index
/// set and labeling: the sum of products of matching coefficients.
inline int pairing(const CharacterVector& chi, const CharacterVector& cochar) {
  require(chi.context() == cochar.context(), "pairing needs a shared index set");
  int acc = 0;
  const auto& a = chi.char_coeffs();
  const auto& b = cochar.char_coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// The cocharacter picking out the identity-σ coefficient at one place; the
/// j-component of the canonical norm cocharacter.
inline CharacterVector identity_cocharacter(const CharCtx& ctx, int place_id) {
  CharacterVector out(ctx);
  out.set_coeff(place_id, ctx->gamma()->identity_index(), 1);
  return out;
}

/// Arithmetic action of τ ∈ Γ: on the tensor labeling [j ⊗ σ] ↦ [τ∘j ⊗ τσ],
/// equivalently [j, σ] ↦ [j, τσ].  A left action, Z-linear.
inline CharacterVector arithmetic_action(int tau, const CharacterVector& chi) {
  const auto& C = *chi.context();
  const auto& G = *C.gamma();
  require(tau >= 0 && tau < G.order(), "element index out of range");
  CharacterVector out(chi.context());
  for (int j : C.places().ids())
    for (int s = 0; s < G.order(); ++s)
      out.add_coeff(j, G.mul(tau, s), chi.coeff(j, s));
  return out;
}

/// The permutation of Γ induced by an automorphism g of Γ as a right Γ_F-set
/// at the embedding j: transport by any representative of the coset j, then
/// forget the stabilizer.  Independent of the representative.
inline PlecticElement embedding_permutation(const CharCtx& ctx, const PlecticElement& g,
                                            int place_id) {
  require(g.group() == ctx->gamma() && g.sub().same_set(ctx->gammaF()),
          "automorphism is not over the expected stabilizer");
  require(ctx->is_place(place_id), "not a place id");
  return include_into_finer(conjugate_transport(g, place_id), Subgroup::trivial(ctx->gamma()));
}

/// Algebraic action of g (an automorphism of Γ as a right Γ_F-set): on the
/// tensor labeling [j ⊗ σ] ↦ [j ⊗ σj(g)] with σj(g) = (j(g)^{-1}(σ^{-1}))^{-1}.
/// A right action on characters, Z-linear, and it preserves the sublattice
/// cut out by the per-place weight conditions.
inline CharacterVector algebraic_action(const PlecticElement& g, const CharacterVector& chi) {
  const auto& C = *chi.context();
  const auto& G = *C.gamma();
  std::vector<int> tensor = chi.tensor_coeffs();
  std::vector<int> out(C.size(), 0);
  for (int j : C.places().ids()) {
    PlecticElement jg = embedding_permutation(chi.context(), g, j);
    std::vector<int> pre(G.order());  // pre[y] = x with jg(x) = y
    for (int x = 0; x < G.order(); ++x) pre[jg.apply(x)] = x;
    for (int s = 0; s < G.order(); ++s) {
      int moved = G.inv(pre[G.inv(s)]);  // σj(g)
      out[C.flat(j, moved)] += tensor[C.flat(j, s)];
    }
  }
  return CharacterVector::from_tensor(chi.context(), out);
}

/// The sublattice of characters with, at every place j, a weight w_j such
/// that n_{j,σ} + n_{j,cσ} = w_j for all σ (coefficients in the [j, σ]
/// labeling).  Carries an explicit integer basis: per place, one vector
/// supported on the conjugated half of each pair (weight 1), then one
/// difference vector per pair (weight 0).
class SerreLattice {
 public:
  explicit SerreLattice(CharCtx ctx) : ctx_(std::move(ctx)) {
    const auto& C = *ctx_;
    for (const auto& [s, cs] : C.level_instance()->fibers()) pairs_.emplace_back(s, cs);
    for (int j : C.places().ids()) {
      CharacterVector head(ctx_);
      for (const auto& [s, cs] : pairs_) head.set_coeff(j, cs, 1);
      basis_.push_back(head);
      for (const auto& [s, cs] : pairs_) {
        CharacterVector diff(ctx_);
        diff.set_coeff(j, s, 1);
        diff.set_coeff(j, cs, -1);
        basis_.push_back(diff);
      }
    }
  }

  const CharCtx& context() const { return ctx_; }
  const std::vector<CharacterVector>& basis() const { return basis_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  /// The conjugation pairs {σ, cσ} of Γ, first entry the smaller index.
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  /// Per-place weights if χ lies in the sublattice.
  std::optional<std::vector<int>> weights(const CharacterVector& chi) const {
    require(chi.context() == ctx_, "character over a different index set");
    std::vector<int> w;
    for (int j : ctx_->places().ids()) {
      int wj = chi.coeff(j, pairs_[0].first) + chi.coeff(j, pairs_[0].second);
      for (const auto& [s, cs] : pairs_)
        if (chi.coeff(j, s) + chi.coeff(j, cs) != wj) return std::nullopt;
      w.push_back(wj);
    }
    return w;
  }

  bool contains(const CharacterVector& chi) const { return weights(chi).has_value(); }

  /// Integer coordinates in basis order; exact by the basis construction
  /// (weight first, then the coefficient at the smaller member of each pair).
  std::vector<int> coordinates_of(const CharacterVector& chi) const {
    auto w = weights(chi);
    require(w.has_value(), "character violates the per-place weight condition");
    std::vector<int> coords;
    int jpos = 0;
    for (int j : ctx_->places().ids()) {
      coords.push_back((*w)[jpos++]);
      for (const auto& [s, cs] : pairs_) coords.push_back(chi.coeff(j, s));
    }
    return coords;
  }

  CharacterVector from_coordinates(const std::vector<int>& coords) const {
    require(coords.size() == basis_.size(), "coordinate count does not match the rank");
    CharacterVector out(ctx_);
    for (std::size_t k = 0; k < coords.size(); ++k)
      if (coords[k] != 0) out = out + coords[k] * basis_[k];
    return out;
  }

 private:
  CharCtx ctx_;
  std::vector<CharacterVector> basis_;
  std::vector<std::pair<int, int>> pairs_;
};

inline SerreLattice serre_basis(const CharCtx& ctx) { return SerreLattice(ctx); }
inline SerreLattice serre_basis(GroupRef gamma, Subgroup gammaF, int c) {
  return SerreLattice(CharContext::make(std::move(gamma), std::move(gammaF), c));
}

/// The character pulled back from the CM-type character of the level torus
/// via the j0-th projection: a_{j,σ} = 1 iff j = j0 and σ ∈ Φ.
inline CharacterVector cm_pullback_character(const CharCtx& ctx, int place_id,
                                             const CMType& phi) {
  const CMRef& inst = phi.instance();
  require(inst->group() == ctx->gamma() && inst->sub().order() == 1 &&
              inst->conj() == ctx->conj(),
          "CM type does not live over this context's level instance");
  require(ctx->is_place(place_id), "not a place id");
  CharacterVector out(ctx);
  for (int s : phi.members()) out.set_coeff(place_id, s, 1);
  return out;
}

/// Recognizes characters of the cm_pullback_character shape and recovers
/// their data; returns nothing for every other vector.
inline std::optional<std::pair<int, CMType>> classify_cm_pullback(const CharacterVector& chi) {
  const auto& C = *chi.context();
  const auto& G = *C.gamma();
  int j0 = -1;
  for (int j : C.places().ids())
    for (int s = 0; s < G.order(); ++s) {
      int v = chi.coeff(j, s);
      if (v == 0) continue;
      if (v != 1) return std::nullopt;
      if (j0 == -1) j0 = j;
      if (j != j0) return std::nullopt;
    }
  if (j0 == -1) return std::nullopt;
  std::set<int> members;
  for (const auto& [s, cs] : C.level_instance()->fibers()) {
    int a = chi.coeff(j0, s), b = chi.coeff(j0, cs);
    if (a + b != 1) return std::nullopt;
    members.insert(a ? s : cs);
  }
  return std::make_pair(j0, CMType::from_members(C.level_instance(), std::move(members)));
}

/// The character of the reflex-norm representation attached to a CM type Φ of
/// a subfield K (stabilizer H ≤ Γ with real part Γ_F) at the embedding i:
/// coefficient of [j, σ] is 1 iff σ^{-1}∘i is the unique member of Φ over j.
inline CharacterVector reflex_norm_character(const CharCtx& ctx, const CMType& phi, int i) {
  const CMRef& inst = phi.instance();
  const auto& G = *ctx->gamma();
  require(inst->group() == ctx->gamma() && inst->conj() == ctx->conj(),
          "CM type lives over a different group or conjugation");
  require(inst->real_subgroup().same_set(ctx->gammaF()),
          "the type's field must have the context's totally real part as maximal real subfield");
  require(i >= 0 && i < G.order(), "embedding index out of range");
  int i_id = inst->sigmaK().id_of_element(i);
  CharacterVector out(ctx);
  for (const auto& [rho, crho] : inst->fibers()) {
    int j = ctx->places().id_of_element(rho);
    int phi_j = phi.contains(rho) ? rho : crho;
    for (int s = 0; s < G.order(); ++s)
      if (inst->sigmaK().act(G.inv(s), i_id) == phi_j) out.set_coeff(j, s, 1);
  }
  return out;
}

/// Pushforward of a character along a coarsening of the totally real level
/// (the character's Γ_F' ≤ Γ_F, same group and conjugation): the tensor
/// coefficient at a coarse slot [j⊗σ] is the sum over the finer places above
/// j.  This is the character map of the diagonal inclusion of value tori.
inline CharacterVector place_fiber_sum(const CharCtx& coarser, const CharacterVector& chi) {
  const CharCtx& fine = chi.context();
  require(coarser->gamma() == fine->gamma() && coarser->conj() == fine->conj(),
          "fiber sum requires contexts over the same group and conjugation");
  require(fine->gammaF().is_subgroup_of(coarser->gammaF()),
          "fiber sum target must be a coarser level");
  const auto& G = *coarser->gamma();
  auto tensor = chi.tensor_coeffs();
  std::vector<int> out(coarser->size(), 0);
  for (int jp : fine->places().ids()) {
    int j = coarser->places().id_of_element(jp);
    for (int s = 0; s < G.order(); ++s) out[coarser->flat(j, s)] += tensor[fine->flat(jp, s)];
  }
  return CharacterVector::from_tensor(coarser, out);
}

/// Pushforward along conjugation of the level by u: a character over the
/// level uΓ_Fu^{-1} becomes one over Γ_F by moving the tensor slot [j'⊗σ] to
/// [j'u⊗σ].  Bijective on places.
inline CharacterVector conjugate_level_push(const CharCtx& target, const CharacterVector& chi,
                                            int u) {
  const CharCtx& moved = chi.context();
  const auto& G = *target->gamma();
  require(target->gamma() == moved->gamma() && target->conj() == moved->conj(),
          "push requires contexts over the same group and conjugation");
  require(u >= 0 && u < G.order(), "element index out of range");
  require(moved->gammaF().same_set(conjugate_subgroup(target->gammaF(), u)),
          "push requires the source level to be the conjugated target level");
  auto tensor = chi.tensor_coeffs();
  std::vector<int> out(target->size(), 0);
  for (int jp : moved->places().ids()) {
    int j = target->places().id_of_element(G.mul(jp, u));
    for (int s = 0; s < G.order(); ++s) out[target->flat(j, s)] += tensor[moved->flat(jp, s)];
  }
  return CharacterVector::from_tensor(target, out);
}

/// One line per nonzero coefficient, "place:cycles=coeff" with 1-based place
/// positions and the σ written as its permutation cycles.
inline std::string character_text(const CharacterVector& chi) {
  const auto& C = *chi.context();
  const auto& G = *C.gamma();
  std::string out;
  for (int j : C.places().ids())
    for (int s = 0; s < G.order(); ++s)
      if (int v = chi.coeff(j, s); v != 0) {
        out += std::to_string(C.places().position(j) + 1) + ":" + G.element(s).cycles() + "=" +
               std::to_string(v) + "\n";
      }
  return out;
}

inline CharacterVector parse_character(const std::string& text, const CharCtx& ctx) {
  CharacterVector out(ctx);
  const auto& G = *ctx->gamma();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    line = line.substr(a, line.find_last_not_of(" \t\r") - a + 1);
    auto colon = line.find(':');
    auto eq = line.rfind('=');
    require(colon != std::string::npos && eq != std::string::npos && colon < eq,
            "line " + std::to_string(lineno) + ": expected place:cycles=coeff");
    int place = 0, coeff = 0;
    std::size_t place_used = 0, coeff_used = 0;
    std::string coeff_part = line.substr(eq + 1);
    try {
      place = std::stoi(line.substr(0, colon), &place_used);
      coeff = std::stoi(coeff_part, &coeff_used);
    } catch (const std::exception&) {
      fail("line " + std::to_string(lineno) + ": malformed number");
    }
    require(place_used == colon && coeff_used == coeff_part.size(),
            "line " + std::to_string(lineno) + ": malformed number");
    require(place >= 1 && place <= ctx->places().count(),
            "line " + std::to_string(lineno) + ": place label out of range");
    int sigma = G.index_of(Perm::parse_cycles(line.substr(colon + 1, eq - colon - 1), G.degree()));
    out.add_coeff(ctx->places().id_at(place - 1), sigma, coeff);
  }
  return out;
}

}  // namespace plectic
