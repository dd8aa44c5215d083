#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "plectic/half_transfer.hpp"
#include "plectic/serre.hpp"

namespace plectic {

inline int group_power(const FiniteGroup& G, int x, int e) {
  int base = e < 0 ? G.inv(x) : x;
  int n = e < 0 ? -e : e;
  int acc = G.identity_index();
  for (int k = 0; k < n; ++k) acc = G.mul(acc, base);
  return acc;
}

/// Descends an automorphism along a quotient map whose kernel lies in the
/// automorphism's stabilizer.
inline PlecticElement project_plectic(const QuotRef& q, const PlecticElement& a,
                                      const Subgroup& image_sub) {
  require(a.group() == q->parent(), "element is not over the quotient's parent");
  require(q->normal().is_subgroup_of(a.sub()), "quotient kernel must lie in the stabilizer");
  require(image_sub.parent() == q->as_group(), "image stabilizer must live in the quotient");
  std::vector<int> im(q->order());
  for (int x = 0; x < q->order(); ++x) im[x] = q->project(a.apply(q->class_rep(x)));
  return PlecticElement(q->as_group(), image_sub, std::move(im));
}

class WeilDatum;
using WeilRef = std::shared_ptr<const WeilDatum>;

namespace detail {
inline WeilRef finish_weil_datum(GroupRef W, Subgroup A, int ctilde, Subgroup WF, QuotRef quot);
}

/// A finite stand-in for a Weil-group situation over a CM level: a group W,
/// an abelian normal coefficient subgroup A (the value group), a conjugation
/// lift squaring to the identity and surviving to Gamma = W/A, and a totally
/// real level specified by its full preimage W_F <= W.  The quotient Gamma
/// together with c and Gamma_F = W_F/A forms the character context whose
/// weight sublattice the values of automorphisms pair against.
class WeilDatum {
 public:
  const GroupRef& weil_group() const { return W_; }
  const Subgroup& coeff_subgroup() const { return A_; }
  int conj_lift() const { return ctilde_; }
  const Subgroup& level_subgroup() const { return WF_; }
  const QuotRef& quotient() const { return quot_; }

  const GroupRef& gamma() const { return quot_->as_group(); }
  int conj() const { return ctx_->conj(); }
  const Subgroup& gammaF() const { return ctx_->gammaF(); }
  const CharCtx& context() const { return ctx_; }
  const SerreLattice& lattice() const { return lattice_; }

  friend WeilRef detail::finish_weil_datum(GroupRef W, Subgroup A, int ctilde, Subgroup WF,
                                           QuotRef quot);

 private:
  WeilDatum(GroupRef W, Subgroup A, int ctilde, Subgroup WF, QuotRef quot, CharCtx ctx)
      : W_(std::move(W)),
        A_(std::move(A)),
        ctilde_(ctilde),
        WF_(std::move(WF)),
        quot_(std::move(quot)),
        ctx_(std::move(ctx)),
        lattice_(ctx_) {}

  GroupRef W_;
  Subgroup A_;
  int ctilde_;
  Subgroup WF_;
  QuotRef quot_;
  CharCtx ctx_;
  SerreLattice lattice_;
};

namespace detail {

inline WeilRef finish_weil_datum(GroupRef W, Subgroup A, int ctilde, Subgroup WF, QuotRef quot) {
  require(ctilde >= 0 && ctilde < W->order(), "conjugation lift out of range");
  require(W->mul(ctilde, ctilde) == W->identity_index(),
          "conjugation lift must be an involution");
  require(A.is_subgroup_of(WF), "level subgroup must contain the coefficient subgroup");
  int c = quot->project(ctilde);
  require(c != quot->identity(), "conjugation must survive to the coefficient quotient");
  std::vector<int> gf;
  for (int x : WF.members()) gf.push_back(quot->project(x));
  Subgroup gammaF = Subgroup::from_indices(quot->as_group(), std::move(gf));
  // centrality of c and total realness of the level are checked here
  CharCtx ctx = CharContext::make(quot->as_group(), std::move(gammaF), c);
  return WeilRef(new WeilDatum(std::move(W), std::move(A), ctilde, std::move(WF),
                               std::move(quot), std::move(ctx)));
}

}  // namespace detail

inline WeilRef validate_weil_datum(GroupRef W, Subgroup A, int ctilde, Subgroup WF) {
  require(A.parent() == W && WF.parent() == W, "subgroup belongs to a different group model");
  require(A.is_abelian(), "coefficient subgroup must be abelian");
  require(A.is_normal_in(Subgroup::whole(W)), "coefficient subgroup must be normal");
  QuotRef quot = QuotientGroup::make(Subgroup::whole(W), A);
  return detail::finish_weil_datum(std::move(W), std::move(A), ctilde, std::move(WF),
                                   std::move(quot));
}

/// A datum with the same group and coefficients but a different conjugation
/// lift or level.  Shares the base's quotient model, so characters over the
/// two data live over the same group and can be moved across levels.
inline WeilRef derived_datum(const WeilRef& base, int ctilde, Subgroup WF) {
  require(WF.parent() == base->weil_group(), "subgroup belongs to a different group model");
  return detail::finish_weil_datum(base->weil_group(), base->coeff_subgroup(), ctilde,
                                   std::move(WF), base->quotient());
}

/// Image of a subgroup of the quotient's domain under the projection.
inline Subgroup image_subgroup(const QuotRef& q, const Subgroup& s) {
  std::vector<int> img;
  for (int x : s.members()) img.push_back(q->project(x));
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return Subgroup::from_indices(q->as_group(), std::move(img));
}

/// The datum a Galois-model CM instance (G, H, c) with H normal realizes:
/// W = G/[H,H], coefficients A = H/[H,H], the conjugation's image as lift,
/// and the image of H ∪ cH as level preimage.
inline WeilRef galois_realized_datum(const CMRef& inst) {
  const auto& G = inst->group();
  require(inst->sub().is_normal_in(Subgroup::whole(G)),
          "realization needs a normal field stabilizer");
  QuotRef q = QuotientGroup::make(Subgroup::whole(G), commutator_subgroup(inst->sub()));
  return validate_weil_datum(q->as_group(), image_subgroup(q, inst->sub()),
                             q->project(inst->conj()),
                             image_subgroup(q, inst->real_subgroup()));
}

/// A conjugation-compatible family (w_sigma): w_sigma projects to sigma and
/// w_{c sigma} = ctilde * w_sigma.
class WeilSection {
 public:
  static WeilSection from_map(WeilRef d, std::vector<int> w) {
    const auto& G = *d->gamma();
    const auto& W = *d->weil_group();
    require(w.size() == static_cast<std::size_t>(G.order()),
            "section must assign one lift per quotient element");
    for (int s = 0; s < G.order(); ++s) {
      require(w[s] >= 0 && w[s] < W.order() && d->quotient()->project(w[s]) == s,
              "section entry does not project to its element");
      require(w[G.mul(d->conj(), s)] == W.mul(d->conj_lift(), w[s]),
              "section is not conjugation compatible");
    }
    return WeilSection(std::move(d), std::move(w));
  }

  static WeilSection canonical(const WeilRef& d) {
    const auto& W = *d->weil_group();
    std::vector<int> w(d->gamma()->order());
    for (const auto& [s, cs] : d->lattice().pairs()) {
      w[s] = d->quotient()->class_rep(s);
      w[cs] = W.mul(d->conj_lift(), w[s]);
    }
    return WeilSection(d, std::move(w));
  }

  const WeilRef& datum() const { return datum_; }
  int rep(int sigma) const { return w_.at(sigma); }
  const std::vector<int>& reps() const { return w_; }

 private:
  WeilSection(WeilRef d, std::vector<int> w) : datum_(std::move(d)), w_(std::move(w)) {}
  WeilRef datum_;
  std::vector<int> w_;
};

/// All |A|^(|Gamma|/2) conjugation-compatible families, free on one lift per
/// conjugation pair.
inline std::vector<WeilSection> enumerate_weil_sections(const WeilRef& d,
                                                        std::size_t cap = wreath_enum_cap()) {
  const auto& W = *d->weil_group();
  const auto& pairs = d->lattice().pairs();
  const auto& amem = d->coeff_subgroup().members();
  std::size_t total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    total *= amem.size();
    require(total <= cap, "section enumeration exceeds cap");
  }
  std::vector<WeilSection> out;
  std::vector<std::size_t> odo(pairs.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<int> w(d->gamma()->order());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [s, cs] = pairs[i];
      w[s] = W.mul(amem[odo[i]], d->quotient()->class_rep(s));
      w[cs] = W.mul(d->conj_lift(), w[s]);
    }
    out.push_back(WeilSection::from_map(d, std::move(w)));
    for (std::size_t i = 0; i < odo.size(); ++i) {
      if (++odo[i] < amem.size()) break;
      odo[i] = 0;
    }
  }
  return out;
}

/// The automorphism of W as a right A-set induced at the place j: transport
/// by any W-lift of a representative of j.  Independent of the lift.
inline PlecticElement embed_j(const WeilRef& d, const PlecticElement& alpha, int place) {
  require(alpha.group() == d->weil_group() && alpha.sub().same_set(d->level_subgroup()),
          "automorphism is not over the datum's level");
  require(d->context()->is_place(place), "not a place id");
  int u = d->quotient()->class_rep(place);
  return include_into_finer(conjugate_transport(alpha, u), d->coeff_subgroup());
}

/// The coefficient-valued family h(alpha): entry at the tensor slot (j, sigma)
/// is w_{pi_j(sigma^{-1})}^{-1} * (embed_j alpha)(w_{sigma^{-1}}), pi_j the
/// quotient permutation of embed_j alpha.
class HVector {
 public:
  HVector(WeilRef d, std::vector<int> entries)
      : datum_(std::move(d)), entries_(std::move(entries)) {
    require(entries_.size() == static_cast<std::size_t>(datum_->context()->size()),
            "entry family does not match the index set");
  }
  const WeilRef& datum() const { return datum_; }
  int entry(int place_id, int sigma) const {
    return entries_[datum_->context()->flat(place_id, sigma)];
  }

 private:
  WeilRef datum_;
  std::vector<int> entries_;
};

inline HVector h_vector(const WeilSection& w, const PlecticElement& alpha) {
  const WeilRef& d = w.datum();
  const auto& W = *d->weil_group();
  const auto& G = *d->gamma();
  const CharCtx& ctx = d->context();
  std::vector<int> entries(ctx->size());
  for (int j : ctx->places().ids()) {
    PlecticElement emb = embed_j(d, alpha, j);
    std::vector<int> pi(G.order());
    for (int t = 0; t < G.order(); ++t)
      pi[t] = d->quotient()->project(emb.apply(d->quotient()->class_rep(t)));
    for (int s = 0; s < G.order(); ++s) {
      int si = G.inv(s);
      int val = W.mul(W.inv(w.rep(pi[si])), emb.apply(w.rep(si)));
      require(d->coeff_subgroup().contains(val), "h entry escaped the coefficient subgroup");
      entries[ctx->flat(j, s)] = val;
    }
  }
  return HVector(d, std::move(entries));
}

/// Product of entries to the character's tensor coefficients; defined for any
/// character, but only its restriction to the weight sublattice is
/// independent of the section.
inline int raw_pairing(const HVector& h, const CharacterVector& chi) {
  const WeilRef& d = h.datum();
  require(chi.context() == d->context(), "character over a different index set");
  const auto& W = *d->weil_group();
  const auto& G = *d->gamma();
  auto tensor = chi.tensor_coeffs();
  int acc = W.identity_index();
  for (int j : d->context()->places().ids())
    for (int s = 0; s < G.order(); ++s)
      acc = W.mul(acc, group_power(W, h.entry(j, s), tensor[d->context()->flat(j, s)]));
  return acc;
}

/// A coefficient-valued homomorphism on the weight sublattice, stored by its
/// values on the basis.
class TaniyamaValue {
 public:
  TaniyamaValue(WeilRef d, std::vector<int> vals)
      : datum_(std::move(d)), vals_(std::move(vals)) {
    require(vals_.size() == static_cast<std::size_t>(datum_->lattice().rank()),
            "value list does not match the lattice rank");
    for (int v : vals_)
      require(datum_->coeff_subgroup().contains(v), "value escaped the coefficient subgroup");
  }

  const WeilRef& datum() const { return datum_; }
  const std::vector<int>& vals() const { return vals_; }

  int evaluate(const CharacterVector& chi) const {
    const auto& W = *datum_->weil_group();
    std::vector<int> coords = datum_->lattice().coordinates_of(chi);
    int acc = W.identity_index();
    for (std::size_t k = 0; k < vals_.size(); ++k)
      acc = W.mul(acc, group_power(W, vals_[k], coords[k]));
    return acc;
  }

  friend TaniyamaValue pointwise_product(const TaniyamaValue& a, const TaniyamaValue& b) {
    require(a.datum_ == b.datum_, "values over different data");
    const auto& W = *a.datum_->weil_group();
    std::vector<int> vals(a.vals_.size());
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = W.mul(a.vals_[k], b.vals_[k]);
    return TaniyamaValue(a.datum_, std::move(vals));
  }

  friend TaniyamaValue pointwise_inverse(const TaniyamaValue& a) {
    const auto& W = *a.datum_->weil_group();
    std::vector<int> vals(a.vals_.size());
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = W.inv(a.vals_[k]);
    return TaniyamaValue(a.datum_, std::move(vals));
  }

  friend bool operator==(const TaniyamaValue& a, const TaniyamaValue& b) {
    return a.datum_ == b.datum_ && a.vals_ == b.vals_;
  }

 private:
  WeilRef datum_;
  std::vector<int> vals_;
};

/// The value of an automorphism: the h-family paired against the lattice
/// basis.  Independent of the section.
inline TaniyamaValue taniyama_value(const WeilSection& w, const PlecticElement& alpha) {
  const WeilRef& d = w.datum();
  HVector h = h_vector(w, alpha);
  std::vector<int> vals;
  vals.reserve(d->lattice().rank());
  for (const auto& v : d->lattice().basis()) vals.push_back(raw_pairing(h, v));
  return TaniyamaValue(d, std::move(vals));
}

/// The automorphism descended to the coefficient quotient.
inline PlecticElement quotient_push(const WeilRef& d, const PlecticElement& alpha) {
  require(alpha.group() == d->weil_group() && alpha.sub().same_set(d->level_subgroup()),
          "automorphism is not over the datum's level");
  return project_plectic(d->quotient(), alpha, d->gammaF());
}

/// Star action of a quotient-level automorphism on values: precompose the
/// homomorphism with the algebraic action on characters.  A left action.
inline TaniyamaValue star_action(const PlecticElement& abar, const TaniyamaValue& f) {
  const WeilRef& d = f.datum();
  std::vector<int> vals;
  vals.reserve(d->lattice().rank());
  for (const auto& v : d->lattice().basis()) vals.push_back(f.evaluate(algebraic_action(abar, v)));
  return TaniyamaValue(d, std::move(vals));
}

/// Galois action of tau on values: twist by the arithmetic action on
/// characters and conjugate the coefficients by any lift of tau.
inline TaniyamaValue galois_action(int tau, const TaniyamaValue& f) {
  const WeilRef& d = f.datum();
  const auto& W = *d->weil_group();
  const auto& G = *d->gamma();
  require(tau >= 0 && tau < G.order(), "element index out of range");
  int lift = d->quotient()->class_rep(tau);
  std::vector<int> vals;
  vals.reserve(d->lattice().rank());
  for (const auto& v : d->lattice().basis())
    vals.push_back(W.conj(lift, f.evaluate(arithmetic_action(G.inv(tau), v))));
  return TaniyamaValue(d, std::move(vals));
}

/// x -> g_{j(x)} x for one coefficient element per place, blocks being the
/// level cosets of W.  Always a valid automorphism over the level.
inline PlecticElement block_left_multiplication(const WeilRef& d, const std::vector<int>& gs) {
  const auto& W = *d->weil_group();
  const CharCtx& ctx = d->context();
  require(gs.size() == static_cast<std::size_t>(ctx->place_count()),
          "one coefficient element per place required");
  for (int g : gs)
    require(d->coeff_subgroup().contains(g), "block factors must lie in the coefficients");
  std::vector<int> im(W.order());
  for (int x = 0; x < W.order(); ++x) {
    int place = ctx->places().id_of_element(d->quotient()->project(x));
    im[x] = W.mul(gs[ctx->places().position(place)], x);
  }
  return PlecticElement(d->weil_group(), d->level_subgroup(), std::move(im));
}

class NestedLevels;
using NestedRef = std::shared_ptr<const NestedLevels>;

/// A tower refinement: a fine datum over W' together with a normal
/// intermediate stabilizer H between the coefficients and the level; the
/// coarse datum lives on W = W'/[H,H] with coefficients H/[H,H].  The
/// transfer from H to the fine coefficients plays the role of the inclusion
/// of coarse values into fine ones.
class NestedLevels {
 public:
  static NestedRef make(WeilRef fine, Subgroup mid) {
    require(mid.parent() == fine->weil_group(),
            "intermediate stabilizer belongs to a different group model");
    require(fine->coeff_subgroup().is_subgroup_of(mid),
            "intermediate stabilizer must contain the fine coefficients");
    require(mid.is_subgroup_of(fine->level_subgroup()),
            "intermediate stabilizer must lie in the level stabilizer");
    require(mid.is_normal_in(Subgroup::whole(fine->weil_group())),
            "intermediate stabilizer must be normal");
    require(!mid.contains(fine->conj_lift()), "conjugation must survive to the coarse level");
    QuotRef cm = QuotientGroup::make(Subgroup::whole(fine->weil_group()),
                                     commutator_subgroup(mid));
    std::vector<int> a, wf;
    for (int h : mid.members()) a.push_back(cm->project(h));
    for (int x : fine->level_subgroup().members()) wf.push_back(cm->project(x));
    WeilRef coarse = validate_weil_datum(
        cm->as_group(), Subgroup::from_indices(cm->as_group(), std::move(a)),
        cm->project(fine->conj_lift()), Subgroup::from_indices(cm->as_group(), std::move(wf)));
    return NestedRef(new NestedLevels(std::move(fine), std::move(mid), std::move(cm),
                                      std::move(coarse)));
  }

  const WeilRef& fine() const { return fine_; }
  const WeilRef& coarse() const { return coarse_; }
  const Subgroup& intermediate() const { return mid_; }
  const QuotRef& coarse_map() const { return cm_; }

  /// Transfer of an intermediate element into the fine coefficients.
  int ver(int h) const {
    require(mid_.contains(h), "transfer argument must lie in the intermediate stabilizer");
    return abfine_->class_rep(transfer(mid_, abfine_, h));
  }

  /// A coarse coefficient value carried into the fine coefficients.
  int transfer_coarse_value(int v) const {
    require(coarse_->coeff_subgroup().contains(v), "not a coarse coefficient element");
    return ver(cm_->class_rep(v));
  }

  /// Quotient map on the character-level groups.
  int project_gamma(int sigma_fine) const {
    return coarse_->quotient()->project(cm_->project(fine_->quotient()->class_rep(sigma_fine)));
  }

  PlecticElement push(const PlecticElement& alpha_fine) const {
    require(alpha_fine.group() == fine_->weil_group() &&
                alpha_fine.sub().same_set(fine_->level_subgroup()),
            "automorphism is not over the fine level");
    return project_plectic(cm_, alpha_fine, coarse_->level_subgroup());
  }

  /// The norm map on characters: a coarse character inflated so that the
  /// coefficient at [j' (x) sigma'] is the coarse coefficient at the images
  /// of j' and sigma'.
  CharacterVector inflate(const CharacterVector& chi) const {
    require(chi.context() == coarse_->context(), "character is not at the coarse level");
    const CharCtx& fctx = fine_->context();
    const CharCtx& cctx = coarse_->context();
    const auto& Gf = *fctx->gamma();
    auto tensor = chi.tensor_coeffs();
    std::vector<int> out(fctx->size());
    for (int j : fctx->places().ids()) {
      int cj = cctx->places().id_of_element(project_gamma(j));
      for (int s = 0; s < Gf.order(); ++s)
        out[fctx->flat(j, s)] = tensor[cctx->flat(cj, project_gamma(s))];
    }
    return CharacterVector::from_tensor(fctx, out);
  }

 private:
  NestedLevels(WeilRef fine, Subgroup mid, QuotRef cm, WeilRef coarse)
      : fine_(std::move(fine)),
        mid_(std::move(mid)),
        cm_(std::move(cm)),
        coarse_(std::move(coarse)),
        abfine_(abelianization(fine_->coeff_subgroup())) {}

  WeilRef fine_;
  Subgroup mid_;
  QuotRef cm_;
  WeilRef coarse_;
  QuotRef abfine_;
};

struct ReflexRow {
  int embedding;    // coset id at the field level
  int level_side;   // pairing of h with the reflex character, in A
  int field_side;   // transferred conjugate of the half-transfer, in A
};

/// For a CM pair above the datum's level (stabilizer containing A, real part
/// equal to W_F): at every embedding, the h-family paired against the
/// reflex-norm character must agree with the half-transfer of alpha conjugated
/// to the embedding and transferred down to the coefficients.
inline std::vector<ReflexRow> reflex_comparison(const WeilSection& w,
                                                const PlecticElement& alpha,
                                                const CMRef& kinst, const CMType& phi) {
  const WeilRef& d = w.datum();
  const auto& W = *d->weil_group();
  require(kinst->group() == d->weil_group(), "field instance over a different group model");
  require(kinst->conj() == d->conj_lift(), "field instance has a different conjugation");
  require(d->coeff_subgroup().is_subgroup_of(kinst->sub()),
          "field stabilizer must contain the coefficients");
  require(kinst->real_subgroup().same_set(d->level_subgroup()),
          "field's real part must be the datum's level");
  require(phi.instance() == kinst, "type built for a different instance");

  // quotient-level counterpart of the field instance
  std::vector<int> hk;
  for (int x : kinst->sub().members()) hk.push_back(d->quotient()->project(x));
  CMRef kq = CMInstance::make(d->gamma(), Subgroup::from_indices(d->gamma(), std::move(hk)),
                              d->conj());
  std::set<int> members;
  for (int m : phi.members()) members.insert(kq->sigmaK().id_of_element(d->quotient()->project(m)));
  CMType phiq = CMType::from_members(kq, std::move(members));

  HVector h = h_vector(w, alpha);
  std::map<int, int> smap;
  for (const auto& [r, cr] : kinst->fibers()) {
    smap[r] = r;
    smap[cr] = W.mul(kinst->conj(), r);
  }
  ConjCompatibleSection ws = ConjCompatibleSection::from_map(kinst, std::move(smap));
  int ht_class = plectic_half_transfer(kinst, phi, alpha, ws);
  int ht = kinst->h_ab()->class_rep(ht_class);
  QuotRef abA = abelianization(d->coeff_subgroup());

  std::vector<ReflexRow> rows;
  for (int i : kinst->sigmaK().ids()) {
    CharacterVector chi =
        reflex_norm_character(d->context(), phiq, d->quotient()->project(i));
    int level_side = raw_pairing(h, chi);
    Subgroup ku = conjugate_subgroup(kinst->sub(), i);
    int field_side = abA->class_rep(transfer(ku, abA, W.conj(i, ht)));
    rows.push_back({i, level_side, field_side});
  }
  return rows;
}

}  // namespace plectic
