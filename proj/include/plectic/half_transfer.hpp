#pragma once

#include <map>

#include "plectic/cm.hpp"

namespace plectic {

/// Half-transfer values live in the abelianized field stabilizer H^ab of the
/// instance; they are returned as class indices into instance->h_ab().

/// F_Phi(g) = prod over phi in Phi of w_{g·phi}^{-1} · g · w_phi, projected to
/// H^ab.  Independent of the conjugation-compatible section w; factors are
/// multiplied in embedding-id order (immaterial in the abelian target).
inline int tate_half_transfer(const CMRef& inst, const CMType& phi, int g,
                              const ConjCompatibleSection& w) {
  require(phi.instance() == inst && w.instance() == inst,
          "type or section built for a different instance");
  const auto& G = *inst->group();
  require(g >= 0 && g < G.order(), "element index out of range");
  int acc = G.identity_index();
  for (int rho : phi.members()) {
    int grho = inst->sigmaK().act(g, rho);
    int factor = G.mul(G.mul(G.inv(w.rep(grho)), g), w.rep(rho));
    require(inst->sub().contains(factor), "half-transfer factor escaped the stabilizer");
    acc = G.mul(acc, factor);
  }
  return inst->h_ab()->project(acc);
}

/// The same construction evaluated on an automorphism a that is
/// right-equivariant for the totally real stabilizer:
/// F_Phi(a) = prod of h_phi(a) with h_rho(a) = w_{a·rho}^{-1} · a(w_rho).
/// Restricted to left translations it recovers tate_half_transfer.
inline int plectic_half_transfer(const CMRef& inst, const CMType& phi,
                                 const PlecticElement& alpha,
                                 const ConjCompatibleSection& w) {
  require(phi.instance() == inst && w.instance() == inst,
          "type or section built for a different instance");
  require(alpha.group() == inst->group(), "automorphism over a different group");
  require(inst->real_subgroup().is_subgroup_of(alpha.sub()),
          "automorphism must be right-equivariant for the totally real stabilizer");
  const auto& G = *inst->group();
  int acc = G.identity_index();
  for (int rho : phi.members()) {
    int moved = alpha.apply(w.rep(rho));
    int arho = inst->sigmaK().id_of_element(moved);
    int factor = G.mul(G.inv(w.rep(arho)), moved);
    require(inst->sub().contains(factor), "half-transfer factor escaped the stabilizer");
    acc = G.mul(acc, factor);
  }
  return inst->h_ab()->project(acc);
}

/// Type bits relative to a section s of the real places: bit_x = 0 when the
/// embedding through s_x belongs to the type, 1 when its conjugate does.
inline std::map<int, int> cm_type_bits(const CMRef& inst, const CMType& phi,
                                       const CosetSection& s) {
  require(phi.instance() == inst, "type built for a different instance");
  std::map<int, int> bits;
  for (int x : inst->sigmaF().ids())
    bits[x] = phi.contains(inst->sigmaK().id_of_element(s.rep(x))) ? 0 : 1;
  return bits;
}

inline CMType cm_type_from_bits(const CMRef& inst, const std::map<int, int>& bits,
                                const CosetSection& s) {
  std::set<int> members;
  for (int x : inst->sigmaF().ids()) {
    int rho = inst->sigmaK().id_of_element(s.rep(x));
    members.insert(bits.at(x) == 0 ? rho : inst->conj_embedding(rho));
  }
  return CMType::from_members(inst, std::move(members));
}

/// Wreath-coordinate formula for the half-transfer: with (pi, h) the
/// coordinates of the automorphism over the real places relative to s, and
/// bits a encoding the type by phi_x = c^{a_x} s_x, the value is
///   prod over x of  s_{pi(x)}^{-1} c^{a_x + hbar_x} s_{pi(x)} · h_x ·
///                   s_x^{-1} c^{a_x} s_x
/// in H^ab, where hbar_x is 0 or 1 according to h_x in H versus cH.
inline int nekovar_half_transfer(const CMRef& inst, const std::map<int, int>& bits,
                                 const WreathDatum& d, const CosetSection& s) {
  const auto& G = *inst->group();
  const CosetTable& X = inst->sigmaF();
  int c = inst->conj();
  int acc = G.identity_index();
  for (int x : X.ids()) {
    require(bits.count(x) && d.pi.count(x) && d.h.count(x),
            "missing entry for a real place");
    int ax = bits.at(x);
    require(ax == 0 || ax == 1, "type bits must be 0 or 1");
    int hx = d.h.at(x);
    require(inst->real_subgroup().contains(hx),
            "wreath entry lies outside the totally real stabilizer");
    int hbar = inst->sub().contains(hx) ? 0 : 1;
    int ce = (ax + hbar) % 2 ? c : G.identity_index();
    int ca = ax ? c : G.identity_index();
    int spx = s.rep(d.pi.at(x));
    int sx = s.rep(x);
    int factor = G.mul(G.mul(G.mul(G.inv(spx), ce), spx),
                       G.mul(hx, G.mul(G.mul(G.inv(sx), ca), sx)));
    require(inst->sub().contains(factor), "formula factor escaped the stabilizer");
    acc = G.mul(acc, factor);
  }
  return inst->h_ab()->project(acc);
}

}  // namespace plectic
