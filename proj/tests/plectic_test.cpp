#include "plectic/plectic_group.hpp"

#include <gtest/gtest.h>

#include <set>
#include <utility>

#include "helpers.hpp"

using namespace plectic;
using testutil::residue_subgroup;
using testutil::units_group;

namespace {

// Independent oracle: the semidirect-product law on wreath coordinates,
// (pi1, h1)·(pi2, h2) = (pi1∘pi2, x -> h1_{pi2(x)} · h2_x).
WreathDatum law_mul(const FiniteGroup& G, const WreathDatum& a, const WreathDatum& b) {
  WreathDatum out;
  for (const auto& [x, bx] : b.pi) {
    out.pi[x] = a.pi.at(bx);
    out.h[x] = G.mul(a.h.at(bx), b.h.at(x));
  }
  return out;
}

// (pi, h)^{-1} = (pi^{-1}, x -> h_{pi^{-1}(x)}^{-1}).
WreathDatum law_inv(const FiniteGroup& G, const WreathDatum& a) {
  WreathDatum out;
  for (const auto& [x, px] : a.pi) {
    out.pi[px] = x;
    out.h[px] = G.inv(a.h.at(x));
  }
  return out;
}

GroupRef c4() { return units_group(5, {2}); }
GroupRef z8() { return units_group(8, {3, 5}); }
GroupRef z15() { return units_group(15, {2, 14}); }

GroupRef d4() {
  return group_from_generators(
      4, {Perm::parse_cycles("(1 2 3 4)", 4), Perm::parse_cycles("(2 4)", 4)});
}

}  // namespace

TEST(PlecticElement, RejectsNonEquivariantBijection) {
  auto G = z8();
  Subgroup H = residue_subgroup(G, 8, {1, 5});
  // Swapping residues 1 and 3 (different cosets of {1,5}) alone breaks
  // right-equivariance even though it is a bijection.
  std::vector<int> im(G->order());
  std::iota(im.begin(), im.end(), 0);
  std::swap(im[testutil::residue_index(G, 8, 1)], im[testutil::residue_index(G, 8, 3)]);
  EXPECT_THROW(PlecticElement(G, H, im), Error);
  // Not a bijection at all.
  std::vector<int> collapse(G->order(), 0);
  EXPECT_THROW(PlecticElement(G, H, collapse), Error);
  // Swapping a full right coset (residues 1 and 5) is fine.
  std::vector<int> ok(G->order());
  std::iota(ok.begin(), ok.end(), 0);
  std::swap(ok[testutil::residue_index(G, 8, 1)], ok[testutil::residue_index(G, 8, 5)]);
  EXPECT_NO_THROW(PlecticElement(G, H, ok));
}

TEST(PlecticElement, IdentityComposeInverse) {
  auto G = c4();
  Subgroup H = residue_subgroup(G, 5, {1, 4});
  auto e = plectic_identity(G, H);
  EXPECT_TRUE(e.is_identity());
  auto a = left_translate(G, H, testutil::residue_index(G, 5, 2));
  EXPECT_FALSE(a.is_identity());
  EXPECT_TRUE(compose(a, inverse(a)).is_identity());
  EXPECT_TRUE(compose(inverse(a), a).is_identity());
  EXPECT_EQ(compose(a, e), a);
  EXPECT_EQ(compose(e, a), a);
}

// Over the two-coset model (G = units mod 5, H = {1,4}) the automorphism
// group has order 2!·2² = 8 and composition matches the semidirect law,
// checked for every ordered pair.
TEST(PlecticGroup, ComposeMatchesSemidirectLawExhaustive) {
  auto G = c4();
  Subgroup H = residue_subgroup(G, 5, {1, 4});
  auto P = PlecticGroup::materialize(G, H);
  ASSERT_EQ(P.order(), 8);
  const auto& X = P.cosets();
  const auto& s = P.section();
  for (int i = 0; i < P.order(); ++i) {
    for (int j = 0; j < P.order(); ++j) {
      WreathDatum lhs = to_wreath(compose(P.element(i), P.element(j)), X, s);
      WreathDatum rhs = law_mul(*G, to_wreath(P.element(i), X, s), to_wreath(P.element(j), X, s));
      EXPECT_EQ(lhs, rhs);
    }
    EXPECT_EQ(to_wreath(inverse(P.element(i)), X, s),
              law_inv(*G, to_wreath(P.element(i), X, s)));
  }
}

// The wreath coordinates are a bijective homomorphism for EVERY section, and
// from_wreath inverts to_wreath.
TEST(PlecticGroup, WreathCoordinatesIsoForEverySection) {
  auto G = c4();
  Subgroup H = residue_subgroup(G, 5, {1, 4});
  auto P = PlecticGroup::materialize(G, H);
  const auto& X = P.cosets();
  for (const auto& s : all_sections(X)) {
    std::set<std::pair<std::map<int, int>, std::map<int, int>>> seen;
    for (int i = 0; i < P.order(); ++i) {
      WreathDatum d = to_wreath(P.element(i), X, s);
      seen.insert({d.pi, d.h});
      EXPECT_EQ(from_wreath(G, H, X, s, d), P.element(i));
      for (int j = 0; j < P.order(); ++j)
        EXPECT_EQ(to_wreath(compose(P.element(i), P.element(j)), X, s),
                  law_mul(*G, d, to_wreath(P.element(j), X, s)));
    }
    EXPECT_EQ(seen.size(), 8u);  // bijective onto S_X ⋉ H^X
  }
}

// Changing the section s -> s' with s'_x = s_x t_x (t_x in H) keeps pi and
// conjugates the h-family: h'_x = t_{pi(x)}^{-1} h_x t_x.
TEST(PlecticGroup, SectionChangeConjugatesCoordinates) {
  for (auto [G, H] : {std::pair{c4(), std::vector<int>{1, 4}},
                      std::pair{z15(), std::vector<int>{1, 4, 11, 14}}}) {
    Subgroup sub = residue_subgroup(G, G->degree() == 4 ? 5 : 15, H);
    auto P = PlecticGroup::materialize(G, sub);
    const auto& X = P.cosets();
    auto sections = all_sections(X);
    for (const auto& s : sections) {
      for (const auto& s2 : sections) {
        std::map<int, int> t;  // s2_x = s_x · t_x
        for (int x : X.ids()) {
          t[x] = G->mul(G->inv(s.rep(x)), s2.rep(x));
          ASSERT_TRUE(sub.contains(t[x]));
        }
        for (int i = 0; i < P.order(); ++i) {
          WreathDatum d = to_wreath(P.element(i), X, s);
          WreathDatum d2 = to_wreath(P.element(i), X, s2);
          EXPECT_EQ(d2.pi, d.pi);
          for (int x : X.ids())
            EXPECT_EQ(d2.h.at(x), G->mul(G->mul(G->inv(t.at(d.pi.at(x))), d.h.at(x)), t.at(x)));
        }
      }
    }
  }
}

// Left translation embeds G; with H = G it is an isomorphism onto the whole
// automorphism group.
TEST(PlecticGroup, LeftTranslationEmbedsAndExhaustsFullStabilizer) {
  auto G = z8();
  Subgroup whole = Subgroup::whole(G);
  auto P = PlecticGroup::materialize(G, whole);
  EXPECT_EQ(P.order(), G->order());
  std::set<int> hit;
  for (int g = 0; g < G->order(); ++g) {
    auto Lg = left_translate(G, whole, g);
    hit.insert(P.index_of(Lg));
    for (int k = 0; k < G->order(); ++k)
      EXPECT_EQ(compose(left_translate(G, whole, g), left_translate(G, whole, k)),
                left_translate(G, whole, G->mul(g, k)));
  }
  EXPECT_EQ(hit.size(), static_cast<std::size_t>(G->order()));
  // Against a proper subgroup it is still an injective homomorphism.
  Subgroup H = residue_subgroup(G, 8, {1, 5});
  std::set<std::vector<int>> images;
  for (int g = 0; g < G->order(); ++g) images.insert(left_translate(G, H, g).mapping());
  EXPECT_EQ(images.size(), static_cast<std::size_t>(G->order()));
}

TEST(PlecticGroup, MaterializedOrders) {
  auto G5 = c4();
  EXPECT_EQ(PlecticGroup::materialize(G5, residue_subgroup(G5, 5, {1, 4})).order(), 8);
  auto G8 = z8();
  EXPECT_EQ(PlecticGroup::materialize(G8, Subgroup::whole(G8)).order(), 4);
  auto G = z15();
  EXPECT_EQ(PlecticGroup::materialize(G, residue_subgroup(G, 15, {1, 4, 11, 14})).order(), 32);
  auto D = d4();
  EXPECT_EQ(PlecticGroup::materialize(D, Subgroup::whole(D)).order(), 8);
  EXPECT_THROW(PlecticGroup::materialize(G, residue_subgroup(G, 15, {1, 11}), 10), Error);
}

TEST(PlecticGroup, MaterializedClosureAndIndexing) {
  auto G = z15();
  Subgroup H = residue_subgroup(G, 15, {1, 4, 11, 14});
  auto P = PlecticGroup::materialize(G, H);
  EXPECT_TRUE(P.element(P.identity()).is_identity());
  for (int i = 0; i < P.order(); ++i) {
    EXPECT_EQ(P.mul(i, P.inv(i)), P.identity());
    for (int j = 0; j < P.order(); ++j) {
      int k = P.mul(i, j);  // throws if not closed
      ASSERT_GE(k, 0);
    }
  }
}

// Viewing an automorphism over a finer subgroup H' <= H: the coarse wreath
// coordinates (pi, h) and section pair (s, t) determine the fine ones by
//   pi'(s_x t_y H') = s_{pi(x)} t_{h_x y} H',   h'_{x,y} = t_{h_x y}^{-1} h_x t_y,
// checked for every element, every section of G/H, every section of H/H'.
TEST(PlecticGroup, RefineSubgroupCoordinateFormulas) {
  auto G = z15();
  Subgroup H = residue_subgroup(G, 15, {1, 4, 11, 14});
  Subgroup Hp = residue_subgroup(G, 15, {1, 11});
  auto P = PlecticGroup::materialize(G, H);
  const auto& X = P.cosets();
  CosetTable Y(H, Hp);
  CosetTable Xp = left_cosets(G, Hp);
  for (const auto& s : all_sections(X)) {
    for (const auto& t : all_sections(Y)) {
      // Fine section: s'_{s_x t_y H'} = s_x t_y.
      std::map<int, int> rep;
      for (int x : X.ids())
        for (int y : Y.ids()) {
          int g = G->mul(s.rep(x), t.rep(y));
          rep[Xp.id_of_element(g)] = g;
        }
      CosetSection sp(Xp, rep);
      for (int i = 0; i < P.order(); ++i) {
        WreathDatum d = to_wreath(P.element(i), X, s);
        WreathDatum fine = to_wreath(include_into_finer(P.element(i), Hp), Xp, sp);
        for (int x : X.ids())
          for (int y : Y.ids()) {
            int xp = Xp.id_of_element(G->mul(s.rep(x), t.rep(y)));
            int hx = d.h.at(x);
            int y2 = Y.act(hx, y);
            EXPECT_EQ(fine.pi.at(xp), Xp.id_of_element(G->mul(s.rep(d.pi.at(x)), t.rep(y2))));
            EXPECT_EQ(fine.h.at(xp), G->mul(G->mul(G->inv(t.rep(y2)), hx), t.rep(y)));
          }
      }
    }
  }
}

TEST(PlecticGroup, RefineSubgroupRequiresContainment) {
  auto G = z15();
  Subgroup H = residue_subgroup(G, 15, {1, 11});
  Subgroup other = residue_subgroup(G, 15, {1, 4});
  auto a = plectic_identity(G, H);
  EXPECT_THROW(include_into_finer(a, other), Error);
}

// Transport by u: a'(g) = a(g·u)·u^{-1}, an isomorphism onto the group over
// u H u^{-1} that depends only on the coset uH, with [u1]∘[u2] = [u1·u2].
// Coordinates relative to the transported section s'_{x u^{-1}} = s_x u^{-1}:
// pi' is pi pushed through x -> x·u^{-1} and h'-values are u h_x u^{-1}.
TEST(PlecticGroup, TransportFormulasNonAbelian) {
  auto G = d4();
  Subgroup H = Subgroup::from_generators(G, {Perm::parse_cycles("(2 4)", 4)});
  auto P = PlecticGroup::materialize(G, H);
  ASSERT_EQ(P.order(), 384);
  const auto& X = P.cosets();
  const auto& s = P.section();
  for (int u = 0; u < G->order(); ++u) {
    Subgroup Hu = conjugate_subgroup(H, u);
    CosetTable Xu = left_cosets(G, Hu);
    std::map<int, int> rep;
    for (int x : X.ids()) {
      int g = G->mul(s.rep(x), G->inv(u));
      rep[Xu.id_of_element(g)] = g;
    }
    CosetSection su(Xu, rep);
    for (int i = 0; i < P.order(); ++i) {
      auto moved = conjugate_transport(P.element(i), u);
      EXPECT_TRUE(moved.sub().same_set(Hu));
      for (int g = 0; g < G->order(); ++g)
        EXPECT_EQ(moved.apply(g), G->mul(P.element(i).apply(G->mul(g, u)), G->inv(u)));
      WreathDatum d = to_wreath(P.element(i), X, s);
      WreathDatum du = to_wreath(moved, Xu, su);
      for (int x : X.ids()) {
        int xu = Xu.id_of_element(G->mul(x, G->inv(u)));
        EXPECT_EQ(du.pi.at(xu), Xu.id_of_element(G->mul(d.pi.at(x), G->inv(u))));
        EXPECT_EQ(du.h.at(xu), G->conj(u, d.h.at(x)));
      }
      // Same coset, same transport.
      for (int h : H.members())
        EXPECT_EQ(conjugate_transport(P.element(i), G->mul(u, h)), moved);
    }
    // Isomorphism property on a slice of pairs.
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j)
        EXPECT_EQ(conjugate_transport(compose(P.element(i * 31 % P.order()),
                                              P.element(j * 17 % P.order())),
                                      u),
                  compose(conjugate_transport(P.element(i * 31 % P.order()), u),
                          conjugate_transport(P.element(j * 17 % P.order()), u)));
  }
}

TEST(PlecticGroup, TransportComposition) {
  auto G = d4();
  Subgroup H = Subgroup::from_generators(G, {Perm::parse_cycles("(2 4)", 4)});
  auto P = PlecticGroup::materialize(G, H);
  for (int u1 = 0; u1 < G->order(); ++u1)
    for (int u2 = 0; u2 < G->order(); ++u2)
      for (int i : {0, 1, 7, 100, 383})
        EXPECT_EQ(conjugate_transport(conjugate_transport(P.element(i), u2), u1),
                  conjugate_transport(P.element(i), G->mul(u1, u2)));
}

TEST(WreathDatum, SerializationRoundTrip) {
  auto G = z15();
  Subgroup H = residue_subgroup(G, 15, {1, 4, 11, 14});
  auto P = PlecticGroup::materialize(G, H);
  const auto& X = P.cosets();
  const auto& s = P.section();
  std::set<std::string> texts;
  for (int i = 0; i < P.order(); ++i) {
    WreathDatum d = to_wreath(P.element(i), X, s);
    std::string text = d.str(*G, X);
    texts.insert(text);
    EXPECT_EQ(parse_wreath(text, *G, X), d);
  }
  EXPECT_EQ(texts.size(), static_cast<std::size_t>(P.order()));
  // Identity prints with explicit trivial parts.
  WreathDatum id = to_wreath(plectic_identity(G, H), X, s);
  EXPECT_EQ(id.str(*G, X), "pi: (); h: 1 -> (), 2 -> ()");
}

TEST(WreathDatum, ParseRejectsMalformedInput) {
  auto G = z8();
  Subgroup H = residue_subgroup(G, 8, {1, 5});
  CosetTable X = left_cosets(G, H);
  EXPECT_NO_THROW(parse_wreath("pi: (1 2); h: 1 -> (1 3)(2 4), 2 -> ()", *G, X));
  EXPECT_THROW(parse_wreath("pi: (1 2)", *G, X), Error);                         // no h part
  EXPECT_THROW(parse_wreath("pi: (1 2); h: 1 -> ()", *G, X), Error);             // missing coset
  EXPECT_THROW(parse_wreath("pi: (1 2); h: 1 -> (), 1 -> ()", *G, X), Error);    // duplicate
  EXPECT_THROW(parse_wreath("pi: (1 2); h: 1 -> (), 3 -> ()", *G, X), Error);    // bad label
  EXPECT_THROW(parse_wreath("pi: (1 3); h: 1 -> (), 2 -> ()", *G, X), Error);    // pi label
  EXPECT_THROW(parse_wreath("h: 1 -> (), 2 -> ()", *G, X), Error);               // no pi part
  EXPECT_THROW(parse_wreath("pi: (); h: 1 -> (1 2 3 4), 2 -> ()", *G, X), Error);  // h not in H
}

// Wreath h-coordinates must lie in the subgroup when rebuilding an element.
TEST(WreathDatum, FromWreathValidatesSubgroupMembership) {
  auto G = z8();
  Subgroup H = residue_subgroup(G, 8, {1, 5});
  CosetTable X = left_cosets(G, H);
  CosetSection s = CosetSection::canonical(X);
  WreathDatum d;
  for (int x : X.ids()) {
    d.pi[x] = x;
    d.h[x] = G->identity_index();
  }
  d.h[X.id_at(0)] = testutil::residue_index(G, 8, 3);  // 3 is not in {1,5}
  EXPECT_THROW(from_wreath(G, H, X, s, d), Error);
}
