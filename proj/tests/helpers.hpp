#pragma once

// Shared builders for the unit-group models used across the test suite.
// Points of a residue model are the units mod n in increasing order, so the
// permutation "multiply by a" is reproducible arithmetic, independent of the
// library under test.

#include <numeric>
#include <vector>

#include "plectic/group.hpp"

namespace testutil {

inline std::vector<int> units_mod(int n) {
  std::vector<int> out;
  for (int a = 1; a < n; ++a)
    if (std::gcd(a, n) == 1) out.push_back(a);
  return out;
}

// Permutation of the sorted unit list given by x -> a*x mod n.
inline plectic::Perm mult_perm(int n, int a) {
  auto us = units_mod(n);
  auto pos = [&](int r) {
    for (std::size_t i = 0; i < us.size(); ++i)
      if (us[i] == r) return static_cast<int>(i);
    throw std::logic_error("not a unit");
  };
  std::vector<int> im(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) im[i] = pos(int(std::int64_t(a) * us[i] % n));
  return plectic::Perm(im);
}

// The unit group (Z/n)^x on sorted-unit points, generated by `gens`.
inline plectic::GroupRef units_group(int n, std::vector<int> gens) {
  std::vector<plectic::Perm> ps;
  for (int g : gens) ps.push_back(mult_perm(n, g));
  return plectic::FiniteGroup::from_generators(int(units_mod(n).size()), ps);
}

// Element index of "multiply by a" in a units_group.
inline int residue_index(const plectic::GroupRef& G, int n, int a) {
  return G->index_of(mult_perm(n, a));
}

// Residue represented by an element index (image of the point of residue 1).
inline int index_residue(const plectic::GroupRef& G, int n, int idx) {
  auto us = units_mod(n);
  int p1 = 0;
  while (us[p1] != 1) ++p1;
  return us[G->element(idx)(p1)];
}

inline plectic::Subgroup residue_subgroup(const plectic::GroupRef& G, int n,
                                          std::vector<int> residues) {
  std::vector<int> idx;
  for (int r : residues) idx.push_back(residue_index(G, n, r));
  return plectic::Subgroup::from_indices(G, idx);
}

}  // namespace testutil
