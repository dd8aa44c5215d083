#pragma once

// Named law checks over a parsed instance, grouped into suites, with
// deterministic text and JSON reports.  Every check re-verifies one module
// invariant on the given instance; a counterexample is reported with the
// first witness found.  Wall times are measured but never rendered, so two
// runs over the same instance produce byte-identical reports.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "plectic/extension.hpp"
#include "plectic/instance_io.hpp"

namespace plectic {

struct CheckResult {
  std::string name;
  std::string law;
  std::string status;  // "pass" | "fail" | "skipped"
  std::string detail;  // counterexample or skip reason; empty on pass
  double seconds = 0.0;
};

struct SuiteReport {
  std::string instance;
  std::string suite;
  std::vector<CheckResult> checks;

  int count(const std::string& status) const {
    int n = 0;
    for (const auto& c : checks)
      if (c.status == status) ++n;
    return n;
  }
  bool all_passed() const { return count("fail") == 0; }
};

struct SuiteOptions {
  int sample = 0;          // 0 = exhaustive everywhere the caps allow
  std::uint64_t seed = 0;  // used only when sample > 0
  std::size_t cap = 0;     // 0 = library default (PLECTIC_LAB_CAP aware)

  std::size_t resolved_cap() const { return cap ? cap : wreath_enum_cap(); }
};

namespace suitedetail {

/// Thrown by a check body to mark the check inapplicable to this instance.
struct Skip {
  std::string reason;
};

class Runner {
 public:
  Runner(SuiteReport& rep, std::string prefix) : rep_(rep), prefix_(std::move(prefix)) {}

  void run(const std::string& name, const std::string& law,
           const std::function<std::optional<std::string>()>& body) {
    CheckResult r;
    r.name = prefix_ + "/" + name;
    r.law = law;
    auto t0 = std::chrono::steady_clock::now();
    try {
      if (auto bad = body()) {
        r.status = "fail";
        r.detail = *bad;
      } else {
        r.status = "pass";
      }
    } catch (const Skip& s) {
      r.status = "skipped";
      r.detail = s.reason;
    } catch (const Error& e) {
      std::string msg = e.what();
      if (msg.find("cap") != std::string::npos) {
        r.status = "skipped";  // instance too large for an exhaustive sweep
        r.detail = msg;
      } else {
        r.status = "fail";
        r.detail = msg;
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep_.checks.push_back(std::move(r));
  }

  void skip(const std::string& name, const std::string& law, const std::string& reason) {
    rep_.checks.push_back(CheckResult{prefix_ + "/" + name, law, "skipped", reason, 0.0});
  }

 private:
  SuiteReport& rep_;
  std::string prefix_;
};

/// Build-once cache so several checks can share one expensive object while
/// still reporting construction failures per check.
template <typename T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> make) : make_(std::move(make)) {}
  const T& get() {
    if (!value_) value_.emplace(make_());
    return *value_;
  }

 private:
  std::function<T()> make_;
  std::optional<T> value_;
};

// Semidirect-product law on wreath coordinates:
// (pi1, h1)·(pi2, h2) = (pi1∘pi2, x -> h1_{pi2(x)} · h2_x).
inline WreathDatum wreath_mul(const FiniteGroup& G, const WreathDatum& a, const WreathDatum& b) {
  WreathDatum out;
  for (const auto& [x, bx] : b.pi) {
    out.pi[x] = a.pi.at(bx);
    out.h[x] = G.mul(a.h.at(bx), b.h.at(x));
  }
  return out;
}

inline WreathDatum wreath_inv(const FiniteGroup& G, const WreathDatum& a) {
  WreathDatum out;
  for (const auto& [x, px] : a.pi) {
    out.pi[px] = x;
    out.h[px] = G.inv(a.h.at(x));
  }
  return out;
}

inline std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t p = 1;
  while (e--) p *= b;
  return p;
}

inline std::vector<PlecticElement> materialized_elements(const GroupRef& G, const Subgroup& sub,
                                                         std::size_t cap) {
  PlecticGroup P = PlecticGroup::materialize(G, sub, cap);
  std::vector<PlecticElement> out;
  out.reserve(P.order());
  for (int i = 0; i < P.order(); ++i) out.push_back(P.element(i));
  return out;
}

/// Deterministic generic lattice member used by single-vector law checks.
inline CharacterVector generic_member(const SerreLattice& L, int salt) {
  std::vector<int> coords(L.rank());
  for (std::size_t k = 0; k < coords.size(); ++k)
    coords[k] = static_cast<int>((k + salt) % 3) - 1;
  return L.from_coordinates(coords);
}

// ---------------------------------------------------------------------------
// plectic suite: ambient group laws, wreath structure of the automorphism
// group of the level, and the embedding/type combinatorics.

inline void plectic_suite(const InstanceFile& file, const SuiteOptions& opt, Runner& r) {
  const GroupRef& G = file.group;
  const CMRef& inst = file.instance;
  const Subgroup& level = *file.level;
  const std::size_t cap = opt.resolved_cap();

  r.run("group-axioms",
        "composition is associative with a two-sided identity and inverses",
        [&]() -> std::optional<std::string> {
          const auto& Gr = *G;
          int n = Gr.order();
          int e = Gr.identity_index();
          for (int a = 0; a < n; ++a) {
            if (Gr.mul(e, a) != a || Gr.mul(a, e) != a)
              return "identity law fails at " + Gr.element(a).cycles();
            if (Gr.mul(a, Gr.inv(a)) != e || Gr.mul(Gr.inv(a), a) != e)
              return "inverse law fails at " + Gr.element(a).cycles();
          }
          auto assoc_bad = [&](int a, int b, int c) {
            return Gr.mul(Gr.mul(a, b), c) != Gr.mul(a, Gr.mul(b, c));
          };
          auto witness = [&](int a, int b, int c) {
            return "associativity fails at (" + Gr.element(a).cycles() + ", " +
                   Gr.element(b).cycles() + ", " + Gr.element(c).cycles() + ")";
          };
          if (n <= 64 && opt.sample == 0) {
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                  if (assoc_bad(a, b, c)) return witness(a, b, c);
          } else {
            std::mt19937_64 rng(opt.seed);
            std::uniform_int_distribution<int> pick(0, n - 1);
            int rounds = opt.sample > 0 ? opt.sample : 10000;
            for (int t = 0; t < rounds; ++t) {
              int a = pick(rng), b = pick(rng), c = pick(rng);
              if (assoc_bad(a, b, c)) return witness(a, b, c);
            }
          }
          return std::nullopt;
        });

  r.run("transfer-section-independence",
        "the transfer into an abelianized subgroup does not depend on the coset section",
        [&]() -> std::optional<std::string> {
          struct Chain {
            Subgroup big, small;
            const char* tag;
          };
          std::vector<Chain> chains;
          Subgroup whole = Subgroup::whole(G);
          chains.push_back({whole, level, "ambient over level"});
          chains.push_back({level, inst->sub(), "level over stabilizer"});
          chains.push_back({inst->sub(), Subgroup::trivial(G), "stabilizer over trivial"});
          for (const auto& chain : chains) {
            if (chain.big.order() / chain.small.order() > 4 || chain.small.order() > 8)
              continue;  // enumeration guard on the section count
            QuotRef ab = abelianization(chain.small);
            CosetTable Y = left_cosets(chain.big, chain.small);
            auto sections = all_sections(Y, cap);
            for (int h : chain.big.members()) {
              int base = transfer(chain.big, ab, h);
              for (const auto& t : sections)
                if (transfer(chain.big, ab, h, t) != base)
                  return std::string("value moved for h = ") + G->element(h).cycles() + " (" +
                         chain.tag + ")";
            }
          }
          return std::nullopt;
        });

  r.run("abelianization-kernel",
        "the abelianization projection is a homomorphism whose kernel is the "
        "commutator subgroup",
        [&]() -> std::optional<std::string> {
          QuotRef q = abelianization(Subgroup::whole(G));
          const auto& Q = *q->as_group();
          for (int a = 0; a < G->order(); ++a)
            for (int b = 0; b < G->order(); ++b)
              if (q->project(G->mul(a, b)) != Q.mul(q->project(a), q->project(b)))
                return "projection is not multiplicative at (" + G->element(a).cycles() + ", " +
                       G->element(b).cycles() + ")";
          Subgroup comm = commutator_subgroup(Subgroup::whole(G));
          for (int x = 0; x < G->order(); ++x)
            if ((q->project(x) == q->identity()) != comm.contains(x))
              return "kernel mismatch at " + G->element(x).cycles();
          return std::nullopt;
        });

  r.run("wreath-isomorphism",
        "wreath coordinates are a bijective homomorphism for every coset section, "
        "and changing the section conjugates the coordinate family",
        [&]() -> std::optional<std::string> {
          PlecticGroup P = PlecticGroup::materialize(G, level, cap);
          const CosetTable& X = P.cosets();
          std::size_t expected = factorial(static_cast<std::size_t>(X.count())) *
                                 ipow(static_cast<std::size_t>(level.order()),
                                      static_cast<std::size_t>(X.count()));
          if (static_cast<std::size_t>(P.order()) != expected)
            return "order " + std::to_string(P.order()) + " differs from " +
                   std::to_string(expected);
          auto sections = all_sections(X, cap);
          std::vector<std::vector<WreathDatum>> data(sections.size());
          for (std::size_t si = 0; si < sections.size(); ++si) {
            const auto& s = sections[si];
            std::set<std::pair<std::map<int, int>, std::map<int, int>>> seen;
            for (int i = 0; i < P.order(); ++i) {
              WreathDatum d = to_wreath(P.element(i), X, s);
              seen.insert({d.pi, d.h});
              if (!(from_wreath(G, level, X, s, d) == P.element(i)))
                return "coordinates do not invert at element " + std::to_string(i) +
                       " under section " + std::to_string(si);
              data[si].push_back(std::move(d));
            }
            if (seen.size() != static_cast<std::size_t>(P.order()))
              return "coordinates are not injective under section " + std::to_string(si);
            for (int i = 0; i < P.order(); ++i) {
              for (int j = 0; j < P.order(); ++j)
                if (!(to_wreath(compose(P.element(i), P.element(j)), X, s) ==
                      wreath_mul(*G, data[si][i], data[si][j])))
                  return "semidirect law fails at pair (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") under section " + std::to_string(si);
              if (!(to_wreath(inverse(P.element(i)), X, s) == wreath_inv(*G, data[si][i])))
                return "inverse law fails at element " + std::to_string(i) +
                       " under section " + std::to_string(si);
            }
          }
          for (std::size_t si = 0; si < sections.size(); ++si)
            for (std::size_t sj = 0; sj < sections.size(); ++sj) {
              std::map<int, int> t;
              for (int x : X.ids()) {
                t[x] = G->mul(G->inv(sections[si].rep(x)), sections[sj].rep(x));
                if (!level.contains(t[x]))
                  return "section offset escapes the level at coset " + std::to_string(x);
              }
              for (int i = 0; i < P.order(); ++i) {
                const WreathDatum& d = data[si][i];
                const WreathDatum& d2 = data[sj][i];
                if (d2.pi != d.pi)
                  return "permutation part moved between sections at element " +
                         std::to_string(i);
                for (int x : X.ids())
                  if (d2.h.at(x) !=
                      G->mul(G->mul(G->inv(t.at(d.pi.at(x))), d.h.at(x)), t.at(x)))
                    return "section change is not the expected conjugation at element " +
                           std::to_string(i) + ", coset " + std::to_string(x);
              }
            }
          return std::nullopt;
        });

  r.run("nested-level-coordinates",
        "including an automorphism into a finer level transforms wreath coordinates "
        "by the block formula",
        [&]() -> std::optional<std::string> {
          const Subgroup& H = inst->sub();
          PlecticGroup P = PlecticGroup::materialize(G, level, cap);
          const CosetTable& X = P.cosets();
          CosetTable Y(level, H);
          CosetTable Xp = left_cosets(G, H);
          for (const auto& s : all_sections(X, cap))
            for (const auto& t : all_sections(Y, cap)) {
              std::map<int, int> rep;
              for (int x : X.ids())
                for (int y : Y.ids()) {
                  int g = G->mul(s.rep(x), t.rep(y));
                  rep[Xp.id_of_element(g)] = g;
                }
              CosetSection sp(Xp, rep);
              for (int i = 0; i < P.order(); ++i) {
                WreathDatum d = to_wreath(P.element(i), X, s);
                WreathDatum fine = to_wreath(include_into_finer(P.element(i), H), Xp, sp);
                for (int x : X.ids())
                  for (int y : Y.ids()) {
                    int xp = Xp.id_of_element(G->mul(s.rep(x), t.rep(y)));
                    int hx = d.h.at(x);
                    int y2 = Y.act(hx, y);
                    if (fine.pi.at(xp) !=
                            Xp.id_of_element(G->mul(s.rep(d.pi.at(x)), t.rep(y2))) ||
                        fine.h.at(xp) != G->mul(G->mul(G->inv(t.rep(y2)), hx), t.rep(y)))
                      return "block formula fails at element " + std::to_string(i) +
                             ", cosets (" + std::to_string(x) + ", " + std::to_string(y) + ")";
                  }
              }
            }
          return std::nullopt;
        });

  r.run("conjugation-transport",
        "transporting along an inner twist of the level is an isomorphism given "
        "pointwise by the conjugation formula",
        [&]() -> std::optional<std::string> {
          PlecticGroup P = PlecticGroup::materialize(G, level, cap);
          const CosetTable& X = P.cosets();
          const CosetSection& s = P.section();
          for (int u = 0; u < G->order(); ++u) {
            Subgroup Hu = conjugate_subgroup(level, u);
            CosetTable Xu = left_cosets(G, Hu);
            std::map<int, int> rep;
            for (int x : X.ids()) {
              int g = G->mul(s.rep(x), G->inv(u));
              rep[Xu.id_of_element(g)] = g;
            }
            CosetSection su(Xu, rep);
            std::vector<PlecticElement> moved_all;
            for (int i = 0; i < P.order(); ++i) {
              PlecticElement moved = conjugate_transport(P.element(i), u);
              if (!moved.sub().same_set(Hu))
                return "transport landed over the wrong subgroup at element " +
                       std::to_string(i) + ", u = " + G->element(u).cycles();
              for (int g = 0; g < G->order(); ++g)
                if (moved.apply(g) != G->mul(P.element(i).apply(G->mul(g, u)), G->inv(u)))
                  return "pointwise formula fails at element " + std::to_string(i) +
                         ", u = " + G->element(u).cycles();
              WreathDatum d = to_wreath(P.element(i), X, s);
              WreathDatum du = to_wreath(moved, Xu, su);
              for (int x : X.ids()) {
                int xu = Xu.id_of_element(G->mul(x, G->inv(u)));
                if (du.pi.at(xu) != Xu.id_of_element(G->mul(d.pi.at(x), G->inv(u))) ||
                    du.h.at(xu) != G->conj(u, d.h.at(x)))
                  return "coordinate transport fails at element " + std::to_string(i) +
                         ", u = " + G->element(u).cycles();
              }
              for (int h : level.members())
                if (!(conjugate_transport(P.element(i), G->mul(u, h)) == moved))
                  return "transport depends on the representative at element " +
                         std::to_string(i) + ", u = " + G->element(u).cycles();
              moved_all.push_back(std::move(moved));
            }
            for (int i = 0; i < P.order(); ++i)
              for (int j = 0; j < P.order(); ++j)
                if (!(conjugate_transport(compose(P.element(i), P.element(j)), u) ==
                      compose(moved_all[i], moved_all[j])))
                  return "transport is not multiplicative at pair (" + std::to_string(i) +
                         ", " + std::to_string(j) + "), u = " + G->element(u).cycles();
          }
          return std::nullopt;
        });

  r.run("translation-embedding",
        "left translation embeds the ambient group with the expected index",
        [&]() -> std::optional<std::string> {
          PlecticGroup P = PlecticGroup::materialize(G, level, cap);
          std::set<std::vector<int>> images;
          for (int g = 0; g < G->order(); ++g) {
            PlecticElement Lg = left_translate(G, level, g);
            images.insert(Lg.mapping());
            try {
              P.index_of(Lg);
            } catch (const Error&) {
              return "translation by " + G->element(g).cycles() +
                     " is missing from the automorphism group";
            }
            for (int k = 0; k < G->order(); ++k)
              if (!(compose(Lg, left_translate(G, level, k)) ==
                    left_translate(G, level, G->mul(g, k))))
                return "translations do not compose at (" + G->element(g).cycles() + ", " +
                       G->element(k).cycles() + ")";
          }
          if (images.size() != static_cast<std::size_t>(G->order()))
            return "translation map is not injective";
          if (P.order() % G->order() != 0)
            return "image index is not integral";
          std::size_t expected = factorial(static_cast<std::size_t>(P.cosets().count())) *
                                 ipow(static_cast<std::size_t>(level.order()),
                                      static_cast<std::size_t>(P.cosets().count())) /
                                 static_cast<std::size_t>(G->order());
          if (static_cast<std::size_t>(P.order() / G->order()) != expected)
            return "image index " + std::to_string(P.order() / G->order()) +
                   " differs from " + std::to_string(expected);
          return std::nullopt;
        });

  r.run("conjugation-free-action",
        "conjugation moves every embedding",
        [&]() -> std::optional<std::string> {
          for (int rho : inst->sigmaK().ids())
            if (inst->conj_embedding(rho) == rho)
              return "embedding " + std::to_string(rho + 1) + " is fixed";
          return std::nullopt;
        });

  r.run("real-level-validates",
        "the real stabilizer and the declared level are totally real models",
        [&]() -> std::optional<std::string> {
          validate_totally_real(G, inst->real_subgroup(), inst->conj());
          validate_totally_real(G, level, inst->conj());
          return std::nullopt;
        });

  r.run("type-transport-closure",
        "every automorphism of the real level sends embedding types to embedding types",
        [&]() -> std::optional<std::string> {
          auto autos = materialized_elements(G, inst->real_subgroup(), cap);
          auto types = enumerate_cm_types(inst);
          for (std::size_t i = 0; i < autos.size(); ++i)
            for (std::size_t p = 0; p < types.size(); ++p) {
              try {
                cm_type_image(autos[i], types[p]);
              } catch (const Error& e) {
                return "image of type " + std::to_string(p) + " under automorphism " +
                       std::to_string(i) + " is not a type: " + e.what();
              }
            }
          return std::nullopt;
        });

  r.run("declared-type-partition",
        "the declared embedding type picks exactly one member of each conjugate pair",
        [&]() -> std::optional<std::string> {
          if (!file.declared_type) throw Skip{"no declared embedding type"};
          std::set<int> members(file.declared_type->begin(), file.declared_type->end());
          for (const auto& [rho, crho] : inst->fibers()) {
            int hits = static_cast<int>(members.count(rho)) +
                       static_cast<int>(members.count(crho));
            if (hits != 1)
              return "conjugate pair (" + std::to_string(rho + 1) + ", " +
                     std::to_string(crho + 1) + ") carries " + std::to_string(hits) +
                     " members";
          }
          if (members.size() != inst->fibers().size())
            return "type size " + std::to_string(members.size()) + " differs from the place count";
          return std::nullopt;
        });
}

// ---------------------------------------------------------------------------
// halftransfer suite: the three half-transfer constructions and their
// comparison and transport diagrams.

inline void halftransfer_suite(const InstanceFile& file, const SuiteOptions& opt, Runner& r) {
  const GroupRef& G = file.group;
  const CMRef& inst = file.instance;
  const std::size_t cap = opt.resolved_cap();

  r.run("section-independence",
        "the automorphism half-transfer is independent of the conjugation-compatible section",
        [&]() -> std::optional<std::string> {
          auto autos = materialized_elements(G, inst->real_subgroup(), cap);
          auto sections = enumerate_conj_sections(inst, cap);
          auto types = enumerate_cm_types(inst);
          for (std::size_t i = 0; i < autos.size(); ++i)
            for (std::size_t p = 0; p < types.size(); ++p) {
              int base = plectic_half_transfer(inst, types[p], autos[i], sections[0]);
              for (std::size_t s = 1; s < sections.size(); ++s)
                if (plectic_half_transfer(inst, types[p], autos[i], sections[s]) != base)
                  return "value moved at automorphism " + std::to_string(i) + ", type " +
                         std::to_string(p) + ", section " + std::to_string(s);
            }
          return std::nullopt;
        });

  r.run("wreath-comparison",
        "the wreath-coordinate formula agrees with the direct evaluation for every "
        "automorphism, type, and real-place section",
        [&]() -> std::optional<std::string> {
          auto autos = materialized_elements(G, inst->real_subgroup(), cap);
          auto w0 = enumerate_conj_sections(inst, cap)[0];
          auto types = enumerate_cm_types(inst);
          auto sections = all_sections(inst->sigmaF(), cap);
          for (std::size_t si = 0; si < sections.size(); ++si) {
            const auto& s = sections[si];
            for (std::size_t i = 0; i < autos.size(); ++i) {
              WreathDatum d = to_wreath(autos[i], inst->sigmaF(), s);
              for (std::size_t p = 0; p < types.size(); ++p)
                if (nekovar_half_transfer(inst, cm_type_bits(inst, types[p], s), d, s) !=
                    plectic_half_transfer(inst, types[p], autos[i], w0))
                  return "formulas disagree at automorphism " + std::to_string(i) + ", type " +
                         std::to_string(p) + ", section " + std::to_string(si);
            }
          }
          return std::nullopt;
        });

  r.run("classical-section-independence",
        "the classical half-transfer on group elements is independent of the "
        "conjugation-compatible section",
        [&]() -> std::optional<std::string> {
          auto sections = enumerate_conj_sections(inst, cap);
          auto types = enumerate_cm_types(inst);
          for (int g = 0; g < G->order(); ++g)
            for (std::size_t p = 0; p < types.size(); ++p) {
              int base = tate_half_transfer(inst, types[p], g, sections[0]);
              for (std::size_t s = 1; s < sections.size(); ++s)
                if (tate_half_transfer(inst, types[p], g, sections[s]) != base)
                  return "value moved at g = " + G->element(g).cycles() + ", type " +
                         std::to_string(p) + ", section " + std::to_string(s);
            }
          return std::nullopt;
        });

  r.run("translation-restriction",
        "restricted to left translations the automorphism half-transfer recovers the "
        "classical one",
        [&]() -> std::optional<std::string> {
          auto sections = enumerate_conj_sections(inst, cap);
          auto types = enumerate_cm_types(inst);
          for (int g = 0; g < G->order(); ++g) {
            PlecticElement Lg = left_translate(G, inst->real_subgroup(), g);
            for (std::size_t p = 0; p < types.size(); ++p)
              for (std::size_t s = 0; s < sections.size(); ++s)
                if (plectic_half_transfer(inst, types[p], Lg, sections[s]) !=
                    tate_half_transfer(inst, types[p], g, sections[s]))
                  return "values disagree at g = " + G->element(g).cycles() + ", type " +
                         std::to_string(p) + ", section " + std::to_string(s);
          }
          return std::nullopt;
        });

  r.run("stabilizer-refinement",
        "the transfer map intertwines the half-transfers of a nested pair of stabilizers",
        [&]() -> std::optional<std::string> {
          CMRef coarse, fine;
          if (file.mid) {
            coarse = CMInstance::make(G, *file.mid, inst->conj());
            fine = inst;
          } else {
            bool central = true;
            for (int g = 0; g < G->order() && central; ++g)
              if (G->conj(g, inst->conj()) != inst->conj()) central = false;
            if (!central)
              throw Skip{
                  "no intermediate stabilizer is declared and the conjugation is not "
                  "central, so no finer model exists"};
            coarse = inst;
            fine = CMInstance::make(G, Subgroup::trivial(G), inst->conj());
          }
          auto autos = materialized_elements(G, coarse->real_subgroup(), cap);
          auto wcs = enumerate_conj_sections(coarse, cap);
          auto wfs = enumerate_conj_sections(fine, cap);
          auto types = enumerate_cm_types(coarse);
          for (std::size_t i = 0; i < autos.size(); ++i)
            for (std::size_t p = 0; p < types.size(); ++p) {
              CMType lifted = induced_cm_type(types[p], fine);
              PlecticElement included = include_into_finer(autos[i], fine->real_subgroup());
              for (const auto& w : wcs) {
                int coarse_val = plectic_half_transfer(coarse, types[p], autos[i], w);
                int pushed = transfer(coarse->sub(), fine->h_ab(),
                                      coarse->h_ab()->class_rep(coarse_val));
                for (const auto& wf : wfs)
                  if (pushed != plectic_half_transfer(fine, lifted, included, wf))
                    return "diagram fails at automorphism " + std::to_string(i) + ", type " +
                           std::to_string(p);
              }
            }
          return std::nullopt;
        });

  r.run("conjugation-transport",
        "conjugating the stabilizer transports half-transfer values by the inner twist",
        [&]() -> std::optional<std::string> {
          auto autos = materialized_elements(G, inst->real_subgroup(), cap);
          auto w = enumerate_conj_sections(inst, cap)[0];
          auto types = enumerate_cm_types(inst);
          for (int u = 0; u < G->order(); ++u)
            for (std::size_t p = 0; p < types.size(); ++p) {
              CMType moved_type = transported_cm_type(types[p], u);
              const CMRef& moved = moved_type.instance();
              auto wu = enumerate_conj_sections(moved, cap)[0];
              for (std::size_t i = 0; i < autos.size(); ++i) {
                int val = plectic_half_transfer(inst, types[p], autos[i], w);
                int lhs = moved->h_ab()->project(G->conj(u, inst->h_ab()->class_rep(val)));
                int rhs = plectic_half_transfer(moved, moved_type,
                                                conjugate_transport(autos[i], u), wu);
                if (lhs != rhs)
                  return "diagram fails at u = " + G->element(u).cycles() + ", type " +
                         std::to_string(p) + ", automorphism " + std::to_string(i);
              }
            }
          return std::nullopt;
        });
}

// ---------------------------------------------------------------------------
// lattice suite: the character lattice, its two actions, and the embedding
// permutation equivariance.

inline void lattice_suite(const InstanceFile& file, const SuiteOptions& opt, Runner& r) {
  const GroupRef& G = file.group;
  const CMRef& inst = file.instance;
  const std::size_t cap = opt.resolved_cap();

  bool central = true;
  for (int g = 0; g < G->order() && central; ++g)
    if (G->conj(g, inst->conj()) != inst->conj()) central = false;

  auto ctx_cache = std::make_shared<Lazy<CharCtx>>([&file, central]() -> CharCtx {
    if (central)
      return CharContext::make(file.group, *file.level, file.instance->conj());
    if (file.realize_galois) return galois_realized_datum(file.instance)->context();
    throw Skip{
        "the conjugation is not central at the ambient level and the instance does "
        "not request a realization"};
  });

  r.run("rank-formula",
        "the lattice rank is the place count times (half the group order plus one), "
        "and coordinates invert exactly",
        [&]() -> std::optional<std::string> {
          const CharCtx& ctx = ctx_cache->get();
          SerreLattice L(ctx);
          int expected = ctx->place_count() * (ctx->gamma()->order() / 2 + 1);
          if (L.rank() != expected)
            return "rank " + std::to_string(L.rank()) + " differs from " +
                   std::to_string(expected);
          if (static_cast<int>(L.basis().size()) != L.rank())
            return "basis size differs from the rank";
          for (int k = 0; k < L.rank(); ++k) {
            std::vector<int> coords = L.coordinates_of(L.basis()[k]);
            for (int j = 0; j < L.rank(); ++j)
              if (coords[j] != (j == k ? 1 : 0))
                return "basis member " + std::to_string(k) + " has skew coordinates";
          }
          CharacterVector probe = generic_member(L, 1);
          if (!(L.from_coordinates(L.coordinates_of(probe)) == probe))
            return "coordinates do not invert on a generic member";
          return std::nullopt;
        });

  r.run("action-stability",
        "both actions stabilize the lattice, preserve degrees, and move weights "
        "along the place permutation",
        [&]() -> std::optional<std::string> {
          const CharCtx& ctx = ctx_cache->get();
          SerreLattice L(ctx);
          auto autos = materialized_elements(ctx->gamma(), ctx->gammaF(), cap);
          for (std::size_t a = 0; a < autos.size(); ++a) {
            const auto& g = autos[a];
            for (int k = 0; k < L.rank(); ++k) {
              const CharacterVector& v = L.basis()[k];
              CharacterVector image = algebraic_action(g, v);
              if (!L.contains(image))
                return "level action leaves the lattice at automorphism " +
                       std::to_string(a) + ", basis " + std::to_string(k);
              if (image.degree() != v.degree())
                return "level action changes the degree at automorphism " +
                       std::to_string(a) + ", basis " + std::to_string(k);
              auto w0 = L.weights(v);
              auto w1 = L.weights(image);
              if (!w0 || !w1)
                return "weights are unavailable at automorphism " + std::to_string(a) +
                       ", basis " + std::to_string(k);
              for (int j : ctx->places().ids()) {
                int jg = ctx->places().id_of_element(inverse(g).apply(j));
                if ((*w1)[ctx->places().position(jg)] != (*w0)[ctx->places().position(j)])
                  return "weight transport fails at automorphism " + std::to_string(a) +
                         ", basis " + std::to_string(k);
              }
            }
          }
          for (int tau = 0; tau < ctx->gamma()->order(); ++tau)
            for (int k = 0; k < L.rank(); ++k) {
              CharacterVector image = arithmetic_action(tau, L.basis()[k]);
              if (!L.contains(image))
                return "group action leaves the lattice at tau = " + std::to_string(tau) +
                       ", basis " + std::to_string(k);
              if (image.degree() != L.basis()[k].degree())
                return "group action changes the degree at tau = " + std::to_string(tau) +
                       ", basis " + std::to_string(k);
            }
          return std::nullopt;
        });

  r.run("action-laws",
        "the group action is a linear left action and the level action a linear "
        "right action",
        [&]() -> std::optional<std::string> {
          const CharCtx& ctx = ctx_cache->get();
          SerreLattice L(ctx);
          const auto& Q = *ctx->gamma();
          CharacterVector chi = generic_member(L, 1);
          CharacterVector psi = generic_member(L, 2);
          if (!(arithmetic_action(Q.identity_index(), chi) == chi))
            return "group action is not unital";
          for (int t1 = 0; t1 < Q.order(); ++t1) {
            for (int t2 = 0; t2 < Q.order(); ++t2)
              if (!(arithmetic_action(Q.mul(t1, t2), chi) ==
                    arithmetic_action(t1, arithmetic_action(t2, chi))))
                return "group action does not compose at (" + std::to_string(t1) + ", " +
                       std::to_string(t2) + ")";
            if (!(arithmetic_action(t1, chi + psi) ==
                  arithmetic_action(t1, chi) + arithmetic_action(t1, psi)))
              return "group action is not additive at tau = " + std::to_string(t1);
          }
          auto autos = materialized_elements(ctx->gamma(), ctx->gammaF(), cap);
          if (!(algebraic_action(plectic_identity(ctx->gamma(), ctx->gammaF()), chi) == chi))
            return "level action is not unital";
          for (std::size_t a = 0; a < autos.size(); ++a) {
            for (std::size_t b = 0; b < autos.size(); ++b)
              if (!(algebraic_action(compose(autos[a], autos[b]), chi) ==
                    algebraic_action(autos[b], algebraic_action(autos[a], chi))))
                return "level action does not compose at pair (" + std::to_string(a) + ", " +
                       std::to_string(b) + ")";
            if (!(algebraic_action(autos[a], chi + psi) ==
                  algebraic_action(autos[a], chi) + algebraic_action(autos[a], psi)))
              return "level action is not additive at automorphism " + std::to_string(a);
          }
          return std::nullopt;
        });

  r.run("type-pullback-transport",
        "the level action sends type pullbacks to type pullbacks along the "
        "predicted translation",
        [&]() -> std::optional<std::string> {
          const CharCtx& ctx = ctx_cache->get();
          const auto& Q = *ctx->gamma();
          auto autos = materialized_elements(ctx->gamma(), ctx->gammaF(), cap);
          auto types = enumerate_cm_types(ctx->level_instance());
          for (std::size_t a = 0; a < autos.size(); ++a) {
            const auto& g = autos[a];
            for (int j0 : ctx->places().ids())
              for (std::size_t p = 0; p < types.size(); ++p) {
                CharacterVector image =
                    algebraic_action(g, cm_pullback_character(ctx, j0, types[p]));
                int jp = ctx->places().id_of_element(inverse(g).apply(j0));
                int y = Q.mul(g.apply(jp), Q.inv(jp));
                std::set<int> moved;
                for (int f : types[p].members()) moved.insert(Q.mul(f, y));
                CMType predicted = CMType::from_members(ctx->level_instance(), std::move(moved));
                if (!(image == cm_pullback_character(ctx, jp, predicted)))
                  return "image is not the predicted pullback at automorphism " +
                         std::to_string(a) + ", place " + std::to_string(j0) + ", type " +
                         std::to_string(p);
                auto cls = classify_cm_pullback(image);
                if (!cls || cls->first != jp || !(cls->second == predicted))
                  return "classification disagrees at automorphism " + std::to_string(a) +
                         ", place " + std::to_string(j0) + ", type " + std::to_string(p);
              }
          }
          return std::nullopt;
        });

  r.run("embedding-equivariance",
        "embedding permutations at places in one orbit differ by the coset translation",
        [&]() -> std::optional<std::string> {
          const CharCtx& ctx = ctx_cache->get();
          const auto& Q = *ctx->gamma();
          auto autos = materialized_elements(ctx->gamma(), ctx->gammaF(), cap);
          for (std::size_t a = 0; a < autos.size(); ++a) {
            const auto& g = autos[a];
            for (int j : ctx->places().ids()) {
              auto pj = embedding_permutation(ctx, g, j);
              for (int tau = 0; tau < Q.order(); ++tau) {
                auto pjp = embedding_permutation(ctx, g,
                                                 ctx->places().id_of_element(Q.mul(tau, j)));
                for (int s = 0; s < Q.order(); ++s)
                  if (pjp.apply(s) != Q.mul(pj.apply(Q.mul(s, tau)), Q.inv(tau)))
                    return "equivariance fails at automorphism " + std::to_string(a) +
                           ", place " + std::to_string(j) + ", tau = " + std::to_string(tau);
              }
            }
          }
          return std::nullopt;
        });
}

}  // namespace suitedetail
}  // namespace plectic

#include "plectic/suite_taniyama.hpp"

namespace plectic {

inline std::vector<std::string> suite_names() {
  return {"plectic", "halftransfer", "lattice", "taniyama", "extension"};
}

inline SuiteReport run_suite(const InstanceFile& file, const std::string& suite,
                             const SuiteOptions& opt = {}) {
  SuiteReport rep;
  rep.instance = file.name;
  rep.suite = suite;
  auto dispatch = [&](const std::string& name) {
    suitedetail::Runner r(rep, name);
    if (name == "plectic")
      suitedetail::plectic_suite(file, opt, r);
    else if (name == "halftransfer")
      suitedetail::halftransfer_suite(file, opt, r);
    else if (name == "lattice")
      suitedetail::lattice_suite(file, opt, r);
    else if (name == "taniyama")
      suitedetail::taniyama_suite(file, opt, r);
    else if (name == "extension")
      suitedetail::extension_suite(file, opt, r);
    else
      fail("unknown suite: " + name);
  };
  if (suite == "all") {
    for (const auto& name : suite_names()) dispatch(name);
  } else {
    dispatch(suite);
  }
  return rep;
}

inline std::string render_text(const SuiteReport& rep) {
  std::ostringstream out;
  out << "instance: " << rep.instance << "\n";
  out << "suite: " << rep.suite << "\n";
  for (const auto& c : rep.checks) {
    const char* tag = c.status == "pass" ? "pass" : c.status == "fail" ? "FAIL" : "skip";
    out << "  [" << tag << "] " << c.name << " — " << c.law << "\n";
    if (!c.detail.empty()) out << "         " << c.detail << "\n";
  }
  out << "summary: " << rep.count("pass") << " passed, " << rep.count("fail") << " failed, "
      << rep.count("skipped") << " skipped\n";
  return out.str();
}

namespace suitedetail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

}  // namespace suitedetail

inline std::string render_json(const SuiteReport& rep) {
  using suitedetail::json_escape;
  std::ostringstream out;
  out << "{\n";
  out << "  \"instance\": \"" << json_escape(rep.instance) << "\",\n";
  out << "  \"suite\": \"" << json_escape(rep.suite) << "\",\n";
  out << "  \"checks\": [\n";
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& c = rep.checks[i];
    out << "    {\"name\": \"" << json_escape(c.name) << "\", \"law\": \"" << json_escape(c.law)
        << "\", \"status\": \"" << json_escape(c.status) << "\", \"detail\": \""
        << json_escape(c.detail) << "\"}";
    out << (i + 1 < rep.checks.size() ? ",\n" : "\n");
  }
  out << "  ],\n";
  out << "  \"summary\": {\"passed\": " << rep.count("pass")
      << ", \"failed\": " << rep.count("fail") << ", \"skipped\": " << rep.count("skipped")
      << "}\n";
  out << "}\n";
  return out.str();
}

}  // namespace plectic
