#include "plectic/instance_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>

#include "helpers.hpp"

using namespace plectic;

namespace {

template <typename Fn>
std::string error_message(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

template <typename Fn>
void expect_error(Fn&& fn, const std::string& needle) {
  std::string msg = error_message(fn);
  ASSERT_FALSE(msg.empty()) << "expected an error mentioning: " << needle;
  EXPECT_NE(msg.find(needle), std::string::npos) << "got: " << msg;
}

}  // namespace

TEST(Catalog, EveryEntryBuildsWithTheExpectedShape) {
  auto names = catalog_names();
  ASSERT_EQ(names.size(), 5u);

  InstanceFile z5 = builtin_instance("zeta5");
  EXPECT_EQ(z5.group->order(), 4);
  EXPECT_EQ(z5.instance->sub().order(), 1);
  EXPECT_TRUE(z5.level->same_set(Subgroup::whole(z5.group)));
  EXPECT_TRUE(z5.realize_galois);
  EXPECT_FALSE(z5.mid.has_value());
  ASSERT_TRUE(z5.declared_type.has_value());
  EXPECT_EQ(z5.declared_type->size(), 2u);  // four embeddings, two conjugate pairs

  InstanceFile z8 = builtin_instance("zeta8");
  EXPECT_EQ(z8.group->order(), 4);
  EXPECT_EQ(z8.instance->sub().order(), 2);
  EXPECT_EQ(z8.instance->sigmaK().count(), 2);
  EXPECT_EQ(z8.declared_type->size(), 1u);

  InstanceFile z15 = builtin_instance("zeta15");
  EXPECT_EQ(z15.group->order(), 8);
  EXPECT_EQ(z15.instance->sub().order(), 2);
  EXPECT_EQ(z15.level->order(), 4);
  EXPECT_EQ(z15.declared_type->size(), 2u);

  InstanceFile nested = builtin_instance("zeta15-nested");
  EXPECT_EQ(nested.group->order(), 8);
  EXPECT_EQ(nested.instance->sub().order(), 1);
  ASSERT_TRUE(nested.mid.has_value());
  EXPECT_EQ(nested.mid->order(), 2);
  EXPECT_TRUE(nested.instance->sub().is_subgroup_of(*nested.mid));
  EXPECT_TRUE(nested.mid->is_subgroup_of(*nested.level));
  EXPECT_EQ(nested.declared_type->size(), 4u);

  InstanceFile d4 = builtin_instance("dihedral");
  EXPECT_EQ(d4.group->order(), 8);
  EXPECT_EQ(d4.instance->sub().order(), 4);
  EXPECT_EQ(d4.instance->sigmaK().count(), 2);
  EXPECT_EQ(d4.declared_type->size(), 1u);

  expect_error([] { builtin_instance("nonesuch"); }, "unknown catalog instance");
}

TEST(Catalog, ResidueModelsMatchTheIndependentConstruction) {
  // The catalog's residue permutations must agree with the test helpers,
  // which build them from scratch.
  for (int n : {5, 8, 15}) {
    for (int a : testutil::units_mod(n)) {
      EXPECT_EQ(ioutil::residue_perm(n, a), testutil::mult_perm(n, a)) << n << " " << a;
    }
  }
  InstanceFile z8 = builtin_instance("zeta8");
  GroupRef oracle = testutil::units_group(8, {3, 5});
  EXPECT_EQ(z8.group->order(), oracle->order());
  for (int i = 0; i < oracle->order(); ++i)
    EXPECT_GE(z8.group->find_index(oracle->element(i)), 0);
}

TEST(Serialization, RoundTripsAreByteIdentical) {
  for (const std::string& name : catalog_names()) {
    InstanceFile built = builtin_instance(name);
    std::string text = serialize_instance(built);
    InstanceFile parsed = parse_instance_text(text, name);
    EXPECT_EQ(serialize_instance(parsed), text) << name;

    // The parse must reproduce the same model, not just the same bytes.  The
    // parsed group is a distinct object, but the generator list is echoed
    // verbatim, so element numbering coincides and member indices compare.
    EXPECT_EQ(parsed.group->order(), built.group->order()) << name;
    EXPECT_EQ(parsed.instance->sub().members(), built.instance->sub().members()) << name;
    EXPECT_EQ(parsed.instance->conj(), built.instance->conj()) << name;
    EXPECT_EQ(parsed.level->members(), built.level->members()) << name;
    EXPECT_EQ(parsed.realize_galois, built.realize_galois) << name;
    EXPECT_EQ(parsed.mid.has_value(), built.mid.has_value()) << name;
    if (built.mid) EXPECT_EQ(parsed.mid->members(), built.mid->members()) << name;
    ASSERT_EQ(parsed.declared_type.has_value(), built.declared_type.has_value()) << name;
    if (built.declared_type) {
      std::vector<int> a = *parsed.declared_type, b = *built.declared_type;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b) << name;
    }
  }
}

TEST(Serialization, EmitsTheDocumentedLayout) {
  InstanceFile z8 = builtin_instance("zeta8");
  std::string text = serialize_instance(z8);
  EXPECT_NE(text.find("[group]\ndegree = 4\n"), std::string::npos);
  EXPECT_NE(text.find("generators = (1 2)(3 4) ; (1 3)(2 4)\n"), std::string::npos);
  EXPECT_NE(text.find("[cm]\n"), std::string::npos);
  EXPECT_NE(text.find("c.perm = "), std::string::npos);
  EXPECT_NE(text.find("[cmtype]\ncmtype.cosets = 1\n"), std::string::npos);
  EXPECT_NE(text.find("[weil]\nrealize = galois\n"), std::string::npos);
  EXPECT_EQ(text.find("[nested]"), std::string::npos);
  EXPECT_EQ(text.back(), '\n');

  std::string nested = serialize_instance(builtin_instance("zeta15-nested"));
  EXPECT_NE(nested.find("[nested]\nmid.generators = "), std::string::npos);
}

TEST(Parsing, AcceptsCommentsBlanksAndDefaults) {
  std::string text =
      "# residue model, conductor eight\n"
      "[group]\n"
      "degree = 4   # sorted units\n"
      "generators = (1 3)(2 4) ; (1 4)(2 3)\n"
      "\n"
      "[cm]\n"
      "H.generators = (1 4)(2 3)\n"
      "c.perm = (1 2)(3 4)\n";
  InstanceFile inst = parse_instance_text(text, "probe");
  EXPECT_EQ(inst.name, "probe");
  EXPECT_EQ(inst.group->order(), 4);
  EXPECT_EQ(inst.instance->sub().order(), 2);
  // No F declared: the level defaults to the real stabilizer H ∪ cH.
  EXPECT_TRUE(inst.level->same_set(inst.instance->real_subgroup()));
  EXPECT_FALSE(inst.realize_galois);
  EXPECT_FALSE(inst.declared_type.has_value());
  EXPECT_FALSE(inst.mid.has_value());
}

TEST(Parsing, TrivialStabilizerSpelledAsEmptyCycles) {
  std::string text =
      "[group]\n"
      "degree = 4\n"
      "generators = (1 2 3 4)\n"
      "[cm]\n"
      "H.generators = ()\n"
      "c.perm = (1 3)(2 4)\n";
  InstanceFile inst = parse_instance_text(text, "t");
  EXPECT_EQ(inst.instance->sub().order(), 1);
}

TEST(Parsing, SyntaxErrorsCarryLineNumbers) {
  expect_error([] { parse_instance_text("", "x"); }, "line 1: empty instance file");
  expect_error([] { parse_instance_text("# only a comment\n\n", "x"); },
               "line 1: empty instance file");
  expect_error([] { parse_instance_text("[group\ndegree = 4\n", "x"); },
               "line 1: unterminated section header");
  expect_error([] { parse_instance_text("[orbit]\n", "x"); }, "line 1: unknown section [orbit]");
  expect_error([] { parse_instance_text("degree = 4\n", "x"); }, "line 1: key outside any section");
  expect_error([] { parse_instance_text("[group]\ndegree 4\n", "x"); },
               "line 2: expected key = value");
  expect_error([] { parse_instance_text("[group]\nrank = 4\n", "x"); },
               "line 2: unknown key 'rank' in [group]");
  expect_error([] { parse_instance_text("[group]\ndegree = 4\ndegree = 4\n", "x"); },
               "line 3: duplicate key 'degree'");
  expect_error([] { parse_instance_text("[group]\ndegree = four\n", "x"); },
               "line 2: degree must be an integer");
  expect_error([] { parse_instance_text("[group]\ndegree = -2\n", "x"); },
               "line 2: degree must be positive");
  expect_error([] { parse_instance_text("[group]\ndegree =\n", "x"); },
               "line 2: empty value for 'degree'");
  expect_error([] { parse_instance_text("[group]\n[group]\n", "x"); },
               "line 2: duplicate section [group]");
  expect_error(
      [] { parse_instance_text("[group]\ndegree = 4\ngenerators = (1 5)\n", "x"); },
      "line 3: cycle point out of range");
  expect_error(
      [] {
        parse_instance_text(
            "[group]\ndegree = 4\ngenerators = (1 2 3 4)\n[cm]\nH.generators = (1 3)\n", "x");
      },
      "line 5: permutation is not a group element");
}

TEST(Parsing, MissingPiecesAreNamed) {
  expect_error([] { parse_instance_text("[cm]\nc.perm = (1 2)\n", "x"); },
               "missing section [group]");
  expect_error([] { parse_instance_text("[group]\ngenerators = (1 2)\n", "x"); },
               "missing key 'degree'");
  expect_error(
      [] { parse_instance_text("[group]\ndegree = 4\ngenerators = (1 2 3 4)\n", "x"); },
      "missing section [cm]");
}

TEST(Parsing, SemanticValidationErrorsPropagate) {
  // c inside H: the model invariant is violated and named.
  expect_error(
      [] {
        parse_instance_text(
            "[group]\ndegree = 4\ngenerators = (1 2 3 4)\n"
            "[cm]\nH.generators = (1 3)(2 4)\nc.perm = (1 3)(2 4)\n",
            "x");
      },
      "conjugation");
  // c of order four.
  expect_error(
      [] {
        parse_instance_text(
            "[group]\ndegree = 4\ngenerators = (1 2 3 4)\n"
            "[cm]\nH.generators = ()\nc.perm = (1 2 3 4)\n",
            "x");
      },
      "order");
  // Declared level skips the real stabilizer (the trivial level cannot
  // contain H ∪ cH).
  expect_error(
      [] {
        parse_instance_text(
            "[group]\ndegree = 8\ngenerators = (1 2 3 4 5 6 7 8)\n"
            "[cm]\nH.generators = ()\nc.perm = (1 5)(2 6)(3 7)(4 8)\n"
            "F.generators = ()\n",
            "x");
      },
      "real stabilizer must lie inside the declared level");
}

TEST(Parsing, TypeRepresentativesMustBeMinimalCosetMembers) {
  std::string base =
      "[group]\ndegree = 4\ngenerators = (1 3)(2 4) ; (1 4)(2 3)\n"
      "[cm]\nH.generators = (1 4)(2 3)\nc.perm = (1 2)(3 4)\n";
  // Embedding ids for this model are the minimal members of the H-cosets.
  InstanceFile ok = parse_instance_text(base + "[cmtype]\ncmtype.cosets = 1\n", "x");
  ASSERT_TRUE(ok.declared_type.has_value());
  EXPECT_EQ(*ok.declared_type, std::vector<int>{0});

  expect_error([&] { parse_instance_text(base + "[cmtype]\ncmtype.cosets = 9\n", "x"); },
               "coset representative out of range");
  expect_error([&] { parse_instance_text(base + "[cmtype]\ncmtype.cosets = zero\n", "x"); },
               "must be integers");
  // 4 names an element that is not the minimal member of its coset.
  expect_error([&] { parse_instance_text(base + "[cmtype]\ncmtype.cosets = 4\n", "x"); },
               "not a minimal embedding representative");

  // A declared type that is NOT one-per-pair parses; the partition law is a
  // suite check, not a parse check.
  InstanceFile skew = parse_instance_text(
      "[group]\ndegree = 4\ngenerators = (1 2 3 4)\n"
      "[cm]\nH.generators = ()\nc.perm = (1 3)(2 4)\n"
      "[cmtype]\ncmtype.cosets = 1 3\n",
      "x");
  ASSERT_TRUE(skew.declared_type.has_value());
  EXPECT_EQ(skew.declared_type->size(), 2u);
}

TEST(Parsing, RealizationAndNestingAreValidatedEagerly) {
  std::string z8 =
      "[group]\ndegree = 4\ngenerators = (1 3)(2 4) ; (1 4)(2 3)\n"
      "[cm]\nH.generators = (1 4)(2 3)\nc.perm = (1 2)(3 4)\n";
  EXPECT_TRUE(parse_instance_text(z8 + "[weil]\nrealize = galois\n", "x").realize_galois);
  expect_error([&] { parse_instance_text(z8 + "[weil]\nrealize = adelic\n", "x"); },
               "unknown realization 'adelic'");

  // Nested block: mid must sit between H and the level and avoid c.
  InstanceFile nested = builtin_instance("zeta15-nested");
  std::string text = serialize_instance(nested);
  InstanceFile back = parse_instance_text(text, "zeta15-nested");
  ASSERT_TRUE(back.mid.has_value());

  // mid containing c is rejected.
  std::string bad = text;
  std::size_t pos = bad.find("mid.generators = ");
  ASSERT_NE(pos, std::string::npos);
  std::size_t eol = bad.find('\n', pos);
  bad = bad.substr(0, pos) + "mid.generators = " +
        nested.group->element(nested.instance->conj()).cycles() + bad.substr(eol);
  expect_error([&] { parse_instance_text(bad, "x"); },
               "conjugation must stay outside the nested stabilizer");
}

TEST(Parsing, FileRoundTripThroughDisk) {
  InstanceFile z15 = builtin_instance("zeta15");
  std::string text = serialize_instance(z15);
  std::string path = "io_probe_zeta15.model";
  {
    std::ofstream out(path);
    out << text;
  }
  InstanceFile back = parse_instance(path);
  EXPECT_EQ(back.name, "io_probe_zeta15");
  EXPECT_EQ(serialize_instance(back), text);
  std::remove(path.c_str());
  expect_error([] { parse_instance("definitely_missing.model"); }, "cannot read instance file");
}

TEST(Helpers, MinimalGeneratorListsAreMinimalAndSufficient) {
  InstanceFile z15 = builtin_instance("zeta15");
  const GroupRef& G = z15.group;
  // For every subgroup that shows up in files, the greedy list regenerates it.
  for (const Subgroup& s :
       {z15.instance->sub(), *z15.level, Subgroup::whole(G), Subgroup::trivial(G)}) {
    auto gens = ioutil::minimal_generator_indices(s);
    EXPECT_TRUE(Subgroup::from_generator_indices(G, gens).same_set(s));
    // Dropping any generator must lose the subgroup (minimality).
    for (std::size_t k = 0; k < gens.size(); ++k) {
      std::vector<int> rest;
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (j != k) rest.push_back(gens[j]);
      EXPECT_FALSE(Subgroup::from_generator_indices(G, rest).same_set(s));
    }
  }
  EXPECT_EQ(ioutil::subgroup_text(Subgroup::trivial(G)), "()");
}
