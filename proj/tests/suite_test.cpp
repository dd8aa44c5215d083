#include "plectic/suite.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

namespace {

using namespace plectic;

const CheckResult* find_check(const SuiteReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string failures(const SuiteReport& rep) {
  std::string out;
  for (const auto& c : rep.checks)
    if (c.status == "fail") out += c.name + ": " + c.detail + "\n";
  return out;
}

TEST(SuiteTest, CatalogInstancesPassEverySuite) {
  for (const auto& name : catalog_names()) {
    InstanceFile file = builtin_instance(name);
    SuiteReport rep = run_suite(file, "all");
    EXPECT_TRUE(rep.all_passed()) << name << "\n" << failures(rep);
    EXPECT_EQ(rep.checks.size(), 37u) << name;
    // names are unique and carry their suite prefix
    std::set<std::string> seen;
    for (const auto& c : rep.checks) {
      EXPECT_TRUE(seen.insert(c.name).second) << c.name;
      EXPECT_NE(c.name.find('/'), std::string::npos) << c.name;
    }
  }
}

TEST(SuiteTest, ExpectedApplicabilityPerInstance) {
  auto status = [](const std::string& inst, const std::string& check) {
    SuiteReport rep = run_suite(builtin_instance(inst), check.substr(0, check.find('/')));
    const CheckResult* c = find_check(rep, check);
    return c ? c->status : std::string("missing");
  };

  // full-level models collapse to the classical product; proper levels skip it
  EXPECT_EQ(status("zeta5", "taniyama/field-level-collapse"), "pass");
  EXPECT_EQ(status("zeta8", "taniyama/field-level-collapse"), "pass");
  EXPECT_EQ(status("dihedral", "taniyama/field-level-collapse"), "pass");
  EXPECT_EQ(status("zeta15", "taniyama/field-level-collapse"), "skipped");
  EXPECT_EQ(status("zeta15-nested", "taniyama/field-level-collapse"), "skipped");

  // the tower transfer needs a declared intermediate stabilizer
  EXPECT_EQ(status("zeta15-nested", "taniyama/tower-transfer"), "pass");
  EXPECT_EQ(status("zeta15", "taniyama/tower-transfer"), "skipped");
  EXPECT_EQ(status("zeta5", "taniyama/tower-transfer"), "skipped");

  // refinement of the half-transfer needs a finer model: an intermediate
  // stabilizer, or a central conjugation to refine down to the trivial one
  EXPECT_EQ(status("zeta15", "halftransfer/stabilizer-refinement"), "pass");
  EXPECT_EQ(status("zeta15-nested", "halftransfer/stabilizer-refinement"), "pass");
  EXPECT_EQ(status("dihedral", "halftransfer/stabilizer-refinement"), "skipped");
}

TEST(SuiteTest, ReportsAreByteIdenticalAcrossRuns) {
  InstanceFile file = builtin_instance("zeta8");
  SuiteReport a = run_suite(file, "all");
  SuiteReport b = run_suite(file, "all");
  EXPECT_EQ(render_text(a), render_text(b));
  EXPECT_EQ(render_json(a), render_json(b));
}

TEST(SuiteTest, TextReportShape) {
  SuiteReport rep = run_suite(builtin_instance("zeta8"), "lattice");
  std::string text = render_text(rep);
  EXPECT_EQ(text.rfind("instance: zeta8\nsuite: lattice\n", 0), 0u);
  EXPECT_NE(text.find("[pass] lattice/rank-formula"), std::string::npos);
  EXPECT_NE(text.find("summary: "), std::string::npos);
  EXPECT_EQ(text.find("seconds"), std::string::npos);
}

TEST(SuiteTest, JsonReportShape) {
  SuiteReport rep = run_suite(builtin_instance("zeta8"), "plectic");
  std::string js = render_json(rep);
  EXPECT_NE(js.find("\"instance\": \"zeta8\""), std::string::npos);
  EXPECT_NE(js.find("\"suite\": \"plectic\""), std::string::npos);
  EXPECT_NE(js.find("\"name\": \"plectic/group-axioms\""), std::string::npos);
  EXPECT_NE(js.find("\"summary\": {\"passed\": "), std::string::npos);
  EXPECT_EQ(js.find("seconds"), std::string::npos);
}

TEST(SuiteTest, CorruptedDeclaredTypeIsCaught) {
  InstanceFile file = builtin_instance("zeta8");
  ASSERT_FALSE(file.instance->fibers().empty());
  auto [rho, crho] = *file.instance->fibers().begin();
  file.declared_type = std::vector<int>{rho, crho};  // both members of one pair
  SuiteReport rep = run_suite(file, "plectic");
  const CheckResult* c = find_check(rep, "plectic/declared-type-partition");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, "fail");
  EXPECT_NE(c->detail.find("conjugate pair"), std::string::npos) << c->detail;
  EXPECT_FALSE(rep.all_passed());
}

TEST(SuiteTest, UnrealizedInstanceSkipsValueSuites) {
  InstanceFile file = builtin_instance("zeta8");
  file.realize_galois = false;
  SuiteReport tan = run_suite(file, "taniyama");
  EXPECT_EQ(tan.count("skipped"), 10);
  EXPECT_EQ(tan.count("pass"), 0);
  for (const auto& c : tan.checks)
    EXPECT_EQ(c.detail, "the instance does not request a realized group model");
  SuiteReport ext = run_suite(file, "extension");
  EXPECT_EQ(ext.count("skipped"), 5);
  EXPECT_EQ(ext.count("pass"), 0);
}

TEST(SuiteTest, TinyCapTurnsLargeSweepsIntoSkips) {
  SuiteOptions opt;
  opt.cap = 4;
  SuiteReport rep = run_suite(builtin_instance("zeta15"), "plectic", opt);
  EXPECT_EQ(rep.count("fail"), 0) << failures(rep);
  const CheckResult* c = find_check(rep, "plectic/wreath-isomorphism");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, "skipped");
  EXPECT_NE(c->detail.find("cap"), std::string::npos) << c->detail;
}

TEST(SuiteTest, UnknownSuiteIsRejected) {
  InstanceFile file = builtin_instance("zeta5");
  try {
    run_suite(file, "bogus");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unknown suite"), std::string::npos);
  }
}

TEST(SuiteTest, SuiteNamesAreTheDispatchableOnes) {
  InstanceFile file = builtin_instance("zeta5");
  for (const auto& name : suite_names()) {
    SuiteReport rep = run_suite(file, name);
    EXPECT_FALSE(rep.checks.empty()) << name;
    for (const auto& c : rep.checks)
      EXPECT_EQ(c.name.rfind(name + "/", 0), 0u) << c.name;
  }
}

}  // namespace
