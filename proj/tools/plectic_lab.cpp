// plectic-lab: law-check suites, half-transfer evaluation, twisted-extension
// tables, and catalog instance files for finite CM models.
//
// Exit codes: 0 all checks passed, 1 at least one check failed, 2 bad usage
// or unparseable input.  PLECTIC_LAB_CAP overrides the enumeration cap.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plectic/suite.hpp"

namespace {

using namespace plectic;

struct CommonOpts {
  std::string instance;
  bool json = false;
  bool verbose = false;
  int sample = 0;
  std::uint64_t seed = 0;

  SuiteOptions suite_options() const {
    SuiteOptions s;
    s.sample = sample;
    s.seed = seed;
    return s;
  }
};

/// `--instance` accepts a catalog name or a path to an instance file; exact
/// catalog names win.
InstanceFile load_instance(const std::string& spec) {
  for (const auto& name : catalog_names())
    if (name == spec) return builtin_instance(name);
  return parse_instance(spec);
}

void print_timings(const SuiteReport& rep) {
  for (const auto& c : rep.checks)
    std::fprintf(stderr, "%-52s %9.4f s\n", c.name.c_str(), c.seconds);
}

int emit_reports(const std::vector<SuiteReport>& reps, const CommonOpts& opts) {
  if (opts.json) {
    if (reps.size() == 1) {
      std::cout << render_json(reps[0]);
    } else {
      std::cout << "[\n";
      for (std::size_t i = 0; i < reps.size(); ++i) {
        if (i) std::cout << ",\n";
        std::string body = render_json(reps[i]);
        if (!body.empty() && body.back() == '\n') body.pop_back();
        std::cout << body;
      }
      std::cout << "\n]\n";
    }
  } else {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (i) std::cout << "\n";
      std::cout << render_text(reps[i]);
    }
  }
  if (opts.verbose)
    for (const auto& rep : reps) print_timings(rep);
  for (const auto& rep : reps)
    if (!rep.all_passed()) return 1;
  return 0;
}

SuiteReport filter_report(const SuiteReport& full, const std::vector<std::string>& keep) {
  SuiteReport out;
  out.instance = full.instance;
  out.suite = full.suite;
  for (const auto& c : full.checks)
    for (const auto& name : keep)
      if (c.name == name) out.checks.push_back(c);
  return out;
}

int run_verify(const CommonOpts& opts, const std::string& suite) {
  std::vector<SuiteReport> reps;
  if (opts.instance.empty()) {
    for (const auto& name : catalog_names())
      reps.push_back(run_suite(builtin_instance(name), suite, opts.suite_options()));
  } else {
    reps.push_back(run_suite(load_instance(opts.instance), suite, opts.suite_options()));
  }
  return emit_reports(reps, opts);
}

int run_taniyama(const CommonOpts& opts, const std::string& suite, const std::string& nested) {
  static const std::map<std::string, std::vector<std::string>> groups = {
      {"independence", {"taniyama/section-independence", "taniyama/lift-independence"}},
      {"galois", {"taniyama/galois-invariance"}},
      {"cocycle", {"taniyama/cocycle-law"}},
      {"norm",
       {"taniyama/block-norms", "taniyama/level-refinement", "taniyama/level-transport",
        "taniyama/field-level-collapse"}},
      {"reflex", {"taniyama/reflex-pairing"}},
  };
  std::vector<SuiteReport> reps;
  SuiteReport full = run_suite(load_instance(opts.instance), "taniyama", opts.suite_options());
  reps.push_back(suite == "all" ? full : filter_report(full, groups.at(suite)));
  if (!nested.empty()) {
    SuiteReport nfull = run_suite(load_instance(nested), "taniyama", opts.suite_options());
    if (suite == "all") {
      reps.push_back(nfull);
    } else {
      std::vector<std::string> keep = groups.at(suite);
      keep.push_back("taniyama/tower-transfer");
      reps.push_back(filter_report(nfull, keep));
    }
  }
  return emit_reports(reps, opts);
}

/// Resolves --cmtype: "declared" uses the instance file's type, an integer is
/// a 1-based index into the deterministic type enumeration.
CMType resolve_type(const InstanceFile& file, const std::string& spec) {
  if (spec == "declared") {
    require(file.declared_type.has_value(), "the instance declares no embedding type; pass "
                                            "--cmtype <index>");
    return CMType::from_members(
        file.instance, std::set<int>(file.declared_type->begin(), file.declared_type->end()));
  }
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(spec, &used);
    require(used == spec.size(), "trailing characters");
  } catch (const std::exception&) {
    fail("--cmtype must be 'declared' or a 1-based type index, got '" + spec + "'");
  }
  auto types = enumerate_cm_types(file.instance);
  require(idx >= 1 && idx <= static_cast<int>(types.size()),
          "--cmtype index out of range; the instance has " + std::to_string(types.size()) +
              " embedding types");
  return types[idx - 1];
}

int run_halftransfer(const CommonOpts& opts, const std::string& cmtype,
                     const std::string& element) {
  InstanceFile file = load_instance(opts.instance);
  const CMRef& inst = file.instance;
  const auto& G = *inst->group();
  CMType phi = resolve_type(file, cmtype);

  // canonical conjugation-compatible section: each coset id is its own
  // minimal representative, the conjugate coset gets c times it
  std::map<int, int> smap;
  for (const auto& [rho, crho] : inst->fibers()) {
    smap[rho] = rho;
    smap[crho] = G.mul(inst->conj(), rho);
  }
  ConjCompatibleSection w = ConjCompatibleSection::from_map(inst, std::move(smap));

  std::cout << "instance: " << file.name << "\n";
  std::cout << "type:";
  for (int rho : phi.members()) std::cout << " " << (rho + 1);
  std::cout << "\n";

  int value = 0;
  if (element.find("pi:") != std::string::npos) {
    WreathDatum d = parse_wreath(element, G, inst->sigmaF());
    PlecticElement alpha =
        from_wreath(inst->group(), inst->real_subgroup(), inst->sigmaF(),
                    CosetSection::canonical(inst->sigmaF()), d);
    std::cout << "element: " << d.str(G, inst->sigmaF()) << "\n";
    if (opts.verbose) {
      for (int rho : phi.members()) {
        int moved = alpha.apply(w.rep(rho));
        int arho = inst->sigmaK().id_of_element(moved);
        int factor = G.mul(G.inv(w.rep(arho)), moved);
        std::cout << "h[" << (rho + 1) << "] = " << G.element(factor).cycles() << "\n";
      }
    }
    value = plectic_half_transfer(inst, phi, alpha, w);
  } else {
    int g = G.index_of(Perm::parse_cycles(element, G.degree()));
    std::cout << "element: " << G.element(g).cycles() << "\n";
    if (opts.verbose) {
      for (int rho : phi.members()) {
        int grho = inst->sigmaK().act(g, rho);
        int factor = G.mul(G.mul(G.inv(w.rep(grho)), g), w.rep(rho));
        std::cout << "h[" << (rho + 1) << "] = " << G.element(factor).cycles() << "\n";
      }
    }
    value = tate_half_transfer(inst, phi, g, w);
  }
  std::cout << "value = " << inst->h_ab()->rep_cycles(value) << "\n";
  return 0;
}

int run_extension(const CommonOpts& opts, const std::string& m0, const std::string& table_path) {
  InstanceFile file = load_instance(opts.instance);
  require(file.realize_galois,
          "extension tables need a realized group model ([weil] realize = galois)");
  require(file.level.has_value(), "the instance declares no level stabilizer");
  const CMRef& inst = file.instance;
  require(inst->sub().is_normal_in(Subgroup::whole(inst->group())),
          "realization needs a normal field stabilizer");
  QuotRef q =
      QuotientGroup::make(Subgroup::whole(inst->group()), commutator_subgroup(inst->sub()));
  WeilRef base =
      validate_weil_datum(q->as_group(), image_subgroup(q, inst->sub()),
                          q->project(inst->conj()), image_subgroup(q, inst->real_subgroup()));
  WeilRef d = derived_datum(base, base->conj_lift(), image_subgroup(q, *file.level));
  ModuleRef mod = ValueModule::make(
      d, m0 == "trivial" ? trivial_rational_subgroup(d) : constant_rational_subgroup(d));
  CocycleMap b = taniyama_cocycle(mod, WeilSection::canonical(d));
  TwistedExtension ext = build_twisted_extension(mod, two_cocycle_from_lift(mod, b));

  std::ostringstream out;
  out << "# twisted extension multiplication table\n";
  out << "# instance: " << file.name << "\n";
  out << "# m0: " << m0 << "\n";
  out << "# encoding: carrier index = module index * group order + group index\n";
  out << "module " << mod->module_order() << "\n";
  out << "group " << mod->group_order() << "\n";
  out << "carrier " << ext.order() << "\n";
  for (int i = 0; i < ext.order(); ++i)
    for (int j = 0; j < ext.order(); ++j) out << i << " " << j << " -> " << ext.mul(i, j) << "\n";

  if (table_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(table_path);
    require(static_cast<bool>(f), "cannot open '" + table_path + "' for writing");
    f << out.str();
    std::cout << "wrote the " << ext.order() << "x" << ext.order() << " table to " << table_path
              << "\n";
  }
  return 0;
}

int run_gen_instance(const std::string& name, const std::string& out_path) {
  std::string text = serialize_instance(builtin_instance(name));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    require(static_cast<bool>(f), "cannot open '" + out_path + "' for writing");
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-model laboratory: plectic groups, half-transfers, character "
               "lattices, pairing values, and twisted extensions"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd, bool instance_required) {
    auto* o = cmd->add_option("--instance", opts.instance,
                              "catalog name (" + [] {
                                std::string s;
                                for (const auto& n : plectic::catalog_names()) {
                                  if (!s.empty()) s += ", ";
                                  s += n;
                                }
                                return s;
                              }() + ") or instance file path");
    if (instance_required) o->required();
    cmd->add_flag("--json", opts.json, "machine-readable report");
    cmd->add_flag("--verbose", opts.verbose, "wall times per check on stderr; intermediate "
                                             "factors for halftransfer");
    cmd->add_option("--sample", opts.sample, "sample size for the otherwise-exhaustive "
                                             "ambient associativity sweep");
    cmd->add_option("--seed", opts.seed, "seed for --sample");
  };

  std::vector<std::string> suites = plectic::suite_names();
  suites.push_back("all");

  auto* verify = app.add_subcommand("verify", "run law-check suites");
  std::string verify_suite = "all";
  verify->add_option("--suite", verify_suite, "which suite to run")
      ->check(CLI::IsMember(suites));
  add_common(verify, false);

  auto* half = app.add_subcommand("halftransfer", "evaluate a half-transfer value");
  std::string cmtype = "declared";
  std::string element;
  half->add_option("--cmtype", cmtype, "'declared' or 1-based index into the type enumeration");
  half->add_option("--element", element,
                   "group element in cycle notation, or an automorphism as 'pi: ...; h: ...'")
      ->required();
  add_common(half, true);

  auto* tan = app.add_subcommand("taniyama", "check pairing-value laws");
  std::string tan_suite = "all";
  std::string nested;
  tan->add_option("--suite", tan_suite, "which law group to check")
      ->check(CLI::IsMember(
          std::vector<std::string>{"independence", "galois", "cocycle", "norm", "reflex", "all"}));
  tan->add_option("--nested", nested,
                  "second instance carrying an intermediate stabilizer for the tower check");
  add_common(tan, true);

  auto* lat = app.add_subcommand("lattice", "check character-lattice laws");
  add_common(lat, true);

  auto* ext = app.add_subcommand("extension", "emit a twisted-extension multiplication table");
  std::string m0 = "constants";
  std::string table_path;
  ext->add_option("--m0", m0, "rational subgroup of the value module")
      ->check(CLI::IsMember(std::vector<std::string>{"trivial", "constants"}));
  ext->add_option("--emit-table", table_path, "write the table here instead of stdout");
  add_common(ext, true);

  auto* gen = app.add_subcommand("gen-instance", "write a catalog instance file");
  std::string gen_name;
  std::string gen_out;
  gen->add_option("--name", gen_name, "catalog instance name")
      ->required()
      ->check(CLI::IsMember(plectic::catalog_names()));
  gen->add_option("--out", gen_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(opts, verify_suite);
    if (half->parsed()) return run_halftransfer(opts, cmtype, element);
    if (tan->parsed()) return run_taniyama(opts, tan_suite, nested);
    if (lat->parsed()) {
      std::vector<plectic::SuiteReport> reps{
          plectic::run_suite(load_instance(opts.instance), "lattice", opts.suite_options())};
      return emit_reports(reps, opts);
    }
    if (ext->parsed()) return run_extension(opts, m0, table_path);
    if (gen->parsed()) return run_gen_instance(gen_name, gen_out);
  } catch (const plectic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
