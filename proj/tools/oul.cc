// Copyright 2026 The oul Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
// Exit codes: 0 ok, 2 invalid configuration or input, 3 infeasible
// construction, 4 violated invariant.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oul/errors.h"
#include "oul/harness.h"
#include "oul/learners.h"
#include "oul/processes.h"
#include "oul/trees.h"

namespace {

struct Globals {
  std::string config;
  std::string profile;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  std::string format = "csv";
};

void WriteOutput(const Globals& g, const std::string& text) {
  if (g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw oul::ConfigError("cannot write '" + g.out + "'");
  f << text;
  if (!f) throw oul::ConfigError("write to '" + g.out + "' failed");
}

oul::Config LoadConfig(const Globals& g) {
  if (g.config.empty()) return oul::Config::Parse("", g.profile);
  return oul::Config::Load(g.config, g.profile);
}

std::string RenderTrace(const Globals& g, const oul::Trace& t) {
  if (g.format == "csv") return oul::TraceToCsv(t);
  if (g.format == "jsonl") return oul::TraceToJsonl(t);
  if (g.format == "svg") return oul::TraceToSvg(t);
  throw oul::ConfigError("unknown format '" + g.format + "'");
}

std::string RenderReport(const Globals& g, const oul::CheckReport& r) {
  if (g.format == "csv") return oul::ReportToCsv(r);
  if (g.format == "jsonl") return oul::ReportToJsonl(r);
  if (g.format == "svg") return oul::ReportToSvg(r);
  throw oul::ConfigError("unknown format '" + g.format + "'");
}

struct ClassFlags {
  std::string preset;
  std::size_t n = 0;
  std::size_t n2 = 0;
  std::string file;

  void Add(CLI::App* app) {
    app->add_option("--class", preset,
                    "Class preset: thresholds, singletons, full, union-split");
    app->add_option("--n", n, "Domain size");
    app->add_option("--n2", n2, "Second block size for union-split");
    app->add_option("--class-file", file, "Class file");
  }
  oul::ClassSpec Apply(oul::ClassSpec s) const {
    if (!preset.empty()) s.preset = preset;
    if (n) s.n = n;
    if (n2) s.n2 = n2;
    if (!file.empty()) {
      s.file = file;
      s.preset = "file";
    }
    return s;
  }
};

int Run(int argc, char** argv) {
  CLI::App app{"Online learning under general data processes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "INI configuration file");
  app.add_option("--profile", g.profile,
                 "Use [profile:section] overrides from the config");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Output path, '-' for stdout");
  app.add_option("--format", g.format, "csv, jsonl or svg")
      ->check(CLI::IsMember({"csv", "jsonl", "svg"}));

  // run
  auto* run = app.add_subcommand("run", "Run one trial and emit its trace");
  ClassFlags run_class;
  run_class.Add(run);
  std::string learner, process;
  std::optional<int> rollouts;
  std::optional<std::size_t> experts_max, horizon;
  run->add_option("--learner", learner, "soa, alg2, alg1, wm, squint, constant-0, constant-1");
  run->add_option("--process", process, "Process kind");
  run->add_option("--rollouts", rollouts, "Rollouts per prediction (M)");
  run->add_option("--experts-max", experts_max, "Expert pool size (I)");
  run->add_option("-T,--horizon", horizon, "Rounds");

  // dims
  auto* dims = app.add_subcommand("dims", "Print VC, Littlestone and VCL dimensions");
  ClassFlags dims_class;
  dims_class.Add(dims);
  int ldim_cap = 64, vcl_cap = 16;
  dims->add_option("--ldim-cap", ldim_cap, "Littlestone search cap");
  dims->add_option("--vcl-cap", vcl_cap, "VCL depth search cap");

  // adversary
  auto* adv = app.add_subcommand("adversary", "Emit an adversary trace");
  ClassFlags adv_class;
  adv_class.Add(adv);
  std::string adv_kind;
  int depth = 0;
  std::string layout = "shared";
  std::size_t adv_horizon = 0;
  std::string tree_out;
  adv->add_option("kind", adv_kind, "littlestone or vcl")
      ->required()
      ->check(CLI::IsMember({"littlestone", "vcl"}));
  adv->add_option("--depth", depth, "Tree depth")->required();
  adv->add_option("--layout", layout, "VCL layout: shared or distinct")
      ->check(CLI::IsMember({"shared", "distinct"}));
  adv->add_option("-T,--horizon", adv_horizon, "Littlestone rounds (default: depth)");
  adv->add_option("--tree-out", tree_out, "Also write the VCL tree file");

  // experts
  auto* experts = app.add_subcommand("experts", "Expert indexing");
  std::vector<std::uint64_t> index_of;
  std::string set_of;
  std::size_t pool = 0;
  auto* opt_index = experts->add_option("--index-of", index_of, "Index of the set J");
  auto* opt_set = experts->add_option("--set-of", set_of, "Set with the given index");
  auto* opt_pool = experts->add_option("--pool", pool, "Write sets of indices 1..I");
  opt_index->excludes(opt_set)->excludes(opt_pool);
  opt_set->excludes(opt_pool);

  // check
  auto* check = app.add_subcommand("check", "Run an empirical condition checker");
  std::string which;
  check->add_option("which", which, "condition1 or c2")
      ->required()
      ->check(CLI::IsMember({"condition1", "c2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const oul::Config config = LoadConfig(g);

  if (*run) {
    oul::LearnerSpec ls = config.Learner();
    if (!learner.empty()) ls.name = learner;
    if (rollouts) ls.rollouts = *rollouts;
    if (experts_max) ls.experts_max = *experts_max;
    oul::ProcessSpec ps = config.Process();
    if (!process.empty()) ps.kind = oul::ProcessKindFromName(process);
    oul::TrialSpec ts = config.Trial();
    if (horizon) ts.horizon = *horizon;
    const std::uint64_t seed = g.seed ? *g.seed : config.Seeds("trial").front();
    auto result = oul::RunTrial(ls, ps, run_class.Apply(config.Class()), ts, seed);
    WriteOutput(g, RenderTrace(g, result.trace));
    return 0;
  }
  if (*dims) {
    const oul::ConceptClass c = oul::BuildClass(dims_class.Apply(config.Class()));
    std::ostringstream out;
    auto vc = oul::VcDimension(c);
    out << "vc_dimension: " << (vc ? std::to_string(*vc) : "none") << '\n'
        << "littlestone_dimension: "
        << oul::LittlestoneDimension(c, ldim_cap).ToString() << '\n'
        << "vcl_depth: " << oul::VclDepth(c, vcl_cap).ToString() << '\n';
    WriteOutput(g, out.str());
    return 0;
  }
  if (*adv) {
    const oul::ConceptClass c = oul::BuildClass(adv_class.Apply(config.Class()));
    const std::uint64_t seed = g.seed ? *g.seed : config.Seeds("trial").front();
    oul::AdversaryTrace trace;
    if (adv_kind == "littlestone") {
      auto tree = oul::BuildLittlestoneWitness(c, depth);
      trace = oul::LittlestoneAdversary(
          c, tree, adv_horizon ? adv_horizon : static_cast<std::size_t>(depth),
          seed);
    } else {
      auto tree = oul::BuildVclAdversaryTree(c, depth,
                                             oul::VclLayoutFromName(layout));
      if (!tree_out.empty()) {
        std::ofstream f(tree_out);
        if (!f) throw oul::ConfigError("cannot write '" + tree_out + "'");
        f << tree.ToTreeFile(c.domain());
      }
      trace = oul::VclAdversary(c, tree, seed);
    }
    WriteOutput(g, trace.ToCsv(c.domain()));
    return 0;
  }
  if (*experts) {
    std::ostringstream out;
    if (*opt_index) {
      std::sort(index_of.begin(), index_of.end());
      out << oul::IndexOfSet(index_of) << '\n';
    } else if (*opt_set) {
      oul::BigIndex i;
      try {
        i = oul::BigIndex(set_of);
      } catch (const std::exception&) {
        throw oul::ConfigError("--set-of expects a positive integer");
      }
      out << oul::FormatExpertSets({oul::SetOfIndex(i)});
    } else if (*opt_pool) {
      std::vector<std::vector<std::uint64_t>> sets;
      for (std::size_t i = 1; i <= pool; ++i) {
        sets.push_back(oul::SetOfIndex(oul::BigIndex(i)));
      }
      out << oul::FormatExpertSets(sets);
    } else {
      throw oul::ConfigError("experts needs --index-of, --set-of or --pool");
    }
    WriteOutput(g, out.str());
    return 0;
  }
  if (*check) {
    oul::CheckReport report;
    if (which == "condition1") {
      auto spec = config.Condition1();
      if (g.seed) spec.seeds = {*g.seed};
      report = oul::CheckCondition1(spec);
    } else {
      auto spec = config.C2();
      if (g.seed) spec.seeds = {*g.seed};
      report = oul::CheckC2(spec);
    }
    WriteOutput(g, RenderReport(g, report));
    std::cerr << report.name << ": " << oul::VerdictName(report.verdict) << '\n';
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const oul::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const oul::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const oul::SizeError& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return 2;
  } catch (const oul::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const oul::Error& e) {
    std::cerr << "assertion failed: " << e.what() << '\n';
    return 4;
  }
}
