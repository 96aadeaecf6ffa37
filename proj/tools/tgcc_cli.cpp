/*
 * Copyright 2026 The TGCC Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end; all functionality goes through the C API in
// tgcc.h. Exit codes: 0 success, 1 usage, 2 data error, 3 numeric abort.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgcc.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(tgcc_status status) {
  switch (status) {
    case TGCC_OK:
      return kExitOk;
    case TGCC_E_NUMERIC:
      return kExitNumeric;
    case TGCC_E_ARGUMENT:
    case TGCC_E_STATE:
      return kExitUsage;
    default:
      return kExitData;
  }
}

int fail(tgcc_status status) {
  std::cerr << "error: " << tgcc_last_error() << "\n";
  return exit_code_for(status);
}

struct GraphHandle {
  tgcc_graph* ptr = nullptr;
  ~GraphHandle() { tgcc_graph_free(ptr); }
};

struct CondensedHandle {
  tgcc_condensed* ptr = nullptr;
  ~CondensedHandle() { tgcc_condensed_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { tgcc_string_free(ptr); }
};

// Reads the config file (or "{}") and applies the --seed override.
std::string load_config(const std::string& path, bool has_seed, std::uint64_t seed, int* err) {
  json cfg = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot open config file " << path << "\n";
      *err = kExitData;
      return "";
    }
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      std::cerr << "error: " << path << ": " << e.what() << "\n";
      *err = kExitData;
      return "";
    }
  }
  if (has_seed) cfg["seed"] = seed;
  *err = kExitOk;
  return cfg.dump();
}

bool write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tgcc: graph condensation with spectral interventions"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a stochastic block model bundle");
  std::vector<int> gen_blocks;
  double gen_p_in = 0.5, gen_p_out = 0.05;
  int gen_d = 8;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--blocks", gen_blocks, "block sizes")->required()->delimiter(',');
  gen->add_option("--p-in", gen_p_in, "intra-block edge probability");
  gen->add_option("--p-out", gen_p_out, "inter-block edge probability");
  gen->add_option("--dim", gen_d, "feature dimension");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "output bundle directory")->required();

  // ---- import ----
  auto* import = app.add_subcommand("import", "import planetoid-style raw files");
  std::string import_raw, import_name, import_out;
  import->add_option("--raw", import_raw, "directory with <name>.content/<name>.cites")->required();
  import->add_option("--name", import_name, "dataset name, e.g. cora")->required();
  import->add_option("--out", import_out, "output bundle directory")->required();

  // ---- condense ----
  auto* condense = app.add_subcommand("condense", "condense a bundle");
  std::string cond_bundle, cond_config, cond_out;
  std::uint64_t cond_seed = 0;
  bool cond_has_seed = false;
  condense->add_option("--bundle", cond_bundle, "input bundle directory")->required();
  condense->add_option("--config", cond_config, "config JSON file");
  condense->add_option("--out", cond_out, "output condensed bundle directory")->required();
  condense->add_option("--seed", cond_seed, "seed override")->each([&](const std::string&) {
    cond_has_seed = true;
  });

  // ---- augment ----
  auto* augment = app.add_subcommand("augment", "write the intervened graph for inspection");
  std::string aug_bundle, aug_config, aug_out;
  std::uint64_t aug_seed = 0;
  bool aug_has_seed = false;
  augment->add_option("--bundle", aug_bundle, "input bundle directory")->required();
  augment->add_option("--config", aug_config, "config JSON file");
  augment->add_option("--out", aug_out, "output bundle directory")->required();
  augment->add_option("--seed", aug_seed, "seed override")->each([&](const std::string&) {
    aug_has_seed = true;
  });

  // ---- baseline ----
  auto* baseline = app.add_subcommand("baseline", "coreset baseline");
  std::string base_bundle, base_method, base_out;
  double base_ratio = 0.0;
  int base_m = 0;
  std::uint64_t base_seed = 0;
  baseline->add_option("--bundle", base_bundle, "input bundle directory")->required();
  baseline->add_option("--method", base_method, "random | herding | kcenter")->required();
  baseline->add_option("--ratio", base_ratio, "condensation ratio r");
  baseline->add_option("--m", base_m, "explicit node count (overrides ratio)");
  baseline->add_option("--seed", base_seed, "rng seed");
  baseline->add_option("--out", base_out, "output condensed bundle directory")->required();

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "evaluate a condensed bundle");
  std::string eval_condensed, eval_bundle, eval_protocol = "node", eval_out, eval_tsv;
  std::vector<std::uint64_t> eval_seeds = {0, 1, 2, 3, 4};
  eval->add_option("--condensed", eval_condensed, "condensed bundle directory")->required();
  eval->add_option("--bundle", eval_bundle, "target bundle directory")->required();
  eval->add_option("--protocol", eval_protocol, "node | link | transfer | transfer-link");
  eval->add_option("--seeds", eval_seeds, "evaluation seeds")->delimiter(',');
  eval->add_option("--out", eval_out, "write report JSON here (default stdout)");
  eval->add_option("--tsv", eval_tsv, "also write a TSV summary");

  // ---- report ----
  auto* report = app.add_subcommand("report", "loss table of a condensed bundle");
  std::string report_dir, report_format = "tsv";
  report->add_option("--condensed", report_dir, "condensed bundle directory")->required();
  report->add_option("--format", report_format, "tsv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (gen->parsed()) {
    json params;
    params["blocks"] = gen_blocks;
    params["p_in"] = gen_p_in;
    params["p_out"] = gen_p_out;
    params["d"] = gen_d;
    params["seed"] = gen_seed;
    GraphHandle g;
    if (tgcc_status s = tgcc_gen_sbm(params.dump().c_str(), &g.ptr)) return fail(s);
    if (tgcc_status s = tgcc_graph_save(g.ptr, gen_out.c_str())) return fail(s);
    OwnedString stats;
    if (tgcc_status s = tgcc_graph_stats(g.ptr, &stats.ptr)) return fail(s);
    std::cout << stats.ptr;
    return kExitOk;
  }

  if (import->parsed()) {
    OwnedString stats;
    if (tgcc_status s = tgcc_import_planetoid(import_raw.c_str(), import_name.c_str(),
                                              import_out.c_str(), &stats.ptr))
      return fail(s);
    std::cout << stats.ptr;
    return kExitOk;
  }

  if (condense->parsed()) {
    int err = kExitOk;
    std::string config = load_config(cond_config, cond_has_seed, cond_seed, &err);
    if (err) return err;
    GraphHandle g;
    if (tgcc_status s = tgcc_graph_load(cond_bundle.c_str(), &g.ptr)) return fail(s);
    CondensedHandle c;
    if (tgcc_status s = tgcc_condense(g.ptr, config.c_str(), &c.ptr)) return fail(s);
    if (tgcc_status s = tgcc_condensed_save(c.ptr, cond_out.c_str())) return fail(s);
    std::cout << "condensed bundle written to " << cond_out << "\n";
    return kExitOk;
  }

  if (augment->parsed()) {
    int err = kExitOk;
    std::string config = load_config(aug_config, aug_has_seed, aug_seed, &err);
    if (err) return err;
    GraphHandle g;
    if (tgcc_status s = tgcc_graph_load(aug_bundle.c_str(), &g.ptr)) return fail(s);
    if (tgcc_status s = tgcc_augment(g.ptr, config.c_str(), aug_out.c_str())) return fail(s);
    std::cout << "augmented bundle written to " << aug_out << "\n";
    return kExitOk;
  }

  if (baseline->parsed()) {
    GraphHandle g;
    if (tgcc_status s = tgcc_graph_load(base_bundle.c_str(), &g.ptr)) return fail(s);
    CondensedHandle c;
    if (tgcc_status s = tgcc_baseline(g.ptr, base_method.c_str(), base_ratio, base_m, base_seed,
                                      &c.ptr))
      return fail(s);
    if (tgcc_status s = tgcc_condensed_save(c.ptr, base_out.c_str())) return fail(s);
    std::cout << "baseline bundle written to " << base_out << "\n";
    return kExitOk;
  }

  if (eval->parsed()) {
    GraphHandle target;
    if (tgcc_status s = tgcc_graph_load(eval_bundle.c_str(), &target.ptr)) return fail(s);
    CondensedHandle c;
    if (tgcc_status s = tgcc_condensed_load(eval_condensed.c_str(), &c.ptr)) return fail(s);
    json params;
    params["protocol"] = eval_protocol;
    params["seeds"] = eval_seeds;
    OwnedString rep;
    if (tgcc_status s = tgcc_eval(c.ptr, target.ptr, params.dump().c_str(), &rep.ptr))
      return fail(s);
    if (!eval_out.empty()) {
      if (!write_text(eval_out, rep.ptr)) return kExitData;
    } else {
      std::cout << rep.ptr;
    }
    if (!eval_tsv.empty()) {
      json j = json::parse(std::string(rep.ptr));
      std::ostringstream tsv;
      tsv << "protocol\tmetric\tmean\tstd\tseeds\tbundle_hash\n";
      tsv << j["protocol"].get<std::string>() << "\t" << j["metric"].get<std::string>() << "\t"
          << j["mean"].get<double>() << "\t" << j["std"].get<double>() << "\t"
          << j["per_seed"].size() << "\t" << j["bundle_hash"].get<std::string>() << "\n";
      if (!write_text(eval_tsv, tsv.str())) return kExitData;
    }
    return kExitOk;
  }

  if (report->parsed()) {
    CondensedHandle c;
    if (tgcc_status s = tgcc_condensed_load(report_dir.c_str(), &c.ptr)) return fail(s);
    OwnedString table;
    if (tgcc_status s = tgcc_loss_report(c.ptr, report_format.c_str(), &table.ptr))
      return fail(s);
    std::cout << table.ptr;
    return kExitOk;
  }

  std::cerr << app.help();
  return kExitUsage;
}
