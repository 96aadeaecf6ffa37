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
#include "tgcc.h"

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "tgcc/bench.hpp"
#include "tgcc/bundle.hpp"
#include "tgcc/errors.hpp"
#include "tgcc/graph.hpp"
#include "tgcc/intervention.hpp"
#include "tgcc/pipeline.hpp"
#include "tgcc/rng.hpp"

using nlohmann::json;

struct tgcc_graph {
  tgcc::Graph graph;
};

struct tgcc_condensed {
  tgcc::CondensedBundle bundle;
};

namespace {

thread_local std::string g_last_error;

tgcc_status status_of(const tgcc::Error& e) {
  using Kind = tgcc::Error::Kind;
  switch (e.kind()) {
    case Kind::argument:
      return TGCC_E_ARGUMENT;
    case Kind::structural:
      return TGCC_E_STRUCTURAL;
    case Kind::capacity:
      return TGCC_E_CAPACITY;
    case Kind::numeric:
      return TGCC_E_NUMERIC;
    case Kind::state:
      return TGCC_E_STATE;
    case Kind::data: {
      const auto* d = dynamic_cast<const tgcc::DataError*>(&e);
      if (!d) return TGCC_E_DATA_PARSE;
      switch (d->code()) {
        case tgcc::DataError::Code::missing_file:
          return TGCC_E_DATA_MISSING;
        case tgcc::DataError::Code::header_mismatch:
          return TGCC_E_DATA_HEADER;
        case tgcc::DataError::Code::index_range:
          return TGCC_E_DATA_RANGE;
        case tgcc::DataError::Code::parse:
          return TGCC_E_DATA_PARSE;
      }
      return TGCC_E_DATA_PARSE;
    }
  }
  return TGCC_E_UNKNOWN;
}

template <typename Fn>
tgcc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TGCC_OK;
  } catch (const tgcc::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return TGCC_E_DATA_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TGCC_E_UNKNOWN;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tgcc_status require(bool cond, const char* msg) {
  if (cond) return TGCC_OK;
  g_last_error = msg;
  return TGCC_E_ARGUMENT;
}

}  // namespace

extern "C" {

const char* tgcc_version(void) { return "0.1.0"; }

const char* tgcc_last_error(void) { return g_last_error.c_str(); }

void tgcc_string_free(char* s) { delete[] s; }

void tgcc_graph_free(tgcc_graph* g) { delete g; }

void tgcc_condensed_free(tgcc_condensed* c) { delete c; }

tgcc_status tgcc_graph_load(const char* bundle_dir, tgcc_graph** out) {
  if (tgcc_status s = require(bundle_dir && out, "null argument")) return s;
  return guarded([&] { *out = new tgcc_graph{tgcc::load_bundle(bundle_dir)}; });
}

tgcc_status tgcc_graph_save(const tgcc_graph* g, const char* bundle_dir) {
  if (tgcc_status s = require(g && bundle_dir, "null argument")) return s;
  return guarded([&] { tgcc::save_bundle(g->graph, bundle_dir); });
}

tgcc_status tgcc_graph_stats(const tgcc_graph* g, char** json_out) {
  if (tgcc_status s = require(g && json_out, "null argument")) return s;
  return guarded([&] {
    json j;
    j["n"] = g->graph.num_nodes();
    j["d"] = g->graph.feature_dim();
    j["classes"] = g->graph.num_classes();
    long edges = 0;
    const auto& adj = g->graph.adjacency();
    for (int k = 0; k < adj.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(adj, k); it; ++it)
        if (it.row() < it.col()) ++edges;
    j["edges"] = edges;
    j["train"] = g->graph.splits().train.size();
    j["val"] = g->graph.splits().val.size();
    j["test"] = g->graph.splits().test.size();
    *json_out = copy_string(j.dump(2) + "\n");
  });
}

tgcc_status tgcc_gen_sbm(const char* params_json, tgcc_graph** out) {
  if (tgcc_status s = require(params_json && out, "null argument")) return s;
  return guarded([&] {
    json p;
    try {
      p = json::parse(params_json);
    } catch (const json::parse_error& e) {
      throw tgcc::DataError(tgcc::DataError::Code::parse, std::string("gen params: ") + e.what());
    }
    auto blocks = p.at("blocks").get<std::vector<int>>();
    double p_in = p.at("p_in").get<double>();
    double p_out = p.at("p_out").get<double>();
    int d = p.at("d").get<int>();
    std::uint64_t seed = p.value("seed", 0ULL);
    *out = new tgcc_graph{tgcc::gen_sbm(blocks, p_in, p_out, d, seed)};
  });
}

tgcc_status tgcc_import_planetoid(const char* raw_dir, const char* name, const char* out_dir,
                                  char** stats_json_out) {
  if (tgcc_status s = require(raw_dir && name && out_dir, "null argument")) return s;
  return guarded([&] {
    tgcc::ImportStats stats = tgcc::import_planetoid(raw_dir, name, out_dir);
    if (stats_json_out) {
      json j;
      j["n"] = stats.n;
      j["d"] = stats.d;
      j["classes"] = stats.num_classes;
      j["edges"] = stats.edges;
      j["skipped"] = stats.skipped;
      *stats_json_out = copy_string(j.dump(2) + "\n");
    }
  });
}

tgcc_status tgcc_condense(const tgcc_graph* g, const char* config_json, tgcc_condensed** out) {
  if (tgcc_status s = require(g && config_json && out, "null argument")) return s;
  return guarded([&] {
    tgcc::TgccConfig cfg = tgcc::parse_config(config_json);
    tgcc::RunArtifacts artifacts = tgcc::run_condense(g->graph, cfg);
    auto* handle = new tgcc_condensed;
    handle->bundle.syn = std::move(artifacts.condensed);
    handle->bundle.config_json = artifacts.config_json;
    handle->bundle.loss_trace_json = tgcc::loss_report_json(artifacts);
    handle->bundle.encoder = std::move(artifacts.encoder);
    handle->bundle.has_encoder = true;
    *out = handle;
  });
}

tgcc_status tgcc_condensed_save(const tgcc_condensed* c, const char* dir) {
  if (tgcc_status s = require(c && dir, "null argument")) return s;
  return guarded([&] { tgcc::save_condensed(c->bundle, dir); });
}

tgcc_status tgcc_condensed_load(const char* dir, tgcc_condensed** out) {
  if (tgcc_status s = require(dir && out, "null argument")) return s;
  return guarded([&] { *out = new tgcc_condensed{tgcc::load_condensed(dir)}; });
}

tgcc_status tgcc_augment(const tgcc_graph* g, const char* config_json, const char* out_dir) {
  if (tgcc_status s = require(g && config_json && out_dir, "null argument")) return s;
  return guarded([&] {
    tgcc::TgccConfig cfg = tgcc::parse_config(config_json);
    const Eigen::MatrixXd adj = g->graph.adjacency_dense();
    const Eigen::MatrixXd lap = tgcc::normalized_laplacian(adj);
    const auto [a, b] = tgcc::degree_marginals(adj);

    Eigen::MatrixXd theta(adj.rows(), adj.cols());
    std::mt19937_64 rng(tgcc::mix_seed(cfg.seed, 11));
    for (int j = 0; j < theta.cols(); ++j)
      for (int i = 0; i < theta.rows(); ++i) theta(i, j) = tgcc::uniform_pm(rng, 0.01);

    tgcc::InterventionPlan plan;
    plan.theta = theta;
    plan.epsilon = cfg.epsilon;
    plan.iters = cfg.sinkhorn_iters;
    plan.tol = cfg.sinkhorn_tol;
    plan.delta_plus = tgcc::solve_delta_plus(adj, lap, theta, cfg.epsilon, a, b,
                                             cfg.sinkhorn_iters, cfg.sinkhorn_tol);
    plan.delta_minus = tgcc::solve_delta_minus(adj, lap, theta, cfg.epsilon, cfg.sinkhorn_iters);
    Eigen::MatrixXd v = tgcc::intervene(adj, plan, cfg.rho * std::max(adj.sum(), 1.0));

    Eigen::SparseMatrix<double> sparse = v.sparseView();
    tgcc::Graph aug = tgcc::Graph::create(sparse, g->graph.features(), g->graph.labels(),
                                          g->graph.splits(), g->graph.num_classes());
    tgcc::save_bundle(aug, out_dir, "augmented (spectral intervention)");
  });
}

tgcc_status tgcc_baseline(const tgcc_graph* g, const char* method, double ratio, int m,
                          uint64_t seed, tgcc_condensed** out) {
  if (tgcc_status s = require(g && method && out, "null argument")) return s;
  return guarded([&] {
    int size = m;
    if (size <= 0) {
      if (ratio <= 0.0 || ratio >= 1.0)
        throw tgcc::ArgumentError("baseline: need ratio in (0,1) or explicit m");
      size = static_cast<int>(
          std::max<long>(g->graph.num_classes(), std::lround(ratio * g->graph.num_nodes())));
    }
    std::string name(method);
    tgcc::SyntheticGraph syn;
    if (name == "random")
      syn = tgcc::coreset_random(g->graph, size, seed);
    else if (name == "herding")
      syn = tgcc::coreset_herding(g->graph, size);
    else if (name == "kcenter")
      syn = tgcc::coreset_kcenter(g->graph, size, seed);
    else
      throw tgcc::ArgumentError("baseline: unknown method '" + name + "'");

    auto* handle = new tgcc_condensed;
    handle->bundle.syn = std::move(syn);
    json cfg;
    cfg["method"] = name;
    cfg["m"] = size;
    cfg["seed"] = seed;
    handle->bundle.config_json = cfg.dump(2) + "\n";
    handle->bundle.loss_trace_json = "{\"epochs\":[]}\n";
    *out = handle;
  });
}

tgcc_status tgcc_eval(const tgcc_condensed* c, const tgcc_graph* target, const char* params_json,
                      char** report_json_out) {
  if (tgcc_status s = require(c && target && params_json && report_json_out, "null argument"))
    return s;
  return guarded([&] {
    json p;
    try {
      p = json::parse(params_json);
    } catch (const json::parse_error& e) {
      throw tgcc::DataError(tgcc::DataError::Code::parse, std::string("eval params: ") + e.what());
    }
    std::string protocol = p.at("protocol").get<std::string>();
    std::vector<std::uint64_t> seeds = p.value("seeds", std::vector<std::uint64_t>{0, 1, 2, 3, 4});

    tgcc::EvalOptions opts;
    opts.steps = p.value("steps", opts.steps);
    opts.lr = p.value("lr", opts.lr);
    opts.hidden = p.value("hidden", opts.hidden);
    opts.weighted = p.value("weighted", opts.weighted);
    opts.sparsify_threshold = p.value("sparsify_threshold", opts.sparsify_threshold);
    opts.link_test_fraction = p.value("link_test_fraction", opts.link_test_fraction);
    opts.link_split_seed = p.value("link_split_seed", opts.link_split_seed);
    opts.probe_steps = p.value("probe_steps", opts.probe_steps);
    opts.probe_lr = p.value("probe_lr", opts.probe_lr);

    tgcc::EvalReport report;
    if (protocol == "node")
      report = tgcc::eval_node_classification(c->bundle.syn, target->graph, seeds, opts);
    else if (protocol == "link")
      report = tgcc::eval_link_prediction(c->bundle.syn, target->graph, seeds, opts);
    else if (protocol == "transfer")
      report = tgcc::eval_transfer(c->bundle.syn, target->graph, seeds, false, opts);
    else if (protocol == "transfer-link")
      report = tgcc::eval_transfer(c->bundle.syn, target->graph, seeds, true, opts);
    else
      throw tgcc::ArgumentError("eval: unknown protocol '" + protocol + "'");
    *report_json_out = copy_string(report.to_json());
  });
}

tgcc_status tgcc_loss_report(const tgcc_condensed* c, const char* format, char** out) {
  if (tgcc_status s = require(c && format && out, "null argument")) return s;
  return guarded([&] {
    std::string fmt(format);
    if (fmt == "json") {
      *out = copy_string(c->bundle.loss_trace_json);
    } else if (fmt == "tsv") {
      json trace = json::parse(c->bundle.loss_trace_json);
      std::string tsv = "epoch\tcausal\tinfonce\tcond\ttotal\n";
      for (const auto& row : trace.at("epochs")) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%ld\t%.17g\t%.17g\t%.17g\t%.17g\n",
                      row.at("epoch").get<long>(), row.at("causal").get<double>(),
                      row.at("infonce").get<double>(), row.at("cond").get<double>(),
                      row.at("total").get<double>());
        tsv += buf;
      }
      *out = copy_string(tsv);
    } else {
      throw tgcc::ArgumentError("loss_report: format must be 'tsv' or 'json'");
    }
  });
}

}  // extern "C"
