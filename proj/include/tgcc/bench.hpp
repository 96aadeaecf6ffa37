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
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tgcc/condenser.hpp"
#include "tgcc/graph.hpp"

namespace tgcc {

/// AUC by the Mann-Whitney rank statistic, with average ranks for ties.
double auc_rank(const std::vector<int>& labels, const std::vector<double>& scores);

/// AUC by trapezoidal integration of the ROC curve (tie groups handled as
/// single threshold steps); agrees with auc_rank to floating-point error.
double auc_trapezoid(const std::vector<int>& labels, const std::vector<double>& scores);

/// Average precision over score-descending threshold steps.
double average_precision(const std::vector<int>& labels, const std::vector<double>& scores);

/// Class-stratified uniform sample of train nodes with the induced 0/1
/// subgraph as the fixed adjacency.
SyntheticGraph coreset_random(const Graph& g, int m, std::uint64_t seed);

/// Greedy per-class mean matching: each pick minimizes the distance between
/// the running selection mean and the class feature mean. Deterministic.
SyntheticGraph coreset_herding(const Graph& g, int m);

/// Class-stratified greedy farthest-point traversal in feature space,
/// starting from a seeded random node of each class.
SyntheticGraph coreset_kcenter(const Graph& g, int m, std::uint64_t seed);

struct EvalOptions {
  int steps = 600;       // training steps on the condensed graph
  double lr = 0.01;
  int hidden = 64;
  bool weighted = true;  // train on sigmoid weights; else sparsify at the threshold
  double sparsify_threshold = 0.5;
  bool adam = true;      // Adam reaches convergence within the step budget
  double link_test_fraction = 0.1;
  std::uint64_t link_split_seed = 12345;
  int probe_steps = 600;
  double probe_lr = 0.01;
};

struct EvalReport {
  std::string protocol;  // single-task | cross-task | cross-dataset | cross-both
  std::string metric;    // primary metric name
  double mean = 0.0;
  double stddev = 0.0;   // population std over seeds
  std::vector<double> per_seed;
  std::map<std::string, std::vector<double>> extra;  // auxiliary metrics per seed
  std::string bundle_hash;
  bool adapter_engaged = false;

  std::string to_json() const;
  std::string to_tsv() const;
};

/// Trains a fresh relay on the condensed graph for opts.steps full-batch
/// steps and reports test accuracy on the original graph, per seed.
EvalReport eval_node_classification(const SyntheticGraph& condensed, const Graph& g,
                                    const std::vector<std::uint64_t>& seeds,
                                    const EvalOptions& opts = {});

/// Trains on the condensed graph via node classification, freezes the
/// model, and scores held-out edges of `g` by sigmoid of the dot product of
/// final-layer representations against 1:1 uniform non-edge negatives.
/// Primary metric: accuracy at threshold 0.5; extra: auc, ap.
EvalReport eval_link_prediction(const SyntheticGraph& condensed, const Graph& g,
                                const std::vector<std::uint64_t>& seeds,
                                const EvalOptions& opts = {});

/// Trains on the condensed source, freezes the first layer, and fits a
/// linear probe (plus a jointly trained linear input adapter when feature
/// dimensions differ) on the target train split. With `link` the frozen
/// probe representation scores target edges instead.
EvalReport eval_transfer(const SyntheticGraph& condensed_src, const Graph& g_target,
                         const std::vector<std::uint64_t>& seeds, bool link = false,
                         const EvalOptions& opts = {});

}  // namespace tgcc
