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
#include "tgcc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tgcc/bundle.hpp"
#include "tgcc/relay.hpp"
#include "tgcc/rng.hpp"

namespace tgcc {

using nlohmann::json;

namespace {

struct Ranked {
  double score;
  int label;
};

void check_binary(const std::vector<int>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size() || labels.empty())
    throw ArgumentError("metric: labels and scores must be nonempty and equal length");
  bool pos = false, neg = false;
  for (int l : labels) {
    if (l != 0 && l != 1) throw ArgumentError("metric: labels must be 0/1");
    (l ? pos : neg) = true;
  }
  if (!pos || !neg) throw ArgumentError("metric: need at least one positive and one negative");
}

}  // namespace

double auc_rank(const std::vector<int>& labels, const std::vector<double>& scores) {
  check_binary(labels, scores);
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  long num_pos = 0, num_neg = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) rank_sum_pos += avg_rank;
    i = j;
  }
  for (int l : labels) (l ? num_pos : num_neg) += 1;
  return (rank_sum_pos - 0.5 * num_pos * (num_pos + 1)) /
         (static_cast<double>(num_pos) * static_cast<double>(num_neg));
}

double auc_trapezoid(const std::vector<int>& labels, const std::vector<double>& scores) {
  check_binary(labels, scores);
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  long num_pos = 0, num_neg = 0;
  for (int l : labels) (l ? num_pos : num_neg) += 1;

  double auc = 0.0;
  double tp = 0.0, fp = 0.0, prev_tp = 0.0, prev_fp = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]])
        tp += 1.0;
      else
        fp += 1.0;
    }
    auc += 0.5 * (tp + prev_tp) * (fp - prev_fp);
    prev_tp = tp;
    prev_fp = fp;
    i = j;
  }
  return auc / (static_cast<double>(num_pos) * static_cast<double>(num_neg));
}

double average_precision(const std::vector<int>& labels, const std::vector<double>& scores) {
  check_binary(labels, scores);
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  long num_pos = 0;
  for (int l : labels) num_pos += l;

  double ap = 0.0;
  double tp = 0.0, seen = 0.0, prev_recall = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      seen += 1.0;
      if (labels[order[k]]) tp += 1.0;
    }
    double recall = tp / num_pos;
    double precision = tp / seen;
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

namespace {

// Shared coreset assembly: fixed induced subgraph over selected train nodes.
SyntheticGraph induced_coreset(const Graph& g, const std::vector<int>& selected) {
  std::vector<int> sel = selected;
  std::sort(sel.begin(), sel.end());
  const int m = static_cast<int>(sel.size());

  SyntheticGraph syn;
  syn.num_classes = g.num_classes();
  syn.mode = SyntheticGraph::AdjacencyMode::fixed;
  syn.xs.resize(m, g.feature_dim());
  syn.ys.resize(m);
  for (int i = 0; i < m; ++i) {
    syn.xs.row(i) = g.features().row(sel[i]);
    syn.ys[i] = g.labels()[sel[i]];
  }
  Eigen::MatrixXd dense = g.adjacency_dense();
  syn.adj_fixed.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) syn.adj_fixed(i, j) = i == j ? 0.0 : dense(sel[i], sel[j]);
  return syn;
}

std::vector<int> coreset_allocation(const Graph& g, int m) {
  if (m > static_cast<int>(g.splits().train.size()))
    throw ArgumentError("coreset: m exceeds the train split size");
  if (m < g.num_classes()) throw ArgumentError("coreset: m below the class count");
  auto by_class = g.train_nodes_by_class();
  std::vector<int> counts(g.num_classes());
  for (int c = 0; c < g.num_classes(); ++c) counts[c] = static_cast<int>(by_class[c].size());
  std::vector<int> alloc = allocate_per_class(counts, m, g.num_classes());
  for (int c = 0; c < g.num_classes(); ++c)
    if (alloc[c] > counts[c])
      throw ArgumentError("coreset: class " + std::to_string(c) +
                          " has too few train nodes for the allocation");
  return alloc;
}

}  // namespace

SyntheticGraph coreset_random(const Graph& g, int m, std::uint64_t seed) {
  auto by_class = g.train_nodes_by_class();
  std::vector<int> alloc = coreset_allocation(g, m);
  std::vector<int> selected;
  for (int c = 0; c < g.num_classes(); ++c) {
    std::mt19937_64 rng(mix_seed(seed, 500 + c));
    std::vector<int> pool = by_class[c];
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[uniform_index(rng, i)]);
    selected.insert(selected.end(), pool.begin(), pool.begin() + alloc[c]);
  }
  return induced_coreset(g, selected);
}

SyntheticGraph coreset_herding(const Graph& g, int m) {
  auto by_class = g.train_nodes_by_class();
  std::vector<int> alloc = coreset_allocation(g, m);
  std::vector<int> selected;
  for (int c = 0; c < g.num_classes(); ++c) {
    const auto& pool = by_class[c];
    Eigen::VectorXd class_mean = Eigen::VectorXd::Zero(g.feature_dim());
    for (int node : pool) class_mean += g.features().row(node).transpose();
    class_mean /= static_cast<double>(pool.size());

    Eigen::VectorXd running_sum = Eigen::VectorXd::Zero(g.feature_dim());
    std::vector<bool> used(pool.size(), false);
    for (int pick = 0; pick < alloc[c]; ++pick) {
      int best = -1;
      double best_dist = 0.0;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (used[k]) continue;
        Eigen::VectorXd mean =
            (running_sum + g.features().row(pool[k]).transpose()) / static_cast<double>(pick + 1);
        double dist = (mean - class_mean).norm();
        if (best < 0 || dist < best_dist) {
          best = static_cast<int>(k);
          best_dist = dist;
        }
      }
      used[best] = true;
      running_sum += g.features().row(pool[best]).transpose();
      selected.push_back(pool[best]);
    }
  }
  return induced_coreset(g, selected);
}

SyntheticGraph coreset_kcenter(const Graph& g, int m, std::uint64_t seed) {
  auto by_class = g.train_nodes_by_class();
  std::vector<int> alloc = coreset_allocation(g, m);
  std::vector<int> selected;
  for (int c = 0; c < g.num_classes(); ++c) {
    const auto& pool = by_class[c];
    std::mt19937_64 rng(mix_seed(seed, 900 + c));
    std::vector<double> min_dist(pool.size(), 0.0);
    std::vector<bool> used(pool.size(), false);

    int current = static_cast<int>(uniform_index(rng, pool.size()));
    used[current] = true;
    selected.push_back(pool[current]);
    for (std::size_t k = 0; k < pool.size(); ++k)
      min_dist[k] = (g.features().row(pool[k]) - g.features().row(pool[current])).norm();

    for (int pick = 1; pick < alloc[c]; ++pick) {
      int best = -1;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (used[k]) continue;
        if (best < 0 || min_dist[k] > min_dist[best]) best = static_cast<int>(k);
      }
      used[best] = true;
      selected.push_back(pool[best]);
      for (std::size_t k = 0; k < pool.size(); ++k)
        min_dist[k] = std::min(min_dist[k],
                               (g.features().row(pool[k]) - g.features().row(pool[best])).norm());
    }
  }
  return induced_coreset(g, selected);
}

namespace {

Eigen::MatrixXd condensed_prop(const SyntheticGraph& syn, const EvalOptions& opts) {
  return gcn_normalize(opts.weighted ? syn.materialize_adjacency()
                                     : syn.materialize_sparsified(opts.sparsify_threshold));
}

RelayModel train_on_condensed(const SyntheticGraph& syn, const EvalOptions& opts,
                              std::uint64_t seed) {
  RelayModel model = init_model(static_cast<int>(syn.xs.cols()), opts.hidden, syn.num_classes,
                                mix_seed(seed, 0x7ea1));
  Eigen::MatrixXd prop = condensed_prop(syn, opts);
  std::vector<int> all(syn.m());
  std::iota(all.begin(), all.end(), 0);
  AdamState ad1, ad2;
  for (int step = 0; step < opts.steps; ++step) {
    LossGrad lg = loss_and_grad(model, prop, syn.xs, syn.ys, all);
    if (opts.adam) {
      adam_step(model.w1, ad1, lg.grads.g_w1, opts.lr);
      adam_step(model.w2, ad2, lg.grads.g_w2, opts.lr);
    } else {
      model = sgd_step(model, lg.grads, opts.lr);
    }
  }
  return model;
}

double population_std(const std::vector<double>& values, double mean) {
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

void finalize(EvalReport& report) {
  report.mean =
      std::accumulate(report.per_seed.begin(), report.per_seed.end(), 0.0) / report.per_seed.size();
  report.stddev = population_std(report.per_seed, report.mean);
}

struct LinkSplit {
  std::vector<std::pair<int, int>> test_edges;
  std::vector<std::pair<int, int>> negatives;
  Eigen::MatrixXd train_adjacency;  // original minus test edges
};

LinkSplit make_link_split(const Graph& g, double test_fraction, std::uint64_t seed) {
  std::vector<std::pair<int, int>> edges;
  const auto& adj = g.adjacency();
  for (int k = 0; k < adj.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(adj, k); it; ++it)
      if (it.row() < it.col()) edges.emplace_back(static_cast<int>(it.row()),
                                                  static_cast<int>(it.col()));
  if (edges.size() < 2) throw ArgumentError("link split: graph has too few edges");
  std::sort(edges.begin(), edges.end());

  std::mt19937_64 rng(mix_seed(seed, 0x11f3));
  std::vector<std::pair<int, int>> pool = edges;
  for (std::size_t i = pool.size(); i > 1; --i)
    std::swap(pool[i - 1], pool[uniform_index(rng, i)]);
  std::size_t n_test = std::max<std::size_t>(1, static_cast<std::size_t>(test_fraction * edges.size()));

  LinkSplit split;
  split.test_edges.assign(pool.begin(), pool.begin() + n_test);

  split.train_adjacency = g.adjacency_dense();
  for (const auto& [u, v] : split.test_edges) {
    split.train_adjacency(u, v) = 0.0;
    split.train_adjacency(v, u) = 0.0;
  }

  const int n = g.num_nodes();
  std::set<std::pair<int, int>> edge_set(edges.begin(), edges.end());
  while (split.negatives.size() < split.test_edges.size()) {
    int u = static_cast<int>(uniform_index(rng, n));
    int v = static_cast<int>(uniform_index(rng, n));
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (edge_set.count({key.first, key.second})) continue;
    split.negatives.emplace_back(key.first, key.second);
  }
  return split;
}

void score_pairs(const Eigen::MatrixXd& reps, const LinkSplit& split, std::vector<int>& labels,
                 std::vector<double>& scores) {
  labels.clear();
  scores.clear();
  auto score = [&reps](const std::pair<int, int>& e) {
    double dot = reps.row(e.first).dot(reps.row(e.second));
    return 1.0 / (1.0 + std::exp(-dot));
  };
  for (const auto& e : split.test_edges) {
    labels.push_back(1);
    scores.push_back(score(e));
  }
  for (const auto& e : split.negatives) {
    labels.push_back(0);
    scores.push_back(score(e));
  }
}

}  // namespace

EvalReport eval_node_classification(const SyntheticGraph& condensed, const Graph& g,
                                    const std::vector<std::uint64_t>& seeds,
                                    const EvalOptions& opts) {
  if (condensed.xs.cols() != g.feature_dim())
    throw StructuralError(
        "eval: feature dimensions differ; use the transfer protocol (linear input adapter)");
  if (seeds.empty()) throw ArgumentError("eval: need at least one seed");
  if (g.splits().test.empty()) throw ArgumentError("eval: target graph has no test split");

  Eigen::MatrixXd prop_g = gcn_normalize(g);
  EvalReport report;
  report.protocol = "single-task";
  report.metric = "accuracy";
  report.bundle_hash = condensed_hash(condensed);
  for (std::uint64_t seed : seeds) {
    RelayModel model = train_on_condensed(condensed, opts, seed);
    Eigen::MatrixXd logits = forward(model, prop_g, g.features()).logits;
    long correct = 0;
    for (int i : g.splits().test) {
      int arg = 0;
      logits.row(i).maxCoeff(&arg);
      correct += arg == g.labels()[i];
    }
    report.per_seed.push_back(static_cast<double>(correct) / g.splits().test.size());
  }
  finalize(report);
  return report;
}

EvalReport eval_link_prediction(const SyntheticGraph& condensed, const Graph& g,
                                const std::vector<std::uint64_t>& seeds, const EvalOptions& opts) {
  if (condensed.xs.cols() != g.feature_dim())
    throw StructuralError(
        "eval: feature dimensions differ; use the transfer protocol (linear input adapter)");
  if (seeds.empty()) throw ArgumentError("eval: need at least one seed");

  LinkSplit split = make_link_split(g, opts.link_test_fraction, opts.link_split_seed);
  Eigen::MatrixXd prop_train = gcn_normalize(split.train_adjacency);

  EvalReport report;
  report.protocol = "cross-task";
  report.metric = "accuracy";
  report.bundle_hash = condensed_hash(condensed);
  report.extra["auc"] = {};
  report.extra["ap"] = {};
  for (std::uint64_t seed : seeds) {
    RelayModel model = train_on_condensed(condensed, opts, seed);
    Eigen::MatrixXd reps = forward(model, prop_train, g.features()).logits;
    std::vector<int> labels;
    std::vector<double> scores;
    score_pairs(reps, split, labels, scores);

    long correct = 0;
    for (std::size_t k = 0; k < labels.size(); ++k)
      correct += (scores[k] > 0.5 ? 1 : 0) == labels[k];
    report.per_seed.push_back(static_cast<double>(correct) / labels.size());
    report.extra["auc"].push_back(auc_rank(labels, scores));
    report.extra["ap"].push_back(average_precision(labels, scores));
  }
  finalize(report);
  return report;
}

EvalReport eval_transfer(const SyntheticGraph& condensed_src, const Graph& g_target,
                         const std::vector<std::uint64_t>& seeds, bool link,
                         const EvalOptions& opts) {
  if (seeds.empty()) throw ArgumentError("eval: need at least one seed");
  const int d_src = static_cast<int>(condensed_src.xs.cols());
  const int d_tgt = g_target.feature_dim();
  const bool adapter = d_src != d_tgt;
  if (g_target.splits().train.empty())
    throw ArgumentError("eval_transfer: target graph has no train split");
  if (!link && g_target.splits().test.empty())
    throw ArgumentError("eval_transfer: target graph has no test split");

  Eigen::MatrixXd prop_t = gcn_normalize(g_target);
  LinkSplit split;
  if (link) {
    split = make_link_split(g_target, opts.link_test_fraction, opts.link_split_seed);
    prop_t = gcn_normalize(split.train_adjacency);
  }
  const Eigen::MatrixXd px = prop_t * g_target.features();  // hoisted out of the probe loop

  EvalReport report;
  report.protocol = adapter ? (link ? "cross-both" : "cross-dataset")
                            : (link ? "cross-task" : "cross-dataset");
  report.metric = link ? "accuracy" : "accuracy";
  report.bundle_hash = condensed_hash(condensed_src);
  report.adapter_engaged = adapter;
  if (link) {
    report.extra["auc"] = {};
    report.extra["ap"] = {};
  }

  for (std::uint64_t seed : seeds) {
    RelayModel body = train_on_condensed(condensed_src, opts, seed);  // W1 frozen below

    Eigen::MatrixXd adapter_w;
    if (adapter) {
      std::mt19937_64 rng(mix_seed(seed, 0xada7));
      adapter_w.resize(d_tgt, d_src);
      const double s = 1.0 / std::sqrt(static_cast<double>(d_tgt));
      for (int i = 0; i < d_tgt; ++i)
        for (int j = 0; j < d_src; ++j) adapter_w(i, j) = uniform_pm(rng, s);
    } else {
      adapter_w = Eigen::MatrixXd::Identity(d_tgt, d_src);
    }

    RelayModel probe_model = init_model(d_src, opts.hidden, g_target.num_classes(),
                                        mix_seed(seed, 0x9a0b));
    Eigen::MatrixXd probe = probe_model.w2;  // h x C_target

    AdamState ad_probe, ad_adapter;
    for (int step = 0; step < opts.probe_steps; ++step) {
      Eigen::MatrixXd pre = px * (adapter_w * body.w1);
      Eigen::MatrixXd hid = pre.cwiseMax(0.0);
      Eigen::MatrixXd z2 = prop_t * hid;
      Eigen::MatrixXd logits = z2 * probe;

      Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(g_target.num_nodes(),
                                                      g_target.num_classes());
      const auto& mask = g_target.splits().train;
      const double w = 1.0 / static_cast<double>(mask.size());
      for (int i : mask) {
        const auto row = logits.row(i);
        double mx = row.maxCoeff();
        Eigen::RowVectorXd ex = (row.array() - mx).exp();
        dlogits.row(i) += w * (ex / ex.sum());
        dlogits(i, g_target.labels()[i]) -= w;
      }
      Eigen::MatrixXd d_probe = z2.transpose() * dlogits;
      if (adapter) {
        Eigen::MatrixXd dhid = prop_t.transpose() * (dlogits * probe.transpose());
        Eigen::MatrixXd dpre = ((pre.array() > 0.0).cast<double>() * dhid.array()).matrix();
        Eigen::MatrixXd d_adapter = (px.transpose() * dpre) * body.w1.transpose();
        if (opts.adam)
          adam_step(adapter_w, ad_adapter, d_adapter, opts.probe_lr);
        else
          adapter_w -= opts.probe_lr * d_adapter;
      }
      if (opts.adam)
        adam_step(probe, ad_probe, d_probe, opts.probe_lr);
      else
        probe -= opts.probe_lr * d_probe;
    }

    Eigen::MatrixXd hid = (px * (adapter_w * body.w1)).cwiseMax(0.0);
    Eigen::MatrixXd reps = (prop_t * hid) * probe;
    if (link) {
      std::vector<int> labels;
      std::vector<double> scores;
      score_pairs(reps, split, labels, scores);
      long correct = 0;
      for (std::size_t k = 0; k < labels.size(); ++k)
        correct += (scores[k] > 0.5 ? 1 : 0) == labels[k];
      report.per_seed.push_back(static_cast<double>(correct) / labels.size());
      report.extra["auc"].push_back(auc_rank(labels, scores));
      report.extra["ap"].push_back(average_precision(labels, scores));
    } else {
      long correct = 0;
      for (int i : g_target.splits().test) {
        int arg = 0;
        reps.row(i).maxCoeff(&arg);
        correct += arg == g_target.labels()[i];
      }
      report.per_seed.push_back(static_cast<double>(correct) / g_target.splits().test.size());
    }
  }
  finalize(report);
  return report;
}

std::string EvalReport::to_json() const {
  json j;
  j["protocol"] = protocol;
  j["metric"] = metric;
  j["mean"] = mean;
  j["std"] = stddev;
  j["per_seed"] = per_seed;
  j["bundle_hash"] = bundle_hash;
  j["adapter_engaged"] = adapter_engaged;
  for (const auto& [name, values] : extra) j["extra"][name] = values;
  return j.dump(2) + "\n";
}

std::string EvalReport::to_tsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "protocol\tmetric\tmean\tstd\tseeds\tbundle_hash\n";
  out << protocol << "\t" << metric << "\t" << mean << "\t" << stddev << "\t" << per_seed.size()
      << "\t" << bundle_hash << "\n";
  return out.str();
}

}  // namespace tgcc
