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
#include "tgcc/condenser.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "tgcc/rng.hpp"

namespace tgcc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Shared forward cache for per-class gradient extraction; logits = z2 * w2
// with z2 = P relu(P X W1).
struct ForwardCache {
  Eigen::MatrixXd pre;     // n x h, pre-activation
  Eigen::MatrixXd hidden;  // n x h
  Eigen::MatrixXd z2;      // n x h
  Eigen::MatrixXd logits;  // n x C
};

ForwardCache run_forward(const RelayModel& relay, const Eigen::MatrixXd& prop,
                         const Eigen::MatrixXd& x) {
  if (x.cols() != relay.w1.rows())
    throw StructuralError("condensation: feature dimension does not match relay W1");
  ForwardCache c;
  c.pre = prop * (x * relay.w1);
  c.hidden = c.pre.cwiseMax(0.0);
  c.z2 = prop * c.hidden;
  c.logits = c.z2 * relay.w2;
  return c;
}

// dL/dlogits for mean cross-entropy on `mask`, nonzero on masked rows only.
Eigen::MatrixXd masked_dlogits(const ForwardCache& cache, const Eigen::VectorXi& y,
                               const std::vector<int>& mask) {
  const int num_classes = static_cast<int>(cache.logits.cols());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cache.logits.rows(), num_classes);
  const double w = 1.0 / static_cast<double>(mask.size());
  for (int i : mask) {
    const auto row = cache.logits.row(i);
    double mx = row.maxCoeff();
    Eigen::RowVectorXd ex = (row.array() - mx).exp();
    g.row(i) += w * (ex / ex.sum());
    g(i, y[i]) -= w;
  }
  return g;
}

// Gradient set for one masked class, exploiting that dlogits has few
// nonzero rows: P^T R is assembled from the masked rows only.
GradientSet class_grads(const RelayModel& relay, const Eigen::MatrixXd& prop,
                        const Eigen::MatrixXd& x, const ForwardCache& cache,
                        const Eigen::MatrixXd& dlogits, const std::vector<int>& rows) {
  const int n = static_cast<int>(prop.rows());
  const int h = relay.hidden;

  GradientSet g;
  g.g_w2 = cache.z2.transpose() * dlogits;

  Eigen::MatrixXd r_rows(rows.size(), h);
  Eigen::MatrixXd p_rows(rows.size(), n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    r_rows.row(k) = dlogits.row(rows[k]) * relay.w2.transpose();
    p_rows.row(k) = prop.row(rows[k]);
  }
  Eigen::MatrixXd dhid = p_rows.transpose() * r_rows;  // = P^T (dlogits W2^T)
  Eigen::MatrixXd dpre = ((cache.pre.array() > 0.0).cast<double>() * dhid.array()).matrix();
  g.g_w1 = x.transpose() * (prop.transpose() * dpre);
  return g;
}

// (1 - cosine) distance between columns of `fixed` and `var`, plus the
// derivative with respect to `var`. Zero-norm handling: both zero -> 0,
// one zero -> 1, gradient 0 in either case.
double cosine_distance_cols(const Eigen::MatrixXd& fixed, const Eigen::MatrixXd& var,
                            Eigen::MatrixXd* d_var) {
  if (fixed.rows() != var.rows() || fixed.cols() != var.cols())
    throw StructuralError("grad_distance: gradient shapes differ");
  double dist = 0.0;
  for (int j = 0; j < var.cols(); ++j) {
    double nu = fixed.col(j).norm();
    double nv = var.col(j).norm();
    if (nu == 0.0 && nv == 0.0) continue;
    if (nu == 0.0 || nv == 0.0) {
      dist += 1.0;
      continue;
    }
    double dot = fixed.col(j).dot(var.col(j));
    dist += 1.0 - dot / (nu * nv);
    if (d_var)
      d_var->col(j) -= fixed.col(j) / (nu * nv) - dot / (nu * nv * nv * nv) * var.col(j);
  }
  return dist;
}

}  // namespace

Eigen::MatrixXd SyntheticGraph::materialize_adjacency() const {
  if (mode == AdjacencyMode::fixed) return adj_fixed;
  Eigen::MatrixXd a = adj_logits.unaryExpr([](double v) { return sigmoid(v); });
  a.diagonal().setZero();
  return a;
}

Eigen::MatrixXd SyntheticGraph::materialize_sparsified(double threshold) const {
  Eigen::MatrixXd a = materialize_adjacency();
  return (a.array() >= threshold).cast<double>().matrix();
}

std::vector<std::vector<int>> SyntheticGraph::nodes_by_class() const {
  std::vector<std::vector<int>> buckets(num_classes);
  for (int i = 0; i < ys.size(); ++i) buckets[ys[i]].push_back(i);
  return buckets;
}

std::vector<int> SyntheticGraph::class_histogram() const {
  std::vector<int> hist(num_classes, 0);
  for (int i = 0; i < ys.size(); ++i) ++hist[ys[i]];
  return hist;
}

std::vector<int> allocate_per_class(const std::vector<int>& counts, int m, int num_classes) {
  if (m < num_classes)
    throw ArgumentError("allocate_per_class: m must be at least the class count");
  const double total = std::max(1, std::accumulate(counts.begin(), counts.end(), 0));

  std::vector<int> alloc(num_classes, 0);
  std::vector<std::pair<double, int>> remainders;  // (-remainder, class) for stable sort
  int assigned = 0;
  for (int c = 0; c < num_classes; ++c) {
    double quota = m * counts[c] / total;
    alloc[c] = static_cast<int>(std::floor(quota));
    assigned += alloc[c];
    remainders.push_back({-(quota - alloc[c]), c});
  }
  std::sort(remainders.begin(), remainders.end());
  for (int k = 0; assigned < m; ++k) {
    ++alloc[remainders[k % num_classes].second];
    ++assigned;
  }
  // Enforce the per-class floor, taking from the largest buckets.
  for (int c = 0; c < num_classes; ++c) {
    while (alloc[c] == 0) {
      int donor = static_cast<int>(std::max_element(alloc.begin(), alloc.end()) - alloc.begin());
      if (alloc[donor] <= 1) throw ArgumentError("allocate_per_class: m too small for the floor");
      --alloc[donor];
      ++alloc[c];
    }
  }
  return alloc;
}

SyntheticGraph init_synthetic(const Graph& g, double r, std::uint64_t seed) {
  if (r <= 0.0 || r >= 1.0) throw ArgumentError("init_synthetic: r must be in (0, 1)");
  const int num_classes = g.num_classes();
  const long rounded = std::lround(r * g.num_nodes());
  const int m = static_cast<int>(std::max<long>(num_classes, rounded));
  if (rounded < num_classes)
    std::cerr << "init_synthetic: round(r*N) = " << rounded << " below class count; raising m to "
              << num_classes << "\n";

  auto train_by_class = g.train_nodes_by_class();
  std::vector<int> counts(num_classes);
  for (int c = 0; c < num_classes; ++c) counts[c] = static_cast<int>(train_by_class[c].size());
  std::vector<int> alloc = allocate_per_class(counts, m, num_classes);

  // Fallback pools for classes absent from the train split.
  std::vector<std::vector<int>> pools = train_by_class;
  for (int c = 0; c < num_classes; ++c)
    if (pools[c].empty())
      for (int i = 0; i < g.num_nodes(); ++i)
        if (g.labels()[i] == c) pools[c].push_back(i);

  SyntheticGraph syn;
  syn.num_classes = num_classes;
  syn.ys.resize(m);
  syn.xs.resize(m, g.feature_dim());
  int row = 0;
  for (int c = 0; c < num_classes; ++c) {
    std::mt19937_64 rng(mix_seed(seed, 1000 + c));
    std::vector<int> order = pools[c];
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (int k = 0; k < alloc[c]; ++k) {
      int src = order[k % order.size()];  // wraps around (= replacement) when needed
      syn.ys[row] = c;
      syn.xs.row(row) = g.features().row(src);
      ++row;
    }
  }

  std::mt19937_64 rng(mix_seed(seed, 7));
  syn.adj_logits = Eigen::MatrixXd::Constant(m, m, -3.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double v = -3.0 + uniform_pm(rng, 0.01);
      syn.adj_logits(i, j) = v;
      syn.adj_logits(j, i) = v;
    }
  syn.mode = SyntheticGraph::AdjacencyMode::logits;
  return syn;
}

double grad_distance(const GradientSet& ga, const GradientSet& gb) {
  return cosine_distance_cols(ga.g_w1, gb.g_w1, nullptr) +
         cosine_distance_cols(ga.g_w2, gb.g_w2, nullptr);
}

MatchView make_match_view(const Graph& g) {
  MatchView view;
  view.prop = gcn_normalize(g);
  view.features = g.features();
  view.labels = g.labels();
  view.masks_by_class = g.train_nodes_by_class();
  return view;
}

MatchView make_match_view(const Graph& g, const Eigen::MatrixXd& v_adjacency) {
  MatchView view = make_match_view(g);
  view.prop = gcn_normalize(v_adjacency);
  return view;
}

Eigen::MatrixXd gcn_normalize_vjp(const Eigen::MatrixXd& adjacency,
                                  const Eigen::MatrixXd& d_prop) {
  const int n = static_cast<int>(adjacency.rows());
  if (d_prop.rows() != n || d_prop.cols() != n)
    throw StructuralError("gcn_normalize_vjp: shape mismatch");
  Eigen::MatrixXd with_loops = adjacency;
  with_loops.diagonal().array() += 1.0;
  Eigen::VectorXd deg = with_loops.rowwise().sum();
  Eigen::VectorXd s = deg.array().rsqrt();

  // dP_ij/dA_kl has a direct term s_k s_l and a row-degree term shared by
  // every entry of row k.
  Eigen::MatrixXd sym = d_prop + d_prop.transpose();
  Eigen::VectorXd row_coef =
      (0.5 * deg.array().pow(-1.5) * (sym.cwiseProduct(with_loops) * s).array()).matrix();
  Eigen::MatrixXd da = s.asDiagonal() * d_prop * s.asDiagonal();
  da.colwise() -= row_coef;
  da.diagonal().setZero();
  return da;
}

CondensationGrad condensation_loss(const MatchView& real, const MatchView& aug,
                                   const SyntheticGraph& syn, const RelayModel& relay) {
  if (real.features.cols() != syn.xs.cols() || aug.features.cols() != syn.xs.cols())
    throw StructuralError("condensation_loss: feature dimensions differ");

  const int m = syn.m();
  const int h = relay.hidden;
  const Eigen::MatrixXd adj_syn = syn.materialize_adjacency();
  const Eigen::MatrixXd prop_syn = gcn_normalize(adj_syn);

  ForwardCache cache_real = run_forward(relay, real.prop, real.features);
  ForwardCache cache_aug = run_forward(relay, aug.prop, aug.features);
  ForwardCache cache_syn = run_forward(relay, prop_syn, syn.xs);
  const Eigen::ArrayXXd relu_mask = (cache_syn.pre.array() > 0.0).cast<double>();
  const Eigen::MatrixXd xw1 = syn.xs * relay.w1;

  auto syn_masks = syn.nodes_by_class();

  CondensationGrad out;
  out.d_xs = Eigen::MatrixXd::Zero(m, syn.xs.cols());
  Eigen::MatrixXd d_prop = Eigen::MatrixXd::Zero(m, m);

  for (int c = 0; c < syn.num_classes; ++c) {
    if (syn_masks[c].empty() || real.masks_by_class[c].empty() || aug.masks_by_class[c].empty())
      continue;

    Eigen::MatrixXd dl_real = masked_dlogits(cache_real, real.labels, real.masks_by_class[c]);
    GradientSet g_real = class_grads(relay, real.prop, real.features, cache_real, dl_real,
                                     real.masks_by_class[c]);
    Eigen::MatrixXd dl_aug = masked_dlogits(cache_aug, aug.labels, aug.masks_by_class[c]);
    GradientSet g_aug =
        class_grads(relay, aug.prop, aug.features, cache_aug, dl_aug, aug.masks_by_class[c]);

    Eigen::MatrixXd dl_syn = masked_dlogits(cache_syn, syn.ys, syn_masks[c]);
    Eigen::MatrixXd r_syn = dl_syn * relay.w2.transpose();               // m x h
    Eigen::MatrixXd q_syn = ((prop_syn.transpose() * r_syn).array() * relu_mask).matrix();  // m x h
    GradientSet g_syn;
    g_syn.g_w2 = cache_syn.z2.transpose() * dl_syn;
    g_syn.g_w1 = syn.xs.transpose() * (prop_syn.transpose() * q_syn);

    Eigen::MatrixXd gamma1 = Eigen::MatrixXd::Zero(g_syn.g_w1.rows(), h);
    Eigen::MatrixXd gamma2 = Eigen::MatrixXd::Zero(h, g_syn.g_w2.cols());
    out.loss += cosine_distance_cols(g_real.g_w1, g_syn.g_w1, &gamma1);
    out.loss += cosine_distance_cols(g_real.g_w2, g_syn.g_w2, &gamma2);
    out.loss += cosine_distance_cols(g_aug.g_w1, g_syn.g_w1, &gamma1);
    out.loss += cosine_distance_cols(g_aug.g_w2, g_syn.g_w2, &gamma2);

    // Reverse pass through the synthetic gradient computation.
    // g_w1 = X^T P^T Q with Q = (P^T (G W2^T)) .* relu_mask; g_w2 = Z2^T G.
    Eigen::MatrixXd t_q = prop_syn * (syn.xs * gamma1);                   // adjoint at Q
    Eigen::MatrixXd t_q_masked = (t_q.array() * relu_mask).matrix();
    Eigen::MatrixXd e_g = prop_syn * t_q_masked * relay.w2               // adjoint at G
                          + cache_syn.z2 * gamma2;

    // Through the softmax Jacobian, restricted to the masked rows.
    Eigen::MatrixXd f_o = Eigen::MatrixXd::Zero(m, e_g.cols());
    const double w = 1.0 / static_cast<double>(syn_masks[c].size());
    for (int i : syn_masks[c]) {
      const auto row = cache_syn.logits.row(i);
      double mx = row.maxCoeff();
      Eigen::RowVectorXd probs = (row.array() - mx).exp();
      probs /= probs.sum();
      double dot = probs.dot(e_g.row(i));
      f_o.row(i) = w * (probs.array() * e_g.row(i).array() - dot * probs.array());
    }

    Eigen::MatrixXd t_z2 = dl_syn * gamma2.transpose() + f_o * relay.w2.transpose();
    Eigen::MatrixXd a_u = ((prop_syn.transpose() * t_z2).array() * relu_mask).matrix();

    out.d_xs += (prop_syn.transpose() * q_syn) * gamma1.transpose() +
                (prop_syn.transpose() * a_u) * relay.w1.transpose();

    d_prop += q_syn * (syn.xs * gamma1).transpose();
    d_prop += r_syn * t_q_masked.transpose();
    d_prop += t_z2 * cache_syn.hidden.transpose();
    d_prop += a_u * xw1.transpose();
  }

  if (syn.learnable_adjacency())
    out.d_logits = adjacency_grad_to_logits(syn, gcn_normalize_vjp(adj_syn, d_prop));
  return out;
}

Eigen::MatrixXd adjacency_grad_to_logits(const SyntheticGraph& syn, const Eigen::MatrixXd& d_adj) {
  const int m = syn.m();
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      double sig = sigmoid(syn.adj_logits(i, j));
      d_logits(i, j) = (d_adj(i, j) + d_adj(j, i)) * sig * (1.0 - sig);
    }
  return d_logits;
}

void adam_step(Eigen::MatrixXd& param, AdamState& state, const Eigen::MatrixXd& grad, double lr) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  if (state.t == 0) {
    state.m1 = Eigen::MatrixXd::Zero(param.rows(), param.cols());
    state.m2 = Eigen::MatrixXd::Zero(param.rows(), param.cols());
  }
  ++state.t;
  state.m1 = kBeta1 * state.m1 + (1.0 - kBeta1) * grad;
  state.m2 = kBeta2 * state.m2 + (1.0 - kBeta2) * grad.cwiseProduct(grad);
  double c1 = 1.0 - std::pow(kBeta1, state.t);
  double c2 = 1.0 - std::pow(kBeta2, state.t);
  param.array() -=
      lr * (state.m1.array() / c1) / ((state.m2.array() / c2).sqrt() + kEps);
}

void outer_step(MatchState& state, const MatchView& real, const MatchView& aug,
                SyntheticGraph& syn, const SynLearningRates& lrs, int inner_steps,
                const AuxGrad& aux, double matching_weight) {
  if (state.step >= state.horizon)
    throw StateError("outer_step: step " + std::to_string(state.step) + " at horizon " +
                     std::to_string(state.horizon));

  CondensationGrad cg = condensation_loss(real, aug, syn, state.relay);

  Eigen::MatrixXd d_xs = matching_weight * cg.d_xs;
  if (aux.d_xs) d_xs += *aux.d_xs;
  if (lrs.lr_x > 0.0) {
    if (lrs.adam)
      adam_step(syn.xs, state.adam_x, d_xs, lrs.lr_x);
    else
      syn.xs -= lrs.lr_x * d_xs;
  }

  if (syn.learnable_adjacency() && lrs.lr_adj > 0.0) {
    Eigen::MatrixXd d_logits = matching_weight * cg.d_logits;
    if (aux.d_logits) d_logits += *aux.d_logits;
    if (lrs.adam)
      adam_step(syn.adj_logits, state.adam_adj, d_logits, lrs.lr_adj);
    else
      syn.adj_logits -= lrs.lr_adj * d_logits;
    syn.adj_logits = 0.5 * (syn.adj_logits + syn.adj_logits.transpose()).eval();
  }

  // Relay inner updates use the synthetic cross-entropy only.
  if (inner_steps > 0) {
    Eigen::MatrixXd prop_syn = gcn_normalize(syn.materialize_adjacency());
    std::vector<int> all(syn.m());
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < inner_steps; ++k) {
      LossGrad lg = loss_and_grad(state.relay, prop_syn, syn.xs, syn.ys, all);
      state.relay = sgd_step(state.relay, lg.grads, lrs.lr_relay);
    }
  }

  state.trace.push_back(cg.loss);
  ++state.step;
}

}  // namespace tgcc
