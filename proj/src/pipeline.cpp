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
#include "tgcc/pipeline.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "tgcc/causal.hpp"
#include "tgcc/contrast.hpp"
#include "tgcc/intervention.hpp"
#include "tgcc/rng.hpp"
#include "tgcc/spectral.hpp"

namespace tgcc {

using nlohmann::json;

void TgccConfig::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (v < 0.0) throw ArgumentError(std::string("config: ") + name + " must be >= 0");
  };
  nonneg(alpha, "alpha");
  nonneg(beta, "beta");
  nonneg(gamma, "gamma");
  nonneg(delta, "delta");
  nonneg(eta, "eta");
  nonneg(lambda, "lambda");
  nonneg(rho, "rho");
  if (epsilon <= 0.0) throw ArgumentError("config: epsilon must be > 0");
  if (ratio <= 0.0 || ratio >= 1.0) throw ArgumentError("config: ratio must be in (0, 1)");
  if (horizon < 1 || inner_steps < 0 || relay_inits < 1)
    throw ArgumentError("config: horizon and relay_inits must be >= 1, inner_steps >= 0");
  if (hidden < 1) throw ArgumentError("config: hidden must be >= 1");
  if (temperature <= 0.0) throw ArgumentError("config: temperature must be > 0");
  if (kappas.empty()) throw ArgumentError("config: kappas must not be empty");
  for (double k : kappas)
    if (k < 0.0 || k > 1.0) throw ArgumentError("config: kappa values must lie in [0, 1]");
  if (intervention_every < 1) throw ArgumentError("config: intervention_every must be >= 1");
  if (sinkhorn_iters < 1) throw ArgumentError("config: sinkhorn_iters must be >= 1");
  if (eval_seeds.empty()) throw ArgumentError("config: eval_seeds must not be empty");
}

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

TgccConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(DataError::Code::parse, std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError(DataError::Code::parse, "config: top level must be an object");

  static const std::vector<std::string> known = {
      "alpha",        "beta",          "gamma",        "lambda",        "delta",
      "eta",          "epsilon",       "rho",          "sinkhorn_iters", "sinkhorn_tol",
      "intervention_every", "lr_theta", "kappas",      "temperature",   "ratio",
      "horizon",      "inner_steps",   "relay_inits",  "hidden",        "lr_x",
      "lr_adj",       "lr_relay",      "lr_encoder",   "syn_adam",      "shared_encoder",
      "seed",         "eval_seeds",    "eval_steps",   "eval_lr",       "eval_weighted",
      "sparsify_threshold", "verbose"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw DataError(DataError::Code::parse, "config: unknown key '" + it.key() + "'");

  TgccConfig cfg;
  read_key(j, "alpha", cfg.alpha);
  read_key(j, "beta", cfg.beta);
  read_key(j, "gamma", cfg.gamma);
  read_key(j, "lambda", cfg.lambda);
  read_key(j, "delta", cfg.delta);
  read_key(j, "eta", cfg.eta);
  read_key(j, "epsilon", cfg.epsilon);
  read_key(j, "rho", cfg.rho);
  read_key(j, "sinkhorn_iters", cfg.sinkhorn_iters);
  read_key(j, "sinkhorn_tol", cfg.sinkhorn_tol);
  read_key(j, "intervention_every", cfg.intervention_every);
  read_key(j, "lr_theta", cfg.lr_theta);
  read_key(j, "kappas", cfg.kappas);
  read_key(j, "temperature", cfg.temperature);
  read_key(j, "ratio", cfg.ratio);
  read_key(j, "horizon", cfg.horizon);
  read_key(j, "inner_steps", cfg.inner_steps);
  read_key(j, "relay_inits", cfg.relay_inits);
  read_key(j, "hidden", cfg.hidden);
  read_key(j, "lr_x", cfg.lr_x);
  read_key(j, "lr_adj", cfg.lr_adj);
  read_key(j, "lr_relay", cfg.lr_relay);
  read_key(j, "lr_encoder", cfg.lr_encoder);
  read_key(j, "syn_adam", cfg.syn_adam);
  read_key(j, "shared_encoder", cfg.shared_encoder);
  read_key(j, "seed", cfg.seed);
  read_key(j, "eval_seeds", cfg.eval_seeds);
  read_key(j, "eval_steps", cfg.eval_steps);
  read_key(j, "eval_lr", cfg.eval_lr);
  read_key(j, "eval_weighted", cfg.eval_weighted);
  read_key(j, "sparsify_threshold", cfg.sparsify_threshold);
  read_key(j, "verbose", cfg.verbose);
  cfg.validate();
  return cfg;
}

std::string config_to_json(const TgccConfig& cfg) {
  json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["gamma"] = cfg.gamma;
  j["lambda"] = cfg.lambda;
  j["delta"] = cfg.delta;
  j["eta"] = cfg.eta;
  j["epsilon"] = cfg.epsilon;
  j["rho"] = cfg.rho;
  j["sinkhorn_iters"] = cfg.sinkhorn_iters;
  j["sinkhorn_tol"] = cfg.sinkhorn_tol;
  j["intervention_every"] = cfg.intervention_every;
  j["lr_theta"] = cfg.lr_theta;
  j["kappas"] = cfg.kappas;
  j["temperature"] = cfg.temperature;
  j["ratio"] = cfg.ratio;
  j["horizon"] = cfg.horizon;
  j["inner_steps"] = cfg.inner_steps;
  j["relay_inits"] = cfg.relay_inits;
  j["hidden"] = cfg.hidden;
  j["lr_x"] = cfg.lr_x;
  j["lr_adj"] = cfg.lr_adj;
  j["lr_relay"] = cfg.lr_relay;
  j["lr_encoder"] = cfg.lr_encoder;
  j["syn_adam"] = cfg.syn_adam;
  j["shared_encoder"] = cfg.shared_encoder;
  j["seed"] = cfg.seed;
  j["eval_seeds"] = cfg.eval_seeds;
  j["eval_steps"] = cfg.eval_steps;
  j["eval_lr"] = cfg.eval_lr;
  j["eval_weighted"] = cfg.eval_weighted;
  j["sparsify_threshold"] = cfg.sparsify_threshold;
  j["verbose"] = cfg.verbose;
  return j.dump(2) + "\n";
}

namespace {

struct EncoderBranch {
  Eigen::MatrixXd pre;        // n x h
  Eigen::MatrixXd embedding;  // n x h, relu(pre)
};

EncoderBranch encode(const Eigen::MatrixXd& prop, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& w1) {
  EncoderBranch b;
  b.pre = prop * (x * w1);
  b.embedding = b.pre.cwiseMax(0.0);
  return b;
}

// dL/dW1 for a branch given dL/d(embedding).
Eigen::MatrixXd encoder_w1_grad(const EncoderBranch& b, const Eigen::MatrixXd& prop,
                                const Eigen::MatrixXd& x, const Eigen::MatrixXd& d_embed) {
  Eigen::MatrixXd d_pre = ((b.pre.array() > 0.0).cast<double>() * d_embed.array()).matrix();
  return x.transpose() * (prop.transpose() * d_pre);
}

void check_finite(double v, const char* term, int epoch) {
  if (!std::isfinite(v))
    throw NumericError(std::string("run_condense: ") + term + " became non-finite at epoch " +
                       std::to_string(epoch));
}

}  // namespace

RunArtifacts run_condense(const Graph& g, const TgccConfig& cfg) {
  cfg.validate();

  const Eigen::MatrixXd adj = g.adjacency_dense();
  const Eigen::MatrixXd lap = normalized_laplacian(adj);
  const auto [marg_a, marg_b] = degree_marginals(adj);
  const double budget = cfg.rho * std::max(adj.sum(), 1.0);

  RunArtifacts artifacts;
  artifacts.seed = cfg.seed;
  artifacts.config_json = config_to_json(cfg);

  SyntheticGraph syn = init_synthetic(g, cfg.ratio, mix_seed(cfg.seed, 13));
  RelayModel encoder =
      init_model(g.feature_dim(), cfg.hidden, g.num_classes(), mix_seed(cfg.seed, 17));

  // Theta starts as small uniform noise and is pushed uphill on the
  // matching objective once per refresh.
  Eigen::MatrixXd theta(g.num_nodes(), g.num_nodes());
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, 11));
    for (int j = 0; j < theta.cols(); ++j)
      for (int i = 0; i < theta.rows(); ++i) theta(i, j) = uniform_pm(rng, 0.01);
  }

  MatchView real = make_match_view(g);
  MatchView aug;  // rebuilt at every intervention refresh
  InterventionPlan plan;
  plan.epsilon = cfg.epsilon;
  plan.iters = cfg.sinkhorn_iters;
  plan.tol = cfg.sinkhorn_tol;
  std::vector<Eigen::MatrixXd> neg_props;  // gcn propagation of each negative
  bool have_plan = false;

  MatchState state;
  state.horizon = cfg.horizon;

  const int total_epochs = cfg.relay_inits * cfg.horizon;
  SynLearningRates lrs{cfg.lr_x, cfg.lr_adj, cfg.lr_relay, cfg.syn_adam};

  for (int epoch = 0; epoch < total_epochs; ++epoch) {
    if (epoch % cfg.horizon == 0) {
      state.relay = init_model(g.feature_dim(), cfg.hidden, g.num_classes(),
                               mix_seed(cfg.seed, 100 + epoch / cfg.horizon));
      state.step = 0;
    }

    // (1) refresh Theta, the edit plans and the augmented view.
    if (epoch % cfg.intervention_every == 0 || !have_plan) {
      if (have_plan)
        theta = update_theta(theta, theta_objective_grad(theta, lap, plan.delta_plus),
                             cfg.lr_theta);
      plan.theta = theta;
      plan.delta_plus = solve_delta_plus(adj, lap, theta, cfg.epsilon, marg_a, marg_b,
                                         cfg.sinkhorn_iters, cfg.sinkhorn_tol);
      plan.delta_minus = solve_delta_minus(adj, lap, theta, cfg.epsilon, cfg.sinkhorn_iters);
      Eigen::MatrixXd v_adj = intervene(adj, plan, budget);
      aug = make_match_view(g, v_adj);

      SpectralDecomposition dec = spectral_decompose(normalized_laplacian(v_adj));
      Eigen::VectorXd v_deg = v_adj.rowwise().sum();
      neg_props.clear();
      for (double kappa : cfg.kappas)
        neg_props.push_back(gcn_normalize(build_negative_from(dec, v_deg, kappa).adjacency_neg));
      have_plan = true;
    }

    Eigen::MatrixXd& enc_w1 = cfg.shared_encoder ? state.relay.w1 : encoder.w1;

    // (2) one encoder step on the invariance loss between the two views.
    EncoderBranch branch_a = encode(real.prop, g.features(), enc_w1);
    EncoderBranch branch_v = encode(aug.prop, g.features(), enc_w1);
    CausalLossGrad causal = causal_loss_grad(branch_a.embedding, branch_v.embedding, cfg.alpha,
                                             cfg.beta, cfg.gamma, cfg.lambda);
    check_finite(causal.terms.total, "L_causal", epoch);
    if (cfg.lr_encoder > 0.0) {
      Eigen::MatrixXd d_w1 = encoder_w1_grad(branch_a, real.prop, g.features(), causal.d_za) +
                             encoder_w1_grad(branch_v, aug.prop, g.features(), causal.d_zv);
      enc_w1 -= cfg.lr_encoder * d_w1;
    }

    // (3) contrastive injection: condensed readout vs the invariant-feature
    // readout, against spectrally perturbed negatives.
    Eigen::MatrixXd adj_syn = syn.materialize_adjacency();
    Eigen::MatrixXd prop_syn = gcn_normalize(adj_syn);
    EncoderBranch branch_syn = encode(prop_syn, syn.xs, enc_w1);
    branch_v = encode(aug.prop, g.features(), enc_w1);  // refresh after the encoder step
    std::vector<EncoderBranch> branch_negs;
    std::vector<Eigen::VectorXd> neg_readouts;
    for (const auto& prop_neg : neg_props) {
      branch_negs.push_back(encode(prop_neg, g.features(), enc_w1));
      neg_readouts.push_back(readout(branch_negs.back().embedding));
    }
    InfoNceGrad nce = infonce_grad(readout(branch_syn.embedding), readout(branch_v.embedding),
                                   neg_readouts, cfg.temperature);
    check_finite(nce.loss, "L_InfoNCE", epoch);

    const int n = g.num_nodes();
    const int m = syn.m();
    Eigen::MatrixXd d_embed_syn =
        Eigen::VectorXd::Ones(m) * (nce.d_pos_i.transpose() / static_cast<double>(m));
    AuxGrad aux;
    Eigen::MatrixXd aux_dx, aux_dlogits;
    if (cfg.delta > 0.0) {
      // Encoder side of the contrastive gradient.
      if (cfg.lr_encoder > 0.0) {
        Eigen::MatrixXd d_w1 =
            encoder_w1_grad(branch_syn, prop_syn, syn.xs, d_embed_syn);
        Eigen::MatrixXd d_embed_v =
            Eigen::VectorXd::Ones(n) * (nce.d_pos_j.transpose() / static_cast<double>(n));
        d_w1 += encoder_w1_grad(branch_v, aug.prop, g.features(), d_embed_v);
        for (std::size_t k = 0; k < branch_negs.size(); ++k) {
          Eigen::MatrixXd d_embed_neg =
              Eigen::VectorXd::Ones(n) * (nce.d_negatives[k].transpose() / static_cast<double>(n));
          d_w1 += encoder_w1_grad(branch_negs[k], neg_props[k], g.features(), d_embed_neg);
        }
        enc_w1 -= cfg.lr_encoder * cfg.delta * d_w1;
      }

      // Synthetic side: through features and through the propagation matrix.
      Eigen::MatrixXd d_pre_syn =
          ((branch_syn.pre.array() > 0.0).cast<double>() * d_embed_syn.array()).matrix();
      aux_dx = cfg.delta * (prop_syn.transpose() * d_pre_syn) * enc_w1.transpose();
      aux.d_xs = &aux_dx;
      if (syn.learnable_adjacency()) {
        Eigen::MatrixXd d_prop = d_pre_syn * (syn.xs * enc_w1).transpose();
        aux_dlogits = cfg.delta *
                      adjacency_grad_to_logits(syn, gcn_normalize_vjp(adj_syn, d_prop));
        aux.d_logits = &aux_dlogits;
      }
    }

    // (4)+(5) matching update on the synthetic graph, then relay inner steps
    // on synthetic data only.
    outer_step(state, real, aug, syn, lrs, cfg.inner_steps, aux, cfg.eta);
    double cond = state.trace.back();
    check_finite(cond, "L_cond", epoch);

    EpochLoss row;
    row.causal = causal.terms.total;
    row.infonce = nce.loss;
    row.cond = cond;
    row.total = row.causal + cfg.delta * row.infonce + cfg.eta * row.cond;
    check_finite(row.total, "total", epoch);
    artifacts.trace.push_back(row);

    if (cfg.verbose) {
      json line;
      line["epoch"] = epoch;
      line["causal"] = row.causal;
      line["infonce"] = row.infonce;
      line["cond"] = row.cond;
      line["total"] = row.total;
      std::cout << line.dump() << "\n";
    }
  }

  artifacts.condensed = std::move(syn);
  artifacts.encoder = cfg.shared_encoder ? state.relay : encoder;
  return artifacts;
}

std::string loss_report_tsv(const RunArtifacts& artifacts) {
  std::ostringstream out;
  out << "epoch\tcausal\tinfonce\tcond\ttotal\n";
  out.precision(17);
  for (std::size_t i = 0; i < artifacts.trace.size(); ++i) {
    const auto& row = artifacts.trace[i];
    out << i << "\t" << row.causal << "\t" << row.infonce << "\t" << row.cond << "\t" << row.total
        << "\n";
  }
  return out.str();
}

std::string loss_report_json(const RunArtifacts& artifacts) {
  json rows = json::array();
  for (std::size_t i = 0; i < artifacts.trace.size(); ++i) {
    const auto& row = artifacts.trace[i];
    rows.push_back({{"epoch", i},
                    {"causal", row.causal},
                    {"infonce", row.infonce},
                    {"cond", row.cond},
                    {"total", row.total}});
  }
  return json{{"epochs", rows}}.dump(2) + "\n";
}

}  // namespace tgcc
