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
#include <string>
#include <vector>

#include "tgcc/condenser.hpp"
#include "tgcc/graph.hpp"
#include "tgcc/relay.hpp"

namespace tgcc {

/// Every knob of the condensation run. JSON keys match the field names;
/// unknown keys are rejected so typos fail loudly.
struct TgccConfig {
  // causal objective
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.1;
  double lambda = 0.5;  // target per-dimension std

  // total-loss weights
  double delta = 0.5;  // contrastive term
  double eta = 1.0;    // matching term

  // intervention
  double epsilon = 1.0;  // entropy weight
  double rho = 0.1;      // edge-perturbation budget fraction
  int sinkhorn_iters = 500;
  double sinkhorn_tol = 1e-6;
  int intervention_every = 1;  // epochs between refreshes
  double lr_theta = 0.1;

  // contrastive negatives
  std::vector<double> kappas = {0.1, 0.2, 0.3};
  double temperature = 0.5;

  // condensation
  double ratio = 0.01;  // r
  int horizon = 50;     // T, outer steps per relay initialization
  int inner_steps = 10;
  int relay_inits = 5;  // R
  int hidden = 64;
  double lr_x = 0.01;
  double lr_adj = 0.01;
  double lr_relay = 0.05;
  double lr_encoder = 0.01;
  bool syn_adam = true;
  bool shared_encoder = false;

  std::uint64_t seed = 0;

  // evaluation protocol
  std::vector<std::uint64_t> eval_seeds = {0, 1, 2, 3, 4};
  int eval_steps = 600;
  double eval_lr = 0.01;
  bool eval_weighted = true;  // evaluate on sigmoid weights; else sparsify at 0.5
  double sparsify_threshold = 0.5;

  bool verbose = false;

  void validate() const;  // throws ArgumentError
};

TgccConfig parse_config(const std::string& json_text);
std::string config_to_json(const TgccConfig& cfg);

struct EpochLoss {
  double causal = 0.0;
  double infonce = 0.0;
  double cond = 0.0;
  double total = 0.0;
};

struct RunArtifacts {
  SyntheticGraph condensed;
  RelayModel encoder;
  std::vector<EpochLoss> trace;
  std::string config_json;  // byte-identical snapshot of the input config
  std::uint64_t seed = 0;
};

/// Full condensation: per epoch, refresh the intervention (on schedule),
/// train the encoder on the invariance objective, inject the contrastive
/// signal, update the synthetic graph on the combined gradient and advance
/// the relay on synthetic data only. Deterministic given config + seed.
/// Aborts with NumericError naming the first non-finite loss term.
RunArtifacts run_condense(const Graph& g, const TgccConfig& cfg);

/// Per-epoch loss table. TSV columns: epoch, causal, infonce, cond, total.
std::string loss_report_tsv(const RunArtifacts& artifacts);
std::string loss_report_json(const RunArtifacts& artifacts);

}  // namespace tgcc
