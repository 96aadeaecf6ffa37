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

// Bundle directory layout:
//   meta.json     n, d, classes, format_version, provenance
//   edges.tsv     "src<TAB>dst[<TAB>weight]", src < dst, sorted, stored once
//   features.bin  8-byte magic "TGCCBND1", rows/cols as little-endian u64,
//                 then row-major little-endian float32
//   labels.tsv    one class id per line, node order
//   splits.json   train/val/test index arrays
// Condensed bundles add adjacency.bin (dense m x m), logits.bin (when the
// adjacency is learnable), config.json, loss_trace.json and encoder.ckpt.
// Writes are atomic (write-temp-then-rename); a load/save cycle is
// byte-stable.

inline constexpr char kBundleMagic[8] = {'T', 'G', 'C', 'C', 'B', 'N', 'D', '1'};
inline constexpr int kBundleFormatVersion = 1;

Graph load_bundle(const std::string& dir);
void save_bundle(const Graph& g, const std::string& dir, const std::string& provenance = "");

struct CondensedBundle {
  SyntheticGraph syn;
  std::string config_json;
  std::string loss_trace_json;
  bool has_encoder = false;
  RelayModel encoder;
};

CondensedBundle load_condensed(const std::string& dir);
void save_condensed(const CondensedBundle& bundle, const std::string& dir);

/// FNV-1a over the materialized condensed content, as a hex string.
std::string condensed_hash(const SyntheticGraph& syn);

/// Raw float32 matrix container (the features.bin format, reused for
/// adjacency / logits / checkpoints).
void write_f32_matrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_f32_matrix(const std::string& path);

/// Model checkpoint: one-line JSON shape header followed by raw
/// little-endian float32 for W1 then W2.
void save_model(const RelayModel& model, const std::string& path);
RelayModel load_model(const std::string& path);

struct ImportStats {
  int n = 0;
  int d = 0;
  int num_classes = 0;
  long edges = 0;    // undirected, after symmetrization / dedup
  long skipped = 0;  // citation lines referencing unknown ids
};

/// Converts the plain-text citation format (<name>.content + <name>.cites)
/// into a bundle: symmetrized edges, L1 row-normalized features, classes
/// sorted by label string, and the conventional split sizes (20 train nodes
/// per class, 500 val, 1000 test) taken deterministically in file order.
ImportStats import_planetoid(const std::string& raw_dir, const std::string& name,
                             const std::string& out_dir);

/// Stochastic block model with Gaussian class-mean features and stratified
/// 60/20/20 splits. Deterministic per seed.
Graph gen_sbm(const std::vector<int>& block_sizes, double p_in, double p_out, int d,
              std::uint64_t seed);

}  // namespace tgcc
