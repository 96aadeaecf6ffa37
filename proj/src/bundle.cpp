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
#include "tgcc/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tgcc/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tgcc {

namespace {

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError(DataError::Code::missing_file, "cannot open for write: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError(DataError::Code::parse, "short write: " + tmp);
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataError::Code::missing_file, "missing file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(DataError::Code::parse, path + ": " + e.what());
  }
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

void write_f32_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::string blob(kBundleMagic, sizeof(kBundleMagic));
  put_u64(blob, static_cast<std::uint64_t>(m.rows()));
  put_u64(blob, static_cast<std::uint64_t>(m.cols()));
  blob.reserve(blob.size() + 4 * m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      float f = static_cast<float>(m(i, j));
      static_assert(sizeof(float) == 4);
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      for (int b = 0; b < 4; ++b) blob.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  atomic_write(path, blob);
}

Eigen::MatrixXd read_f32_matrix(const std::string& path) {
  std::string blob = read_file(path);
  if (blob.size() < 24 || std::memcmp(blob.data(), kBundleMagic, 8) != 0)
    throw DataError(DataError::Code::header_mismatch, path + ": bad magic");
  const std::uint64_t rows = get_u64(blob.data() + 8);
  const std::uint64_t cols = get_u64(blob.data() + 16);
  if (blob.size() != 24 + 4 * rows * cols)
    throw DataError(DataError::Code::header_mismatch,
                    path + ": size does not match header dims " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  Eigen::MatrixXd m(rows, cols);
  const char* p = blob.data() + 24;
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b)
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(*p++)) << (8 * b);
      float f;
      std::memcpy(&f, &bits, 4);
      m(i, j) = static_cast<double>(f);
    }
  return m;
}

namespace {

struct EdgeList {
  std::vector<std::tuple<int, int, double>> edges;  // src < dst
};

std::string edges_to_tsv(const EdgeList& list) {
  std::ostringstream out;
  for (const auto& [src, dst, weight] : list.edges) {
    out << src << "\t" << dst;
    if (weight != 1.0) out << "\t" << format_weight(weight);
    out << "\n";
  }
  return out.str();
}

EdgeList edges_from_tsv(const std::string& path, int n) {
  EdgeList list;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    long src, dst;
    double weight = 1.0;
    if (!(row >> src >> dst))
      throw DataError(DataError::Code::parse,
                      path + ":" + std::to_string(lineno) + ": expected 'src dst [weight]'");
    row >> weight;
    if (src < 0 || dst < 0 || src >= n || dst >= n)
      throw DataError(DataError::Code::index_range,
                      path + ":" + std::to_string(lineno) + ": node id out of range");
    if (src == dst)
      throw DataError(DataError::Code::parse,
                      path + ":" + std::to_string(lineno) + ": self-loop not allowed");
    if (weight < 0.0 || weight > 1.0)
      throw DataError(DataError::Code::parse,
                      path + ":" + std::to_string(lineno) + ": weight outside [0, 1]");
    list.edges.emplace_back(static_cast<int>(src), static_cast<int>(dst), weight);
  }
  return list;
}

EdgeList edges_from_sparse(const Eigen::SparseMatrix<double>& adj) {
  EdgeList list;
  for (int k = 0; k < adj.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(adj, k); it; ++it)
      if (it.row() < it.col() && it.value() != 0.0)
        list.edges.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  std::sort(list.edges.begin(), list.edges.end());
  return list;
}

std::vector<int> json_int_array(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw DataError(DataError::Code::parse, where + ": missing key '" + key + "'");
  return j.at(key).get<std::vector<int>>();
}

}  // namespace

void save_bundle(const Graph& g, const std::string& dir, const std::string& provenance) {
  fs::create_directories(dir);
  json meta;
  meta["classes"] = g.num_classes();
  meta["d"] = g.feature_dim();
  meta["format_version"] = kBundleFormatVersion;
  meta["n"] = g.num_nodes();
  meta["provenance"] = provenance;
  atomic_write(dir + "/meta.json", meta.dump(2) + "\n");

  atomic_write(dir + "/edges.tsv", edges_to_tsv(edges_from_sparse(g.adjacency())));
  write_f32_matrix(dir + "/features.bin", g.features());

  std::ostringstream labels;
  for (int i = 0; i < g.num_nodes(); ++i) labels << g.labels()[i] << "\n";
  atomic_write(dir + "/labels.tsv", labels.str());

  json splits;
  splits["test"] = g.splits().test;
  splits["train"] = g.splits().train;
  splits["val"] = g.splits().val;
  atomic_write(dir + "/splits.json", splits.dump(2) + "\n");
}

Graph load_bundle(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw DataError(DataError::Code::missing_file, "bundle directory not found: " + dir);
  json meta = parse_json_file(dir + "/meta.json");
  const int n = meta.at("n").get<int>();
  const int d = meta.at("d").get<int>();
  const int num_classes = meta.at("classes").get<int>();

  Eigen::MatrixXd features = read_f32_matrix(dir + "/features.bin");
  if (features.rows() != n || features.cols() != d)
    throw DataError(DataError::Code::header_mismatch,
                    dir + "/features.bin: dims disagree with meta.json");

  std::istringstream label_in(read_file(dir + "/labels.tsv"));
  Eigen::VectorXi labels(n);
  for (int i = 0; i < n; ++i) {
    int value;
    if (!(label_in >> value))
      throw DataError(DataError::Code::parse, dir + "/labels.tsv: expected " + std::to_string(n) +
                                                  " labels");
    labels[i] = value;
  }

  json splits_json = parse_json_file(dir + "/splits.json");
  Splits splits;
  splits.train = json_int_array(splits_json, "train", dir + "/splits.json");
  splits.val = json_int_array(splits_json, "val", dir + "/splits.json");
  splits.test = json_int_array(splits_json, "test", dir + "/splits.json");

  EdgeList list = edges_from_tsv(dir + "/edges.tsv", n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * list.edges.size());
  for (const auto& [src, dst, weight] : list.edges) {
    trips.emplace_back(src, dst, weight);
    trips.emplace_back(dst, src, weight);
  }
  Eigen::SparseMatrix<double> adj(n, n);
  adj.setFromTriplets(trips.begin(), trips.end());

  try {
    return Graph::create(std::move(adj), std::move(features), std::move(labels), std::move(splits),
                         num_classes);
  } catch (const StructuralError& e) {
    throw DataError(DataError::Code::index_range, dir + ": " + e.what());
  }
}

std::string condensed_hash(const SyntheticGraph& syn) {
  std::uint64_t hash = 14695981039346656037ULL;
  auto mix = [&hash](const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash ^= p[i];
      hash *= 1099511628211ULL;
    }
  };
  Eigen::MatrixXd adj = syn.materialize_adjacency();
  mix(syn.xs.data(), sizeof(double) * syn.xs.size());
  mix(adj.data(), sizeof(double) * adj.size());
  mix(syn.ys.data(), sizeof(int) * syn.ys.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void save_model(const RelayModel& model, const std::string& path) {
  json header;
  header["hidden"] = model.hidden;
  header["seed"] = model.seed;
  header["w1"] = {model.w1.rows(), model.w1.cols()};
  header["w2"] = {model.w2.rows(), model.w2.cols()};
  std::string blob = header.dump() + "\n";
  auto append = [&blob](const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        float f = static_cast<float>(m(i, j));
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        for (int b = 0; b < 4; ++b) blob.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
      }
  };
  append(model.w1);
  append(model.w2);
  atomic_write(path, blob);
}

RelayModel load_model(const std::string& path) {
  std::string blob = read_file(path);
  auto newline = blob.find('\n');
  if (newline == std::string::npos)
    throw DataError(DataError::Code::header_mismatch, path + ": missing checkpoint header");
  json header;
  try {
    header = json::parse(blob.substr(0, newline));
  } catch (const json::parse_error& e) {
    throw DataError(DataError::Code::parse, path + ": " + e.what());
  }
  RelayModel model;
  model.hidden = header.at("hidden").get<int>();
  model.seed = header.at("seed").get<std::uint64_t>();
  auto s1 = header.at("w1").get<std::vector<long>>();
  auto s2 = header.at("w2").get<std::vector<long>>();
  const char* p = blob.data() + newline + 1;
  const char* end = blob.data() + blob.size();
  auto take = [&p, end, &path](long rows, long cols) {
    if (end - p < 4 * rows * cols)
      throw DataError(DataError::Code::header_mismatch, path + ": checkpoint truncated");
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b)
          bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(*p++)) << (8 * b);
        float f;
        std::memcpy(&f, &bits, 4);
        m(i, j) = static_cast<double>(f);
      }
    return m;
  };
  model.w1 = take(s1[0], s1[1]);
  model.w2 = take(s2[0], s2[1]);
  return model;
}

void save_condensed(const CondensedBundle& bundle, const std::string& dir) {
  const SyntheticGraph& syn = bundle.syn;
  fs::create_directories(dir);

  json meta;
  meta["classes"] = syn.num_classes;
  meta["d"] = static_cast<int>(syn.xs.cols());
  meta["format_version"] = kBundleFormatVersion;
  meta["n"] = syn.m();
  meta["provenance"] = std::string("condensed (") +
                       (syn.learnable_adjacency() ? "learned adjacency" : "fixed adjacency") + ")";
  atomic_write(dir + "/meta.json", meta.dump(2) + "\n");

  write_f32_matrix(dir + "/features.bin", syn.xs);
  Eigen::MatrixXd adj = syn.materialize_adjacency();
  write_f32_matrix(dir + "/adjacency.bin", adj);
  if (syn.learnable_adjacency()) write_f32_matrix(dir + "/logits.bin", syn.adj_logits);

  // GraphBundle-compatible edge list: sparsified at 0.5 for a learnable
  // adjacency, exact entries otherwise.
  EdgeList list;
  for (int i = 0; i < syn.m(); ++i)
    for (int j = i + 1; j < syn.m(); ++j) {
      double w = adj(i, j);
      if (syn.learnable_adjacency() ? w >= 0.5 : w != 0.0) list.edges.emplace_back(i, j, w);
    }
  atomic_write(dir + "/edges.tsv", edges_to_tsv(list));

  std::ostringstream labels;
  for (int i = 0; i < syn.m(); ++i) labels << syn.ys[i] << "\n";
  atomic_write(dir + "/labels.tsv", labels.str());

  std::vector<int> all(syn.m());
  for (int i = 0; i < syn.m(); ++i) all[i] = i;
  json splits;
  splits["test"] = std::vector<int>{};
  splits["train"] = all;
  splits["val"] = std::vector<int>{};
  atomic_write(dir + "/splits.json", splits.dump(2) + "\n");

  atomic_write(dir + "/config.json", bundle.config_json);
  atomic_write(dir + "/loss_trace.json", bundle.loss_trace_json);
  if (bundle.has_encoder) save_model(bundle.encoder, dir + "/encoder.ckpt");
}

CondensedBundle load_condensed(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw DataError(DataError::Code::missing_file, "condensed bundle not found: " + dir);
  json meta = parse_json_file(dir + "/meta.json");

  CondensedBundle bundle;
  SyntheticGraph& syn = bundle.syn;
  syn.num_classes = meta.at("classes").get<int>();
  syn.xs = read_f32_matrix(dir + "/features.bin");
  const int m = static_cast<int>(syn.xs.rows());
  if (meta.at("n").get<int>() != m)
    throw DataError(DataError::Code::header_mismatch, dir + ": meta n disagrees with features");

  std::istringstream label_in(read_file(dir + "/labels.tsv"));
  syn.ys.resize(m);
  for (int i = 0; i < m; ++i) {
    int value;
    if (!(label_in >> value))
      throw DataError(DataError::Code::parse, dir + "/labels.tsv: short file");
    syn.ys[i] = value;
  }

  if (fs::exists(dir + "/logits.bin")) {
    syn.mode = SyntheticGraph::AdjacencyMode::logits;
    syn.adj_logits = read_f32_matrix(dir + "/logits.bin");
    if (syn.adj_logits.rows() != m || syn.adj_logits.cols() != m)
      throw DataError(DataError::Code::header_mismatch, dir + "/logits.bin: bad dims");
  } else {
    syn.mode = SyntheticGraph::AdjacencyMode::fixed;
    syn.adj_fixed = read_f32_matrix(dir + "/adjacency.bin");
    if (syn.adj_fixed.rows() != m || syn.adj_fixed.cols() != m)
      throw DataError(DataError::Code::header_mismatch, dir + "/adjacency.bin: bad dims");
  }

  Eigen::MatrixXd adj = syn.materialize_adjacency();
  if ((adj - adj.transpose()).cwiseAbs().maxCoeff() > 1e-6)
    throw DataError(DataError::Code::header_mismatch, dir + ": reloaded adjacency not symmetric");

  bundle.config_json = read_file(dir + "/config.json");
  bundle.loss_trace_json = read_file(dir + "/loss_trace.json");
  if (fs::exists(dir + "/encoder.ckpt")) {
    bundle.encoder = load_model(dir + "/encoder.ckpt");
    bundle.has_encoder = true;
  }
  return bundle;
}

ImportStats import_planetoid(const std::string& raw_dir, const std::string& name,
                             const std::string& out_dir) {
  const std::string content_path = raw_dir + "/" + name + ".content";
  const std::string cites_path = raw_dir + "/" + name + ".cites";

  std::ifstream content(content_path);
  if (!content)
    throw DataError(DataError::Code::missing_file, "import: missing " + content_path);

  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> label_strings;
  std::unordered_map<std::string, int> id_index;

  std::string line;
  int lineno = 0;
  int d = -1;
  while (std::getline(content, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (row >> tok) tokens.push_back(tok);
    if (tokens.size() < 3)
      throw DataError(DataError::Code::parse,
                      content_path + ":" + std::to_string(lineno) + ": too few columns");
    if (d < 0) d = static_cast<int>(tokens.size()) - 2;
    if (static_cast<int>(tokens.size()) != d + 2)
      throw DataError(DataError::Code::parse,
                      content_path + ":" + std::to_string(lineno) + ": inconsistent column count");
    if (!id_index.emplace(tokens.front(), static_cast<int>(ids.size())).second)
      throw DataError(DataError::Code::parse,
                      content_path + ":" + std::to_string(lineno) + ": duplicate id");
    ids.push_back(tokens.front());
    std::vector<double> feats(d);
    for (int k = 0; k < d; ++k) {
      try {
        feats[k] = std::stod(tokens[k + 1]);
      } catch (const std::exception&) {
        throw DataError(DataError::Code::parse,
                        content_path + ":" + std::to_string(lineno) + ": bad feature value");
      }
    }
    rows.push_back(std::move(feats));
    label_strings.push_back(tokens.back());
  }
  const int n = static_cast<int>(ids.size());
  if (n == 0) throw DataError(DataError::Code::parse, content_path + ": empty file");

  // Class ids by sorted label string, for determinism.
  std::vector<std::string> classes(label_strings);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::unordered_map<std::string, int> class_index;
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) class_index[classes[c]] = c;

  Eigen::VectorXi labels(n);
  Eigen::MatrixXd features(n, d);
  for (int i = 0; i < n; ++i) {
    labels[i] = class_index[label_strings[i]];
    double sum = 0.0;
    for (int k = 0; k < d; ++k) sum += std::abs(rows[i][k]);
    for (int k = 0; k < d; ++k) features(i, k) = sum > 0.0 ? rows[i][k] / sum : 0.0;
  }

  std::ifstream cites(cites_path);
  if (!cites) throw DataError(DataError::Code::missing_file, "import: missing " + cites_path);
  std::set<std::pair<int, int>> edge_set;
  long skipped = 0;
  lineno = 0;
  while (std::getline(cites, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!(row >> a >> b))
      throw DataError(DataError::Code::parse,
                      cites_path + ":" + std::to_string(lineno) + ": expected two ids");
    auto ia = id_index.find(a);
    auto ib = id_index.find(b);
    if (ia == id_index.end() || ib == id_index.end()) {
      ++skipped;
      continue;
    }
    int u = ia->second, v = ib->second;
    if (u == v) continue;
    edge_set.emplace(std::min(u, v), std::max(u, v));
  }

  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [u, v] : edge_set) {
    trips.emplace_back(u, v, 1.0);
    trips.emplace_back(v, u, 1.0);
  }
  Eigen::SparseMatrix<double> adj(n, n);
  adj.setFromTriplets(trips.begin(), trips.end());

  // Conventional split sizes taken deterministically in file order: the
  // first 20 nodes of each class train, the next 500 nodes validate, the
  // last 1000 nodes test.
  const int num_classes = static_cast<int>(classes.size());
  Splits splits;
  std::vector<int> taken(n, 0);
  std::vector<int> per_class(num_classes, 0);
  for (int i = 0; i < n && static_cast<int>(splits.train.size()) < 20 * num_classes; ++i) {
    if (per_class[labels[i]] < 20) {
      splits.train.push_back(i);
      ++per_class[labels[i]];
      taken[i] = 1;
    }
  }
  for (int i = 0; i < n && static_cast<int>(splits.val.size()) < 500; ++i)
    if (!taken[i]) {
      splits.val.push_back(i);
      taken[i] = 1;
    }
  for (int i = n - 1; i >= 0 && static_cast<int>(splits.test.size()) < 1000; --i)
    if (!taken[i]) {
      splits.test.push_back(i);
      taken[i] = 1;
    }
  std::sort(splits.test.begin(), splits.test.end());

  Graph g = Graph::create(std::move(adj), std::move(features), std::move(labels),
                          std::move(splits), num_classes);
  std::string provenance = "planetoid:" + name + " (L1 row-normalized, deterministic splits, " +
                           std::to_string(skipped) + " dangling citations skipped)";
  save_bundle(g, out_dir, provenance);

  ImportStats stats;
  stats.n = n;
  stats.d = d;
  stats.num_classes = num_classes;
  stats.edges = static_cast<long>(edge_set.size());
  stats.skipped = skipped;
  return stats;
}

Graph gen_sbm(const std::vector<int>& block_sizes, double p_in, double p_out, int d,
              std::uint64_t seed) {
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
    throw ArgumentError("gen_sbm: probabilities must lie in [0, 1]");
  if (block_sizes.empty() || d < 1) throw ArgumentError("gen_sbm: need blocks and d >= 1");
  for (int size : block_sizes)
    if (size < 1) throw ArgumentError("gen_sbm: block sizes must be >= 1");

  const int num_classes = static_cast<int>(block_sizes.size());
  int n = 0;
  for (int size : block_sizes) n += size;

  Eigen::VectorXi labels(n);
  {
    int at = 0;
    for (int c = 0; c < num_classes; ++c)
      for (int k = 0; k < block_sizes[c]; ++k) labels[at++] = c;
  }

  std::mt19937_64 rng(mix_seed(seed, 0xb10c));
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = labels[i] == labels[j] ? p_in : p_out;
      if (uniform01(rng) < p) {
        trips.emplace_back(i, j, 1.0);
        trips.emplace_back(j, i, 1.0);
      }
    }
  Eigen::SparseMatrix<double> adj(n, n);
  adj.setFromTriplets(trips.begin(), trips.end());

  Eigen::MatrixXd means(num_classes, d);
  for (int c = 0; c < num_classes; ++c)
    for (int k = 0; k < d; ++k) means(c, k) = normal01(rng);
  Eigen::MatrixXd features(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) features(i, k) = means(labels[i], k) + 0.5 * normal01(rng);

  Splits splits;
  int at = 0;
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> nodes(block_sizes[c]);
    for (int k = 0; k < block_sizes[c]; ++k) nodes[k] = at + k;
    at += block_sizes[c];
    for (std::size_t i = nodes.size(); i > 1; --i)
      std::swap(nodes[i - 1], nodes[uniform_index(rng, i)]);
    const int n_train = std::max(1, static_cast<int>(0.6 * nodes.size()));
    const int n_val = static_cast<int>(0.2 * nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (static_cast<int>(k) < n_train)
        splits.train.push_back(nodes[k]);
      else if (static_cast<int>(k) < n_train + n_val)
        splits.val.push_back(nodes[k]);
      else
        splits.test.push_back(nodes[k]);
    }
  }
  std::sort(splits.train.begin(), splits.train.end());
  std::sort(splits.val.begin(), splits.val.end());
  std::sort(splits.test.begin(), splits.test.end());

  return Graph::create(std::move(adj), std::move(features), std::move(labels), std::move(splits),
                       num_classes);
}

}  // namespace tgcc
