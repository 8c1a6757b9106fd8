#include "stgl/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace stgl {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& field, std::int64_t line) {
  const std::string t = trimmed(field);
  if (t.empty()) throw ParseError("empty numeric field", line);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw ParseError("bad numeric field '" + t + "'", line);
  return v;
}

std::int64_t parse_int(const std::string& field, std::int64_t line) {
  const std::string t = trimmed(field);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ParseError("bad integer field '" + t + "'", line);
  return v;
}

void write_bytes(std::ofstream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw IoError("snapshot truncated");
}

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
  write_bytes(os, &v, sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& is) {
  T v{};
  read_bytes(is, &v, sizeof(T));
  return v;
}

void write_matrix(std::ofstream& os, const MatXd& m) {
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  write_pod(os, rows);
  write_pod(os, cols);
  if (rows * cols > 0) write_bytes(os, m.data(), sizeof(double) * rows * cols);
}

MatXd read_matrix(std::ifstream& is) {
  const auto rows = read_pod<std::uint64_t>(is);
  const auto cols = read_pod<std::uint64_t>(is);
  MatXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  if (rows * cols > 0) read_bytes(is, m.data(), sizeof(double) * rows * cols);
  return m;
}

constexpr char kSnapshotMagic[5] = {'S', 'T', 'G', 'L', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

CsvSchema CsvSchema::infer(const std::vector<std::string>& header) {
  CsvSchema s;
  s.src_col = s.dst_col = s.time_col = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    const std::string name = trimmed(header[static_cast<std::size_t>(i)]);
    if (name == "src") {
      s.src_col = i;
    } else if (name == "dst") {
      s.dst_col = i;
    } else if (name == "timestamp" || name == "time" || name == "ts") {
      s.time_col = i;
    } else if (name == "label") {
      s.label_col = i;
    } else {
      s.feat_cols.push_back(i);
    }
  }
  if (s.src_col < 0 || s.dst_col < 0 || s.time_col < 0)
    throw ParseError("header must contain src, dst and timestamp columns", 1);
  return s;
}

TemporalGraph TemporalGraph::from_parts(std::vector<Interaction> interactions, MatXd node_feats,
                                        MatXd edge_feats) {
  TemporalGraph g;
  const EdgeId n = static_cast<EdgeId>(interactions.size());
  if (edge_feats.cols() > 0 && edge_feats.rows() != n)
    throw ValidationError("edge feature rows must match interaction count");

  NodeId max_node = -1;
  for (EdgeId i = 0; i < n; ++i) {
    const Interaction& e = interactions[static_cast<std::size_t>(i)];
    if (e.src < 0 || e.dst < 0) throw ValidationError("negative node id");
    if (!std::isfinite(e.timestamp)) throw ValidationError("non-finite timestamp");
    max_node = std::max({max_node, e.src, e.dst});
  }
  g.num_nodes_ = max_node + 1;
  if (node_feats.cols() > 0 && node_feats.rows() < g.num_nodes_)
    throw ValidationError("node feature rows do not cover all node ids");

  // Stable sort keeps file order on timestamp ties.
  std::vector<EdgeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), EdgeId{0});
  const bool sorted = std::is_sorted(
      interactions.begin(), interactions.end(),
      [](const Interaction& a, const Interaction& b) { return a.timestamp < b.timestamp; });
  if (!sorted) {
    g.resorted_ = true;
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
      return interactions[static_cast<std::size_t>(a)].timestamp <
             interactions[static_cast<std::size_t>(b)].timestamp;
    });
    std::vector<Interaction> tmp(interactions.size());
    MatXd etmp(edge_feats.rows(), edge_feats.cols());
    for (EdgeId i = 0; i < n; ++i) {
      tmp[static_cast<std::size_t>(i)] = interactions[static_cast<std::size_t>(order[i])];
      if (edge_feats.cols() > 0) etmp.row(i) = edge_feats.row(order[i]);
    }
    interactions = std::move(tmp);
    edge_feats = std::move(etmp);
  }

  g.interactions_ = std::move(interactions);
  g.node_feats_ = std::move(node_feats);
  g.edge_feats_ = std::move(edge_feats);

  // CSR adjacency. Interactions are timestamp-sorted, so appending in
  // interaction order yields per-node lists sorted by (t, idx).
  const auto v_count = static_cast<std::size_t>(g.num_nodes_);
  std::vector<std::size_t> bi_deg(v_count + 1, 0), di_deg(v_count + 1, 0);
  for (const Interaction& e : g.interactions_) {
    ++bi_deg[static_cast<std::size_t>(e.src) + 1];
    ++bi_deg[static_cast<std::size_t>(e.dst) + 1];
    ++di_deg[static_cast<std::size_t>(e.src) + 1];
  }
  std::partial_sum(bi_deg.begin(), bi_deg.end(), bi_deg.begin());
  std::partial_sum(di_deg.begin(), di_deg.end(), di_deg.begin());
  g.bi_offsets_ = bi_deg;
  g.di_offsets_ = di_deg;
  g.bi_entries_.resize(g.bi_offsets_.back());
  g.di_entries_.resize(g.di_offsets_.back());
  std::vector<std::size_t> bi_fill = g.bi_offsets_, di_fill = g.di_offsets_;
  for (EdgeId i = 0; i < g.num_edges(); ++i) {
    const Interaction& e = g.interactions_[static_cast<std::size_t>(i)];
    g.bi_entries_[bi_fill[static_cast<std::size_t>(e.src)]++] = {e.dst, e.timestamp, i};
    g.bi_entries_[bi_fill[static_cast<std::size_t>(e.dst)]++] = {e.src, e.timestamp, i};
    g.di_entries_[di_fill[static_cast<std::size_t>(e.src)]++] = {e.dst, e.timestamp, i};
  }

  std::vector<bool> is_dst(v_count, false);
  for (const Interaction& e : g.interactions_) is_dst[static_cast<std::size_t>(e.dst)] = true;
  for (NodeId v = 0; v < g.num_nodes_; ++v)
    if (is_dst[static_cast<std::size_t>(v)]) g.dst_universe_.push_back(v);
  return g;
}

void TemporalGraph::check_node(NodeId v) const {
  if (v < 0 || v >= num_nodes_)
    throw ValidationError("unknown node id " + std::to_string(v));
}

std::span<const AdjEntry> TemporalGraph::neighbors(NodeId v, Direction dir) const {
  check_node(v);
  const auto& offsets = dir == Direction::bidirected ? bi_offsets_ : di_offsets_;
  const auto& entries = dir == Direction::bidirected ? bi_entries_ : di_entries_;
  const std::size_t b = offsets[static_cast<std::size_t>(v)];
  const std::size_t e = offsets[static_cast<std::size_t>(v) + 1];
  return {entries.data() + b, e - b};
}

GraphStats TemporalGraph::stats() const {
  GraphStats s;
  s.num_nodes = num_nodes_;
  s.num_edges = num_edges();
  s.d_n = node_feat_dim();
  s.d_e = edge_feat_dim();
  s.has_node_feats = s.d_n > 0;
  s.has_edge_feats = s.d_e > 0;
  if (num_edges() > 1) {
    const double span = interactions_.back().timestamp - interactions_.front().timestamp;
    s.avg_time_gap = span / static_cast<double>(num_edges() - 1);
  }
  return s;
}

void TemporalGraph::save_snapshot(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_bytes(os, kSnapshotMagic, sizeof(kSnapshotMagic));
  write_pod(os, kSnapshotVersion);
  write_pod(os, static_cast<std::uint64_t>(interactions_.size()));
  write_pod(os, static_cast<std::uint8_t>(resorted_ ? 1 : 0));
  for (const Interaction& e : interactions_) {
    write_pod(os, static_cast<std::int64_t>(e.src));
    write_pod(os, static_cast<std::int64_t>(e.dst));
    write_pod(os, e.timestamp);
    write_pod(os, static_cast<std::int32_t>(e.label));
  }
  write_matrix(os, node_feats_);
  write_matrix(os, edge_feats_);
  if (!os) throw IoError("failed writing snapshot " + path.string());
}

TemporalGraph TemporalGraph::load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[5];
  read_bytes(is, magic, sizeof(magic));
  if (std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
    throw IoError("not a STGL1 snapshot: " + path.string());
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kSnapshotVersion)
    throw IoError("unsupported snapshot version " + std::to_string(version));
  const auto n = read_pod<std::uint64_t>(is);
  const auto resorted = read_pod<std::uint8_t>(is);
  std::vector<Interaction> interactions(n);
  for (auto& e : interactions) {
    e.src = read_pod<std::int64_t>(is);
    e.dst = read_pod<std::int64_t>(is);
    e.timestamp = read_pod<double>(is);
    e.label = read_pod<std::int32_t>(is);
  }
  MatXd node_feats = read_matrix(is);
  MatXd edge_feats = read_matrix(is);
  TemporalGraph g =
      TemporalGraph::from_parts(std::move(interactions), std::move(node_feats), std::move(edge_feats));
  g.resorted_ = resorted != 0;
  return g;
}

TemporalGraph ingest_csv(const std::filesystem::path& path, const CsvSchema& schema,
                         const std::optional<std::filesystem::path>& node_feats_path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty file (missing header)", 1);

  std::vector<Interaction> interactions;
  std::vector<double> feat_buf;
  const std::size_t n_feats = schema.feat_cols.size();
  std::int64_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const int needed = std::max(
        {schema.src_col, schema.dst_col, schema.time_col, schema.label_col,
         schema.feat_cols.empty() ? -1 : *std::max_element(schema.feat_cols.begin(),
                                                           schema.feat_cols.end())});
    if (static_cast<int>(fields.size()) <= needed)
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, need " +
                           std::to_string(needed + 1),
                       lineno);
    Interaction e;
    e.src = parse_int(fields[static_cast<std::size_t>(schema.src_col)], lineno);
    e.dst = parse_int(fields[static_cast<std::size_t>(schema.dst_col)], lineno);
    if (e.src < 0 || e.dst < 0) throw ValidationError("negative node id at line " + std::to_string(lineno));
    e.timestamp = parse_double(fields[static_cast<std::size_t>(schema.time_col)], lineno);
    if (!std::isfinite(e.timestamp))
      throw ValidationError("non-finite timestamp at line " + std::to_string(lineno));
    if (schema.label_col >= 0)
      e.label = static_cast<int>(parse_int(fields[static_cast<std::size_t>(schema.label_col)], lineno));
    interactions.push_back(e);
    for (int c : schema.feat_cols)
      feat_buf.push_back(parse_double(fields[static_cast<std::size_t>(c)], lineno));
  }

  MatXd edge_feats(static_cast<Eigen::Index>(interactions.size()),
                   static_cast<Eigen::Index>(n_feats));
  for (std::size_t i = 0; i < interactions.size(); ++i)
    for (std::size_t j = 0; j < n_feats; ++j)
      edge_feats(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          feat_buf[i * n_feats + j];

  MatXd node_feats(0, 0);
  if (node_feats_path) {
    std::ifstream nf(*node_feats_path);
    if (!nf) throw IoError("cannot open " + node_feats_path->string());
    std::string nline;
    if (!std::getline(nf, nline)) throw ParseError("empty node feature file", 1);
    std::vector<std::pair<NodeId, std::vector<double>>> rows;
    std::int64_t nl = 1;
    std::size_t dim = 0;
    NodeId max_id = -1;
    while (std::getline(nf, nline)) {
      ++nl;
      if (trimmed(nline).empty()) continue;
      const auto fields = split_csv_line(nline);
      if (fields.size() < 2) throw ParseError("node feature row needs node_id plus features", nl);
      const NodeId id = parse_int(fields[0], nl);
      if (id < 0) throw ValidationError("negative node id at line " + std::to_string(nl));
      std::vector<double> vals;
      for (std::size_t i = 1; i < fields.size(); ++i) vals.push_back(parse_double(fields[i], nl));
      if (dim == 0) dim = vals.size();
      if (vals.size() != dim) throw ParseError("inconsistent node feature dimension", nl);
      max_id = std::max(max_id, id);
      rows.emplace_back(id, std::move(vals));
    }
    NodeId max_interaction_node = -1;
    for (const Interaction& e : interactions)
      max_interaction_node = std::max({max_interaction_node, e.src, e.dst});
    node_feats = MatXd::Zero(std::max(max_id, max_interaction_node) + 1,
                             static_cast<Eigen::Index>(dim));
    for (const auto& [id, vals] : rows)
      for (std::size_t j = 0; j < vals.size(); ++j)
        node_feats(id, static_cast<Eigen::Index>(j)) = vals[j];
  }

  return TemporalGraph::from_parts(std::move(interactions), std::move(node_feats),
                                   std::move(edge_feats));
}

TemporalGraph ingest_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::string header;
  if (!std::getline(is, header)) throw ParseError("empty file (missing header)", 1);
  is.close();
  const CsvSchema schema = CsvSchema::infer(split_csv_line(header));
  std::optional<std::filesystem::path> side;
  const auto candidate = path.parent_path() / "node_feats.csv";
  if (std::filesystem::exists(candidate)) side = candidate;
  return ingest_csv(path, schema, side);
}

namespace {

void normalize_rows(MatXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!m.row(i).allFinite()) throw ValidationError("non-finite feature value");
    const double norm = m.row(i).norm();
    if (norm > 1.0) m.row(i) /= norm;
  }
}

}  // namespace

TemporalGraph normalize_features(const TemporalGraph& g) {
  TemporalGraph out = g;
  normalize_rows(out.node_feats_);
  normalize_rows(out.edge_feats_);
  return out;
}

SplitSpec chronological_split(const TemporalGraph& g, const SplitRatios& ratios) {
  if (ratios.train <= 0 || ratios.val <= 0 || ratios.test <= 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw ValidationError("split ratios must be positive and sum to 1");
  const EdgeId n = g.num_edges();
  if (n < 3) throw ValidationError("need at least 3 interactions to split");

  const auto& ev = g.interactions();
  // Push a boundary forward until it no longer splits a tied-timestamp block.
  const auto adjust = [&](EdgeId idx) {
    while (idx > 0 && idx < n &&
           ev[static_cast<std::size_t>(idx)].timestamp ==
               ev[static_cast<std::size_t>(idx - 1)].timestamp)
      ++idx;
    return idx;
  };

  SplitSpec spec;
  const EdgeId raw_train = static_cast<EdgeId>(std::floor(ratios.train * static_cast<double>(n)));
  const EdgeId raw_val =
      static_cast<EdgeId>(std::floor((ratios.train + ratios.val) * static_cast<double>(n)));
  spec.train_end_idx = adjust(raw_train);
  spec.val_end_idx = adjust(std::max(raw_val, spec.train_end_idx));
  spec.boundary_warning = spec.train_end_idx != raw_train || spec.val_end_idx != raw_val;
  if (spec.train_end_idx == 0) throw ValidationError("train split is empty");

  spec.inductive_mask.assign(static_cast<std::size_t>(g.num_nodes()), true);
  for (EdgeId i = 0; i < spec.train_end_idx; ++i) {
    spec.inductive_mask[static_cast<std::size_t>(ev[static_cast<std::size_t>(i)].src)] = false;
    spec.inductive_mask[static_cast<std::size_t>(ev[static_cast<std::size_t>(i)].dst)] = false;
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (spec.inductive_mask[static_cast<std::size_t>(v)]) spec.inductive_nodes.push_back(v);
  return spec;
}

}  // namespace stgl
