// Acceptance suite: one pass/fail line per criterion. Each criterion can be
// run alone via --criterion N (the ctest wiring does exactly that); criterion
// 5 is skipped when the UCI dataset is not available locally.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stgl/evaluate.hpp"
#include "stgl/grad_check.hpp"
#include "stgl/jacobian.hpp"
#include "stgl/pipeline.hpp"
#include "stgl/synthetic.hpp"
#include "stgl/training.hpp"

using namespace stgl;

namespace {

struct Outcome {
  bool pass = false;
  bool skip = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// The desk-scale planted-recency dataset shared by criteria 6 and 7:
/// Zipf-popular responders, bursty pairs with signature edge features.
TemporalGraph acceptance_graph() {
  SyntheticConfig cfg;
  cfg.num_initiators = 40;
  cfg.num_responders = 120;
  cfg.num_edges = 4000;
  cfg.node_feat_dim = 0;
  cfg.edge_feat_dim = 8;
  cfg.repeat_prob = 0.85;
  cfg.background_prob = 0.05;
  cfg.signature_noise = 1.0;
  cfg.popularity_skew = 1.2;
  cfg.seed = 11;
  return normalize_features(make_planted_recency_graph(cfg));
}

ModelSpec acceptance_spec(MethodKind kind) {
  ModelSpec spec = ModelSpec::defaults_for(kind);
  spec.hidden = 32;
  spec.time_dim = 16;
  spec.mlp_hidden = 32;
  spec.k = kind == MethodKind::gnn ? 8 : 10;
  spec.k2 = 4;
  return spec;
}

TrainConfig acceptance_train(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.lr = 3e-3;
  cfg.batch_size = 200;
  cfg.max_epochs = 25;
  cfg.patience = 8;
  cfg.seed = seed;
  return cfg;
}

double train_and_test_ap(const TemporalGraph& g, const SplitSpec& split, const ModelSpec& spec,
                         std::uint64_t seed, const TrainConfig& tcfg) {
  const TimeEncoder enc(spec.time_dim);
  AnyScorer<float> scorer = make_scorer<float>(g, enc, spec, seed);
  const VecXd best = std::visit(
      [&](auto& s) {
        return train_link_prediction(s, g, split, tcfg).best_params.template cast<double>();
      },
      scorer);

  AnyScorer<double> eval_scorer = make_scorer<double>(g, enc, spec, seed);
  EvalConfig ecfg;
  ecfg.seed = seed;
  ecfg.with_rank_metrics = false;
  return std::visit(
      [&](auto& s) {
        s.set_params_flat(best);
        return evaluate(s, g, split, ecfg).ap;
      },
      eval_scorer);
}

double fla_at_init(const TemporalGraph& g, const SplitSpec& split, const ModelSpec& spec,
                   std::uint64_t seed, Eigen::Index nsub, double* ge_out) {
  const TimeEncoder enc(spec.time_dim);
  AnyScorer<double> scorer = make_scorer<double>(g, enc, spec, seed);
  const JacobianMatrix jac =
      std::visit([&](auto& s) { return compute_jacobian(s, g, split, nsub, seed); }, scorer);
  const FlaReport rep = compute_fla(jac);
  if (ge_out) {
    *ge_out = generalization_error(spec.kind, spec.layers, 1.0, 1.0, rep.r,
                                   static_cast<double>(split.train_end_idx))
                  .ge;
  }
  return rep.fla;
}

// ---------------------------------------------------------------------------
// Criterion 1: hand-derived gradients vs central finite differences, every
// architecture x {relu, tanh, sigmoid}, 20 instances each, rel error <= 1e-5.
// ---------------------------------------------------------------------------

/// Kink detector: central differences at eps and eps/2 agree on smooth
/// instances; a ReLU kink inside the stencil breaks the agreement. Keeps the
/// oracle independent of the gradient under test.
template <class Scorer>
bool fd_stencil_smooth(Scorer& scorer, const LinkRef& link, const VecXd& fd_full,
                       double eps) {
  const VecXd fd_half = finite_difference_grad(scorer, link, eps / 2);
  return (fd_full - fd_half).template lpNorm<Eigen::Infinity>() <=
         1e-6 * (1.0 + fd_full.template lpNorm<Eigen::Infinity>());
}

Outcome criterion1() {
  constexpr double kTol = 1e-5;
  constexpr double kEps = 1e-4;

  SyntheticConfig gcfg;
  gcfg.num_initiators = 10;
  gcfg.num_responders = 14;
  gcfg.num_edges = 240;
  gcfg.node_feat_dim = 3;
  gcfg.edge_feat_dim = 4;
  gcfg.seed = 5;
  const TemporalGraph g = normalize_features(make_planted_recency_graph(gcfg));
  const TimeEncoder enc(5);

  struct Variant {
    const char* name;
    MethodKind kind;
    int layers;
  };
  const std::vector<Variant> variants = {
      {"stone", MethodKind::stone, 2}, {"gnn-L2", MethodKind::gnn, 2},
      {"gnn-L3", MethodKind::gnn, 3},  {"rnn-L2", MethodKind::rnn, 2},
      {"rnn-L4", MethodKind::rnn, 4},  {"memory", MethodKind::memory, 0},
  };

  int checked = 0, failed = 0, resampled = 0;
  double worst = 0;
  for (const Variant& variant : variants) {
    for (const Activation act : {Activation::relu, Activation::tanh, Activation::sigmoid}) {
      for (int inst = 0; inst < 20; ++inst) {
        ModelSpec spec = ModelSpec::defaults_for(variant.kind);
        if (variant.layers > 0) spec.layers = variant.layers;
        spec.hidden = 6;
        spec.time_dim = enc.dim();
        spec.k = 4;
        spec.k2 = 3;
        spec.mlp_hidden = 5;
        spec.activation = act;

        // Instances away from ReLU kinks: bump the seed until the FD stencil
        // is smooth (at most a handful of bumps ever trigger).
        for (int attempt = 0; attempt < 6; ++attempt) {
          const std::uint64_t seed =
              1000 * static_cast<std::uint64_t>(variant.kind) + 100 * static_cast<int>(act) +
              static_cast<std::uint64_t>(inst) + 17 * static_cast<std::uint64_t>(attempt);
          AnyScorer<double> scorer = make_scorer<double>(g, enc, spec, seed);

          std::mt19937_64 pick(mix64(seed));
          std::uniform_int_distribution<std::size_t> tail(g.interactions().size() - 40,
                                                          g.interactions().size() - 1);
          const auto& e = g.interactions()[tail(pick)];
          const LinkRef link{e.src, e.dst, e.timestamp, -1};

          const bool ok = std::visit(
              [&](auto& s) {
                if constexpr (std::decay_t<decltype(s)>::stateful) {
                  s.reset_stream();
                  for (EdgeId i = 0; i + 40 < g.num_edges(); ++i) s.on_event(i);
                }
                VecXd analytic(s.param_count());
                s.logit_with_grad(link, analytic);
                const VecXd fd = finite_difference_grad(s, link, kEps);
                if (act == Activation::relu && !fd_stencil_smooth(s, link, fd, kEps))
                  return false;  // kink inside the stencil: resample
                ++checked;
                const double err = grad_rel_error(analytic, fd);
                worst = std::max(worst, err);
                if (err > kTol) ++failed;
                return true;
              },
              scorer);
          if (ok) break;
          ++resampled;
        }
      }
    }
  }

  Outcome out;
  out.pass = failed == 0 && checked == static_cast<int>(variants.size()) * 3 * 20;
  std::ostringstream ss;
  ss << checked << " instances, worst rel error " << worst << ", " << resampled
     << " kink resamples";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: FLA vs explicit dense inversion, scale covariance, eigen bound.
// ---------------------------------------------------------------------------

Outcome criterion2() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(2, 50);
  std::normal_distribution<double> gauss(0.0, 1.0);

  int failed = 0;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    const int p = n + size(rng);
    JacobianMatrix jac;
    jac.j.resize(n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < p; ++c) jac.j(r, c) = gauss(rng);
    jac.y.resize(n);
    for (int i = 0; i < n; ++i) jac.y[i] = rng() % 2 == 0 ? 1.0 : -1.0;

    const MatXd k = jac.j * jac.j.transpose();
    const double direct = jac.y.dot(k.inverse() * jac.y);
    const FlaReport rep = compute_fla(jac);
    const double rel = std::abs(rep.fla - direct) / std::abs(direct);
    worst = std::max(worst, rel);
    if (rel > 1e-8) ++failed;

    // Scale covariance: fla(cJ) = fla(J) / c^2.
    for (const double c : {0.5, 2.0}) {
      JacobianMatrix scaled = jac;
      scaled.j *= c;
      if (std::abs(compute_fla(scaled).fla - rep.fla / (c * c)) >
          1e-8 * std::abs(rep.fla / (c * c)))
        ++failed;
    }

    // fla <= ||y||^2 / lambda_min at zero jitter.
    Eigen::SelfAdjointEigenSolver<MatXd> es(k, Eigen::EigenvaluesOnly);
    if (rep.fla > jac.y.squaredNorm() / es.eigenvalues().minCoeff() * (1 + 1e-9)) ++failed;
  }

  Outcome out;
  out.pass = failed == 0;
  std::ostringstream ss;
  ss << "200 instances, worst rel error vs dense inverse " << worst;
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: samplers vs naive full-scan oracles on a 1e5-edge graph, plus
// the worked neighborhood example.
// ---------------------------------------------------------------------------

std::vector<AdjEntry> naive_history(const TemporalGraph& g, NodeId v, Time t, Direction dir) {
  std::vector<AdjEntry> all;
  for (EdgeId i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.interactions()[static_cast<std::size_t>(i)];
    if (e.timestamp >= t) continue;
    if (e.src == v) all.push_back({e.dst, e.timestamp, i});
    if (dir == Direction::bidirected && e.dst == v) all.push_back({e.src, e.timestamp, i});
  }
  std::sort(all.begin(), all.end(), [](const AdjEntry& a, const AdjEntry& b) {
    return a.t != b.t ? a.t < b.t : a.idx < b.idx;
  });
  return all;
}

Outcome criterion3() {
  SyntheticConfig cfg;
  cfg.num_initiators = 150;
  cfg.num_responders = 150;
  cfg.num_edges = 100000;
  cfg.node_feat_dim = 0;
  cfg.edge_feat_dim = 0;
  cfg.seed = 23;
  const TemporalGraph g = make_planted_recency_graph(cfg);

  std::mt19937_64 rng(31);
  std::uniform_int_distribution<NodeId> node(0, g.num_nodes() - 1);
  std::uniform_real_distribution<Time> time(0.0, g.interactions().back().timestamp * 1.05);
  std::uniform_int_distribution<int> kk(1, 30);

  int failed = 0;
  for (int q = 0; q < 1000; ++q) {
    const NodeId v = node(rng);
    const Time t = time(rng);
    const int k = kk(rng);
    const Direction dir = q % 2 == 0 ? Direction::bidirected : Direction::directed;
    const auto hist = naive_history(g, v, t, dir);

    // recent: last k of the sorted history, reversed.
    const auto recent = recent_neighbors(g, v, t, k, dir);
    const std::size_t take = std::min<std::size_t>(k, hist.size());
    bool ok = recent.entries.size() == take;
    for (std::size_t i = 0; ok && i < take; ++i)
      ok = recent.entries[i].idx == hist[hist.size() - 1 - i].idx && recent.entries[i].t < t;
    if (!ok) ++failed;

    // uniform: same sampling logic fed by the full-scan history and the same
    // generator state must reproduce the library result exactly.
    std::mt19937_64 lib_rng(mix64(q + 1)), oracle_rng(mix64(q + 1));
    const auto uniform = uniform_neighbors(g, v, t, k, dir, lib_rng);
    std::vector<std::size_t> pool(hist.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::vector<std::size_t> chosen;
    if (hist.size() <= static_cast<std::size_t>(k)) {
      chosen = pool;
    } else {
      for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                        pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(oracle_rng)]);
      }
      chosen.assign(pool.begin(), pool.begin() + k);
    }
    std::sort(chosen.begin(), chosen.end(), std::greater<>());
    ok = uniform.entries.size() == chosen.size();
    for (std::size_t i = 0; ok && i < chosen.size(); ++i)
      ok = uniform.entries[i].idx == hist[chosen[i]].idx && uniform.entries[i].t < t;
    if (!ok) ++failed;

    // two-hop: every branch equals the naive recent query at its own time.
    if (q % 10 == 0) {
      const auto layered = recent_two_hop(g, v, t, std::min(k, 5), 3, dir);
      for (std::size_t b = 0; ok && b < layered.hop2.size(); ++b) {
        const auto& parent = layered.hop1.entries[b];
        const auto branch_hist = naive_history(g, parent.nbr, parent.t, dir);
        const std::size_t btake = std::min<std::size_t>(3, branch_hist.size());
        ok = layered.hop2[b].entries.size() == btake;
        for (std::size_t i = 0; ok && i < btake; ++i)
          ok = layered.hop2[b].entries[i].idx == branch_hist[branch_hist.size() - 1 - i].idx &&
               layered.hop2[b].entries[i].t < parent.t;
      }
      if (!ok) ++failed;
    }
  }

  // Worked example: interactions at t1..t6 with node 4's neighborhood being
  // {(5,t6),(2,t4),(2,t3)} in descending order.
  std::vector<Interaction> ev = {
      {1, 2, 1.0, -1}, {3, 5, 2.0, -1}, {4, 2, 3.0, -1},
      {4, 2, 4.0, -1}, {1, 3, 5.0, -1}, {4, 5, 6.0, -1},
  };
  const TemporalGraph fig = TemporalGraph::from_parts(ev, MatXd(0, 0), MatXd(0, 0));
  const auto nbr = recent_neighbors(fig, 4, 100.0, 10, Direction::bidirected);
  const bool fig_ok = nbr.entries.size() == 3 && nbr.entries[0].nbr == 5 &&
                      nbr.entries[0].t == 6.0 && nbr.entries[1].nbr == 2 &&
                      nbr.entries[1].t == 4.0 && nbr.entries[2].nbr == 2 &&
                      nbr.entries[2].t == 3.0;
  if (!fig_ok) ++failed;

  Outcome out;
  out.pass = failed == 0;
  std::ostringstream ss;
  ss << "1000 queries on " << g.num_edges() << " edges, worked example "
     << (fig_ok ? "exact" : "MISMATCH");
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: metric implementations vs brute-force references.
// ---------------------------------------------------------------------------

Outcome criterion4() {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_int_distribution<int> quantized(0, 9);
  std::uniform_real_distribution<double> smooth(0.0, 1.0);

  int failed = 0, checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<double> scores(static_cast<std::size_t>(n));
    std::vector<int> labels(static_cast<std::size_t>(n));
    bool pos = false, neg = false;
    const bool ties = trial % 2 == 0;
    for (int i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] = ties ? 0.1 * quantized(rng) : smooth(rng);
      labels[static_cast<std::size_t>(i)] = quantized(rng) < 5 ? 1 : 0;
      (labels[static_cast<std::size_t>(i)] != 0 ? pos : neg) = true;
    }
    if (!pos || !neg) continue;
    ++checked;

    // Brute-force AP: walk the stable-sorted sequence accumulating dR * P.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double n_pos = 0;
    for (int l : labels) n_pos += l != 0;
    double ap_ref = 0, hits = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (labels[order[r]] != 0) {
        hits += 1;
        ap_ref += (1.0 / n_pos) * (hits / static_cast<double>(r + 1));
      }
    }
    if (std::abs(average_precision(scores, labels) - ap_ref) > 1e-10) ++failed;

    // Brute-force AUC: all-pairs comparison.
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (labels[i] == 0) continue;
      for (std::size_t j = 0; j < scores.size(); ++j) {
        if (labels[j] != 0) continue;
        pairs += 1;
        if (scores[i] > scores[j]) wins += 1;
        else if (scores[i] == scores[j]) wins += 0.5;
      }
    }
    if (std::abs(auc_roc(scores, labels) - wins / pairs) > 1e-10) ++failed;

    // Rank metrics vs direct counting.
    const double pos_score = smooth(rng);
    std::vector<double> negs(100);
    for (auto& s : negs) negs.size() % 2 == 0 ? s = smooth(rng) : s = 0.1 * quantized(rng);
    double above = 0, tied = 0;
    for (double s : negs) {
      if (s > pos_score) above += 1;
      else if (s == pos_score) tied += 1;
    }
    const double rank_ref = 1 + above + 0.5 * tied;
    const RankMetrics rm = rank_against_negatives(pos_score, negs);
    if (std::abs(rm.rank - rank_ref) > 1e-12 ||
        rm.recall_at_1 != (rank_ref <= 1.0 ? 1 : 0) ||
        rm.recall_at_5 != (rank_ref <= 5.0 ? 1 : 0) ||
        std::abs(rm.reciprocal_rank - 1.0 / rank_ref) > 1e-12)
      ++failed;
  }

  Outcome out;
  out.pass = failed == 0 && checked > 900;
  std::ostringstream ss;
  ss << checked << " instances compared to brute force";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: UCI desk-scale run with the default hyperparameters.
// ---------------------------------------------------------------------------

std::filesystem::path find_uci() {
  std::vector<std::filesystem::path> roots;
  if (const char* env = std::getenv("STGL_DATA_DIR")) roots.emplace_back(env);
  roots.emplace_back("data");
  roots.emplace_back(".");
  for (const auto& root : roots)
    for (const char* name : {"uci.csv", "CollegeMsg.txt", "college_msg.txt"}) {
      const auto p = root / name;
      if (std::filesystem::exists(p)) return p;
    }
  return {};
}

TemporalGraph load_uci(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return ingest_csv(path);
  // Raw space-separated `src dst unixtime` rows, ids as published.
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<Interaction> events;
  NodeId a, b;
  double t;
  while (is >> a >> b >> t) events.push_back({a, b, t, -1});
  return TemporalGraph::from_parts(std::move(events), MatXd(0, 0), MatXd(0, 0));
}

Outcome criterion5() {
  const auto path = find_uci();
  Outcome out;
  if (path.empty()) {
    out.skip = true;
    out.detail =
        "UCI dataset not found (set STGL_DATA_DIR to a directory holding uci.csv or "
        "CollegeMsg.txt); this sandbox has no network access to fetch it";
    return out;
  }

  const TemporalGraph g = normalize_features(load_uci(path));
  if (g.num_edges() != 59835) {
    out.detail = "expected 59,835 edges, found " + std::to_string(g.num_edges());
    return out;
  }
  const SplitSpec split = chronological_split(g);

  ModelSpec spec = ModelSpec::defaults_for(MethodKind::stone);
  spec.hidden = 100;
  spec.time_dim = 100;
  spec.k = 20;
  spec.mlp_hidden = 100;

  double ap_sum = 0;
  std::ostringstream aps;
  for (const std::uint64_t seed : {0, 1, 2}) {
    TrainConfig tcfg;  // paper defaults: lr 1e-4, wd 1e-6, batch 600, patience 20
    tcfg.max_epochs = 60;
    tcfg.seed = seed;
    const double ap = train_and_test_ap(g, split, spec, seed, tcfg);
    ap_sum += ap;
    aps << " " << ap;
  }
  const double mean_ap = ap_sum / 3.0;

  out.pass = mean_ap >= 0.90;
  std::ostringstream ss;
  ss << "mean test AP " << mean_ap << " over seeds{" << aps.str() << " }";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: generalization-error score vs test AP, inverse rank correlation.
// ---------------------------------------------------------------------------

Outcome criterion6() {
  const TemporalGraph g = acceptance_graph();
  const SplitSpec split = chronological_split(g);

  std::vector<double> ges, aps;
  std::ostringstream per_method;
  for (const MethodKind kind :
       {MethodKind::stone, MethodKind::gnn, MethodKind::rnn, MethodKind::memory}) {
    const ModelSpec spec = acceptance_spec(kind);
    double ap_sum = 0, ge_sum = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const double ap = train_and_test_ap(g, split, spec, seed, acceptance_train(seed));
      double ge = 0;
      fla_at_init(g, split, spec, seed, 1024, &ge);
      aps.push_back(ap);
      ges.push_back(ge);
      ap_sum += ap;
      ge_sum += ge;
    }
    per_method << " " << to_string(kind) << "(AP " << ap_sum / 6 << ", GE " << ge_sum / 6 << ")";
  }

  const double rho = spearman_correlation(ges, aps);
  Outcome out;
  out.pass = rho < 0;
  std::ostringstream ss;
  ss << "Spearman(GE, AP) = " << rho << " over 24 runs;" << per_method.str();
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: input-selection ablation directions for SToNe.
// ---------------------------------------------------------------------------

Outcome criterion7() {
  const TemporalGraph g = acceptance_graph();
  const SplitSpec split = chronological_split(g);

  struct Cell {
    const char* name;
    SampleMode sampling;
    Direction direction;
    double mean_ap = 0;
    double mean_fla = 0;
  };
  std::vector<Cell> cells = {
      {"recent-bi", SampleMode::recent, Direction::bidirected},
      {"uniform-bi", SampleMode::uniform, Direction::bidirected},
      {"recent-di", SampleMode::recent, Direction::directed},
  };

  for (Cell& cell : cells) {
    ModelSpec spec = acceptance_spec(MethodKind::stone);
    spec.sampling = cell.sampling;
    spec.direction = cell.direction;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      cell.mean_ap += train_and_test_ap(g, split, spec, seed, acceptance_train(seed)) / 6;
      cell.mean_fla += fla_at_init(g, split, spec, seed, 1024, nullptr) / 6;
    }
  }

  const Cell& base = cells[0];
  const Cell& uniform = cells[1];
  const Cell& directed = cells[2];
  const bool fla_up = uniform.mean_fla > base.mean_fla && directed.mean_fla > base.mean_fla;
  const bool ap_not_up = uniform.mean_ap <= base.mean_ap && directed.mean_ap <= base.mean_ap;

  Outcome out;
  out.pass = fla_up && ap_not_up;
  std::ostringstream ss;
  for (const Cell& cell : cells)
    ss << " " << cell.name << "(AP " << cell.mean_ap << ", FLA " << cell.mean_fla << ")";
  out.detail = ss.str().substr(1);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: stop-gradient invariant and the partial-alpha rule.
// ---------------------------------------------------------------------------

Outcome criterion8() {
  SyntheticConfig gcfg;
  gcfg.num_initiators = 8;
  gcfg.num_responders = 8;
  gcfg.num_edges = 160;
  gcfg.node_feat_dim = 3;
  gcfg.edge_feat_dim = 4;
  gcfg.seed = 44;
  const TemporalGraph g = normalize_features(make_planted_recency_graph(gcfg));
  const TimeEncoder enc(5);
  std::ostringstream ss;
  bool pass = true;

  {
    // Stop-gradient: the hand gradient equals detached-memory finite
    // differences and must differ from through-time finite differences.
    ModelSpec spec = ModelSpec::defaults_for(MethodKind::memory);
    spec.hidden = 6;
    spec.time_dim = enc.dim();
    spec.mlp_hidden = 5;
    auto scorer = std::get<MemoryScorer<double>>(make_scorer<double>(g, enc, spec, 3));
    const EdgeId replay_to = g.num_edges() - 10;
    const auto& e = g.interactions()[static_cast<std::size_t>(replay_to)];
    const LinkRef link{e.src, e.dst, e.timestamp, -1};

    scorer.reset_stream();
    for (EdgeId i = 0; i < replay_to; ++i) scorer.on_event(i);
    VecXd analytic(scorer.param_count());
    scorer.logit_with_grad(link, analytic);
    const VecXd detached_fd = finite_difference_grad(scorer, link, 1e-4);

    struct ReplayModel {
      using Scalar = double;
      using Input = LinkRef;
      MemoryScorer<double>* scorer;
      EdgeId replay_to;
      Eigen::Index param_count() const { return scorer->param_count(); }
      VecXd params_flat() const { return scorer->params_flat(); }
      void set_params_flat(const VecXd& v) { scorer->set_params_flat(v); }
      double value(const Input& link) const {
        scorer->reset_stream();
        for (EdgeId i = 0; i < replay_to; ++i) scorer->on_event(i);
        return scorer->logit(link);
      }
    };
    ReplayModel replay{&scorer, replay_to};
    const VecXd through_time_fd = finite_difference_grad(replay, link, 1e-4);

    const double match = grad_rel_error(analytic, detached_fd);
    const double divergence = (through_time_fd - detached_fd).lpNorm<Eigen::Infinity>();
    const bool ok = match <= 1e-5 && divergence > 1e-4;
    pass = pass && ok;
    ss << "stopgrad(detached match " << match << ", through-time divergence " << divergence
       << ")";
  }

  {
    // Partial alpha: slots beyond the observed event count have zero grad.
    ModelSpec spec = ModelSpec::defaults_for(MethodKind::stone);
    spec.hidden = 6;
    spec.time_dim = enc.dim();
    spec.k = 8;
    spec.mlp_hidden = 5;
    auto scorer = std::get<StoneScorer<double>>(make_scorer<double>(g, enc, spec, 5));

    // Find a link whose endpoints have seen some, but fewer than K, events.
    int used = 0;
    LinkRef link;
    for (const auto& e : g.interactions()) {
      const int src_hist = static_cast<int>(
          recent_neighbors(g, e.src, e.timestamp, 100).entries.size());
      const int dst_hist = static_cast<int>(
          recent_neighbors(g, e.dst, e.timestamp, 100).entries.size());
      const int m = std::max(src_hist, dst_hist);
      if (m >= 2 && m <= 6) {
        used = m;
        link = {e.src, e.dst, e.timestamp, -1};
        break;
      }
    }

    VecXd grad(scorer.param_count());
    scorer.logit_with_grad(link, grad);
    bool ok = used >= 2;
    for (int k = used; k < 8; ++k) ok = ok && grad[k] == 0.0;
    ok = ok && grad.head(used).lpNorm<Eigen::Infinity>() > 0.0;
    pass = pass && ok;
    ss << "; partial-alpha(" << used << " of 8 slots active, trailing grads "
       << (ok ? "zero" : "NONZERO") << ")";
  }

  Outcome out;
  out.pass = pass;
  out.detail = ss.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--criterion") only = std::atoi(argv[i + 1]);

  struct Entry {
    int id;
    const char* title;
    Outcome (*run)();
  };
  const std::vector<Entry> entries = {
      {1, "gradient oracle suite (hand vs finite differences)", criterion1},
      {2, "feature-label alignment vs dense inversion", criterion2},
      {3, "temporal samplers vs full-scan oracles", criterion3},
      {4, "ranking metrics vs brute force", criterion4},
      {5, "UCI desk-scale training run", criterion5},
      {6, "GE score vs test AP inverse correlation", criterion6},
      {7, "input-selection ablation directions", criterion7},
      {8, "stop-gradient and partial-alpha invariants", criterion8},
  };

  bool any_fail = false;
  for (const Entry& entry : entries) {
    if (only != 0 && entry.id != only) continue;
    Timer timer;
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const char* tag = outcome.skip ? "[SKIP]" : outcome.pass ? "[PASS]" : "[FAIL]";
    std::cout << tag << " criterion " << entry.id << ": " << entry.title << " — "
              << outcome.detail << " (" << timer.seconds() << "s)" << std::endl;
    if (!outcome.pass && !outcome.skip) any_fail = true;
  }
  return any_fail ? 1 : 0;
}
