#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cli_common.hpp"
#include "stgl/evaluate.hpp"
#include "stgl/jacobian.hpp"
#include "stgl/synthetic.hpp"
#include "stgl/training.hpp"

namespace stgl::cli {

namespace {

namespace fs = std::filesystem;

ModelSpec build_spec(const ModelOptions& opt) {
  ModelSpec spec = ModelSpec::defaults_for(method_kind_from_string(opt.method));
  spec.hidden = opt.hidden;
  spec.time_dim = opt.time_dim;
  spec.k = opt.k;
  spec.k2 = opt.k2;
  spec.hops = opt.hops;
  if (opt.layers > 0) spec.layers = opt.layers;
  spec.mlp_hidden = opt.mlp_hidden;
  spec.sampling = sample_mode_from_string(opt.sampling);
  spec.direction = direction_from_string(opt.direction);
  spec.fixed_alpha = opt.fixed_alpha;
  if (!opt.activation.empty()) spec.activation = activation_from_string(opt.activation);
  return spec;
}

TrainConfig build_train_config(const TrainOptions& opt, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.lr = opt.lr;
  cfg.weight_decay = opt.weight_decay;
  cfg.batch_size = opt.batch_size;
  cfg.max_epochs = opt.max_epochs;
  cfg.patience = opt.patience;
  cfg.seed = seed;
  if (opt.optimizer == "sgd") cfg.optimizer = OptimizerKind::sgd;
  else if (opt.optimizer == "adam") cfg.optimizer = OptimizerKind::adam;
  else throw UsageError("unknown optimizer '" + opt.optimizer + "' (sgd|adam)");
  return cfg;
}

TemporalGraph load_graph(const DataOptions& data) {
  if (data.snapshot.empty()) throw UsageError("--snapshot is required");
  const fs::path path = resolve_data_path(data.snapshot);
  if (!fs::exists(path)) throw UsageError("snapshot not found: " + path.string());
  return TemporalGraph::load_snapshot(path);
}

std::string dataset_name(const DataOptions& data, const EvalOptions* eval = nullptr) {
  if (eval && !eval->dataset.empty()) return eval->dataset;
  return fs::path(data.snapshot).stem().string();
}

void write_history_csv(const fs::path& path, const TrainHistory& h) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << "epoch,train_ap,val_ap,loss,seconds\n";
  for (std::size_t e = 0; e < h.epochs(); ++e)
    os << e << "," << h.train_ap[e] << "," << h.val_ap[e] << "," << h.loss[e] << ","
       << h.seconds[e] << "\n";
}

struct SeedRun {
  std::uint64_t seed = 0;
  double best_val_ap = 0;
  int best_epoch = -1;
  fs::path checkpoint;
  fs::path history;
};

/// Trains one seed of one configuration and writes checkpoint + history.
SeedRun train_one(const TemporalGraph& g, const SplitSpec& split, const ModelSpec& spec,
                  const TrainOptions& topt, std::uint64_t seed, const fs::path& out_dir,
                  const std::string& tag) {
  const TimeEncoder enc(spec.time_dim);
  const TrainConfig cfg = build_train_config(topt, seed);

  AnyScorer<float> scorer = make_scorer<float>(g, enc, spec, seed);
  TrainResult<float> result = std::visit(
      [&](auto& s) { return train_link_prediction(s, g, split, cfg); }, scorer);

  SeedRun run;
  run.seed = seed;
  run.best_val_ap = result.best_val_ap;
  run.best_epoch = result.best_epoch;

  Checkpoint ckpt;
  ckpt.spec = spec;
  ckpt.seed = seed;
  ckpt.params = result.best_params.cast<double>();
  run.checkpoint = out_dir / (tag + "_seed" + std::to_string(seed) + ".ckpt");
  save_checkpoint(run.checkpoint, ckpt);

  run.history = out_dir / (tag + "_seed" + std::to_string(seed) + "_history.csv");
  write_history_csv(run.history, result.history);
  return run;
}

MetricsReport eval_checkpoint(const TemporalGraph& g, const SplitSpec& split,
                              const Checkpoint& ckpt, EvalSetting setting, std::uint64_t eval_seed,
                              int rank_negatives) {
  const TimeEncoder enc(ckpt.spec.time_dim);
  AnyScorer<double> scorer = make_scorer<double>(g, enc, ckpt.spec, ckpt.seed);
  EvalConfig ecfg;
  ecfg.setting = setting;
  ecfg.seed = eval_seed;
  ecfg.rank_negatives = rank_negatives;
  return std::visit(
      [&](auto& s) {
        s.set_params_flat(ckpt.params);
        return evaluate(s, g, split, ecfg);
      },
      scorer);
}

struct FlaRun {
  FlaReport fla;
  GeScore ge;
};

FlaRun fla_one(const TemporalGraph& g, const SplitSpec& split, const ModelSpec& spec,
               const FlaOptions& fopt, std::uint64_t seed) {
  const TimeEncoder enc(spec.time_dim);
  AnyScorer<double> scorer = make_scorer<double>(g, enc, spec, seed);
  const Eigen::Index nsub =
      std::min<Eigen::Index>(fopt.nsub, 2 * static_cast<Eigen::Index>(split.train_end_idx));
  const JacobianMatrix jac = std::visit(
      [&](auto& s) { return compute_jacobian(s, g, split, nsub, seed); }, scorer);

  FlaRun out;
  out.fla = compute_fla(jac, fopt.jitter);
  out.ge = generalization_error(spec.kind, spec.layers, fopt.rho, fopt.tau, out.fla.r,
                                static_cast<double>(split.train_end_idx));
  return out;
}

json fla_to_json(const ModelSpec& spec, std::uint64_t seed, const FlaRun& run) {
  return json{{"method", stgl::to_string(spec.kind)},
              {"seed", seed},
              {"n_sub", run.fla.n_sub},
              {"p", run.fla.p},
              {"fla", run.fla.fla},
              {"r", run.fla.r},
              {"c", run.ge.c},
              {"d", run.ge.d},
              {"ge", run.ge.ge},
              {"jitter", run.fla.jitter},
              {"lambda_min_est", run.fla.lambda_min_est},
              {"lambda_max_est", run.fla.lambda_max_est},
              {"overparam_ok", run.fla.overparam_ok},
              {"label_mode", "mixed"}};
}

/// Reads `method,...,seed,...` keyed AP values from a run-ledger CSV.
std::map<std::pair<std::string, std::uint64_t>, double> read_ledger_ap(const fs::path& path) {
  std::map<std::pair<std::string, std::uint64_t>, double> out;
  std::ifstream is(path);
  if (!is) throw IoError("cannot open ledger " + path.string());
  std::string line;
  std::getline(is, line);  // header: method,dataset,seed,setting,ap,...
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string method, dataset, seed, setting, ap;
    std::getline(ss, method, ',');
    std::getline(ss, dataset, ',');
    std::getline(ss, seed, ',');
    std::getline(ss, setting, ',');
    std::getline(ss, ap, ',');
    if (ap.empty()) continue;
    out[{method, std::stoull(seed)}] = std::stod(ap);
  }
  return out;
}

}  // namespace

int cmd_ingest(const DataOptions& data, const CommonOptions& common) {
  if (data.csv.empty()) throw UsageError("--csv is required");
  const fs::path csv = resolve_data_path(data.csv);
  if (!fs::exists(csv)) throw UsageError("input file not found: " + csv.string());
  const fs::path out =
      data.out.empty() ? fs::path(common.out_dir) / (csv.stem().string() + ".stgl")
                       : fs::path(data.out);

  RunManifest manifest(out.string() + ".manifest.json", "ingest",
                       json{{"csv", csv.string()},
                            {"out", out.string()},
                            {"normalize", !data.no_normalize}});
  manifest.set("dataset_hash", fnv1a_file(csv));
  const auto t0 = std::chrono::steady_clock::now();

  TemporalGraph g = ingest_csv(csv);
  if (!data.no_normalize) g = normalize_features(g);
  if (g.was_resorted())
    std::cerr << "warning: input rows were not in timestamp order; re-sorted\n";
  g.save_snapshot(out);
  manifest.add_output(out);

  const GraphStats stats = g.stats();
  const json stats_json{{"num_nodes", stats.num_nodes},     {"num_edges", stats.num_edges},
                        {"avg_time_gap", stats.avg_time_gap}, {"d_n", stats.d_n},
                        {"d_e", stats.d_e},                  {"has_node_feats", stats.has_node_feats},
                        {"has_edge_feats", stats.has_edge_feats},
                        {"resorted", g.was_resorted()},      {"normalized", !data.no_normalize}};
  const fs::path stats_path =
      data.stats_out.empty() ? fs::path(out.string() + ".stats.json") : fs::path(data.stats_out);
  write_json(stats_path, stats_json);
  manifest.add_output(stats_path);

  std::cout << stats_json.dump(2) << "\n";
  manifest.finalize(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return 0;
}

int cmd_synth(const SynthOptions& synth, const CommonOptions& common) {
  SyntheticConfig cfg;
  cfg.num_initiators = synth.initiators;
  cfg.num_responders = synth.responders;
  cfg.num_edges = synth.edges;
  cfg.node_feat_dim = synth.feat_dim;
  cfg.edge_feat_dim = synth.edge_feat_dim;
  cfg.repeat_prob = synth.repeat_prob;
  cfg.background_prob = synth.background_prob;
  cfg.signature_noise = synth.signature_noise;
  cfg.popularity_skew = synth.popularity_skew;
  cfg.seed = synth.seed;
  const TemporalGraph g = make_planted_recency_graph(cfg);

  const fs::path out = synth.out.empty() ? fs::path(common.out_dir) / "synthetic.csv"
                                         : fs::path(synth.out);
  std::ofstream os(out);
  if (!os) throw IoError("cannot write " + out.string());
  os << "src,dst,timestamp";
  for (int j = 0; j < g.edge_feat_dim(); ++j) os << ",f" << j;
  os << "\n";
  os.precision(17);
  for (EdgeId i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.interactions()[static_cast<std::size_t>(i)];
    os << e.src << "," << e.dst << "," << e.timestamp;
    for (Eigen::Index j = 0; j < g.edge_feats().cols(); ++j) os << "," << g.edge_feats()(i, j);
    os << "\n";
  }

  if (g.node_feat_dim() > 0) {
    const fs::path side = out.parent_path() / "node_feats.csv";
    std::ofstream ns(side);
    ns << "node_id";
    for (int j = 0; j < g.node_feat_dim(); ++j) ns << ",f" << j;
    ns << "\n";
    ns.precision(17);
    for (Eigen::Index i = 0; i < g.node_feats().rows(); ++i) {
      ns << i;
      for (Eigen::Index j = 0; j < g.node_feats().cols(); ++j) ns << "," << g.node_feats()(i, j);
      ns << "\n";
    }
  }
  std::cout << "wrote " << out.string() << " (" << g.num_edges() << " edges, "
            << g.num_nodes() << " nodes)\n";
  return 0;
}

int cmd_train(const DataOptions& data, const ModelOptions& model, const TrainOptions& train,
              const CommonOptions& common) {
  const TemporalGraph g = load_graph(data);
  const SplitSpec split = chronological_split(g);
  const ModelSpec spec = build_spec(model);
  const auto seeds = parse_seed_list(train.seeds);
  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);
  const std::string tag = std::string(stgl::to_string(spec.kind));

  RunManifest manifest(
      out_dir / (tag + "_train.manifest.json"), "train",
      json{{"model", spec_to_json(spec)},
           {"train",
            json{{"lr", train.lr},
                 {"weight_decay", train.weight_decay},
                 {"batch_size", train.batch_size},
                 {"max_epochs", train.max_epochs},
                 {"patience", train.patience},
                 {"optimizer", train.optimizer},
                 {"algorithm1", train.algorithm1}}},
           {"snapshot", data.snapshot}});
  manifest.set("seeds", seeds);
  manifest.set("dataset_hash", fnv1a_file(resolve_data_path(data.snapshot)));
  const auto t0 = std::chrono::steady_clock::now();

  if (train.algorithm1) {
    // Theory mode: single-example SGD over a +-1-labeled example stream.
    const TimeEncoder enc(spec.time_dim);
    for (const std::uint64_t seed : seeds) {
      AnyScorer<double> scorer = make_scorer<double>(g, enc, spec, seed);
      const auto n =
          std::min<std::int64_t>(train.algorithm1_n, static_cast<std::int64_t>(split.train_end_idx));
      auto neg_rng = RunRng(seed).stream("algorithm1-negatives");

      std::vector<std::pair<LinkRef, int>> stream;
      stream.reserve(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; static_cast<std::int64_t>(stream.size()) < n; ++i) {
        const auto& e = g.interactions()[static_cast<std::size_t>(i % split.train_end_idx)];
        if (i % 2 == 0) stream.push_back({{e.src, e.dst, e.timestamp, i % split.train_end_idx}, 1});
        else stream.push_back({{e.src, sample_negative(neg_rng, g, e.dst), e.timestamp, -1}, -1});
      }

      const fs::path trace_path = out_dir / (tag + "_seed" + std::to_string(seed) + "_algorithm1.csv");
      std::ofstream trace(trace_path);
      trace << "iter,f,y,loss\n";
      auto pick_rng = RunRng(seed).stream("algorithm1-pick");
      std::visit(
          [&](auto& s) {
            struct Traced {
              std::decay_t<decltype(s)>* inner;
              const std::vector<std::pair<LinkRef, int>>* stream;
              std::ofstream* trace;
              std::size_t iter = 0;
              using Scalar = double;
              using Input = LinkRef;
              Eigen::Index param_count() const { return inner->param_count(); }
              VecXd params_flat() const { return inner->params_flat(); }
              void set_params_flat(const VecXd& v) { inner->set_params_flat(v); }
              double value_with_grad(const Input& in, VecXd& grad) {
                const double f = inner->logit_with_grad(in, grad);
                const int y = (*stream)[iter].second;
                (*trace) << iter << "," << f << "," << y << ","
                         << std::log1p(std::exp(-y * f)) << "\n";
                ++iter;
                return f;
              }
            };
            Traced traced{&s, &stream, &trace};
            online_sgd(traced, stream, train.eta, static_cast<std::size_t>(n), pick_rng);

            Checkpoint ckpt;
            ckpt.spec = spec;
            ckpt.seed = seed;
            ckpt.params = traced.params_flat();
            const fs::path cpath = out_dir / (tag + "_seed" + std::to_string(seed) + "_theta.ckpt");
            save_checkpoint(cpath, ckpt);
            manifest.add_output(cpath);
          },
          scorer);
      manifest.add_output(trace_path);
      std::cout << "algorithm1 " << tag << " seed " << seed << ": " << n << " iterations\n";
    }
    manifest.finalize(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
  }

  for (const std::uint64_t seed : seeds) {
    const SeedRun run = train_one(g, split, spec, train, seed, out_dir, tag);
    manifest.add_output(run.checkpoint);
    manifest.add_output(run.history);
    std::cout << "trained " << tag << " seed " << seed << ": best val AP " << run.best_val_ap
              << " at epoch " << run.best_epoch << "\n";
  }
  manifest.finalize(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return 0;
}

int cmd_eval(const DataOptions& data, const EvalOptions& eval, const CommonOptions& common) {
  if (eval.checkpoint.empty()) throw UsageError("--checkpoint is required");
  const TemporalGraph g = load_graph(data);
  const SplitSpec split = chronological_split(g);
  const Checkpoint ckpt = load_checkpoint(resolve_data_path(eval.checkpoint));
  const EvalSetting setting = eval.setting == "inductive" ? EvalSetting::inductive
                              : eval.setting == "transductive"
                                  ? EvalSetting::transductive
                                  : throw UsageError("unknown setting '" + eval.setting + "'");

  const MetricsReport rep =
      eval_checkpoint(g, split, ckpt, setting, eval.seed, eval.rank_negatives);

  const json out{{"method", stgl::to_string(ckpt.spec.kind)},
                 {"dataset", dataset_name(data, &eval)},
                 {"seed", ckpt.seed},
                 {"setting", stgl::to_string(rep.setting)},
                 {"ap", rep.ap},
                 {"auc", rep.auc},
                 {"recall_at_1", rep.recall_at.count(1) ? rep.recall_at.at(1) : 0.0},
                 {"recall_at_5", rep.recall_at.count(5) ? rep.recall_at.at(5) : 0.0},
                 {"mrr", rep.mrr},
                 {"n_eval", rep.n_eval}};
  const fs::path out_path = fs::path(common.out_dir) /
                            (std::string(stgl::to_string(ckpt.spec.kind)) + "_seed" +
                             std::to_string(ckpt.seed) + "_metrics.json");
  fs::create_directories(common.out_dir);
  write_json(out_path, out);
  std::cout << out.dump(2) << "\n";

  if (!eval.ledger.empty()) {
    std::ostringstream row;
    row << stgl::to_string(ckpt.spec.kind) << "," << dataset_name(data, &eval) << "," << ckpt.seed
        << "," << stgl::to_string(rep.setting) << "," << rep.ap << "," << rep.auc << ","
        << (rep.recall_at.count(1) ? rep.recall_at.at(1) : 0.0) << ","
        << (rep.recall_at.count(5) ? rep.recall_at.at(5) : 0.0) << "," << rep.mrr;
    append_csv_row(eval.ledger, "method,dataset,seed,setting,ap,auc,r1,r5,mrr", row.str());
  }
  return 0;
}

int cmd_fla(const DataOptions& data, const ModelOptions& model, const TrainOptions& train,
            const FlaOptions& fla, const CommonOptions& common) {
  const TemporalGraph g = load_graph(data);
  const SplitSpec split = chronological_split(g);
  const ModelSpec spec = build_spec(model);
  const auto seeds = parse_seed_list(train.seeds);
  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);
  const std::string tag = std::string(stgl::to_string(spec.kind));

  RunManifest manifest(out_dir / (tag + "_fla.manifest.json"), "fla",
                       json{{"model", spec_to_json(spec)},
                            {"nsub", fla.nsub},
                            {"jitter", fla.jitter},
                            {"snapshot", data.snapshot}});
  manifest.set("seeds", seeds);
  const auto t0 = std::chrono::steady_clock::now();

  std::optional<std::map<std::pair<std::string, std::uint64_t>, double>> ledger;
  if (!fla.ledger.empty()) ledger = read_ledger_ap(fla.ledger);

  const fs::path scatter_path = out_dir / (tag + "_ge_ap.csv");
  for (const std::uint64_t seed : seeds) {
    const FlaRun run = fla_one(g, split, spec, fla, seed);
    const json j = fla_to_json(spec, seed, run);
    const fs::path jpath = out_dir / (tag + "_seed" + std::to_string(seed) + "_fla.json");
    write_json(jpath, j);
    manifest.add_output(jpath);
    std::cout << j.dump(2) << "\n";

    if (ledger) {
      const auto it = ledger->find({tag, seed});
      if (it != ledger->end()) {
        std::ostringstream row;
        row << tag << "," << seed << "," << run.ge.ge << "," << it->second;
        append_csv_row(scatter_path, "method,seed,ge,ap", row.str());
      }
    }
  }
  if (ledger && fs::exists(scatter_path)) manifest.add_output(scatter_path);
  manifest.finalize(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return 0;
}

int cmd_ablate(const DataOptions& data, const ModelOptions& model, const TrainOptions& train,
               const FlaOptions& fla, const AblateOptions& ablate, const CommonOptions& common) {
  const TemporalGraph g = load_graph(data);
  const SplitSpec split = chronological_split(g);
  const auto seeds = parse_seed_list(train.seeds);
  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);

  struct Cell {
    std::string name;
    SampleMode sampling;
    int hops;
    Direction direction;
    bool fixed_alpha;
  };
  const std::vector<Cell> full_grid = {
      {"recent-1hop:bi:train-alpha", SampleMode::recent, 1, Direction::bidirected, false},
      {"recent-1hop:bi:fixed-alpha", SampleMode::recent, 1, Direction::bidirected, true},
      {"recent-1hop:di:train-alpha", SampleMode::recent, 1, Direction::directed, false},
      {"recent-1hop:di:fixed-alpha", SampleMode::recent, 1, Direction::directed, true},
      {"recent-2hop:bi:train-alpha", SampleMode::recent, 2, Direction::bidirected, false},
      {"recent-2hop:bi:fixed-alpha", SampleMode::recent, 2, Direction::bidirected, true},
      {"recent-2hop:di:train-alpha", SampleMode::recent, 2, Direction::directed, false},
      {"recent-2hop:di:fixed-alpha", SampleMode::recent, 2, Direction::directed, true},
      {"uniform-1hop:bi:train-alpha", SampleMode::uniform, 1, Direction::bidirected, false},
      {"uniform-1hop:bi:fixed-alpha", SampleMode::uniform, 1, Direction::bidirected, true},
      {"uniform-1hop:di:train-alpha", SampleMode::uniform, 1, Direction::directed, false},
      {"uniform-1hop:di:fixed-alpha", SampleMode::uniform, 1, Direction::directed, true},
  };

  std::vector<Cell> grid;
  if (ablate.cells.empty()) {
    grid = full_grid;
  } else {
    std::stringstream ss(ablate.cells);
    std::string want;
    while (std::getline(ss, want, ',')) {
      const auto it = std::find_if(full_grid.begin(), full_grid.end(),
                                   [&](const Cell& c) { return c.name == want; });
      if (it == full_grid.end()) throw UsageError("unknown ablation cell '" + want + "'");
      grid.push_back(*it);
    }
  }
  if (grid.empty()) throw UsageError("empty ablation grid");

  RunManifest manifest(out_dir / "ablate.manifest.json", "ablate",
                       json{{"snapshot", data.snapshot},
                            {"cells", [&] {
                               json names = json::array();
                               for (const auto& c : grid) names.push_back(c.name);
                               return names;
                             }()}});
  manifest.set("seeds", seeds);
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path ledger_path = out_dir / "ablation.csv";

  std::atomic<std::size_t> next{0};
  std::vector<std::pair<Cell, std::uint64_t>> work;
  for (const auto& cell : grid)
    for (const std::uint64_t seed : seeds) work.push_back({cell, seed});

  const auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1)) {
      const auto& [cell, seed] = work[i];
      ModelOptions mopt = model;
      mopt.method = "stone";
      mopt.sampling = cell.sampling == SampleMode::recent ? "recent" : "uniform";
      mopt.hops = cell.hops;
      mopt.direction = cell.direction == Direction::bidirected ? "bi" : "di";
      mopt.fixed_alpha = cell.fixed_alpha;
      const ModelSpec spec = build_spec(mopt);

      const std::string tag = "ablate_" + std::to_string(i);
      const SeedRun run = train_one(g, split, spec, train, seed, out_dir, tag);
      const Checkpoint ckpt = load_checkpoint(run.checkpoint);
      const MetricsReport rep = eval_checkpoint(g, split, ckpt, EvalSetting::transductive, seed,
                                                /*rank_negatives=*/100);
      const FlaRun fla_run = fla_one(g, split, spec, fla, seed);

      std::ostringstream row;
      row << cell.name << "," << to_string(cell.sampling) << "," << cell.hops << ","
          << to_string(cell.direction) << "," << (cell.fixed_alpha ? "fixed" : "trainable") << ","
          << seed << "," << rep.ap << "," << rep.auc << "," << fla_run.fla.fla << ","
          << fla_run.ge.ge;
      append_csv_row(ledger_path,
                     "cell,sampling,hops,direction,alpha,seed,ap,auc,fla,ge", row.str());
    }
  };

  const int jobs = std::max(1, ablate.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  manifest.add_output(ledger_path);
  manifest.finalize(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  std::cout << "ablation ledger: " << ledger_path.string() << "\n";
  return 0;
}

int cmd_report(const ReportOptions& report, const CommonOptions& common) {
  if (report.scatter.empty()) throw UsageError("--scatter is required (ge/ap CSV)");

  struct Point {
    std::string method;
    std::uint64_t seed;
    double ge, ap;
  };
  std::vector<Point> points;
  for (const auto& file : report.scatter) {
    std::ifstream is(resolve_data_path(file));
    if (!is) throw UsageError("cannot open scatter CSV " + file);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
      std::stringstream ss(line);
      Point p;
      std::string seed, ge, ap;
      std::getline(ss, p.method, ',');
      std::getline(ss, seed, ',');
      std::getline(ss, ge, ',');
      std::getline(ss, ap, ',');
      if (ap.empty()) continue;
      p.seed = std::stoull(seed);
      p.ge = std::stod(ge);
      p.ap = std::stod(ap);
      points.push_back(p);
    }
  }
  if (points.size() < 2) throw UsageError("need at least two (ge, ap) points");

  std::vector<double> ges, aps;
  std::map<std::string, std::pair<double, int>> per_method_ge, per_method_ap;
  for (const auto& p : points) {
    ges.push_back(p.ge);
    aps.push_back(p.ap);
    per_method_ge[p.method].first += p.ge;
    per_method_ge[p.method].second += 1;
    per_method_ap[p.method].first += p.ap;
    per_method_ap[p.method].second += 1;
  }

  json methods = json::object();
  for (const auto& [name, sum] : per_method_ge)
    methods[name] = json{{"mean_ge", sum.first / sum.second},
                         {"mean_ap", per_method_ap[name].first / per_method_ap[name].second},
                         {"runs", sum.second}};

  const json out{{"points", points.size()},
                 {"spearman_ge_ap", spearman_correlation(ges, aps)},
                 {"methods", methods}};
  const fs::path out_path = report.out.empty() ? fs::path(common.out_dir) / "report.json"
                                               : fs::path(report.out);
  write_json(out_path, out);
  std::cout << out.dump(2) << "\n";

  if (!report.merged_out.empty()) {
    std::ofstream os(report.merged_out);
    os << "method,seed,ge,ap\n";
    for (const auto& p : points)
      os << p.method << "," << p.seed << "," << p.ge << "," << p.ap << "\n";
  }
  return 0;
}

}  // namespace stgl::cli
