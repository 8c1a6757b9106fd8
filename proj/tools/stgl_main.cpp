#include <CLI11.hpp>

#include <iostream>

#include "cli_common.hpp"
#include "commands.hpp"
#include "stgl/config.hpp"

namespace {

using namespace stgl;
using namespace stgl::cli;

/// Config precedence: CLI flag > config file > built-in defaults. The config
/// file (TOML sections [data], [model], [train], [fla]) is loaded first and
/// overwrites the defaults; CLI11 then overwrites whatever flags were given.
struct AllOptions {
  DataOptions data;
  ModelOptions model;
  TrainOptions train;
  EvalOptions eval;
  FlaOptions fla;
  AblateOptions ablate;
  SynthOptions synth;
  ReportOptions report;
  CommonOptions common;
};

void apply_config(const ConfigFile& cfg, AllOptions& o) {
  const auto str = [&](const char* sec, const char* key, std::string& out) {
    if (auto v = cfg.get_string(sec, key)) out = *v;
  };
  const auto num = [&](const char* sec, const char* key, auto& out) {
    if (auto v = cfg.get_double(sec, key)) out = static_cast<std::decay_t<decltype(out)>>(*v);
  };
  const auto flag = [&](const char* sec, const char* key, bool& out) {
    if (auto v = cfg.get_bool(sec, key)) out = *v;
  };

  str("data", "csv", o.data.csv);
  str("data", "snapshot", o.data.snapshot);
  str("data", "out", o.data.out);
  if (auto v = cfg.get_bool("data", "normalize")) o.data.no_normalize = !*v;

  str("model", "method", o.model.method);
  num("model", "hidden", o.model.hidden);
  num("model", "time_dim", o.model.time_dim);
  num("model", "k", o.model.k);
  num("model", "k2", o.model.k2);
  num("model", "hops", o.model.hops);
  num("model", "layers", o.model.layers);
  num("model", "mlp_hidden", o.model.mlp_hidden);
  str("model", "sampling", o.model.sampling);
  str("model", "direction", o.model.direction);
  flag("model", "fixed_alpha", o.model.fixed_alpha);
  str("model", "activation", o.model.activation);

  num("train", "lr", o.train.lr);
  num("train", "weight_decay", o.train.weight_decay);
  num("train", "batch_size", o.train.batch_size);
  num("train", "max_epochs", o.train.max_epochs);
  num("train", "patience", o.train.patience);
  str("train", "seeds", o.train.seeds);
  str("train", "optimizer", o.train.optimizer);

  num("fla", "nsub", o.fla.nsub);
  num("fla", "jitter", o.fla.jitter);
  num("fla", "rho", o.fla.rho);
  num("fla", "tau", o.fla.tau);
}

void add_model_flags(CLI::App* app, ModelOptions& m) {
  app->add_option("--method", m.method, "stone|gnn|rnn|memory");
  app->add_option("--hidden", m.hidden, "hidden dimension m");
  app->add_option("--time-dim", m.time_dim, "time-encoding dimension");
  app->add_option("--k", m.k, "temporal neighbors per hop");
  app->add_option("--k2", m.k2, "hop-2 neighbors");
  app->add_option("--hops", m.hops, "event-set depth (1|2)")->check(CLI::Range(1, 2));
  app->add_option("--layers", m.layers, "L for gnn/rnn (0 = method default)");
  app->add_option("--mlp-hidden", m.mlp_hidden, "link classifier hidden width");
  app->add_option("--sampling", m.sampling, "recent|uniform");
  app->add_option("--graph-direction", m.direction, "bi|di");
  app->add_flag("--fixed-alpha", m.fixed_alpha, "freeze aggregation weights at 1/K");
  app->add_option("--activation", m.activation, "relu|tanh|sigmoid");
}

void add_train_flags(CLI::App* app, TrainOptions& t) {
  app->add_option("--lr", t.lr, "learning rate");
  app->add_option("--weight-decay", t.weight_decay, "l2 weight decay");
  app->add_option("--batch", t.batch_size, "mini-batch size");
  app->add_option("--max-epochs", t.max_epochs, "epoch cap");
  app->add_option("--patience", t.patience, "early-stopping patience");
  app->add_option("--seeds", t.seeds, "seed list: 0..5 or 0,1,2");
  app->add_option("--optimizer", t.optimizer, "adam|sgd");
}

}  // namespace

int main(int argc, char** argv) {
  AllOptions o;

  // Pre-scan for --config so file values become defaults before parsing.
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  try {
    if (!config_path.empty()) apply_config(ConfigFile::parse_file(config_path), o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"temporal graph learning lab: training, metrics and alignment analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_dummy;
  app.add_option("--config", config_dummy, "TOML config file ([data] [model] [train] [fla])");
  app.add_option("--out-dir", o.common.out_dir, "output directory")->capture_default_str();

  CLI::App* ingest = app.add_subcommand("ingest", "CSV -> validated binary snapshot + stats");
  ingest->add_option("--csv", o.data.csv, "edge list csv");
  ingest->add_option("--out", o.data.out, "snapshot path (.stgl)");
  ingest->add_option("--stats-out", o.data.stats_out, "stats JSON path");
  ingest->add_flag("--no-normalize", o.data.no_normalize, "skip unit-norm feature rescaling");

  CLI::App* synth = app.add_subcommand("synth", "generate the planted-recency dataset");
  synth->add_option("--out", o.synth.out, "csv path");
  synth->add_option("--edges", o.synth.edges, "interaction count");
  synth->add_option("--initiators", o.synth.initiators, "initiator node count");
  synth->add_option("--responders", o.synth.responders, "responder node count");
  synth->add_option("--feat-dim", o.synth.feat_dim, "node feature dimension (0 = none)");
  synth->add_option("--edge-feat-dim", o.synth.edge_feat_dim, "edge feature dimension (0 = none)");
  synth->add_option("--repeat-prob", o.synth.repeat_prob, "partner persistence probability");
  synth->add_option("--background-prob", o.synth.background_prob, "one-off interaction rate");
  synth->add_option("--signature-noise", o.synth.signature_noise, "per-event edge feature noise");
  synth->add_option("--popularity-skew", o.synth.popularity_skew, "responder Zipf exponent");
  synth->add_option("--seed", o.synth.seed, "generator seed");

  CLI::App* train = app.add_subcommand("train", "train a model, write checkpoints + history");
  train->add_option("--snapshot", o.data.snapshot, "snapshot from ingest");
  add_model_flags(train, o.model);
  add_train_flags(train, o.train);
  train->add_flag("--algorithm1", o.train.algorithm1, "single-example SGD theory mode");
  train->add_option("--n", o.train.algorithm1_n, "iterations for --algorithm1");
  train->add_option("--eta", o.train.eta, "step size for --algorithm1");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
  eval->add_option("--snapshot", o.data.snapshot, "snapshot from ingest");
  eval->add_option("--checkpoint", o.eval.checkpoint, "checkpoint from train");
  eval->add_option("--setting", o.eval.setting, "transductive|inductive");
  eval->add_option("--dataset", o.eval.dataset, "dataset name for the ledger");
  eval->add_option("--ledger", o.eval.ledger, "run-ledger CSV to append to");
  eval->add_option("--eval-seed", o.eval.seed, "negative-sampling seed");
  eval->add_option("--rank-negatives", o.eval.rank_negatives, "negatives for Recall@K/MRR");

  CLI::App* fla = app.add_subcommand("fla", "feature-label alignment + GE score at init");
  fla->add_option("--snapshot", o.data.snapshot, "snapshot from ingest");
  add_model_flags(fla, o.model);
  fla->add_option("--seeds", o.train.seeds, "seed list");
  fla->add_option("--nsub", o.fla.nsub, "Jacobian rows (last nsub/2 positives)");
  fla->add_option("--jitter", o.fla.jitter, "starting Gram jitter");
  fla->add_option("--rho", o.fla.rho, "activation Lipschitz constant");
  fla->add_option("--tau", o.fla.tau, "aggregation row-sum bound");
  fla->add_option("--ledger", o.fla.ledger, "run-ledger CSV to join AP from");

  CLI::App* ablate = app.add_subcommand("ablate", "input-selection ablation grid for stone");
  ablate->add_option("--snapshot", o.data.snapshot, "snapshot from ingest");
  add_model_flags(ablate, o.model);
  add_train_flags(ablate, o.train);
  ablate->add_option("--nsub", o.fla.nsub, "Jacobian rows for the FLA column");
  ablate->add_option("--jobs", o.ablate.jobs, "concurrent grid cells");
  ablate->add_option("--cells", o.ablate.cells, "comma-separated cell subset");

  CLI::App* report = app.add_subcommand("report", "aggregate ge/ap scatter CSVs");
  report->add_option("--scatter", o.report.scatter, "scatter CSV (method,seed,ge,ap)");
  report->add_option("--out", o.report.out, "summary JSON path");
  report->add_option("--merged-out", o.report.merged_out, "merged scatter CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(o.data, o.common);
    if (synth->parsed()) return cmd_synth(o.synth, o.common);
    if (train->parsed()) return cmd_train(o.data, o.model, o.train, o.common);
    if (eval->parsed()) return cmd_eval(o.data, o.eval, o.common);
    if (fla->parsed()) return cmd_fla(o.data, o.model, o.train, o.fla, o.common);
    if (ablate->parsed()) return cmd_ablate(o.data, o.model, o.train, o.fla, o.ablate, o.common);
    if (report->parsed()) return cmd_report(o.report, o.common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
