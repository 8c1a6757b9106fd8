#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stgl::cli {

struct DataOptions {
  std::string csv;
  std::string snapshot;
  std::string out;
  std::string stats_out;
  bool no_normalize = false;
};

struct ModelOptions {
  std::string method = "stone";
  int hidden = 100;
  int time_dim = 100;
  int k = 10;
  int k2 = 10;
  int hops = 1;
  int layers = 0;  // 0 = per-method default
  int mlp_hidden = 100;
  std::string sampling = "recent";
  std::string direction = "bi";
  bool fixed_alpha = false;
  std::string activation;  // empty = per-method default
};

struct TrainOptions {
  double lr = 1e-4;
  double weight_decay = 1e-6;
  int batch_size = 600;
  int max_epochs = 200;
  int patience = 20;
  std::string seeds = "0";
  std::string optimizer = "adam";
  bool algorithm1 = false;
  std::int64_t algorithm1_n = 1000;
  double eta = 0.01;
};

struct EvalOptions {
  std::string checkpoint;
  std::string setting = "transductive";
  std::string dataset;
  std::string ledger;
  std::uint64_t seed = 0;
  int rank_negatives = 100;
};

struct FlaOptions {
  std::int64_t nsub = 5000;
  double jitter = 0;
  double rho = 1;
  double tau = 1;
  std::string ledger;  // join per-seed AP from this run ledger
  bool theory_head = false;
};

struct AblateOptions {
  int jobs = 1;
  std::string cells;  // comma-separated subset, empty = full grid
};

struct SynthOptions {
  std::string out;
  std::int64_t edges = 3000;
  std::int64_t initiators = 50;
  std::int64_t responders = 50;
  int feat_dim = 8;
  int edge_feat_dim = 8;
  double repeat_prob = 0.9;
  double background_prob = 0.15;
  double signature_noise = 0.25;
  double popularity_skew = 1.0;
  std::uint64_t seed = 0;
};

struct ReportOptions {
  std::vector<std::string> scatter;
  std::string out;
  std::string merged_out;
};

struct CommonOptions {
  std::string out_dir = ".";
};

int cmd_ingest(const DataOptions& data, const CommonOptions& common);
int cmd_synth(const SynthOptions& synth, const CommonOptions& common);
int cmd_train(const DataOptions& data, const ModelOptions& model, const TrainOptions& train,
              const CommonOptions& common);
int cmd_eval(const DataOptions& data, const EvalOptions& eval, const CommonOptions& common);
int cmd_fla(const DataOptions& data, const ModelOptions& model, const TrainOptions& train,
            const FlaOptions& fla, const CommonOptions& common);
int cmd_ablate(const DataOptions& data, const ModelOptions& model, const TrainOptions& train,
               const FlaOptions& fla, const AblateOptions& ablate, const CommonOptions& common);
int cmd_report(const ReportOptions& report, const CommonOptions& common);

}  // namespace stgl::cli
