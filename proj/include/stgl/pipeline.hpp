#pragma once

#include <filesystem>
#include <variant>

#include "stgl/analysis.hpp"
#include "stgl/scorers.hpp"

namespace stgl {

/// Model + input-selection configuration for one run.
struct ModelSpec {
  MethodKind kind = MethodKind::stone;
  int hidden = 100;    // m (gnn/rnn/memory) or d_out (stone)
  int time_dim = 100;  // d_t
  int k = 10;          // temporal neighbors per hop
  int k2 = 10;
  int hops = 1;        // SToNe event-set depth
  int layers = 2;      // L for gnn/rnn
  int mlp_hidden = 100;
  SampleMode sampling = SampleMode::recent;
  Direction direction = Direction::bidirected;
  bool fixed_alpha = false;
  Activation activation = Activation::relu;

  static ModelSpec defaults_for(MethodKind kind) {
    ModelSpec s;
    s.kind = kind;
    switch (kind) {
      case MethodKind::stone:
        s.layers = 2;
        s.activation = Activation::relu;
        break;
      case MethodKind::gnn:
        s.layers = 3;
        s.activation = Activation::relu;
        break;
      case MethodKind::rnn:
        s.layers = 4;
        s.activation = Activation::tanh;
        break;
      case MethodKind::memory:
        s.activation = Activation::tanh;
        break;
    }
    return s;
  }
};

template <typename S>
using AnyScorer = std::variant<StoneScorer<S>, GnnScorer<S>, RnnScorer<S>, MemoryScorer<S>>;

/// Builds a scorer with freshly initialized parameters for `seed`. The init,
/// sampling and negative streams are derived independently from the seed.
template <typename S>
AnyScorer<S> make_scorer(const TemporalGraph& g, const TimeEncoder& enc, const ModelSpec& spec,
                         std::uint64_t seed) {
  const RunRng run_rng(seed);
  auto init_rng = run_rng.stream("param-init");
  const FeatureLayout layout = FeatureLayout::from_graph(g, enc.dim());
  const int d_in = layout.event_dim();

  SamplerConfig scfg;
  scfg.mode = spec.sampling;
  scfg.direction = spec.direction;
  scfg.k = spec.k;
  scfg.k2 = spec.k2;
  scfg.hops = spec.hops;

  const double clf_stddev = 1.0 / std::sqrt(static_cast<double>(spec.hidden));

  switch (spec.kind) {
    case MethodKind::stone: {
      StoneParams<S> p = spec.fixed_alpha
                             ? StoneParams<S>::fixed_alpha(spec.k, d_in, spec.hidden, init_rng)
                             : StoneParams<S>::init(spec.k, d_in, spec.hidden, init_rng);
      p.act = spec.activation;
      auto clf = LinkClassifier<S>::init(2 * spec.hidden, spec.mlp_hidden, clf_stddev, init_rng);
      return StoneScorer<S>(g, enc, scfg, std::move(p), std::move(clf), run_rng);
    }
    case MethodKind::gnn: {
      GnnParams<S> p = GnnParams<S>::init(spec.layers, d_in, spec.hidden, init_rng);
      p.act = spec.activation;
      auto clf = LinkClassifier<S>::init(2 * spec.hidden, spec.mlp_hidden, clf_stddev, init_rng);
      return GnnScorer<S>(g, enc, scfg, std::move(p), std::move(clf), run_rng);
    }
    case MethodKind::rnn: {
      RnnParams<S> p = RnnParams<S>::init(spec.layers, d_in, spec.hidden, init_rng);
      p.act = spec.activation;
      auto clf = LinkClassifier<S>::init(2 * spec.hidden, spec.mlp_hidden, clf_stddev, init_rng);
      return RnnScorer<S>(g, enc, scfg, std::move(p), std::move(clf), run_rng);
    }
    case MethodKind::memory: {
      MemoryParams<S> p = MemoryParams<S>::init(g.edge_feat_dim() + enc.dim(), g.node_feat_dim(),
                                                spec.hidden, init_rng);
      p.act = spec.activation;
      auto clf = LinkClassifier<S>::init(2 * spec.hidden, spec.mlp_hidden, clf_stddev, init_rng);
      return MemoryScorer<S>(g, enc, std::move(p), std::move(clf));
    }
  }
  throw ValidationError("unknown method kind");
}

/// Versioned parameter checkpoint: architecture tag, dims, seed, flattened
/// parameters in the documented order.
struct Checkpoint {
  ModelSpec spec;
  std::uint64_t seed = 0;
  VecXd params;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace stgl
