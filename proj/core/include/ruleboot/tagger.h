// Copyright 2026 The Ruleboot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RULEBOOT_TAGGER_H_
#define RULEBOOT_TAGGER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ruleboot/candidates.h"
#include "ruleboot/corpus.h"
#include "ruleboot/span.h"

namespace ruleboot {

enum class Contextualizer {
  kIdentity,  // boundary vectors are the ingested token embeddings
  kBiLstm,    // boundary vectors come from a bidirectional LSTM
};

struct TaggerHyperParams {
  double learning_rate = 1e-2;
  double momentum = 0.0;
  int epochs = 50;
  int batch_size = 32;
  int hidden = 64;
  double init_range = 0.08;
  double clip_norm = 5.0;  // global gradient norm; <= 0 disables clipping
  double negative_ratio = 5.0;
  Contextualizer contextualizer = Contextualizer::kIdentity;
  int lstm_hidden = 16;  // per direction
};

// All trainable tensors live in one flat vector; the accessors return views
// into it. Class order is the label list followed by NEG.
class TaggerParams {
 public:
  using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
  using VectorMap = Eigen::Map<Eigen::VectorXd>;
  using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

  TaggerParams() = default;

  // All-zero parameters of the right shape.
  static TaggerParams Zeros(std::vector<std::string> labels, int input_dim,
                            const TaggerHyperParams &hyper, uint64_t seed = 0);
  // Uniform in [-init_range, init_range] from |seed|.
  static TaggerParams Initialize(std::vector<std::string> labels, int input_dim,
                                 const TaggerHyperParams &hyper, uint64_t seed);
  TaggerParams ZerosLike() const;

  const std::vector<std::string> &labels() const { return labels_; }
  const TaggerHyperParams &hyper() const { return hyper_; }
  TaggerHyperParams &mutable_hyper() { return hyper_; }
  uint64_t seed() const { return seed_; }

  int input_dim() const { return input_dim_; }
  int context_dim() const;
  int representation_dim() const { return input_dim_ + 2 * context_dim(); }
  int hidden_dim() const { return hyper_.hidden; }
  int class_count() const { return static_cast<int>(labels_.size()) + 1; }
  int neg_class() const { return static_cast<int>(labels_.size()); }
  bool has_lstm() const { return hyper_.contextualizer == Contextualizer::kBiLstm; }

  Eigen::VectorXd &values() { return values_; }
  const Eigen::VectorXd &values() const { return values_; }

  VectorMap attention();
  ConstVectorMap attention() const;
  MatrixMap hidden_w();
  ConstMatrixMap hidden_w() const;
  VectorMap hidden_b();
  ConstVectorMap hidden_b() const;
  MatrixMap output_w();
  ConstMatrixMap output_w() const;
  VectorMap output_b();
  ConstVectorMap output_b() const;
  // direction 0 = left-to-right, 1 = right-to-left. Gate rows are
  // [input; forget; cell; output].
  MatrixMap lstm_w(int direction);
  ConstMatrixMap lstm_w(int direction) const;
  MatrixMap lstm_u(int direction);
  ConstMatrixMap lstm_u(int direction) const;
  VectorMap lstm_b(int direction);
  ConstVectorMap lstm_b(int direction) const;

  bool operator==(const TaggerParams &other) const;

  // JSON checkpoint with labels, hyperparameters, seed and every tensor.
  void Save(std::ostream &out) const;
  void SaveFile(const std::string &path) const;
  static TaggerParams Load(std::istream &in, const std::string &source = "<checkpoint>");
  static TaggerParams LoadFile(const std::string &path);

 private:
  struct Offsets {
    Eigen::Index attention, hidden_w, hidden_b, output_w, output_b, lstm, total;
  };
  Offsets ComputeOffsets() const;
  Eigen::Index LstmBlock(int direction) const;

  std::vector<std::string> labels_;
  TaggerHyperParams hyper_;
  uint64_t seed_ = 0;
  int input_dim_ = 0;
  Eigen::VectorXd values_;
};

struct SpanPrediction {
  CandidateId candidate = 0;
  SpanKey key;
  Eigen::VectorXd distribution;  // labels then NEG
  int label = 0;                 // argmax, lowest index on ties
  double confidence = 0.0;       // max probability
};

// [content ; boundary_start ; boundary_end], where content is the
// attention-weighted mean of the span's token embeddings.
Eigen::VectorXd SpanRepresentation(const TaggerParams &params, const Sentence &sentence,
                                   Range span);

// Throws Error on a dimension mismatch.
SpanPrediction PredictSpan(const Eigen::VectorXd &representation, const TaggerParams &params);

struct TrainingExample {
  SpanKey key;
  int label = 0;  // class index; neg_class() for negatives

  auto operator<=>(const TrainingExample &) const = default;
};

struct TrainingSet {
  std::vector<TrainingExample> positives;
  std::vector<SpanKey> negative_pool;
};

struct TrainingReport {
  std::vector<double> epoch_loss;  // mean loss seen during each epoch
  size_t examples_per_epoch = 0;
};

// Mean cross-entropy over |examples|; fills |gradient| (same shape as
// |params|) when non-null.
double TaggerLoss(const TaggerParams &params, const Corpus &corpus,
                  std::span<const TrainingExample> examples, TaggerParams *gradient);

// Minibatch gradient descent with optional momentum, starting from
// |initial|. Every epoch uses all positives plus negative_ratio times as
// many negatives drawn from the pool. Input order does not matter: examples
// are sorted before the seeded shuffle. Throws Error("degenerate training
// set") without positives or negatives.
TaggerParams TrainTagger(const Corpus &corpus, const TrainingSet &training,
                         TaggerParams initial, TrainingReport *report = nullptr);

// Cold start from TaggerParams::Initialize(labels, corpus.dim, hyper, seed).
TaggerParams TrainTagger(const Corpus &corpus, const TrainingSet &training,
                         const std::vector<std::string> &labels,
                         const TaggerHyperParams &hyper, uint64_t seed,
                         TrainingReport *report = nullptr);

// One prediction per canonical candidate, indexed by candidate id.
std::vector<SpanPrediction> PredictCorpus(const TaggerParams &params, const Corpus &corpus,
                                          const CandidateIndex &candidates);

// For each label (NEG excluded): candidates whose argmax is that label,
// by confidence descending (ties by span key), truncated to
// ceil(fraction * count).
std::vector<std::vector<CandidateId>> TopConfident(std::span<const SpanPrediction> predictions,
                                                   double fraction, int label_count);

}  // namespace ruleboot

#endif  // RULEBOOT_TAGGER_H_
