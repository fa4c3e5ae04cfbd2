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

#include "ruleboot/tagger.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "config_json.h"
#include "json.hpp"
#include "ruleboot/error.h"
#include "ruleboot/random.h"

namespace ruleboot {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::json;

namespace {

constexpr uint64_t kInitStream = 0x696e6974;     // "init"
constexpr uint64_t kShuffleStream = 0x73687566;  // "shuf"

VectorXd Softmax(const VectorXd &logits) {
  VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

double LogSumExp(const VectorXd &logits) {
  const double m = logits.maxCoeff();
  return m + std::log((logits.array() - m).exp().sum());
}

VectorXd Sigmoid(const VectorXd &x) {
  return (1.0 + (-x.array()).exp()).inverse().matrix();
}

// Per-step LSTM activations in processing order.
struct LstmTrace {
  std::vector<int> order;
  MatrixXd gates;    // 4h x n: [input; forget; cell; output], post-activation
  MatrixXd cells;    // h x n
  MatrixXd hiddens;  // h x n
};

struct SentenceState {
  MatrixXd tokens;   // D x n
  MatrixXd context;  // Dc x n
  LstmTrace lstm[2];
};

void RunLstm(const TaggerParams &p, int direction, const MatrixXd &tokens, LstmTrace &trace) {
  const int n = static_cast<int>(tokens.cols());
  const int h = p.hyper().lstm_hidden;
  trace.order.resize(n);
  std::iota(trace.order.begin(), trace.order.end(), 0);
  if (direction == 1) std::reverse(trace.order.begin(), trace.order.end());
  trace.gates.resize(4 * h, n);
  trace.cells.resize(h, n);
  trace.hiddens.resize(h, n);
  const auto w = p.lstm_w(direction);
  const auto u = p.lstm_u(direction);
  const auto b = p.lstm_b(direction);
  VectorXd h_prev = VectorXd::Zero(h);
  VectorXd c_prev = VectorXd::Zero(h);
  for (int k = 0; k < n; ++k) {
    VectorXd a = w * tokens.col(trace.order[k]) + u * h_prev + b;
    VectorXd i = Sigmoid(a.segment(0, h));
    VectorXd f = Sigmoid(a.segment(h, h));
    VectorXd g = a.segment(2 * h, h).array().tanh().matrix();
    VectorXd o = Sigmoid(a.segment(3 * h, h));
    VectorXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    VectorXd hh = o.cwiseProduct(c.array().tanh().matrix());
    trace.gates.col(k) << i, f, g, o;
    trace.cells.col(k) = c;
    trace.hiddens.col(k) = hh;
    h_prev = std::move(hh);
    c_prev = std::move(c);
  }
}

SentenceState Contextualize(const TaggerParams &p, const Sentence &sentence) {
  SentenceState state;
  const int n = sentence.size();
  state.tokens.resize(p.input_dim(), n);
  for (int t = 0; t < n; ++t) {
    if (sentence.tokens[t].embedding.size() != p.input_dim()) {
      throw Error("token embedding dimension does not match the tagger");
    }
    state.tokens.col(t) = sentence.tokens[t].embedding;
  }
  if (!p.has_lstm()) {
    state.context = state.tokens;
    return state;
  }
  const int h = p.hyper().lstm_hidden;
  state.context.resize(2 * h, n);
  for (int dir = 0; dir < 2; ++dir) {
    RunLstm(p, dir, state.tokens, state.lstm[dir]);
    for (int k = 0; k < n; ++k) {
      state.context.block(dir * h, state.lstm[dir].order[k], h, 1) = state.lstm[dir].hiddens.col(k);
    }
  }
  return state;
}

// |d_context| holds dLoss/d(h_t) for this direction, indexed by token.
void BackpropLstm(const TaggerParams &p, int direction, const SentenceState &state,
                  const MatrixXd &d_context, TaggerParams &grad) {
  const LstmTrace &trace = state.lstm[direction];
  const int n = static_cast<int>(trace.order.size());
  const int h = p.hyper().lstm_hidden;
  const auto u = p.lstm_u(direction);
  auto gw = grad.lstm_w(direction);
  auto gu = grad.lstm_u(direction);
  auto gb = grad.lstm_b(direction);
  VectorXd dh_next = VectorXd::Zero(h);
  VectorXd dc_next = VectorXd::Zero(h);
  VectorXd zeros = VectorXd::Zero(h);
  VectorXd da(4 * h);
  for (int k = n - 1; k >= 0; --k) {
    const int t = trace.order[k];
    const VectorXd dh = d_context.block(direction * h, t, h, 1) + dh_next;
    const auto gates = trace.gates.col(k);
    const VectorXd i = gates.segment(0, h);
    const VectorXd f = gates.segment(h, h);
    const VectorXd g = gates.segment(2 * h, h);
    const VectorXd o = gates.segment(3 * h, h);
    const VectorXd tc = trace.cells.col(k).array().tanh().matrix();
    const VectorXd c_prev = k > 0 ? VectorXd(trace.cells.col(k - 1)) : zeros;
    const VectorXd h_prev = k > 0 ? VectorXd(trace.hiddens.col(k - 1)) : zeros;
    const VectorXd d_o = dh.cwiseProduct(tc);
    const VectorXd dc =
        dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix()) + dc_next;
    da.segment(0, h) = dc.cwiseProduct(g).array() * i.array() * (1.0 - i.array());
    da.segment(h, h) = dc.cwiseProduct(c_prev).array() * f.array() * (1.0 - f.array());
    da.segment(2 * h, h) = dc.cwiseProduct(i).array() * (1.0 - g.array().square());
    da.segment(3 * h, h) = d_o.array() * o.array() * (1.0 - o.array());
    dc_next = dc.cwiseProduct(f);
    gw.noalias() += da * state.tokens.col(t).transpose();
    gu.noalias() += da * h_prev.transpose();
    gb += da;
    dh_next.noalias() = u.transpose() * da;
  }
}

struct SpanTrace {
  VectorXd alpha;
  VectorXd z;
  VectorXd hidden;
  VectorXd logits;
};

void ForwardSpan(const TaggerParams &p, const SentenceState &state, Range span,
                 SpanTrace &trace) {
  const auto tokens = state.tokens.middleCols(span.start, span.length());
  trace.alpha = Softmax(tokens.transpose() * p.attention());
  const int d = p.input_dim();
  const int dc = p.context_dim();
  trace.z.resize(d + 2 * dc);
  trace.z.head(d) = tokens * trace.alpha;
  trace.z.segment(d, dc) = state.context.col(span.start);
  trace.z.tail(dc) = state.context.col(span.end - 1);
  trace.hidden = (p.hidden_w() * trace.z + p.hidden_b()).array().tanh().matrix();
  trace.logits = p.output_w() * trace.hidden + p.output_b();
}

// Adds scale * dLoss/dparams for one span; boundary gradients for the
// recurrent layer are accumulated into |d_context| when it is non-null.
void BackwardSpan(const TaggerParams &p, const SentenceState &state, Range span,
                  const SpanTrace &trace, int label, double scale, TaggerParams &grad,
                  MatrixXd *d_context) {
  VectorXd d_logits = Softmax(trace.logits);
  d_logits[label] -= 1.0;
  d_logits *= scale;
  grad.output_w().noalias() += d_logits * trace.hidden.transpose();
  grad.output_b() += d_logits;
  const VectorXd d_pre = (p.output_w().transpose() * d_logits).array() *
                         (1.0 - trace.hidden.array().square());
  grad.hidden_w().noalias() += d_pre * trace.z.transpose();
  grad.hidden_b() += d_pre;
  const VectorXd dz = p.hidden_w().transpose() * d_pre;

  const int d = p.input_dim();
  const int dc = p.context_dim();
  const auto tokens = state.tokens.middleCols(span.start, span.length());
  const VectorXd d_alpha = tokens.transpose() * dz.head(d);
  const VectorXd d_attn_logits =
      trace.alpha.array() * (d_alpha.array() - trace.alpha.dot(d_alpha));
  grad.attention().noalias() += tokens * d_attn_logits;

  if (d_context != nullptr) {
    d_context->col(span.start) += dz.segment(d, dc);
    d_context->col(span.end - 1) += dz.tail(dc);
  }
}

void CheckFinite(const TaggerParams &params) {
  if (!params.values().allFinite()) throw Error("tagger parameters became non-finite");
}

}  // namespace

// ---------------------------------------------------------------------------
// TaggerParams

int TaggerParams::context_dim() const {
  return has_lstm() ? 2 * hyper_.lstm_hidden : input_dim_;
}

TaggerParams::Offsets TaggerParams::ComputeOffsets() const {
  Offsets o;
  const Index d = input_dim_;
  const Index h = hyper_.hidden;
  const Index c = class_count();
  o.attention = 0;
  o.hidden_w = o.attention + d;
  o.hidden_b = o.hidden_w + h * representation_dim();
  o.output_w = o.hidden_b + h;
  o.output_b = o.output_w + c * h;
  o.lstm = o.output_b + c;
  o.total = o.lstm;
  if (has_lstm()) o.total += 2 * LstmBlock(0);
  return o;
}

Index TaggerParams::LstmBlock(int) const {
  const Index h = hyper_.lstm_hidden;
  return 4 * h * input_dim_ + 4 * h * h + 4 * h;
}

TaggerParams TaggerParams::Zeros(std::vector<std::string> labels, int input_dim,
                                 const TaggerHyperParams &hyper, uint64_t seed) {
  if (input_dim < 1) throw Error("tagger input dimension must be >= 1");
  if (labels.empty()) throw Error("tagger needs at least one label");
  if (hyper.hidden < 1) throw Error("tagger hidden width must be >= 1");
  if (hyper.contextualizer == Contextualizer::kBiLstm && hyper.lstm_hidden < 1) {
    throw Error("lstm_hidden must be >= 1");
  }
  TaggerParams p;
  p.labels_ = std::move(labels);
  p.hyper_ = hyper;
  p.seed_ = seed;
  p.input_dim_ = input_dim;
  p.values_ = VectorXd::Zero(p.ComputeOffsets().total);
  return p;
}

TaggerParams TaggerParams::Initialize(std::vector<std::string> labels, int input_dim,
                                      const TaggerHyperParams &hyper, uint64_t seed) {
  TaggerParams p = Zeros(std::move(labels), input_dim, hyper, seed);
  Rng rng = DeriveRng(seed, kInitStream);
  std::uniform_real_distribution<double> uniform(-hyper.init_range, hyper.init_range);
  for (Index i = 0; i < p.values_.size(); ++i) p.values_[i] = uniform(rng);
  return p;
}

TaggerParams TaggerParams::ZerosLike() const {
  TaggerParams p = *this;
  p.values_.setZero();
  return p;
}

TaggerParams::VectorMap TaggerParams::attention() {
  return {values_.data() + ComputeOffsets().attention, input_dim_};
}
TaggerParams::ConstVectorMap TaggerParams::attention() const {
  return {values_.data() + ComputeOffsets().attention, input_dim_};
}
TaggerParams::MatrixMap TaggerParams::hidden_w() {
  return {values_.data() + ComputeOffsets().hidden_w, hyper_.hidden, representation_dim()};
}
TaggerParams::ConstMatrixMap TaggerParams::hidden_w() const {
  return {values_.data() + ComputeOffsets().hidden_w, hyper_.hidden, representation_dim()};
}
TaggerParams::VectorMap TaggerParams::hidden_b() {
  return {values_.data() + ComputeOffsets().hidden_b, hyper_.hidden};
}
TaggerParams::ConstVectorMap TaggerParams::hidden_b() const {
  return {values_.data() + ComputeOffsets().hidden_b, hyper_.hidden};
}
TaggerParams::MatrixMap TaggerParams::output_w() {
  return {values_.data() + ComputeOffsets().output_w, class_count(), hyper_.hidden};
}
TaggerParams::ConstMatrixMap TaggerParams::output_w() const {
  return {values_.data() + ComputeOffsets().output_w, class_count(), hyper_.hidden};
}
TaggerParams::VectorMap TaggerParams::output_b() {
  return {values_.data() + ComputeOffsets().output_b, class_count()};
}
TaggerParams::ConstVectorMap TaggerParams::output_b() const {
  return {values_.data() + ComputeOffsets().output_b, class_count()};
}

namespace {
Index LstmOffset(Index base, Index block, int direction) { return base + direction * block; }
}  // namespace

TaggerParams::MatrixMap TaggerParams::lstm_w(int direction) {
  const Index h = hyper_.lstm_hidden;
  return {values_.data() + LstmOffset(ComputeOffsets().lstm, LstmBlock(0), direction), 4 * h,
          input_dim_};
}
TaggerParams::ConstMatrixMap TaggerParams::lstm_w(int direction) const {
  const Index h = hyper_.lstm_hidden;
  return {values_.data() + LstmOffset(ComputeOffsets().lstm, LstmBlock(0), direction), 4 * h,
          input_dim_};
}
TaggerParams::MatrixMap TaggerParams::lstm_u(int direction) {
  const Index h = hyper_.lstm_hidden;
  return {values_.data() + LstmOffset(ComputeOffsets().lstm, LstmBlock(0), direction) +
              4 * h * input_dim_,
          4 * h, h};
}
TaggerParams::ConstMatrixMap TaggerParams::lstm_u(int direction) const {
  const Index h = hyper_.lstm_hidden;
  return {values_.data() + LstmOffset(ComputeOffsets().lstm, LstmBlock(0), direction) +
              4 * h * input_dim_,
          4 * h, h};
}
TaggerParams::VectorMap TaggerParams::lstm_b(int direction) {
  const Index h = hyper_.lstm_hidden;
  return {values_.data() + LstmOffset(ComputeOffsets().lstm, LstmBlock(0), direction) +
              4 * h * input_dim_ + 4 * h * h,
          4 * h};
}
TaggerParams::ConstVectorMap TaggerParams::lstm_b(int direction) const {
  const Index h = hyper_.lstm_hidden;
  return {values_.data() + LstmOffset(ComputeOffsets().lstm, LstmBlock(0), direction) +
              4 * h * input_dim_ + 4 * h * h,
          4 * h};
}

bool TaggerParams::operator==(const TaggerParams &other) const {
  return labels_ == other.labels_ && seed_ == other.seed_ && input_dim_ == other.input_dim_ &&
         hyper_.hidden == other.hyper_.hidden &&
         hyper_.contextualizer == other.hyper_.contextualizer &&
         hyper_.lstm_hidden == other.hyper_.lstm_hidden &&
         values_.size() == other.values_.size() && values_ == other.values_;
}

void TaggerParams::Save(std::ostream &out) const {
  json blob;
  blob["format"] = "ruleboot-tagger";
  blob["version"] = 1;
  blob["labels"] = labels_;
  blob["input_dim"] = input_dim_;
  blob["seed"] = seed_;
  blob["hyper"] = internal::HyperToJson(hyper_);
  blob["values"] = std::vector<double>(values_.data(), values_.data() + values_.size());
  out << blob.dump() << '\n';
}

void TaggerParams::SaveFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path);
  Save(out);
}

TaggerParams TaggerParams::Load(std::istream &in, const std::string &source) {
  try {
    json blob = json::parse(in);
    if (blob.at("format").get<std::string>() != "ruleboot-tagger" ||
        blob.at("version").get<int>() != 1) {
      throw Error(source + ": not a version 1 tagger checkpoint");
    }
    TaggerParams p = Zeros(blob.at("labels").get<std::vector<std::string>>(),
                           blob.at("input_dim").get<int>(),
                           internal::HyperFromJson(blob.at("hyper")),
                           blob.at("seed").get<uint64_t>());
    auto values = blob.at("values").get<std::vector<double>>();
    if (static_cast<Index>(values.size()) != p.values_.size()) {
      throw Error(source + ": checkpoint has " + std::to_string(values.size()) +
                  " values, expected " + std::to_string(p.values_.size()));
    }
    p.values_ = Eigen::Map<VectorXd>(values.data(), p.values_.size());
    return p;
  } catch (const json::exception &e) {
    throw Error(source + ": malformed checkpoint: " + e.what());
  }
}

TaggerParams TaggerParams::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint " + path);
  return Load(in, path);
}

// ---------------------------------------------------------------------------
// Prediction

VectorXd SpanRepresentation(const TaggerParams &params, const Sentence &sentence, Range span) {
  if (span.start < 0 || span.end > sentence.size() || span.length() < 1) {
    throw Error("span outside sentence");
  }
  const SentenceState state = Contextualize(params, sentence);
  SpanTrace trace;
  ForwardSpan(params, state, span, trace);
  return trace.z;
}

SpanPrediction PredictSpan(const VectorXd &representation, const TaggerParams &params) {
  if (representation.size() != params.representation_dim()) {
    throw Error("dimension mismatch: representation has " +
                std::to_string(representation.size()) + " entries, tagger expects " +
                std::to_string(params.representation_dim()));
  }
  const VectorXd hidden =
      (params.hidden_w() * representation + params.hidden_b()).array().tanh().matrix();
  SpanPrediction prediction;
  prediction.distribution = Softmax(params.output_w() * hidden + params.output_b());
  Index best = 0;
  for (Index k = 1; k < prediction.distribution.size(); ++k) {
    if (prediction.distribution[k] > prediction.distribution[best]) best = k;
  }
  prediction.label = static_cast<int>(best);
  prediction.confidence = prediction.distribution[best];
  return prediction;
}

std::vector<SpanPrediction> PredictCorpus(const TaggerParams &params, const Corpus &corpus,
                                          const CandidateIndex &candidates) {
  std::vector<SpanPrediction> out;
  out.reserve(candidates.size());
  SpanTrace trace;
  for (int s = 0; s < candidates.sentence_count(); ++s) {
    const CandidateId first = candidates.sentence_begin(s);
    const CandidateId last = candidates.sentence_end(s);
    if (first == last) continue;
    const SentenceState state = Contextualize(params, corpus.sentences[s]);
    for (CandidateId id = first; id < last; ++id) {
      ForwardSpan(params, state, candidates.key(id).range(), trace);
      SpanPrediction prediction = PredictSpan(trace.z, params);
      prediction.candidate = id;
      prediction.key = candidates.key(id);
      out.push_back(std::move(prediction));
    }
  }
  return out;
}

std::vector<std::vector<CandidateId>> TopConfident(std::span<const SpanPrediction> predictions,
                                                   double fraction, int label_count) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("fraction must lie in (0, 1]");
  std::vector<std::vector<const SpanPrediction *>> by_label(label_count);
  for (const SpanPrediction &p : predictions) {
    if (p.label >= 0 && p.label < label_count) by_label[p.label].push_back(&p);
  }
  std::vector<std::vector<CandidateId>> members(label_count);
  for (int l = 0; l < label_count; ++l) {
    auto &list = by_label[l];
    std::sort(list.begin(), list.end(), [](const SpanPrediction *a, const SpanPrediction *b) {
      if (a->confidence != b->confidence) return a->confidence > b->confidence;
      return a->key < b->key;
    });
    const auto keep = static_cast<size_t>(
        std::ceil(fraction * static_cast<double>(list.size()) - 1e-9));
    for (size_t i = 0; i < std::min(keep, list.size()); ++i) {
      members[l].push_back(list[i]->candidate);
    }
  }
  return members;
}

// ---------------------------------------------------------------------------
// Training

double TaggerLoss(const TaggerParams &params, const Corpus &corpus,
                  std::span<const TrainingExample> examples, TaggerParams *gradient) {
  if (examples.empty()) return 0.0;
  if (gradient != nullptr) *gradient = params.ZerosLike();
  // Group by sentence so each sentence is contextualized once; sentences are
  // visited in ascending order, examples within one in input order.
  std::map<int, std::vector<const TrainingExample *>> by_sentence;
  for (const TrainingExample &e : examples) by_sentence[e.key.sentence].push_back(&e);
  const double scale = 1.0 / static_cast<double>(examples.size());
  double total = 0.0;
  SpanTrace trace;
  for (const auto &[s, list] : by_sentence) {
    const Sentence &sentence = corpus.sentences.at(s);
    const SentenceState state = Contextualize(params, sentence);
    MatrixXd d_context;
    if (gradient != nullptr && params.has_lstm()) {
      d_context = MatrixXd::Zero(params.context_dim(), sentence.size());
    }
    for (const TrainingExample *e : list) {
      if (e->label < 0 || e->label >= params.class_count()) throw Error("class index out of range");
      ForwardSpan(params, state, e->key.range(), trace);
      total += LogSumExp(trace.logits) - trace.logits[e->label];
      if (gradient != nullptr) {
        BackwardSpan(params, state, e->key.range(), trace, e->label, scale, *gradient,
                     params.has_lstm() ? &d_context : nullptr);
      }
    }
    if (gradient != nullptr && params.has_lstm()) {
      BackpropLstm(params, 0, state, d_context, *gradient);
      BackpropLstm(params, 1, state, d_context, *gradient);
    }
  }
  return total * scale;
}

TaggerParams TrainTagger(const Corpus &corpus, const TrainingSet &training, TaggerParams params,
                         TrainingReport *report) {
  if (training.positives.empty() || training.negative_pool.empty()) {
    throw Error("degenerate training set");
  }
  const TaggerHyperParams &hyper = params.hyper();
  std::vector<TrainingExample> positives = training.positives;
  std::sort(positives.begin(), positives.end());
  std::vector<SpanKey> pool = training.negative_pool;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const size_t wanted = static_cast<size_t>(
      std::llround(hyper.negative_ratio * static_cast<double>(positives.size())));
  const size_t negatives = std::clamp<size_t>(wanted, 1, pool.size());
  const int neg = params.neg_class();
  const size_t batch = static_cast<size_t>(std::max(1, hyper.batch_size));

  Rng rng = DeriveRng(params.seed(), kShuffleStream);
  VectorXd velocity = VectorXd::Zero(params.values().size());
  TaggerParams grad = params.ZerosLike();
  std::vector<SpanKey> drawn(negatives);
  std::vector<TrainingExample> epoch;
  if (report != nullptr) {
    report->epoch_loss.clear();
    report->examples_per_epoch = positives.size() + negatives;
  }

  for (int e = 0; e < hyper.epochs; ++e) {
    std::sample(pool.begin(), pool.end(), drawn.begin(), negatives, rng);
    epoch = positives;
    for (const SpanKey &key : drawn) epoch.push_back({key, neg});
    std::shuffle(epoch.begin(), epoch.end(), rng);

    double loss_sum = 0.0;
    for (size_t first = 0; first < epoch.size(); first += batch) {
      const size_t count = std::min(batch, epoch.size() - first);
      std::span<const TrainingExample> slice(epoch.data() + first, count);
      loss_sum += TaggerLoss(params, corpus, slice, &grad) * static_cast<double>(count);
      if (hyper.clip_norm > 0.0) {
        const double norm = grad.values().norm();
        if (norm > hyper.clip_norm) grad.values() *= hyper.clip_norm / norm;
      }
      velocity = hyper.momentum * velocity - hyper.learning_rate * grad.values();
      params.values() += velocity;
      CheckFinite(params);
    }
    if (report != nullptr) report->epoch_loss.push_back(loss_sum / static_cast<double>(epoch.size()));
  }
  return params;
}

TaggerParams TrainTagger(const Corpus &corpus, const TrainingSet &training,
                         const std::vector<std::string> &labels, const TaggerHyperParams &hyper,
                         uint64_t seed, TrainingReport *report) {
  return TrainTagger(corpus, training, TaggerParams::Initialize(labels, corpus.dim, hyper, seed),
                     report);
}

}  // namespace ruleboot
