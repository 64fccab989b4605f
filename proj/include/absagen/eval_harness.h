// Copyright 2026 The absagen Authors.
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

#ifndef ABSAGEN_EVAL_HARNESS_H_
#define ABSAGEN_EVAL_HARNESS_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "absagen/sample.h"
#include "json.hpp"

namespace absagen {

inline constexpr int kNumClasses = 3;

// Sparse features keyed by name, ordered for deterministic iteration:
//   w:<token>    every sentence unigram
//   win:<token>  unigrams within `window` tokens of the aspect (inclusive)
//   asp:<term>   the normalized aspect term
//   bias
using FeatureVector = std::map<std::string, double>;

// Throws ValidationError for an out-of-range annotation index.
FeatureVector featurize(const LabeledSample &sample, std::size_t annotation_index,
                        int window = 5);

// Feature name <-> column index.
class FeatureSpace {
 public:
  // Index of `name`, adding it when absent.
  std::size_t intern(const std::string &name);
  // -1 when absent.
  long find(const std::string &name) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
};

struct SparseInstance {
  std::vector<std::pair<std::size_t, double>> x;
  int label = 0;
};

// kNumClasses x dim weight matrix, row-major.
struct Weights {
  std::size_t dim = 0;
  std::vector<double> values;

  explicit Weights(std::size_t d = 0) : dim(d), values(kNumClasses * d, 0.0) {}
  double &at(int k, std::size_t j) { return values[k * dim + j]; }
  double at(int k, std::size_t j) const { return values[k * dim + j]; }

  bool operator==(const Weights &) const = default;
};

std::array<double, kNumClasses> softmax_scores(const Weights &w,
                                               const SparseInstance &inst);

// Mean cross-entropy over the batch.
double cross_entropy_loss(const Weights &w, std::span<const SparseInstance> batch);

// Mean cross-entropy and its gradient (written into `grad`).
double loss_and_gradient(const Weights &w, std::span<const SparseInstance> batch,
                         Weights &grad);

struct TrainOptions {
  int epochs = 300;
  double learning_rate = 0.1;
  // 0 means full batch.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  int window = 5;
};

struct FitResult {
  Weights weights;
  // Full-data loss after each epoch.
  std::vector<double> loss_history;
};

// Multinomial logistic regression by mini-batch gradient descent. Batches are
// reshuffled every epoch with a seeded generator.
FitResult fit_softmax(std::span<const SparseInstance> data, std::size_t dim,
                      const TrainOptions &options);

// Largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-8) over
// `coordinates` random weight coordinates, with central differences of step
// h. Throws ValidationError for an empty batch or zero coordinates.
double gradient_check(const Weights &point, std::span<const SparseInstance> batch,
                      std::size_t coordinates = 20, std::uint64_t seed = 0,
                      double h = 1e-5);

struct ProxyModel {
  FeatureSpace features;
  Weights weights;
  TrainOptions options;
  double final_loss = 0;
  std::vector<double> loss_history;

  std::array<double, kNumClasses> predict_proba(const LabeledSample &sample,
                                                std::size_t annotation_index) const;
  Polarity predict(const LabeledSample &sample, std::size_t annotation_index) const;
};

// One instance per annotation. Unknown features are added to `space` when
// `grow` is set and dropped otherwise.
std::vector<SparseInstance> make_instances(std::span<const LabeledSample> samples,
                                           FeatureSpace &space, bool grow,
                                           int window);

ProxyModel train_proxy(std::span<const LabeledSample> train,
                       const TrainOptions &options = {});

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  long support = 0;

  bool operator==(const ClassMetrics &) const = default;
};

struct ClassifierReport {
  double accuracy = 0;
  double macro_f1 = 0;
  std::array<ClassMetrics, kNumClasses> per_class{};
  // confusion[gold][predicted]
  std::array<std::array<long, kNumClasses>, kNumClasses> confusion{};

  nlohmann::json to_json() const;
  bool operator==(const ClassifierReport &) const = default;
};

// Classes with zero support get F1 = 0 and still count in the macro mean.
ClassifierReport report_from_predictions(std::span<const Polarity> gold,
                                         std::span<const Polarity> predicted);

// Throws ValidationError for an empty test set.
ClassifierReport evaluate_proxy(const ProxyModel &model,
                                std::span<const LabeledSample> test);

struct RegimeTable {
  ClassifierReport original;
  ClassifierReport generated;
  ClassifierReport mixed;

  nlohmann::json to_json() const;
  // Rows Original / Generated / Mixed with Acc and F1 in percent.
  std::string to_text() const;
};

// Trains one proxy per regime with identical options. Mixed is the
// deduplicated concatenation original + generated. Throws ConfigError when
// any input is empty.
RegimeTable compare_regimes(std::span<const LabeledSample> original,
                            std::span<const LabeledSample> generated,
                            std::span<const LabeledSample> test,
                            const TrainOptions &options = {});

struct DiversityMetrics {
  double distinct_1 = 0;
  double distinct_2 = 0;
};

// Unique n-grams over total n-grams across all sentence texts (n-grams do not
// cross sentence boundaries). Throws ValidationError for an empty input.
DiversityMetrics diversity_metrics(std::span<const LabeledSample> samples);

}  // namespace absagen

#endif  // ABSAGEN_EVAL_HARNESS_H_
