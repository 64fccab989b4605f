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

#include "absagen/eval_harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "absagen/corpus_io.h"
#include "absagen/error.h"
#include "absagen/random.h"
#include "absagen/text.h"

namespace absagen {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Features

FeatureVector featurize(const LabeledSample &sample, std::size_t annotation_index,
                        int window) {
  if (annotation_index >= sample.annotations.size()) {
    throw ValidationError("annotation index " + std::to_string(annotation_index) +
                          " out of range for sample '" + sample.sentence.id + "'");
  }
  const std::vector<std::string> tokens = tokenize(sample.sentence.text);
  const std::string &term = sample.annotations[annotation_index].term;
  const std::vector<std::string> aspect = tokenize(term);

  FeatureVector f;
  for (const auto &t : tokens) f["w:" + t] = 1.0;
  if (!aspect.empty() && aspect.size() <= tokens.size()) {
    for (std::size_t s = 0; s + aspect.size() <= tokens.size(); ++s) {
      if (!std::equal(aspect.begin(), aspect.end(), tokens.begin() + s)) continue;
      const long lo = std::max<long>(0, static_cast<long>(s) - window);
      const long hi = std::min<long>(static_cast<long>(tokens.size()),
                                     static_cast<long>(s + aspect.size()) + window);
      for (long i = lo; i < hi; ++i) f["win:" + tokens[i]] = 1.0;
      break;
    }
  }
  f["asp:" + normalize_text(term)] = 1.0;
  f["bias"] = 1.0;
  return f;
}

std::size_t FeatureSpace::intern(const std::string &name) {
  auto [it, inserted] = index_.emplace(name, names_.size());
  if (inserted) names_.push_back(name);
  return it->second;
}

long FeatureSpace::find(const std::string &name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::vector<SparseInstance> make_instances(std::span<const LabeledSample> samples,
                                           FeatureSpace &space, bool grow,
                                           int window) {
  std::vector<SparseInstance> out;
  for (const auto &s : samples) {
    for (std::size_t a = 0; a < s.annotations.size(); ++a) {
      SparseInstance inst;
      inst.label = polarity_code(s.annotations[a].polarity);
      for (const auto &[name, value] : featurize(s, a, window)) {
        if (grow) {
          inst.x.emplace_back(space.intern(name), value);
        } else if (long j = space.find(name); j >= 0) {
          inst.x.emplace_back(static_cast<std::size_t>(j), value);
        }
      }
      out.push_back(std::move(inst));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Softmax regression

std::array<double, kNumClasses> softmax_scores(const Weights &w,
                                               const SparseInstance &inst) {
  std::array<double, kNumClasses> z{};
  for (int k = 0; k < kNumClasses; ++k) {
    for (const auto &[j, v] : inst.x) z[k] += w.at(k, j) * v;
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double denom = 0;
  for (double &v : z) {
    v = std::exp(v - zmax);
    denom += v;
  }
  for (double &v : z) v /= denom;
  return z;
}

namespace {

double example_loss(const std::array<double, kNumClasses> &p, int label) {
  return -std::log(std::max(p[label], 1e-300));
}

}  // namespace

double cross_entropy_loss(const Weights &w, std::span<const SparseInstance> batch) {
  if (batch.empty()) return 0;
  double total = 0;
  for (const auto &inst : batch) total += example_loss(softmax_scores(w, inst), inst.label);
  return total / static_cast<double>(batch.size());
}

double loss_and_gradient(const Weights &w, std::span<const SparseInstance> batch,
                         Weights &grad) {
  grad = Weights(w.dim);
  if (batch.empty()) return 0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0;
  for (const auto &inst : batch) {
    const auto p = softmax_scores(w, inst);
    total += example_loss(p, inst.label);
    for (int k = 0; k < kNumClasses; ++k) {
      const double delta = (p[k] - (k == inst.label ? 1.0 : 0.0)) * scale;
      for (const auto &[j, v] : inst.x) grad.at(k, j) += delta * v;
    }
  }
  return total * scale;
}

FitResult fit_softmax(std::span<const SparseInstance> data, std::size_t dim,
                      const TrainOptions &options) {
  FitResult r{Weights(dim), {}};
  if (data.empty()) return r;
  const std::size_t batch =
      options.batch_size == 0 ? data.size() : std::min(options.batch_size, data.size());
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(options.seed);
  Weights grad(dim);
  std::vector<SparseInstance> chunk;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    if (batch < data.size()) rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::span<const SparseInstance> view;
      if (batch == data.size()) {
        view = data;
      } else {
        chunk.clear();
        for (std::size_t i = start; i < end; ++i) chunk.push_back(data[order[i]]);
        view = chunk;
      }
      loss_and_gradient(r.weights, view, grad);
      for (std::size_t i = 0; i < r.weights.values.size(); ++i) {
        r.weights.values[i] -= options.learning_rate * grad.values[i];
      }
    }
    r.loss_history.push_back(cross_entropy_loss(r.weights, data));
  }
  return r;
}

double gradient_check(const Weights &point, std::span<const SparseInstance> batch,
                      std::size_t coordinates, std::uint64_t seed, double h) {
  if (batch.empty()) throw ValidationError("gradient check needs a non-empty batch");
  if (coordinates == 0 || point.values.empty()) {
    throw ValidationError("gradient check needs at least one coordinate");
  }
  Weights analytic;
  loss_and_gradient(point, batch, analytic);
  Rng rng(seed);
  Weights probe = point;
  double worst = 0;
  for (std::size_t c = 0; c < coordinates; ++c) {
    const std::size_t i = rng.index(point.values.size());
    const double saved = probe.values[i];
    probe.values[i] = saved + h;
    const double up = cross_entropy_loss(probe, batch);
    probe.values[i] = saved - h;
    const double down = cross_entropy_loss(probe, batch);
    probe.values[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double a = analytic.values[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

std::array<double, kNumClasses> ProxyModel::predict_proba(
    const LabeledSample &sample, std::size_t annotation_index) const {
  SparseInstance inst;
  for (const auto &[name, value] : featurize(sample, annotation_index, options.window)) {
    if (long j = features.find(name); j >= 0) {
      inst.x.emplace_back(static_cast<std::size_t>(j), value);
    }
  }
  return softmax_scores(weights, inst);
}

Polarity ProxyModel::predict(const LabeledSample &sample,
                             std::size_t annotation_index) const {
  const auto p = predict_proba(sample, annotation_index);
  // Ties resolve to the lowest class code.
  return polarity_from_code(
      static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
}

ProxyModel train_proxy(std::span<const LabeledSample> train,
                       const TrainOptions &options) {
  if (train.empty()) throw ConfigError("training set is empty");
  ProxyModel model;
  model.options = options;
  const auto instances = make_instances(train, model.features, true, options.window);
  FitResult fit = fit_softmax(instances, model.features.size(), options);
  model.weights = std::move(fit.weights);
  model.loss_history = std::move(fit.loss_history);
  model.final_loss = model.loss_history.empty()
                         ? cross_entropy_loss(model.weights, instances)
                         : model.loss_history.back();
  return model;
}

// ---------------------------------------------------------------------------
// Reports

ClassifierReport report_from_predictions(std::span<const Polarity> gold,
                                         std::span<const Polarity> predicted) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("gold and predicted lengths differ");
  }
  if (gold.empty()) throw ValidationError("cannot evaluate an empty test set");
  ClassifierReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++r.confusion[polarity_code(gold[i])][polarity_code(predicted[i])];
  }
  long correct = 0;
  double f1_sum = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    long predicted_k = 0;
    long support = 0;
    for (int o = 0; o < kNumClasses; ++o) {
      predicted_k += r.confusion[o][k];
      support += r.confusion[k][o];
    }
    const long tp = r.confusion[k][k];
    correct += tp;
    ClassMetrics &m = r.per_class[k];
    m.support = support;
    m.precision = predicted_k ? static_cast<double>(tp) / predicted_k : 0.0;
    m.recall = support ? static_cast<double>(tp) / support : 0.0;
    m.f1 = m.precision + m.recall > 0
               ? 2 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    f1_sum += m.f1;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  r.macro_f1 = f1_sum / kNumClasses;
  return r;
}

ClassifierReport evaluate_proxy(const ProxyModel &model,
                                std::span<const LabeledSample> test) {
  std::vector<Polarity> gold, predicted;
  for (const auto &s : test) {
    for (std::size_t a = 0; a < s.annotations.size(); ++a) {
      gold.push_back(s.annotations[a].polarity);
      predicted.push_back(model.predict(s, a));
    }
  }
  return report_from_predictions(gold, predicted);
}

json ClassifierReport::to_json() const {
  json classes = json::object();
  for (int k = 0; k < kNumClasses; ++k) {
    const ClassMetrics &m = per_class[k];
    classes[std::string(polarity_name(polarity_from_code(k)))] = {
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
        {"support", m.support}};
  }
  return {{"accuracy", accuracy},
          {"macro_f1", macro_f1},
          {"per_class", std::move(classes)},
          {"confusion", confusion}};
}

json RegimeTable::to_json() const {
  return {{"original", original.to_json()},
          {"generated", generated.to_json()},
          {"mixed", mixed.to_json()}};
}

std::string RegimeTable::to_text() const {
  std::string out = "Regime      Acc     F1\n";
  auto row = [&](const char *name, const ClassifierReport &r) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-10s %6.2f %6.2f\n", name, 100 * r.accuracy,
                  100 * r.macro_f1);
    out += buf;
  };
  row("Original", original);
  row("Generated", generated);
  row("Mixed", mixed);
  return out;
}

RegimeTable compare_regimes(std::span<const LabeledSample> original,
                            std::span<const LabeledSample> generated,
                            std::span<const LabeledSample> test,
                            const TrainOptions &options) {
  if (original.empty()) throw ConfigError("original training set is empty");
  if (generated.empty()) throw ConfigError("generated training set is empty");
  if (test.empty()) throw ConfigError("test set is empty");
  std::vector<LabeledSample> concat(original.begin(), original.end());
  concat.insert(concat.end(), generated.begin(), generated.end());
  const std::vector<LabeledSample> mixed = deduplicate(concat);

  RegimeTable t;
  t.original = evaluate_proxy(train_proxy(original, options), test);
  t.generated = evaluate_proxy(train_proxy(generated, options), test);
  t.mixed = evaluate_proxy(train_proxy(mixed, options), test);
  return t;
}

DiversityMetrics diversity_metrics(std::span<const LabeledSample> samples) {
  if (samples.empty()) throw ValidationError("diversity needs at least one sample");
  std::set<std::string> uni;
  std::set<std::pair<std::string, std::string>> bi;
  std::size_t n_uni = 0, n_bi = 0;
  for (const auto &s : samples) {
    const auto tokens = tokenize(s.sentence.text);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      uni.insert(tokens[i]);
      ++n_uni;
      if (i + 1 < tokens.size()) {
        bi.emplace(tokens[i], tokens[i + 1]);
        ++n_bi;
      }
    }
  }
  DiversityMetrics d;
  d.distinct_1 = n_uni ? static_cast<double>(uni.size()) / n_uni : 0.0;
  d.distinct_2 = n_bi ? static_cast<double>(bi.size()) / n_bi : 0.0;
  return d;
}

}  // namespace absagen
