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

#include <cmath>
#include <set>

#include "absagen/corpus_io.h"
#include "absagen/error.h"
#include "absagen/random.h"
#include "absagen/text.h"
#include "doctest.h"
#include "support/helpers.h"

namespace absagen {
namespace {

using testing::make_sample;

constexpr Polarity kPos = Polarity::kPositive;
constexpr Polarity kNeu = Polarity::kNeutral;
constexpr Polarity kNeg = Polarity::kNegative;

TEST_CASE("featurize") {
  auto s = make_sample("1", "good battery", {{"battery", kPos}});
  const FeatureVector f = featurize(s, 0);
  CHECK(f == FeatureVector{{"w:good", 1},
                           {"w:battery", 1},
                           {"win:good", 1},
                           {"win:battery", 1},
                           {"asp:battery", 1},
                           {"bias", 1}});
  CHECK(featurize(s, 0) == f);
  auto two = make_sample("2", "good battery bad screen", {{"battery", kPos}, {"screen", kNeg}});
  CHECK(featurize(two, 0).count("asp:battery") == 1);
  CHECK(featurize(two, 1).count("asp:screen") == 1);
  CHECK(featurize(two, 0) != featurize(two, 1));
  CHECK_THROWS_AS(featurize(s, 1), ValidationError);

  auto far = make_sample("3", "a b c d e f g h battery i j k l m n o", {{"battery", kNeu}});
  const FeatureVector g = featurize(far, 0);
  CHECK(g.count("win:c") == 0);
  CHECK(g.count("win:d") == 1);
  CHECK(g.count("win:m") == 1);
  CHECK(g.count("win:n") == 0);
}

// Three well-separated clusters on two real features plus bias.
std::vector<SparseInstance> toy_set() {
  std::vector<SparseInstance> out;
  const double pts[][3] = {{2.0, 0.1, 0},  {1.5, -0.2, 0}, {2.5, 0.3, 0}, {1.8, 0.0, 0},
                           {0.1, 2.0, 1},  {-0.2, 1.6, 1}, {0.3, 2.4, 1}, {0.0, 1.9, 1},
                           {-2.0, -2.0, 2}, {-1.6, -2.3, 2}, {-2.4, -1.7, 2}, {-1.9, -2.1, 2}};
  for (const auto &p : pts) {
    out.push_back({{{0, p[0]}, {1, p[1]}, {2, 1.0}}, static_cast<int>(p[2])});
  }
  return out;
}

TEST_CASE("softmax sums to one") {
  Weights w(3);
  Rng rng(1);
  for (double &v : w.values) v = rng.unit() * 6 - 3;
  for (const auto &x : toy_set()) {
    const auto p = softmax_scores(w, x);
    CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9);
  }
}

TEST_CASE("closed-form gradient at zero weights") {
  Weights w(3);
  SparseInstance x{{{0, 2.0}, {2, 1.0}}, 1};
  Weights g;
  const double loss = loss_and_gradient(w, std::vector{x}, g);
  CHECK(loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  for (int k = 0; k < 3; ++k) {
    const double d = 1.0 / 3 - (k == 1 ? 1.0 : 0.0);
    CHECK(g.at(k, 0) == doctest::Approx(d * 2.0).epsilon(1e-12));
    CHECK(g.at(k, 1) == 0.0);
    CHECK(g.at(k, 2) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("gradient check on toy data") {
  const auto data = toy_set();
  Rng rng(17);
  for (int point = 0; point < 5; ++point) {
    Weights w(3);
    for (double &v : w.values) v = rng.unit() * 4 - 2;
    CHECK(gradient_check(w, data, 20, static_cast<std::uint64_t>(point)) <= 1e-4);
  }
  CHECK_THROWS_AS(gradient_check(Weights(3), {}, 20), ValidationError);
  CHECK_THROWS_AS(gradient_check(Weights(3), data, 0), ValidationError);
}

TEST_CASE("toy set separates within 200 epochs with non-increasing loss") {
  const auto data = toy_set();
  TrainOptions o;
  o.epochs = 200;
  o.learning_rate = 0.1;
  const FitResult fit = fit_softmax(data, 3, o);
  for (std::size_t i = 1; i < fit.loss_history.size(); ++i) {
    CHECK(fit.loss_history[i] <= fit.loss_history[i - 1] + 1e-15);
  }
  // Decision rule checked exhaustively by explicit dot products.
  for (const auto &x : data) {
    double best = -1e300;
    int arg = -1;
    for (int k = 0; k < 3; ++k) {
      double z = 0;
      for (const auto &[j, v] : x.x) z += fit.weights.values[k * 3 + j] * v;
      if (z > best) {
        best = z;
        arg = k;
      }
    }
    CHECK(arg == x.label);
  }
  CHECK(fit_softmax(data, 3, o).weights == fit.weights);
}

TEST_CASE("mini-batch training is seeded") {
  const auto data = toy_set();
  TrainOptions o;
  o.epochs = 20;
  o.batch_size = 4;
  o.seed = 3;
  CHECK(fit_softmax(data, 3, o).weights == fit_softmax(data, 3, o).weights);
  TrainOptions p = o;
  p.seed = 4;
  CHECK(fit_softmax(data, 3, o).weights != fit_softmax(data, 3, p).weights);
}

TEST_CASE("train_proxy edge cases") {
  auto only = make_sample("1", "the hinge creaks", {{"hinge", kNeg}});
  const ProxyModel m = train_proxy(std::vector{only});
  CHECK(m.predict(only, 0) == kNeg);
  CHECK(m.weights.dim == m.features.size());
  CHECK(m.final_loss == m.loss_history.back());
  CHECK_THROWS_AS(train_proxy({}), ConfigError);
  auto unseen = make_sample("2", "totally new words", {{"words", kPos}});
  const auto p = m.predict_proba(unseen, 0);
  CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9);
}

TEST_CASE("report_from_predictions") {
  const std::vector<Polarity> gold = {kPos, kNeu, kNeg};
  CHECK(report_from_predictions(gold, gold).accuracy == 1.0);
  CHECK(report_from_predictions(gold, gold).macro_f1 == 1.0);
  const std::vector<Polarity> all_pos = {kPos, kPos, kPos};
  CHECK(report_from_predictions(gold, all_pos).accuracy == doctest::Approx(1.0 / 3));

  // Hand computation:
  //   confusion rows (gold) pos: [1,0,1]  neu: [1,1,0]  neg: [0,0,2]
  //   pos P=1/2 R=1/2 F1=1/2; neu P=1 R=1/2 F1=2/3; neg P=2/3 R=1 F1=4/5.
  const std::vector<Polarity> g6 = {kPos, kPos, kNeg, kNeg, kNeu, kNeu};
  const std::vector<Polarity> p6 = {kPos, kNeg, kNeg, kNeg, kPos, kNeu};
  const auto r = report_from_predictions(g6, p6);
  CHECK(r.confusion[0] == std::array<long, 3>{1, 0, 1});
  CHECK(r.confusion[1] == std::array<long, 3>{1, 1, 0});
  CHECK(r.confusion[2] == std::array<long, 3>{0, 0, 2});
  CHECK(r.accuracy == doctest::Approx(4.0 / 6).epsilon(1e-12));
  CHECK(r.per_class[0].f1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.per_class[1].f1 == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(r.per_class[2].f1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.macro_f1 == doctest::Approx((0.5 + 2.0 / 3 + 0.8) / 3).epsilon(1e-12));
  for (int k = 0; k < 3; ++k) {
    CHECK(r.confusion[k][0] + r.confusion[k][1] + r.confusion[k][2] ==
          r.per_class[k].support);
  }

  // Zero-support class contributes F1 = 0.
  const std::vector<Polarity> g2 = {kPos, kNeg};
  const auto z = report_from_predictions(g2, g2);
  CHECK(z.per_class[1].f1 == 0.0);
  CHECK(z.macro_f1 == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK_THROWS_AS(report_from_predictions({}, {}), ValidationError);
}

TEST_CASE("report invariants against a brute-force oracle on random labels") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.index(30);
    std::vector<Polarity> g, p;
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(polarity_from_code(static_cast<int>(rng.index(3))));
      p.push_back(polarity_from_code(static_cast<int>(rng.index(3))));
    }
    const auto r = report_from_predictions(g, p);
    long trace = 0;
    for (int k = 0; k < 3; ++k) {
      long tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const int gi = polarity_code(g[i]), pi = polarity_code(p[i]);
        tp += gi == k && pi == k;
        fp += gi != k && pi == k;
        fn += gi == k && pi != k;
      }
      trace += tp;
      const double f1 = tp ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
      CHECK(r.per_class[k].f1 == doctest::Approx(f1).epsilon(1e-12));
    }
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(trace) / n).epsilon(1e-12));
  }
}

TEST_CASE("compare_regimes") {
  std::vector<LabeledSample> train = {
      make_sample("1", "great screen", {{"screen", kPos}}),
      make_sample("2", "awful screen", {{"screen", kNeg}}),
      make_sample("3", "the screen exists", {{"screen", kNeu}}),
      make_sample("4", "great keys", {{"keys", kPos}}),
      make_sample("5", "awful keys", {{"keys", kNeg}})};
  std::vector<LabeledSample> test = {make_sample("t", "great hinge", {{"hinge", kPos}}),
                                     make_sample("u", "awful fan", {{"fan", kNeg}})};
  TrainOptions o;
  o.epochs = 50;
  const RegimeTable t = compare_regimes(train, train, test, o);
  CHECK(t.mixed == t.original);
  CHECK(t.generated == t.original);
  CHECK_THROWS_AS(compare_regimes(train, {}, test, o), ConfigError);
  CHECK_THROWS_AS(compare_regimes(train, train, {}, o), ConfigError);
  const std::string text = t.to_text();
  CHECK(text.find("Original") != std::string::npos);
  CHECK(text.find("Generated") != std::string::npos);
  CHECK(text.find("Mixed") != std::string::npos);
  CHECK(t.to_json().size() == 3);
}

// Brute-force distinct-n: enumerate every n-gram of every sentence.
double distinct_oracle(const std::vector<LabeledSample> &xs, std::size_t n) {
  std::vector<std::vector<std::string>> grams;
  for (const auto &s : xs) {
    const auto t = tokenize(s.sentence.text);
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
      grams.emplace_back(t.begin() + i, t.begin() + i + n);
    }
  }
  std::size_t unique = 0;
  for (std::size_t i = 0; i < grams.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = grams[i] == grams[j];
    unique += !seen;
  }
  return grams.empty() ? 0.0 : static_cast<double>(unique) / grams.size();
}

TEST_CASE("diversity_metrics") {
  auto ab = make_sample("1", "a b", {{"a", kPos}});
  CHECK(diversity_metrics(std::vector{ab, ab}).distinct_1 == 0.5);
  auto uniq = make_sample("2", "one two three four", {{"one", kPos}});
  CHECK(diversity_metrics(std::vector{uniq}).distinct_1 == 1.0);
  CHECK_THROWS_AS(diversity_metrics({}), ValidationError);

  const std::vector<LabeledSample> four = {
      make_sample("1", "The screen is great and the screen is big", {{"screen", kPos}}),
      make_sample("2", "the keys are great", {{"keys", kPos}}),
      make_sample("3", "Screen is great", {{"screen", kPos}}),
      make_sample("4", "fan", {{"fan", kNeg}})};
  const auto d = diversity_metrics(four);
  CHECK(d.distinct_1 == doctest::Approx(distinct_oracle(four, 1)).epsilon(1e-12));
  CHECK(d.distinct_2 == doctest::Approx(distinct_oracle(four, 2)).epsilon(1e-12));
}

}  // namespace
}  // namespace absagen
