#include "lognet/synthesis.h"

#include <map>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "test_support.h"

namespace lognet {
namespace {

using testing::Table;

// Straightforward scalar version of the layered search: generate, keep the
// strict improvers, stop on a perfect network or an empty layer.
struct ReferenceRun {
  bool success = false;
  std::size_t layer = 0;
  std::vector<std::set<std::string>> layers;
  std::set<std::string> members;
};

ReferenceRun reference_synthesis(const Table& t, std::size_t max_layers) {
  const std::size_t m = t.rows.front().size();
  std::vector<std::size_t> fmu(m);
  ReferenceRun run;
  for (std::size_t k = 0; k < m; ++k) {
    fmu[k] = testing::reference_feature_mu(k, t);
    if (fmu[k] == 0) run.members.insert("x" + std::to_string(k));
  }
  if (!run.members.empty()) {
    run.success = true;
    return run;
  }
  std::vector<std::pair<Expr, std::size_t>> current;
  for (std::size_t r = 1; r <= max_layers; ++r) {
    std::vector<std::pair<Expr, std::size_t>> next;
    auto consider = [&](const Expr& e, std::size_t parent_mu, std::size_t k) {
      const std::size_t mu = testing::reference_mu(e, t);
      if (mu < parent_mu && mu < fmu[k]) next.emplace_back(e, mu);
    };
    if (r == 1) {
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k)
          for (int g = 0; g < 10; ++g) consider(Expr::node(GateId(g), Expr::leaf(j), k), fmu[j], k);
    } else {
      for (const auto& [p, pmu] : current)
        for (std::size_t k = 0; k < m; ++k)
          for (int g = 0; g < 10; ++g) consider(Expr::node(GateId(g), p, k), pmu, k);
    }
    run.layer = r;
    std::set<std::string> sigs;
    for (const auto& [e, mu] : next) sigs.insert(e.signature());
    run.layers.push_back(sigs);
    if (next.empty()) return run;
    for (const auto& [e, mu] : next)
      if (mu == 0) run.members.insert(e.signature());
    if (!run.members.empty()) {
      run.success = true;
      return run;
    }
    current = std::move(next);
  }
  return run;
}

std::set<std::string> signatures(const std::vector<Candidate>& cs) {
  std::set<std::string> s;
  for (const auto& c : cs) s.insert(c.expr.signature());
  return s;
}

std::set<std::string> signatures(const std::vector<Survivor>& ss) {
  std::set<std::string> s;
  for (const auto& c : ss) s.insert(c.signature);
  return s;
}

TEST(SynthesisTest, FeatureLosses) {
  const Table t = testing::cube(3, [](const auto& r) { return r[1] != 0; });
  const auto mus = feature_losses(testing::to_bset(t));
  EXPECT_EQ(mus, (std::vector<std::size_t>{4, 0, 4}));

  const BooleanLearningSet half =
      make_boolean_set({{0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}}, {1, 0, 1, 0, 1, 0, 1, 0});
  EXPECT_EQ(feature_losses(half), (std::vector<std::size_t>{4}));
}

TEST(SynthesisTest, FeatureLossMatchesQuantizationErrors) {
  const LearningSet set = testing::scale_fixture();
  const BooleanLearningSet b = binarize(set);
  const auto mus = feature_losses(b);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(mus[j], b.provenance().thresholds[j]->train_errors);
}

TEST(SynthesisTest, GenerationCounts) {
  std::mt19937_64 rng(1);
  for (std::size_t m : {2, 3, 5}) {
    const BooleanLearningSet b = testing::to_bset(testing::random_table(rng, 8, m));
    EXPECT_EQ(generate_layer1(b).size(), m * (m - 1) / 2 * 10);
  }
  const BooleanLearningSet b5 = testing::to_bset(testing::random_table(rng, 8, 5));
  EXPECT_EQ(generate_layer_r({make_candidate(parse_signature("(g0 x0 x1)"), b5)}, b5).size(), 50U);
  const BooleanLearningSet b8 = testing::to_bset(testing::random_table(rng, 8, 8));
  std::vector<Candidate> nine;
  for (std::size_t k = 1; k <= 9 && k < 8; ++k) nine.push_back(make_candidate(Expr::node(GateId(0), Expr::leaf(0), k), b8));
  nine.push_back(make_candidate(parse_signature("(g2 x1 x2)"), b8));
  nine.push_back(make_candidate(parse_signature("(g2 x1 x3)"), b8));
  ASSERT_EQ(nine.size(), 9U);
  EXPECT_EQ(generate_layer_r(nine, b8).size(), 720U);
  EXPECT_THROW(generate_layer_r({}, b8), std::invalid_argument);
  EXPECT_THROW(generate_layer1(make_boolean_set({{0}, {1}}, {0, 1})), std::invalid_argument);
}

TEST(SynthesisTest, GeneratedCandidatesCarryParentAndFeatureLoss) {
  std::mt19937_64 rng(2);
  const Table t = testing::random_table(rng, 12, 4);
  const BooleanLearningSet b = testing::to_bset(t);
  for (const auto& sc : generate_layer1(b)) {
    const Expr& e = sc.candidate.expr;
    EXPECT_EQ(sc.candidate.mu, testing::reference_mu(e, t));
    EXPECT_EQ(sc.parent_mu, testing::reference_mu(e.left(), t));
    EXPECT_EQ(sc.feature_mu, testing::reference_feature_mu(e.feature(), t));
  }
}

TEST(SynthesisTest, SelectionIsStrict) {
  const BooleanLearningSet b = make_boolean_set({{0, 1}, {1, 0}}, {0, 1});
  auto cand = [&](const char* sig, std::size_t mu, std::size_t pmu, std::size_t fmu) {
    Candidate c = make_candidate(parse_signature(sig), b);
    c.mu = mu;
    return ScoredCandidate{c, pmu, fmu};
  };
  const Selection kept = select_exterior_addition({cand("(g0 x0 x1)", 2, 3, 4)}, {});
  EXPECT_EQ(kept.survivors.size(), 1U);
  EXPECT_TRUE(select_exterior_addition({cand("(g0 x0 x1)", 3, 3, 4)}, {}).survivors.empty());
  EXPECT_TRUE(select_exterior_addition({cand("(g0 x0 x1)", 3, 4, 3)}, {}).survivors.empty());
}

TEST(SynthesisTest, SelectionOrdersDedupsAndTruncates) {
  const BooleanLearningSet b = make_boolean_set({{0, 1, 1}, {1, 0, 1}}, {0, 1});
  auto cand = [&](const char* sig, std::size_t mu) {
    Candidate c = make_candidate(parse_signature(sig), b);
    c.mu = mu;
    return ScoredCandidate{c, 9, 9};
  };
  std::vector<ScoredCandidate> cs = {cand("(g2 x0 x1)", 3), cand("(g1 x0 x2)", 1), cand("(g0 x0 x1)", 3),
                                     cand("(g1 x0 x2)", 1), cand("(g5 x1 x2)", 2)};
  const Selection all = select_exterior_addition(cs, {});
  ASSERT_EQ(all.survivors.size(), 4U);
  EXPECT_EQ(all.deduped, 1U);
  EXPECT_EQ(all.survivors[0].signature, "(g1 x0 x2)");
  EXPECT_EQ(all.survivors[1].signature, "(g5 x1 x2)");
  EXPECT_EQ(all.survivors[2].signature, "(g0 x0 x1)");
  EXPECT_EQ(all.survivors[3].signature, "(g2 x0 x1)");

  const Selection capped = select_exterior_addition(cs, {3, true});
  EXPECT_EQ(capped.truncated, 1U);
  EXPECT_EQ(capped.survivors.back().signature, "(g0 x0 x1)");

  const Selection raw = select_exterior_addition(cs, {std::nullopt, false});
  EXPECT_EQ(raw.survivors.size(), 5U);
}

TEST(SynthesisTest, ParityHasNoLayerOneSurvivors) {
  const Table t = testing::cube(3, [](const auto& r) { return (r[0] ^ r[1] ^ r[2]) != 0; });
  const BooleanLearningSet b = testing::to_bset(t);
  for (const auto& sc : generate_layer1(b)) EXPECT_EQ(sc.candidate.mu, 4U);
  const SynthesisResult r = synthesize(b);
  EXPECT_EQ(r.outcome, Outcome::kExhausted);
  EXPECT_EQ(r.layer, 1U);
  EXPECT_EQ(r.reason, ExhaustReason::kNoSurvivors);
  EXPECT_EQ(r.best_mu, 4U);
  ASSERT_EQ(r.trace.size(), 1U);
  EXPECT_EQ(r.trace[0].survivors, 0U);
}

TEST(SynthesisTest, RecoversConjunctionAndExclusiveOr) {
  const SynthesisResult a = synthesize(testing::to_bset(testing::cube(3, [](const auto& r) { return r[0] && r[1]; })));
  EXPECT_EQ(a.outcome, Outcome::kSuccess);
  EXPECT_EQ(a.layer, 1U);
  EXPECT_TRUE(signatures(a.members).count("(g0 x0 x1)"));

  const SynthesisResult x = synthesize(testing::to_bset(testing::cube(3, [](const auto& r) { return r[0] != r[1]; })));
  EXPECT_EQ(x.outcome, Outcome::kSuccess);
  EXPECT_EQ(x.layer, 1U);
  EXPECT_EQ(signatures(x.members), (std::set<std::string>{"(g8 x0 x1)"}));
}

TEST(SynthesisTest, PerfectSensorShortcut) {
  const SynthesisResult r = synthesize(testing::to_bset(testing::cube(3, [](const auto& r) { return r[2] != 0; })));
  EXPECT_EQ(r.outcome, Outcome::kSuccess);
  EXPECT_EQ(r.layer, 0U);
  EXPECT_TRUE(r.sensor_shortcut);
  EXPECT_EQ(signatures(r.members), (std::set<std::string>{"x2"}));
}

TEST(SynthesisTest, SingleSensorIsExhausted) {
  const SynthesisResult r = synthesize(make_boolean_set({{0}, {1}, {0}, {1}}, {0, 0, 1, 1}));
  EXPECT_EQ(r.outcome, Outcome::kExhausted);
  EXPECT_EQ(r.best_mu, 2U);
}

TEST(SynthesisTest, LayerBudget) {
  // Needs two layers: y = (x0 xor x1) and x2 over the cube.
  const Table t = testing::cube(3, [](const auto& r) { return (r[0] != r[1]) && r[2]; });
  SynthesisConfig c;
  c.max_layers = 1;
  const SynthesisResult r = synthesize(testing::to_bset(t), c);
  EXPECT_EQ(r.outcome, Outcome::kExhausted);
  EXPECT_EQ(r.reason, ExhaustReason::kLayerBudget);
  EXPECT_GT(r.best_mu, 0U);
  const SynthesisResult full = synthesize(testing::to_bset(t));
  EXPECT_EQ(full.outcome, Outcome::kSuccess);
  EXPECT_EQ(full.layer, 2U);
}

TEST(SynthesisTest, ConfigValidation) {
  const BooleanLearningSet b = testing::to_bset(testing::cube(2, [](const auto& r) { return r[0] && r[1]; }));
  SynthesisConfig c;
  c.max_layers = 0;
  EXPECT_THROW(synthesize(b, c), std::invalid_argument);
  c = {};
  c.width_cap = 0;
  EXPECT_THROW(synthesize(b, c), std::invalid_argument);
}

TEST(SynthesisTest, MatchesReferenceSearch) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 2 + rng() % 3;
    const std::size_t n = 2 + rng() % 11;
    const Table t = testing::random_table(rng, n, m);
    SynthesisConfig c;
    c.record_layers = true;
    c.max_layers = 6;
    const SynthesisResult r = synthesize(testing::to_bset(t), c);
    const ReferenceRun ref = reference_synthesis(t, c.max_layers);
    ASSERT_EQ(r.outcome == Outcome::kSuccess, ref.success) << "trial " << trial;
    ASSERT_EQ(r.layers.size(), ref.layers.size()) << "trial " << trial;
    for (std::size_t i = 0; i < ref.layers.size(); ++i) EXPECT_EQ(signatures(r.layers[i].survivors), ref.layers[i]);
    if (ref.success) {
      EXPECT_EQ(r.layer, ref.layer);
      EXPECT_EQ(signatures(r.members), ref.members);
    }
  }
}

TEST(SynthesisTest, SoundnessAndDescentOnRandomSets) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 2 + rng() % 6;
    const std::size_t n = 2 + rng() % 20;
    const Table t = testing::random_table(rng, n, m);
    SynthesisConfig c;
    c.record_layers = true;
    c.width_cap = 500;
    const SynthesisResult r = synthesize(testing::to_bset(t), c);
    for (const auto& layer : r.layers) {
      for (const auto& s : layer.survivors) {
        const Expr& e = s.candidate.expr;
        ASSERT_EQ(e.depth(), layer.r);
        const std::size_t mu = testing::reference_mu(e, t);
        ASSERT_EQ(mu, s.candidate.mu);
        ASSERT_LT(mu, testing::reference_mu(e.left(), t));
        ASSERT_LT(mu, testing::reference_feature_mu(e.feature(), t));
        for (Expr x = e; !x.is_leaf(); x = x.left()) ASSERT_LT(testing::reference_mu(x, t), testing::reference_mu(x.left(), t));
      }
    }
    if (r.outcome == Outcome::kSuccess) {
      for (const auto& mem : r.members) {
        EXPECT_EQ(testing::reference_mu(mem.expr, t), 0U);
        EXPECT_LE(features_used(mem.expr).size(), r.layer + 1);
        Expr leaf = mem.expr;
        while (!leaf.is_leaf()) leaf = leaf.left();
        EXPECT_LE(r.layer, testing::reference_mu(leaf, t));
      }
    } else {
      EXPECT_GT(r.best_mu, 0U);
    }
  }
}

TEST(SynthesisTest, OrderAndThreadIndependence) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const Table t = testing::random_table(rng, 4 + rng() % 12, 3 + rng() % 3);
    const BooleanLearningSet b = testing::to_bset(t);
    SynthesisConfig base;
    base.record_layers = true;
    base.max_layers = 5;
    const SynthesisResult ref = synthesize(b, base);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      SynthesisConfig c = base;
      c.generation_order_seed = seed;
      c.threads = 1 + seed;
      const SynthesisResult r = synthesize(b, c);
      ASSERT_EQ(r.layers.size(), ref.layers.size());
      for (std::size_t i = 0; i < r.layers.size(); ++i) {
        std::vector<std::string> a, bb;
        for (const auto& s : r.layers[i].survivors) a.push_back(s.signature);
        for (const auto& s : ref.layers[i].survivors) bb.push_back(s.signature);
        // Same set, and the canonical ordering makes the sequence identical too.
        EXPECT_EQ(a, bb);
      }
      EXPECT_EQ(signatures(r.members), signatures(ref.members));
    }
  }
}

TEST(SynthesisTest, WidthCapIsReproducible) {
  std::mt19937_64 rng(4);
  const Table t = testing::random_table(rng, 20, 6);
  SynthesisConfig c;
  c.width_cap = 7;
  c.record_layers = true;
  const SynthesisResult a = synthesize(testing::to_bset(t), c);
  c.generation_order_seed = 12;
  c.threads = 3;
  const SynthesisResult b = synthesize(testing::to_bset(t), c);
  ASSERT_EQ(a.layers.size(), b.layers.size());
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    EXPECT_LE(a.layers[i].survivors.size(), 7U);
    EXPECT_EQ(signatures(a.layers[i].survivors), signatures(b.layers[i].survivors));
  }
}

}  // namespace
}  // namespace lognet
