#include <catch2/catch_amalgamated.hpp>

#include "treeagg/bracketed.hpp"
#include "treeagg/driver.hpp"
#include "treeagg/eval.hpp"
#include "treeagg/fixture.hpp"

using namespace treeagg;

namespace {
std::vector<ParseTree> mk(const std::vector<std::string>& lines) {
  std::vector<ParseTree> trees;
  for (const std::string& line : lines) trees.push_back(parse_bracketed(line));
  return trees;
}
}  // namespace

TEST_CASE("score_counts applies the textbook formulas", "[eval]") {
  const EvalReport r = score_counts(3, 4, 5);
  CHECK(r.precision == Catch::Approx(0.75));
  CHECK(r.recall == Catch::Approx(0.6));
  CHECK(r.f1 == Catch::Approx(2.0 * 0.75 * 0.6 / 1.35));

  // Degenerate conventions: empty prediction or no overlap score zero.
  const EvalReport empty = score_counts(0, 0, 5);
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
  CHECK(score_counts(0, 4, 5).f1 == 0.0);
}

TEST_CASE("eval_labeled counts (span, label) constituents including POS tags", "[eval]") {
  const std::vector<ParseTree> gold = mk({"(S (NP (DT a) (NN b)) (VB c))"});
  CHECK(eval_labeled(gold, gold).f1 == 1.0);
  CHECK(eval_labeled(gold, gold).precision == 1.0);
  CHECK(eval_labeled(gold, gold).recall == 1.0);

  // 4 predicted constituents, 3 of them correct, 5 in gold.
  const std::vector<ParseTree> pred = mk({"(S (DT a) (XX b) (VB c))"});
  const EvalReport r = eval_labeled(pred, gold);
  CHECK(r.correct == 3);
  CHECK(r.predicted == 4);
  CHECK(r.gold == 5);
  CHECK(r.precision == Catch::Approx(0.75));
  CHECK(r.recall == Catch::Approx(0.6));
  CHECK(r.f1 == Catch::Approx(0.6667).margin(5e-4));
  CHECK_FALSE(r.rf_total.has_value());

  // Unary chains contribute one constituent per chain element, as a set.
  const std::vector<ParseTree> chain = mk({"(S (NP (NN a)))"});
  const EvalReport cr = eval_labeled(chain, chain);
  CHECK(cr.gold == 3);

  CHECK_THROWS_MATCHES(eval_labeled(pred, mk({"(S (X a))", "(S (X a))"})), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::length_mismatch; }));
  CHECK_THROWS_MATCHES(eval_labeled(pred, mk({"(S (DT a) (NN bb) (VB c))"})), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::tokenization_mismatch;
                       }));
}

TEST_CASE("eval_structure scores bare spans and totals the tree distance", "[eval]") {
  const std::vector<ParseTree> gold = mk({"(S (NP (A a) (B b)) (C c))"});
  const EvalReport perfect = eval_structure(gold, gold);
  CHECK(perfect.f1 == 1.0);
  REQUIRE(perfect.rf_total.has_value());
  CHECK(*perfect.rf_total == 0);

  // Cluster sets {[0,2),[0,3)} vs {[1,3),[0,3)}: distance 2, 1 of 2 correct.
  const std::vector<ParseTree> pred = mk({"(S (A a) (VP (B b) (C c)))"});
  const EvalReport r = eval_structure(pred, gold);
  CHECK(*r.rf_total == 2);
  CHECK(r.correct == 1);
  CHECK(r.predicted == 2);
  CHECK(r.gold == 2);
  CHECK(r.precision == Catch::Approx(0.5));
  CHECK(r.recall == Catch::Approx(0.5));

  // With fixed cluster counts, smaller distance means higher overlap score.
  const std::vector<ParseTree> worse = mk({"(X (Y (A a) (Q (B b) (C c))))"});
  const EvalReport w = eval_structure(worse, gold);
  CHECK(*w.rf_total >= *r.rf_total);
  CHECK(w.f1 <= r.f1);
}

TEST_CASE("counts add over corpus concatenation", "[eval]") {
  const std::vector<ParseTree> gold1 = mk({"(S (NP (A a) (B b)) (C c))"});
  const std::vector<ParseTree> pred1 = mk({"(S (A a) (VP (B b) (C c)))"});
  const std::vector<ParseTree> gold2 = mk({"(S (X x) (Y y))"});
  const std::vector<ParseTree> pred2 = mk({"(S (X x) (Z y))"});

  std::vector<ParseTree> gold_all = gold1;
  gold_all.push_back(gold2[0]);
  std::vector<ParseTree> pred_all = pred1;
  pred_all.push_back(pred2[0]);

  const EvalReport a = eval_labeled(pred1, gold1);
  const EvalReport b = eval_labeled(pred2, gold2);
  const EvalReport both = eval_labeled(pred_all, gold_all);
  CHECK(both.correct == a.correct + b.correct);
  CHECK(both.predicted == a.predicted + b.predicted);
  CHECK(both.gold == a.gold + b.gold);
}

TEST_CASE("rank_parsers compares weight order against gold order", "[eval]") {
  FixtureConfig config;
  config.seed = 5;
  config.sentences = 250;
  config.min_tokens = 5;
  config.max_tokens = 14;
  config.noise_rates = {0.05, 0.15, 0.30};
  const Fixture fixture = generate_corpus(config);
  const AggregationResult result = run_cptam(fixture.corpus);
  const RankingTable table = rank_parsers(fixture.corpus, fixture.gold, result.weights);

  REQUIRE(table.entries.size() == 3);
  CHECK(table.structure_rankings_match);
  CHECK(table.label_rankings_match);
  CHECK(table.entries[0].rank_by_structure_f1 == 1);
  CHECK(table.entries[2].rank_by_structure_f1 == 3);

  // Identical parsers tie; uniform weights tie everywhere.
  FixtureConfig twin_config;
  twin_config.seed = 6;
  twin_config.sentences = 20;
  twin_config.noise_rates = {0.2, 0.2};
  Fixture twins = generate_corpus(twin_config);
  for (SentenceBundle& bundle : twins.corpus.bundles) bundle.trees[1] = bundle.trees[0];
  ParserWeights uniform{{1.0, 1.0}, {1.0, 1.0}};
  const RankingTable tied = rank_parsers(twins.corpus, twins.gold, uniform);
  CHECK(tied.entries[0].rank_by_structure_f1 == 1);
  CHECK(tied.entries[1].rank_by_structure_f1 == 1);
  CHECK(tied.entries[0].rank_by_structure_weight == 1);
  CHECK(tied.entries[1].rank_by_structure_weight == 1);
  CHECK(tied.structure_rankings_match);
  CHECK(tied.label_rankings_match);
}
