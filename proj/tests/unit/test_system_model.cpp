#include "cbd/errors.hpp"
#include "cbd/rng.hpp"
#include "cbd/scenarios.hpp"
#include "cbd/system_model.hpp"

#include "../support/corpus.hpp"

#include <doctest.h>

#include <cmath>

using namespace cbd;

TEST_CASE("pair expectations") {
  const PairDistribution d{0.4, 0.2, 0.1, 0.3};
  CHECK(d.v() == doctest::Approx(0.2));
  CHECK(d.w() == doctest::Approx(0.0));
  CHECK(d.vw() == doctest::Approx(0.4));
  CHECK(d.total() == doctest::Approx(1.0));
}

TEST_CASE("from_expectations reconstruction") {
  SUBCASE("perfect correlation with uniform marginals") {
    const auto d = PairDistribution::from_expectations(0.0, 0.0, 1.0);
    CHECK(d.pp == doctest::Approx(0.5));
    CHECK(d.pm == doctest::Approx(0.0));
    CHECK(d.mp == doctest::Approx(0.0));
    CHECK(d.mm == doctest::Approx(0.5));
  }
  SUBCASE("worked example") {
    const auto d = PairDistribution::from_expectations(0.2, 0.0, 0.4);
    CHECK(d.pp == doctest::Approx(0.4));
    CHECK(d.pm == doctest::Approx(0.2));
    CHECK(d.mp == doctest::Approx(0.1));
    CHECK(d.mm == doctest::Approx(0.3));
    // All three expectations re-derive from the four entries.
    CHECK(d.v() == doctest::Approx(0.2));
    CHECK(d.w() == doctest::Approx(0.0));
    CHECK(d.vw() == doctest::Approx(0.4));
  }
  SUBCASE("opposite constants cannot correlate positively") {
    CHECK_THROWS_AS(PairDistribution::from_expectations(1.0, -1.0, 1.0),
                    InfeasibleExpectations);
  }
}

TEST_CASE("ingestion clamps tiny negatives and keeps real ones") {
  const auto clamped =
      PairDistribution::from_probabilities(0.5, -5e-13, 0.0, 0.5);
  CHECK(clamped.pm == 0.0);
  const auto kept =
      PairDistribution::from_probabilities(0.5, -1e-6, 0.0, 0.5);
  CHECK(kept.pm == -1e-6); // left for validation to report
  CHECK(!validate(kept, "pair").empty());
}

TEST_CASE("validation catches out-of-range probabilities") {
  CyclicSystem sys = pr_box();
  CHECK(validate(sys).empty());

  sys.pairs[0].pp = 1.2;
  const auto violations = validate(sys);
  REQUIRE(!violations.empty());
  bool found = false;
  for (const auto& v : violations) {
    if (v.message.find("probability out of range") != std::string::npos) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("validation of generic systems") {
  GenericSystem sys = specker();
  CHECK(validate(sys).empty());

  SUBCASE("connection within one bunch") {
    sys.connections[0] = {"A_X", "B_X"};
    const auto violations = validate(sys);
    REQUIRE(!violations.empty());
    CHECK(violations.front().message == "connection within single bunch");
  }
  SUBCASE("duplicate variable names") {
    sys.bunches[1].vars[0] = "A_X";
    CHECK(!validate(sys).empty());
  }
  SUBCASE("overlapping connections") {
    sys.connections.push_back({"A_X", "C_Y"});
    CHECK(!validate(sys).empty());
  }
  SUBCASE("pmf sum off") {
    sys.bunches[0].pmf[1] = 0.6;
    CHECK(!validate(sys).empty());
  }
}

TEST_CASE("marginal summary conventions") {
  SUBCASE("PR box") {
    const auto s = marginal_summary(pr_box());
    for (int i = 0; i < 4; ++i) {
      CHECK(s.v[static_cast<std::size_t>(i)] == doctest::Approx(0.0));
      CHECK(s.w[static_cast<std::size_t>(i)] == doctest::Approx(0.0));
    }
    CHECK(s.vw[0] == doctest::Approx(1.0));
    CHECK(s.vw[1] == doctest::Approx(1.0));
    CHECK(s.vw[2] == doctest::Approx(1.0));
    CHECK(s.vw[3] == doctest::Approx(-1.0));
  }
  SUBCASE("consistently connected system has v = w") {
    Rng rng(7u);
    const auto sys = testing::random_cc(5, rng);
    const auto s = marginal_summary(sys);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(s.v[i] == doctest::Approx(s.w[i]).epsilon(1e-12));
    }
  }
  SUBCASE("perturbed pair shows up in <V_1>") {
    CyclicSystem sys = all_correlated(3);
    sys.pairs[0] = PairDistribution{0.4, 0.2, 0.1, 0.3};
    const auto s = marginal_summary(sys);
    CHECK(s.v[0] == doctest::Approx(0.2));
    // <W_2> is read from pair 1, the pair in which W_2 occurs.
    CHECK(s.w[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("round trip: from_expectations after marginal_summary") {
  Rng rng(0x11u);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.word() % 5);
    const auto sys = testing::random_valid(n, rng);
    const auto rebuilt = from_expectations(marginal_summary(sys));
    REQUIRE(rebuilt.rank() == n);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      CHECK(std::abs(rebuilt.pairs[k].pp - sys.pairs[k].pp) <= 1e-12);
      CHECK(std::abs(rebuilt.pairs[k].pm - sys.pairs[k].pm) <= 1e-12);
      CHECK(std::abs(rebuilt.pairs[k].mp - sys.pairs[k].mp) <= 1e-12);
      CHECK(std::abs(rebuilt.pairs[k].mm - sys.pairs[k].mm) <= 1e-12);
    }
  }
}

TEST_CASE("relabel_permutation") {
  const PairDistribution a{0.4, 0.1, 0.2, 0.3};
  const PairDistribution b{0.25, 0.25, 0.25, 0.25};
  const PairDistribution c{0.5, 0.0, 0.0, 0.5};

  SUBCASE("identity successor map is unchanged") {
    const std::vector<IndexedPair> pairs = {{1, 2, a}, {2, 3, b}, {3, 1, c}};
    const auto result = relabel_permutation(pairs, {2, 3, 1});
    CHECK(result.new_to_old == std::vector<int>{1, 2, 3});
    CHECK(result.system.pairs[0].pp == doctest::Approx(a.pp));
    CHECK(result.system.pairs[1].pp == doctest::Approx(b.pp));
    CHECK(result.system.pairs[2].pp == doctest::Approx(c.pp));
  }
  SUBCASE("single 3-cycle is renamed to the successor map") {
    // pi = (1 -> 3, 3 -> 2, 2 -> 1)
    const std::vector<IndexedPair> pairs = {{1, 3, a}, {2, 1, b}, {3, 2, c}};
    const auto result = relabel_permutation(pairs, {3, 1, 2});
    CHECK(result.new_to_old == std::vector<int>{1, 3, 2});
    // New pair order walks the cycle: (1, pi(1)), (3, pi(3)), (2, pi(2)).
    CHECK(result.system.pairs[0].pp == doctest::Approx(a.pp));
    CHECK(result.system.pairs[1].pp == doctest::Approx(c.pp));
    CHECK(result.system.pairs[2].pp == doctest::Approx(b.pp));
  }
  SUBCASE("two transpositions are rejected") {
    const std::vector<IndexedPair> pairs = {
        {1, 2, a}, {2, 1, b}, {3, 4, c}, {4, 3, a}};
    CHECK_THROWS_AS(relabel_permutation(pairs, {2, 1, 4, 3}), NotCircular);
  }
  SUBCASE("non-permutations are rejected") {
    const std::vector<IndexedPair> pairs = {{1, 2, a}, {2, 2, b}, {3, 1, c}};
    CHECK_THROWS_AS(relabel_permutation(pairs, {2, 2, 1}), ValidationError);
  }
  SUBCASE("multiset of pair distributions is preserved") {
    const std::vector<IndexedPair> pairs = {
        {1, 4, a}, {2, 3, b}, {3, 1, c}, {4, 2, a}};
    // pi: 1->4, 4->2, 2->3, 3->1 (single 4-cycle)
    const auto result = relabel_permutation(pairs, {4, 3, 1, 2});
    double sum_pp = 0.0;
    for (const auto& p : result.system.pairs) {
      sum_pp += p.pp;
    }
    CHECK(sum_pp == doctest::Approx(a.pp + b.pp + c.pp + a.pp));
  }
}
