#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ruledistill/errors.hpp"
#include "ruledistill/grammar.hpp"
#include "ruledistill/hypotheses.hpp"
#include "ruledistill/rng.hpp"

using namespace rd;

namespace {

Formula lit(int feature, bool value) { return Formula{{Conjunction{{{feature, value}}}}}; }

// Probabilities that stop every D and C chain immediately.
ProbTable stop_everything(const Grammar& g) {
    auto rows = ProbTable::uniform(g).rows();
    rows[Grammar::kD] = {0.0, 1.0};
    rows[Grammar::kC] = {0.0, 1.0};
    return ProbTable(rows);
}

bool within_3_sigma(double hits, double n, double p) {
    const double sigma = std::sqrt(n * p * (1.0 - p));
    return std::abs(hits - n * p) <= 3.0 * sigma + 1e-9;
}

} // namespace

TEST_CASE("object bitstrings read feature 1 from the left") {
    const Object o = Object::parse("0111");
    CHECK_FALSE(o.feature(1));
    CHECK(o.feature(2));
    CHECK(o.feature(4));
    CHECK(o.code() == 7u);
    CHECK(o.to_string() == "0111");
    CHECK(all_objects(4).size() == 16);
    CHECK_THROWS_AS(Object::parse("01a1"), InvalidArgument);
    CHECK_THROWS_AS(o.feature(5), InvalidArgument);
}

TEST_CASE("default grammar shape") {
    const Grammar g4 = default_grammar(4);
    CHECK(g4.nonterminals()[Grammar::kP].productions.size() == 4);
    CHECK(g4.nonterminals()[Grammar::kDTop].productions.size() == 1);
    CHECK(g4.nonterminals()[Grammar::kCTop].productions.size() == 1);
    CHECK(g4.nonterminals()[Grammar::kD].productions.size() == 2);
    CHECK(g4.nonterminals()[Grammar::kC].productions.size() == 2);
    CHECK_NOTHROW(g4.validate());

    const Grammar g1 = default_grammar(1);
    CHECK(g1.nonterminals()[Grammar::kP].productions.size() == 1);
    CHECK(g1.nonterminals()[g1.feature_nonterminal(1)].productions.size() == 2);

    const Grammar g3 = default_grammar(3);
    std::size_t literal_choices = 0;
    for (int i = 1; i <= 3; ++i) literal_choices += g3.nonterminals()[g3.feature_nonterminal(i)].productions.size();
    CHECK(literal_choices == 6);

    CHECK_THROWS_AS(default_grammar(0), InvalidArgument);
}

TEST_CASE("sample_prob_table") {
    const Grammar g = default_grammar(4);
    Rng rng(3);
    const ProbTable t = sample_prob_table(g, 1.0, rng);
    CHECK(t[Grammar::kCTop] == std::vector<double>{1.0});
    CHECK(t[Grammar::kStart] == std::vector<double>{1.0});
    for (const auto& row : t.rows()) {
        double s = 0.0;
        for (double p : row) {
            CHECK(p >= 0.0);
            s += p;
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
    }

    SUBCASE("same seed, same table") {
        Rng a(11), b(11);
        CHECK(sample_prob_table(g, 0.7, a) == sample_prob_table(g, 0.7, b));
    }
    SUBCASE("large alpha concentrates on uniform") {
        // component of a symmetric Dirichlet(alpha) over k: mean 1/k, var (k-1)/(k^2 (k alpha + 1))
        const double alpha = 1000.0;
        const int draws = 10000;
        Rng r(5);
        double sum = 0.0;
        for (int i = 0; i < draws; ++i) sum += sample_prob_table(g, alpha, r)[Grammar::kP][0];
        const double var = 3.0 / (16.0 * (4.0 * alpha + 1.0));
        CHECK(std::abs(sum / draws - 0.25) <= 3.0 * std::sqrt(var / draws));
    }
    CHECK_THROWS_AS(sample_prob_table(g, 0.0, rng), InvalidArgument);
}

TEST_CASE("sample_formula") {
    const Grammar g = default_grammar(4);
    Rng rng(1);

    SUBCASE("forced stops give a single literal") {
        const ProbTable t = stop_everything(g);
        for (int i = 0; i < 50; ++i) {
            const Formula f = sample_formula(g, t, rng);
            REQUIRE(f.conjunctions.size() == 1);
            CHECK(f.conjunctions[0].literals.size() == 1);
        }
    }
    SUBCASE("uniform probabilities: single literals carry 8/32 of the mass") {
        const ProbTable t = ProbTable::uniform(g);
        const int n = 100000;
        int single = 0, f1_one = 0;
        for (int i = 0; i < n; ++i) {
            const Formula f = sample_formula(g, t, rng);
            CHECK_FALSE(f.conjunctions.empty());
            CHECK_FALSE(f.conjunctions.front().literals.empty());
            if (f.literal_count() == 1 && f.conjunctions.size() == 1) {
                ++single;
                if (f == lit(1, true)) ++f1_one;
            }
        }
        // 1 * 1 * (1/4) * (1/2) * (1/2 C->True) * (1/2 D->False)
        CHECK(within_3_sigma(single, n, 8.0 / 32.0));
        CHECK(within_3_sigma(f1_one, n, 1.0 / 32.0));
    }
    SUBCASE("supercritical probabilities diverge") {
        auto rows = ProbTable::uniform(g).rows();
        rows[Grammar::kC] = {1.0, 0.0};
        CHECK_THROWS_AS(sample_formula(g, ProbTable(rows), rng, 10), SamplingDiverged);
        CHECK_FALSE(try_sample_formula(g, ProbTable(rows), rng, 10).has_value());
    }
    CHECK_THROWS_AS(sample_formula(g, ProbTable::uniform(g), rng, 1), InvalidArgument);
}

TEST_CASE("sampling frequencies match exp(log_prob_given_probs)") {
    const Grammar g = default_grammar(3);
    Rng table_rng(21);
    const ProbTable t = sample_prob_table(g, 1.0, table_rng);
    Rng rng(22);
    const int n = 200000;
    std::map<std::string, int> freq;
    std::map<std::string, Formula> seen;
    for (int i = 0; i < n; ++i) {
        const Formula f = sample_formula(g, t, rng, 60);
        const auto key = f.to_string();
        ++freq[key];
        seen.emplace(key, f);
        if (i < 2000) CHECK(std::isfinite(log_prob_given_probs(f, g, t)));
    }
    int checked = 0;
    for (const auto& [key, count] : freq) {
        if (count < 200) continue;
        const double p = std::exp(log_prob_given_probs(seen.at(key), g, t));
        CHECK_MESSAGE(within_3_sigma(count, n, p), key);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("evaluate") {
    const Formula f = Formula::parse("(f3=1 & f2=0)");
    CHECK(evaluate(f, Object::parse("0010")));
    CHECK_FALSE(evaluate(f, Object::parse("0110")));
    for (const auto& o : all_objects(4)) CHECK_FALSE(evaluate(Formula{}, o));
    int count = 0;
    for (const auto& o : all_objects(4)) count += evaluate(lit(1, false), o);
    CHECK(count == 8);
    CHECK(evaluate(Formula{{Conjunction{}}}, Object::parse("1010")));
    CHECK_THROWS_AS(evaluate(lit(5, true), Object::parse("0000")), InvalidArgument);

    // literal order inside conjunctions does not matter
    const Formula a = Formula::parse("(f1=1 & f4=0 & f2=1) | (f3=0)");
    const Formula b = Formula::parse("(f2=1 & f1=1 & f4=0) | (f3=0)");
    for (const auto& o : all_objects(4)) CHECK(evaluate(a, o) == evaluate(b, o));
    CHECK(truth_table(a, 4) == truth_table(b, 4));
}

TEST_CASE("formula text round trip") {
    for (const char* text : {"(f3=1 & f2=0) | (f1=1)", "FALSE", "(f1=0)", "(f2=1) | (TRUE)"}) {
        CHECK(Formula::parse(text).to_string() == text);
    }
    CHECK_THROWS_AS(Formula::parse("(f1=2)"), InvalidArgument);
    CHECK_THROWS_AS(Formula::parse("(f1=1"), InvalidArgument);
    Rng rng(9);
    const Grammar g = default_grammar(4);
    for (int i = 0; i < 500; ++i) {
        const Formula f = sample_formula(g, sample_prob_table(g, 1.0, rng), rng);
        CHECK(Formula::parse(f.to_string()) == f);
    }
}

TEST_CASE("derivation counts") {
    const Grammar g = default_grammar(4);
    const ProductionCounts c = derivation_counts(lit(1, true), g);
    CHECK(c.counts[Grammar::kDTop] == std::vector<std::uint32_t>{1});
    CHECK(c.counts[Grammar::kCTop] == std::vector<std::uint32_t>{1});
    CHECK(c.counts[Grammar::kP] == std::vector<std::uint32_t>{1, 0, 0, 0});
    CHECK(c.counts[g.feature_nonterminal(1)] == std::vector<std::uint32_t>{1, 0});
    CHECK(c.counts[Grammar::kC] == std::vector<std::uint32_t>{0, 1});
    CHECK(c.counts[Grammar::kD] == std::vector<std::uint32_t>{0, 1});
    CHECK(c.total(g.feature_nonterminal(2)) == 0);

    const ProductionCounts two = derivation_counts(Formula::parse("(f1=1) | (f2=0)"), g);
    CHECK(two.counts[Grammar::kD] == std::vector<std::uint32_t>{1, 1});

    CHECK_FALSE(is_derivable(Formula{}, g));
    CHECK_THROWS_AS(derivation_counts(Formula{}, g), InvalidArgument);
    CHECK_FALSE(is_derivable(Formula{{Conjunction{}}}, g));
}

TEST_CASE("log_prob_given_probs") {
    const Grammar g = default_grammar(4);
    CHECK(log_prob_given_probs(lit(1, true), g, ProbTable::uniform(g)) == doctest::Approx(std::log(1.0 / 32.0)));
    auto rows = ProbTable::uniform(g).rows();
    rows[g.feature_nonterminal(1)] = {0.0, 1.0};
    CHECK(std::isinf(log_prob_given_probs(lit(1, true), g, ProbTable(rows))));
}

TEST_CASE("marginal prior") {
    const Grammar g = default_grammar(4);
    // Dirichlet-multinomial by hand, alpha = 1:
    //   f1=1:          D (0,1) 1/2, C (0,1) 1/2, P (1,0,0,0) 1/4, F1 (1,0) 1/2  -> 1/32
    //   f1=1 & f1=1:   D 1/2, C (1,1) 1/6, P (2,0,0,0) 1/10, F1 (2,0) 1/3     -> 1/360
    CHECK(std::exp(marginal_log_prior(lit(1, true), g, 1.0)) == doctest::Approx(1.0 / 32.0));
    CHECK(std::exp(marginal_log_prior(Formula::parse("(f1=1 & f1=1)"), g, 1.0)) == doctest::Approx(1.0 / 360.0));

    SUBCASE("single-production nonterminals contribute nothing") {
        ProductionCounts c;
        c.counts = {{1}, {1}, {1}};
        CHECK(marginal_log_prior(c, 1.0) == 0.0);
        CHECK(marginal_log_prior(c, 0.3) == 0.0);
    }
    SUBCASE("Monte Carlo over Dirichlet draws") {
        const Formula f = Formula::parse("(f2=0 & f3=1) | (f2=0)");
        Rng rng(17);
        const int n = 100000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double p = std::exp(log_prob_given_probs(f, g, sample_prob_table(g, 1.0, rng)));
            sum += p;
            sq += p * p;
        }
        const double m = sum / n, se = std::sqrt((sq / n - m * m) / n);
        CHECK(std::abs(m - std::exp(marginal_log_prior(f, g, 1.0))) <= 3.0 * se);
    }
}

TEST_CASE("enumerate_formulas") {
    const Grammar g4 = default_grammar(4);
    CHECK(enumerate_formulas(g4, 1).size() == 8);
    CHECK(enumerate_formulas(default_grammar(1), 1).size() == 2);

    const auto all = enumerate_formulas(g4, 3);
    CHECK(all.size() == count_enumerable_formulas(4, 3));
    std::set<std::string> unique;
    double mass = 0.0;
    for (const auto& f : all) {
        unique.insert(f.to_string());
        CHECK(f.literal_count() <= 3);
        CHECK(is_derivable(f, g4));
        mass += std::exp(marginal_log_prior(f, g4, 1.0));
    }
    CHECK(unique.size() == all.size());
    CHECK(mass <= 1.0);
    // single literals alone carry 8 * 1/32
    CHECK(enumerate_hypotheses(g4, 1.0, 1).total_mass == doctest::Approx(0.25));
    CHECK(mass > enumerate_hypotheses(g4, 1.0, 2).total_mass);

    // folding by truth table keeps the mass
    const HypothesisTable h = enumerate_hypotheses(g4, 1.0, 3);
    CHECK(h.total_mass == doctest::Approx(mass).epsilon(1e-12));
    CHECK(h.formula_count == all.size());
    CHECK_THROWS_AS(enumerate_formulas(g4, 6, 1000), ResourceError);
}
