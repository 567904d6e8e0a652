#include "idforge/algebra.hpp"
#include "idforge/errors.hpp"
#include "idforge/term.hpp"
#include "idforge/term_set.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace idforge;

namespace {
GeneratorId gen(std::uint32_t v) { return GeneratorId{v}; }
std::vector<GeneratorId> gens(std::initializer_list<std::uint32_t> vs) {
    std::vector<GeneratorId> out;
    for (auto v : vs)
        out.push_back(gen(v));
    return out;
}
} // namespace

TEST_CASE("dyadic arithmetic is exact and reduced") {
    DyadicMeasure half{1, 1};
    DyadicMeasure quarter{1, 2};
    CHECK(DyadicMeasure(2, 2) == half); // reduced on construction
    CHECK(half.str() == "1/2^1");
    CHECK((half + quarter).str() == "3/2^2");
    CHECK((half - quarter) == quarter);
    CHECK(DyadicMeasure::one_minus_half_pow(3).str() == "7/2^3");
    CHECK(quarter < half);
    CHECK(DyadicMeasure::zero() < quarter);
    CHECK(DyadicMeasure::one() > half);

    // cross-multiplied comparisons against non-dyadic rationals
    CHECK(quarter.less_than(1, 3));        // 1/4 < 1/3
    CHECK_FALSE(DyadicMeasure(3, 3).less_than(1, 3)); // 3/8 >= 1/3
    CHECK(DyadicMeasure(3, 3).at_least(1, 3));
    CHECK_FALSE(half.less_than(1, 2));
    CHECK(half.at_least(1, 2));
}

TEST_CASE("term parsing and printing") {
    Term t = parse_term("x1 & ~x2");
    CHECK(t.kind() == Term::Kind::And);
    CHECK(t.arity() == 2);
    CHECK(parse_term(t.str()).str() == t.str());

    CHECK(parse_term("1").kind() == Term::Kind::Const1);
    CHECK(parse_term("((x3))").arity() == 3);
    CHECK(parse_term("~x1 | x2 & x1").str() == "~x1 | x2 & x1"); // & binds tighter

    CHECK_THROWS_AS(parse_term("x1 & & x2"), ParseError);
    CHECK_THROWS_AS(parse_term(""), ParseError);
    CHECK_THROWS_AS(parse_term("x0"), ParseError);
    CHECK_THROWS_AS(parse_term("x1 |"), ParseError);
}

TEST_CASE("eval basics") {
    AlgebraElement e = eval(parse_term("x1"), gens({0}));
    CHECK(e.support_size() == 1);
    CHECK(e.atom(1));
    CHECK_FALSE(e.atom(0));

    // repeated generators identify their variables
    CHECK(eval(parse_term("x1 & x2"), gens({0, 0})) == eval(parse_term("x1"), gens({0})));
    // longer tuples only pad the support
    CHECK(eval(parse_term("x1"), gens({0, 5})) == eval(parse_term("x1"), gens({0})));
    CHECK_THROWS_AS(eval(parse_term("x1 & x2"), gens({0})), std::invalid_argument);
}

TEST_CASE("measures match the product-measure rule") {
    CHECK(measure(eval(parse_term("x1"), gens({0}))) == DyadicMeasure(1, 1));
    CHECK(measure(eval(parse_term("x1 & x2"), gens({0, 1}))) == DyadicMeasure(1, 2));
    CHECK(measure(eval(parse_term("x1 | ~x1"), gens({0}))).is_one());
    for (unsigned k = 1; k <= 4; ++k) {
        Term t = parse_term("x1");
        for (unsigned v = 2; v <= k; ++v)
            t = Term::conj(t, Term::var(static_cast<int>(v)));
        std::vector<GeneratorId> tuple;
        for (unsigned v = 0; v < k; ++v)
            tuple.push_back(gen(v));
        CHECK(measure(eval(t, tuple)) == DyadicMeasure::half_pow(k));
    }
}

TEST_CASE("measure agrees with the truth-table oracle on random terms") {
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 500; ++trial) {
        int k = 1 + static_cast<int>(rng() % 4);
        Term t = oracles::random_term(rng, k, 4);
        std::vector<GeneratorId> tuple;
        for (int v = 0; v < k; ++v)
            tuple.push_back(gen(static_cast<std::uint32_t>(v)));
        DyadicMeasure expected{BigNat(oracles::satisfying_count(t, k)),
                               static_cast<unsigned>(k)};
        CHECK(measure(eval(t, tuple)) == expected);
    }
}

TEST_CASE("boolean structure of elements") {
    AlgebraElement a = eval(parse_term("x1"), gens({0}));
    AlgebraElement b = eval(parse_term("x1"), gens({1}));
    CHECK(~~a == a);
    CHECK((a & ~a).is_empty());
    CHECK((a | ~a).is_full());
    CHECK((a ^ a).is_empty());
    CHECK((a.minus(b)) == (a & ~b));
    CHECK((a & b).subset_of(a));
    CHECK_FALSE(a.subset_of(a & b));
    CHECK(AlgebraElement::one().is_full());
    CHECK(AlgebraElement::zero().is_empty());
    CHECK(AlgebraElement::generator(gen(3)) == eval(parse_term("x1"), gens({3})));
}

TEST_CASE("support extension and normalization") {
    AlgebraElement a = eval(parse_term("x1 & x2"), gens({0, 2}));
    AlgebraElement wide = a.with_support(gens({1, 7}));
    CHECK(wide.support_size() == 4);
    CHECK(wide == a);
    CHECK(measure(wide) == measure(a));
    CHECK(wide.normalized().support_size() == 2);
    // an element that ignores a listed generator drops it when normalized
    AlgebraElement padded = eval(parse_term("x1"), gens({0, 1}));
    CHECK(padded.normalized() == eval(parse_term("x1"), gens({0})));
}

TEST_CASE("additivity on random disjoint pairs") {
    std::mt19937 rng(31337);
    std::vector<GeneratorId> tuple = gens({0, 1, 2, 3});
    for (int trial = 0; trial < 500; ++trial) {
        Term t1 = oracles::random_term(rng, 4, 3);
        Term t2 = oracles::random_term(rng, 4, 3);
        AlgebraElement e1 = eval(t1, tuple);
        AlgebraElement e2 = eval(t2, tuple).minus(e1); // force disjointness
        CHECK(measure(e1 | e2) == measure(e1) + measure(e2));
    }
}

TEST_CASE("support cap is enforced") {
    std::vector<GeneratorId> many;
    for (std::uint32_t v = 0; v < 29; ++v)
        many.push_back(gen(v));
    Term t = parse_term("x1");
    for (int v = 2; v <= 29; ++v)
        t = Term::disj(t, Term::var(v));
    CHECK_THROWS_AS(eval(t, many), ResourceError);
}

TEST_CASE("partition sequences") {
    CHECK(is_partition_sequence({parse_term("x1"), parse_term("~x1")},
                                {gens({0}), gens({0})}));
    CHECK_FALSE(is_partition_sequence({parse_term("x1"), parse_term("x1")},
                                      {gens({0}), gens({0})}));
    // atoms 1 + 1 + 2 over two generators
    CHECK(is_partition_sequence(
        {parse_term("x1 & x2"), parse_term("x1 & ~x2"), parse_term("~x1")},
        {gens({0, 1}), gens({0, 1}), gens({0})}));
    // missing a cell
    CHECK_FALSE(is_partition_sequence({parse_term("x1 & x2"), parse_term("~x1")},
                                      {gens({0, 1}), gens({0})}));
    CHECK(is_partition_sequence({AlgebraElement::one()}));
    CHECK_FALSE(is_partition_sequence({}));
}

TEST_CASE("complete term sets") {
    CHECK(CompleteTermSet(0).size() == 2);
    CHECK(CompleteTermSet(1).size() == 4);
    CHECK(CompleteTermSet(2).size() == 16);
    CHECK_THROWS_AS(CompleteTermSet(5), ResourceError);

    for (int arity = 0; arity <= 3; ++arity) {
        CompleteTermSet set(arity);
        std::vector<GeneratorId> tuple;
        for (int v = 0; v < arity; ++v)
            tuple.push_back(gen(static_cast<std::uint32_t>(v)));
        std::vector<AlgebraElement> seen;
        for (std::uint64_t i = 0; i < set.size(); ++i) {
            Term t = set.term(i);
            CHECK(set.index_of(t) == i);
            AlgebraElement e =
                arity == 0 ? eval(t, {}) : eval(t, tuple).with_support(tuple);
            for (const AlgebraElement& prev : seen)
                CHECK(prev != e);
            for (std::uint32_t a = 0; a < (std::uint32_t{1} << arity); ++a)
                CHECK(set.eval_index(i, a) == e.atom(a));
            seen.push_back(e);
        }
    }
}

TEST_CASE("approximation quality") {
    AlgebraElement target = eval(parse_term("x1 & x2"), gens({0, 1}));

    Approximation self = approximate(target, 2);
    CHECK(self.delta.is_zero());
    CHECK(eval(self.term, self.gens).with_support(target.support()) == target);

    CHECK(approximate(target, 1).delta == DyadicMeasure(1, 2));
    CHECK(approximate(target, 0).delta == DyadicMeasure(1, 2));

    // budget 0 always returns the better constant
    AlgebraElement mostly = ~eval(parse_term("x1 & x2 & x3"), gens({0, 1, 2}));
    Approximation c = approximate(mostly, 0);
    CHECK(c.delta == DyadicMeasure(1, 3));
    CHECK(c.term.kind() == Term::Kind::Const1);
}

TEST_CASE("approximation is optimal against the brute-force oracle") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 3 + static_cast<int>(rng() % 2);
        std::vector<GeneratorId> tuple;
        for (int v = 0; v < k; ++v)
            tuple.push_back(gen(static_cast<std::uint32_t>(v)));
        AlgebraElement target =
            eval(oracles::random_term(rng, k, 4), tuple).with_support(tuple);
        for (int budget = 0; budget <= 2; ++budget) {
            DyadicMeasure expected{BigNat(oracles::best_approx_diff(target, budget)),
                                   static_cast<unsigned>(target.support_size())};
            CHECK(approximate(target, budget).delta == expected);
        }
    }
}

TEST_CASE("disjointify peels overlaps into a partition") {
    auto out = disjointify({{parse_term("x1"), gens({0})}});
    REQUIRE(out.size() == 2);
    CHECK(eval(out[0].first, out[0].second) == eval(parse_term("x1"), gens({0})));
    CHECK(eval(out[1].first, out[1].second) == eval(parse_term("~x1"), gens({0})));

    // sigma = <y0, y0|y1> -> cells with 2, 1, 1 atoms over two generators
    auto out2 = disjointify(
        {{parse_term("x1"), gens({0})}, {parse_term("x1 | x2"), gens({0, 1})}});
    REQUIRE(out2.size() == 3);
    std::vector<AlgebraElement> cells;
    for (const auto& [t, g] : out2)
        cells.push_back(eval(t, g));
    CHECK(is_partition_sequence(cells));
    CHECK(cells[0].normalized().atom_count() == 1); // y0 on one generator
    CHECK(cells[1] == eval(parse_term("x2 & ~x1"), gens({0, 1})));
    CHECK(cells[2] == eval(parse_term("~x1 & ~x2"), gens({0, 1})));
}

TEST_CASE("disjointify properties on random sequences") {
    std::mt19937 rng(777);
    std::vector<GeneratorId> pool = gens({0, 1, 2, 3});
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<Term, std::vector<GeneratorId>>> sigma;
        int entries = 1 + static_cast<int>(rng() % 3);
        for (int e = 0; e < entries; ++e) {
            int arity = 1 + static_cast<int>(rng() % 3);
            std::vector<GeneratorId> tuple;
            for (int v = 0; v < arity; ++v)
                tuple.push_back(pool[rng() % pool.size()]);
            sigma.emplace_back(oracles::random_term(rng, arity, 3), tuple);
        }
        auto rho = disjointify(sigma);
        REQUIRE(rho.size() == sigma.size() + 1);
        std::vector<AlgebraElement> cells;
        for (const auto& [t, g] : rho)
            cells.push_back(eval(t, g));
        CHECK(is_partition_sequence(cells));
        for (std::size_t m = 0; m < sigma.size(); ++m)
            CHECK(cells[m].subset_of(eval(sigma[m].first, sigma[m].second)
                                         .with_support(cells[m].support())));
    }
}

TEST_CASE("element serialization") {
    AlgebraElement e = eval(parse_term("x1 & x2"), gens({3, 5}));
    CHECK(e.str() == "support=[3,5]; atoms=0x8");
    CHECK(AlgebraElement::zero().str() == "support=[]; atoms=0x0");
}
