#include "idforge/errors.hpp"
#include "idforge/json_io.hpp"
#include "idforge/statement.hpp"
#include "idforge/term_set.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace idforge;

namespace {

StatementParams make_params(const std::string& identity, int kappa, int lambda,
                            std::vector<int> g, std::vector<int> f) {
    StatementParams p;
    p.identity = Identity::parse(identity);
    p.kappa = kappa;
    p.lambda = lambda;
    p.g = std::move(g);
    p.f = std::move(f);
    p.validate();
    return p;
}

// index of x1 in the arity-1 set is 2, of ~x1 is 1, of the constants 0 and 3
constexpr std::uint64_t kEmpty1 = 0, kNeg1 = 1, kVar1 = 2, kFull1 = 3;

// kappa = 3, one level, two colors: pair {i,j} split by its own generator
Witness generator_split_witness() {
    Witness w;
    std::uint32_t next = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            w.entries[{{i, j}, 1}] = {{GeneratorId{next++}}, {kVar1, kNeg1}};
    return w;
}

} // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1}));
    CHECK_THROWS_AS(make_params("3; 0-1,0-2,1-2", 0, 1, {1}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(make_params("3; 0-1,0-2,1-2", 3, 2, {1}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(make_params("3; 0-1,0-2,1-2", 3, 1, {0}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(make_params("3; 0-1,0-2,1-2", 3, 1, {1}, {-1}), std::invalid_argument);
    CHECK_THROWS_AS(make_params("3; 0-1,0-2,1-2", 3, 1, {1}, {5}), ResourceError);
}

TEST_CASE("structural failures are reported, not thrown") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1});
    Witness w = generator_split_witness();

    SUBCASE("missing entry") {
        w.entries.erase({{1, 2}, 1});
        VerificationReport r = verify_witness(p, w);
        CHECK_FALSE(r.structure_ok);
        CHECK_FALSE(r.passed());
    }
    SUBCASE("wrong tuple length") {
        w.entries[{{0, 1}, 1}].gens.push_back(GeneratorId{9});
        CHECK_FALSE(verify_witness(p, w).structure_ok);
    }
    SUBCASE("term index out of range") {
        w.entries[{{0, 1}, 1}].terms[0] = 4;
        CHECK_FALSE(verify_witness(p, w).structure_ok);
    }
    SUBCASE("stray entry") {
        w.entries[{{0, 1}, 2}] = w.entries[{{0, 1}, 1}];
        CHECK_FALSE(verify_witness(p, w).structure_ok);
    }
}

TEST_CASE("generator-split witness passes with realizing union 1/4") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1});
    Witness w = generator_split_witness();
    VerificationReport r = verify_witness(p, w);
    CHECK(r.structure_ok);
    CHECK(r.partitions_ok());
    CHECK(r.c4_ok());
    CHECK(r.passed());
    REQUIRE(r.c5.size() == 1);
    // both constant colorings realize the monochromatic identity; each cell
    // intersection is a 3-generator conjunction of measure 1/8
    CHECK(r.c5[0].value == DyadicMeasure(1, 2));
    CHECK(c5_union_measure(p, w, {0, 1, 2}, 1) == DyadicMeasure(1, 2));
}

TEST_CASE("single-color witnesses fail every realization bound with measure one") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 2, {1, 1}, {1, 1});
    Witness w;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int L = 1; L <= 2; ++L)
                w.entries[{{i, j}, L}] = {{GeneratorId{0}}, {kFull1}};
    VerificationReport r = verify_witness(p, w);
    CHECK(r.structure_ok);
    CHECK(r.partitions_ok());
    CHECK(r.c4_ok());
    CHECK_FALSE(r.c5_ok());
    CHECK_FALSE(r.passed());
    REQUIRE(r.c5.size() == 2);
    for (const C5Instance& inst : r.c5) {
        CHECK(inst.value.is_one());
        CHECK_FALSE(inst.pass); // 1 < 1/L fails even at L = 1
    }
    CHECK(r.first_failure().find("realization") != std::string::npos);
}

TEST_CASE("too few vertices make the realization bound vacuous") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 2, 1, {1}, {0});
    Witness w;
    w.entries[{{0, 1}, 1}] = {{}, {1}}; // arity-0 constant true
    VerificationReport r = verify_witness(p, w);
    CHECK(r.passed());
    CHECK(r.c5.empty());
}

TEST_CASE("identical partitions across levels give agreement measure one") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 2, 2, {2, 2}, {1, 1});
    Witness w;
    for (int L = 1; L <= 2; ++L)
        w.entries[{{0, 1}, L}] = {{GeneratorId{0}}, {kVar1, kNeg1}};
    VerificationReport r = verify_witness(p, w);
    CHECK(r.passed());
    REQUIRE(r.c4.size() == 3); // (1,1), (1,2), (2,2)
    for (const C4Instance& inst : r.c4) {
        CHECK(inst.value.is_one());
        CHECK(inst.pass);
    }
}

TEST_CASE("agreement and realization quantities never exceed one") {
    StatementParams p = make_params("3; 0-1,0-2|1-2", 3, 2, {2, 2}, {1, 1});
    Witness w;
    std::uint32_t next = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            w.entries[{{i, j}, 1}] = {{GeneratorId{next}}, {kVar1, kNeg1}};
            w.entries[{{i, j}, 2}] = {{GeneratorId{next + 1}}, {kNeg1, kVar1}};
            next += 2;
        }
    VerificationReport r = verify_witness(p, w);
    for (const C4Instance& inst : r.c4)
        CHECK(inst.value <= DyadicMeasure::one());
    for (const C5Instance& inst : r.c5)
        CHECK(inst.value <= DyadicMeasure::one());
}

TEST_CASE("empty realizing table gives measure zero") {
    std::vector<std::vector<AlgebraElement>> cells(3);
    for (auto& pairCells : cells)
        pairCells = {AlgebraElement::one(), AlgebraElement::zero()};
    std::vector<char> nobody(8, 0); // 2^3 colorings of three pairs, none flagged
    CHECK(realizing_union_measure(cells, nobody, 2).is_zero());
}

TEST_CASE("search respects its resource guards") {
    CHECK_THROWS_AS(
        search_witness(make_params("3; 0-1,0-2,1-2", 4, 1, {1}, {1}), 1),
        ResourceError);
    CHECK_THROWS_AS(
        search_witness(make_params("3; 0-1,0-2,1-2", 3, 1, {3}, {1}), 1),
        ResourceError);
    CHECK_THROWS_AS(
        search_witness(make_params("3; 0-1,0-2,1-2", 3, 1, {1}, {3}), 1),
        ResourceError);
    CHECK_THROWS_AS(
        search_witness(make_params("3; 0-1,0-2,1-2", 3, 1, {1}, {1}), 5),
        ResourceError);
}

TEST_CASE("search finds witnesses when the realization bound is vacuous") {
    // kappa = r - 1: no r-subsets exist
    StatementParams p = make_params("3; 0-1,0-2,1-2", 2, 1, {1}, {1});
    auto w = search_witness(p, 1);
    REQUIRE(w.has_value());
    CHECK(verify_witness(p, *w).passed());
}

TEST_CASE("search agrees with the analytic single-color argument") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 2, {1, 1}, {1, 1});
    CHECK_FALSE(search_witness(p, 2).has_value());
}

TEST_CASE("search round trip on a passing instance") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1});
    auto w = search_witness(p, 3);
    REQUIRE(w.has_value());
    CHECK(verify_witness(p, *w).passed());
}

TEST_CASE("dropping levels preserves passing witnesses") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 2, 3, {1, 1, 1}, {1, 1, 1});
    auto w = search_witness(p, 2);
    REQUIRE(w.has_value());
    REQUIRE(verify_witness(p, *w).passed());

    for (int lambda = 2; lambda >= 1; --lambda) {
        StatementParams q = p;
        q.lambda = lambda;
        q.g.resize(static_cast<std::size_t>(lambda));
        q.f.resize(static_cast<std::size_t>(lambda));
        Witness trimmed;
        for (const auto& [key, entry] : w->entries)
            if (key.second <= lambda)
                trimmed.entries[key] = entry;
        CHECK(verify_witness(q, trimmed).passed());
    }
}

TEST_CASE("parameter JSON round trip") {
    StatementParams p = make_params("3; 0-1,0-2|1-2", 3, 2, {2, 1}, {1, 0});
    Json j = params_to_json(p);
    CHECK(j["schemaVersion"] == kSchemaVersion);
    StatementParams q = params_from_json(j);
    CHECK(params_to_json(q) == j);
    CHECK(q.identity == p.identity);
    CHECK(q.g == p.g);
    CHECK(q.f == p.f);
}

TEST_CASE("witness JSON round trip") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1});
    Witness w = generator_split_witness();
    Json j = witness_to_json(p, w);
    auto [q, v] = witness_from_json(j);
    CHECK(witness_to_json(q, v) == j);
    CHECK(verify_witness(q, v).passed());
}

TEST_CASE("malformed documents raise parse errors") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1});
    Json good = witness_to_json(p, generator_split_witness());

    Json missing = good;
    missing.erase("kappa");
    CHECK_THROWS_AS(witness_from_json(missing), ParseError);

    Json badIdentity = good;
    badIdentity["identity"] = "nope";
    CHECK_THROWS_AS(witness_from_json(badIdentity), ParseError);

    Json wrongType = good;
    wrongType["g"] = "two";
    CHECK_THROWS_AS(witness_from_json(wrongType), ParseError);

    Json duplicate = good;
    duplicate["entries"].push_back(duplicate["entries"][0]);
    CHECK_THROWS_AS(witness_from_json(duplicate), ParseError);

    CHECK_THROWS_AS(params_from_json(Json::array()), ParseError);
}

TEST_CASE("report JSON carries the exact quantities") {
    StatementParams p = make_params("3; 0-1,0-2,1-2", 3, 1, {2}, {1});
    VerificationReport r = verify_witness(p, generator_split_witness());
    Json j = report_to_json(r);
    CHECK(j["passed"] == true);
    CHECK(j["c5"][0]["value"]["exact"] == "1/2^2");
    CHECK(j["c5"][0]["bound"] == "1/1");
    CHECK(j["c4"].size() == 3);
}
