#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "forkrep/json_io.hpp"
#include "support/test_support.hpp"

using namespace forkrep;
using namespace forkrep::testing;

namespace {

json load_fixture(const std::string& name)
{
    std::ifstream in(std::string(FORKREP_FIXTURE_DIR) + "/" + name);
    return json::parse(in);
}

} // namespace

TEST(RelationJson, RoundTrip)
{
    const auto r = closure8();
    const json doc = to_json(r);
    EXPECT_EQ(relation_from_json(doc), r);
    EXPECT_EQ(relation_from_json(json::parse(doc.dump())), r);
    EXPECT_EQ(doc["triples"].size(), 36U);
}

TEST(RelationJson, FixturesMatchInCodeRelations)
{
    EXPECT_EQ(relation_from_json(load_fixture("closure8.json")), closure8());
    for (std::size_t n = 1; n <= 4; ++n)
        EXPECT_EQ(relation_from_json(load_fixture("full_n" + std::to_string(n) + ".json")), full_relation(n));
    EXPECT_TRUE(relation_from_json(load_fixture("empty_n3.json")).empty());
}

TEST(RelationJson, RejectsMalformedDocuments)
{
    EXPECT_THROW(relation_from_json(json::array()), ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {"1"}}}), ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {"1"}}, {"triples", json::array()}, {"extra", 1}}), ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {"1", "1"}}, {"triples", json::array()}}), ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {"1"}}, {"triples", {{"1", "1", "2"}}}}), ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {"1"}}, {"triples", {{"1", "1"}}}}), ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {"1"}}, {"triples", {{"1", "1", "1"}, {"1", "1", "1"}}}}),
                 ParseError);
    EXPECT_THROW(relation_from_json(json{{"ground_set", {1}}, {"triples", json::array()}}), ParseError);
}

TEST(DistributionJson, FixturesMatchInCodeTables)
{
    EXPECT_EQ(to_json(distribution_from_json(load_fixture("fork_not_between.json"))),
              to_json(fork_not_between_table()));
    EXPECT_EQ(to_json(distribution_from_json(load_fixture("between_not_fork.json"))),
              to_json(between_not_fork_table()));
}

TEST(DistributionJson, RoundTripOnRandomFamilies)
{
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto fam = random_family(rng);
        const json doc = to_json(fam);
        const auto back = distribution_from_json(json::parse(doc.dump()));
        EXPECT_EQ(to_json(back), doc);
        EXPECT_EQ(extract_fork_relation(back), extract_fork_relation(fam));
    }
}

TEST(DistributionJson, RejectsMalformedDocuments)
{
    auto base = [] {
        return json{{"atoms", {{{"id", "x"}, {"p", "1/2"}}, {{"id", "y"}, {"p", "1/2"}}}}, {"events", {{"A", {"x"}}}}};
    };
    EXPECT_NO_THROW(distribution_from_json(base()));

    auto bad_sum = base();
    bad_sum["atoms"][1]["p"] = "1/3";
    EXPECT_THROW(distribution_from_json(bad_sum), ParseError);

    auto decimal = base();
    decimal["atoms"][0]["p"] = "0.5";
    EXPECT_THROW(distribution_from_json(decimal), ParseError);

    auto number = base();
    number["atoms"][0]["p"] = 0.5;
    EXPECT_THROW(distribution_from_json(number), ParseError);

    auto unknown_atom = base();
    unknown_atom["events"]["A"] = {"z"};
    EXPECT_THROW(distribution_from_json(unknown_atom), ParseError);

    auto duplicate_atom = base();
    duplicate_atom["events"]["A"] = {"x", "x"};
    EXPECT_THROW(distribution_from_json(duplicate_atom), ParseError);

    auto extra = base();
    extra["atoms"][0]["weight"] = 1;
    EXPECT_THROW(distribution_from_json(extra), ParseError);
}

TEST(ReportJson, AxiomReportShape)
{
    const auto j = to_json(check_all(TernaryRelation(labels(3), {{"1", "2", "3"}})));
    EXPECT_FALSE(j["forkness"].get<bool>());
    EXPECT_FALSE(j["axioms"]["lower"]["holds"].get<bool>());
    EXPECT_EQ(j["axioms"]["lower"]["witness"], json({"1", "2", "3"}));
    EXPECT_TRUE(j["axioms"]["regular"]["evaluated"].get<bool>());

    const auto partial = to_json(check_forkness(TernaryRelation(labels(2), {})));
    EXPECT_FALSE(partial["axioms"]["regular"]["evaluated"].get<bool>());
    EXPECT_FALSE(partial["axioms"]["regular"].contains("holds"));
    EXPECT_TRUE(partial["forkness"].get<bool>());
}

TEST(SystemJson, RoundTrip)
{
    const auto sys = build_system(closure8());
    const auto back = system_from_json(json::parse(to_json(sys).dump()));
    EXPECT_EQ(back.variables, sys.variables);
    EXPECT_EQ(back.equations, sys.equations);
    EXPECT_THROW(system_from_json(json{{"variables", {{"1", "1"}}}, {"equations", json::array()}}), ParseError);
    EXPECT_THROW(
        system_from_json(json{{"variables", {{"1", "2"}}},
                              {"equations", {{{"lhs", {"1", "2"}}, {"addends", {{"1", "3"}, {"2", "3"}}}}}}}),
        ParseError);
}

TEST(CertificateJson, RoundTripAndContents)
{
    const auto sys = build_system(closure8());
    const auto cert = std::get<InfeasibilityCertificate>(solve_positive(sys));
    const json j = to_json(sys, cert);
    EXPECT_EQ(j["combination"], json::parse(R"([{"pair":["1","4"],"coefficient":"2/1"}])"));
    EXPECT_EQ(j["multipliers"][0]["multiplier"], "-1/1");
    const auto back = certificate_from_json(json::parse(j.dump()), sys.equations.size());
    EXPECT_EQ(back.multipliers, cert.multipliers);
    EXPECT_THROW(certificate_from_json(j, 2), ParseError);
}

TEST(SolutionJson, RoundTrip)
{
    const auto sys = build_system(forkness_closure(labels(3), {{"1", "2", "3"}}));
    const auto sol = std::get<PositiveSolution>(solve_positive(sys));
    const auto back = solution_from_json(json::parse(to_json(sol).dump()));
    EXPECT_EQ(back.assignment, sol.assignment);
}

TEST(RepresentJson, DocumentsReparse)
{
    const auto ok = std::get<Representable>(fork_represent(full_relation(2)));
    const json j = to_json(ok);
    EXPECT_TRUE(j["representable"].get<bool>());
    const auto events = events_from_document(json::parse(j.dump()));
    EXPECT_EQ(extract_fork_relation(events), full_relation(2));
    EXPECT_EQ(j["params"]["gamma"], "1/2");
    EXPECT_EQ(j["classes"], json::parse(R"([{"label":"1","members":["1","2"]}])"));

    const auto no = std::get<NotRepresentable>(fork_represent(closure8()));
    const json k = to_json(no);
    EXPECT_FALSE(k["representable"].get<bool>());
    EXPECT_EQ(k["reason"], "quotient_not_solvable");
    EXPECT_EQ(system_from_json(k["system"]).equations.size(), 4U);
}
