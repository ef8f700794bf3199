#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "ontoir/index.hpp"
#include "ontoir/index_io.hpp"
#include "ontoir/journey.hpp"
#include "ontoir/ntriples.hpp"
#include "ontoir/tokenizer.hpp"
#include "support/generators.hpp"
#include "support/paths.hpp"

using namespace ontoir;
using testing_paths::TempDir;
using Terms = std::vector<std::string>;

namespace {

const std::string onto = "http://www.owlontologies.com/Ontology1256801179.owl#";

Index royal_index()
{
    return index_basic(build_graph(
        parse_ntriples("<" + onto + "POINT_ARRET_ROYAL> <" + onto + "station_name> \"PORT-ROYAL-Paris\" .")));
}

CompositeDoc service_doc()
{
    return {onto + "SERVICE_JOURNEY_PATTERN",
            {{onto + "POINT_ARRET_observatoire",
              "POINT_ARRET_observatoire",
              {{"station_name", "OBSERVATOIRE_ASSAS (Paris)"}, {"is_encircled", "LA_BANQUE_1"}}},
             {onto + "LA_BANQUE_1", "LA_BANQUE_1", {{"nom_element_geographique", "BANQUE-CENTRALE"}}}},
            2};
}

std::vector<DocId> ids(std::span<const DocId> s) { return {s.begin(), s.end()}; }

} // namespace

// Tokenizer.

TEST(Tokenize, Examples)
{
    EXPECT_EQ(tokenize("PORT-ROYAL-Paris"), (Terms{"port", "royal", "paris"}));
    EXPECT_EQ(tokenize("Hôtel Istria Montparnasse"), (Terms{"hotel", "istria", "montparnasse"}));
    EXPECT_EQ(tokenize(""), Terms{});
    EXPECT_EQ(tokenize("LA_BANQUE_1"), (Terms{"la", "banque", "1"}));
    EXPECT_EQ(tokenize("AEROPORT_CDG"), (Terms{"aeroport", "cdg"}));
    EXPECT_EQ(tokenize("  --__  "), Terms{});
}

TEST(Tokenize, KeepsOrderAndDuplicates)
{
    EXPECT_EQ(tokenize("a b a"), (Terms{"a", "b", "a"}));
}

TEST(Tokenize, FoldsAccentsAndLigatures)
{
    EXPECT_EQ(tokenize("ÉLÉPHANT Ærø Straße œuvre Łódź ĳssel"),
              (Terms{"elephant", "aero", "strasse", "oeuvre", "lodz", "ijssel"}));
    // Decomposed e + combining acute folds like the precomposed form.
    EXPECT_EQ(tokenize("he\xCC\x81tel"), (Terms{"hetel"}));
    EXPECT_EQ(tokenize("Ｈｏｔｅｌ１"), (Terms{"hotel1"}));
}

TEST(Tokenize, NonLatinScriptsStayWords)
{
    EXPECT_EQ(tokenize("ΑΘΗΝΑ Москва"), (Terms{"αθηνα", "москва"}));
    EXPECT_EQ(tokenize("東京—駅"), (Terms{"東京", "駅"}));
}

TEST(Tokenize, SeparatorsAndInvalidBytes)
{
    EXPECT_EQ(tokenize("a×b÷c"), (Terms{"a", "b", "c"}));
    EXPECT_EQ(tokenize("x\xFFy"), (Terms{"x", "y"}));
    EXPECT_EQ(tokenize("one’two"), (Terms{"one", "two"}));
}

TEST(Tokenize, IdempotentOnJoinedOutput)
{
    gen::Random rng(31);
    const std::vector<std::string> pieces{"Hôtel", "PORT-ROYAL", "ÆØ", "ß", "x_1", "Ｆｕｌｌ", "Москва", "é", "—", "(Paris)"};
    for (int round = 0; round < 500; ++round) {
        std::string text;
        for (std::size_t i = 0, n = rng.below(8); i < n; ++i) {
            text += rng.pick(pieces) + (rng.chance(0.5) ? " " : "");
        }
        auto once = tokenize(text);
        std::string joined;
        for (const auto& t : once) {
            joined += t + " ";
        }
        EXPECT_EQ(tokenize(joined), once) << text;
    }
}

// Index construction.

TEST(IndexBasic, StationNameStatement)
{
    auto index = royal_index();
    EXPECT_EQ(index.kind(), IndexKind::Basic);
    ASSERT_EQ(index.size(), 1u);
    EXPECT_EQ(index.doc(0).fields, (std::vector<FieldValue>{{Field::Dataset, onto + "POINT_ARRET_ROYAL"},
                                                            {Field::Entity, "POINT_ARRET_ROYAL"},
                                                            {Field::Attribute, "station_name"},
                                                            {Field::Value, "PORT-ROYAL-Paris"}}));
    EXPECT_EQ(ids(postings(index, Field::Value, "royal")), (std::vector<DocId>{0}));
    EXPECT_EQ(ids(postings(index, Field::Entity, "point")), (std::vector<DocId>{0}));
    EXPECT_TRUE(postings(index, Field::Value, "zzz").empty());
    EXPECT_TRUE(postings(index, Field::Attribute, "royal").empty());
}

TEST(IndexBasic, EmptyGraph)
{
    auto index = index_basic(Graph{});
    EXPECT_EQ(index.size(), 0u);
    for (auto f : all_fields) {
        EXPECT_TRUE(index.dictionary(f).empty());
    }
}

TEST(IndexBasic, TwoEdgesShareDataset)
{
    auto index = index_basic(build_graph(parse_ntriples("<http://a#s> <http://a#q> \"two\" .\n"
                                                        "<http://a#s> <http://a#p> <http://a#o> .\n")));
    ASSERT_EQ(index.size(), 2u);
    EXPECT_EQ(index.doc(0).fields[0], index.doc(1).fields[0]);
    // Ordered by attribute within the dataset.
    EXPECT_EQ(index.doc(0).fields[2].text, "p");
    EXPECT_EQ(index.doc(0).fields[3].text, "o");
    EXPECT_EQ(index.doc(1).fields[2].text, "q");
}

TEST(IndexBasic, DocCountEqualsEdgeCount)
{
    gen::Random rng(32);
    for (int round = 0; round < 50; ++round) {
        auto g = build_graph(gen::triples(rng, 60));
        EXPECT_EQ(index_basic(g).size(), g.edge_count());
    }
}

TEST(IndexRules, FlattensBlocksInOrder)
{
    auto index = index_rules(std::vector<CompositeDoc>{service_doc()});
    ASSERT_EQ(index.size(), 1u);
    EXPECT_EQ(index.kind(), IndexKind::Rules);
    EXPECT_EQ(index.doc(0).fields,
              (std::vector<FieldValue>{{Field::Dataset, onto + "SERVICE_JOURNEY_PATTERN"},
                                       {Field::Dataset, onto + "POINT_ARRET_observatoire"},
                                       {Field::Entity, "POINT_ARRET_observatoire"},
                                       {Field::Attribute, "station_name"},
                                       {Field::Value, "OBSERVATOIRE_ASSAS (Paris)"},
                                       {Field::Attribute, "is_encircled"},
                                       {Field::Value, "LA_BANQUE_1"},
                                       {Field::Dataset, onto + "LA_BANQUE_1"},
                                       {Field::Entity, "LA_BANQUE_1"},
                                       {Field::Attribute, "nom_element_geographique"},
                                       {Field::Value, "BANQUE-CENTRALE"}}));
    std::set<std::string> value_terms;
    for (const auto& [term, list] : index.dictionary(Field::Value)) {
        value_terms.insert(term);
    }
    EXPECT_EQ(value_terms, (std::set<std::string>{"observatoire", "assas", "paris", "la", "banque", "1", "centrale"}));
    EXPECT_EQ(ids(postings(index, Field::Value, "banque")), (std::vector<DocId>{0}));
}

TEST(IndexRules, EmptyListAndSharedBlocks)
{
    EXPECT_EQ(index_rules(std::vector<CompositeDoc>{}).size(), 0u);
    auto a = service_doc();
    auto b = service_doc();
    b.blocks.erase(b.blocks.begin());
    b.pattern_dataset = onto + "OTHER";
    auto index = index_rules(std::vector<CompositeDoc>{a, b});
    EXPECT_EQ(ids(postings(index, Field::Value, "centrale")), (std::vector<DocId>{0, 1}));
    EXPECT_EQ(ids(postings(index, Field::Value, "assas")), (std::vector<DocId>{0}));
    EXPECT_EQ(ids(postings(index, Field::Dataset, "other")), (std::vector<DocId>{1}));
}

TEST(IndexProperties, PostingsEqualBruteForceScan)
{
    gen::Random rng(33);
    for (int round = 0; round < 30; ++round) {
        auto docs = round % 2 ? gen::composite_docs(rng, 60) : gen::statement_docs(rng, 60);
        auto index = gen::build(IndexKind::Basic, docs);
        std::map<std::pair<Field, std::string>, std::vector<DocId>> expected;
        for (DocId id = 0; id < docs.size(); ++id) {
            for (const auto& fv : docs[id]) {
                for (const auto& t : tokenize(fv.text)) {
                    auto& list = expected[{fv.field, t}];
                    if (list.empty() || list.back() != id) {
                        list.push_back(id);
                    }
                }
            }
        }
        std::size_t terms = 0;
        for (auto f : all_fields) {
            for (const auto& [term, list] : index.dictionary(f)) {
                ++terms;
                const auto& want = expected[{f, term}];
                EXPECT_EQ(list, want) << term;
            }
        }
        EXPECT_EQ(terms, expected.size());
    }
}

// Persistence.

TEST(IndexIo, RoundTripAndDeterministicBytes)
{
    TempDir a, b;
    auto index = royal_index();
    write_index(index, a.path());
    write_index(read_index(a.path()), b.path());
    EXPECT_EQ(read_index(a.path()), index);
    for (const char* name : {"manifest.json", "docs.jsonl", "postings.tsv"}) {
        EXPECT_EQ(testing_paths::slurp(a / name), testing_paths::slurp(b / name)) << name;
    }
    EXPECT_EQ(testing_paths::slurp(a / "manifest.json"),
              "{\n  \"format_version\": 1,\n  \"kind\": \"BASIC\",\n  \"doc_count\": 1\n}\n");
    EXPECT_EQ(testing_paths::slurp(a / "postings.tsv").substr(0, 24), "Attribute\tname\t0\nAttribu");
}

TEST(IndexIo, RandomRoundTrips)
{
    gen::Random rng(34);
    for (int round = 0; round < 20; ++round) {
        TempDir dir;
        auto docs = gen::composite_docs(rng, 30);
        docs.push_back({{Field::Value, "quote \" tab \t newline \n é"}});
        auto index = gen::build(IndexKind::Rules, docs);
        write_index(index, dir.path());
        EXPECT_EQ(read_index(dir.path()), index);
    }
}

TEST(IndexIo, EmptyDirectoryIsMissingManifest)
{
    TempDir dir;
    try {
        read_index(dir.path());
        FAIL() << "expected format_error";
    } catch (const format_error& e) {
        EXPECT_EQ(e.file(), "manifest.json");
    }
}

TEST(IndexIo, CorruptFilesNameTheFile)
{
    auto expect_error = [](const std::string& file, const std::string& content, const std::string& blamed) {
        TempDir dir;
        write_index(royal_index(), dir.path());
        std::ofstream(dir / file, std::ios::binary | std::ios::trunc) << content;
        try {
            read_index(dir.path());
            ADD_FAILURE() << file << " accepted";
        } catch (const format_error& e) {
            EXPECT_EQ(e.file(), blamed) << e.what();
        }
    };
    expect_error("manifest.json", "{not json", "manifest.json");
    expect_error("manifest.json", R"({"format_version":1,"kind":"OTHER","doc_count":1})", "manifest.json");
    expect_error("docs.jsonl", "{\"id\":3,\"fields\":[]}\n", "docs.jsonl");
    expect_error("docs.jsonl", "", "docs.jsonl");
    expect_error("postings.tsv", "Value\troyal\t7\n", "postings.tsv");
    expect_error("postings.tsv", "Value\troyal\n", "postings.tsv");
    expect_error("postings.tsv", "Value\tb\t0\nValue\ta\t0\n", "postings.tsv");
}

TEST(IndexIo, VersionMismatch)
{
    TempDir dir;
    write_index(royal_index(), dir.path());
    std::ofstream(dir / "manifest.json", std::ios::trunc) << R"({"format_version":2,"kind":"BASIC","doc_count":1})";
    EXPECT_THROW(read_index(dir.path()), version_error);
}
