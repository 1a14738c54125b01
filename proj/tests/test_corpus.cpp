#include "doctest.h"
#include "support.hpp"

#include "topicret/corpus.hpp"
#include "topicret/error.hpp"
#include "topicret/utf8.hpp"

#include <string>
#include <vector>

using namespace topicret;
using topicret::testing::Rng;
using topicret::testing::ScratchDir;
using topicret::testing::write_text;

namespace {

std::string random_text(Rng& rng, std::size_t scalars) {
    static const std::vector<std::string> alphabet = {"a", "b", " ", ".", "ə", "ğ", "ş", "ı", "ç", "ö",
                                                      "ü", "Ə", "\n", "z", "1"};
    std::string s;
    for (std::size_t i = 0; i < scalars; ++i) {
        s += alphabet[rng.index(alphabet.size())];
    }
    return s;
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("load_corpus reads documents in file order") {
    ScratchDir dir("corpus");
    write_text(dir / "c.jsonl",
               "{\"id\":\"law1\",\"topic\":\"Tax Code\",\"text\":\"one\"}\n"
               "{\"id\":\"law2\",\"topic\":\"Labor Code\",\"text\":\"two\"}\n");
    auto docs = load_corpus(dir / "c.jsonl");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "law1");
    CHECK(docs[0].topic == "Tax Code");
    CHECK(docs[1].text == "two");
}

TEST_CASE("empty corpus file gives no documents") {
    ScratchDir dir("corpus");
    write_text(dir / "c.jsonl", "");
    CHECK(load_corpus(dir / "c.jsonl").empty());
}

TEST_CASE("duplicate id is reported with its line") {
    ScratchDir dir("corpus");
    write_text(dir / "c.jsonl",
               "{\"id\":\"law1\",\"topic\":\"A\",\"text\":\"x\"}\n"
               "{\"id\":\"law2\",\"topic\":\"A\",\"text\":\"y\"}\n"
               "{\"id\":\"law1\",\"topic\":\"B\",\"text\":\"z\"}\n");
    try {
        load_corpus(dir / "c.jsonl");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("law1") != std::string::npos);
        CHECK(msg.find(":3") != std::string::npos);
    }
}

TEST_CASE("malformed lines are rejected") {
    ScratchDir dir("corpus");
    write_text(dir / "a.jsonl", "{\"id\":\"x\",\"topic\":\"A\"}\n");
    CHECK_THROWS_AS(load_corpus(dir / "a.jsonl"), DataError);
    write_text(dir / "b.jsonl", "not json\n");
    CHECK_THROWS_AS(load_corpus(dir / "b.jsonl"), DataError);
    write_text(dir / "c.jsonl", "{\"id\":\"x\",\"topic\":\"\",\"text\":\"t\"}\n");
    CHECK_THROWS_AS(load_corpus(dir / "c.jsonl"), DataError);
    CHECK_THROWS_AS(load_corpus(dir / "missing.jsonl"), DataError);
}

TEST_CASE("fixed-size chunking examples") {
    Document doc{"d", "T", std::string(5000, 'x')};
    auto chunks = chunk_document(doc, {2000});
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].text.size() == 2000);
    CHECK(chunks[1].text.size() == 2000);
    CHECK(chunks[2].text.size() == 1000);
    CHECK(chunks[2].id == "d#2");
    CHECK(chunks[2].ordinal == 2);
    CHECK(chunks[2].topic == "T");
    CHECK(chunks[2].doc_id == "d");

    doc.text = std::string(2000, 'x');
    CHECK(chunk_document(doc, {2000}).size() == 1);
    doc.text.clear();
    CHECK(chunk_document(doc, {2000}).empty());
    CHECK_THROWS_AS(chunk_document(doc, {0}), std::invalid_argument);
}

TEST_CASE("chunk sizes count characters, not bytes") {
    Document doc{"az", "T", "əğş"};
    auto chunks = chunk_document(doc, {2});
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].text == "əğ");
    CHECK(chunks[1].text == "ş");
}

TEST_CASE("chunking is lossless and sized by ceil(len/size)") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = rng.index(5000);
        Document doc{"doc" + std::to_string(trial), "T", random_text(rng, len)};
        for (std::size_t size : {std::size_t{1}, std::size_t{7}, std::size_t{2000}}) {
            auto chunks = chunk_document(doc, {size});
            CHECK(chunks.size() == (len + size - 1) / size);
            std::string joined;
            for (std::size_t i = 0; i < chunks.size(); ++i) {
                CHECK(chunks[i].ordinal == i);
                if (i + 1 < chunks.size()) {
                    CHECK(utf8::length(chunks[i].text) == size);
                }
                joined += chunks[i].text;
            }
            CHECK(joined == doc.text);
        }
    }
}

TEST_CASE("corpus_stats counts chunks per topic") {
    std::vector<Chunk> chunks;
    for (int i = 0; i < 3; ++i) {
        chunks.push_back({"a" + std::to_string(i), "a", "A", "t", 0});
    }
    for (int i = 0; i < 5; ++i) {
        chunks.push_back({"b" + std::to_string(i), "b", "B", "t", 0});
    }
    auto stats = corpus_stats(chunks);
    CHECK(stats.size() == 2);
    CHECK(stats.at("A") == 3);
    CHECK(stats.at("B") == 5);
    CHECK(corpus_stats(std::vector<Chunk>{}).empty());
}

TEST_CASE("chunk_corpus keeps document order") {
    std::vector<Document> docs;
    for (int i = 0; i < 50; ++i) {
        docs.push_back({"d" + std::to_string(i), i % 2 ? "odd" : "even", std::string(10 + i, 'q')});
    }
    auto chunks = chunk_corpus(docs, {7});
    std::vector<Chunk> expected;
    for (const auto& d : docs) {
        auto part = chunk_document(d, {7});
        expected.insert(expected.end(), part.begin(), part.end());
    }
    CHECK(chunks == expected);
}

TEST_CASE("chunks file round trip") {
    ScratchDir dir("corpus");
    std::vector<Document> docs = {{"x", "Tax Code", "vergi ödəyicisi və bəyannamə"},
                                  {"y", "Labor Code", "quoted \"text\"\nwith newline"}};
    auto chunks = chunk_corpus(docs, {5});
    save_chunks(chunks, dir / "chunks.jsonl");
    CHECK(load_chunks(dir / "chunks.jsonl") == chunks);
}

TEST_CASE("bundled fixture loads") {
    auto docs = load_corpus(std::string(TOPICRET_TEST_DATA_DIR) + "/laws.jsonl");
    CHECK(docs.size() == 12);
    auto stats = corpus_stats(chunk_corpus(docs, {2000}));
    CHECK(stats.size() == 3);
    CHECK(stats.at("Tax Code") == 4);
}

} // TEST_SUITE
