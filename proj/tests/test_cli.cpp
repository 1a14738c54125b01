#include "doctest.h"
#include "support.hpp"

#include "topicret/cli.hpp"
#include "topicret/corpus.hpp"
#include "topicret/embeddings_file.hpp"
#include "topicret/index_io.hpp"
#include "topicret/retrieval.hpp"
#include "topicret/tfidf.hpp"

#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace topicret;
using topicret::testing::read_text;
using topicret::testing::ScratchDir;
using topicret::testing::write_text;

namespace {

const std::string kData = TOPICRET_TEST_DATA_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// ingest -> embed(tfidf) for a fixture; returns {chunks, embeddings, model}.
struct Prepared {
    std::string chunks;
    std::string embeddings;
    std::string model;
};

Prepared prepare(const ScratchDir& dir, const std::string& corpus) {
    Prepared p{(dir / "chunks.jsonl").string(), (dir / "emb.jsonl").string(),
               (dir / "model.json").string()};
    auto a = run_cli({"--quiet", "ingest", "--corpus", corpus, "--chunk-size", "2000", "--out", p.chunks});
    REQUIRE_MESSAGE(a.code == 0, a.err);
    auto b = run_cli({"--quiet", "embed", "--provider", "tfidf", "--chunks", p.chunks, "--model-out",
                      p.model, "--out", p.embeddings});
    REQUIRE_MESSAGE(b.code == 0, b.err);
    return p;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("ingest writes chunks and a per-topic table") {
    ScratchDir dir("cli");
    auto r = run_cli({"ingest", "--corpus", kData + "/laws.jsonl", "--chunk-size", "2000", "--out",
                      (dir / "chunks.jsonl").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("Topic") != std::string::npos);
    CHECK(r.out.find("Chunk Count") != std::string::npos);
    CHECK(r.out.find("Tax Code") != std::string::npos);
    CHECK(load_chunks(dir / "chunks.jsonl").size() == 12);
}

TEST_CASE("eval-cluster writes a report with the three indices") {
    ScratchDir dir("cli");
    auto p = prepare(dir, kData + "/laws.jsonl");
    auto report = (dir / "report.json").string();
    auto r = run_cli({"eval-cluster", "--embeddings", p.embeddings, "--chunks", p.chunks, "--method",
                      "average", "--out", report});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto json = nlohmann::json::parse(read_text(report));
    CHECK(json.at("method") == "average");
    CHECK(json.at("silhouette").is_number());
    CHECK(json.at("davies_bouldin").is_number());
    CHECK(json.contains("calinski_harabasz"));
    CHECK(json.at("n") == 12);
    CHECK(json.at("k") == 3);
}

TEST_CASE("two-stage query finds the brute-force nearest chunk") {
    ScratchDir dir("cli");
    auto p = prepare(dir, kData + "/separable.jsonl");
    auto index = (dir / "idx.tpix").string();
    auto r = run_cli({"--quiet", "index", "--embeddings", p.embeddings, "--chunks", p.chunks,
                      "--method", "original", "--out", index});
    REQUIRE_MESSAGE(r.code == 0, r.err);

    const std::string text = "cargo vessel in the harbor";
    // Oracle: scan every chunk's tf-idf vector against the query.
    auto model = TfIdfModel::load(p.model);
    auto q = embed_tfidf(model, text);
    auto table = load_embeddings_file(p.embeddings);
    std::string best;
    double best_score = -2;
    for (std::size_t i = 0; i < table.size(); ++i) {
        double s = cosine_similarity(q, table.embeddings()[i]);
        if (s > best_score || (s == best_score && table.ids()[i] < best)) {
            best_score = s;
            best = table.ids()[i];
        }
    }
    CHECK(best.rfind("sea-", 0) == 0);

    auto qr = run_cli({"query", "--index", index, "--text", text, "--k", "5", "--two-stage", "--top-m",
                       "1", "--tfidf-model", p.model});
    REQUIRE_MESSAGE(qr.code == 0, qr.err);
    auto json = nlohmann::json::parse(qr.out);
    CHECK(json.at("two_stage") == true);
    CHECK(json.at("topics")[0].at("topic") == "Maritime");
    CHECK(json.at("hits")[0].at("chunk_id") == best);
    CHECK(json.at("hits").size() == 3);
    for (const auto& h : json.at("hits")) {
        CHECK(h.at("topic") == "Maritime");
    }
}

TEST_CASE("pipeline composes from corpus to evaluation") {
    ScratchDir dir("cli");
    auto p = prepare(dir, kData + "/laws.jsonl");
    for (std::string method : {"original", "average", "append"}) {
        auto transformed = (dir / (method + ".jsonl")).string();
        auto t = run_cli({"--quiet", "transform", "--embeddings", p.embeddings, "--chunks", p.chunks,
                          "--method", method, "--out", transformed});
        REQUIRE_MESSAGE(t.code == 0, t.err);
        auto table = load_embeddings_file(transformed);
        CHECK(table.method == method);

        auto index = (dir / (method + ".tpix")).string();
        auto i = run_cli({"--quiet", "index", "--embeddings", p.embeddings, "--chunks", p.chunks,
                          "--method", method, "--out", index});
        REQUIRE_MESSAGE(i.code == 0, i.err);
        CHECK(load_index(index).size() == 12);
        CHECK(load_index(index).dim() == table.dim());

        auto e = run_cli({"eval-cluster", "--embeddings", p.embeddings, "--chunks", p.chunks, "--method",
                          method});
        REQUIRE_MESSAGE(e.code == 0, e.err);
        CHECK(nlohmann::json::parse(e.out).at("method") == method);
    }
    auto csv = (dir / "plot.csv").string();
    auto x = run_cli({"--quiet", "export-2d", "--embeddings", p.embeddings, "--chunks", p.chunks,
                      "--method", "average", "--out", csv});
    REQUIRE_MESSAGE(x.code == 0, x.err);
    CHECK(read_text(csv).rfind("chunk_id,topic,x,y", 0) == 0);
}

TEST_CASE("eval-retrieval reports recall and mrr") {
    ScratchDir dir("cli");
    auto p = prepare(dir, kData + "/laws.jsonl");
    auto index = (dir / "idx.tpix").string();
    REQUIRE(run_cli({"--quiet", "index", "--embeddings", p.embeddings, "--chunks", p.chunks, "--method",
                     "original", "--out", index})
                .code == 0);
    write_text(dir / "q.jsonl",
               "{\"text\":\"value added tax rate\",\"relevant\":[\"tax-2#0\"]}\n"
               "{\"text\":\"alimony for a child\",\"relevant\":[\"family-2#0\"]}\n");
    auto r = run_cli({"eval-retrieval", "--index", index, "--queries", (dir / "q.jsonl").string(), "--k",
                      "3", "--tfidf-model", p.model});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto json = nlohmann::json::parse(r.out);
    CHECK(json.at("n_queries") == 2);
    CHECK(json.at("recall_at_k") == 1.0);
    CHECK(json.at("mrr") == 1.0);

    write_text(dir / "bad.jsonl", "{\"text\":\"tax\",\"relevant\":[\"nope#0\"]}\n");
    auto bad = run_cli({"eval-retrieval", "--index", index, "--queries", (dir / "bad.jsonl").string(),
                        "--tfidf-model", p.model});
    CHECK(bad.code == cli::kDataError);
}

TEST_CASE("exit codes") {
    ScratchDir dir("cli");
    CHECK(run_cli({}).code == cli::kUsageError);
    CHECK(run_cli({"frobnicate"}).code == cli::kUsageError);
    CHECK(run_cli({"--help"}).code == cli::kSuccess);
    CHECK(run_cli({"ingest", "--corpus", (dir / "missing.jsonl").string(), "--out",
                   (dir / "c.jsonl").string()})
              .code == cli::kUsageError);
    CHECK(run_cli({"transform", "--embeddings", kData + "/laws.jsonl"}).code == cli::kUsageError);

    write_text(dir / "dup.jsonl", "{\"id\":\"a\",\"topic\":\"T\",\"text\":\"x\"}\n"
                                  "{\"id\":\"a\",\"topic\":\"T\",\"text\":\"y\"}\n");
    auto dup = run_cli({"ingest", "--corpus", (dir / "dup.jsonl").string(), "--out",
                        (dir / "c.jsonl").string()});
    CHECK(dup.code == cli::kDataError);
    auto err = nlohmann::json::parse(dup.err);
    CHECK(err.at("error") == "data");
    CHECK(err.at("message").get<std::string>().find("\"a\"") != std::string::npos);

    write_text(dir / "not-an-index.tpix", "hello");
    auto q = run_cli({"query", "--index", (dir / "not-an-index.tpix").string(), "--vector", "[1,0]"});
    CHECK(q.code == cli::kDataError);

    auto p = prepare(dir, kData + "/laws.jsonl");
    ::unsetenv("TOPICRET_NO_SUCH_KEY");
    auto remote = run_cli({"embed", "--provider", "remote", "--chunks", p.chunks, "--endpoint",
                           "http://127.0.0.1:1/v1/embeddings", "--model", "m", "--api-key-env",
                           "TOPICRET_NO_SUCH_KEY", "--out", (dir / "r.jsonl").string()});
    CHECK(remote.code == cli::kRemoteError);
}

TEST_CASE("failed commands leave no partial output") {
    ScratchDir dir("cli");
    write_text(dir / "bad.jsonl", "{\"id\":\"a\",\"topic\":\"T\",\"text\":\"x\"}\nbroken\n");
    auto out = dir / "chunks.jsonl";
    CHECK(run_cli({"ingest", "--corpus", (dir / "bad.jsonl").string(), "--out", out.string()}).code ==
          cli::kDataError);
    CHECK_FALSE(std::filesystem::exists(out));
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
    }

    // An unwritable destination is rejected before any work happens.
    auto r = run_cli({"ingest", "--corpus", kData + "/laws.jsonl", "--out",
                      (dir / "no" / "such" / "dir.jsonl").string()});
    CHECK(r.code == cli::kUsageError);
}

TEST_CASE("synthetic generation is byte-identical across runs") {
    ScratchDir dir("cli");
    auto a = run_cli({"--quiet", "--seed", "42", "gen-synthetic", "--counts", "30,20,10", "--dim", "8",
                      "--out", (dir / "a").string()});
    REQUIRE_MESSAGE(a.code == 0, a.err);
    auto b = run_cli({"--quiet", "--seed", "42", "gen-synthetic", "--counts", "30,20,10", "--dim", "8",
                      "--out", (dir / "b").string()});
    REQUIRE(b.code == 0);
    for (const char* f : {"corpus.jsonl", "chunks.jsonl", "embeddings.jsonl"}) {
        CHECK(read_text(dir / "a" / f) == read_text(dir / "b" / f));
        CHECK_FALSE(read_text(dir / "a" / f).empty());
    }
    auto c = run_cli({"--quiet", "--seed", "42", "gen-synthetic", "--counts", "30,20,10", "--n-topics",
                      "4", "--out", (dir / "c").string()});
    CHECK(c.code == cli::kUsageError);
}

TEST_CASE("query accepts a raw vector") {
    ScratchDir dir("cli");
    auto a = run_cli({"--quiet", "gen-synthetic", "--counts", "5,5", "--dim", "3", "--out",
                      (dir / "s").string()});
    REQUIRE(a.code == 0);
    auto index = (dir / "i.tpix").string();
    auto b = run_cli({"--quiet", "index", "--embeddings", (dir / "s" / "embeddings.jsonl").string(),
                      "--chunks", (dir / "s" / "chunks.jsonl").string(), "--method", "append", "--out",
                      index});
    REQUIRE_MESSAGE(b.code == 0, b.err);
    auto q = run_cli({"query", "--index", index, "--vector", "[0.1, 0.2, 0.3]", "--k", "2"});
    REQUIRE_MESSAGE(q.code == 0, q.err);
    auto json = nlohmann::json::parse(q.out);
    CHECK(json.at("method") == "append");
    CHECK(json.at("hits").size() == 2);
    CHECK(json.at("hits")[0].at("rank") == 1);
    auto both = run_cli({"query", "--index", index, "--vector", "[1,0,0]", "--text", "x"});
    CHECK(both.code == cli::kUsageError);
}

} // TEST_SUITE
