#include "commands.hpp"

#include "topicret/atomic_file.hpp"
#include "topicret/corpus.hpp"
#include "topicret/embeddings_file.hpp"
#include "topicret/error.hpp"
#include "topicret/index_io.hpp"
#include "topicret/metrics.hpp"
#include "topicret/pca.hpp"
#include "topicret/retrieval.hpp"
#include "topicret/synthetic.hpp"
#include "topicret/tfidf.hpp"

#include "../jsonl.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace topicret::cli {

namespace {

std::string require_out(const GlobalOptions& g, const char* command) {
    if (g.out.empty()) {
        throw UsageError(std::string(command) + ": --out is required");
    }
    return g.out;
}

std::vector<ChunkEmbedding> join_embeddings(const std::vector<Chunk>& chunks,
                                            const EmbeddingTable& table, bool normalize) {
    std::vector<ChunkEmbedding> out;
    out.reserve(chunks.size());
    for (const auto& c : chunks) {
        if (!table.contains(c.id)) {
            throw DataError("no embedding for chunk \"" + c.id + "\"");
        }
        const auto& e = table.at(c.id);
        out.push_back(ChunkEmbedding{c.id, c.topic, normalize ? l2_normalize(e) : e});
    }
    return out;
}

struct Prepared {
    std::vector<Chunk> chunks;
    std::vector<ChunkEmbedding> entries;
    TopicMap topics;
};

Prepared prepare(const PipelineOptions& o) {
    Prepared p;
    p.chunks = load_chunks(o.chunks);
    const auto table = load_embeddings_file(o.embeddings);
    p.entries = join_embeddings(p.chunks, table, o.normalize_inputs);
    if (p.entries.empty()) {
        throw DataError("no chunks to process in " + o.chunks);
    }
    if (o.topic_source == TopicSource::TfIdf) {
        if (o.tfidf_model.empty()) {
            throw UsageError("--topic-source tfidf needs --tfidf-model");
        }
        p.topics = compute_topic_embeddings_tfidf(TfIdfModel::load(o.tfidf_model), p.chunks);
    } else {
        p.topics = compute_topic_embeddings(p.entries);
    }
    return p;
}

Embedding embed_query_text(const QueryEmbedder& e, const std::string& text) {
    if (!e.tfidf_model.empty()) {
        return embed_tfidf(TfIdfModel::load(e.tfidf_model), text);
    }
    if (e.remote) {
        return fetch_remote_embeddings(*e.remote, {text}).front();
    }
    throw UsageError("query text needs --tfidf-model or --endpoint to embed it");
}

Embedding parse_vector(const std::string& json_text) {
    try {
        return Embedding(nlohmann::json::parse(json_text).get<std::vector<float>>());
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("--vector must be a JSON array of numbers: ") + e.what());
    }
}

SearchResult run_query(const VectorIndex& index, const Embedding& raw, std::size_t k,
                       bool two_stage, std::size_t top_m) {
    if (two_stage) {
        return two_stage_search(index, raw, k, top_m);
    }
    return search(index, transform_query(raw, index.method()), k);
}

nlohmann::ordered_json hits_json(const SearchResult& r) {
    auto hits = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.hits.size(); ++i) {
        hits.push_back({{"rank", i + 1},
                        {"chunk_id", r.hits[i].chunk_id},
                        {"topic", r.hits[i].topic},
                        {"score", r.hits[i].score}});
    }
    return hits;
}

void emit(const GlobalOptions& g, const std::string& text, std::ostream& out) {
    if (g.out.empty()) {
        out << text;
    } else {
        write_file_atomic(g.out, text);
    }
}

} // namespace

void cmd_ingest(const GlobalOptions& g, const IngestOptions& o, std::ostream& out) {
    const auto target = require_out(g, "ingest");
    const auto docs = load_corpus(o.corpus);
    const auto chunks = chunk_corpus(docs, ChunkingConfig{o.chunk_size});
    save_chunks(chunks, target);
    if (g.quiet) {
        return;
    }
    // Topics listed in order of first appearance, like the source corpus.
    const auto counts = corpus_stats(chunks);
    std::vector<std::string> order;
    std::set<std::string> listed;
    for (const auto& c : chunks) {
        if (listed.insert(c.topic).second) {
            order.push_back(c.topic);
        }
    }
    std::size_t width = std::string("Topic").size();
    for (const auto& t : order) {
        width = std::max(width, t.size());
    }
    out << std::left << std::setw(static_cast<int>(width)) << "Topic" << " | Chunk Count\n";
    out << std::string(width, '-') << "-|------------\n";
    for (const auto& t : order) {
        out << std::left << std::setw(static_cast<int>(width)) << t << " | " << counts.at(t)
            << '\n';
    }
    out << "\n" << docs.size() << " documents, " << chunks.size() << " chunks -> " << target
        << '\n';
}

void cmd_embed(const GlobalOptions& g, const EmbedOptions& o, std::ostream& out) {
    const auto target = require_out(g, "embed");
    const auto chunks = load_chunks(o.chunks);
    EmbeddingTable table;
    if (o.provider == "tfidf") {
        std::vector<std::string> texts;
        texts.reserve(chunks.size());
        for (const auto& c : chunks) {
            texts.push_back(c.text);
        }
        const auto model = fit_tfidf(texts);
        for (const auto& c : chunks) {
            table.add(c.id, embed_tfidf(model, c.text));
        }
        if (!o.model_out.empty()) {
            model.save(o.model_out);
        }
    } else if (o.provider == "file") {
        if (o.vectors.empty()) {
            throw UsageError("--provider file needs --vectors");
        }
        const auto source = load_embeddings_file(o.vectors);
        for (const auto& c : chunks) {
            table.add(c.id, source.at(c.id));
        }
    } else if (o.provider == "remote") {
        if (o.remote.endpoint_url.empty() || o.remote.model_name.empty()) {
            throw UsageError("--provider remote needs --endpoint and --model");
        }
        std::vector<std::string> texts;
        texts.reserve(chunks.size());
        for (const auto& c : chunks) {
            texts.push_back(c.text);
        }
        auto vectors = fetch_remote_embeddings(o.remote, texts);
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            table.add(chunks[i].id, std::move(vectors[i]));
        }
    } else {
        throw UsageError("unknown provider \"" + o.provider + "\"");
    }
    save_embeddings_file(table, target);
    if (!g.quiet) {
        out << table.size() << " embeddings of dimension " << table.dim() << " -> " << target
            << '\n';
    }
}

void cmd_transform(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out) {
    const auto target = require_out(g, "transform");
    const auto p = prepare(o);
    const auto transformed = transform_corpus(p.entries, p.topics, o.method);
    EmbeddingTable table;
    for (const auto& t : transformed) {
        table.add(t.chunk_id, t.embedding);
    }
    save_embeddings_file(table, target, std::string(to_string(o.method)));
    if (!g.quiet) {
        out << table.size() << " " << to_string(o.method) << " embeddings of dimension "
            << table.dim() << " -> " << target << '\n';
    }
}

void cmd_index(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out) {
    const auto target = require_out(g, "index");
    const auto p = prepare(o);
    const auto index = build_index(p.entries, p.topics, o.method);
    save_index(index, target);
    if (!g.quiet) {
        out << "indexed " << index.size() << " chunks in " << index.topic_count()
            << " topics (method " << to_string(index.method()) << ", dim " << index.dim()
            << ") -> " << target << '\n';
    }
}

void cmd_query(const GlobalOptions& g, const QueryOptions& o, std::ostream& out) {
    if (o.text.empty() == o.vector.empty()) {
        throw UsageError("query needs exactly one of --text or --vector");
    }
    const auto index = load_index(o.index);
    const Embedding raw = o.text.empty() ? parse_vector(o.vector)
                                         : embed_query_text(o.embedder, o.text);
    const auto result = run_query(index, raw, o.k, o.two_stage, o.top_m);
    nlohmann::ordered_json report;
    report["method"] = std::string(to_string(index.method()));
    report["k"] = o.k;
    report["two_stage"] = o.two_stage;
    if (o.two_stage) {
        auto routed = nlohmann::ordered_json::array();
        for (const auto& t : rank_topics(index, raw, o.top_m)) {
            routed.push_back({{"topic", t.topic}, {"score", t.score}});
        }
        report["topics"] = routed;
    }
    report["hits"] = hits_json(result);
    emit(g, report.dump(2) + "\n", out);
}

void cmd_eval_cluster(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out) {
    const auto p = prepare(o);
    const auto transformed = transform_corpus(p.entries, p.topics, o.method);
    const auto report =
        evaluate_clustering(LabeledPoints::from_embeddings(transformed), o.method);
    emit(g, report.to_json() + "\n", out);
}

void cmd_eval_retrieval(const GlobalOptions& g, const EvalRetrievalOptions& o,
                        std::ostream& out) {
    const auto index = load_index(o.index);
    const std::set<std::string> known(index.ids().begin(), index.ids().end());

    std::vector<Embedding> queries;
    std::vector<std::set<std::string>> relevant;
    const std::filesystem::path qpath = o.queries;
    detail::for_each_json_line(qpath, [&](const nlohmann::json& obj, std::size_t line_no) {
        const auto where = qpath.string() + ":" + std::to_string(line_no);
        auto rel = obj.find("relevant");
        if (rel == obj.end() || !rel->is_array() || rel->empty()) {
            throw DataError(where + ": \"relevant\" must be a non-empty array of chunk ids");
        }
        std::set<std::string> ids;
        for (const auto& id : *rel) {
            if (!id.is_string()) {
                throw DataError(where + ": relevant ids must be strings");
            }
            if (!known.contains(id.get<std::string>())) {
                throw DataError(where + ": relevant chunk \"" + id.get<std::string>() +
                                "\" is not in the index");
            }
            ids.insert(id.get<std::string>());
        }
        if (auto v = obj.find("vector"); v != obj.end()) {
            try {
                queries.push_back(Embedding(v->get<std::vector<float>>()));
            } catch (const nlohmann::json::exception& e) {
                throw DataError(where + ": invalid \"vector\": " + e.what());
            }
        } else if (auto t = obj.find("text"); t != obj.end() && t->is_string()) {
            queries.push_back(embed_query_text(o.embedder, t->get<std::string>()));
        } else {
            throw DataError(where + ": query needs \"text\" or \"vector\"");
        }
        relevant.push_back(std::move(ids));
    });
    if (queries.empty()) {
        throw DataError(o.queries + " holds no queries");
    }

    std::vector<QueryOutcome> outcomes(queries.size());
    if (o.two_stage) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
            outcomes[i].results = two_stage_search(index, queries[i], o.k, o.top_m);
        }
    } else {
        std::vector<Embedding> transformed;
        transformed.reserve(queries.size());
        for (const auto& q : queries) {
            transformed.push_back(transform_query(q, index.method()));
        }
        auto results = search_batch(index, transformed, o.k);
        for (std::size_t i = 0; i < results.size(); ++i) {
            outcomes[i].results = std::move(results[i]);
        }
    }
    double recall = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        outcomes[i].relevant = std::move(relevant[i]);
        recall += recall_at_k(outcomes[i].results, outcomes[i].relevant, o.k);
    }
    recall /= static_cast<double>(outcomes.size());

    nlohmann::ordered_json report;
    report["method"] = std::string(to_string(index.method()));
    report["k"] = o.k;
    report["two_stage"] = o.two_stage;
    if (o.two_stage) {
        report["top_m"] = o.top_m;
    }
    report["n_queries"] = outcomes.size();
    report["recall_at_k"] = recall;
    report["mrr"] = mean_reciprocal_rank(outcomes);
    emit(g, report.dump(2) + "\n", out);
}

void cmd_export_2d(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out,
                   std::ostream& err) {
    const auto target = require_out(g, "export-2d");
    const auto p = prepare(o);
    const auto transformed = transform_corpus(p.entries, p.topics, o.method);
    const auto projection = project_2d(transformed);
    write_projection_csv(transformed, projection, target);
    if (projection.rank_deficient) {
        err << "warning: the second principal component carries no variance\n";
    }
    if (!g.quiet) {
        out << "projected " << transformed.size() << " points (variance " << projection.variance[0]
            << ", " << projection.variance[1] << ") -> " << target << '\n';
    }
}

void cmd_gen_synthetic(const GlobalOptions& g, const SyntheticOptions& o, std::ostream& out) {
    const std::filesystem::path dir = require_out(g, "gen-synthetic");
    SyntheticConfig cfg;
    if (o.reference_counts == !o.counts.empty()) {
        throw UsageError("gen-synthetic needs exactly one of --counts or --reference-counts");
    }
    if (o.reference_counts) {
        for (const auto& [name, count] : reference_law_topics()) {
            cfg.topic_names.push_back(name);
            cfg.counts.push_back(count);
        }
    } else {
        std::stringstream ss(o.counts);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                const long long v = std::stoll(item, &used);
                if (used != item.size() || v <= 0) {
                    throw std::invalid_argument(item);
                }
                cfg.counts.push_back(static_cast<std::size_t>(v));
            } catch (const std::exception&) {
                throw UsageError("--counts must be a comma-separated list of positive integers");
            }
        }
    }
    if (o.n_topics != 0 && o.n_topics != cfg.counts.size()) {
        throw UsageError("--n-topics is " + std::to_string(o.n_topics) + " but " +
                         std::to_string(cfg.counts.size()) + " counts were given");
    }
    cfg.dim = o.dim;
    cfg.intra_spread = o.intra_spread;
    cfg.inter_spread = o.inter_spread;
    cfg.seed = g.seed;
    SyntheticCorpus corpus;
    try {
        corpus = generate_synthetic(cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("invalid synthetic config: ") + e.what());
    }

    std::filesystem::create_directories(dir);
    {
        AtomicOutputFile file(dir / "corpus.jsonl", true);
        for (const auto& d : corpus.documents) {
            file.stream() << nlohmann::json{{"id", d.id}, {"topic", d.topic}, {"text", d.text}}.dump()
                          << '\n';
        }
        file.commit();
    }
    save_chunks(chunk_corpus(corpus.documents, ChunkingConfig{}), dir / "chunks.jsonl");
    EmbeddingTable table;
    for (const auto& e : corpus.embeddings) {
        table.add(e.chunk_id, e.embedding);
    }
    save_embeddings_file(table, dir / "embeddings.jsonl");
    if (!g.quiet) {
        out << corpus.embeddings.size() << " vectors of dimension " << cfg.dim << " in "
            << cfg.counts.size() << " topics -> " << dir.string() << '\n';
    }
}

} // namespace topicret::cli
