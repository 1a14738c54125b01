#include "topicret/cli.hpp"

#include "commands.hpp"
#include "topicret/error.hpp"
#include "topicret/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

namespace topicret::cli {

namespace {

const CLI::Validator kOutputPath(
    [](const std::string& value) -> std::string {
        const auto parent = std::filesystem::absolute(value).parent_path();
        if (!std::filesystem::is_directory(parent)) {
            return "directory does not exist: " + parent.string();
        }
        if (std::filesystem::is_directory(value)) {
            return "output path is a directory: " + value;
        }
        return {};
    },
    "PATH", "OutputPath");

const CLI::Validator kOutputDir(
    [](const std::string& value) -> std::string {
        const auto parent = std::filesystem::absolute(value).parent_path();
        if (!std::filesystem::is_directory(parent)) {
            return "directory does not exist: " + parent.string();
        }
        return {};
    },
    "DIR", "OutputDir");

void write_error(std::ostream& err, const char* kind, const std::string& message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

void add_pipeline_options(CLI::App* cmd, PipelineOptions& o, bool method_required) {
    cmd->add_option("--embeddings", o.embeddings, "Chunk embeddings (JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--chunks", o.chunks, "Chunks file written by ingest")
        ->required()
        ->check(CLI::ExistingFile);
    auto* method = cmd->add_option_function<std::string>(
                          "--method",
                          [&o](const std::string& name) {
                              o.method = *parse_transform_method(name);
                          },
                          "original | average | append")
                       ->check(CLI::IsMember({"original", "average", "append"}));
    if (method_required) {
        method->required();
    }
    cmd->add_option_function<std::string>(
           "--topic-source",
           [&o](const std::string& s) {
               o.topic_source = s == "tfidf" ? TopicSource::TfIdf : TopicSource::Mean;
           },
           "mean (centroid of chunk embeddings) | tfidf (whole-topic text)")
        ->check(CLI::IsMember({"mean", "tfidf"}));
    cmd->add_option("--tfidf-model", o.tfidf_model, "Model written by embed --model-out")
        ->check(CLI::ExistingFile);
    cmd->add_flag("!--no-normalize-inputs", o.normalize_inputs,
                  "Use chunk vectors as loaded instead of unit-normalizing them first");
}

void add_remote_options(CLI::App* cmd, RemoteEmbeddingConfig& r) {
    cmd->add_option("--endpoint", r.endpoint_url, "Embeddings endpoint URL");
    cmd->add_option("--model", r.model_name, "Remote model name");
    cmd->add_option("--api-key-env", r.api_key_env_var, "Environment variable holding the API key")
        ->capture_default_str();
    cmd->add_option("--batch-size", r.batch_size, "Texts per request")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option_function<long>(
           "--timeout-ms", [&r](long ms) { r.timeout = std::chrono::milliseconds(ms); },
           "Per-request timeout in milliseconds")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--parallel", r.max_parallel, "Concurrent requests")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topic-enhanced embeddings and two-stage retrieval", "topicret"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for synthetic data")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Suppress informational output");
    app.add_option("--out", g.out, "Output path");

    IngestOptions ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Split a corpus into fixed-size chunks");
    ingest_cmd->add_option("--corpus", ingest.corpus, "Corpus (JSON lines: id, topic, text)")
        ->required()
        ->check(CLI::ExistingFile);
    ingest_cmd->add_option("--chunk-size", ingest.chunk_size, "Chunk size in characters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    EmbedOptions embed;
    auto* embed_cmd = app.add_subcommand("embed", "Embed chunks with a provider");
    embed_cmd->add_option("--provider", embed.provider, "tfidf | file | remote")
        ->required()
        ->check(CLI::IsMember({"tfidf", "file", "remote"}));
    embed_cmd->add_option("--chunks", embed.chunks, "Chunks file written by ingest")
        ->required()
        ->check(CLI::ExistingFile);
    embed_cmd->add_option("--vectors", embed.vectors, "Precomputed vectors (provider file)")
        ->check(CLI::ExistingFile);
    embed_cmd->add_option("--model-out", embed.model_out, "Where to save the tf-idf model")
        ->check(kOutputPath);
    add_remote_options(embed_cmd, embed.remote);

    PipelineOptions transform;
    auto* transform_cmd =
        app.add_subcommand("transform", "Apply a topic transform to chunk embeddings");
    add_pipeline_options(transform_cmd, transform, true);

    PipelineOptions index;
    auto* index_cmd = app.add_subcommand("index", "Build a vector index");
    add_pipeline_options(index_cmd, index, false);

    QueryOptions query;
    RemoteEmbeddingConfig query_remote;
    auto* query_cmd = app.add_subcommand("query", "Search an index");
    query_cmd->add_option("--index", query.index, "Index file")
        ->required()
        ->check(CLI::ExistingFile);
    query_cmd->add_option("--text", query.text, "Query text");
    query_cmd->add_option("--vector", query.vector, "Query vector as a JSON array");
    query_cmd->add_option("--k", query.k, "Number of hits")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    query_cmd->add_flag("--two-stage", query.two_stage, "Route to topics first");
    query_cmd->add_option("--top-m", query.top_m, "Topics kept by the routing stage")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    query_cmd->add_option("--tfidf-model", query.embedder.tfidf_model, "Embed text with tf-idf")
        ->check(CLI::ExistingFile);
    add_remote_options(query_cmd, query_remote);

    PipelineOptions eval_cluster;
    auto* eval_cluster_cmd =
        app.add_subcommand("eval-cluster", "Cluster-validity indices with topics as labels");
    add_pipeline_options(eval_cluster_cmd, eval_cluster, false);

    EvalRetrievalOptions eval_retrieval;
    RemoteEmbeddingConfig eval_remote;
    auto* eval_retrieval_cmd =
        app.add_subcommand("eval-retrieval", "Recall@k and MRR over a query set");
    eval_retrieval_cmd->add_option("--index", eval_retrieval.index, "Index file")
        ->required()
        ->check(CLI::ExistingFile);
    eval_retrieval_cmd
        ->add_option("--queries", eval_retrieval.queries,
                     "Queries (JSON lines: text or vector, relevant)")
        ->required()
        ->check(CLI::ExistingFile);
    eval_retrieval_cmd->add_option("--k", eval_retrieval.k, "Cutoff")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    eval_retrieval_cmd->add_flag("--two-stage", eval_retrieval.two_stage, "Route to topics first");
    eval_retrieval_cmd->add_option("--top-m", eval_retrieval.top_m, "Topics kept by routing")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    eval_retrieval_cmd
        ->add_option("--tfidf-model", eval_retrieval.embedder.tfidf_model,
                     "Embed query text with tf-idf")
        ->check(CLI::ExistingFile);
    add_remote_options(eval_retrieval_cmd, eval_remote);

    PipelineOptions export_2d;
    auto* export_cmd = app.add_subcommand("export-2d", "PCA projection to CSV for plotting");
    add_pipeline_options(export_cmd, export_2d, false);

    SyntheticOptions synth;
    const SyntheticConfig synth_defaults;
    synth.dim = synth_defaults.dim;
    synth.intra_spread = synth_defaults.intra_spread;
    synth.inter_spread = synth_defaults.inter_spread;
    auto* synth_cmd = app.add_subcommand("gen-synthetic", "Generate a labeled synthetic corpus");
    synth_cmd->add_option("--counts", synth.counts, "Chunks per topic, comma-separated");
    synth_cmd->add_flag("--reference-counts", synth.reference_counts,
                        "Use the fourteen-law reference topic counts");
    synth_cmd->add_option("--n-topics", synth.n_topics, "Expected number of topics");
    synth_cmd->add_option("--dim", synth.dim, "Vector dimension")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--intra-spread", synth.intra_spread, "Noise around topic centers")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--inter-spread", synth.inter_spread, "Separation of topic centers")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return kUsageError;
    }

    try {
        if (!g.out.empty()) {
            const auto& validator = app.got_subcommand(synth_cmd) ? kOutputDir : kOutputPath;
            if (auto problem = validator(g.out); !problem.empty()) {
                throw UsageError("--out: " + problem);
            }
        }
        if (!query_remote.endpoint_url.empty()) {
            query.embedder.remote = query_remote;
        }
        if (!eval_remote.endpoint_url.empty()) {
            eval_retrieval.embedder.remote = eval_remote;
        }

        if (app.got_subcommand(ingest_cmd)) {
            cmd_ingest(g, ingest, out);
        } else if (app.got_subcommand(embed_cmd)) {
            cmd_embed(g, embed, out);
        } else if (app.got_subcommand(transform_cmd)) {
            cmd_transform(g, transform, out);
        } else if (app.got_subcommand(index_cmd)) {
            cmd_index(g, index, out);
        } else if (app.got_subcommand(query_cmd)) {
            cmd_query(g, query, out);
        } else if (app.got_subcommand(eval_cluster_cmd)) {
            cmd_eval_cluster(g, eval_cluster, out);
        } else if (app.got_subcommand(eval_retrieval_cmd)) {
            cmd_eval_retrieval(g, eval_retrieval, out);
        } else if (app.got_subcommand(export_cmd)) {
            cmd_export_2d(g, export_2d, out, err);
        } else if (app.got_subcommand(synth_cmd)) {
            cmd_gen_synthetic(g, synth, out);
        }
    } catch (const UsageError& e) {
        write_error(err, "usage", e.what());
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        write_error(err, "usage", e.what());
        return kUsageError;
    } catch (const RemoteError& e) {
        write_error(err, "remote", e.what());
        return kRemoteError;
    } catch (const DataError& e) {
        write_error(err, "data", e.what());
        return kDataError;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return kFailure;
    }
    return kSuccess;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

} // namespace topicret::cli
