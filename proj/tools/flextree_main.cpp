// flextree: train context models, simulate typing, compute ITR, serve the
// session gateway.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "flextree/charset.hpp"
#include "flextree/error.hpp"
#include "flextree/gateway.hpp"
#include "flextree/metrics.hpp"
#include "flextree/ppm_model.hpp"
#include "flextree/simulator.hpp"

namespace {

using namespace flextree;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CharacterSet charset_from(const std::string& path) {
    return path.empty() ? default_charset() : load_charset(path);
}

std::vector<Corpus> read_documents(const std::vector<std::string>& paths, const CharacterSet& cs,
                                   bool normalize_input) {
    std::vector<Corpus> docs;
    for (const auto& p : paths) {
        std::string raw = read_text_file(p);
        docs.push_back(normalize_input ? normalize(raw, cs) : Corpus::from_normalized(std::move(raw), cs));
    }
    return docs;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failure on " + path);
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
    std::vector<std::string> corpus;
    int order = 0;
    std::string charset;
    std::string out;
    bool no_normalize = false;
};

int run_train(const TrainArgs& a) {
    const CharacterSet cs = charset_from(a.charset);
    const auto docs = read_documents(a.corpus, cs, !a.no_normalize);
    std::size_t total = 0;
    for (const auto& d : docs) total += d.size();
    if (total == 0) throw Error(ErrorCode::CorpusTooSmall, "corpus is empty");

    const PredModel model = train(docs, a.order, cs);
    save(model, a.out);

    Count unigram_total = 0;
    for (Count c : model.unigrams()) unigram_total += c;
    std::cout << "order: " << model.order() << "\n"
              << "contexts: " << model.contexts().size() << "\n"
              << "unigram_total: " << unigram_total << "\n"
              << "wrote: " << a.out << "\n";
    return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string model;
    std::optional<std::string> text;
    std::string sentences;
    std::string csv;
};

int run_simulate(const SimulateArgs& a) {
    const PredModel model = load(a.model);
    std::vector<std::string> sentences;
    if (a.text) {
        sentences.push_back(*a.text);
    } else {
        std::ifstream in(a.sentences, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + a.sentences);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            sentences.push_back(line);
        }
    }
    std::vector<SimReport> reports;
    for (const auto& s : sentences) reports.push_back(simulate_optimal(s, model));

    std::cout << simulation_table(reports);
    if (!a.csv.empty()) write_file(a.csv, simulation_csv(reports));
    return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
    std::vector<std::string> corpus;
    std::vector<int> orders{0, 1, 2, 3};
    std::size_t samples = 100;
    std::size_t len = 30;
    std::uint64_t seed = 1;
    std::string csv;
    std::string charset;
    bool in_corpus = false;
    bool no_normalize = false;
};

int run_bench(const BenchArgs& a) {
    const CharacterSet cs = charset_from(a.charset);
    const auto docs = read_documents(a.corpus, cs, !a.no_normalize);

    BenchmarkOptions options;
    options.orders = a.orders;
    options.n_sentences = a.samples;
    options.sentence_len = a.len;
    options.seed = a.seed;
    options.mode = a.in_corpus ? SamplingMode::InCorpus : SamplingMode::HeldOut;
    const auto rows = run_benchmark(docs, cs, options);

    std::cout << benchmark_table(rows);
    const double chance = static_cast<double>(kGroupSize) / static_cast<double>(CharacterSet::kSize);
    for (const auto& r : rows) {
        if (r.order != 3) continue;
        const bool pass = r.hit_at_group1.mean > chance;
        std::printf("[%s] PPM3 hit_at_group1 %.4f vs chance %.4f\n", pass ? "PASS" : "FAIL", r.hit_at_group1.mean,
                    chance);
    }
    if (!a.csv.empty()) write_file(a.csv, benchmark_csv(rows));
    return 0;
}

// --- itr --------------------------------------------------------------------

struct ItrArgs {
    double letters = 0.0;
    std::optional<double> commands;
    double seconds = 0.0;
};

int run_itr(const ItrArgs& a) {
    if (!(a.seconds > 0.0)) throw UsageError("--seconds must be positive");
    const double commands = a.commands.value_or(2.0 * a.letters);
    std::printf("speed_lpm: %.4f\n", a.letters / (a.seconds / 60.0));
    std::printf("itr_com_bpm: %.4f\n", itr(commands, kCommandAlphabet, a.seconds));
    std::printf("itr_letter_bpm: %.4f\n", itr(a.letters, kLetterAlphabet, a.seconds));
    return 0;
}

// --- serve ------------------------------------------------------------------

struct ServeArgs {
    std::string models;
    std::vector<std::string> corpus;
    std::string host = "127.0.0.1";
    int port = 8080;
    int dwell_ms = kDefaultDwellMs;
    std::string static_dir;
    std::string transcripts;
};

int run_serve(const ServeArgs& a) {
    GatewayConfig config;
    config.default_dwell_ms = a.dwell_ms;
    if (!a.transcripts.empty()) config.transcript_dir = a.transcripts;

    if (!a.models.empty()) {
        // <dir>/ppm0.json .. ppm3.json
        for (int k = 0; k <= 3; ++k) {
            const auto path = std::filesystem::path(a.models) / ("ppm" + std::to_string(k) + ".json");
            auto model = std::make_shared<const PredModel>(load(path));
            if (model->order() != k) {
                throw Error(ErrorCode::CorruptModel, path.string() + " holds an order-" +
                                                         std::to_string(model->order()) + " model");
            }
            config.models[k] = std::move(model);
        }
    } else {
        const auto docs = read_documents(a.corpus, default_charset(), true);
        for (int k = 0; k <= 3; ++k) config.models[k] = std::make_shared<const PredModel>(train(docs, k, default_charset()));
    }

    Gateway gateway(std::move(config));
    httplib::Server server;
    mount_routes(server, gateway);
    if (!a.static_dir.empty() && !server.set_mount_point("/", a.static_dir)) {
        throw Error(ErrorCode::IoError, "static directory " + a.static_dir + " not found");
    }
    std::cout << "listening on http://" << a.host << ":" << a.port << std::endl;
    if (!server.listen(a.host, a.port)) {
        throw Error(ErrorCode::IoError, "cannot listen on " + a.host + ":" + std::to_string(a.port));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flex-Tree predictive keyboard engine"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a context model from corpus text");
    train_cmd->add_option("--corpus", train_args.corpus, "Corpus file(s); each file is one document")->required();
    train_cmd->add_option("--order", train_args.order, "Context length K")->required()->check(CLI::Range(0, 8));
    train_cmd->add_option("--charset", train_args.charset, "Charset file (72 lines)");
    train_cmd->add_option("--out", train_args.out, "Model file to write")->required();
    train_cmd->add_flag("--no-normalize", train_args.no_normalize, "Corpus is already restricted to the charset");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Type sentences with an error-free user");
    sim_cmd->add_option("--model", sim_args.model, "Model file")->required();
    auto* text_opt = sim_cmd->add_option("--text", sim_args.text, "Single sentence");
    auto* sentences_opt = sim_cmd->add_option("--sentences", sim_args.sentences, "File with one sentence per line");
    text_opt->excludes(sentences_opt);
    sim_cmd->add_option("--csv", sim_args.csv, "Also write per-sentence CSV");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Compare model orders on sampled sentences");
    bench_cmd->add_option("--corpus", bench_args.corpus, "Corpus file(s)")->required();
    bench_cmd->add_option("--orders", bench_args.orders, "Comma-separated orders")->delimiter(',')->check(CLI::Range(0, 8));
    bench_cmd->add_option("--samples", bench_args.samples, "Number of sentences")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--len", bench_args.len, "Sentence length")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_args.seed, "Sampling seed");
    bench_cmd->add_option("--csv", bench_args.csv, "Also write aggregate CSV");
    bench_cmd->add_option("--charset", bench_args.charset, "Charset file (72 lines)");
    bench_cmd->add_flag("--in-corpus", bench_args.in_corpus, "Train on the full corpus, sentences included");
    bench_cmd->add_flag("--no-normalize", bench_args.no_normalize, "Corpus is already restricted to the charset");

    ItrArgs itr_args;
    auto* itr_cmd = app.add_subcommand("itr", "Speed and information transfer rate from counts");
    itr_cmd->add_option("--letters", itr_args.letters, "Letters typed")->required()->check(CLI::NonNegativeNumber);
    itr_cmd->add_option("--commands", itr_args.commands, "Commands issued (default 2 per letter)")
        ->check(CLI::NonNegativeNumber);
    itr_cmd->add_option("--seconds", itr_args.seconds, "Elapsed seconds")->required();

    ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "Run the session gateway");
    auto* models_opt = serve_cmd->add_option("--models", serve_args.models, "Directory with ppm0.json..ppm3.json");
    auto* corpus_opt = serve_cmd->add_option("--corpus", serve_args.corpus, "Train orders 0-3 at startup instead");
    models_opt->excludes(corpus_opt);
    serve_cmd->add_option("--host", serve_args.host, "Bind address");
    serve_cmd->add_option("--port", serve_args.port, "Port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--dwell-ms", serve_args.dwell_ms, "Default dwell time")->check(CLI::PositiveNumber);
    serve_cmd->add_option("--static", serve_args.static_dir, "Serve UI assets from this directory");
    serve_cmd->add_option("--transcripts", serve_args.transcripts, "Write ended-session transcripts here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*train_cmd) return run_train(train_args);
        if (*sim_cmd) {
            if (!sim_args.text && sim_args.sentences.empty()) throw UsageError("simulate needs --text or --sentences");
            return run_simulate(sim_args);
        }
        if (*bench_cmd) return run_bench(bench_args);
        if (*itr_cmd) return run_itr(itr_args);
        if (*serve_cmd) {
            if (serve_args.models.empty() && serve_args.corpus.empty()) {
                throw UsageError("serve needs --models or --corpus");
            }
            return run_serve(serve_args);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
