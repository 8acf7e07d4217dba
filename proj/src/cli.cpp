#include "fairembed/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fairembed/bias_eval.hpp"
#include "fairembed/corpus.hpp"
#include "fairembed/embedding.hpp"
#include "fairembed/errors.hpp"
#include "fairembed/hard_debias.hpp"
#include "fairembed/lexicon.hpp"

namespace fairembed::cli {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    if (value.empty()) throw ConfigError(key + ": empty value");
    std::uint64_t out = 0;
    for (char c : value) {
        if (c < '0' || c > '9')
            throw ConfigError(key + ": expected integer, got '" + value + "'");
        out = out * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return out;
}

double parse_f64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    double out = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(key + ": expected number, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

void apply_config_entry(TrainingConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "dim")
        cfg.dim = parse_u64(key, value);
    else if (key == "window")
        cfg.window = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "epochs")
        cfg.epochs = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "batch")
        cfg.batch = parse_u64(key, value);
    else if (key == "negatives")
        cfg.negatives = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "learning_rate")
        cfg.learning_rate = parse_f64(key, value);
    else if (key == "subsample_t")
        cfg.subsample_t = parse_f64(key, value);
    else if (key == "ege_enabled")
        cfg.ege_enabled = parse_bool(key, value);
    else if (key == "ege_lambda")
        cfg.ege_lambda = parse_f64(key, value);
    else if (key == "seed")
        cfg.seed = parse_u64(key, value);
    else if (key == "threads")
        cfg.threads = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "min_count")
        cfg.min_count = parse_u64(key, value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

std::map<std::string, std::string> config_as_map(const TrainingConfig& cfg) {
    std::map<std::string, std::string> m;
    m["dim"] = std::to_string(cfg.dim);
    m["window"] = std::to_string(cfg.window);
    m["epochs"] = std::to_string(cfg.epochs);
    m["batch"] = std::to_string(cfg.batch);
    m["negatives"] = std::to_string(cfg.negatives);
    m["learning_rate"] = format_value(cfg.learning_rate);
    m["subsample_t"] = format_value(cfg.subsample_t);
    m["ege_enabled"] = cfg.ege_enabled ? "true" : "false";
    m["ege_lambda"] = format_value(cfg.ege_lambda);
    m["seed"] = std::to_string(cfg.seed);
    m["threads"] = std::to_string(cfg.threads);
    m["min_count"] = std::to_string(cfg.min_count);
    return m;
}

// Whitespace-separated lowercase word list (stoplists, projection words).
std::vector<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) {
        for (char& c : w)
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
        out.push_back(w);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::uint64_t h = 14695981039346656037ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

void RunManifest::add_input(const std::string& role, const std::string& path) {
    input_digests[role] = "fnv1a64:" + hex64(fnv1a64_file(path));
}

std::string RunManifest::serialize(const std::string& output_path) const {
    std::map<std::string, std::string> fields;
    fields["subcommand"] = subcommand;
    fields["tool_version"] = kToolVersion;
    fields["seed"] = std::to_string(seed);
    fields["output"] = output_path;
    for (const auto& [k, v] : config) fields["config." + k] = v;
    for (const auto& [k, v] : input_digests) fields["input." + k] = v;
    std::string out;
    for (const auto& [k, v] : fields) out += k + "=" + v + "\n";
    return out;
}

void RunManifest::write_for(const std::string& output_path) const {
    write_text(output_path + ".manifest", serialize(output_path));
}

TrainingConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides) {
    TrainingConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open config file: " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) +
                                  " is not 'key = value'");
            apply_config_entry(cfg, trim(line.substr(0, eq)),
                               trim(line.substr(eq + 1)));
        }
    }
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "' is not key=value");
        apply_config_entry(cfg, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

namespace {

struct PrepOpts {
    std::string input, out;
    std::string merge_pairs, mask_names, ssa_dir, name_exclude, emit_names;
    std::string professions;
    std::uint64_t name_threshold = 10000;
    std::string mask_token = "<ent>";
};

int run_prep(const PrepOpts& o) {
    RunManifest manifest;
    manifest.subcommand = "prep";
    manifest.add_input("corpus", o.input);
    manifest.config["mask_token"] = o.mask_token;

    FileTokenStream base(o.input);
    const TokenStream* current = &base;

    std::optional<PairLexicon> lex;
    std::optional<MergeGenderPairs> merged;
    if (!o.merge_pairs.empty()) {
        lex = load_pair_lexicon(o.merge_pairs);
        manifest.add_input("pairs", o.merge_pairs);
        merged.emplace(*current, *lex);
        current = &*merged;
    }

    std::optional<NameSet> names;
    if (!o.mask_names.empty()) {
        names = load_name_set(o.mask_names);
        manifest.add_input("names", o.mask_names);
    } else if (!o.ssa_dir.empty()) {
        // default exclusions: pair-lexicon and profession tokens, plus the
        // user stoplist, so name/word homographs are never masked
        std::set<std::string> exclusions;
        if (lex)
            for (const auto& tok : lex->all_tokens()) exclusions.insert(tok);
        if (!o.professions.empty()) {
            for (const auto& e : load_professions(o.professions).entries)
                exclusions.insert(e.token);
            manifest.add_input("professions", o.professions);
        }
        if (!o.name_exclude.empty()) {
            for (const auto& w : load_word_list(o.name_exclude))
                exclusions.insert(w);
            manifest.add_input("name_exclude", o.name_exclude);
        }
        names = build_name_set(o.ssa_dir, o.name_threshold, exclusions);
        manifest.config["name_threshold"] = std::to_string(o.name_threshold);
    }

    std::optional<MaskNames> masked;
    if (names) {
        masked.emplace(*current, *names, o.mask_token);
        current = &*masked;
        std::cout << "masked_names=" << names->names.size() << "\n";
    }

    write_token_stream(*current, o.out);
    manifest.write_for(o.out);
    if (!o.emit_names.empty() && names) {
        write_text(o.emit_names, save_name_set(*names));
        manifest.write_for(o.emit_names);
    }
    std::cout << "out=" << o.out << "\n";
    return 0;
}

struct TrainOpts {
    std::string corpus, out, config, pairs;
    std::uint64_t dim = 0, batch = 0, seed = 0, min_count = 0;
    unsigned window = 0, epochs = 0, negatives = 0, threads = 0;
    double lr = 0.0, subsample = 0.0, ege_lambda = 0.0;
    bool ege = false;
    bool print_stats = false;
    std::vector<std::string> overrides;
};

int run_train(const TrainOpts& o) {
    TrainingConfig cfg = load_config(o.config, o.overrides);
    if (cfg.ege_enabled && o.pairs.empty())
        throw ConfigError("--ege requires --pairs for gender labels");

    RunManifest manifest;
    manifest.subcommand = "train";
    manifest.seed = cfg.seed;
    manifest.add_input("corpus", o.corpus);
    if (!o.config.empty()) manifest.add_input("config", o.config);
    if (!o.pairs.empty()) manifest.add_input("pairs", o.pairs);
    manifest.config = config_as_map(cfg);

    FileTokenStream corpus(o.corpus);
    Vocabulary vocab = Vocabulary::build(corpus, cfg.min_count);

    GenderLabeling labeling = GenderLabeling::all_neutral(vocab);
    if (!o.pairs.empty())
        labeling = GenderLabeling::from_lexicon(vocab,
                                                load_pair_lexicon(o.pairs));

    TrainStats stats;
    EmbeddingModel model = train(corpus, vocab, labeling, cfg, &stats);
    save_word2vec_text(model.to_embedding(), o.out);
    manifest.write_for(o.out);

    std::cout << "vocab_size=" << vocab.size() << "\n"
              << "total_tokens=" << vocab.total_tokens() << "\n"
              << "examples=" << stats.examples << "\n";
    if (o.print_stats)
        for (std::size_t e = 0; e < stats.epoch_cbow_loss.size(); ++e)
            std::cout << "epoch" << e
                      << "_cbow_loss=" << format_value(stats.epoch_cbow_loss[e])
                      << "\n"
                      << "epoch" << e
                      << "_ege_loss=" << format_value(stats.epoch_ege_loss[e])
                      << "\n";
    std::cout << "out=" << o.out << "\n";
    return 0;
}

struct DebiasOpts {
    std::string emb, pairs, equalize_pairs, exclude, out;
};

int run_debias(const DebiasOpts& o) {
    RunManifest manifest;
    manifest.subcommand = "debias";
    manifest.add_input("embedding", o.emb);
    manifest.add_input("pairs", o.pairs);

    Embedding emb = load_word2vec_text(o.emb);
    PairLexicon pairs = load_pair_lexicon(o.pairs);
    PairLexicon eq_pairs = pairs;
    if (!o.equalize_pairs.empty()) {
        eq_pairs = load_pair_lexicon(o.equalize_pairs);
        manifest.add_input("equalize", o.equalize_pairs);
    }

    std::unordered_set<std::string> exclude;
    for (const auto& t : pairs.all_tokens()) exclude.insert(t);
    for (const auto& t : eq_pairs.all_tokens()) exclude.insert(t);
    if (!o.exclude.empty()) {
        for (const auto& w : load_word_list(o.exclude)) exclude.insert(w);
        manifest.add_input("exclude", o.exclude);
    }

    GenderDirection dir = gender_direction(emb, pairs);
    std::vector<std::string> skipped;
    Embedding result = neutralize(emb, dir, exclude, &skipped);
    result = equalize(result, dir, eq_pairs);
    save_word2vec_text(result, o.out);
    manifest.write_for(o.out);

    std::size_t excluded_present = 0;
    for (const auto& t : exclude)
        if (emb.contains(t)) ++excluded_present;
    std::cout << "neutralized="
              << (emb.size() - excluded_present - skipped.size()) << "\n"
              << "equalized_pairs=" << eq_pairs.pairs.size() << "\n"
              << "skipped_collinear=" << skipped.size() << "\n"
              << "out=" << o.out << "\n";
    return 0;
}

struct ClusterOpts {
    std::string emb, professions, csv;
    unsigned runs = 15;
    std::uint64_t seed = 0;
};

int run_eval_cluster(const ClusterOpts& o) {
    Embedding emb = load_word2vec_text(o.emb);
    ProfessionSet prof = load_professions(o.professions);
    ClusterReport report = cluster_accuracy(emb, prof, o.runs, o.seed);

    std::cout << "mean_accuracy=" << format_value(report.mean_accuracy) << "\n"
              << "std_dev=" << format_value(report.std_dev) << "\n"
              << "runs=" << report.per_run.size() << "\n"
              << "resolved=" << report.used_tokens.size() << "\n"
              << "dropped=" << report.dropped.size() << "\n";
    if (!o.csv.empty()) {
        std::string csv = "seed,accuracy\n";
        for (const auto& run : report.per_run)
            csv += std::to_string(run.seed) + "," +
                   format_value(run.accuracy) + "\n";
        write_text(o.csv, csv);
        RunManifest manifest;
        manifest.subcommand = "eval-cluster";
        manifest.seed = o.seed;
        manifest.add_input("embedding", o.emb);
        manifest.add_input("professions", o.professions);
        manifest.config["runs"] = std::to_string(o.runs);
        manifest.write_for(o.csv);
    }
    return 0;
}

struct SemBiasOpts {
    std::string emb, sembias;
    std::vector<std::string> direction_pair{"he", "she"};
};

int run_eval_sembias(const SemBiasOpts& o) {
    Embedding emb = load_word2vec_text(o.emb);
    SemBiasSet set = load_sembias(o.sembias);
    SemBiasResult res = sembias_eval(
        emb, set, {o.direction_pair.at(0), o.direction_pair.at(1)});
    std::cout << "D=" << format_value(res.definition_fraction) << "\n"
              << "S=" << format_value(res.stereotype_fraction) << "\n"
              << "evaluated=" << res.evaluated << "\n"
              << "skipped=" << res.skipped << "\n";
    return 0;
}

struct WeatOpts_ {
    std::string emb, spec;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 12345;
};

int run_eval_weat(const WeatOpts_& o) {
    Embedding emb = load_word2vec_text(o.emb);
    WeatSpec spec = load_weat_spec(o.spec);
    WeatOptions opts;
    opts.samples = o.samples;
    opts.seed = o.seed;
    WeatResult res = weat(emb, spec, opts);
    std::cout << "name=" << spec.name << "\n"
              << "statistic=" << format_value(res.statistic) << "\n"
              << "effect_size=" << format_value(res.effect_size) << "\n"
              << "p_value=" << format_value(res.p_value) << "\n"
              << "mode=" << (res.exact ? "exact" : "monte_carlo") << "\n"
              << "samples=" << res.samples << "\n";
    return 0;
}

struct NeighborOpts {
    std::string emb, word, pairs, csv;
    unsigned k = 20;
};

int run_eval_neighbors(const NeighborOpts& o) {
    Embedding emb = load_word2vec_text(o.emb);
    PairLexicon pairs = load_pair_lexicon(o.pairs);
    GenderDirection dir = gender_direction(emb, pairs);
    auto rows = neighbors(emb, o.word, o.k, dir);

    std::string csv = "rank,word,cosine,bias\n";
    for (const auto& r : rows)
        csv += std::to_string(r.rank) + "," + r.word + "," +
               format_value(r.cosine) + "," +
               format_value(r.bias_by_projection) + "\n";
    std::cout << "word=" << o.word << "\n"
              << "k=" << o.k << "\n"
              << csv;
    if (!o.csv.empty()) {
        write_text(o.csv, csv);
        RunManifest manifest;
        manifest.subcommand = "eval-neighbors";
        manifest.add_input("embedding", o.emb);
        manifest.add_input("pairs", o.pairs);
        manifest.config["word"] = o.word;
        manifest.config["k"] = std::to_string(o.k);
        manifest.write_for(o.csv);
    }
    return 0;
}

struct ProximityOpts {
    std::string emb, word, pairs, mode = "direct";
    unsigned k = 100;
    double tau = 0.2;
};

int run_eval_proximity(const ProximityOpts& o) {
    Embedding emb = load_word2vec_text(o.emb);
    PairLexicon pairs = load_pair_lexicon(o.pairs);
    GenderDirection dir = gender_direction(emb, pairs);
    if (o.mode != "direct" && o.mode != "indirect")
        throw ConfigError("--mode must be direct or indirect");
    ProximityMode mode = o.mode == "direct" ? ProximityMode::direct
                                            : ProximityMode::indirect;
    double value = proximity_bias(emb, dir, o.word, o.k, o.tau, mode);
    std::cout << "proximity_bias=" << format_value(value) << "\n"
              << "word=" << o.word << "\n"
              << "k=" << o.k << "\n"
              << "tau=" << format_value(o.tau) << "\n"
              << "mode=" << o.mode << "\n";
    return 0;
}

struct ProjectionOpts {
    std::string emb, words, professions, out;
};

int run_export_projection(const ProjectionOpts& o) {
    Embedding emb = load_word2vec_text(o.emb);
    std::vector<std::string> words;
    std::map<std::string, std::string> labels;
    RunManifest manifest;
    manifest.subcommand = "export-projection";
    manifest.add_input("embedding", o.emb);
    if (!o.professions.empty()) {
        ProfessionSet prof = load_professions(o.professions);
        for (const auto& e : prof.entries) {
            words.push_back(e.token);
            labels[e.token] = to_string(e.stereotype);
        }
        manifest.add_input("professions", o.professions);
    } else if (!o.words.empty()) {
        words = load_word_list(o.words);
        manifest.add_input("words", o.words);
    } else {
        throw ConfigError("export-projection needs --words or --professions");
    }

    auto projected = pca_project(emb, words);
    std::string csv = "word,x,y,label\n";
    for (const auto& p : projected)
        csv += p.word + "," + format_value(p.x) + "," + format_value(p.y) +
               "," + (labels.count(p.word) ? labels[p.word] : "") + "\n";
    write_text(o.out, csv);
    manifest.write_for(o.out);
    std::cout << "projected=" << projected.size() << "\n"
              << "out=" << o.out << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"train, debias, and audit static word embeddings"};
    app.name("fairembed");
    app.require_subcommand(1);

    PrepOpts prep;
    auto* prep_cmd = app.add_subcommand(
        "prep", "tokenize a corpus and apply pair-merge / name-mask transforms");
    prep_cmd->add_option("--input", prep.input, "raw or tokenized corpus")
        ->required();
    prep_cmd->add_option("--out", prep.out, "output token file")->required();
    prep_cmd->add_option("--merge-pairs", prep.merge_pairs,
                         "pair lexicon; merge both members into one token");
    prep_cmd->add_option("--mask-names", prep.mask_names,
                         "name list file; mask listed names");
    prep_cmd->add_option("--ssa-dir", prep.ssa_dir,
                         "SSA yobYYYY.txt directory; build the name set");
    prep_cmd->add_option("--name-threshold", prep.name_threshold,
                         "occurrence threshold for --ssa-dir");
    prep_cmd->add_option("--name-exclude", prep.name_exclude,
                         "stoplist of words never masked");
    prep_cmd->add_option("--professions", prep.professions,
                         "profession list whose tokens are never masked");
    prep_cmd->add_option("--mask-token", prep.mask_token, "mask token");
    prep_cmd->add_option("--emit-names", prep.emit_names,
                         "also write the resolved name list");

    TrainOpts tr;
    auto* train_cmd =
        app.add_subcommand("train", "train CBOW embeddings, optionally with "
                                    "the explicit-gender-encoding loss");
    train_cmd->add_option("--corpus", tr.corpus, "token corpus")->required();
    train_cmd->add_option("--out", tr.out, "embedding output")->required();
    train_cmd->add_option("--config", tr.config, "key = value config file");
    train_cmd->add_option("--pairs", tr.pairs, "pair lexicon for EGE labels");
    train_cmd->add_option("--dim", tr.dim, "embedding width");
    train_cmd->add_option("--window", tr.window, "context radius");
    train_cmd->add_option("--epochs", tr.epochs, "training epochs");
    train_cmd->add_option("--batch", tr.batch,
                          "examples between learning-rate updates");
    train_cmd->add_option("--negatives", tr.negatives, "negative samples");
    train_cmd->add_option("--lr", tr.lr, "initial learning rate");
    train_cmd->add_option("--subsample", tr.subsample,
                          "frequent-word subsampling threshold");
    train_cmd->add_flag("--ege", tr.ege, "enable the gender-encoding loss");
    train_cmd->add_option("--ege-lambda", tr.ege_lambda, "EGE loss weight");
    train_cmd->add_option("--seed", tr.seed, "random seed");
    train_cmd->add_option("--threads", tr.threads,
                          "worker threads (1 = deterministic)");
    train_cmd->add_option("--min-count", tr.min_count, "vocabulary floor");
    train_cmd->add_flag("--stats", tr.print_stats, "print per-epoch losses");

    DebiasOpts db;
    auto* debias_cmd = app.add_subcommand(
        "debias", "hard-debias an embedding (neutralize + equalize)");
    debias_cmd->add_option("--emb", db.emb, "embedding file")->required();
    debias_cmd->add_option("--pairs", db.pairs, "definitional pairs")
        ->required();
    debias_cmd->add_option("--equalize", db.equalize_pairs,
                           "equalize pairs (default: --pairs)");
    debias_cmd->add_option("--exclude", db.exclude,
                           "extra words to leave untouched");
    debias_cmd->add_option("--out", db.out, "output embedding")->required();

    ClusterOpts cl;
    auto* cluster_cmd = app.add_subcommand(
        "eval-cluster", "k-means stereotype clustering accuracy");
    cluster_cmd->add_option("--emb", cl.emb, "embedding file")->required();
    cluster_cmd->add_option("--professions", cl.professions,
                            "profession list 'token m|f'")
        ->required();
    cluster_cmd->add_option("--runs", cl.runs, "k-means restarts");
    cluster_cmd->add_option("--seed", cl.seed, "base seed");
    cluster_cmd->add_option("--csv", cl.csv, "per-run CSV output");

    SemBiasOpts sb;
    auto* sembias_cmd =
        app.add_subcommand("eval-sembias", "SemBias analogy evaluation");
    sembias_cmd->add_option("--emb", sb.emb, "embedding file")->required();
    sembias_cmd->add_option("--sembias", sb.sembias, "SemBias instance file")
        ->required();
    sembias_cmd
        ->add_option("--direction-pair", sb.direction_pair,
                     "male female direction words")
        ->expected(2);

    WeatOpts_ we;
    auto* weat_cmd = app.add_subcommand(
        "eval-weat", "word embedding association test with permutation p");
    weat_cmd->add_option("--emb", we.emb, "embedding file")->required();
    weat_cmd->add_option("--spec", we.spec, "WEAT spec JSON")->required();
    weat_cmd->add_option("--samples", we.samples, "Monte Carlo samples");
    weat_cmd->add_option("--seed", we.seed, "Monte Carlo seed");

    NeighborOpts nb;
    auto* neighbors_cmd = app.add_subcommand(
        "eval-neighbors", "top-k neighbors with bias-by-projection");
    neighbors_cmd->add_option("--emb", nb.emb, "embedding file")->required();
    neighbors_cmd->add_option("--word", nb.word, "query word")->required();
    neighbors_cmd->add_option("--k", nb.k, "neighbor count");
    neighbors_cmd->add_option("--pairs", nb.pairs, "definitional pairs")
        ->required();
    neighbors_cmd->add_option("--csv", nb.csv, "CSV output");

    ProximityOpts px;
    auto* proximity_cmd = app.add_subcommand(
        "eval-proximity", "fraction of biased top-k neighbors");
    proximity_cmd->add_option("--emb", px.emb, "embedding file")->required();
    proximity_cmd->add_option("--word", px.word, "query word")->required();
    proximity_cmd->add_option("--k", px.k, "neighbor count");
    proximity_cmd->add_option("--tau", px.tau, "bias threshold");
    proximity_cmd->add_option("--pairs", px.pairs, "definitional pairs")
        ->required();
    proximity_cmd->add_option("--mode", px.mode, "direct | indirect");

    ProjectionOpts pj;
    auto* projection_cmd = app.add_subcommand(
        "export-projection", "2-D PCA coordinates for a word list");
    projection_cmd->add_option("--emb", pj.emb, "embedding file")->required();
    projection_cmd->add_option("--words", pj.words, "word list file");
    projection_cmd->add_option("--professions", pj.professions,
                               "profession list (adds stereotype labels)");
    projection_cmd->add_option("--out", pj.out, "CSV output")->required();

    std::vector<const char*> argv;
    argv.push_back("fairembed");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()),
                  const_cast<char**>(argv.data()));
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        // Flags present on the command line override the config file.
        if (train_cmd->parsed()) {
            auto& ov = tr.overrides;
            if (train_cmd->count("--dim"))
                ov.push_back("dim=" + std::to_string(tr.dim));
            if (train_cmd->count("--window"))
                ov.push_back("window=" + std::to_string(tr.window));
            if (train_cmd->count("--epochs"))
                ov.push_back("epochs=" + std::to_string(tr.epochs));
            if (train_cmd->count("--batch"))
                ov.push_back("batch=" + std::to_string(tr.batch));
            if (train_cmd->count("--negatives"))
                ov.push_back("negatives=" + std::to_string(tr.negatives));
            if (train_cmd->count("--lr"))
                ov.push_back("learning_rate=" + format_value(tr.lr));
            if (train_cmd->count("--subsample"))
                ov.push_back("subsample_t=" + format_value(tr.subsample));
            if (train_cmd->count("--ege")) ov.push_back("ege_enabled=true");
            if (train_cmd->count("--ege-lambda"))
                ov.push_back("ege_lambda=" + format_value(tr.ege_lambda));
            if (train_cmd->count("--seed"))
                ov.push_back("seed=" + std::to_string(tr.seed));
            if (train_cmd->count("--threads"))
                ov.push_back("threads=" + std::to_string(tr.threads));
            if (train_cmd->count("--min-count"))
                ov.push_back("min_count=" + std::to_string(tr.min_count));
            return run_train(tr);
        }
        if (prep_cmd->parsed()) return run_prep(prep);
        if (debias_cmd->parsed()) return run_debias(db);
        if (cluster_cmd->parsed()) return run_eval_cluster(cl);
        if (sembias_cmd->parsed()) return run_eval_sembias(sb);
        if (weat_cmd->parsed()) return run_eval_weat(we);
        if (neighbors_cmd->parsed()) return run_eval_neighbors(nb);
        if (proximity_cmd->parsed()) return run_eval_proximity(px);
        if (projection_cmd->parsed()) return run_export_projection(pj);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace fairembed::cli
