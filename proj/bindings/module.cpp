#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "fairembed/bias_eval.hpp"
#include "fairembed/cli.hpp"
#include "fairembed/corpus.hpp"
#include "fairembed/embedding.hpp"
#include "fairembed/errors.hpp"
#include "fairembed/hard_debias.hpp"
#include "fairembed/lexicon.hpp"
#include "fairembed/trainer.hpp"

namespace py = pybind11;
using namespace fairembed;

namespace {

py::array_t<double> to_numpy(std::span<const double> v) {
    py::array_t<double> out(
        std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    auto buf = out.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < buf.shape(0); ++i)
        buf(i) = v[static_cast<std::size_t>(i)];
    return out;
}

py::array_t<double> matrix_to_numpy(const Mat& m) {
    py::array_t<double> out(
        std::vector<py::ssize_t>{static_cast<py::ssize_t>(m.rows()),
                                 static_cast<py::ssize_t>(m.cols())});
    auto buf = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < buf.shape(0); ++i)
        for (py::ssize_t j = 0; j < buf.shape(1); ++j)
            buf(i, j) = m.at(static_cast<std::size_t>(i),
                             static_cast<std::size_t>(j));
    return out;
}

py::dict weat_dict(const WeatResult& res) {
    py::dict out;
    out["statistic"] = res.statistic;
    out["effect_size"] = res.effect_size;
    out["p_value"] = res.p_value;
    out["exact"] = res.exact;
    out["samples"] = res.samples;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Train, hard-debias, and audit static word embeddings.";

    py::register_exception<IoError>(m, "IoError", PyExc_IOError);
    py::register_exception<Error>(m, "FairembedError", PyExc_ValueError);

    py::class_<GenderDirection>(m, "GenderDirection")
        .def_property_readonly(
            "vector", [](const GenderDirection& d) { return to_numpy(d.g); });

    py::class_<Embedding>(m, "Embedding")
        .def_static("load", &load_word2vec_text, py::arg("path"))
        .def(
            "save",
            [](const Embedding& e, const std::string& path) {
                save_word2vec_text(e, path);
            },
            py::arg("path"))
        .def("__len__", &Embedding::size)
        .def("__contains__",
             [](const Embedding& e, const std::string& w) {
                 return e.contains(w);
             })
        .def_property_readonly("dim", &Embedding::dim)
        .def("tokens", &Embedding::tokens)
        .def(
            "vector",
            [](const Embedding& e, const std::string& w) {
                return to_numpy(e.vector(w));
            },
            py::arg("word"))
        .def("matrix",
             [](const Embedding& e) { return matrix_to_numpy(e.matrix()); })
        .def("unit_normalized", &Embedding::unit_normalized);

    m.def(
        "tokenize", [](const std::string& text) { return tokenize(text); },
        py::arg("text"),
        "Lowercase, split on whitespace, strip characters outside "
        "[a-z0-9_<>].");

    m.def(
        "prep",
        [](const std::string& input, const std::string& output,
           const std::string& merge_pairs, const std::string& mask_names,
           const std::string& mask_token) {
            FileTokenStream base(input);
            const TokenStream* current = &base;
            std::optional<PairLexicon> lex;
            std::optional<MergeGenderPairs> merged;
            if (!merge_pairs.empty()) {
                lex = load_pair_lexicon(merge_pairs);
                merged.emplace(*current, *lex);
                current = &*merged;
            }
            std::optional<NameSet> names;
            std::optional<MaskNames> masked;
            if (!mask_names.empty()) {
                names = load_name_set(mask_names);
                masked.emplace(*current, *names, mask_token);
                current = &*masked;
            }
            write_token_stream(*current, output);
        },
        py::arg("input"), py::arg("output"), py::arg("merge_pairs") = "",
        py::arg("mask_names") = "", py::arg("mask_token") = "<ent>",
        "Tokenize a corpus, optionally merging gendered pairs and masking "
        "names, and write a plain token file.");

    m.def(
        "train",
        [](const std::string& corpus_path, const std::string& pairs,
           std::size_t dim, unsigned window, unsigned epochs,
           std::uint64_t batch, unsigned negatives, double learning_rate,
           double subsample_t, bool ege, double ege_lambda, std::uint64_t seed,
           unsigned threads, std::uint64_t min_count) {
            TrainingConfig cfg;
            cfg.dim = dim;
            cfg.window = window;
            cfg.epochs = epochs;
            cfg.batch = batch;
            cfg.negatives = negatives;
            cfg.learning_rate = learning_rate;
            cfg.subsample_t = subsample_t;
            cfg.ege_enabled = ege;
            cfg.ege_lambda = ege_lambda;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.min_count = min_count;
            cfg.validate();
            if (cfg.ege_enabled && pairs.empty())
                throw ConfigError("ege requires a pairs file");
            FileTokenStream corpus(corpus_path);
            Vocabulary vocab = Vocabulary::build(corpus, cfg.min_count);
            GenderLabeling labeling =
                pairs.empty() ? GenderLabeling::all_neutral(vocab)
                              : GenderLabeling::from_lexicon(
                                    vocab, load_pair_lexicon(pairs));
            py::gil_scoped_release release;
            EmbeddingModel model = train(corpus, vocab, labeling, cfg);
            return model.to_embedding();
        },
        py::arg("corpus"), py::arg("pairs") = "", py::arg("dim") = 100,
        py::arg("window") = 5, py::arg("epochs") = 5, py::arg("batch") = 4096,
        py::arg("negatives") = 5, py::arg("learning_rate") = 0.025,
        py::arg("subsample_t") = 1e-4, py::arg("ege") = false,
        py::arg("ege_lambda") = 0.5, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("min_count") = 5,
        "Train CBOW negative-sampling embeddings, optionally with the "
        "explicit-gender-encoding loss, and return the embedding.");

    m.def(
        "gender_direction",
        [](const Embedding& emb, const std::string& pairs_path) {
            return gender_direction(emb, load_pair_lexicon(pairs_path));
        },
        py::arg("embedding"), py::arg("pairs"),
        "PCA gender direction from definitional pair residuals.");

    m.def(
        "hard_debias",
        [](const Embedding& emb, const std::string& pairs_path,
           const std::string& equalize_path,
           const std::vector<std::string>& extra_exclude) {
            PairLexicon pairs = load_pair_lexicon(pairs_path);
            PairLexicon eq = equalize_path.empty()
                                 ? pairs
                                 : load_pair_lexicon(equalize_path);
            std::unordered_set<std::string> exclude(extra_exclude.begin(),
                                                    extra_exclude.end());
            for (const auto& t : pairs.all_tokens()) exclude.insert(t);
            for (const auto& t : eq.all_tokens()) exclude.insert(t);
            GenderDirection dir = gender_direction(emb, pairs);
            Embedding out = neutralize(emb, dir, exclude);
            return equalize(out, dir, eq);
        },
        py::arg("embedding"), py::arg("pairs"), py::arg("equalize_pairs") = "",
        py::arg("exclude") = std::vector<std::string>{},
        "Neutralize-and-equalize post-processing; returns a new embedding.");

    m.def(
        "weat",
        [](const Embedding& emb, const std::string& spec_path,
           std::uint64_t samples, std::uint64_t seed) {
            WeatOptions opts;
            opts.samples = samples;
            opts.seed = seed;
            return weat_dict(weat(emb, load_weat_spec(spec_path), opts));
        },
        py::arg("embedding"), py::arg("spec"), py::arg("samples") = 100000,
        py::arg("seed") = 12345, "WEAT from a JSON spec file.");

    m.def(
        "weat_sets",
        [](const Embedding& emb, const std::vector<std::string>& X,
           const std::vector<std::string>& Y, const std::vector<std::string>& A,
           const std::vector<std::string>& B, std::uint64_t samples,
           std::uint64_t seed) {
            WeatSpec spec;
            spec.name = "inline";
            spec.X = X;
            spec.Y = Y;
            spec.A = A;
            spec.B = B;
            WeatOptions opts;
            opts.samples = samples;
            opts.seed = seed;
            return weat_dict(weat(emb, spec, opts));
        },
        py::arg("embedding"), py::arg("X"), py::arg("Y"), py::arg("A"),
        py::arg("B"), py::arg("samples") = 100000, py::arg("seed") = 12345,
        "WEAT from inline word sets.");

    m.def(
        "cluster_accuracy",
        [](const Embedding& emb, const std::string& professions_path,
           unsigned runs, std::uint64_t seed) {
            ClusterReport report = cluster_accuracy(
                emb, load_professions(professions_path), runs, seed);
            py::dict out;
            out["mean_accuracy"] = report.mean_accuracy;
            out["std_dev"] = report.std_dev;
            out["resolved"] = report.used_tokens.size();
            out["dropped"] = report.dropped;
            py::list per_run;
            for (const auto& run : report.per_run)
                per_run.append(py::make_tuple(run.seed, run.accuracy));
            out["per_run"] = per_run;
            return out;
        },
        py::arg("embedding"), py::arg("professions"), py::arg("runs") = 15,
        py::arg("seed") = 0,
        "k-means stereotype clustering accuracy over repeated runs.");

    m.def(
        "sembias",
        [](const Embedding& emb, const std::string& path,
           const std::pair<std::string, std::string>& direction_pair) {
            SemBiasResult res =
                sembias_eval(emb, load_sembias(path), direction_pair);
            py::dict out;
            out["D"] = res.definition_fraction;
            out["S"] = res.stereotype_fraction;
            out["evaluated"] = res.evaluated;
            out["skipped"] = res.skipped;
            return out;
        },
        py::arg("embedding"), py::arg("sembias"),
        py::arg("direction_pair") =
            std::make_pair(std::string("he"), std::string("she")),
        "SemBias definitional/stereotype analogy fractions.");

    m.def(
        "direct_bias",
        [](const Embedding& emb, const GenderDirection& dir,
           const std::string& word) { return direct_bias(emb, dir, word); },
        py::arg("embedding"), py::arg("direction"), py::arg("word"));

    m.def(
        "indirect_bias",
        [](const Embedding& emb, const GenderDirection& dir,
           const std::string& w, const std::string& v) {
            return indirect_bias(emb, dir, w, v);
        },
        py::arg("embedding"), py::arg("direction"), py::arg("w"),
        py::arg("v"));

    m.def(
        "neighbors",
        [](const Embedding& emb, const std::string& word, unsigned k,
           const GenderDirection& dir) {
            py::list out;
            for (const auto& row : neighbors(emb, word, k, dir))
                out.append(py::make_tuple(row.rank, row.word, row.cosine,
                                          row.bias_by_projection));
            return out;
        },
        py::arg("embedding"), py::arg("word"), py::arg("k"),
        py::arg("direction"),
        "Top-k neighbors as (rank, word, cosine, bias_by_projection).");

    m.def(
        "proximity_bias",
        [](const Embedding& emb, const GenderDirection& dir,
           const std::string& word, unsigned k, double tau,
           const std::string& mode) {
            if (mode != "direct" && mode != "indirect")
                throw ConfigError("mode must be direct or indirect");
            return proximity_bias(emb, dir, word, k, tau,
                                  mode == "direct" ? ProximityMode::direct
                                                   : ProximityMode::indirect);
        },
        py::arg("embedding"), py::arg("direction"), py::arg("word"),
        py::arg("k") = 100, py::arg("tau") = 0.2, py::arg("mode") = "direct",
        "Fraction of biased top-k neighbors.");

    m.def(
        "pca_project",
        [](const Embedding& emb, const std::vector<std::string>& words) {
            py::list out;
            for (const auto& p : pca_project(emb, words))
                out.append(py::make_tuple(p.word, p.x, p.y));
            return out;
        },
        py::arg("embedding"), py::arg("words"),
        "Mean-centered 2-D PCA coordinates as (word, x, y).");

    m.def(
        "cli", [](const std::vector<std::string>& args) { return cli::run(args); },
        py::arg("args"),
        "Invoke the command-line front end; returns its exit code.");

    m.attr("__version__") = cli::kToolVersion;
}
