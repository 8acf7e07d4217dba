#include "fairembed/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "fairembed/errors.hpp"
#include "fairembed/rng.hpp"

namespace fairembed {

namespace {

constexpr std::size_t kMaxSentence = 1000;
constexpr double kLrFloorFraction = 1e-4;

// Relaxed element access; hogwild workers race on rows by contract, and
// these keep that free of undefined behavior while compiling to plain moves.
inline double rload(const double& x) {
    return std::atomic_ref<double>(const_cast<double&>(x))
        .load(std::memory_order_relaxed);
}
inline void rstore(double& x, double v) {
    std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
}
inline void radd(double& x, double v) { rstore(x, rload(x) + v); }

inline double sigmoid(double x) {
    if (x >= 0.0) {
        double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow at either tail.
inline double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

struct CbowScratch {
    std::vector<double> hidden;       // mean of context rows
    std::vector<double> hidden_grad;  // dL/dh
    std::vector<double> out_scale;    // dL/df per output row (center first)
};

// Forward pass shared by the pure-gradient entry point and the training
// update; fills scratch with everything the backward needs.
double cbow_forward(const EmbeddingModel& m, std::uint32_t center,
                    std::span<const std::uint32_t> context,
                    std::span<const std::uint32_t> negatives,
                    CbowScratch& s) {
    const std::size_t dim = m.dim();
    s.hidden.assign(dim, 0.0);
    s.hidden_grad.assign(dim, 0.0);
    s.out_scale.assign(1 + negatives.size(), 0.0);

    for (std::uint32_t c : context) {
        const double* row = m.input.row(c);
        for (std::size_t d = 0; d < dim; ++d) s.hidden[d] += rload(row[d]);
    }
    const double inv = 1.0 / static_cast<double>(context.size());
    for (double& h : s.hidden) h *= inv;

    double loss = 0.0;
    for (std::size_t i = 0; i < 1 + negatives.size(); ++i) {
        const std::uint32_t row_idx = i == 0 ? center : negatives[i - 1];
        const double label = i == 0 ? 1.0 : 0.0;
        const double* row = m.output.row(row_idx);
        double f = 0.0;
        for (std::size_t d = 0; d < dim; ++d)
            f += rload(row[d]) * s.hidden[d];
        loss += i == 0 ? -log_sigmoid(f) : -log_sigmoid(-f);
        const double scale = sigmoid(f) - label;  // dL/df
        s.out_scale[i] = scale;
        for (std::size_t d = 0; d < dim; ++d)
            s.hidden_grad[d] += scale * rload(row[d]);
    }
    return loss;
}

// Applies one SGD step for the example in-place. The per-context-row input
// gradient is hidden_grad / |context|.
void cbow_apply(EmbeddingModel& m, std::uint32_t center,
                std::span<const std::uint32_t> context,
                std::span<const std::uint32_t> negatives, double lr,
                CbowScratch& s) {
    const std::size_t dim = m.dim();
    for (std::size_t i = 0; i < 1 + negatives.size(); ++i) {
        const std::uint32_t row_idx = i == 0 ? center : negatives[i - 1];
        double* row = m.output.row(row_idx);
        const double step = lr * s.out_scale[i];
        for (std::size_t d = 0; d < dim; ++d)
            radd(row[d], -step * s.hidden[d]);
    }
    const double inv = 1.0 / static_cast<double>(context.size());
    for (std::uint32_t c : context) {
        double* row = m.input.row(c);
        for (std::size_t d = 0; d < dim; ++d)
            radd(row[d], -lr * inv * s.hidden_grad[d]);
    }
}

struct EgeScratch {
    std::array<double, 3> probs{};
    std::array<double, 3> logit_grad{};  // dL/dz
};

double ege_forward(const EmbeddingModel& m, std::uint32_t center, Gender label,
                   double lambda, EgeScratch& s) {
    const std::size_t dim = m.dim();
    const double* v = m.input.row(center);
    std::array<double, 3> z;
    for (int k = 0; k < 3; ++k) {
        const double* w = m.ege_weights.row(k);
        double acc = rload(m.ege_bias[k]);
        for (std::size_t d = 0; d < dim; ++d) acc += rload(w[d]) * rload(v[d]);
        z[k] = acc;
    }
    const double zmax = std::max({z[0], z[1], z[2]});
    double denom = 0.0;
    for (int k = 0; k < 3; ++k) denom += std::exp(z[k] - zmax);
    const int target = static_cast<int>(label);
    const double loss =
        lambda * (std::log(denom) - (z[target] - zmax));
    for (int k = 0; k < 3; ++k) {
        s.probs[k] = std::exp(z[k] - zmax) / denom;
        s.logit_grad[k] = lambda * (s.probs[k] - (k == target ? 1.0 : 0.0));
    }
    return loss;
}

void ege_apply(EmbeddingModel& m, std::uint32_t center, double lr,
               EgeScratch& s) {
    const std::size_t dim = m.dim();
    double* v = m.input.row(center);
    // dL/dv = W^T dz must be read before W is stepped.
    for (std::size_t d = 0; d < dim; ++d) {
        double g = 0.0;
        for (int k = 0; k < 3; ++k)
            g += s.logit_grad[k] * rload(m.ege_weights.at(k, d));
        for (int k = 0; k < 3; ++k)
            radd(m.ege_weights.at(k, d),
                 -lr * s.logit_grad[k] * rload(v[d]));
        radd(v[d], -lr * g);
    }
    for (int k = 0; k < 3; ++k) radd(m.ege_bias[k], -lr * s.logit_grad[k]);
}

}  // namespace

void TrainingConfig::validate() const {
    if (dim < 2) throw ConfigError("dim must be >= 2");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(ege_lambda > 0.0)) throw ConfigError("ege_lambda must be > 0");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (batch < 1) throw ConfigError("batch must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (subsample_t < 0.0) throw ConfigError("subsample_t must be >= 0");
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
}

const char* to_string(Gender g) {
    switch (g) {
        case Gender::male: return "male";
        case Gender::female: return "female";
        default: return "neutral";
    }
}

GenderLabeling GenderLabeling::all_neutral(const Vocabulary& vocab) {
    GenderLabeling l;
    l.labels.assign(vocab.size(), Gender::neutral);
    return l;
}

GenderLabeling GenderLabeling::from_lexicon(const Vocabulary& vocab,
                                            const PairLexicon& lex) {
    GenderLabeling l = all_neutral(vocab);
    for (const auto& p : lex.pairs) {
        if (auto i = vocab.index_of(p.male)) l.labels[*i] = Gender::male;
        if (auto i = vocab.index_of(p.female)) l.labels[*i] = Gender::female;
    }
    return l;
}

Embedding EmbeddingModel::to_embedding() const {
    std::vector<std::string> tokens;
    tokens.reserve(vocab.size());
    for (std::uint32_t i = 0; i < vocab.size(); ++i)
        tokens.push_back(vocab.token(i));
    return Embedding(std::move(tokens), input);
}

std::array<double, 3> EmbeddingModel::ege_logits(std::uint32_t row) const {
    std::array<double, 3> z;
    const double* v = input.row(row);
    for (int k = 0; k < 3; ++k) {
        double acc = ege_bias[k];
        const double* w = ege_weights.row(k);
        for (std::size_t d = 0; d < dim(); ++d) acc += w[d] * v[d];
        z[k] = acc;
    }
    return z;
}

Gender EmbeddingModel::ege_predict(std::uint32_t row) const {
    auto z = ege_logits(row);
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (z[k] > z[best]) best = k;
    return static_cast<Gender>(best);
}

EmbeddingModel init_model(const Vocabulary& vocab, const TrainingConfig& cfg) {
    cfg.validate();
    if (vocab.size() == 0) throw EmptyVocab("cannot init model: empty vocab");
    EmbeddingModel m;
    m.vocab = vocab;
    m.input = Mat(vocab.size(), cfg.dim);
    m.output = Mat(vocab.size(), cfg.dim);
    m.ege_weights = Mat(3, cfg.dim);
    Rng rng(cfg.seed);
    const double half_range = 0.5 / static_cast<double>(cfg.dim);
    for (double& x : m.input.data())
        x = (rng.next_double() - 0.5) * 2.0 * half_range;
    return m;
}

CbowResult cbow_loss(const EmbeddingModel& model, std::uint32_t center,
                     std::span<const std::uint32_t> context,
                     std::span<const std::uint32_t> negatives) {
    if (context.empty()) throw SpecError("cbow_loss requires context words");
    for (std::uint32_t n : negatives)
        if (n == center)
            throw SpecError("cbow_loss: center appears among negatives");

    CbowScratch s;
    CbowResult res;
    res.loss = cbow_forward(model, center, context, negatives, s);

    const std::size_t dim = model.dim();
    const double inv = 1.0 / static_cast<double>(context.size());

    std::map<std::uint32_t, std::vector<double>> in_acc;
    for (std::uint32_t c : context) {
        auto& g = in_acc[c];
        if (g.empty()) g.assign(dim, 0.0);
        for (std::size_t d = 0; d < dim; ++d)
            g[d] += inv * s.hidden_grad[d];
    }
    for (auto& [row, grad] : in_acc)
        res.input_grads.push_back({row, std::move(grad)});

    std::map<std::uint32_t, std::vector<double>> out_acc;
    auto add_out = [&](std::uint32_t row, double scale) {
        auto& g = out_acc[row];
        if (g.empty()) g.assign(dim, 0.0);
        for (std::size_t d = 0; d < dim; ++d) g[d] += scale * s.hidden[d];
    };
    add_out(center, s.out_scale[0]);
    for (std::size_t i = 0; i < negatives.size(); ++i)
        add_out(negatives[i], s.out_scale[i + 1]);
    res.output_grads.push_back({center, std::move(out_acc.at(center))});
    out_acc.erase(center);
    for (auto& [row, grad] : out_acc)
        res.output_grads.push_back({row, std::move(grad)});
    return res;
}

EgeResult ege_loss(const EmbeddingModel& model, std::uint32_t center,
                   Gender label, double lambda) {
    EgeScratch s;
    EgeResult res;
    res.loss = ege_forward(model, center, label, lambda, s);

    const std::size_t dim = model.dim();
    res.input_grad.assign(dim, 0.0);
    res.weight_grad = Mat(3, dim);
    const double* v = model.input.row(center);
    for (int k = 0; k < 3; ++k) {
        res.bias_grad[k] = s.logit_grad[k];
        for (std::size_t d = 0; d < dim; ++d) {
            res.weight_grad.at(k, d) = s.logit_grad[k] * v[d];
            res.input_grad[d] += s.logit_grad[k] * model.ege_weights.at(k, d);
        }
    }
    return res;
}

namespace {

struct SharedTrainState {
    const TrainingConfig* cfg;
    const Vocabulary* vocab;
    const GenderLabeling* labeling;
    const TokenStream* corpus;
    EmbeddingModel* model;

    std::vector<double> keep_prob;     // subsampling keep probability
    std::vector<double> unigram_cum;   // cumulative unigram^0.75 mass
    double unigram_total = 0.0;
    std::uint64_t progress_denominator = 1;

    std::atomic<std::uint64_t> scanned{0};  // resolvable tokens consumed
};

struct WorkerStats {
    std::vector<double> cbow_sum, ege_sum;
    std::vector<std::uint64_t> examples;
    std::vector<double> epoch_end_ema;
    double ema = 0.0;
    bool ema_started = false;
};

std::uint32_t sample_negative(const SharedTrainState& st, Rng& rng) {
    double u = rng.next_double() * st.unigram_total;
    auto it = std::upper_bound(st.unigram_cum.begin(), st.unigram_cum.end(), u);
    if (it == st.unigram_cum.end()) --it;
    return static_cast<std::uint32_t>(it - st.unigram_cum.begin());
}

void train_worker(SharedTrainState& st, unsigned worker, unsigned workers,
                  WorkerStats& ws) {
    const TrainingConfig& cfg = *st.cfg;
    EmbeddingModel& model = *st.model;
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ULL + worker + 1);

    const unsigned epochs = cfg.epochs;
    ws.cbow_sum.assign(epochs, 0.0);
    ws.ege_sum.assign(epochs, 0.0);
    ws.examples.assign(epochs, 0);
    ws.epoch_end_ema.assign(epochs, 0.0);

    CbowScratch scratch;
    EgeScratch ege_scratch;
    std::vector<std::uint32_t> sentence;
    sentence.reserve(kMaxSentence);
    std::vector<std::uint32_t> context;
    std::vector<std::uint32_t> negatives(cfg.negatives);

    double alpha = cfg.learning_rate;
    std::uint64_t local_scanned = 0;
    std::uint64_t since_lr_update = 0;

    auto refresh_alpha = [&]() {
        std::uint64_t scanned_now =
            st.scanned.fetch_add(local_scanned, std::memory_order_relaxed) +
            local_scanned;
        local_scanned = 0;
        double progress = static_cast<double>(scanned_now) /
                          static_cast<double>(st.progress_denominator);
        alpha = cfg.learning_rate *
                std::max(kLrFloorFraction, 1.0 - progress);
    };

    for (unsigned epoch = 0; epoch < epochs; ++epoch) {
        auto process_sentence = [&]() {
            for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
                const std::uint32_t center = sentence[pos];
                const std::uint64_t radius = 1 + rng.next_below(cfg.window);
                context.clear();
                const std::size_t lo =
                    pos >= radius ? pos - radius : 0;
                const std::size_t hi =
                    std::min(sentence.size() - 1, pos + radius);
                for (std::size_t j = lo; j <= hi; ++j)
                    if (j != pos) context.push_back(sentence[j]);

                if (!context.empty()) {
                    for (unsigned n = 0; n < cfg.negatives; ++n) {
                        std::uint32_t neg;
                        do {
                            neg = sample_negative(st, rng);
                        } while (neg == center);
                        negatives[n] = neg;
                    }
                    double loss = cbow_forward(model, center, context,
                                               negatives, scratch);
                    cbow_apply(model, center, context, negatives, alpha,
                               scratch);
                    ws.cbow_sum[epoch] += loss;
                    if (!ws.ema_started) {
                        ws.ema = loss;
                        ws.ema_started = true;
                    } else {
                        ws.ema += 1e-3 * (loss - ws.ema);
                    }
                }
                if (cfg.ege_enabled) {
                    double loss = ege_forward(
                        model, center, st.labeling->labels[center],
                        cfg.ege_lambda, ege_scratch);
                    ege_apply(model, center, alpha, ege_scratch);
                    ws.ege_sum[epoch] += loss;
                }
                ++ws.examples[epoch];
                if (++since_lr_update >= cfg.batch) {
                    since_lr_update = 0;
                    refresh_alpha();
                }
            }
            sentence.clear();
        };

        auto reader = workers == 1 ? st.corpus->open()
                                   : st.corpus->open_shard(worker, workers);
        std::string tok;
        bool line_end = false;
        while (reader->next(tok, line_end)) {
            auto idx = st.vocab->index_of(tok);
            if (idx) {
                ++local_scanned;
                const double keep = st.keep_prob[*idx];
                if (keep >= 1.0 || rng.next_double() < keep)
                    sentence.push_back(*idx);
            }
            if (line_end || sentence.size() >= kMaxSentence)
                process_sentence();
        }
        process_sentence();
        ws.epoch_end_ema[epoch] = ws.ema;
    }
    refresh_alpha();
}

}  // namespace

EmbeddingModel train(const TokenStream& corpus, const Vocabulary& vocab,
                     const GenderLabeling& labeling, const TrainingConfig& cfg,
                     TrainStats* stats) {
    cfg.validate();
    if (labeling.labels.size() != vocab.size())
        throw SpecError("gender labeling does not cover the vocabulary");

    EmbeddingModel model = init_model(vocab, cfg);

    SharedTrainState st;
    st.cfg = &cfg;
    st.vocab = &vocab;
    st.labeling = &labeling;
    st.corpus = &corpus;
    st.model = &model;

    st.keep_prob.resize(vocab.size(), 1.0);
    if (cfg.subsample_t > 0.0) {
        const double total = static_cast<double>(vocab.kept_tokens());
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            const double freq = static_cast<double>(vocab.count(
                                    static_cast<std::uint32_t>(i))) /
                                total;
            if (freq > cfg.subsample_t)
                st.keep_prob[i] = std::sqrt(cfg.subsample_t / freq);
        }
    }

    st.unigram_cum.reserve(vocab.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        acc += std::pow(
            static_cast<double>(vocab.count(static_cast<std::uint32_t>(i))),
            0.75);
        st.unigram_cum.push_back(acc);
    }
    st.unigram_total = acc;
    st.progress_denominator =
        cfg.epochs * vocab.kept_tokens() + 1;

    std::vector<WorkerStats> worker_stats(cfg.threads);
    if (cfg.threads == 1) {
        train_worker(st, 0, 1, worker_stats[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(cfg.threads);
        for (unsigned w = 0; w < cfg.threads; ++w)
            pool.emplace_back(train_worker, std::ref(st), w, cfg.threads,
                              std::ref(worker_stats[w]));
        for (auto& t : pool) t.join();
    }

    if (stats) {
        stats->epoch_cbow_loss.assign(cfg.epochs, 0.0);
        stats->epoch_ege_loss.assign(cfg.epochs, 0.0);
        stats->epoch_end_ema = worker_stats[0].epoch_end_ema;
        stats->examples = 0;
        for (unsigned e = 0; e < cfg.epochs; ++e) {
            double cbow = 0.0, ege = 0.0;
            std::uint64_t n = 0;
            for (const auto& ws : worker_stats) {
                cbow += ws.cbow_sum[e];
                ege += ws.ege_sum[e];
                n += ws.examples[e];
            }
            stats->epoch_cbow_loss[e] = n ? cbow / static_cast<double>(n) : 0.0;
            stats->epoch_ege_loss[e] = n ? ege / static_cast<double>(n) : 0.0;
            stats->examples += n;
        }
    }
    return model;
}

}  // namespace fairembed
