#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairembed/corpus.hpp"
#include "fairembed/embedding.hpp"
#include "fairembed/lexicon.hpp"
#include "fairembed/linalg.hpp"

namespace fairembed {

struct TrainingConfig {
    std::size_t dim = 100;
    unsigned window = 5;        // context radius; actual radius ~ U[1, window]
    unsigned epochs = 5;
    std::uint64_t batch = 4096; // examples between learning-rate updates
    unsigned negatives = 5;
    double learning_rate = 0.025;  // linear decay to 1e-4 of the initial value
    double subsample_t = 1e-4;     // 0 disables frequent-word subsampling
    bool ege_enabled = false;
    double ege_lambda = 0.5;
    std::uint64_t seed = 1;
    unsigned threads = 1;  // >1 enables hogwild updates (lossy interleaving)
    std::uint64_t min_count = 5;  // vocabulary floor, used by pipelines

    void validate() const;
};

enum class Gender : std::uint8_t { male = 0, female = 1, neutral = 2 };

const char* to_string(Gender g);

// Per-vocabulary-index gender labels for the EGE head. Pair-lexicon tokens
// get male/female, everything else neutral.
struct GenderLabeling {
    std::vector<Gender> labels;

    static GenderLabeling all_neutral(const Vocabulary& vocab);
    static GenderLabeling from_lexicon(const Vocabulary& vocab,
                                       const PairLexicon& lex);
};

struct EmbeddingModel {
    Vocabulary vocab;
    Mat input;        // |V| x dim; the exported embeddings
    Mat output;       // |V| x dim; negative-sampling output weights
    Mat ege_weights;  // 3 x dim
    std::array<double, 3> ege_bias{};

    std::size_t dim() const { return input.cols(); }
    Embedding to_embedding() const;

    // Gender-head forward pass for one vocabulary row.
    std::array<double, 3> ege_logits(std::uint32_t row) const;
    Gender ege_predict(std::uint32_t row) const;
};

// input entries ~ U[-0.5/dim, 0.5/dim] from the config seed; output matrix
// and gender head start at zero. Same seed and vocab give identical models.
EmbeddingModel init_model(const Vocabulary& vocab, const TrainingConfig& cfg);

struct RowGrad {
    std::uint32_t row;
    std::vector<double> grad;
};

// Loss and exact gradients for one CBOW negative-sampling example.
// h = mean of context input rows; L = -log s(out_center . h)
// - sum over negatives of log s(-out_n . h), with s the logistic sigmoid.
struct CbowResult {
    double loss;
    std::vector<RowGrad> input_grads;   // one entry per distinct context row
    std::vector<RowGrad> output_grads;  // center first, then distinct negatives
};
CbowResult cbow_loss(const EmbeddingModel& model, std::uint32_t center,
                     std::span<const std::uint32_t> context,
                     std::span<const std::uint32_t> negatives);

// Loss and exact gradients for the explicit-gender-encoding head on one
// center word: z = W v + b, L = lambda * cross_entropy(softmax(z), label).
// Gradients flow to W, b and the center's input row.
struct EgeResult {
    double loss;
    std::vector<double> input_grad;  // dim
    Mat weight_grad;                 // 3 x dim
    std::array<double, 3> bias_grad;
};
EgeResult ege_loss(const EmbeddingModel& model, std::uint32_t center,
                   Gender label, double lambda);

struct TrainStats {
    std::vector<double> epoch_cbow_loss;  // mean per epoch
    std::vector<double> epoch_ege_loss;   // mean per epoch, 0 when disabled
    std::vector<double> epoch_end_ema;    // EMA (decay 1e-3) at epoch ends
    std::uint64_t examples = 0;
};

// CBOW negative-sampling training with optional EGE regularizer. Unknown
// corpus tokens are skipped; negatives come from the unigram^0.75
// distribution; the context radius is drawn uniformly in [1, window] per
// center. threads == 1 is the deterministic mode: same seed, same corpus,
// bit-identical model.
EmbeddingModel train(const TokenStream& corpus, const Vocabulary& vocab,
                     const GenderLabeling& labeling, const TrainingConfig& cfg,
                     TrainStats* stats = nullptr);

}  // namespace fairembed
