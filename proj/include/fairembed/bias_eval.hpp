#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairembed/embedding.hpp"
#include "fairembed/hard_debias.hpp"
#include "fairembed/lexicon.hpp"
#include "fairembed/trainer.hpp"

namespace fairembed {

// All metrics run on unit-normalized copies of the embedding vectors; the
// stored embedding is never mutated by evaluation.

struct WeatOptions {
    // Exact permutation enumeration when C(2N, N) <= max_exact, else Monte
    // Carlo with `samples` draws from `seed`.
    std::uint64_t max_exact = 20000;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 12345;
    bool force_monte_carlo = false;  // testing hook
};

struct WeatResult {
    double statistic;    // s(X, Y, A, B)
    double effect_size;  // d
    double p_value;      // strict one-sided permutation probability
    bool exact;
    std::uint64_t samples;  // partitions enumerated or sampled
};

// s(w, A, B) = mean cos(w, a) - mean cos(w, b); s(X, Y, A, B) = sum over X
// minus sum over Y; d = (mean_X - mean_Y) / sample-sd over X union Y;
// p = P[s(Xi, Yi, A, B) > s(X, Y, A, B)] over random even partitions.
WeatResult weat(const Embedding& emb, const WeatSpec& spec,
                const WeatOptions& opts = {});

struct ClusterRun {
    std::uint64_t seed;
    double accuracy;  // max over the two cluster-to-stereotype assignments
    std::vector<int> assignment;
};

struct ClusterReport {
    double mean_accuracy;
    double std_dev;  // sample standard deviation over runs
    std::vector<ClusterRun> per_run;
    std::vector<std::string> used_tokens;
    std::vector<Stereotype> used_labels;
    std::vector<std::string> dropped;  // professions missing from the vocab
};

// k-means (k = 2, k-means++ init, 100 iteration cap, 1e-6 centroid-shift
// convergence) on unit-normalized profession vectors, repeated `runs` times
// with seeds base_seed, base_seed+1, ...
ClusterReport cluster_accuracy(const Embedding& emb, const ProfessionSet& prof,
                               unsigned runs, std::uint64_t base_seed);

struct SemBiasResult {
    double definition_fraction;  // D
    double stereotype_fraction;  // S
    unsigned evaluated;
    unsigned skipped;  // instances with out-of-vocabulary words
};

// Per instance, picks the pair (a, b) maximizing cos(a - b, male - female)
// for the given direction pair (default he/she).
SemBiasResult sembias_eval(
    const Embedding& emb, const SemBiasSet& set,
    std::pair<std::string, std::string> direction_pair = {"he", "she"});

// |cos(w, g)|.
double direct_bias(const Embedding& emb, const GenderDirection& dir,
                   std::string_view word);

// beta(w, v) = (w.v - (w_perp . v_perp)/(|w_perp||v_perp|)) / (w.v) on unit
// vectors, with w_perp = w - (w.g) g.
double indirect_bias(const Embedding& emb, const GenderDirection& dir,
                     std::string_view w, std::string_view v);

struct NeighborRow {
    unsigned rank;
    std::string word;
    double cosine;
    double bias_by_projection;  // signed cos(word, g)
};

// Top-k neighbors by cosine, query excluded; ties broken by token order.
std::vector<NeighborRow> neighbors(const Embedding& emb, std::string_view word,
                                   unsigned k, const GenderDirection& dir);

enum class ProximityMode { direct, indirect };

// Fraction of the top-k neighbors counted as biased: direct mode counts
// |cos(n, g)| > tau, indirect mode counts beta(n, query) > tau. The
// denominator is k even when fewer neighbors exist.
double proximity_bias(const Embedding& emb, const GenderDirection& dir,
                      std::string_view word, unsigned k, double tau,
                      ProximityMode mode = ProximityMode::direct);

struct ProjectedWord {
    std::string word;
    double x;
    double y;
};

// Mean-centered projection onto the top-2 principal components with a
// deterministic sign convention (largest-|loading| coordinate positive).
// Out-of-vocabulary words are dropped; at least 3 must resolve.
std::vector<ProjectedWord> pca_project(const Embedding& emb,
                                       std::span<const std::string> words);

}  // namespace fairembed
