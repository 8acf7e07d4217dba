#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "fairembed/embedding.hpp"
#include "fairembed/lexicon.hpp"

namespace fairembed {

// Unit gender-direction vector from PCA over definitional pair residuals.
struct GenderDirection {
    std::vector<double> g;

    double project(std::span<const double> v) const;  // v . g
};

// For each pair, the two unit-normalized vectors are centered about their
// mean and both residuals collected; g is the top principal component of
// the residual set, sign-fixed so g . (first male - first female) >= 0.
GenderDirection gender_direction(const Embedding& emb, const PairLexicon& pairs);

// w' = normalize(w - (w.g) g) for every word not in `exclude`. Words whose
// residual is exactly zero (collinear with g) are skipped and reported via
// `skipped` when given. Excluded words are untouched.
Embedding neutralize(const Embedding& emb, const GenderDirection& dir,
                     const std::unordered_set<std::string>& exclude,
                     std::vector<std::string>* skipped = nullptr);

// Per pair {a, b} (unit-normalized first): mu = (a+b)/2, nu = mu - (mu.g) g,
// a' = nu + sqrt(max(0, 1-|nu|^2)) * sign(a.g - mu.g) * g and b' with the
// opposite sign. Resulting vectors are unit norm and symmetric about the
// complement of g.
Embedding equalize(const Embedding& emb, const GenderDirection& dir,
                   const PairLexicon& equalize_pairs);

}  // namespace fairembed
