#include "fairembed/hard_debias.hpp"

#include <cmath>

#include "fairembed/errors.hpp"

namespace fairembed {

double GenderDirection::project(std::span<const double> v) const {
    return dot(v, g);
}

GenderDirection gender_direction(const Embedding& emb,
                                 const PairLexicon& pairs) {
    pairs.validate();
    const std::size_t dim = emb.dim();

    Mat residuals(2 * pairs.pairs.size(), dim);
    std::vector<double> first_diff(dim, 0.0);
    double frob = 0.0;
    for (std::size_t p = 0; p < pairs.pairs.size(); ++p) {
        std::vector<double> male(emb.vector(pairs.pairs[p].male).begin(),
                                 emb.vector(pairs.pairs[p].male).end());
        std::vector<double> female(emb.vector(pairs.pairs[p].female).begin(),
                                   emb.vector(pairs.pairs[p].female).end());
        normalize(male);
        normalize(female);
        for (std::size_t d = 0; d < dim; ++d) {
            const double mean = 0.5 * (male[d] + female[d]);
            residuals.at(2 * p, d) = male[d] - mean;
            residuals.at(2 * p + 1, d) = female[d] - mean;
            frob += 2.0 * (male[d] - mean) * (male[d] - mean);
        }
        if (p == 0)
            for (std::size_t d = 0; d < dim; ++d)
                first_diff[d] = male[d] - female[d];
    }
    if (frob == 0.0)
        throw DegenerateDirection(
            "all definitional pairs have identical vectors");

    std::vector<double> eigenvalues;
    Mat pcs = principal_components(residuals, 1, &eigenvalues);
    if (!(eigenvalues[0] > 0.0))
        throw DegenerateDirection("residual matrix has no principal direction");

    GenderDirection dir;
    dir.g.assign(pcs.row(0), pcs.row(0) + dim);
    normalize(dir.g);
    if (dot(dir.g, first_diff) < 0.0)
        for (double& x : dir.g) x = -x;
    return dir;
}

Embedding neutralize(const Embedding& emb, const GenderDirection& dir,
                     const std::unordered_set<std::string>& exclude,
                     std::vector<std::string>* skipped) {
    Embedding out = emb;
    const std::size_t dim = emb.dim();
    for (std::size_t r = 0; r < out.size(); ++r) {
        if (exclude.count(out.token(r))) continue;
        auto w = out.vector(r);
        const double proj = dot(w, dir.g);
        for (std::size_t d = 0; d < dim; ++d) w[d] -= proj * dir.g[d];
        if (!normalize(w)) {
            // Collinear with g; restore and report.
            for (std::size_t d = 0; d < dim; ++d) w[d] = emb.vector(r)[d];
            if (skipped) skipped->push_back(out.token(r));
        }
    }
    return out;
}

Embedding equalize(const Embedding& emb, const GenderDirection& dir,
                   const PairLexicon& equalize_pairs) {
    equalize_pairs.validate();
    Embedding out = emb;
    const std::size_t dim = emb.dim();
    for (const auto& pair : equalize_pairs.pairs) {
        auto row_a = out.row_of(pair.male);
        auto row_b = out.row_of(pair.female);
        if (!row_a) throw OovError(pair.male);
        if (!row_b) throw OovError(pair.female);

        std::vector<double> a(out.vector(*row_a).begin(),
                              out.vector(*row_a).end());
        std::vector<double> b(out.vector(*row_b).begin(),
                              out.vector(*row_b).end());
        normalize(a);
        normalize(b);
        const double pa = dot(a, dir.g), pb = dot(b, dir.g);
        if (pa == pb) throw EqualizeDegenerate(pair.male, pair.female);

        std::vector<double> nu(dim);
        double mu_proj = 0.5 * (pa + pb);
        double nu_sq = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double mu = 0.5 * (a[d] + b[d]);
            nu[d] = mu - mu_proj * dir.g[d];
            nu_sq += nu[d] * nu[d];
        }
        const double beta = std::sqrt(std::max(0.0, 1.0 - nu_sq));
        const double sign_a = pa - mu_proj >= 0.0 ? 1.0 : -1.0;
        auto wa = out.vector(*row_a);
        auto wb = out.vector(*row_b);
        for (std::size_t d = 0; d < dim; ++d) {
            wa[d] = nu[d] + beta * sign_a * dir.g[d];
            wb[d] = nu[d] - beta * sign_a * dir.g[d];
        }
    }
    return out;
}

}  // namespace fairembed
