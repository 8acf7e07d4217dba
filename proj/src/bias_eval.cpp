#include "fairembed/bias_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairembed/errors.hpp"
#include "fairembed/rng.hpp"

namespace fairembed {

namespace {

std::vector<double> unit_vector(const Embedding& emb, std::string_view word) {
    auto span = emb.vector(word);  // throws OovError
    std::vector<double> v(span.begin(), span.end());
    normalize(v);
    return v;
}

Mat unit_rows(const Embedding& emb, const std::vector<std::string>& words) {
    Mat rows(words.size(), emb.dim());
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto v = unit_vector(emb, words[i]);
        std::copy(v.begin(), v.end(), rows.row(i));
    }
    return rows;
}

// C(n, k) capped so callers can compare against a threshold safely.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                              std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (result > cap) return cap + 1;
        result = result * (n - k + i) / i;
    }
    return std::min(result, cap + 1);
}

double sample_std_dev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                  static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

WeatResult weat(const Embedding& emb, const WeatSpec& spec,
                const WeatOptions& opts) {
    spec.validate();
    const std::size_t n = spec.X.size();

    Mat xs = unit_rows(emb, spec.X);
    Mat ys = unit_rows(emb, spec.Y);
    Mat as = unit_rows(emb, spec.A);
    Mat bs = unit_rows(emb, spec.B);

    // s(w, A, B) for every target word, X first then Y.
    std::vector<double> assoc(2 * n);
    auto association = [&](std::span<const double> w) {
        double a_mean = 0.0, b_mean = 0.0;
        for (std::size_t i = 0; i < as.rows(); ++i)
            a_mean += dot(w, as.row_span(i));
        for (std::size_t i = 0; i < bs.rows(); ++i)
            b_mean += dot(w, bs.row_span(i));
        return a_mean / static_cast<double>(as.rows()) -
               b_mean / static_cast<double>(bs.rows());
    };
    for (std::size_t i = 0; i < n; ++i) assoc[i] = association(xs.row_span(i));
    for (std::size_t i = 0; i < n; ++i)
        assoc[n + i] = association(ys.row_span(i));

    const double total =
        std::accumulate(assoc.begin(), assoc.end(), 0.0);
    double x_sum = std::accumulate(assoc.begin(), assoc.begin() + n, 0.0);
    const double statistic = 2.0 * x_sum - total;

    const double sd = sample_std_dev(assoc);
    if (sd == 0.0)
        throw DegenerateEffect(
            "zero standard deviation of target associations");
    const double effect =
        (x_sum / static_cast<double>(n) -
         (total - x_sum) / static_cast<double>(n)) /
        sd;

    WeatResult res;
    res.statistic = statistic;
    res.effect_size = effect;

    const std::uint64_t partitions =
        binomial_capped(2 * n, n, opts.max_exact);
    if (!opts.force_monte_carlo && partitions <= opts.max_exact) {
        // Exact: enumerate every even partition of X union Y.
        std::uint64_t greater = 0, count = 0;
        std::vector<std::size_t> pick(n);
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            double s = 0.0;
            for (std::size_t i : pick) s += assoc[i];
            if (2.0 * s - total > statistic) ++greater;
            ++count;
            // next combination of n out of 2n
            std::size_t i = n;
            while (i-- > 0) {
                if (pick[i] != i + n) {
                    ++pick[i];
                    for (std::size_t j = i + 1; j < n; ++j)
                        pick[j] = pick[j - 1] + 1;
                    break;
                }
                if (i == 0) goto done;
            }
        }
    done:
        res.exact = true;
        res.samples = count;
        res.p_value = static_cast<double>(greater) /
                      static_cast<double>(count);
    } else {
        Rng rng(opts.seed);
        std::vector<std::size_t> idx(2 * n);
        std::iota(idx.begin(), idx.end(), 0);
        std::uint64_t greater = 0;
        for (std::uint64_t it = 0; it < opts.samples; ++it) {
            // partial Fisher-Yates: first n entries form Xi
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j =
                    i + static_cast<std::size_t>(rng.next_below(2 * n - i));
                std::swap(idx[i], idx[j]);
            }
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += assoc[idx[i]];
            if (2.0 * s - total > statistic) ++greater;
        }
        res.exact = false;
        res.samples = opts.samples;
        res.p_value = static_cast<double>(greater) /
                      static_cast<double>(opts.samples);
    }
    return res;
}

namespace {

// Lloyd k-means with k-means++ seeding on unit vectors. Returns per-point
// cluster ids in {0, 1}.
std::vector<int> kmeans2(const Mat& points, std::uint64_t seed) {
    const std::size_t n = points.rows(), dim = points.cols();
    Rng rng(seed);

    auto sq_dist = [&](std::span<const double> a, const double* b) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            double diff = a[d] - b[d];
            s += diff * diff;
        }
        return s;
    };

    Mat centroids(2, dim);
    std::size_t first = rng.next_below(n);
    std::copy(points.row(first), points.row(first) + dim, centroids.row(0));
    std::vector<double> d2(n);
    double d2_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = sq_dist(points.row_span(i), centroids.row(0));
        d2_total += d2[i];
    }
    std::size_t second = first;
    if (d2_total > 0.0) {
        double u = rng.next_double() * d2_total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (u < acc) {
                second = i;
                break;
            }
        }
    } else {
        second = (first + 1) % n;
    }
    std::copy(points.row(second), points.row(second) + dim, centroids.row(1));

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double da = sq_dist(points.row_span(i), centroids.row(0));
            double db = sq_dist(points.row_span(i), centroids.row(1));
            assign[i] = db < da ? 1 : 0;
        }
        Mat next(2, dim);
        std::size_t counts[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            const double* p = points.row(i);
            double* c = next.row(assign[i]);
            for (std::size_t d = 0; d < dim; ++d) c[d] += p[d];
        }
        for (int k = 0; k < 2; ++k) {
            if (counts[k] == 0) {
                // Reseed an empty cluster at the point farthest from the
                // other centroid.
                std::size_t far = 0;
                double best = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = sq_dist(points.row_span(i),
                                       centroids.row(1 - k));
                    if (d > best) {
                        best = d;
                        far = i;
                    }
                }
                std::copy(points.row(far), points.row(far) + dim,
                          next.row(k));
            } else {
                double* c = next.row(k);
                for (std::size_t d = 0; d < dim; ++d)
                    c[d] /= static_cast<double>(counts[k]);
            }
        }
        double shift = 0.0;
        for (int k = 0; k < 2; ++k)
            shift += std::sqrt(sq_dist(next.row_span(k), centroids.row(k)));
        centroids = next;
        if (shift < 1e-6) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double da = sq_dist(points.row_span(i), centroids.row(0));
        double db = sq_dist(points.row_span(i), centroids.row(1));
        assign[i] = db < da ? 1 : 0;
    }
    return assign;
}

}  // namespace

ClusterReport cluster_accuracy(const Embedding& emb, const ProfessionSet& prof,
                               unsigned runs, std::uint64_t base_seed) {
    prof.validate();
    if (runs == 0) throw SpecError("cluster_accuracy needs runs >= 1");

    ClusterReport report;
    std::size_t male_count = 0, female_count = 0;
    for (const auto& e : prof.entries) {
        if (emb.contains(e.token)) {
            report.used_tokens.push_back(e.token);
            report.used_labels.push_back(e.stereotype);
            (e.stereotype == Stereotype::male ? male_count : female_count)++;
        } else {
            report.dropped.push_back(e.token);
        }
    }
    if (male_count < 2 || female_count < 2)
        throw InsufficientWords(
            "need at least 2 resolvable professions per stereotype, got " +
            std::to_string(male_count) + " male / " +
            std::to_string(female_count) + " female");

    Mat points = unit_rows(emb, report.used_tokens);

    std::vector<double> accuracies;
    for (unsigned r = 0; r < runs; ++r) {
        ClusterRun run;
        run.seed = base_seed + r;
        run.assignment = kmeans2(points, run.seed);
        std::size_t match = 0;
        for (std::size_t i = 0; i < run.assignment.size(); ++i) {
            bool male_cluster0 = run.assignment[i] == 0;
            bool is_male = report.used_labels[i] == Stereotype::male;
            if (male_cluster0 == is_male) ++match;
        }
        const double n = static_cast<double>(run.assignment.size());
        run.accuracy = std::max(static_cast<double>(match) / n,
                                1.0 - static_cast<double>(match) / n);
        accuracies.push_back(run.accuracy);
        report.per_run.push_back(std::move(run));
    }
    report.mean_accuracy =
        std::accumulate(accuracies.begin(), accuracies.end(), 0.0) /
        static_cast<double>(accuracies.size());
    report.std_dev = sample_std_dev(accuracies);
    return report;
}

SemBiasResult sembias_eval(const Embedding& emb, const SemBiasSet& set,
                           std::pair<std::string, std::string> direction_pair) {
    set.validate();
    std::vector<double> dir = unit_vector(emb, direction_pair.first);
    {
        std::vector<double> she = unit_vector(emb, direction_pair.second);
        for (std::size_t d = 0; d < dir.size(); ++d) dir[d] -= she[d];
    }

    SemBiasResult res{0.0, 0.0, 0, 0};
    unsigned def_hits = 0, stereo_hits = 0;
    for (const auto& inst : set.instances) {
        bool ok = true;
        for (const auto& p : inst)
            if (!emb.contains(p.male) || !emb.contains(p.female)) ok = false;
        if (!ok) {
            ++res.skipped;
            continue;
        }
        double best = -2.0;
        SemBiasTag best_tag = SemBiasTag::none;
        for (const auto& p : inst) {
            std::vector<double> a = unit_vector(emb, p.male);
            std::vector<double> b = unit_vector(emb, p.female);
            for (std::size_t d = 0; d < a.size(); ++d) a[d] -= b[d];
            double c = cosine(a, dir);
            if (c > best) {
                best = c;
                best_tag = p.tag;
            }
        }
        if (best_tag == SemBiasTag::definition) ++def_hits;
        if (best_tag == SemBiasTag::stereotype) ++stereo_hits;
        ++res.evaluated;
    }
    if (res.evaluated) {
        res.definition_fraction =
            static_cast<double>(def_hits) / res.evaluated;
        res.stereotype_fraction =
            static_cast<double>(stereo_hits) / res.evaluated;
    }
    return res;
}

double direct_bias(const Embedding& emb, const GenderDirection& dir,
                   std::string_view word) {
    return std::abs(dot(unit_vector(emb, word), dir.g));
}

double indirect_bias(const Embedding& emb, const GenderDirection& dir,
                     std::string_view w, std::string_view v) {
    std::vector<double> wv = unit_vector(emb, w);
    std::vector<double> vv = unit_vector(emb, v);
    const double wdotv = dot(wv, vv);
    if (wdotv == 0.0)
        throw UndefinedBias("w.v = 0 for (" + std::string(w) + ", " +
                            std::string(v) + ")");
    std::vector<double> wp = wv, vp = vv;
    const double pw = dot(wv, dir.g), pv = dot(vv, dir.g);
    for (std::size_t d = 0; d < wp.size(); ++d) {
        wp[d] -= pw * dir.g[d];
        vp[d] -= pv * dir.g[d];
    }
    const double nw = norm(wp), nv = norm(vp);
    if (nw == 0.0 || nv == 0.0)
        throw UndefinedBias("zero gender-orthogonal component");
    return (wdotv - dot(wp, vp) / (nw * nv)) / wdotv;
}

std::vector<NeighborRow> neighbors(const Embedding& emb, std::string_view word,
                                   unsigned k, const GenderDirection& dir) {
    if (k < 1) throw SpecError("neighbors needs k >= 1");
    auto query_row = emb.row_of(word);
    if (!query_row) throw OovError(std::string(word));

    Embedding unit = emb.unit_normalized();
    auto q = unit.vector(*query_row);

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(unit.size() - 1);
    for (std::size_t r = 0; r < unit.size(); ++r) {
        if (r == *query_row) continue;
        scored.emplace_back(dot(q, unit.vector(r)), r);
    }
    auto cmp = [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return unit.token(a.second) < unit.token(b.second);
    };
    const std::size_t keep = std::min<std::size_t>(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                      cmp);

    std::vector<NeighborRow> rows;
    rows.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        NeighborRow row;
        row.rank = static_cast<unsigned>(i);
        row.word = unit.token(scored[i].second);
        row.cosine = scored[i].first;
        row.bias_by_projection = dot(unit.vector(scored[i].second), dir.g);
        rows.push_back(std::move(row));
    }
    return rows;
}

double proximity_bias(const Embedding& emb, const GenderDirection& dir,
                      std::string_view word, unsigned k, double tau,
                      ProximityMode mode) {
    if (!(tau > 0.0)) throw SpecError("proximity_bias needs tau > 0");
    auto rows = neighbors(emb, word, k, dir);
    std::size_t biased = 0;
    for (const auto& row : rows) {
        if (mode == ProximityMode::direct) {
            if (std::abs(row.bias_by_projection) > tau) ++biased;
        } else {
            try {
                if (indirect_bias(emb, dir, row.word, word) > tau) ++biased;
            } catch (const UndefinedBias&) {
                // undefined contributions are not counted as biased
            }
        }
    }
    return static_cast<double>(biased) / static_cast<double>(k);
}

std::vector<ProjectedWord> pca_project(const Embedding& emb,
                                       std::span<const std::string> words) {
    std::vector<std::string> resolved;
    for (const auto& w : words)
        if (emb.contains(w)) resolved.push_back(w);
    if (resolved.size() < 3)
        throw InsufficientWords("pca_project needs at least 3 resolvable "
                                "words, got " +
                                std::to_string(resolved.size()));

    Mat rows = unit_rows(emb, resolved);
    const std::size_t n = rows.rows(), dim = rows.cols();
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) mean[d] += rows.at(i, d);
    for (double& m : mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) rows.at(i, d) -= mean[d];

    std::vector<double> eigenvalues;
    Mat pcs = principal_components(rows, 2, &eigenvalues);
    if (!(eigenvalues[0] > 0.0) ||
        eigenvalues[1] <= eigenvalues[0] * 1e-12)
        throw DegenerateProjection(
            "fewer than 2 nonzero principal components");

    // Sign convention: the largest-|loading| coordinate of each component
    // is positive; ties resolved by the lowest index.
    for (int c = 0; c < 2; ++c) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            if (std::abs(pcs.at(c, d)) > best) {
                best = std::abs(pcs.at(c, d));
                arg = d;
            }
        }
        if (pcs.at(c, arg) < 0.0)
            for (std::size_t d = 0; d < dim; ++d) pcs.at(c, d) = -pcs.at(c, d);
    }

    std::vector<ProjectedWord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({resolved[i], dot(rows.row_span(i), pcs.row_span(0)),
                       dot(rows.row_span(i), pcs.row_span(1))});
    return out;
}

}  // namespace fairembed
