#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>

#include "doctest.h"
#include "fairembed/bias_eval.hpp"
#include "fairembed/errors.hpp"
#include "fairembed/rng.hpp"

using namespace fairembed;

namespace {

Embedding make_embedding(const std::vector<std::string>& tokens,
                         const std::vector<std::vector<double>>& rows) {
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = rows[i][j];
    return Embedding(tokens, std::move(m));
}

double gauss(Rng& rng) {
    double u1 = rng.next_double();
    double u2 = rng.next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

Embedding random_unit_embedding(std::size_t count, std::size_t dim,
                                std::uint64_t seed,
                                const std::string& prefix = "w") {
    Rng rng(seed);
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < count; ++i) {
        tokens.push_back(prefix + std::to_string(i));
        std::vector<double> v(dim);
        for (double& x : v) x = gauss(rng);
        normalize(v);
        rows.push_back(v);
    }
    return make_embedding(tokens, rows);
}

// Independent WEAT partition oracle: recursive subset enumeration over the
// unit-normalized vectors, recomputing cosines from scratch.
struct WeatOracle {
    double statistic;
    double p_value;
    std::uint64_t partitions;
};

WeatOracle weat_brute_force(const Embedding& emb, const WeatSpec& spec) {
    auto unit = [&](const std::string& w) {
        std::vector<double> v(emb.vector(w).begin(), emb.vector(w).end());
        normalize(v);
        return v;
    };
    std::vector<std::vector<double>> a_vecs, b_vecs, targets;
    for (const auto& w : spec.A) a_vecs.push_back(unit(w));
    for (const auto& w : spec.B) b_vecs.push_back(unit(w));
    for (const auto& w : spec.X) targets.push_back(unit(w));
    for (const auto& w : spec.Y) targets.push_back(unit(w));

    auto assoc = [&](const std::vector<double>& w) {
        double am = 0.0, bm = 0.0;
        for (const auto& a : a_vecs) am += dot(w, a);
        for (const auto& b : b_vecs) bm += dot(w, b);
        return am / a_vecs.size() - bm / b_vecs.size();
    };
    std::vector<double> s;
    for (const auto& t : targets) s.push_back(assoc(t));

    const std::size_t n = spec.X.size();
    const std::size_t total = 2 * n;
    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i) observed += s[i];
    for (std::size_t i = n; i < total; ++i) observed -= s[i];

    WeatOracle oracle{observed, 0.0, 0};
    std::uint64_t greater = 0;
    // enumerate subsets of size n via bitmask (tests use small n only)
    for (std::uint64_t mask = 0; mask < (1ULL << total); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != n)
            continue;
        double part = 0.0;
        for (std::size_t i = 0; i < total; ++i)
            part += (mask >> i) & 1 ? s[i] : -s[i];
        if (part > observed) ++greater;
        ++oracle.partitions;
    }
    oracle.p_value =
        static_cast<double>(greater) / static_cast<double>(oracle.partitions);
    return oracle;
}

}  // namespace

TEST_CASE("weat hand-built 2-D spec: d = sqrt(3), exact p = 0") {
    Embedding emb = make_embedding(
        {"x1", "x2", "y1", "y2", "a", "b"},
        {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0},
         {0.0, 1.0}});
    WeatSpec spec;
    spec.name = "hand";
    spec.X = {"x1", "x2"};
    spec.Y = {"y1", "y2"};
    spec.A = {"a"};
    spec.B = {"b"};
    WeatResult res = weat(emb, spec);
    CHECK(res.statistic == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(res.effect_size - std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(res.effect_size - 1.732051) < 1e-6);
    CHECK(res.exact);
    CHECK(res.samples == 6);  // C(4, 2) partitions, one tie, none greater
    CHECK(res.p_value == 0.0);
}

TEST_CASE("weat exact mode matches the brute-force oracle") {
    for (std::uint64_t seed : {10ULL, 11ULL, 12ULL, 13ULL}) {
        Embedding emb = random_unit_embedding(24, 6, seed);
        WeatSpec spec;
        spec.name = "oracle";
        for (int i = 0; i < 5; ++i) {
            spec.X.push_back("w" + std::to_string(i));
            spec.Y.push_back("w" + std::to_string(5 + i));
        }
        for (int i = 10; i < 14; ++i) spec.A.push_back("w" + std::to_string(i));
        for (int i = 14; i < 18; ++i) spec.B.push_back("w" + std::to_string(i));

        WeatResult res = weat(emb, spec);
        WeatOracle oracle = weat_brute_force(emb, spec);
        CHECK(res.exact);
        CHECK(res.samples == oracle.partitions);
        CHECK(res.statistic == doctest::Approx(oracle.statistic).epsilon(1e-12));
        CHECK(res.p_value == doctest::Approx(oracle.p_value).epsilon(1e-12));
    }
}

TEST_CASE("weat monte carlo p stays within 0.02 of exact p") {
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL, 24ULL, 25ULL}) {
        Embedding emb = random_unit_embedding(30, 8, seed);
        WeatSpec spec;
        spec.name = "mc";
        for (int i = 0; i < 6; ++i) {
            spec.X.push_back("w" + std::to_string(i));
            spec.Y.push_back("w" + std::to_string(6 + i));
        }
        for (int i = 12; i < 16; ++i) spec.A.push_back("w" + std::to_string(i));
        for (int i = 16; i < 20; ++i) spec.B.push_back("w" + std::to_string(i));

        WeatResult exact = weat(emb, spec);
        REQUIRE(exact.exact);

        WeatOptions opts;
        opts.force_monte_carlo = true;
        opts.samples = 100000;
        opts.seed = seed * 1000;
        WeatResult mc = weat(emb, spec, opts);
        CHECK(!mc.exact);
        CHECK(std::abs(mc.p_value - exact.p_value) <= 0.02);
        CHECK(mc.effect_size ==
              doctest::Approx(exact.effect_size).epsilon(1e-12));
    }
}

TEST_CASE("weat switches to monte carlo above the exact cap") {
    Embedding emb = random_unit_embedding(40, 6, 5);
    WeatSpec spec;
    spec.name = "big";
    for (int i = 0; i < 12; ++i) {
        spec.X.push_back("w" + std::to_string(i));
        spec.Y.push_back("w" + std::to_string(12 + i));
    }
    for (int i = 24; i < 28; ++i) spec.A.push_back("w" + std::to_string(i));
    for (int i = 28; i < 32; ++i) spec.B.push_back("w" + std::to_string(i));
    WeatResult res = weat(emb, spec);  // C(24,12) = 2704156 > 20000
    CHECK(!res.exact);
    CHECK(res.samples == 100000);
}

TEST_CASE("weat degenerate effect and oov errors") {
    Embedding emb = make_embedding(
        {"x1", "x2", "y1", "y2", "a", "b"},
        {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0},
         {0.0, 1.0}});
    WeatSpec spec;
    spec.name = "deg";
    spec.X = {"x1", "x2"};
    spec.Y = {"y1", "y2"};
    spec.A = {"a"};
    spec.B = {"b"};
    CHECK_THROWS_AS(weat(emb, spec), DegenerateEffect);

    spec.Y = {"y1", "missing"};
    CHECK_THROWS_AS(weat(emb, spec), OovError);
}

TEST_CASE("weat effect size is invariant under uniform scaling") {
    Embedding emb = random_unit_embedding(20, 5, 77);
    WeatSpec spec;
    spec.name = "scale";
    spec.X = {"w0", "w1", "w2"};
    spec.Y = {"w3", "w4", "w5"};
    spec.A = {"w6", "w7"};
    spec.B = {"w8", "w9"};
    WeatResult before = weat(emb, spec);

    Mat scaled = emb.matrix();
    for (double& x : scaled.data()) x *= 42.0;
    Embedding emb2(emb.tokens(), std::move(scaled));
    WeatResult after = weat(emb2, spec);
    CHECK(before.effect_size ==
          doctest::Approx(after.effect_size).epsilon(1e-12));
    CHECK(before.p_value == after.p_value);
}

namespace {

ProfessionSet labeled_professions(std::size_t male, std::size_t female) {
    ProfessionSet prof;
    for (std::size_t i = 0; i < male; ++i)
        prof.entries.push_back({"mprof" + std::to_string(i), Stereotype::male});
    for (std::size_t i = 0; i < female; ++i)
        prof.entries.push_back(
            {"fprof" + std::to_string(i), Stereotype::female});
    return prof;
}

}  // namespace

TEST_CASE("cluster accuracy is 1.0 on antipodal groups") {
    Rng rng(8);
    const std::size_t dim = 10;
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> rows;
    ProfessionSet prof = labeled_professions(10, 10);
    for (const auto& e : prof.entries) {
        std::vector<double> v(dim);
        for (double& x : v) x = 0.05 * (rng.next_double() - 0.5);
        v[0] += e.stereotype == Stereotype::male ? 1.0 : -1.0;
        tokens.push_back(e.token);
        rows.push_back(v);
    }
    Embedding emb = make_embedding(tokens, rows);
    ClusterReport report = cluster_accuracy(emb, prof, 15, 900);
    CHECK(report.mean_accuracy == doctest::Approx(1.0));
    CHECK(report.std_dev == doctest::Approx(0.0));
    for (const auto& run : report.per_run) CHECK(run.accuracy == 1.0);
}

TEST_CASE("cluster accuracy sits near chance for an unstructured blob") {
    Rng rng(9);
    const std::size_t dim = 12;
    ProfessionSet prof = labeled_professions(40, 40);
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> rows;
    for (const auto& e : prof.entries) {
        std::vector<double> v(dim);
        for (double& x : v) x = gauss(rng);
        tokens.push_back(e.token);
        rows.push_back(v);
    }
    Embedding emb = make_embedding(tokens, rows);
    ClusterReport report = cluster_accuracy(emb, prof, 15, 1000);
    CHECK(report.mean_accuracy >= 0.5);
    CHECK(report.mean_accuracy <= 0.65);
}

TEST_CASE("per-run accuracy is the max over the two labelings") {
    Embedding emb = random_unit_embedding(12, 6, 14, "mprof");
    ProfessionSet prof;
    for (int i = 0; i < 6; ++i)
        prof.entries.push_back({"mprof" + std::to_string(i), Stereotype::male});
    for (int i = 6; i < 12; ++i)
        prof.entries.push_back(
            {"mprof" + std::to_string(i), Stereotype::female});
    ClusterReport report = cluster_accuracy(emb, prof, 10, 3);
    for (const auto& run : report.per_run) {
        CHECK(run.accuracy >= 0.5);
        CHECK(run.accuracy <= 1.0);
    }
    // same seeds, same report
    ClusterReport again = cluster_accuracy(emb, prof, 10, 3);
    CHECK(again.mean_accuracy == report.mean_accuracy);
}

TEST_CASE("cluster accuracy drops missing words and validates the floor") {
    Embedding emb = make_embedding(
        {"mprof0", "mprof1", "fprof0", "fprof1"},
        {{1.0, 0.1}, {1.0, -0.1}, {-1.0, 0.1}, {-1.0, -0.1}});
    ProfessionSet prof = labeled_professions(3, 3);
    ClusterReport report = cluster_accuracy(emb, prof, 5, 1);
    CHECK(report.used_tokens.size() == 4);
    CHECK(report.dropped.size() == 2);

    Embedding tiny = make_embedding({"mprof0", "fprof0"},
                                    {{1.0, 0.0}, {-1.0, 0.0}});
    CHECK_THROWS_AS(cluster_accuracy(tiny, prof, 5, 1), InsufficientWords);
}

TEST_CASE("sembias picks the aligned definition pair") {
    // he - she spans the first axis pair; definition difference matches it
    Embedding emb = make_embedding(
        {"he", "she", "ka", "kb", "sa", "sb", "na", "nb", "nc", "nd"},
        {{1.0, 0.0, 0.0, 0.0},
         {0.0, 1.0, 0.0, 0.0},
         {1.0, 0.0, 0.0, 0.0},
         {0.0, 1.0, 0.0, 0.0},
         {0.0, 0.0, 1.0, 0.0},
         {0.0, 0.0, 0.0, 1.0},
         {0.0, 0.0, 0.6, 0.8},
         {0.0, 0.0, 0.8, 0.6},
         {0.0, 0.0, 0.6, -0.8},
         {0.0, 0.0, 0.8, -0.6}});
    SemBiasSet set;
    set.instances = {{
        {"ka", "kb", SemBiasTag::definition},
        {"sa", "sb", SemBiasTag::stereotype},
        {"na", "nb", SemBiasTag::none},
        {"nc", "nd", SemBiasTag::none},
    }};
    SemBiasResult res = sembias_eval(emb, set);
    CHECK(res.evaluated == 1);
    CHECK(res.definition_fraction == 1.0);
    CHECK(res.stereotype_fraction == 0.0);
}

TEST_CASE("sembias D + S <= 1 and skipped instances are counted") {
    Embedding emb = random_unit_embedding(40, 8, 31);
    // give the direction pair stable names
    SemBiasSet set;
    Rng rng(7);
    for (int i = 0; i < 8; ++i) {
        SemBiasSet::Instance inst = {
            {"w" + std::to_string(2 + i), "w" + std::to_string(12 + i),
             SemBiasTag::definition},
            {"w" + std::to_string(20 + i), "w" + std::to_string(28 + i),
             SemBiasTag::stereotype},
            {"w36", "w37", SemBiasTag::none},
            {"w38", "w39", SemBiasTag::none},
        };
        set.instances.push_back(inst);
    }
    SemBiasSet::Instance with_oov = {
        {"w2", "notinvocab", SemBiasTag::definition},
        {"w3", "w4", SemBiasTag::stereotype},
        {"w5", "w6", SemBiasTag::none},
        {"w7", "w8", SemBiasTag::none},
    };
    set.instances.push_back(with_oov);

    SemBiasResult res = sembias_eval(emb, set, {"w0", "w1"});
    CHECK(res.skipped == 1);
    CHECK(res.evaluated == 8);
    CHECK(res.definition_fraction + res.stereotype_fraction <= 1.0 + 1e-12);
}

TEST_CASE("sembias choice is invariant to uniform scaling") {
    Embedding emb = random_unit_embedding(30, 6, 91);
    SemBiasSet set;
    for (int i = 0; i < 6; ++i) {
        set.instances.push_back({
            {"w" + std::to_string(2 + i), "w" + std::to_string(10 + i),
             SemBiasTag::definition},
            {"w" + std::to_string(16 + i), "w" + std::to_string(22 + i),
             SemBiasTag::stereotype},
            {"w28", "w29", SemBiasTag::none},
            {"w28", "w29", SemBiasTag::none},
        });
    }
    SemBiasResult before = sembias_eval(emb, set, {"w0", "w1"});
    Mat scaled = emb.matrix();
    for (double& x : scaled.data()) x *= 0.125;
    Embedding emb2(emb.tokens(), std::move(scaled));
    SemBiasResult after = sembias_eval(emb2, set, {"w0", "w1"});
    CHECK(before.definition_fraction == after.definition_fraction);
    CHECK(before.stereotype_fraction == after.stereotype_fraction);
}

TEST_CASE("direct bias endpoints") {
    Embedding emb = make_embedding(
        {"para", "anti", "ortho"},
        {{2.0, 0.0}, {-0.5, 0.0}, {0.0, 3.0}});
    GenderDirection dir;
    dir.g = {1.0, 0.0};
    CHECK(direct_bias(emb, dir, "para") == doctest::Approx(1.0));
    CHECK(direct_bias(emb, dir, "anti") == doctest::Approx(1.0));
    CHECK(direct_bias(emb, dir, "ortho") == doctest::Approx(0.0));

    GenderDirection neg;
    neg.g = {-1.0, 0.0};
    CHECK(direct_bias(emb, neg, "para") ==
          doctest::Approx(direct_bias(emb, dir, "para")));
}

TEST_CASE("indirect bias identities and hand value") {
    Embedding emb = make_embedding(
        {"w", "v", "self"},
        {{0.6, 0.8}, {-0.6, 0.8}, {0.3, 0.4}});
    GenderDirection dir;
    dir.g = {1.0, 0.0};
    // by hand: w.v = 0.28; perp cosine = 1; beta = (0.28 - 1) / 0.28
    CHECK(indirect_bias(emb, dir, "w", "v") ==
          doctest::Approx((0.28 - 1.0) / 0.28).epsilon(1e-12));
    CHECK(indirect_bias(emb, dir, "w", "self") ==
          doctest::Approx(0.0).epsilon(1e-12));

    Embedding bad = make_embedding({"w", "v", "g"},
                                   {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
    CHECK_THROWS_AS(indirect_bias(bad, dir, "w", "v"), UndefinedBias);
    CHECK_THROWS_AS(indirect_bias(bad, dir, "g", "w"), UndefinedBias);
}

TEST_CASE("neighbors return the exact ranked list") {
    Embedding emb = make_embedding(
        {"q", "close", "mid", "far"},
        {{1.0, 0.0}, {0.9, 0.1}, {0.5, 0.5}, {-1.0, 0.0}});
    GenderDirection dir;
    dir.g = {0.0, 1.0};
    auto rows = neighbors(emb, "q", 3, dir);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].word == "close");
    CHECK(rows[1].word == "mid");
    CHECK(rows[2].word == "far");
    CHECK(rows[0].rank == 0);
    CHECK(rows[0].cosine > rows[1].cosine);
    CHECK(rows[1].bias_by_projection ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(neighbors(emb, "nope", 3, dir), OovError);
}

TEST_CASE("proximity bias thresholds, denominator, and monotonicity") {
    Embedding emb = make_embedding(
        {"q", "n1", "n2", "n3"},
        {{1.0, 0.0, 0.0},
         {0.9, 0.43588989435, 0.0},   // |cos .4359| with g
         {0.95, 0.0, 0.3122498999},   // below tau = 0.4
         {0.9, 0.0, -0.43588989435}});
    GenderDirection dir;
    dir.g = {0.0, 1.0, 0.0};
    // k = 3: n1 bias .4359, n2 bias 0, n3 bias 0
    CHECK(proximity_bias(emb, dir, "q", 3, 0.4) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(proximity_bias(emb, dir, "q", 3, 0.99) == 0.0);
    // spec formula divides by k even when fewer neighbors exist
    CHECK(proximity_bias(emb, dir, "q", 30, 0.4) ==
          doctest::Approx(1.0 / 30.0));

    Embedding emb2 = random_unit_embedding(50, 8, 1001);
    GenderDirection dir2;
    dir2.g.assign(8, 0.0);
    dir2.g[0] = 1.0;
    double prev = 2.0;
    for (double tau = 0.05; tau <= 1.01; tau += 0.05) {
        double cur = proximity_bias(emb2, dir2, "w0", 20, tau);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(proximity_bias(emb2, dir2, "w0", 20, 1.0) == 0.0);
}

namespace {

// Test-side PCA oracle: power iteration with deflation on the centered
// covariance, assembled independently of the library path.
std::vector<std::vector<double>> pca_oracle(
    const std::vector<std::vector<double>>& unit_rows_in, int components) {
    const std::size_t n = unit_rows_in.size();
    const std::size_t dim = unit_rows_in[0].size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& r : unit_rows_in)
        for (std::size_t d = 0; d < dim; ++d) mean[d] += r[d] / n;
    std::vector<std::vector<double>> centered = unit_rows_in;
    for (auto& r : centered)
        for (std::size_t d = 0; d < dim; ++d) r[d] -= mean[d];

    Mat cov(dim, dim);
    for (const auto& r : centered)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                cov.at(i, j) += r[i] * r[j];

    std::vector<std::vector<double>> pcs;
    Rng rng(555);
    for (int c = 0; c < components; ++c) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.next_double() - 0.5;
        normalize(v);
        for (int it = 0; it < 5000; ++it) {
            std::vector<double> next(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    next[i] += cov.at(i, j) * v[j];
            normalize(next);
            v = next;
        }
        // deflate
        double lambda = 0.0;
        std::vector<double> cv(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) cv[i] += cov.at(i, j) * v[j];
        lambda = dot(cv, v);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                cov.at(i, j) -= lambda * v[i] * v[j];
        pcs.push_back(v);
    }
    // project
    std::vector<std::vector<double>> coords;
    for (const auto& r : centered) {
        std::vector<double> c;
        for (const auto& pc : pcs) c.push_back(dot(r, pc));
        coords.push_back(c);
    }
    return coords;
}

}  // namespace

TEST_CASE("pca projection preserves distances for planar unit vectors") {
    Rng rng(2025);
    const std::size_t dim = 40;
    // orthonormal basis of a random 2-D subspace
    std::vector<double> e1(dim), e2(dim);
    for (double& x : e1) x = gauss(rng);
    normalize(e1);
    for (double& x : e2) x = gauss(rng);
    double p = dot(e2, e1);
    for (std::size_t d = 0; d < dim; ++d) e2[d] -= p * e1[d];
    normalize(e2);

    std::vector<std::string> tokens;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 14; ++i) {
        double theta = 2.0 * 3.14159265358979323846 * i / 14.0 + 0.1;
        std::vector<double> v(dim);
        for (std::size_t d = 0; d < dim; ++d)
            v[d] = std::cos(theta) * e1[d] + std::sin(theta) * e2[d];
        tokens.push_back("w" + std::to_string(i));
        rows.push_back(v);
    }
    Embedding emb = make_embedding(tokens, rows);
    auto projected = pca_project(emb, tokens);
    REQUIRE(projected.size() == tokens.size());

    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double orig = 0.0;
            for (std::size_t d = 0; d < dim; ++d)
                orig += (rows[i][d] - rows[j][d]) * (rows[i][d] - rows[j][d]);
            double dx = projected[i].x - projected[j].x;
            double dy = projected[i].y - projected[j].y;
            CHECK(std::abs(std::sqrt(orig) - std::sqrt(dx * dx + dy * dy)) <
                  1e-8);
        }
    }
}

TEST_CASE("pca projection rejects degenerate sets") {
    Embedding dup = make_embedding(
        {"a", "b", "c"}, {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
    CHECK_THROWS_AS(pca_project(dup, dup.tokens()), DegenerateProjection);

    Embedding emb = random_unit_embedding(10, 4, 3);
    std::vector<std::string> too_few = {"w0", "w1", "missing_a", "missing_b"};
    CHECK_THROWS_AS(pca_project(emb, too_few), InsufficientWords);
}

TEST_CASE("pca projection matches the eigen oracle up to sign") {
    Embedding emb = random_unit_embedding(30, 15, 60);
    auto projected = pca_project(emb, emb.tokens());

    std::vector<std::vector<double>> unit_rows_in;
    for (std::size_t r = 0; r < emb.size(); ++r) {
        std::vector<double> v(emb.vector(r).begin(), emb.vector(r).end());
        normalize(v);
        unit_rows_in.push_back(v);
    }
    auto oracle = pca_oracle(unit_rows_in, 2);

    // align the oracle's signs with the library convention per column
    double sx = 1.0, sy = 1.0;
    if (std::abs(oracle[0][0]) > 1e-9 &&
        oracle[0][0] * projected[0].x < 0.0)
        sx = -1.0;
    if (std::abs(oracle[0][1]) > 1e-9 &&
        oracle[0][1] * projected[0].y < 0.0)
        sy = -1.0;
    for (std::size_t i = 0; i < projected.size(); ++i) {
        CHECK(std::abs(projected[i].x - sx * oracle[i][0]) < 1e-6);
        CHECK(std::abs(projected[i].y - sy * oracle[i][1]) < 1e-6);
    }
}
