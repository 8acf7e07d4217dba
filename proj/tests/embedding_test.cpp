#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fairembed/embedding.hpp"
#include "fairembed/errors.hpp"
#include "fairembed/rng.hpp"
#include "support/temp_dir.hpp"

using namespace fairembed;
using testsupport::TempDir;

namespace {

Embedding random_embedding(std::size_t count, std::size_t dim,
                           std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> tokens;
    Mat vectors(count, dim);
    for (std::size_t i = 0; i < count; ++i) {
        tokens.push_back("w" + std::to_string(i));
        for (std::size_t d = 0; d < dim; ++d)
            vectors.at(i, d) = (rng.next_double() - 0.5) * 20.0;
    }
    return Embedding(std::move(tokens), std::move(vectors));
}

}  // namespace

TEST_CASE("embedding lookup and oov behavior") {
    Embedding emb({"a", "b"}, [] {
        Mat m(2, 3);
        m.at(0, 0) = 1.0;
        m.at(1, 1) = 2.0;
        return m;
    }());
    CHECK(emb.contains("a"));
    CHECK(!emb.contains("z"));
    CHECK(emb.vector("b")[1] == 2.0);
    CHECK_THROWS_AS(emb.vector("z"), OovError);
}

TEST_CASE("duplicate tokens are rejected") {
    CHECK_THROWS_AS(Embedding({"a", "a"}, Mat(2, 2)), DuplicateToken);
}

TEST_CASE("save then load preserves tokens and values") {
    TempDir tmp("emb_io");
    Embedding emb = random_embedding(40, 7, 11);
    auto path = tmp.at("vec.txt");
    save_word2vec_text(emb, path);
    Embedding back = load_word2vec_text(path);
    REQUIRE(back.size() == emb.size());
    REQUIRE(back.dim() == emb.dim());
    for (std::size_t r = 0; r < emb.size(); ++r)
        CHECK(back.token(r) == emb.token(r));
}

TEST_CASE("save -> load -> save is byte-identical at 9 significant digits") {
    TempDir tmp("emb_roundtrip");
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Embedding emb = random_embedding(60, 9, seed);
        auto p1 = tmp.at("a" + std::to_string(seed) + ".txt");
        auto p2 = tmp.at("b" + std::to_string(seed) + ".txt");
        save_word2vec_text(emb, p1);
        save_word2vec_text(load_word2vec_text(p1), p2);
        CHECK(testsupport::read_file(p1) == testsupport::read_file(p2));
    }
}

TEST_CASE("special values survive the text format") {
    TempDir tmp("emb_special");
    Mat m(1, 6);
    m.at(0, 0) = 0.0;
    m.at(0, 1) = -0.0;
    m.at(0, 2) = 1e-300;
    m.at(0, 3) = -123456789.0;
    m.at(0, 4) = 0.1;
    m.at(0, 5) = 3.0;
    Embedding emb({"x"}, std::move(m));
    auto p1 = tmp.at("a.txt");
    auto p2 = tmp.at("b.txt");
    save_word2vec_text(emb, p1);
    save_word2vec_text(load_word2vec_text(p1), p2);
    CHECK(testsupport::read_file(p1) == testsupport::read_file(p2));
}

TEST_CASE("loader rejects malformed files") {
    TempDir tmp("emb_bad");
    CHECK_THROWS_AS(load_word2vec_text(tmp.at("missing.txt")), IoError);
    CHECK_THROWS_AS(load_word2vec_text(tmp.file("h.txt", "nonsense\n")),
                    ParseError);
    CHECK_THROWS_AS(
        load_word2vec_text(tmp.file("short.txt", "2 3\na 1 2 3\n")),
        ParseError);
    CHECK_THROWS_AS(
        load_word2vec_text(tmp.file("vals.txt", "1 3\na 1 x 3\n")),
        ParseError);
    CHECK_THROWS_AS(
        load_word2vec_text(tmp.file("extra.txt", "1 2\na 1 2 3\n")),
        ParseError);
}

TEST_CASE("unit_normalized leaves originals untouched") {
    Embedding emb = random_embedding(10, 4, 5);
    double before = emb.vector(std::size_t{0})[0];
    Embedding unit = emb.unit_normalized();
    CHECK(emb.vector(std::size_t{0})[0] == before);
    for (std::size_t r = 0; r < unit.size(); ++r)
        CHECK(std::abs(norm(unit.vector(r)) - 1.0) < 1e-12);
}
