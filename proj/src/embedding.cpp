#include "fairembed/embedding.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "fairembed/errors.hpp"

namespace fairembed {

Embedding::Embedding(std::vector<std::string> tokens, Mat vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
    if (tokens_.size() != vectors_.rows())
        throw SpecError("token count and vector rows differ");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (!index_.emplace(tokens_[i], i).second)
            throw DuplicateToken(tokens_[i]);
    }
}

std::optional<std::size_t> Embedding::row_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const double> Embedding::vector(std::string_view token) const {
    auto row = row_of(token);
    if (!row) throw OovError(std::string(token));
    return vectors_.row_span(*row);
}

Embedding Embedding::unit_normalized() const {
    Embedding out = *this;
    for (std::size_t r = 0; r < out.size(); ++r)
        normalize(out.vectors_.row_span(r));
    return out;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void save_word2vec_text(const Embedding& emb, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << emb.size() << ' ' << emb.dim() << '\n';
    char buf[40];
    for (std::size_t r = 0; r < emb.size(); ++r) {
        out << emb.token(r);
        for (double v : emb.vector(r)) {
            std::snprintf(buf, sizeof(buf), " %.9g", v);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

Embedding load_word2vec_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);

    std::string header;
    if (!std::getline(in, header))
        throw ParseError("missing embedding header", 1);
    std::uint64_t count = 0, dim = 0;
    if (std::sscanf(header.c_str(), "%" SCNu64 " %" SCNu64, &count, &dim) != 2)
        throw ParseError("bad embedding header '" + header + "'", 1);
    if (dim == 0) throw ParseError("embedding dimension is zero", 1);

    std::vector<std::string> tokens;
    tokens.reserve(count);
    Mat vectors(count, dim);

    std::string line;
    for (std::uint64_t r = 0; r < count; ++r) {
        if (!std::getline(in, line))
            throw ParseError("expected " + std::to_string(count) +
                                 " embedding rows, got " + std::to_string(r),
                             r + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const char* p = line.c_str();
        const char* sp = std::strchr(p, ' ');
        if (!sp) throw ParseError("embedding row without values", r + 2);
        tokens.emplace_back(p, sp - p);
        char* cursor = const_cast<char*>(sp);
        double* row = vectors.row(r);
        for (std::uint64_t d = 0; d < dim; ++d) {
            char* next = nullptr;
            double v = std::strtod(cursor, &next);
            if (next == cursor)
                throw ParseError("bad value in embedding row for token '" +
                                     tokens.back() + "'",
                                 r + 2);
            row[d] = v;
            cursor = next;
        }
        while (*cursor == ' ') ++cursor;
        if (*cursor != '\0')
            throw ParseError("trailing data in embedding row for token '" +
                                 tokens.back() + "'",
                             r + 2);
    }
    return Embedding(std::move(tokens), std::move(vectors));
}

}  // namespace fairembed
