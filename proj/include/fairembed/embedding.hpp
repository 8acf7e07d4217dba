#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairembed/linalg.hpp"

namespace fairembed {

// A token-indexed vector table: the exported artifact of training and the
// input to debiasing and every bias metric. Row order is preserved exactly
// as loaded/constructed.
class Embedding {
  public:
    Embedding() = default;
    Embedding(std::vector<std::string> tokens, Mat vectors);

    std::size_t size() const { return tokens_.size(); }
    std::size_t dim() const { return vectors_.cols(); }

    const std::string& token(std::size_t row) const { return tokens_[row]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::optional<std::size_t> row_of(std::string_view token) const;
    bool contains(std::string_view token) const {
        return row_of(token).has_value();
    }

    std::span<const double> vector(std::size_t row) const {
        return vectors_.row_span(row);
    }
    std::span<double> vector(std::size_t row) {
        return vectors_.row_span(row);
    }
    // Throws OovError when the token is unknown.
    std::span<const double> vector(std::string_view token) const;

    const Mat& matrix() const { return vectors_; }
    Mat& matrix() { return vectors_; }

    // Copy with every row scaled to unit norm (zero rows left as-is).
    Embedding unit_normalized() const;

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
    Mat vectors_;
};

// word2vec text format: header "count dim", then one "token v1 ... vdim"
// line per row, values printed with 9 significant digits. save(load(f))
// reproduces f byte-identically for files produced by save().
Embedding load_word2vec_text(const std::string& path);
void save_word2vec_text(const Embedding& emb, const std::string& path);

// Formatting used for every value in the text format.
std::string format_value(double v);

}  // namespace fairembed
