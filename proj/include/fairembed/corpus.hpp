#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fairembed/lexicon.hpp"

namespace fairembed {

// Splits UTF-8 text on whitespace, lowercases ASCII letters, and strips
// every character outside [a-z0-9_<>] (the mask token "<ent>" and merged
// pair tokens survive). Throws IoError on structurally invalid UTF-8.
std::vector<std::string> tokenize(std::string_view text);

// Single pass over a token stream. `line_end` is set when the returned token
// is the last one on its source line.
class TokenReader {
  public:
    virtual ~TokenReader() = default;
    virtual bool next(std::string& token, bool& line_end) = 0;

    bool next(std::string& token) {
        bool ignored;
        return next(token, ignored);
    }
};

// Replayable ordered token sequence. open() starts a fresh pass; transforms
// wrap streams without buffering them, so passes cost O(1) memory.
class TokenStream {
  public:
    virtual ~TokenStream() = default;
    virtual std::unique_ptr<TokenReader> open() const = 0;

    // Disjoint shards covering the stream, for multi-worker training. The
    // base implementation puts everything in shard 0; file-backed streams
    // split by byte range.
    virtual std::unique_ptr<TokenReader> open_shard(unsigned shard,
                                                    unsigned shard_count) const;
};

// Tokenizes a raw UTF-8 text file (also an identity pass over corpora that
// are already whitespace-delimited token files).
class FileTokenStream : public TokenStream {
  public:
    explicit FileTokenStream(std::string path);
    std::unique_ptr<TokenReader> open() const override;
    std::unique_ptr<TokenReader> open_shard(unsigned shard,
                                            unsigned shard_count) const override;
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::uint64_t file_size_;
};

// In-memory stream, one vector of tokens per line. Test and small-input use.
class MemoryTokenStream : public TokenStream {
  public:
    explicit MemoryTokenStream(std::vector<std::vector<std::string>> lines)
        : lines_(std::move(lines)) {}
    explicit MemoryTokenStream(std::vector<std::string> tokens)
        : lines_{std::move(tokens)} {}
    std::unique_ptr<TokenReader> open() const override;

  private:
    std::vector<std::vector<std::string>> lines_;
};

// Replaces both members of every gendered pair with the pair's merged token.
// Length preserving and idempotent.
class MergeGenderPairs : public TokenStream {
  public:
    MergeGenderPairs(const TokenStream& parent, const PairLexicon& lex);
    std::unique_ptr<TokenReader> open() const override;
    std::unique_ptr<TokenReader> open_shard(unsigned shard,
                                            unsigned shard_count) const override;

  private:
    const TokenStream& parent_;
    std::unordered_map<std::string, std::string> replacement_;
};

// Replaces every token in the name set with the mask token. Length
// preserving and idempotent (mask tokens are never valid names).
class MaskNames : public TokenStream {
  public:
    MaskNames(const TokenStream& parent, const NameSet& names,
              std::string mask_token = "<ent>");
    std::unique_ptr<TokenReader> open() const override;
    std::unique_ptr<TokenReader> open_shard(unsigned shard,
                                            unsigned shard_count) const override;

  private:
    const TokenStream& parent_;
    const NameSet& names_;
    std::string mask_token_;
};

// Writes a stream as a plain token file: tokens joined by single spaces,
// source line structure preserved, token-less lines dropped.
void write_token_stream(const TokenStream& stream, const std::string& path);

// Convenience for tests: materialize a full pass.
std::vector<std::string> collect_tokens(const TokenStream& stream);

// Token -> (index, count) with a min-count floor. Indices are dense and
// assigned by descending count, ties broken lexicographically.
class Vocabulary {
  public:
    static Vocabulary build(const TokenStream& stream, std::uint64_t min_count);

    std::optional<std::uint32_t> index_of(std::string_view token) const;
    const std::string& token(std::uint32_t index) const {
        return tokens_[index];
    }
    std::uint64_t count(std::uint32_t index) const { return counts_[index]; }
    std::size_t size() const { return tokens_.size(); }

    // Every token seen in the stream, including dropped ones.
    std::uint64_t total_tokens() const { return total_tokens_; }
    // Sum of counts over kept tokens.
    std::uint64_t kept_tokens() const { return kept_tokens_; }
    std::uint64_t min_count() const { return min_count_; }

  private:
    std::vector<std::string> tokens_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::uint64_t total_tokens_ = 0;
    std::uint64_t kept_tokens_ = 0;
    std::uint64_t min_count_ = 1;
};

}  // namespace fairembed
