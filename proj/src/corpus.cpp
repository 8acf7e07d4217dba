#include "fairembed/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "fairembed/errors.hpp"

namespace fairembed {

namespace {

inline bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
}

// Keeps [a-z0-9_<>], folds A-Z, drops everything else (returns 0).
inline char fold_char(unsigned char c) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
        c == '<' || c == '>')
        return static_cast<char>(c);
    if (c >= 'A' && c <= 'Z') return static_cast<char>(c + 32);
    return 0;
}

// Structural UTF-8 check, tracked byte by byte across buffer boundaries.
struct Utf8State {
    int pending = 0;  // continuation bytes still expected

    void feed(unsigned char c, std::uint64_t offset) {
        if (pending > 0) {
            if ((c & 0xC0) != 0x80) bad(offset);
            --pending;
            return;
        }
        if (c < 0x80) return;
        if ((c & 0xE0) == 0xC0) {
            if (c < 0xC2) bad(offset);
            pending = 1;
        } else if ((c & 0xF0) == 0xE0) {
            pending = 2;
        } else if ((c & 0xF8) == 0xF0) {
            if (c > 0xF4) bad(offset);
            pending = 3;
        } else {
            bad(offset);
        }
    }

    void finish() const {
        if (pending != 0) throw IoError("invalid UTF-8: truncated sequence");
    }

    [[noreturn]] static void bad(std::uint64_t offset) {
        throw IoError("invalid UTF-8 at byte " + std::to_string(offset));
    }
};

// Tokenizer over a byte range of a file. A token belongs to the shard where
// its whitespace-delimited chunk starts; chunks are folded through
// fold_char, and chunks that fold to nothing yield no token.
class FileReader : public TokenReader {
  public:
    FileReader(const std::string& path, std::uint64_t begin, std::uint64_t end)
        : in_(path, std::ios::binary), end_(end), offset_(begin) {
        if (!in_) throw IoError("cannot open file: " + path);
        if (begin > 0) {
            in_.seekg(static_cast<std::streamoff>(begin - 1));
            int prev = in_.get();
            if (prev == EOF) {
                eof_ = true;
                return;
            }
            // A chunk straddling the boundary belongs to the previous
            // shard; skip it unless the boundary is exactly a chunk start.
            if (!is_space(static_cast<unsigned char>(prev))) {
                int c;
                while ((c = in_.get()) != EOF) {
                    ++offset_;
                    if (is_space(static_cast<unsigned char>(c))) break;
                }
                if (c == EOF) {
                    eof_ = true;
                    return;
                }
            }
        }
    }

    bool next(std::string& token, bool& line_end) override {
        token.clear();
        line_end = false;
        while (!eof_) {
            // Skip whitespace to the next chunk.
            int c = get();
            while (c != EOF && is_space(static_cast<unsigned char>(c))) {
                advance();
                c = get();
            }
            if (c == EOF) {
                eof_ = true;
                break;
            }
            std::uint64_t chunk_start = offset_;
            if (chunk_start >= end_) {
                eof_ = true;
                break;
            }
            // Assemble the chunk.
            while (c != EOF && !is_space(static_cast<unsigned char>(c))) {
                utf8_.feed(static_cast<unsigned char>(c), offset_);
                char f = fold_char(static_cast<unsigned char>(c));
                if (f) token.push_back(f);
                advance();
                c = get();
            }
            bool saw_newline = false;
            // Consume the trailing whitespace run so line endings attach to
            // this token, and remember the first byte of the next chunk.
            while (c != EOF && is_space(static_cast<unsigned char>(c))) {
                if (c == '\n') saw_newline = true;
                advance();
                c = get();
            }
            if (c == EOF) {
                eof_ = true;
                saw_newline = true;
                utf8_.finish();
            } else {
                pushback_ = c;
            }
            if (!token.empty()) {
                line_end = saw_newline;
                return true;
            }
            // Chunk folded to nothing (pure punctuation); keep scanning.
        }
        return false;
    }

  private:
    int get() {
        if (pushback_ != -2) {
            int c = pushback_;
            pushback_ = -2;
            return c;
        }
        return in_.get();
    }
    void advance() { ++offset_; }

    std::ifstream in_;
    std::uint64_t end_;
    std::uint64_t offset_;
    int pushback_ = -2;
    bool eof_ = false;
    Utf8State utf8_;
};

class EmptyReader : public TokenReader {
  public:
    bool next(std::string&, bool&) override { return false; }
};

class MemoryReader : public TokenReader {
  public:
    explicit MemoryReader(const std::vector<std::vector<std::string>>& lines)
        : lines_(lines) {}

    bool next(std::string& token, bool& line_end) override {
        while (line_ < lines_.size()) {
            if (pos_ < lines_[line_].size()) {
                token = lines_[line_][pos_++];
                line_end = pos_ == lines_[line_].size();
                return true;
            }
            ++line_;
            pos_ = 0;
        }
        return false;
    }

  private:
    const std::vector<std::vector<std::string>>& lines_;
    std::size_t line_ = 0;
    std::size_t pos_ = 0;
};

class MappedReader : public TokenReader {
  public:
    using MapFn = std::function<void(std::string&)>;
    MappedReader(std::unique_ptr<TokenReader> parent, MapFn fn)
        : parent_(std::move(parent)), fn_(std::move(fn)) {}

    bool next(std::string& token, bool& line_end) override {
        if (!parent_->next(token, line_end)) return false;
        fn_(token);
        return true;
    }

  private:
    std::unique_ptr<TokenReader> parent_;
    MapFn fn_;
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    Utf8State utf8;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space(c)) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
            continue;
        }
        utf8.feed(c, i);
        char f = fold_char(c);
        if (f) cur.push_back(f);
    }
    utf8.finish();
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::unique_ptr<TokenReader> TokenStream::open_shard(
    unsigned shard, unsigned shard_count) const {
    if (shard_count == 0 || shard >= shard_count)
        throw std::invalid_argument("bad shard index");
    if (shard == 0) return open();
    return std::make_unique<EmptyReader>();
}

FileTokenStream::FileTokenStream(std::string path) : path_(std::move(path)) {
    std::error_code ec;
    auto size = std::filesystem::file_size(path_, ec);
    if (ec) throw IoError("cannot stat file: " + path_);
    file_size_ = size;
}

std::unique_ptr<TokenReader> FileTokenStream::open() const {
    return std::make_unique<FileReader>(path_, 0, file_size_);
}

std::unique_ptr<TokenReader> FileTokenStream::open_shard(
    unsigned shard, unsigned shard_count) const {
    if (shard_count == 0 || shard >= shard_count)
        throw std::invalid_argument("bad shard index");
    std::uint64_t begin = file_size_ * shard / shard_count;
    std::uint64_t end = file_size_ * (shard + 1) / shard_count;
    return std::make_unique<FileReader>(path_, begin, end);
}

std::unique_ptr<TokenReader> MemoryTokenStream::open() const {
    return std::make_unique<MemoryReader>(lines_);
}

MergeGenderPairs::MergeGenderPairs(const TokenStream& parent,
                                   const PairLexicon& lex)
    : parent_(parent) {
    lex.validate();
    for (std::size_t i = 0; i < lex.pairs.size(); ++i) {
        std::string merged = lex.merged(i);
        replacement_[lex.pairs[i].male] = merged;
        replacement_[lex.pairs[i].female] = merged;
    }
}

std::unique_ptr<TokenReader> MergeGenderPairs::open() const {
    return std::make_unique<MappedReader>(
        parent_.open(), [this](std::string& tok) {
            auto it = replacement_.find(tok);
            if (it != replacement_.end()) tok = it->second;
        });
}

std::unique_ptr<TokenReader> MergeGenderPairs::open_shard(
    unsigned shard, unsigned shard_count) const {
    return std::make_unique<MappedReader>(
        parent_.open_shard(shard, shard_count), [this](std::string& tok) {
            auto it = replacement_.find(tok);
            if (it != replacement_.end()) tok = it->second;
        });
}

MaskNames::MaskNames(const TokenStream& parent, const NameSet& names,
                     std::string mask_token)
    : parent_(parent), names_(names), mask_token_(std::move(mask_token)) {}

std::unique_ptr<TokenReader> MaskNames::open() const {
    return std::make_unique<MappedReader>(
        parent_.open(), [this](std::string& tok) {
            if (names_.names.count(tok)) tok = mask_token_;
        });
}

std::unique_ptr<TokenReader> MaskNames::open_shard(
    unsigned shard, unsigned shard_count) const {
    return std::make_unique<MappedReader>(
        parent_.open_shard(shard, shard_count), [this](std::string& tok) {
            if (names_.names.count(tok)) tok = mask_token_;
        });
}

void write_token_stream(const TokenStream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    auto reader = stream.open();
    std::string tok;
    bool line_end = false;
    bool first_on_line = true;
    while (reader->next(tok, line_end)) {
        if (!first_on_line) out << ' ';
        out << tok;
        if (line_end) {
            out << '\n';
            first_on_line = true;
        } else {
            first_on_line = false;
        }
    }
    if (!first_on_line) out << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::string> collect_tokens(const TokenStream& stream) {
    std::vector<std::string> out;
    auto reader = stream.open();
    std::string tok;
    while (reader->next(tok)) out.push_back(tok);
    return out;
}

Vocabulary Vocabulary::build(const TokenStream& stream,
                             std::uint64_t min_count) {
    if (min_count < 1) throw SpecError("min_count must be >= 1");
    Vocabulary v;
    v.min_count_ = min_count;

    std::unordered_map<std::string, std::uint64_t> counts;
    auto reader = stream.open();
    std::string tok;
    while (reader->next(tok)) {
        ++counts[tok];
        ++v.total_tokens_;
    }

    std::vector<std::pair<std::string, std::uint64_t>> kept;
    kept.reserve(counts.size());
    for (auto& [token, count] : counts)
        if (count >= min_count) kept.emplace_back(token, count);
    if (kept.empty())
        throw EmptyVocab("no token reaches min_count=" +
                         std::to_string(min_count));

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    v.tokens_.reserve(kept.size());
    v.counts_.reserve(kept.size());
    for (std::uint32_t i = 0; i < kept.size(); ++i) {
        v.index_.emplace(kept[i].first, i);
        v.tokens_.push_back(std::move(kept[i].first));
        v.counts_.push_back(kept[i].second);
        v.kept_tokens_ += kept[i].second;
    }
    return v;
}

std::optional<std::uint32_t> Vocabulary::index_of(
    std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

}  // namespace fairembed
