#pragma once

#include <stdexcept>
#include <string>

namespace fairembed {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File system / encoding failures. The CLI maps these to exit code 2.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Malformed input content (bad line, bad tag, bad number).
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_number(line) {}
    std::size_t line_number;
};

// Structurally valid input that violates a domain invariant.
struct SpecError : Error {
    explicit SpecError(const std::string& msg) : Error(msg) {}
};

struct DuplicateToken : SpecError {
    explicit DuplicateToken(const std::string& token)
        : SpecError("duplicate token across pairs: " + token), token(token) {}
    std::string token;
};

struct EmptyVocab : SpecError {
    explicit EmptyVocab(const std::string& msg) : SpecError(msg) {}
};

struct OovError : SpecError {
    explicit OovError(const std::string& word)
        : SpecError("word not in vocabulary: " + word), word(word) {}
    std::string word;
};

struct DegenerateDirection : SpecError {
    explicit DegenerateDirection(const std::string& msg) : SpecError(msg) {}
};

struct EqualizeDegenerate : SpecError {
    EqualizeDegenerate(const std::string& male, const std::string& female)
        : SpecError("equalize pair has no gender separation: (" + male + ", " +
                    female + ")") {}
};

struct DegenerateEffect : SpecError {
    explicit DegenerateEffect(const std::string& msg) : SpecError(msg) {}
};

struct InsufficientWords : SpecError {
    explicit InsufficientWords(const std::string& msg) : SpecError(msg) {}
};

struct UndefinedBias : SpecError {
    explicit UndefinedBias(const std::string& msg) : SpecError(msg) {}
};

struct DegenerateProjection : SpecError {
    explicit DegenerateProjection(const std::string& msg) : SpecError(msg) {}
};

struct ConfigError : SpecError {
    explicit ConfigError(const std::string& key_or_msg)
        : SpecError("config error: " + key_or_msg) {}
};

}  // namespace fairembed
