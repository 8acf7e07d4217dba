#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fairembed {

// Gendered word pairs, file order preserved. Tokens are lowercase and unique
// across the whole list; a token may not collide with any pair's merged form
// "male_female" (that would break the idempotence of the merge transform).
struct PairLexicon {
    struct Pair {
        std::string male;
        std::string female;
        bool operator==(const Pair&) const = default;
    };
    std::vector<Pair> pairs;

    // Merged token for pair i, male-first by convention.
    std::string merged(std::size_t i) const {
        return pairs[i].male + "_" + pairs[i].female;
    }
    std::vector<std::string> all_tokens() const;
    void validate() const;
};

// Names above an occurrence threshold, minus exclusions. Names are lowercase
// and purely alphabetic.
struct NameSet {
    std::set<std::string> names;
    std::uint64_t threshold = 0;
    std::set<std::string> exclusions;

    void validate() const;
};

enum class Stereotype : std::uint8_t { male, female };

struct ProfessionSet {
    struct Entry {
        std::string token;
        Stereotype stereotype;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    void validate() const;
};

enum class SemBiasTag : std::uint8_t { definition, stereotype, none };

// Analogy instances: four word pairs each, exactly one tagged definition,
// one stereotype, two none.
struct SemBiasSet {
    struct PairEntry {
        std::string male;
        std::string female;
        SemBiasTag tag;
        bool operator==(const PairEntry&) const = default;
    };
    using Instance = std::vector<PairEntry>;  // always size 4
    std::vector<Instance> instances;

    void validate() const;
};

// WEAT target sets X, Y (equal size >= 2, disjoint) and attribute sets A, B.
struct WeatSpec {
    std::string name;
    std::vector<std::string> X, Y, A, B;

    void validate() const;
};

// --- loaders (UTF-8 line-based files; see per-format notes in README) ---

// Lines "male female", one space or tab separated.
PairLexicon load_pair_lexicon(const std::string& path);

// Aggregates SSA yobYYYY.txt files ("Name,Sex,Count" lines) under ssa_dir;
// keeps lowercase names whose total count over all years and both sexes
// exceeds `threshold`, minus `exclusions`.
NameSet build_name_set(const std::string& ssa_dir, std::uint64_t threshold,
                       const std::set<std::string>& exclusions);

// Plain list, one name per line.
NameSet load_name_set(const std::string& path);

// Lines "token m" / "token f".
ProfessionSet load_professions(const std::string& path);

// Blocks of four lines "male<TAB>female<TAB>tag" separated by blank lines;
// tag in {definition, stereotype, none}.
SemBiasSet load_sembias(const std::string& path);

// JSON document with keys X, Y, A, B (string arrays) and name.
WeatSpec load_weat_spec(const std::string& path);

// --- canonical savers; load(save(x)) is byte-identical ---

std::string save_pair_lexicon(const PairLexicon&);
std::string save_name_set(const NameSet&);
std::string save_professions(const ProfessionSet&);
std::string save_sembias(const SemBiasSet&);
std::string save_weat_spec(const WeatSpec&);

const char* to_string(SemBiasTag tag);
const char* to_string(Stereotype s);

}  // namespace fairembed
