#include "fairembed/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fairembed/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace fairembed {

namespace {

std::string lowercase(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    return s;
}

bool all_alpha(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return c >= 'a' && c <= 'z'; });
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    return in;
}

// Splits on a run of spaces/tabs; trims trailing \r.
std::vector<std::string> split_fields(std::string line, char sep = '\0') {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        bool is_sep = sep ? (c == sep) : (c == ' ' || c == '\t');
        if (is_sep) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::vector<std::string> PairLexicon::all_tokens() const {
    std::vector<std::string> out;
    out.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
        out.push_back(p.male);
        out.push_back(p.female);
    }
    return out;
}

void PairLexicon::validate() const {
    if (pairs.empty()) throw SpecError("pair lexicon is empty");
    std::unordered_set<std::string> seen;
    std::unordered_set<std::string> merged_forms;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        merged_forms.insert(merged(i));
    for (const auto& p : pairs) {
        if (p.male == p.female)
            throw SpecError("pair has identical tokens: " + p.male);
        for (const std::string& tok : {p.male, p.female}) {
            if (tok.empty()) throw SpecError("empty token in pair lexicon");
            if (!seen.insert(tok).second) throw DuplicateToken(tok);
            if (merged_forms.count(tok)) throw DuplicateToken(tok);
        }
    }
}

void NameSet::validate() const {
    for (const std::string& n : names) {
        if (!all_alpha(n))
            throw SpecError("name is not lowercase alphabetic: " + n);
        if (exclusions.count(n))
            throw SpecError("name overlaps exclusions: " + n);
    }
}

void ProfessionSet::validate() const {
    if (entries.empty()) throw SpecError("profession set is empty");
    std::unordered_set<std::string> seen;
    bool has_m = false, has_f = false;
    for (const auto& e : entries) {
        if (!seen.insert(e.token).second) throw DuplicateToken(e.token);
        (e.stereotype == Stereotype::male ? has_m : has_f) = true;
    }
    if (!has_m || !has_f)
        throw SpecError("profession set must contain both stereotype classes");
}

void SemBiasSet::validate() const {
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const Instance& inst = instances[i];
        if (inst.size() != 4)
            throw SpecError("sembias instance " + std::to_string(i) +
                            " does not have 4 pairs");
        int def = 0, ster = 0, none = 0;
        for (const auto& p : inst) {
            switch (p.tag) {
                case SemBiasTag::definition: ++def; break;
                case SemBiasTag::stereotype: ++ster; break;
                case SemBiasTag::none: ++none; break;
            }
        }
        if (def != 1 || ster != 1 || none != 2)
            throw ParseError("sembias instance " + std::to_string(i) +
                             " tag multiset is not "
                             "{definition, stereotype, none, none}");
    }
}

void WeatSpec::validate() const {
    if (X.empty() || Y.empty() || A.empty() || B.empty())
        throw SpecError("weat spec has an empty word set");
    if (X.size() != Y.size())
        throw SpecError("weat target sets X and Y differ in size");
    if (X.size() < 2) throw SpecError("weat target sets need at least 2 words");
    std::unordered_set<std::string> x_set(X.begin(), X.end());
    if (x_set.size() != X.size()) throw SpecError("duplicate word in X");
    std::unordered_set<std::string> y_set(Y.begin(), Y.end());
    if (y_set.size() != Y.size()) throw SpecError("duplicate word in Y");
    for (const auto& w : Y)
        if (x_set.count(w)) throw SpecError("X and Y overlap on: " + w);
}

PairLexicon load_pair_lexicon(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    PairLexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 2)
            throw ParseError("expected 'male female'", lineno);
        lex.pairs.push_back({lowercase(fields[0]), lowercase(fields[1])});
    }
    lex.validate();
    return lex;
}

NameSet build_name_set(const std::string& ssa_dir, std::uint64_t threshold,
                       const std::set<std::string>& exclusions) {
    std::error_code ec;
    fs::directory_iterator it(ssa_dir, ec);
    if (ec) throw IoError("cannot read directory: " + ssa_dir);

    std::vector<fs::path> files;
    for (const auto& entry : it) {
        std::string fname = entry.path().filename().string();
        if (fname.rfind("yob", 0) == 0 && fname.size() > 4 &&
            fname.substr(fname.size() - 4) == ".txt")
            files.push_back(entry.path());
    }
    if (files.empty())
        throw IoError("no yobYYYY.txt files under: " + ssa_dir);
    std::sort(files.begin(), files.end());

    std::unordered_map<std::string, std::uint64_t> totals;
    for (const auto& file : files) {
        std::ifstream in = open_or_throw(file.string());
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto fields = split_fields(line, ',');
            if (fields.size() != 3)
                throw ParseError(file.filename().string() +
                                     ": expected 'Name,Sex,Count'",
                                 lineno);
            std::string name = lowercase(fields[0]);
            if (!all_alpha(name))
                throw ParseError(file.filename().string() +
                                     ": bad name field '" + fields[0] + "'",
                                 lineno);
            if (fields[1] != "M" && fields[1] != "F" && fields[1] != "m" &&
                fields[1] != "f")
                throw ParseError(file.filename().string() +
                                     ": bad sex field '" + fields[1] + "'",
                                 lineno);
            std::uint64_t count = 0;
            for (char c : fields[2]) {
                if (c < '0' || c > '9')
                    throw ParseError(file.filename().string() +
                                         ": bad count field '" + fields[2] +
                                         "'",
                                     lineno);
                count = count * 10 + static_cast<std::uint64_t>(c - '0');
            }
            totals[name] += count;
        }
    }

    NameSet out;
    out.threshold = threshold;
    out.exclusions = exclusions;
    for (const auto& [name, total] : totals)
        if (total > threshold && !exclusions.count(name))
            out.names.insert(name);
    out.validate();
    return out;
}

NameSet load_name_set(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    NameSet out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 1)
            throw ParseError("expected one name per line", lineno);
        std::string name = lowercase(fields[0]);
        if (!all_alpha(name))
            throw ParseError("name is not alphabetic: " + fields[0], lineno);
        out.names.insert(name);
    }
    out.validate();
    return out;
}

ProfessionSet load_professions(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    ProfessionSet out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 2)
            throw ParseError("expected 'token m|f'", lineno);
        std::string tag = lowercase(fields[1]);
        if (tag != "m" && tag != "f")
            throw ParseError("stereotype must be m or f, got '" + fields[1] +
                                 "'",
                             lineno);
        out.entries.push_back({lowercase(fields[0]), tag == "m"
                                                         ? Stereotype::male
                                                         : Stereotype::female});
    }
    out.validate();
    return out;
}

namespace {

SemBiasTag parse_tag(const std::string& s, std::size_t lineno) {
    if (s == "definition") return SemBiasTag::definition;
    if (s == "stereotype") return SemBiasTag::stereotype;
    if (s == "none") return SemBiasTag::none;
    throw ParseError("unknown sembias tag '" + s + "'", lineno);
}

}  // namespace

SemBiasSet load_sembias(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    SemBiasSet out;
    SemBiasSet::Instance current;
    std::string line;
    std::size_t lineno = 0;
    auto flush = [&]() {
        if (current.empty()) return;
        if (current.size() != 4)
            throw ParseError("sembias block has " +
                                 std::to_string(current.size()) +
                                 " pairs, expected 4",
                             lineno);
        out.instances.push_back(std::move(current));
        current.clear();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        auto fields = split_fields(line, '\t');
        if (fields.size() != 3)
            throw ParseError("expected 'male<TAB>female<TAB>tag'", lineno);
        current.push_back({lowercase(fields[0]), lowercase(fields[1]),
                           parse_tag(lowercase(fields[2]), lineno)});
    }
    flush();
    out.validate();
    return out;
}

WeatSpec load_weat_spec(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    WeatSpec spec;
    try {
        spec.name = doc.at("name").get<std::string>();
        const std::pair<const char*, std::vector<std::string>*> keys[] = {
            {"X", &spec.X}, {"Y", &spec.Y}, {"A", &spec.A}, {"B", &spec.B}};
        for (const auto& [key, dst] : keys) {
            for (const auto& w : doc.at(key))
                dst->push_back(lowercase(w.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("weat spec missing field: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string save_pair_lexicon(const PairLexicon& lex) {
    std::string out;
    for (const auto& p : lex.pairs) out += p.male + " " + p.female + "\n";
    return out;
}

std::string save_name_set(const NameSet& set) {
    std::string out;
    for (const auto& n : set.names) out += n + "\n";
    return out;
}

std::string save_professions(const ProfessionSet& set) {
    std::string out;
    for (const auto& e : set.entries)
        out += e.token + " " + to_string(e.stereotype) + "\n";
    return out;
}

std::string save_sembias(const SemBiasSet& set) {
    std::string out;
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
        if (i) out += "\n";
        for (const auto& p : set.instances[i])
            out += p.male + "\t" + p.female + "\t" + to_string(p.tag) + "\n";
    }
    return out;
}

std::string save_weat_spec(const WeatSpec& spec) {
    nlohmann::json doc;
    doc["name"] = spec.name;
    doc["X"] = spec.X;
    doc["Y"] = spec.Y;
    doc["A"] = spec.A;
    doc["B"] = spec.B;
    return doc.dump(2) + "\n";
}

const char* to_string(SemBiasTag tag) {
    switch (tag) {
        case SemBiasTag::definition: return "definition";
        case SemBiasTag::stereotype: return "stereotype";
        default: return "none";
    }
}

const char* to_string(Stereotype s) {
    return s == Stereotype::male ? "m" : "f";
}

}  // namespace fairembed
