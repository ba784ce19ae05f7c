#include "mograph/phrases.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mograph/errors.hpp"

namespace mograph {

using nlohmann::json;

void SemanticLexicon::validate() const {
    if (entries.empty()) throw SchemaError("lexicon has no entries");
    bool seen[3] = {false, false, false};
    for (const auto& [tag, entry] : entries) {
        if (tag.empty()) throw SchemaError("lexicon has an empty tag");
        if (entry.keywords.empty()) throw SchemaError("tag '" + tag + "' has no keywords");
        seen[static_cast<int>(entry.category)] = true;
    }
    if (!(seen[0] && seen[1] && seen[2])) {
        throw SchemaError("lexicon must cover the number, orientation and special families");
    }
}

std::string to_string(TagCategory category) {
    switch (category) {
        case TagCategory::number: return "number";
        case TagCategory::orientation: return "orientation";
        default: return "special";
    }
}

TagCategory tag_category_from_string(const std::string& s) {
    if (s == "number") return TagCategory::number;
    if (s == "orientation") return TagCategory::orientation;
    if (s == "special") return TagCategory::special;
    throw SchemaError("unknown tag category '" + s + "'");
}

SemanticLexicon default_lexicon() {
    SemanticLexicon lex;
    auto add = [&lex](const std::string& tag, TagCategory cat, std::vector<std::string> kw) {
        lex.entries[tag] = LexiconEntry{std::move(kw), cat};
    };
    add("number_one", TagCategory::number, {"one", "1"});
    add("number_two", TagCategory::number, {"two", "2"});
    add("number_three", TagCategory::number, {"three", "3"});
    add("number_four", TagCategory::number, {"four", "4"});
    add("number_five", TagCategory::number, {"five", "5"});
    add("number_six", TagCategory::number, {"six", "6"});
    add("number_seven", TagCategory::number, {"seven", "7"});
    add("number_eight", TagCategory::number, {"eight", "8"});
    add("number_nine", TagCategory::number, {"nine", "9"});
    add("number_ten", TagCategory::number, {"ten", "10"});
    add("left", TagCategory::orientation, {"left", "leftward"});
    add("right", TagCategory::orientation, {"right", "rightward"});
    add("up", TagCategory::orientation, {"up", "upward", "above"});
    add("down", TagCategory::orientation, {"down", "downward", "below"});
    add("front", TagCategory::orientation, {"front", "forward", "ahead"});
    add("back", TagCategory::orientation, {"back", "backward", "behind"});
    add("greeting", TagCategory::special, {"hello", "hi", "welcome"});
    add("farewell", TagCategory::special, {"goodbye", "bye", "farewell"});
    add("emphasis", TagCategory::special, {"really", "truly", "important"});
    add("negation", TagCategory::special, {"no", "not", "never"});
    add("agreement", TagCategory::special, {"yes", "agree", "okay"});
    add("question", TagCategory::special, {"why", "who", "when"});
    add("big", TagCategory::special, {"big", "huge", "large"});
    add("small", TagCategory::special, {"small", "tiny", "little"});
    return lex;
}

SemanticLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon " + path);
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed lexicon JSON: ") + e.what());
    }
    SemanticLexicon lex;
    for (const auto& [tag, jentry] : root.items()) {
        LexiconEntry entry;
        if (!jentry.contains("keywords")) throw SchemaError("lexicon tag '" + tag + "' needs keywords");
        for (const auto& kw : jentry["keywords"]) entry.keywords.push_back(kw.get<std::string>());
        entry.category = tag_category_from_string(jentry.value("category", "special"));
        lex.entries[tag] = std::move(entry);
    }
    lex.validate();
    return lex;
}

void save_lexicon(const SemanticLexicon& lexicon, const std::string& path) {
    json root = json::object();
    for (const auto& [tag, entry] : lexicon.entries) {
        root[tag] = {{"keywords", entry.keywords}, {"category", to_string(entry.category)}};
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write lexicon " + path);
    out << root.dump(2) << "\n";
}

std::vector<TimedWord> load_timed_words(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open script " + path);
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed script JSON: ") + e.what());
    }
    if (!root.is_array()) throw SchemaError("script must be an array of timed words");
    std::vector<TimedWord> words;
    for (const auto& jw : root) {
        if (!jw.contains("word") || !jw.contains("start") || !jw.contains("end")) {
            throw SchemaError("timed word needs word, start and end");
        }
        words.push_back({jw["word"].get<std::string>(), jw["start"].get<double>(),
                         jw["end"].get<double>()});
    }
    return words;
}

std::set<std::string> default_punctuation_breaks() { return {".", ",", ";", ":", "!", "?"}; }

std::vector<Phrase> split_phrases(const std::vector<TimedWord>& words, double max_gap_seconds,
                                  const std::set<std::string>& punctuation_breaks) {
    for (size_t i = 0; i < words.size(); ++i) {
        if (words[i].end < words[i].start || (i > 0 && words[i].start < words[i - 1].start)) {
            throw ValueError("timed words must be time-ordered");
        }
    }

    auto carries_break = [&punctuation_breaks](const std::string& w) {
        for (const auto& p : punctuation_breaks) {
            if (w.size() >= p.size() && w.compare(w.size() - p.size(), p.size(), p) == 0) return true;
        }
        return false;
    };

    std::vector<Phrase> phrases;
    Phrase current;
    bool open = false;
    for (size_t i = 0; i < words.size(); ++i) {
        const TimedWord& w = words[i];
        if (open && w.start - current.end_seconds > max_gap_seconds) {
            phrases.push_back(current);
            open = false;
        }
        if (!open) {
            current = Phrase{};
            current.index = static_cast<int>(phrases.size());
            current.start_seconds = w.start;
            open = true;
        } else {
            current.text += ' ';
        }
        current.text += w.word;
        current.end_seconds = w.end;
        if (carries_break(w.word)) {
            phrases.push_back(current);
            open = false;
        }
    }
    if (open) phrases.push_back(current);
    return phrases;
}

namespace {

std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Token index of the first whole-word occurrence, or -1.
int find_token_seq(const std::vector<std::string>& tokens, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > tokens.size()) return -1;
    for (size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
        bool match = true;
        for (size_t k = 0; k < needle.size(); ++k) {
            if (tokens[i + k] != needle[k]) {
                match = false;
                break;
            }
        }
        if (match) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

std::optional<std::string> detect_semantic_tag(const Phrase& phrase,
                                               const SemanticLexicon& lexicon) {
    const std::vector<std::string> tokens = tokenize_lower(phrase.text);
    int best_pos = -1;
    std::string best_tag;
    for (const auto& [tag, entry] : lexicon.entries) {
        for (const auto& keyword : entry.keywords) {
            const int pos = find_token_seq(tokens, tokenize_lower(keyword));
            if (pos < 0) continue;
            if (best_pos < 0 || pos < best_pos || (pos == best_pos && tag < best_tag)) {
                best_pos = pos;
                best_tag = tag;
            }
        }
    }
    if (best_pos < 0) return std::nullopt;
    return best_tag;
}

}  // namespace mograph
