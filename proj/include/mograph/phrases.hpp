#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mograph {

/// One word of the timed script, seconds relative to the audio start.
struct TimedWord {
    std::string word;
    double start = 0.0;
    double end = 0.0;
};

struct Phrase {
    int index = 0;
    std::string text;
    double start_seconds = 0.0;
    double end_seconds = 0.0;
    std::optional<std::string> semantic_tag;

    double duration_seconds() const { return end_seconds - start_seconds; }
};

enum class TagCategory { number, orientation, special };

struct LexiconEntry {
    std::vector<std::string> keywords;
    TagCategory category = TagCategory::special;
};

/// Tag -> keywords mapping covering the number / orientation / special
/// action families. Tags are unique by map construction.
struct SemanticLexicon {
    std::map<std::string, LexiconEntry> entries;

    bool has_tag(const std::string& tag) const { return entries.count(tag) > 0; }
    void validate() const;
};

/// The built-in 24-tag lexicon (ten numbers, six orientations, eight
/// special actions). Contents are configuration; ship your own to replace it.
SemanticLexicon default_lexicon();

SemanticLexicon load_lexicon(const std::string& path);
void save_lexicon(const SemanticLexicon& lexicon, const std::string& path);

std::vector<TimedWord> load_timed_words(const std::string& path);

/// Splits the timed word list at break punctuation and at silences longer
/// than max_gap_seconds. Every word lands in exactly one phrase.
std::vector<Phrase> split_phrases(const std::vector<TimedWord>& words,
                                  double max_gap_seconds,
                                  const std::set<std::string>& punctuation_breaks);

std::set<std::string> default_punctuation_breaks();

/// Case-insensitive whole-word keyword search. Earliest keyword occurrence
/// wins; ties break toward the lexicographically smaller tag.
std::optional<std::string> detect_semantic_tag(const Phrase& phrase,
                                               const SemanticLexicon& lexicon);

std::string to_string(TagCategory category);
TagCategory tag_category_from_string(const std::string& s);

}  // namespace mograph
