#ifndef COSEARCH_ONTOLOGY_H_
#define COSEARCH_ONTOLOGY_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cosearch/types.h"

namespace cosearch {

// One ontology entry. All vocabulary strings are lowercase, lemmatized and
// stored in token form (words joined by single spaces).
struct Concept {
  ConceptId id;
  std::string label;
  std::string lemma;
  std::vector<std::string> synonyms;
  std::vector<std::string> keywords;
  std::optional<std::string> description;

  // lemma, synonyms and keywords, sorted and duplicate-free.
  std::vector<std::string> Vocabulary() const;
};

// Immutable after construction; safe for concurrent reads.
class Ontology {
 public:
  // Validates and indexes the concepts. Throws ValidationError on an empty
  // concept list, duplicate/empty ids, empty labels or empty lemmas.
  explicit Ontology(std::vector<Concept> concepts);

  const std::vector<Concept> &concepts() const { return concepts_; }
  std::size_t size() const { return concepts_.size(); }

  // Concepts whose vocabulary contains `phrase` exactly (after the same
  // case/token normalization the loader applies). Sorted, no duplicates.
  ConceptSet Lookup(std::string_view phrase) const;

  bool Contains(const ConceptId &id) const;
  const Concept *Find(const ConceptId &id) const;

  // phrase -> concept ids, one entry per distinct vocabulary phrase.
  const std::map<std::string, ConceptSet, std::less<>> &lemma_index() const {
    return lemma_index_;
  }

  // Longest indexed phrase, in tokens. Bounds the interpreter's lookahead.
  std::size_t max_phrase_tokens() const { return max_phrase_tokens_; }

 private:
  std::vector<Concept> concepts_;
  std::map<ConceptId, std::size_t, std::less<>> by_id_;
  std::map<std::string, ConceptSet, std::less<>> lemma_index_;
  std::size_t max_phrase_tokens_ = 0;
};

// Drops a trailing language tag: "\"Kindergarten\"@en" -> "Kindergarten".
std::string_view StripLanguageTag(std::string_view s);

// Lowercases, drops a trailing language tag ("@en") and rewrites the phrase
// into token form: runs of non-alphanumeric characters become one space.
std::string NormalizePhrase(std::string_view raw);

// Ontology document: a JSON array of records with fields id, label, lemma,
// synonyms, keywords and optional description.
Ontology ParseOntology(std::istream &in);
Ontology LoadOntology(const std::filesystem::path &path);

void WriteOntology(const Ontology &ontology, std::ostream &out);
void SaveOntology(const Ontology &ontology, const std::filesystem::path &path);

}  // namespace cosearch

#endif  // COSEARCH_ONTOLOGY_H_
