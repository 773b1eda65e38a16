#ifndef COSEARCH_INTERPRET_H_
#define COSEARCH_INTERPRET_H_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cosearch/lemmatizer.h"
#include "cosearch/ontology.h"
#include "cosearch/types.h"

namespace cosearch {

// Concepts matched by one query phrase. A single-member group is an
// unambiguous reference; larger groups share the evidence equally.
struct RefGroup {
  ConceptSet concepts;

  Rational factor() const {
    return Rational(1, static_cast<std::int64_t>(concepts.size()));
  }
  bool ambiguous() const { return concepts.size() > 1; }
};

struct TokenSpan {
  std::size_t begin = 0;  // first token
  std::size_t end = 0;    // one past the last token
};

struct MatchedSpan {
  TokenSpan span;
  std::size_t group = 0;  // index into QueryInterpretation::groups
};

struct QueryInterpretation {
  // Distinct groups in order of first appearance. No concept of a singleton
  // group appears in any other group.
  std::vector<RefGroup> groups;
  std::vector<MatchedSpan> matched_tokens;

  bool empty() const { return groups.empty(); }

  // Every referenced concept, ambiguous or not.
  ConceptSet Concepts() const;
};

// Tokenizes, lemmatizes and greedily matches the longest indexed phrase at
// each position. Matched tokens are consumed, so a multi-word synonym wins
// over its component words.
QueryInterpretation InterpretQuery(const Ontology &ontology,
                                   std::string_view text,
                                   const Lemmatizer &lemmatizer = {});

// How extend treats an ambiguity set that shrinks to one member once its
// siblings get referenced unambiguously.
enum class ResidualMode {
  kPromote,  // the remaining member becomes unambiguous (default)
  kKeep,     // the remaining member stays as a one-element ambiguity set
};

// C@i: concepts referenced by the first i queries of a session.
class SessionConceptSet {
 public:
  const ConceptSet &unambiguous() const { return unambiguous_; }
  const std::set<ConceptSet> &ambiguity_sets() const { return ambiguity_sets_; }

  // unambiguous plus every ambiguity-set member.
  ConceptSet Flatten() const;
  bool empty() const { return unambiguous_.empty() && ambiguity_sets_.empty(); }

  // Folds one more query into the set.
  void Extend(const QueryInterpretation &query,
              ResidualMode mode = ResidualMode::kPromote);

  // Direct construction, mostly for tests. Normalizes through the same
  // resolution rules Extend applies.
  static SessionConceptSet Of(const ConceptSet &unambiguous,
                              const std::vector<ConceptSet> &ambiguity_sets,
                              ResidualMode mode = ResidualMode::kPromote);

  bool operator==(const SessionConceptSet &other) const = default;

 private:
  void MarkUnambiguous(const ConceptId &id, ResidualMode mode);
  void AddAmbiguous(ConceptSet members, ResidualMode mode);

  ConceptSet unambiguous_;
  std::set<ConceptSet> ambiguity_sets_;
};

SessionConceptSet ExtendSessionSet(SessionConceptSet current,
                                   const QueryInterpretation &query,
                                   ResidualMode mode = ResidualMode::kPromote);

// Renders C@i as "a b {c d}".
std::string FormatSessionSet(const SessionConceptSet &set);

}  // namespace cosearch

#endif  // COSEARCH_INTERPRET_H_
