#include "cosearch/interpret.h"

#include <algorithm>
#include <map>

namespace cosearch {

ConceptSet QueryInterpretation::Concepts() const {
  ConceptSet out;
  for (const auto &g : groups) out.insert(g.concepts.begin(), g.concepts.end());
  return out;
}

QueryInterpretation InterpretQuery(const Ontology &ontology,
                                   std::string_view text,
                                   const Lemmatizer &lemmatizer) {
  std::vector<std::string> lemmas = Tokenize(text);
  for (auto &token : lemmas) token = lemmatizer.Lemmatize(token);

  // Longest match first; matched tokens are not reused.
  std::vector<TokenSpan> spans;
  std::vector<ConceptSet> sets;
  const auto &index = ontology.lemma_index();
  const std::size_t n = lemmas.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t longest = std::min(ontology.max_phrase_tokens(), n - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      std::string phrase = lemmas[i];
      for (std::size_t k = 1; k < len; ++k) phrase += ' ' + lemmas[i + k];
      auto it = index.find(phrase);
      if (it != index.end()) {
        spans.push_back({i, i + len});
        sets.push_back(it->second);
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }

  // Within-query resolution: members of singleton groups leave the
  // ambiguous groups; a group shrunk to one member becomes a singleton
  // itself, so iterate to a fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    ConceptSet singles;
    for (const auto &s : sets) {
      if (s.size() == 1) singles.insert(*s.begin());
    }
    for (auto &s : sets) {
      if (s.size() <= 1) continue;
      for (const auto &id : singles) changed |= s.erase(id) > 0;
    }
  }

  QueryInterpretation result;
  std::map<ConceptSet, std::size_t> group_of;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].empty()) continue;
    auto [it, inserted] = group_of.emplace(sets[k], result.groups.size());
    if (inserted) result.groups.push_back(RefGroup{sets[k]});
    result.matched_tokens.push_back({spans[k], it->second});
  }
  return result;
}

ConceptSet SessionConceptSet::Flatten() const {
  ConceptSet out = unambiguous_;
  for (const auto &s : ambiguity_sets_) out.insert(s.begin(), s.end());
  return out;
}

void SessionConceptSet::MarkUnambiguous(const ConceptId &id, ResidualMode mode) {
  if (!unambiguous_.insert(id).second) return;
  std::set<ConceptSet> kept;
  std::vector<ConceptId> promoted;
  for (ConceptSet s : ambiguity_sets_) {
    if (s.erase(id) == 0) {
      kept.insert(std::move(s));
    } else if (s.size() >= 2 || (s.size() == 1 && mode == ResidualMode::kKeep)) {
      kept.insert(std::move(s));
    } else if (s.size() == 1) {
      promoted.push_back(*s.begin());
    }
  }
  ambiguity_sets_ = std::move(kept);
  for (const auto &p : promoted) MarkUnambiguous(p, mode);
}

void SessionConceptSet::AddAmbiguous(ConceptSet members, ResidualMode mode) {
  for (auto it = members.begin(); it != members.end();) {
    it = unambiguous_.count(*it) ? members.erase(it) : std::next(it);
  }
  if (members.empty()) return;
  if (members.size() == 1 && mode == ResidualMode::kPromote) {
    MarkUnambiguous(*members.begin(), mode);
    return;
  }
  ambiguity_sets_.insert(std::move(members));
}

void SessionConceptSet::Extend(const QueryInterpretation &query,
                               ResidualMode mode) {
  for (const auto &g : query.groups) {
    if (g.concepts.size() == 1) MarkUnambiguous(*g.concepts.begin(), mode);
  }
  for (const auto &g : query.groups) {
    if (g.concepts.size() > 1) AddAmbiguous(g.concepts, mode);
  }
}

SessionConceptSet SessionConceptSet::Of(
    const ConceptSet &unambiguous, const std::vector<ConceptSet> &ambiguity_sets,
    ResidualMode mode) {
  SessionConceptSet out;
  for (const auto &id : unambiguous) out.MarkUnambiguous(id, mode);
  for (const auto &s : ambiguity_sets) out.AddAmbiguous(s, mode);
  return out;
}

SessionConceptSet ExtendSessionSet(SessionConceptSet current,
                                   const QueryInterpretation &query,
                                   ResidualMode mode) {
  current.Extend(query, mode);
  return current;
}

std::string FormatSessionSet(const SessionConceptSet &set) {
  std::string out;
  auto append = [&out](const std::string &s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  for (const auto &id : set.unambiguous()) append(id);
  for (const auto &amb : set.ambiguity_sets()) {
    std::string group = "{";
    for (const auto &id : amb) {
      if (group.size() > 1) group += ' ';
      group += id;
    }
    append(group + "}");
  }
  return out;
}

}  // namespace cosearch
