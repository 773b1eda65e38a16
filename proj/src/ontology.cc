#include "cosearch/ontology.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cosearch/errors.h"
#include "cosearch/lemmatizer.h"
#include "json.hpp"

namespace cosearch {

using json = nlohmann::json;

namespace {

std::size_t CountTokens(std::string_view phrase) {
  if (phrase.empty()) return 0;
  return static_cast<std::size_t>(
             std::count(phrase.begin(), phrase.end(), ' ')) + 1;
}

std::string Join(const std::vector<std::string> &tokens) {
  std::string out;
  for (const auto &t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

void NormalizeList(std::vector<std::string> *list) {
  std::vector<std::string> out;
  for (const auto &raw : *list) {
    std::string phrase = NormalizePhrase(raw);
    if (!phrase.empty()) out.push_back(std::move(phrase));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  *list = std::move(out);
}

bool HasControlSeparator(std::string_view s) {
  return s.find_first_of("\t\n\r") != std::string_view::npos;
}

// Byte offset -> "line L, column C" for parse error messages.
std::string Position(const std::string &text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string RequireString(const json &record, const char *field,
                          const std::string &where) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw FormatError(where + ": missing field '" + field + "'");
  }
  if (!it->is_string()) {
    throw FormatError(where + ": field '" + field + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> OptionalStringArray(const json &record,
                                             const char *field,
                                             const std::string &where) {
  std::vector<std::string> out;
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw FormatError(where + ": field '" + field +
                      "' must be an array of strings");
  }
  for (const auto &v : *it) {
    if (!v.is_string()) {
      throw FormatError(where + ": field '" + field +
                        "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view StripLanguageTag(std::string_view s) {
  auto at = s.rfind('@');
  if (at == std::string_view::npos || at + 1 >= s.size()) return s;
  std::string_view tag = s.substr(at + 1);
  bool is_tag = tag.size() <= 8 &&
                std::all_of(tag.begin(), tag.end(), [](unsigned char c) {
                  return std::isalpha(c) || c == '-';
                });
  if (!is_tag) return s;
  s = s.substr(0, at);
  // "Kindergarten"@en
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::string NormalizePhrase(std::string_view raw) {
  return Join(Tokenize(StripLanguageTag(raw)));
}

std::vector<std::string> Concept::Vocabulary() const {
  std::vector<std::string> vocab;
  vocab.reserve(1 + synonyms.size() + keywords.size());
  vocab.push_back(lemma);
  vocab.insert(vocab.end(), synonyms.begin(), synonyms.end());
  vocab.insert(vocab.end(), keywords.begin(), keywords.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  return vocab;
}

Ontology::Ontology(std::vector<Concept> concepts)
    : concepts_(std::move(concepts)) {
  if (concepts_.empty()) {
    throw ValidationError("ontology has no concepts");
  }
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    Concept &c = concepts_[i];
    const std::string where = "concept #" + std::to_string(i);
    if (c.id.empty()) throw ValidationError(where + ": empty id");
    if (HasControlSeparator(c.id)) {
      throw ValidationError(where + ": id '" + c.id +
                            "' contains a tab or newline");
    }
    c.label = std::string(StripLanguageTag(c.label));
    if (c.description) {
      c.description = std::string(StripLanguageTag(*c.description));
    }
    if (c.label.empty()) {
      throw ValidationError(where + " ('" + c.id + "'): empty label");
    }
    c.lemma = NormalizePhrase(c.lemma);
    if (c.lemma.empty()) {
      throw ValidationError(where + " ('" + c.id + "'): empty lemma");
    }
    NormalizeList(&c.synonyms);
    NormalizeList(&c.keywords);
    if (!by_id_.emplace(c.id, i).second) {
      throw ValidationError("duplicate concept id '" + c.id + "'");
    }
    for (const auto &phrase : c.Vocabulary()) {
      lemma_index_[phrase].insert(c.id);
      max_phrase_tokens_ = std::max(max_phrase_tokens_, CountTokens(phrase));
    }
  }
}

ConceptSet Ontology::Lookup(std::string_view phrase) const {
  auto it = lemma_index_.find(phrase);
  if (it != lemma_index_.end()) return it->second;
  // Not already in token form; normalize and retry.
  std::string normalized = NormalizePhrase(phrase);
  if (normalized == phrase) return {};
  it = lemma_index_.find(normalized);
  return it == lemma_index_.end() ? ConceptSet{} : it->second;
}

bool Ontology::Contains(const ConceptId &id) const {
  return by_id_.count(id) > 0;
}

const Concept *Ontology::Find(const ConceptId &id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &concepts_[it->second];
}

Ontology ParseOntology(std::istream &in) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw FormatError("ontology: malformed document at " +
                      Position(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
  if (!doc.is_array()) {
    throw FormatError("ontology: top-level value must be an array of records");
  }
  std::vector<Concept> concepts;
  concepts.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json &record = doc[i];
    std::string where = "ontology record " + std::to_string(i);
    if (!record.is_object()) throw FormatError(where + ": not an object");
    if (auto id = record.find("id"); id != record.end() && id->is_string()) {
      where += " (id '" + id->get<std::string>() + "')";
    }
    Concept c;
    c.id = RequireString(record, "id", where);
    c.label = RequireString(record, "label", where);
    c.lemma = RequireString(record, "lemma", where);
    c.synonyms = OptionalStringArray(record, "synonyms", where);
    c.keywords = OptionalStringArray(record, "keywords", where);
    if (auto d = record.find("description"); d != record.end() && !d->is_null()) {
      if (!d->is_string()) {
        throw FormatError(where + ": field 'description' must be a string");
      }
      c.description = d->get<std::string>();
    }
    concepts.push_back(std::move(c));
  }
  return Ontology(std::move(concepts));
}

Ontology LoadOntology(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ontology file " + path.string());
  return ParseOntology(in);
}

void WriteOntology(const Ontology &ontology, std::ostream &out) {
  json doc = json::array();
  for (const auto &c : ontology.concepts()) {
    json record = {{"id", c.id},
                   {"label", c.label},
                   {"lemma", c.lemma},
                   {"synonyms", c.synonyms},
                   {"keywords", c.keywords}};
    if (c.description) record["description"] = *c.description;
    doc.push_back(std::move(record));
  }
  out << doc.dump(2) << '\n';
}

void SaveOntology(const Ontology &ontology, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write ontology file " + path.string());
  WriteOntology(ontology, out);
}

}  // namespace cosearch
