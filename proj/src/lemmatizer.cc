#include "cosearch/lemmatizer.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <utility>

#include "cosearch/errors.h"

namespace cosearch {

namespace {

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool HasVowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return IsVowel(c) || c == 'y';
  });
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Irregular plurals the suffix rules would mangle.
constexpr std::array<std::pair<std::string_view, std::string_view>, 12>
    kIrregular = {{
        {"children", "child"},
        {"people", "person"},
        {"men", "man"},
        {"women", "woman"},
        {"feet", "foot"},
        {"teeth", "tooth"},
        {"mice", "mouse"},
        {"geese", "goose"},
        {"leaves", "leaf"},
        {"lives", "life"},
        {"wives", "wife"},
        {"knives", "knife"},
    }};

// running -> run, stopped -> stop; but not "fall" or "pass".
std::string Undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !IsVowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (IsWordByte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string ApplySuffixRules(std::string_view token) {
  for (const auto &[surface, lemma] : kIrregular) {
    if (token == surface) return std::string(lemma);
  }
  // Leave short words, numbers, codes and non-ASCII alone.
  if (token.size() <= 3) return std::string(token);
  if (std::any_of(token.begin(), token.end(), [](unsigned char c) {
        return (c >= '0' && c <= '9') || c >= 0x80;
      })) {
    return std::string(token);
  }

  const std::size_t n = token.size();
  if (EndsWith(token, "ies") && n > 4) {
    return std::string(token.substr(0, n - 3)) + "y";
  }
  if (EndsWith(token, "sses") || EndsWith(token, "xes") ||
      EndsWith(token, "ches") || EndsWith(token, "shes") ||
      EndsWith(token, "zzes")) {
    return std::string(token.substr(0, n - 2));
  }
  if (EndsWith(token, "s")) {
    if (EndsWith(token, "ss") || EndsWith(token, "us") ||
        EndsWith(token, "is")) {
      return std::string(token);
    }
    return std::string(token.substr(0, n - 1));
  }
  if (EndsWith(token, "ing") && n >= 6) {
    std::string_view stem = token.substr(0, n - 3);
    if (HasVowel(stem)) return Undouble(std::string(stem));
    return std::string(token);
  }
  if (EndsWith(token, "ed") && !EndsWith(token, "eed") && n >= 5) {
    std::string_view stem = token.substr(0, n - 2);
    if (HasVowel(stem)) return Undouble(std::string(stem));
  }
  return std::string(token);
}

Lemmatizer Lemmatizer::FromStream(std::istream &in) {
  Lemmatizer lemmatizer;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw FormatError("lemma dictionary line " + std::to_string(line_no) +
                        ": expected surface<TAB>lemma");
    }
    auto surface = Tokenize(std::string_view(line).substr(0, tab));
    auto lemma = Tokenize(std::string_view(line).substr(tab + 1));
    if (surface.size() != 1 || lemma.size() != 1) {
      throw FormatError("lemma dictionary line " + std::to_string(line_no) +
                        ": surface and lemma must be single words");
    }
    lemmatizer.Add(std::move(surface[0]), std::move(lemma[0]));
  }
  return lemmatizer;
}

Lemmatizer Lemmatizer::FromFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lemma dictionary " + path.string());
  return FromStream(in);
}

void Lemmatizer::Add(std::string surface, std::string lemma) {
  dictionary_.insert_or_assign(std::move(surface), std::move(lemma));
}

std::string Lemmatizer::Lemmatize(std::string_view token) const {
  if (auto it = dictionary_.find(token); it != dictionary_.end()) {
    return it->second;
  }
  return ApplySuffixRules(token);
}

}  // namespace cosearch
