#ifndef COSEARCH_LEMMATIZER_H_
#define COSEARCH_LEMMATIZER_H_

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cosearch {

// Lowercases ASCII letters and splits on every run of characters that are
// not ASCII alphanumerics. Bytes >= 0x80 count as word characters so UTF-8
// words stay intact.
std::vector<std::string> Tokenize(std::string_view text);

// Dictionary lemmatizer with an English suffix-rule fallback.
class Lemmatizer {
 public:
  Lemmatizer() = default;

  // Reads `surface<TAB>lemma` lines. Blank lines and lines starting with '#'
  // are ignored.
  static Lemmatizer FromStream(std::istream &in);
  static Lemmatizer FromFile(const std::filesystem::path &path);

  void Add(std::string surface, std::string lemma);

  // `token` must be a non-empty lowercase word.
  std::string Lemmatize(std::string_view token) const;

  std::size_t dictionary_size() const { return dictionary_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> dictionary_;
};

// Suffix rules only (plural -s/-es/-ies, -ing, -ed); used when a token is not
// in the dictionary.
std::string ApplySuffixRules(std::string_view token);

}  // namespace cosearch

#endif  // COSEARCH_LEMMATIZER_H_
