#ifndef COSEARCH_TYPES_H_
#define COSEARCH_TYPES_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace cosearch {

// Opaque, stable ontology concept identifier.
using ConceptId = std::string;
using ConceptSet = std::set<ConceptId>;

// Exact evidence values. Denominators are ambiguity-set sizes, so they stay
// tiny and 64-bit arithmetic never overflows in practice.
using Rational = boost::rational<std::int64_t>;

inline double ToDouble(const Rational &r) {
  return boost::rational_cast<double>(r);
}

}  // namespace cosearch

#endif  // COSEARCH_TYPES_H_
