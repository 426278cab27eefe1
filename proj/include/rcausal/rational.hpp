// Exact rational scalars and vectors, plus the canonical formatting and
// normalization helpers used everywhere else in the library.
//
// Every arithmetic comparison that feeds a yes/no answer in this toolkit is
// done on GMP rationals.  Doubles appear only where a result is genuinely
// real-valued (entropies); they never steer a branch that decides geometry.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace rc {

using Rat = mpq_class;
using Vec = std::vector<Rat>;

inline int sign_of(const Rat& q) { return sgn(q); }

// Parse "n" or "n/d" with optional sign; throws std::runtime_error on
// malformed input or a zero denominator.
Rat rat_from_string(const std::string& s);

// Canonical export rendering: always "num/den", e.g. "3/2", "0/1", "-1/3".
std::string rat_to_den_string(const Rat& q);

// Compact rendering for human-facing listings: "3/2", "2", "0".
std::string rat_to_string(const Rat& q);

double to_double(const Rat& q);

Rat dot(const Vec& a, const Vec& b);

bool is_zero_vec(const Vec& v);

// Strict lexicographic order on vectors (shorter prefix wins on a tie).
bool lex_less(const Vec& a, const Vec& b);

// Scale v by a positive rational so that all entries are coprime integers.
// The zero vector is left alone.  If sign_normalize is set the vector is
// additionally flipped so its first nonzero entry is positive; that form is
// used for objects whose orientation carries no meaning (equality rows,
// lineality directions).
void normalize_primitive(Vec& v, bool sign_normalize = false);

// 64-bit FNV-1a over a byte string; used for stable content hashes embedded
// in reports.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace rc
