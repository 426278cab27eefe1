#include "rcausal/rational.hpp"

#include <stdexcept>

namespace rc {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::runtime_error("empty rational literal");
  std::string num = s, den = "1";
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  auto check_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!check_int(num) || !check_int(den))
    throw std::runtime_error("malformed rational literal: " + s);
  mpz_class n(num), d(den);
  if (d == 0) throw std::runtime_error("zero denominator in rational literal: " + s);
  Rat q(n, d);
  q.canonicalize();
  return q;
}

std::string rat_to_den_string(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string rat_to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rat& q) { return q.get_d(); }

Rat dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::runtime_error("dot: size mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

bool is_zero_vec(const Vec& v) {
  for (const Rat& q : v)
    if (sgn(q) != 0) return false;
  return true;
}

bool lex_less(const Vec& a, const Vec& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

void normalize_primitive(Vec& v, bool sign_normalize) {
  mpz_class lcm_den = 1, gcd_num = 0;
  for (const Rat& q : v)
    if (sgn(q) != 0) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());
  if (gcd_num == 0) {
    // compute gcd of scaled numerators
    for (const Rat& q : v) {
      if (sgn(q) == 0) continue;
      mpz_class scaled = q.get_num() * (lcm_den / q.get_den());
      mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), scaled.get_mpz_t());
    }
  }
  if (gcd_num == 0) return;  // zero vector
  Rat scale(lcm_den, gcd_num);
  scale.canonicalize();
  int first_sign = 0;
  for (Rat& q : v) {
    if (sgn(q) == 0) continue;
    q *= scale;
    if (first_sign == 0) first_sign = sgn(q);
  }
  if (sign_normalize && first_sign < 0)
    for (Rat& q : v) q = -q;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rc
