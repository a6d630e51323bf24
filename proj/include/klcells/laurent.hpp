#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "klcells/errors.hpp"

namespace klcells {

using Coeff = boost::multiprecision::cpp_int;

// Exact Laurent polynomial in one variable v with integer coefficients.
// Terms are kept sorted by ascending exponent with no zero coefficients,
// so structural equality is semantic equality.
class LaurentPoly {
 public:
  using Term = std::pair<int, Coeff>;

  LaurentPoly() = default;

  static LaurentPoly from_int(long c) { return monomial(Coeff(c), 0); }

  static LaurentPoly monomial(Coeff c, int exp) {
    LaurentPoly p;
    if (c != 0) p.terms_.emplace_back(exp, std::move(c));
    return p;
  }

  // v^n
  static LaurentPoly v_power(int n) { return monomial(Coeff(1), n); }

  // v^n + v^-n for n != 0, 2 for n == 0
  static LaurentPoly v_plus_v_inverse(int n) {
    return v_power(n) + v_power(-n);
  }

  // v^n - v^-n; zero when n == 0
  static LaurentPoly v_minus_v_inverse(int n) {
    return v_power(n) - v_power(-n);
  }

  bool is_zero() const { return terms_.empty(); }

  bool is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
  }

  // Lowest/highest exponent; defined only for nonzero polynomials.
  int min_exp() const {
    require_nonzero("min_exp");
    return terms_.front().first;
  }
  int max_exp() const {
    require_nonzero("max_exp");
    return terms_.back().first;
  }

  Coeff coeff(int exp) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), exp,
        [](const Term& t, int e) { return t.first < e; });
    if (it != terms_.end() && it->first == exp) return it->second;
    return Coeff(0);
  }

  const std::vector<Term>& terms() const { return terms_; }

  size_t term_count() const { return terms_.size(); }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) {
    return !(a == b);
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    return merge(a, b, 1);
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    return merge(a, b, -1);
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    // dense convolution over the exponent range of the product
    int lo = a.terms_.front().first + b.terms_.front().first;
    int hi = a.terms_.back().first + b.terms_.back().first;
    std::vector<Coeff> acc(static_cast<size_t>(hi - lo + 1));
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_)
        acc[static_cast<size_t>(ta.first + tb.first - lo)] +=
            ta.second * tb.second;
    for (int e = lo; e <= hi; ++e) {
      Coeff& c = acc[static_cast<size_t>(e - lo)];
      if (c != 0) r.terms_.emplace_back(e, std::move(c));
    }
    return r;
  }

  LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
  LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }
  LaurentPoly& operator*=(const LaurentPoly& b) { return *this = *this * b; }

  // The ring involution v^n -> v^-n.
  LaurentPoly bar() const {
    LaurentPoly r;
    r.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
      r.terms_.emplace_back(-it->first, it->second);
    return r;
  }

  // Multiplication by v^k.
  LaurentPoly shifted(int k) const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.first += k;
    return r;
  }

  // Membership in v^-1 Z[v^-1] (all exponents < 0).  Zero qualifies.
  bool in_strictly_negative() const {
    return terms_.empty() || terms_.back().first < 0;
  }

  // Membership in Z[v^-1] (all exponents <= 0).
  bool in_nonpositive() const {
    return terms_.empty() || terms_.back().first <= 0;
  }

  // (part with exponents >= 0, part with exponents < 0); sum is *this.
  std::pair<LaurentPoly, LaurentPoly> split_nonneg() const {
    LaurentPoly neg, nonneg;
    for (const auto& t : terms_)
      (t.first < 0 ? neg : nonneg).terms_.push_back(t);
    return {nonneg, neg};
  }

  // Terms with exponent >= k.
  LaurentPoly part_at_least(int k) const {
    LaurentPoly r;
    for (const auto& t : terms_)
      if (t.first >= k) r.terms_.push_back(t);
    return r;
  }

  // Terms with exponent < k.
  LaurentPoly part_below(int k) const {
    LaurentPoly r;
    for (const auto& t : terms_)
      if (t.first < k) r.terms_.push_back(t);
    return r;
  }

  // Diagnostic rendering, e.g. "v^2 - 2 + v^-2".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      Coeff c = it->second;
      if (first) {
        if (c < 0) {
          os << "-";
          c = -c;
        }
      } else {
        os << (c < 0 ? " - " : " + ");
        if (c < 0) c = -c;
      }
      first = false;
      if (it->first == 0) {
        os << c;
      } else {
        if (c != 1) os << c << "*";
        os << "v";
        if (it->first != 1) os << "^" << it->first;
      }
    }
    return os.str();
  }

 private:
  void require_nonzero(const char* op) const {
    if (terms_.empty())
      throw KlError(ErrorCode::PreconditionViolated,
                    std::string(op) + " on zero polynomial");
  }

  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b,
                           int sign) {
    LaurentPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      bool take_a = j >= b.terms_.size() ||
                    (i < a.terms_.size() &&
                     a.terms_[i].first <= b.terms_[j].first);
      bool take_b = i >= a.terms_.size() ||
                    (j < b.terms_.size() &&
                     b.terms_[j].first <= a.terms_[i].first);
      if (take_a && take_b) {
        Coeff c = a.terms_[i].second +
                  (sign > 0 ? b.terms_[j].second : -b.terms_[j].second);
        if (c != 0) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
        ++i;
        ++j;
      } else if (take_a) {
        r.terms_.push_back(a.terms_[i++]);
      } else {
        r.terms_.emplace_back(
            b.terms_[j].first,
            sign > 0 ? b.terms_[j].second : -b.terms_[j].second);
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

enum class Region { strictly_negative, nonpositive };

inline bool region_test(const LaurentPoly& p, Region r) {
  return r == Region::strictly_negative ? p.in_strictly_negative()
                                        : p.in_nonpositive();
}

}  // namespace klcells
