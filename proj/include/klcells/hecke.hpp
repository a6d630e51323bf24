#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "klcells/coxeter.hpp"
#include "klcells/laurent.hpp"

namespace klcells {

enum class Basis { T, C };
enum class Side { left, right };

// An element of the Hecke algebra supported on the active ball: a finite
// map from ball elements to Laurent polynomials, tagged with the basis its
// coordinates refer to. Zero coefficients are never stored.
class HeckeElt {
 public:
  HeckeElt() = default;
  explicit HeckeElt(Basis b) : basis_(b) {}

  static HeckeElt unit(Basis b, int w) {
    HeckeElt h(b);
    h.coeffs_[w] = LaurentPoly::from_int(1);
    return h;
  }

  Basis basis() const { return basis_; }
  bool is_zero() const { return coeffs_.empty(); }
  size_t term_count() const { return coeffs_.size(); }
  const std::map<int, LaurentPoly>& coeffs() const { return coeffs_; }

  LaurentPoly coeff(int w) const {
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? LaurentPoly() : it->second;
  }

  void add_term(int w, const LaurentPoly& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = coeffs_.try_emplace(w, p);
    if (!fresh) {
      it->second += p;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  void set_term(int w, LaurentPoly p) {
    if (p.is_zero())
      coeffs_.erase(w);
    else
      coeffs_[w] = std::move(p);
  }

  // Largest support index; ball indices sort by (length, word), so this is
  // the triangular leading term. Defined only for nonzero elements.
  int leading_term() const {
    if (coeffs_.empty())
      throw KlError(ErrorCode::PreconditionViolated,
                    "leading_term of zero element");
    return coeffs_.rbegin()->first;
  }

  std::vector<int> support() const {
    std::vector<int> out;
    out.reserve(coeffs_.size());
    for (const auto& [w, p] : coeffs_) out.push_back(w);
    return out;
  }

  friend bool operator==(const HeckeElt& a, const HeckeElt& b) {
    return a.basis_ == b.basis_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const HeckeElt& a, const HeckeElt& b) {
    return !(a == b);
  }

  HeckeElt operator-() const {
    HeckeElt r(basis_);
    for (const auto& [w, p] : coeffs_) r.coeffs_.emplace(w, -p);
    return r;
  }

  friend HeckeElt operator+(const HeckeElt& a, const HeckeElt& b) {
    require_same_basis(a, b);
    HeckeElt r = a;
    for (const auto& [w, p] : b.coeffs_) r.add_term(w, p);
    return r;
  }

  friend HeckeElt operator-(const HeckeElt& a, const HeckeElt& b) {
    require_same_basis(a, b);
    HeckeElt r = a;
    for (const auto& [w, p] : b.coeffs_) r.add_term(w, -p);
    return r;
  }

  friend HeckeElt operator*(const HeckeElt& a, const LaurentPoly& c) {
    HeckeElt r(a.basis_);
    if (c.is_zero()) return r;
    for (const auto& [w, p] : a.coeffs_) r.coeffs_.emplace(w, p * c);
    return r;
  }
  friend HeckeElt operator*(const LaurentPoly& c, const HeckeElt& a) {
    return a * c;
  }

  HeckeElt& operator+=(const HeckeElt& b) { return *this = *this + b; }
  HeckeElt& operator-=(const HeckeElt& b) { return *this = *this - b; }

  std::string str(const BallTable& ball) const {
    if (coeffs_.empty()) return "0";
    std::string out;
    const char* sym = basis_ == Basis::T ? "T" : "C";
    for (const auto& [w, p] : coeffs_) {
      if (!out.empty()) out += " + ";
      out += "(" + p.str() + ")*" + sym + "[" + ball.word_str(w) + "]";
    }
    return out;
  }

 private:
  static void require_same_basis(const HeckeElt& a, const HeckeElt& b) {
    if (a.basis_ != b.basis_)
      throw KlError(ErrorCode::PreconditionViolated,
                    "mixed-basis arithmetic");
  }

  Basis basis_ = Basis::T;
  std::map<int, LaurentPoly> coeffs_;
};

// v^{L(s)} - v^{-L(s)}, the coefficient in the quadratic relation.
inline LaurentPoly xi_s(const CoxeterSystem& sys, int s) {
  return LaurentPoly::v_minus_v_inverse(static_cast<int>(sys.weight(s)));
}

// T-basis product with a single generator on the given side:
// T_s T_w = T_{sw} if sw > w, else T_{sw} + (v^{L(s)} - v^{-L(s)}) T_w.
inline HeckeElt t_mul_gen(const BallTable& ball, const HeckeElt& h, int s,
                          Side side) {
  if (h.basis() != Basis::T)
    throw KlError(ErrorCode::PreconditionViolated,
                  "t_mul_gen requires the standard basis");
  HeckeElt out(Basis::T);
  LaurentPoly xi = xi_s(ball.system(), s);
  for (const auto& [w, p] : h.coeffs()) {
    int ws = side == Side::left ? ball.left(w, s) : ball.right(w, s);
    if (ws == BallTable::out_of_ball)
      throw KlError(ErrorCode::SupportEscapesBall,
                    "product support reaches length " +
                        std::to_string(ball.length(w) + 1) +
                        " beyond radius " + std::to_string(ball.radius()));
    out.add_term(ws, p);
    if (ball.length(ws) < ball.length(w)) out.add_term(w, xi * p);
  }
  return out;
}

// Right multiplication by T_y along a reduced word of y.
inline HeckeElt t_mul_word(const BallTable& ball, HeckeElt h,
                           const std::vector<int>& letters, Side side) {
  if (side == Side::right) {
    for (int s : letters) h = t_mul_gen(ball, h, s, Side::right);
  } else {
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      h = t_mul_gen(ball, h, *it, Side::left);
  }
  return h;
}

// Exact product of two T-basis elements.
inline HeckeElt t_mul(const BallTable& ball, const HeckeElt& h1,
                      const HeckeElt& h2) {
  if (h1.basis() != Basis::T || h2.basis() != Basis::T)
    throw KlError(ErrorCode::PreconditionViolated,
                  "t_mul requires the standard basis");
  HeckeElt out(Basis::T);
  for (const auto& [y, b] : h2.coeffs())
    out += t_mul_word(ball, h1, ball.word(y), Side::right) * b;
  return out;
}

// Structure constant f_{x,y,z} with T_x T_y = sum_z f_{x,y,z} T_z.
inline LaurentPoly structure_f(const BallTable& ball, int x, int y, int z) {
  return t_mul(ball, HeckeElt::unit(Basis::T, x), HeckeElt::unit(Basis::T, y))
      .coeff(z);
}

// T-basis expansion of T_{w^-1}^{-1}: the image of T_w under the bar
// involution. Built along the word of w via T_s^{-1} = T_s - xi_s T_e.
inline HeckeElt inv_t(const BallTable& ball, int w) {
  HeckeElt h = HeckeElt::unit(Basis::T, 0);
  for (int s : ball.word(w)) {
    HeckeElt next = t_mul_gen(ball, h, s, Side::right);
    next -= h * xi_s(ball.system(), s);
    h = std::move(next);
  }
  return h;
}

// The bar involution on H: sum a_w T_w -> sum bar(a_w) T_{w^-1}^{-1}.
inline HeckeElt bar_involution(const BallTable& ball, const HeckeElt& h) {
  if (h.basis() != Basis::T)
    throw KlError(ErrorCode::PreconditionViolated,
                  "bar_involution requires the standard basis");
  HeckeElt out(Basis::T);
  for (const auto& [w, p] : h.coeffs()) out += inv_t(ball, w) * p.bar();
  return out;
}

// Maximum degree of f_{x,y,z} over the finite parabolic W_J: the bound N
// with v^-N f_{x,y,z} of nonpositive degree for all x, y, z in W_J.
inline long compute_bound(const BallTable& ball, uint32_t J) {
  CosetData cd = coset_data(ball, J);
  long best = 0;
  for (int x : cd.parabolic)
    for (int y : cd.parabolic) {
      HeckeElt prod = t_mul(ball, HeckeElt::unit(Basis::T, x),
                            HeckeElt::unit(Basis::T, y));
      for (const auto& [z, f] : prod.coeffs())
        if (!f.is_zero()) best = std::max(best, static_cast<long>(f.max_exp()));
    }
  return best;
}

}  // namespace klcells
