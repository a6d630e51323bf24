#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "klcells/hecke.hpp"

namespace klcells {

enum class MulKind { Cs_Cw, Ts_Cw, Cw_Cs, Cw_Ts };

// Memoized Kazhdan-Lusztig data over one ball: canonical basis elements
// C_w in T-basis coordinates, the P/M/R polynomial tables, the bar
// involution, and the structural products of C-basis elements.
//
// Population is lazy and single-threaded; computed strata are immutable.
// Cached values are audited on insertion: P-triangularity and the M window
// always, bar-invariance of C_w for lengths up to audit_bound.
class KLCache {
 public:
  explicit KLCache(const BallTable& ball, int audit_bound = 12)
      : ball_(ball),
        audit_bound_(audit_bound),
        c_table_(static_cast<size_t>(ball.size())),
        c_done_(static_cast<size_t>(ball.size()), 0),
        invt_table_(static_cast<size_t>(ball.size())),
        invt_done_(static_cast<size_t>(ball.size()), 0) {}

  const BallTable& ball() const { return ball_; }

  // T-basis expansion of T_{w^-1}^{-1} (the bar image of T_w), memoized
  // along canonical-word prefixes.
  const HeckeElt& inv_t_row(int w) {
    size_t uw = static_cast<size_t>(w);
    if (invt_done_[uw]) return invt_table_[uw];
    if (w == 0) {
      invt_table_[uw] = HeckeElt::unit(Basis::T, 0);
    } else {
      int last = ball_.word(w).back();
      const HeckeElt& parent = inv_t_row(ball_.right(w, last));
      HeckeElt row = t_mul_gen(ball_, parent, last, Side::right);
      row -= parent * xi_s(ball_.system(), last);
      invt_table_[uw] = std::move(row);
    }
    invt_done_[uw] = 1;
    return invt_table_[uw];
  }

  HeckeElt bar(const HeckeElt& h) {
    if (h.basis() != Basis::T)
      throw KlError(ErrorCode::PreconditionViolated,
                    "bar requires the standard basis");
    HeckeElt out(Basis::T);
    for (const auto& [w, p] : h.coeffs()) out += inv_t_row(w) * p.bar();
    return out;
  }

  // R_{x,y}: T_{y^-1}^{-1} = T_y + sum_{z<y} bar(R_{z,y}) T_z.
  LaurentPoly r_poly(int x, int y) {
    if (x == y) return LaurentPoly::from_int(1);
    if (!ball_.bruhat_leq(x, y)) return LaurentPoly();
    return inv_t_row(y).coeff(x).bar();
  }

  // T-basis expansion of the canonical basis element C_w.
  const HeckeElt& c_elt(int w) {
    size_t uw = static_cast<size_t>(w);
    if (c_done_[uw]) return c_table_[uw];
    HeckeElt h(Basis::T);
    if (w == 0) {
      h = HeckeElt::unit(Basis::T, 0);
    } else {
      // C_w = C_s C_{sw} - sum_z M^s_{z,sw} C_z for the ShortLex-least
      // left descent s (the first letter of the canonical word)
      int s = ball_.word(w)[0];
      int w1 = ball_.left(w, s);
      const HeckeElt base = c_elt(w1);
      h = t_mul_gen(ball_, base, s, Side::left);
      h += base * LaurentPoly::v_power(
                      -static_cast<int>(ball_.system().weight(s)));
      for (int z = 0; z < ball_.size(); ++z) {
        if (ball_.length(z) >= ball_.length(w1)) break;
        if (!ball_.is_left_descent(z, s)) continue;
        if (!ball_.bruhat_leq(z, w1)) continue;
        LaurentPoly m = m_poly(s, z, w1, Side::left);
        if (!m.is_zero()) h -= c_elt(z) * m;
      }
      audit_c(w, h);
    }
    c_table_[uw] = std::move(h);
    c_done_[uw] = 1;
    return c_table_[uw];
  }

  // P_{y,w}, recovered from the coefficient table of C_w.
  LaurentPoly kl_p(int y, int w) {
    if (y == w) return LaurentPoly::from_int(1);
    if (!ball_.bruhat_leq(y, w)) return LaurentPoly();
    return c_elt(w).coeff(y);
  }

  // M^s_{z,w} for sz < z < w < sw (left side; the right side is transported
  // through inversion). The unique bar-invariant solution of the defining
  // congruence, built from its nonnegative part.
  LaurentPoly m_poly(int s, int z, int w, Side side) {
    if (side == Side::right)
      return m_poly(s, ball_.invert(z), ball_.invert(w), Side::left);
    if (!ball_.is_left_descent(z, s) || ball_.is_left_descent(w, s) ||
        z == w || !ball_.bruhat_leq(z, w))
      throw KlError(ErrorCode::PreconditionViolated,
                    "m_poly needs sz < z < w < sw");
    std::array<int, 3> key{s, z, w};
    auto it = m_table_.find(key);
    if (it != m_table_.end()) return it->second;

    LaurentPoly pi =
        LaurentPoly::v_power(static_cast<int>(ball_.system().weight(s))) *
        kl_p(z, w);
    for (int z2 = z + 1; z2 < ball_.size(); ++z2) {
      if (ball_.length(z2) >= ball_.length(w)) break;
      if (ball_.length(z2) <= ball_.length(z)) continue;
      if (!ball_.is_left_descent(z2, s)) continue;
      if (!ball_.bruhat_leq(z, z2) || !ball_.bruhat_leq(z2, w)) continue;
      LaurentPoly m2 = m_poly(s, z2, w, Side::left);
      if (!m2.is_zero()) pi -= kl_p(z, z2) * m2;
    }
    LaurentPoly m = pi.part_at_least(0) + pi.part_at_least(1).bar();

    if (m.bar() != m)
      throw KlError(ErrorCode::AuditFailed,
                    "M polynomial not bar-invariant at (" + ball_.word_str(z) +
                        ", " + ball_.word_str(w) + ")");
    long ls = ball_.system().weight(s);
    if (!m.is_zero() && (m.max_exp() > ls - 1 || m.min_exp() < -ls + 1))
      throw KlError(ErrorCode::AuditFailed,
                    "M polynomial outside the degree window at (" +
                        ball_.word_str(z) + ", " + ball_.word_str(w) + ")");
    m_table_.emplace(key, m);
    return m;
  }

  // C-basis expansion of C_s C_w, T_s C_w, C_w C_s or C_w T_s.
  HeckeElt mul_c(MulKind kind, int s, int w) {
    bool left = kind == MulKind::Cs_Cw || kind == MulKind::Ts_Cw;
    bool c_variant = kind == MulKind::Cs_Cw || kind == MulKind::Cw_Cs;
    Side side = left ? Side::left : Side::right;
    long ls = ball_.system().weight(s);
    bool descent = left ? ball_.is_left_descent(w, s)
                        : ball_.is_right_descent(w, s);
    HeckeElt out(Basis::C);
    if (descent) {
      out.add_term(w, c_variant
                          ? LaurentPoly::v_plus_v_inverse(static_cast<int>(ls))
                          : LaurentPoly::v_power(static_cast<int>(ls)));
      return out;
    }
    int sw = left ? ball_.left(w, s) : ball_.right(w, s);
    if (sw == BallTable::out_of_ball)
      throw KlError(ErrorCode::SupportEscapesBall,
                    "mul_c needs length " + std::to_string(ball_.length(w) + 1) +
                        " beyond radius " + std::to_string(ball_.radius()));
    out.add_term(sw, LaurentPoly::from_int(1));
    for (int z = 0; z < ball_.size(); ++z) {
      if (ball_.length(z) >= ball_.length(w)) break;
      bool zdesc = left ? ball_.is_left_descent(z, s)
                        : ball_.is_right_descent(z, s);
      if (!zdesc || !ball_.bruhat_leq(z, w)) continue;
      LaurentPoly m = m_poly(s, z, w, side);
      if (!m.is_zero()) out.add_term(z, m);
    }
    if (!c_variant)
      out.add_term(w, -LaurentPoly::v_power(-static_cast<int>(ls)));
    return out;
  }

  // Triangular change of basis: T-basis coordinates to C-basis coordinates.
  HeckeElt to_c_basis(HeckeElt h) {
    if (h.basis() != Basis::T)
      throw KlError(ErrorCode::PreconditionViolated,
                    "to_c_basis requires the standard basis");
    HeckeElt out(Basis::C);
    while (!h.is_zero()) {
      int w = h.leading_term();
      LaurentPoly a = h.coeff(w);
      out.add_term(w, a);
      h -= c_elt(w) * a;
    }
    return out;
  }

  // Expands C-basis coordinates in the standard basis.
  HeckeElt c_to_t(const HeckeElt& h) {
    if (h.basis() != Basis::C)
      throw KlError(ErrorCode::PreconditionViolated,
                    "c_to_t requires the canonical basis");
    HeckeElt out(Basis::T);
    for (const auto& [w, p] : h.coeffs()) out += c_elt(w) * p;
    return out;
  }

  // On-demand bar-invariance audit (always run on insertion for lengths up
  // to audit_bound).
  void audit_bar_invariance(int w) {
    const HeckeElt& c = c_elt(w);
    if (bar(c) != c)
      throw KlError(ErrorCode::AuditFailed,
                    "C not bar-invariant at " + ball_.word_str(w));
  }

  int audit_bound() const { return audit_bound_; }

 private:
  void audit_c(int w, const HeckeElt& h) {
    for (const auto& [y, p] : h.coeffs()) {
      if (y == w) {
        if (!p.is_one())
          throw KlError(ErrorCode::AuditFailed,
                        "leading coefficient of C is not 1 at " +
                            ball_.word_str(w));
      } else if (!p.in_strictly_negative() || !ball_.bruhat_leq(y, w)) {
        throw KlError(ErrorCode::AuditFailed,
                      "non-triangular or non-negative P coefficient at (" +
                          ball_.word_str(y) + ", " + ball_.word_str(w) + ")");
      }
    }
    if (ball_.length(w) <= audit_bound_) {
      if (bar(h) != h)
        throw KlError(ErrorCode::AuditFailed,
                      "C not bar-invariant at " + ball_.word_str(w));
    }
  }

  const BallTable& ball_;
  int audit_bound_;
  std::vector<HeckeElt> c_table_;
  std::vector<char> c_done_;
  std::vector<HeckeElt> invt_table_;
  std::vector<char> invt_done_;
  std::map<std::array<int, 3>, LaurentPoly> m_table_;
};

}  // namespace klcells
