#pragma once

#include "klcells/klbasis.hpp"

namespace klcells {

// Independent construction of C_w used to cross-check the recursive engine:
// starting from T_w, repeatedly cancel the leading term of bar(C) - C by a
// strictly-negative correction. Touches no P/M recursion; only the bar
// involution and triangularity.
inline HeckeElt oracle_c_elt(KLCache& kl, int w) {
  HeckeElt c = HeckeElt::unit(Basis::T, w);
  for (;;) {
    HeckeElt delta = kl.bar(c) - c;
    if (delta.is_zero()) break;
    int y = delta.leading_term();
    LaurentPoly d = delta.coeff(y);
    if (d.bar() != -d)
      throw KlError(ErrorCode::AuditFailed,
                    "bar-antisymmetry failure in the triangular solve at " +
                        kl.ball().word_str(y));
    // with d antisymmetric, p = (negative part of d) satisfies
    // p - bar(p) = d, which cancels the leading term
    c.add_term(y, d.part_below(0));
  }
  return c;
}

}  // namespace klcells
