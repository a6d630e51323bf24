#pragma once
// Induction of left ideals from a seed family. A datum (U, {X_u}) spans the
// module with basis {T_x C_u : u in U, x in X_u}. This header checks the
// closure conditions that make the span a left ideal, computes the attached
// coefficient families (the r family from bar images and the strictly
// negative p* family), derives the induced preorder on U, and assembles
// certified left ideals from order-closed subsets of U. Builders cover the
// parabolic datum, the heavy-generator datum, the alcove-region data for
// the C/B regions, and user-supplied JSON data.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <klcells/cells.hpp>
#include <klcells/coxeter.hpp>
#include <klcells/errors.hpp>
#include <klcells/g2.hpp>
#include <klcells/hecke.hpp>
#include <klcells/klbasis.hpp>
#include <klcells/laurent.hpp>

namespace klcells {

// Outcome of one closure condition: certified over everything checkable in
// the ball, refuted by a concrete witness, or inconclusive because every
// instance left the window (or a prerequisite condition already failed).
struct ConditionCheck {
  Verdict verdict = Verdict::inconclusive;
  std::string witness;
  long checked = 0;
  long skipped = 0;
};

struct ConditionsReport {
  ConditionCheck unit_present;       // e lies in every X_u
  ConditionCheck length_additive;    // l(xu) = l(x) + l(u) throughout
  ConditionCheck products_disjoint;  // the product xu determines (x, u)
  ConditionCheck span_closed;        // T_s (T_x C_u) stays in the span
  ConditionCheck degrees_negative;   // P_{u1,u} T_x T_{u1} has degree < 0
  std::vector<std::array<int, 3>> degree_failures;  // (u position, u1, x)

  bool all_pass() const {
    return unit_present.verdict == Verdict::certified_yes &&
           length_additive.verdict == Verdict::certified_yes &&
           products_disjoint.verdict == Verdict::certified_yes &&
           span_closed.verdict == Verdict::certified_yes &&
           degrees_negative.verdict == Verdict::certified_yes;
  }
};

struct PreorderResult {
  std::vector<std::vector<char>> leq;      // leq[i][j]: u_i precedes u_j
  std::vector<std::vector<int>> classes;   // U positions grouped, sorted
  std::vector<int> class_of;               // U position -> class number
  std::vector<std::array<int, 4>> edges;   // (lower, upper, s, x) witnesses
  long skipped = 0;
};

struct InducedIdeal {
  std::vector<int> members;
  IdealReport report;
};

struct RepairOutcome {
  bool ok = false;
  std::string witness;
  // Per repaired product: the C-support of the correction term.
  std::vector<std::pair<int, std::vector<int>>> decompositions;
};

struct SpanCheck {
  bool ok = true;
  std::string witness;
};

class InductionDatum {
 public:
  using Label = std::pair<int, int>;  // (x, position into U)
  using Row = std::map<Label, LaurentPoly>;

  InductionDatum(KLCache& kl, std::string name, std::vector<int> u_list,
                 std::vector<std::vector<int>> x_lists)
      : kl_(&kl), name_(std::move(name)), u_(std::move(u_list)) {
    const BallTable& b = kl.ball();
    if (u_.empty())
      throw KlError(ErrorCode::PreconditionViolated, "empty U list");
    if (x_lists.size() != u_.size())
      throw KlError(ErrorCode::PreconditionViolated,
                    "one X set per U member required");
    std::set<int> seen;
    for (int u : u_) {
      if (u < 0 || u >= b.size())
        throw KlError(ErrorCode::PreconditionViolated,
                      "U member outside the ball index range");
      if (!seen.insert(u).second)
        throw KlError(ErrorCode::PreconditionViolated,
                      "duplicate U member " + b.word_str(u));
    }
    x_.resize(u_.size());
    dropped_.assign(u_.size(), 0);
    for (size_t i = 0; i < u_.size(); ++i) {
      for (int x : x_lists[i]) {
        if (x < 0 || x >= b.size())
          throw KlError(ErrorCode::PreconditionViolated,
                        "X member outside the ball index range");
        if (b.mul(x, u_[i]) == BallTable::out_of_ball)
          ++dropped_[i];
        else
          x_[i].push_back(x);
      }
      std::sort(x_[i].begin(), x_[i].end());
      x_[i].erase(std::unique(x_[i].begin(), x_[i].end()), x_[i].end());
      for (int x : x_[i]) {
        int p = b.mul(x, u_[i]);
        auto [it, fresh] = basis_.try_emplace(p, Label{x, static_cast<int>(i)});
        if (!fresh) collisions_.emplace_back(p, it->second,
                                             Label{x, static_cast<int>(i)});
      }
    }
  }

  KLCache& kl() const { return *kl_; }
  const BallTable& ball() const { return kl_->ball(); }
  const std::string& name() const { return name_; }
  const std::vector<int>& u_members() const { return u_; }
  int u_count() const { return static_cast<int>(u_.size()); }

  int u_position(int element) const {
    for (size_t i = 0; i < u_.size(); ++i)
      if (u_[i] == element) return static_cast<int>(i);
    return -1;
  }

  const std::vector<int>& x_scope(int upos) const {
    return x_[static_cast<size_t>(upos)];
  }

  const std::map<int, Label>& basis_index() const { return basis_; }

  int product(int x, int upos) const {
    return ball().mul(x, u_[static_cast<size_t>(upos)]);
  }

  const std::vector<std::string>& notes() const { return notes_; }
  void add_note(std::string n) { notes_.push_back(std::move(n)); }

  bool i5_repaired() const { return i5_repaired_; }
  void mark_i5_repaired() { i5_repaired_ = true; }

  // T-basis expansion of T_x C_u; audited to be the product element plus
  // strictly shorter terms, with leading coefficient one.
  const HeckeElt& basis_elt(int x, int upos) {
    Label key{x, upos};
    auto it = expansions_.find(key);
    if (it != expansions_.end()) return it->second;
    const BallTable& b = ball();
    HeckeElt h = t_mul(b, HeckeElt::unit(Basis::T, x),
                       kl_->c_elt(u_[static_cast<size_t>(upos)]));
    int p = product(x, upos);
    if (h.leading_term() != p || !h.coeff(p).is_one())
      throw KlError(ErrorCode::AuditFailed,
                    "basis element for x=" + b.word_str(x) + ", u=" +
                        b.word_str(u_[static_cast<size_t>(upos)]) +
                        " is not triangular");
    return expansions_.emplace(key, std::move(h)).first->second;
  }

  // Greedy elimination of leading terms against the basis. Returns the
  // coefficient family and the remainder, which is zero exactly when h
  // lies in the span (of the positions enabled by allowed, if given).
  std::pair<Row, HeckeElt> reduce(HeckeElt h,
                                  const std::vector<char>* allowed = nullptr) {
    if (h.basis() != Basis::T)
      throw KlError(ErrorCode::PreconditionViolated,
                    "reduction requires the standard basis");
    Row out;
    while (!h.is_zero()) {
      int m = h.leading_term();
      auto it = basis_.find(m);
      if (it == basis_.end()) break;
      if (allowed && !(*allowed)[static_cast<size_t>(it->second.second)]) break;
      LaurentPoly c = h.coeff(m);
      out[it->second] = c;
      h -= basis_elt(it->second.first, it->second.second) * c;
    }
    return {std::move(out), std::move(h)};
  }

  const ConditionsReport& conditions() {
    if (report_) return *report_;
    report_ = compute_conditions();
    return *report_;
  }

  // Coefficients r with T_{y^-1}^-1 C_v = sum bar(r_{xu,yv}) T_x C_u,
  // audited unitriangular with respect to the Bruhat order on products.
  const Row& r_row(int y, int vpos) {
    Label key{y, vpos};
    auto it = r_rows_.find(key);
    if (it != r_rows_.end()) return it->second;
    const BallTable& b = ball();
    require_in_scope(y, vpos);
    HeckeElt h =
        t_mul(b, kl_->inv_t_row(y), kl_->c_elt(u_[static_cast<size_t>(vpos)]));
    auto [coeffs, rem] = reduce(std::move(h));
    if (!rem.is_zero())
      throw KlError(ErrorCode::PreconditionViolated,
                    "bar image of the basis element at y=" + b.word_str(y) +
                        " leaves the span; the datum is not closed");
    Row row;
    for (auto& [lab, c] : coeffs) row[lab] = c.bar();
    int yv = product(y, vpos);
    for (const auto& [lab, c] : row) {
      int p = product(lab.first, lab.second);
      if (p == yv) {
        if (!c.is_one())
          throw KlError(ErrorCode::AuditFailed,
                        "diagonal coefficient differs from one at " +
                            b.word_str(yv));
      } else if (!b.bruhat_leq(p, yv)) {
        throw KlError(ErrorCode::AuditFailed,
                      "coefficient outside the order ideal of " +
                          b.word_str(yv));
      }
    }
    return r_rows_.emplace(key, std::move(row)).first->second;
  }

  // The unique strictly-negative family p* making
  //   T_y C_v + sum p*_{xu,yv} T_x C_u
  // invariant under the bar involution, together with that combination.
  const std::pair<Row, HeckeElt>& p_star_row(int y, int vpos) {
    Label key{y, vpos};
    auto it = p_rows_.find(key);
    if (it != p_rows_.end()) return it->second;
    const BallTable& b = ball();
    require_in_scope(y, vpos);
    int yv = product(y, vpos);
    std::vector<std::pair<int, Label>> below;
    for (const auto& [p, lab] : basis_)
      if (b.bruhat_leq(p, yv)) below.emplace_back(p, lab);
    std::sort(below.begin(), below.end(),
              [](const auto& a, const auto& c) { return a.first > c.first; });
    if (below.empty() || below.front().first != yv)
      throw KlError(ErrorCode::AuditFailed,
                    "top basis element missing at " + b.word_str(yv));
    std::map<Label, LaurentPoly> q;
    q[below.front().second] = LaurentPoly::from_int(1);
    for (size_t i = 1; i < below.size(); ++i) {
      const Label& lab = below[i].second;
      LaurentPoly g;
      for (size_t j = 0; j < i; ++j) {
        const Label& upper = below[j].second;
        auto qit = q.find(upper);
        if (qit == q.end()) continue;
        const Row& row = r_row(upper.first, upper.second);
        auto rit = row.find(lab);
        if (rit == row.end()) continue;
        g += qit->second.bar() * rit->second.bar();
      }
      if (g.is_zero()) continue;
      auto [nonneg, neg] = g.split_nonneg();
      if (neg.bar() != -nonneg)
        throw KlError(ErrorCode::AuditFailed,
                      "no strictly negative solution at x=" +
                          b.word_str(lab.first));
      if (!neg.is_zero()) q[lab] = neg;
    }
    HeckeElt combo(Basis::T);
    for (const auto& [lab, c] : q) combo += basis_elt(lab.first, lab.second) * c;
    if (kl_->bar(combo) != combo)
      throw KlError(ErrorCode::AuditFailed,
                    "combination at " + b.word_str(yv) +
                        " is not bar-invariant");
    Row family(q.begin(), q.end());
    family.erase(Label{y, vpos});
    return p_rows_
        .emplace(key, std::make_pair(std::move(family), std::move(combo)))
        .first->second;
  }

  const PreorderResult& preorder() {
    if (preorder_) return *preorder_;
    preorder_ = compute_preorder();
    return *preorder_;
  }

  const std::vector<std::tuple<int, Label, Label>>& product_collisions() const {
    return collisions_;
  }

 private:
  void require_in_scope(int y, int vpos) const {
    if (vpos < 0 || vpos >= u_count())
      throw KlError(ErrorCode::PreconditionViolated,
                    "U position out of range");
    const std::vector<int>& sc = x_[static_cast<size_t>(vpos)];
    if (!std::binary_search(sc.begin(), sc.end(), y))
      throw KlError(ErrorCode::PreconditionViolated,
                    "element " + ball().word_str(y) +
                        " is outside the stored X set");
  }

  ConditionsReport compute_conditions() {
    const BallTable& b = ball();
    ConditionsReport rep;
    {
      ConditionCheck& c = rep.unit_present;
      c.verdict = Verdict::certified_yes;
      for (size_t i = 0; i < u_.size(); ++i) {
        ++c.checked;
        if (x_[i].empty() || x_[i].front() != 0) {
          c.verdict = Verdict::certified_no;
          c.witness = "X set for u=" + b.word_str(u_[i]) + " misses e";
          break;
        }
      }
    }
    {
      ConditionCheck& c = rep.length_additive;
      c.verdict = Verdict::certified_yes;
      for (size_t i = 0; i < u_.size() && c.witness.empty(); ++i) {
        c.skipped += dropped_[i];
        for (int x : x_[i]) {
          ++c.checked;
          int p = b.mul(x, u_[i]);
          if (b.length(p) != b.length(x) + b.length(u_[i])) {
            c.verdict = Verdict::certified_no;
            c.witness = "length drops at x=" + b.word_str(x) +
                        ", u=" + b.word_str(u_[i]);
            break;
          }
        }
      }
    }
    {
      ConditionCheck& c = rep.products_disjoint;
      c.checked = static_cast<long>(basis_.size());
      if (collisions_.empty()) {
        c.verdict = Verdict::certified_yes;
      } else {
        const auto& [p, a, bb] = collisions_.front();
        c.verdict = Verdict::certified_no;
        c.witness = "products collide at " + b.word_str(p) + ": x=" +
                    b.word_str(a.first) + ", u=" + b.word_str(u_[static_cast<size_t>(a.second)]) +
                    " versus x=" + b.word_str(bb.first) + ", u=" +
                    b.word_str(u_[static_cast<size_t>(bb.second)]);
      }
    }
    bool structural_ok =
        rep.length_additive.verdict == Verdict::certified_yes &&
        rep.products_disjoint.verdict == Verdict::certified_yes;
    {
      ConditionCheck& c = rep.span_closed;
      if (!structural_ok) {
        c.witness = "prerequisite structural condition failed";
      } else {
        bool failed = false;
        for (size_t i = 0; i < u_.size() && !failed; ++i) {
          for (int x : x_[i]) {
            if (failed) break;
            for (int s = 0; s < b.rank(); ++s) {
              HeckeElt prod(Basis::T);
              try {
                prod = t_mul_gen(b, basis_elt(x, static_cast<int>(i)), s,
                                 Side::left);
              } catch (const KlError& e) {
                if (e.code() == ErrorCode::SupportEscapesBall) {
                  ++c.skipped;
                  continue;
                }
                throw;
              }
              auto [coeffs, rem] = reduce(std::move(prod));
              ++c.checked;
              if (!rem.is_zero()) {
                c.verdict = Verdict::certified_no;
                c.witness = "left product by " + b.word_str(b.right(0, s)) +
                            " at x=" + b.word_str(x) + ", u=" +
                            b.word_str(u_[i]) + " leaves the span at T[" +
                            b.word_str(rem.leading_term()) + "]";
                failed = true;
                break;
              }
            }
          }
        }
        if (!failed)
          c.verdict = (c.checked > 0 || c.skipped == 0)
                          ? Verdict::certified_yes
                          : Verdict::inconclusive;
      }
    }
    {
      ConditionCheck& c = rep.degrees_negative;
      if (!structural_ok) {
        c.witness = "prerequisite structural condition failed";
      } else {
        for (size_t i = 0; i < u_.size(); ++i) {
          int u = u_[i];
          for (int u1 = 0; u1 < b.size(); ++u1) {
            if (u1 == u || !b.bruhat_leq(u1, u)) continue;
            LaurentPoly p = kl_->kl_p(u1, u);
            if (p.is_zero()) continue;
            for (int x : x_[i]) {
              HeckeElt prod(Basis::T);
              try {
                prod = t_mul(b, HeckeElt::unit(Basis::T, x),
                             HeckeElt::unit(Basis::T, u1));
              } catch (const KlError& e) {
                if (e.code() == ErrorCode::SupportEscapesBall) {
                  ++c.skipped;
                  continue;
                }
                throw;
              }
              ++c.checked;
              bool bad = false;
              for (const auto& [z, f] : prod.coeffs())
                if (!(f * p).is_zero() && (f * p).max_exp() >= 0) bad = true;
              if (bad) {
                rep.degree_failures.push_back(
                    {static_cast<int>(i), u1, x});
                if (c.witness.empty())
                  c.witness = "degree reaches zero at u=" + b.word_str(u) +
                              ", u1=" + b.word_str(u1) + ", x=" +
                              b.word_str(x);
              }
            }
          }
        }
        if (!rep.degree_failures.empty())
          c.verdict = Verdict::certified_no;
        else
          c.verdict = (c.checked > 0 || c.skipped == 0)
                          ? Verdict::certified_yes
                          : Verdict::inconclusive;
      }
    }
    return rep;
  }

  PreorderResult compute_preorder() {
    const ConditionsReport& rep = conditions();
    if (rep.span_closed.verdict != Verdict::certified_yes)
      throw KlError(ErrorCode::PreconditionViolated,
                    "span closure not certified; preorder undefined");
    const BallTable& b = ball();
    size_t n = u_.size();
    PreorderResult out;
    out.leq.assign(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i) out.leq[i][i] = 1;
    std::vector<std::vector<int>> adj(n);
    std::set<std::pair<int, int>> seen;
    for (size_t j = 0; j < n; ++j) {
      for (int x : x_[j]) {
        for (int s = 0; s < b.rank(); ++s) {
          HeckeElt prod(Basis::T);
          try {
            prod = t_mul_gen(b, basis_elt(x, static_cast<int>(j)), s,
                             Side::left);
          } catch (const KlError& e) {
            if (e.code() == ErrorCode::SupportEscapesBall) {
              ++out.skipped;
              continue;
            }
            throw;
          }
          auto [coeffs, rem] = reduce(std::move(prod));
          if (!rem.is_zero())
            throw KlError(ErrorCode::PreconditionViolated,
                          "span closure violated during preorder sweep");
          for (const auto& [lab, c] : coeffs) {
            int i = lab.second;
            if (i == static_cast<int>(j)) continue;
            if (seen.insert({i, static_cast<int>(j)}).second) {
              out.leq[static_cast<size_t>(i)][j] = 1;
              adj[j].push_back(i);
              out.edges.push_back({i, static_cast<int>(j), s, x});
            }
          }
        }
      }
    }
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i) {
        if (!out.leq[i][k]) continue;
        for (size_t j = 0; j < n; ++j)
          if (out.leq[k][j]) out.leq[i][j] = 1;
      }
    std::vector<int> comp = detail::strongly_connected(adj);
    std::map<int, std::vector<int>> groups;
    for (size_t i = 0; i < n; ++i)
      groups[comp[i]].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> classes;
    for (auto& [id, members] : groups) {
      std::sort(members.begin(), members.end());
      classes.push_back(members);
    }
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& c) { return a.front() < c.front(); });
    out.classes = std::move(classes);
    out.class_of.assign(n, -1);
    for (size_t c = 0; c < out.classes.size(); ++c)
      for (int i : out.classes[c]) out.class_of[static_cast<size_t>(i)] = static_cast<int>(c);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        bool both = out.leq[i][j] && out.leq[j][i];
        if (both != (out.class_of[i] == out.class_of[j]))
          throw KlError(ErrorCode::AuditFailed,
                        "preorder classes disagree with mutual relations");
      }
    return out;
  }

  KLCache* kl_;
  std::string name_;
  std::vector<int> u_;
  std::vector<std::vector<int>> x_;
  std::vector<long> dropped_;
  std::map<int, Label> basis_;
  std::vector<std::tuple<int, Label, Label>> collisions_;
  std::map<Label, HeckeElt> expansions_;
  std::map<Label, Row> r_rows_;
  std::map<Label, std::pair<Row, HeckeElt>> p_rows_;
  std::optional<ConditionsReport> report_;
  std::optional<PreorderResult> preorder_;
  std::vector<std::string> notes_;
  bool i5_repaired_ = false;
};

inline const ConditionsReport& check_conditions(InductionDatum& datum) {
  return datum.conditions();
}

inline const InductionDatum::Row& gen_r(InductionDatum& datum, int y,
                                        int vpos) {
  return datum.r_row(y, vpos);
}

inline const std::pair<InductionDatum::Row, HeckeElt>& gen_p_star(
    InductionDatum& datum, int y, int vpos) {
  return datum.p_star_row(y, vpos);
}

inline const PreorderResult& preorder_u(InductionDatum& datum) {
  return datum.preorder();
}

namespace detail {

inline void require_downward_closed(InductionDatum& datum,
                                    const std::vector<char>& in_set) {
  const PreorderResult& pre = datum.preorder();
  size_t n = static_cast<size_t>(datum.u_count());
  for (size_t j = 0; j < n; ++j) {
    if (!in_set[j]) continue;
    for (size_t i = 0; i < n; ++i)
      if (pre.leq[i][j] && !in_set[i])
        throw KlError(ErrorCode::NotDownwardClosed,
                      "u=" + datum.ball().word_str(datum.u_members()[i]) +
                          " precedes u=" +
                          datum.ball().word_str(datum.u_members()[j]) +
                          " but is missing from the subset");
  }
}

inline std::vector<char> position_mask(const InductionDatum& datum,
                                       const std::vector<int>& u_positions) {
  std::vector<char> mask(static_cast<size_t>(datum.u_count()), 0);
  for (int p : u_positions) {
    if (p < 0 || p >= datum.u_count())
      throw KlError(ErrorCode::PreconditionViolated,
                    "U position out of range");
    mask[static_cast<size_t>(p)] = 1;
  }
  return mask;
}

}  // namespace detail

// Certified member set {xu : u in the subset, x in X_u}. Requires the
// closure conditions certified (a refuted degree condition must have been
// repaired first) and the subset closed under descent in the preorder.
inline InducedIdeal induced_ideal(InductionDatum& datum,
                                  const std::vector<int>& u_positions) {
  const ConditionsReport& rep = datum.conditions();
  auto require_yes = [](const ConditionCheck& c, const char* what) {
    if (c.verdict != Verdict::certified_yes)
      throw KlError(ErrorCode::PreconditionViolated,
                    std::string(what) + " not certified: " +
                        (c.witness.empty() ? "inconclusive" : c.witness));
  };
  require_yes(rep.unit_present, "unit membership");
  require_yes(rep.length_additive, "length additivity");
  require_yes(rep.products_disjoint, "product disjointness");
  require_yes(rep.span_closed, "span closure");
  if (rep.degrees_negative.verdict == Verdict::certified_no &&
      !datum.i5_repaired())
    throw KlError(ErrorCode::PreconditionViolated,
                  "degree condition failed and no repair is certified: " +
                      rep.degrees_negative.witness);
  if (rep.degrees_negative.verdict == Verdict::inconclusive)
    throw KlError(ErrorCode::PreconditionViolated,
                  "degree condition inconclusive on this ball");
  std::vector<char> mask = detail::position_mask(datum, u_positions);
  detail::require_downward_closed(datum, mask);
  InducedIdeal out;
  for (int p = 0; p < datum.u_count(); ++p) {
    if (!mask[static_cast<size_t>(p)]) continue;
    for (int x : datum.x_scope(p)) out.members.push_back(datum.product(x, p));
  }
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()),
                    out.members.end());
  out.report = is_left_ideal(datum.kl(), out.members);
  return out;
}

// Repairs a refuted degree condition: for every failing (u, x) pair the
// bar-invariant combination is computed and its difference from the
// canonical basis element must expand, in the canonical basis, inside the
// supplied certified member set.
inline RepairOutcome repair_i5(InductionDatum& datum,
                               const std::vector<int>& certified_members) {
  const ConditionsReport& rep = datum.conditions();
  RepairOutcome out;
  if (rep.degrees_negative.verdict == Verdict::certified_yes) {
    out.ok = true;
    out.witness = "no failures recorded";
    return out;
  }
  if (rep.degrees_negative.verdict == Verdict::inconclusive)
    throw KlError(ErrorCode::PreconditionViolated,
                  "degree condition inconclusive; nothing to repair");
  std::set<int> certified(certified_members.begin(), certified_members.end());
  std::set<std::pair<int, int>> pairs;
  for (const auto& f : rep.degree_failures) pairs.insert({f[0], f[2]});
  for (const auto& [upos, x] : pairs) {
    const auto& [family, combo] = datum.p_star_row(x, upos);
    int p = datum.product(x, upos);
    HeckeElt diff = combo - datum.kl().c_elt(p);
    if (diff.is_zero()) {
      out.decompositions.emplace_back(p, std::vector<int>{});
      continue;
    }
    HeckeElt corr = datum.kl().to_c_basis(diff);
    std::vector<int> support = corr.support();
    for (int z : support)
      if (!certified.count(z)) {
        out.ok = false;
        out.witness = "correction term C[" + datum.ball().word_str(z) +
                      "] at product " + datum.ball().word_str(p) +
                      " lies outside the certified set";
        return out;
      }
    out.decompositions.emplace_back(p, std::move(support));
  }
  out.ok = true;
  datum.mark_i5_repaired();
  return out;
}

// Mutual containment of the canonical and induced spans over an
// order-closed subset: every canonical element of a product reduces to
// zero against the basis, and every basis element expands in the canonical
// basis with support inside the product set.
inline SpanCheck span_consistency(InductionDatum& datum,
                                  const std::vector<int>& u_positions) {
  std::vector<char> mask = detail::position_mask(datum, u_positions);
  detail::require_downward_closed(datum, mask);
  SpanCheck out;
  std::set<int> products;
  for (int p = 0; p < datum.u_count(); ++p) {
    if (!mask[static_cast<size_t>(p)]) continue;
    for (int x : datum.x_scope(p)) products.insert(datum.product(x, p));
  }
  const BallTable& b = datum.ball();
  for (int p = 0; p < datum.u_count(); ++p) {
    if (!mask[static_cast<size_t>(p)]) continue;
    for (int x : datum.x_scope(p)) {
      int prod = datum.product(x, p);
      auto [coeffs, rem] = datum.reduce(datum.kl().c_elt(prod), &mask);
      if (!rem.is_zero()) {
        out.ok = false;
        out.witness = "canonical element at " + b.word_str(prod) +
                      " does not reduce inside the subset";
        return out;
      }
      HeckeElt expanded = datum.kl().to_c_basis(datum.basis_elt(x, p));
      for (int z : expanded.support())
        if (!products.count(z)) {
          out.ok = false;
          out.witness = "basis element at " + b.word_str(prod) +
                        " expands outside the product set at C[" +
                        b.word_str(z) + "]";
          return out;
        }
    }
  }
  return out;
}

// W_J with its minimal coset representatives attached to every member.
inline InductionDatum parabolic_datum(KLCache& kl, uint32_t J) {
  CosetData cd = coset_data(kl.ball(), J);
  std::vector<std::vector<int>> xs(cd.parabolic.size(), cd.reps);
  return InductionDatum(kl, "parabolic", cd.parabolic, std::move(xs));
}

// t * W_J for a generator t outside J whose weight exceeds the largest
// structure-constant degree of W_J; the X sets collect y*t over the
// representatives y with a descent at t.
inline InductionDatum heavy_generator_datum(KLCache& kl, uint32_t J, int t) {
  const BallTable& b = kl.ball();
  if (t < 0 || t >= b.rank() || ((J >> static_cast<uint32_t>(t)) & 1u))
    throw KlError(ErrorCode::PreconditionViolated,
                  "the heavy generator must lie outside the subset");
  long bound = compute_bound(b, J);
  long lt = b.system().weight(t);
  if (lt <= bound)
    throw KlError(ErrorCode::WeightTooSmall,
                  "weight " + std::to_string(lt) + " of the extra generator "
                  "does not exceed the subgroup bound " +
                      std::to_string(bound));
  CosetData cd = coset_data(b, J);
  int te = b.right(0, t);
  std::vector<int> xs;
  for (int y : cd.reps)
    if ((b.right_descents(y) >> static_cast<uint32_t>(t)) & 1u)
      xs.push_back(b.right(y, t));
  std::vector<int> us;
  std::vector<std::vector<int>> xl;
  for (int w : cd.parabolic) {
    int u = b.mul(te, w);
    if (u == BallTable::out_of_ball)
      throw KlError(ErrorCode::SupportEscapesBall,
                    "member t*w' leaves the ball; enlarge the radius");
    us.push_back(u);
    xl.push_back(xs);
  }
  return InductionDatum(kl, "heavy_generator", std::move(us), std::move(xl));
}

// {z : z * shift lands in the region}, scanned over the ball.
inline std::vector<int> region_shift_set(const G2Geometry& geo,
                                         RegionLabel label, int shift) {
  const BallTable& b = geo.ball();
  std::vector<int> out;
  for (int z = 0; z < b.size(); ++z) {
    int p = b.mul(z, shift);
    if (p != BallTable::out_of_ball && geo.classify(p) == label)
      out.push_back(z);
  }
  return out;
}

namespace detail {

inline void require_same_ball(const KLCache& kl, const G2Geometry& geo) {
  if (&kl.ball() != &geo.ball())
    throw KlError(ErrorCode::PreconditionViolated,
                  "geometry and coefficient cache use different balls");
}

inline int region_min_checked(const G2Geometry& geo, RegionLabel l) {
  int m = geo.region_min(l);
  if (m < 0)
    throw KlError(ErrorCode::SupportEscapesBall,
                  std::string("region ") + region_name(l) +
                      " has no member within this radius");
  return m;
}

}  // namespace detail

// The eighteen region minima u_i = min C_i, v_i = min A_i, v'_i = min A'_i
// with X attached by region membership (for the C minima) or by the
// {s1,s2} coset representatives (for the A and A' minima).
inline InductionDatum g2_c_sets_datum(KLCache& kl, const G2Geometry& geo) {
  detail::require_same_ball(kl, geo);
  const BallTable& b = kl.ball();
  static constexpr std::array<RegionLabel, 6> c_labels = {
      RegionLabel::C1, RegionLabel::C2, RegionLabel::C3,
      RegionLabel::C4, RegionLabel::C5, RegionLabel::C6};
  static constexpr std::array<RegionLabel, 6> a_labels = {
      RegionLabel::A1, RegionLabel::A2, RegionLabel::A3,
      RegionLabel::A4, RegionLabel::A5, RegionLabel::A6};
  static constexpr std::array<RegionLabel, 6> ap_labels = {
      RegionLabel::Ap1, RegionLabel::Ap2, RegionLabel::Ap3,
      RegionLabel::Ap4, RegionLabel::Ap5, RegionLabel::Ap6};
  std::vector<int> us;
  std::vector<std::vector<int>> xl;
  for (RegionLabel l : c_labels) {
    int u = detail::region_min_checked(geo, l);
    us.push_back(u);
    xl.push_back(region_shift_set(geo, l, u));
  }
  std::vector<int> reps = coset_data(b, 0b011).reps;
  for (RegionLabel l : a_labels) {
    us.push_back(detail::region_min_checked(geo, l));
    xl.push_back(reps);
  }
  for (RegionLabel l : ap_labels) {
    us.push_back(detail::region_min_checked(geo, l));
    xl.push_back(reps);
  }
  return InductionDatum(kl, "g2_c_sets", std::move(us), std::move(xl));
}

// The B1 family: the B1 minimum with region-membership X, the C1/C2 minima
// with region-membership X, and the A1/A'1/A2/A'2/A3 minima with coset X.
inline InductionDatum g2_b1_datum(KLCache& kl, const G2Geometry& geo) {
  detail::require_same_ball(kl, geo);
  const BallTable& b = kl.ball();
  int w1 = b.parse_word("s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1");
  int w2 = b.parse_word("s1.s2.s1.s2.s1.s2.s3.s2.s1.s2.s1");
  if (w1 != w2)
    throw KlError(ErrorCode::AuditFailed,
                  "the two recorded spellings of the A'1 minimum disagree");
  int ap1 = detail::region_min_checked(geo, RegionLabel::Ap1);
  if (w1 != ap1)
    throw KlError(ErrorCode::AuditFailed,
                  "recorded spelling is not the A'1 region minimum");
  std::vector<int> reps = coset_data(b, 0b011).reps;
  std::vector<int> us;
  std::vector<std::vector<int>> xl;
  auto push_region = [&](RegionLabel l) {
    int u = detail::region_min_checked(geo, l);
    us.push_back(u);
    xl.push_back(region_shift_set(geo, l, u));
  };
  auto push_coset = [&](RegionLabel l) {
    us.push_back(detail::region_min_checked(geo, l));
    xl.push_back(reps);
  };
  push_region(RegionLabel::B1);
  push_region(RegionLabel::C1);
  push_coset(RegionLabel::A1);
  push_coset(RegionLabel::Ap1);
  push_region(RegionLabel::C2);
  push_coset(RegionLabel::A2);
  push_coset(RegionLabel::Ap2);
  push_coset(RegionLabel::A3);
  InductionDatum d(kl, "g2_b1", std::move(us), std::move(xl));
  d.add_note("alternative spellings of the A'1 minimum agree: " +
             b.word_str(ap1));
  return d;
}

// The B3 family: the B3 minimum with region-membership X, the C4 minimum
// with region-membership X, and the A2/A3/A4/A'4/A5 minima with coset X.
inline InductionDatum g2_b3_datum(KLCache& kl, const G2Geometry& geo) {
  detail::require_same_ball(kl, geo);
  const BallTable& b = kl.ball();
  std::vector<int> reps = coset_data(b, 0b011).reps;
  std::vector<int> us;
  std::vector<std::vector<int>> xl;
  auto push_region = [&](RegionLabel l) {
    int u = detail::region_min_checked(geo, l);
    us.push_back(u);
    xl.push_back(region_shift_set(geo, l, u));
  };
  auto push_coset = [&](RegionLabel l) {
    us.push_back(detail::region_min_checked(geo, l));
    xl.push_back(reps);
  };
  push_region(RegionLabel::B3);
  push_region(RegionLabel::C4);
  push_coset(RegionLabel::A4);
  push_coset(RegionLabel::Ap4);
  push_coset(RegionLabel::A3);
  push_coset(RegionLabel::A2);
  push_coset(RegionLabel::A5);
  return InductionDatum(kl, "g2_b3", std::move(us), std::move(xl));
}

// Members y of the B3 minimum's X set with a three-step descent along
// s2.s1.s2; these are exactly the pairs where the degree condition fails.
inline std::vector<int> g2_b3_y_set(const InductionDatum& datum) {
  if (datum.name() != "g2_b3")
    throw KlError(ErrorCode::PreconditionViolated,
                  "the heavy-descent filter applies to the g2_b3 datum");
  const BallTable& b = datum.ball();
  int m = b.parse_word("s2.s1.s2");
  std::vector<int> out;
  for (int y : datum.x_scope(0)) {
    int p = b.mul(y, m);
    if (p != BallTable::out_of_ball && b.length(p) == b.length(y) - 3)
      out.push_back(y);
  }
  return out;
}

namespace detail {

inline uint32_t parse_generator_set(const CoxeterSystem& sys,
                                    const std::string& inner) {
  uint32_t J = 0;
  size_t pos = 0;
  while (pos <= inner.size()) {
    size_t comma = inner.find(',', pos);
    if (comma == std::string::npos) comma = inner.size();
    std::string tok = inner.substr(pos, comma - pos);
    size_t lo = tok.find_first_not_of(' ');
    size_t hi = tok.find_last_not_of(' ');
    if (lo == std::string::npos)
      throw KlError(ErrorCode::ConfigError, "empty generator name");
    J |= 1u << static_cast<uint32_t>(
             sys.generator_index(tok.substr(lo, hi - lo + 1)));
    pos = comma + 1;
    if (comma == inner.size()) break;
  }
  return J;
}

inline std::vector<int> parse_x_spec(KLCache& kl, const G2Geometry* geo,
                                     const std::string& spec, int u) {
  const BallTable& b = kl.ball();
  auto inner_of = [&](const std::string& prefix) -> std::string {
    if (spec.size() < prefix.size() + 1 || spec.back() != ')')
      throw KlError(ErrorCode::ConfigError,
                    "malformed X specifier: " + spec);
    return spec.substr(prefix.size(), spec.size() - prefix.size() - 1);
  };
  if (spec.rfind("coset_reps(", 0) == 0) {
    uint32_t J = parse_generator_set(b.system(), inner_of("coset_reps("));
    return coset_data(b, J).reps;
  }
  if (spec.rfind("classifier_region(", 0) == 0) {
    if (!geo)
      throw KlError(ErrorCode::ConfigError,
                    "classifier_region requires the alcove geometry");
    std::string inner = inner_of("classifier_region(");
    std::string label_tok = inner;
    int shift = u;
    size_t comma = inner.find(',');
    if (comma != std::string::npos) {
      label_tok = inner.substr(0, comma);
      std::string rest = inner.substr(comma + 1);
      size_t lo = rest.find_first_not_of(' ');
      if (lo == std::string::npos || rest.compare(lo, 11, "shifted_by=") != 0)
        throw KlError(ErrorCode::ConfigError,
                      "malformed classifier_region arguments: " + spec);
      shift = b.parse_word(rest.substr(lo + 11));
    }
    size_t lo = label_tok.find_first_not_of(' ');
    size_t hi = label_tok.find_last_not_of(' ');
    if (lo == std::string::npos)
      throw KlError(ErrorCode::ConfigError, "missing region label");
    RegionLabel l = parse_region(label_tok.substr(lo, hi - lo + 1));
    return region_shift_set(*geo, l, shift);
  }
  throw KlError(ErrorCode::ConfigError, "unrecognized X specifier: " + spec);
}

}  // namespace detail

// JSON datum: {"name": ..., "U": [words], "X": {word: list | specifier}}
// where a specifier is "coset_reps(s1,s2)" or
// "classifier_region(C1, shifted_by=s1.s2.s1.s2.s1)" (the shift defaults to
// the member itself).
inline InductionDatum datum_from_json(KLCache& kl, const std::string& text,
                                      const G2Geometry* geo = nullptr) {
  const BallTable& b = kl.ball();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw KlError(ErrorCode::ConfigError,
                  std::string("datum is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("U") || !doc["U"].is_array() ||
      !doc.contains("X") || !doc["X"].is_object())
    throw KlError(ErrorCode::ConfigError,
                  "datum requires a U array and an X object");
  std::string name = doc.value("name", std::string("custom"));
  std::vector<int> us;
  std::vector<std::vector<int>> xl;
  for (const auto& uw : doc["U"]) {
    if (!uw.is_string())
      throw KlError(ErrorCode::ConfigError, "U members must be word strings");
    std::string word = uw.get<std::string>();
    int u = b.parse_word(word);
    if (!doc["X"].contains(word))
      throw KlError(ErrorCode::ConfigError,
                    "no X entry for U member " + word);
    const auto& xs = doc["X"][word];
    if (xs.is_string()) {
      xl.push_back(detail::parse_x_spec(kl, geo, xs.get<std::string>(), u));
    } else if (xs.is_array()) {
      std::vector<int> lst;
      for (const auto& xw : xs) {
        if (!xw.is_string())
          throw KlError(ErrorCode::ConfigError,
                        "X members must be word strings");
        lst.push_back(b.parse_word(xw.get<std::string>()));
      }
      xl.push_back(std::move(lst));
    } else {
      throw KlError(ErrorCode::ConfigError,
                    "X entry for " + word + " must be a list or a specifier");
    }
    us.push_back(u);
  }
  return InductionDatum(kl, std::move(name), std::move(us), std::move(xl));
}

}  // namespace klcells
