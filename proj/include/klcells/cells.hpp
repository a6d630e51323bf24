#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "klcells/klbasis.hpp"

namespace klcells {

enum class CellKind { left, right, two_sided };

inline const char* cell_kind_name(CellKind k) {
  switch (k) {
    case CellKind::left: return "left";
    case CellKind::right: return "right";
    case CellKind::two_sided: return "two_sided";
  }
  return "unknown";
}

// Three-valued outcome for claims checked on a truncated ball: some
// instances are genuinely undecidable in-window and must not be coerced
// to a boolean.
enum class Verdict { certified_yes, certified_no, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified_yes: return "certified_yes";
    case Verdict::certified_no: return "certified_no";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

// Directed pre-order edge y <- w: C_y appears with a nonzero coefficient
// in C_s C_w (left side) or C_w C_s (right side).
struct CellEdge {
  int from = 0;        // w
  int to = 0;          // y
  int gen = 0;         // the witness generator s
  LaurentPoly coeff;   // the witness coefficient of C_y
};

// Edges leaving one node. The boundary flag records that some ascent
// product escaped the ball, so the edge list may be incomplete.
struct NodeEdges {
  std::vector<CellEdge> edges;
  bool boundary = false;
};

// All y != w with C_y appearing in some C_s C_w. The M-polynomial part of
// each product is computable inside the ball even when sw escapes; only
// the C_{sw} target itself can be lost, which sets the boundary flag.
inline NodeEdges left_edges(KLCache& kl, int w) {
  const BallTable& ball = kl.ball();
  NodeEdges out;
  for (int s = 0; s < ball.rank(); ++s) {
    if (ball.is_left_descent(w, s)) continue;
    int sw = ball.left(w, s);
    if (sw == BallTable::out_of_ball)
      out.boundary = true;
    else
      out.edges.push_back({w, sw, s, LaurentPoly::from_int(1)});
    for (int z = 0; z < ball.size(); ++z) {
      if (ball.length(z) >= ball.length(w)) break;
      if (!ball.is_left_descent(z, s) || !ball.bruhat_leq(z, w)) continue;
      LaurentPoly m = kl.m_poly(s, z, w, Side::left);
      if (!m.is_zero()) out.edges.push_back({w, z, s, std::move(m)});
    }
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const CellEdge& a, const CellEdge& b) {
              return std::pair(a.to, a.gen) < std::pair(b.to, b.gen);
            });
  return out;
}

// Right edges, transported through inversion: y <-_R w iff y^-1 <-_L w^-1.
inline NodeEdges right_edges(KLCache& kl, int w) {
  const BallTable& ball = kl.ball();
  NodeEdges le = left_edges(kl, ball.invert(w));
  NodeEdges out;
  out.boundary = le.boundary;
  out.edges.reserve(le.edges.size());
  for (CellEdge& e : le.edges)
    out.edges.push_back({w, ball.invert(e.to), e.gen, std::move(e.coeff)});
  std::sort(out.edges.begin(), out.edges.end(),
            [](const CellEdge& a, const CellEdge& b) {
              return std::pair(a.to, a.gen) < std::pair(b.to, b.gen);
            });
  return out;
}

// The full pre-order graph over the ball for one kind. Nodes are the ball
// indices; two_sided takes the union of the left and right edge sets.
struct CellGraph {
  CellKind kind = CellKind::left;
  std::vector<std::vector<CellEdge>> node_edges;
  std::vector<char> boundary;
};

inline CellGraph cell_graph(KLCache& kl, CellKind kind) {
  const BallTable& ball = kl.ball();
  CellGraph g;
  g.kind = kind;
  g.node_edges.resize(static_cast<size_t>(ball.size()));
  g.boundary.assign(static_cast<size_t>(ball.size()), 0);
  for (int w = 0; w < ball.size(); ++w) {
    bool bnd = false;
    auto& es = g.node_edges[static_cast<size_t>(w)];
    if (kind != CellKind::right) {
      NodeEdges le = left_edges(kl, w);
      bnd = bnd || le.boundary;
      for (CellEdge& e : le.edges) es.push_back(std::move(e));
    }
    if (kind != CellKind::left) {
      NodeEdges re = right_edges(kl, w);
      bnd = bnd || re.boundary;
      for (CellEdge& e : re.edges) es.push_back(std::move(e));
    }
    g.boundary[static_cast<size_t>(w)] = bnd ? 1 : 0;
  }
  return g;
}

namespace detail {

// Iterative Tarjan; returns the component id per node (ids are arbitrary
// until the caller renumbers).
inline std::vector<int> strongly_connected(
    const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> index(static_cast<size_t>(n), -1),
      low(static_cast<size_t>(n), 0), comp(static_cast<size_t>(n), -1);
  std::vector<char> on_stack(static_cast<size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::pair<int, size_t>> call;
  int next_index = 0, next_comp = 0;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      size_t uv = static_cast<size_t>(v);
      if (ei == 0) {
        index[uv] = low[uv] = next_index++;
        stack.push_back(v);
        on_stack[uv] = 1;
      }
      bool descended = false;
      while (ei < adj[uv].size()) {
        int t = adj[uv][ei++];
        size_t ut = static_cast<size_t>(t);
        if (index[ut] == -1) {
          call.emplace_back(t, 0);
          descended = true;
          break;
        }
        if (on_stack[ut]) low[uv] = std::min(low[uv], index[ut]);
      }
      if (descended) continue;
      if (low[uv] == index[uv]) {
        for (;;) {
          int t = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(t)] = 0;
          comp[static_cast<size_t>(t)] = next_comp;
          if (t == v) break;
        }
        ++next_comp;
      }
      call.pop_back();
      if (!call.empty()) {
        size_t up = static_cast<size_t>(call.back().first);
        low[up] = std::min(low[up], low[uv]);
      }
    }
  }
  return comp;
}

}  // namespace detail

// Partition of the ball into cells of one kind, with the condensation
// order. Cells are sorted by their least element index (index order is
// (length, ShortLex word), so this is min-length-then-ShortLex), and each
// cell's members are ascending. A cell is interior-certified iff every
// member has length <= radius - 1, in which case no product escapes the
// ball and its edge set is complete.
struct CellPartition {
  CellKind kind = CellKind::left;
  int radius = 0;
  std::vector<std::vector<int>> cells;
  std::vector<char> interior_certified;
  std::vector<std::pair<int, int>> order;  // (lower cell, upper cell)
  std::vector<std::string> names;          // optional display names
  std::vector<int> cell_of;                // element -> cell index
};

inline bool is_interior(const BallTable& ball, int w) {
  return ball.length(w) <= ball.radius() - 1;
}

inline CellPartition partition_from_graph(const BallTable& ball,
                                          const CellGraph& g) {
  size_t n = g.node_edges.size();
  std::vector<std::vector<int>> adj(n);
  for (size_t w = 0; w < n; ++w) {
    std::set<int> targets;
    for (const CellEdge& e : g.node_edges[w]) targets.insert(e.to);
    adj[w].assign(targets.begin(), targets.end());
  }
  std::vector<int> comp = detail::strongly_connected(adj);

  int comp_count = 0;
  for (int c : comp) comp_count = std::max(comp_count, c + 1);
  std::vector<std::vector<int>> groups(static_cast<size_t>(comp_count));
  for (int w = 0; w < static_cast<int>(n); ++w)
    groups[static_cast<size_t>(comp[static_cast<size_t>(w)])].push_back(w);
  std::sort(groups.begin(), groups.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });

  CellPartition part;
  part.kind = g.kind;
  part.radius = ball.radius();
  part.cells = std::move(groups);
  part.cell_of.assign(n, -1);
  for (size_t c = 0; c < part.cells.size(); ++c)
    for (int w : part.cells[c]) part.cell_of[static_cast<size_t>(w)] = static_cast<int>(c);

  part.interior_certified.assign(part.cells.size(), 0);
  for (size_t c = 0; c < part.cells.size(); ++c) {
    bool ok = true;
    for (int w : part.cells[c])
      if (!is_interior(ball, w) || g.boundary[static_cast<size_t>(w)]) ok = false;
    part.interior_certified[c] = ok ? 1 : 0;
  }

  std::set<std::pair<int, int>> rel;
  for (size_t w = 0; w < n; ++w)
    for (const CellEdge& e : g.node_edges[w]) {
      int cw = part.cell_of[static_cast<size_t>(e.from)];
      int cy = part.cell_of[static_cast<size_t>(e.to)];
      if (cw != cy) rel.emplace(cy, cw);
    }
  for (const auto& [a, b] : rel)
    if (rel.count({b, a}))
      throw KlError(ErrorCode::AuditFailed,
                    "condensation order is not antisymmetric");
  part.order.assign(rel.begin(), rel.end());
  return part;
}

inline CellPartition cells_of(KLCache& kl, CellKind kind) {
  return partition_from_graph(kl.ball(), cell_graph(kl, kind));
}

// Condensation order with witness edges and its reflexive-transitive
// closure. leq[a][b] means cell a is below-or-equal cell b.
struct CellOrder {
  int cell_count = 0;
  std::vector<CellEdge> witnesses;           // one per direct relation
  std::vector<std::pair<int, int>> edges;    // (lower, upper), parallel to witnesses
  std::vector<std::vector<char>> leq;
};

inline CellOrder cell_order(KLCache& kl, const CellPartition& part) {
  CellGraph g = cell_graph(kl, part.kind);
  CellOrder ord;
  ord.cell_count = static_cast<int>(part.cells.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& es : g.node_edges)
    for (const CellEdge& e : es) {
      int cw = part.cell_of[static_cast<size_t>(e.from)];
      int cy = part.cell_of[static_cast<size_t>(e.to)];
      if (cw == cy) continue;
      if (seen.emplace(cy, cw).second) {
        ord.edges.emplace_back(cy, cw);
        ord.witnesses.push_back(e);
      }
    }
  size_t n = static_cast<size_t>(ord.cell_count);
  ord.leq.assign(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i) ord.leq[i][i] = 1;
  for (const auto& [lo, hi] : ord.edges)
    ord.leq[static_cast<size_t>(lo)][static_cast<size_t>(hi)] = 1;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i) {
      if (!ord.leq[i][k]) continue;
      for (size_t j = 0; j < n; ++j)
        if (ord.leq[k][j]) ord.leq[i][j] = 1;
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (ord.leq[i][j] && ord.leq[j][i])
        throw KlError(ErrorCode::AuditFailed,
                      "cell order closure is not antisymmetric");
  return ord;
}

// Outcome of a left-ideal certification attempt, with the violating edge
// when the answer is certified_no.
struct IdealReport {
  Verdict verdict = Verdict::inconclusive;
  int witness_from = -1;
  int witness_to = -1;
  int witness_gen = -1;
};

// Is span{C_w : w in subset} a left ideal? Certified no if a product edge
// exits the subset from an interior node; certified yes if every interior
// node's edges stay inside and at least one node was actually checkable
// (vacuously yes for the empty set); inconclusive when the subset has no
// interior part to examine.
inline IdealReport is_left_ideal(KLCache& kl, const std::vector<int>& subset) {
  const BallTable& ball = kl.ball();
  std::vector<char> in(static_cast<size_t>(ball.size()), 0);
  for (int w : subset) {
    if (w < 0 || w >= ball.size())
      throw KlError(ErrorCode::PreconditionViolated,
                    "subset element outside the ball");
    in[static_cast<size_t>(w)] = 1;
  }
  IdealReport rep;
  bool any_interior = false;
  for (int w : subset) {
    if (!is_interior(ball, w)) continue;
    any_interior = true;
    for (const CellEdge& e : left_edges(kl, w).edges)
      if (!in[static_cast<size_t>(e.to)]) {
        rep.verdict = Verdict::certified_no;
        rep.witness_from = e.from;
        rep.witness_to = e.to;
        rep.witness_gen = e.gen;
        return rep;
      }
  }
  rep.verdict = (subset.empty() || any_interior) ? Verdict::certified_yes
                                                 : Verdict::inconclusive;
  return rep;
}

// Checks the two-sided-cell criterion for a family of left cells T_i:
// the union must be inverse-stable and every ordered pair (i, j), the
// diagonal included, must satisfy T_i^-1 cap T_j != empty. A missing
// intersection inside the window is inconclusive rather than false.
inline Verdict check_itsc(const BallTable& ball,
                          const std::vector<std::vector<int>>& parts) {
  std::vector<char> in_union(static_cast<size_t>(ball.size()), 0);
  for (const auto& part : parts)
    for (int w : part) {
      if (w < 0 || w >= ball.size())
        throw KlError(ErrorCode::PreconditionViolated,
                      "set element outside the ball");
      in_union[static_cast<size_t>(w)] = 1;
    }
  for (int w = 0; w < ball.size(); ++w)
    if (in_union[static_cast<size_t>(w)] &&
        !in_union[static_cast<size_t>(ball.invert(w))])
      return Verdict::certified_no;

  bool all_pairs = true;
  for (const auto& ti : parts) {
    std::vector<char> inv_ti(static_cast<size_t>(ball.size()), 0);
    for (int w : ti) inv_ti[static_cast<size_t>(ball.invert(w))] = 1;
    for (const auto& tj : parts) {
      bool hit = false;
      for (int w : tj)
        if (inv_ti[static_cast<size_t>(w)]) {
          hit = true;
          break;
        }
      if (!hit) all_pairs = false;
    }
  }
  return all_pairs ? Verdict::certified_yes : Verdict::inconclusive;
}

// One right-multiplication step of ideal propagation. Splits B by the
// right descent s into B_s = {w : ws < w} and B'_s = {w : ws > w},
// verifies C_{w'} C_s = C_{w's} + (combination over A) for every interior
// w' in B'_s, and returns A union B_s union B'_s s. Members of B'_s s are
// collected only when w's stays in the ball; escaping products belong to
// the returned set conceptually but are outside the window.
inline std::vector<int> propagate_ideal_right(KLCache& kl,
                                              const std::vector<int>& B,
                                              int s,
                                              const std::vector<int>& A) {
  const BallTable& ball = kl.ball();
  if (is_left_ideal(kl, A).verdict == Verdict::certified_no ||
      is_left_ideal(kl, B).verdict == Verdict::certified_no)
    throw KlError(ErrorCode::PreconditionViolated,
                  "propagation requires left ideals");
  std::vector<char> in_a(static_cast<size_t>(ball.size()), 0);
  for (int w : A) in_a[static_cast<size_t>(w)] = 1;

  std::set<int> result(A.begin(), A.end());
  for (int w : B) {
    if (ball.is_right_descent(w, s)) {
      result.insert(w);
      continue;
    }
    int ws = ball.right(w, s);
    if (ws != BallTable::out_of_ball) result.insert(ws);
    if (!is_interior(ball, w)) continue;
    HeckeElt prod = kl.mul_c(MulKind::Cw_Cs, s, w);
    for (const auto& [z, c] : prod.coeffs()) {
      if (z == ws) {
        if (!c.is_one())
          throw KlError(ErrorCode::HypothesisFailed,
                        "leading coefficient is not 1 at " + ball.word_str(w));
        continue;
      }
      if (!in_a[static_cast<size_t>(z)])
        throw KlError(ErrorCode::HypothesisFailed,
                      "C[" + ball.word_str(w) + "] C[s" +
                          std::to_string(s + 1) + "] meets C[" +
                          ball.word_str(z) + "] outside the base ideal");
    }
  }
  return {result.begin(), result.end()};
}

// Exhaustive dichotomy scan for the helper lemma on a generator subset S'
// with equal weights inside and strictly larger weights outside: whenever
// M^{s'}_{y,w} != 0, either L(w) is contained in L(y), or w = sy for some
// s in S' and the M-polynomial is the constant 1.
struct MuScanReport {
  long triples_checked = 0;
  long nonzero_m = 0;
  std::vector<std::array<int, 3>> violations;  // (s', y, w)
};

inline MuScanReport check_lemma_mu(KLCache& kl, uint32_t s_prime) {
  const BallTable& ball = kl.ball();
  const CoxeterSystem& sys = ball.system();
  long inside = -1;
  for (int s = 0; s < ball.rank(); ++s) {
    if (!((s_prime >> s) & 1u)) continue;
    if (inside == -1) inside = sys.weight(s);
    if (sys.weight(s) != inside)
      throw KlError(ErrorCode::WeightHypothesisViolated,
                    "unequal weights inside the subset");
  }
  if (inside == -1)
    throw KlError(ErrorCode::WeightHypothesisViolated, "empty subset");
  for (int s = 0; s < ball.rank(); ++s)
    if (!((s_prime >> s) & 1u) && sys.weight(s) <= inside)
      throw KlError(ErrorCode::WeightHypothesisViolated,
                    "outside weight not strictly larger");

  MuScanReport rep;
  for (int sp = 0; sp < ball.rank(); ++sp) {
    if (!((s_prime >> sp) & 1u)) continue;
    for (int w = 0; w < ball.size(); ++w) {
      if (ball.is_left_descent(w, sp)) continue;
      for (int y = 0; y < ball.size(); ++y) {
        if (ball.length(y) >= ball.length(w)) break;
        if (!ball.is_left_descent(y, sp) || !ball.bruhat_leq(y, w)) continue;
        ++rep.triples_checked;
        LaurentPoly m = kl.m_poly(sp, y, w, Side::left);
        if (m.is_zero()) continue;
        ++rep.nonzero_m;
        uint32_t lw = ball.left_descents(w), ly = ball.left_descents(y);
        if ((lw & ly) == lw) continue;
        bool adjacent = false;
        for (int s = 0; s < ball.rank(); ++s)
          if (((s_prime >> s) & 1u) && ball.left(y, s) == w) adjacent = true;
        if (adjacent && m.is_one()) continue;
        rep.violations.push_back({sp, y, w});
      }
    }
  }
  return rep;
}

// Set-of-sets comparison of two partitions over the same ball, optionally
// restricted to the interior; empty restricted pieces are dropped.
struct PartitionDiff {
  std::vector<std::vector<int>> only_in_a;
  std::vector<std::vector<int>> only_in_b;
  bool equal() const { return only_in_a.empty() && only_in_b.empty(); }
};

inline PartitionDiff compare_partitions(const BallTable& ball,
                                        const CellPartition& a,
                                        const CellPartition& b,
                                        bool interior_only) {
  auto canonical = [&](const CellPartition& p) {
    std::set<std::vector<int>> out;
    for (const auto& cell : p.cells) {
      std::vector<int> c;
      for (int w : cell)
        if (!interior_only || is_interior(ball, w)) c.push_back(w);
      if (!c.empty()) out.insert(std::move(c));
    }
    return out;
  };
  std::set<std::vector<int>> sa = canonical(a), sb = canonical(b);
  PartitionDiff diff;
  for (const auto& c : sa)
    if (!sb.count(c)) diff.only_in_a.push_back(c);
  for (const auto& c : sb)
    if (!sa.count(c)) diff.only_in_b.push_back(c);
  return diff;
}

}  // namespace klcells
