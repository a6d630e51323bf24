#pragma once
// Stable text artifacts for the computed tables. Every renderer is
// deterministic: identical inputs produce byte-identical output. Each
// artifact carries a header block (configuration hash, ball radius,
// weight vector) so tables computed for different parameters are never
// confused with one another.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <klcells/cells.hpp>
#include <klcells/coxeter.hpp>
#include <klcells/errors.hpp>
#include <klcells/g2.hpp>
#include <klcells/induction.hpp>
#include <klcells/klbasis.hpp>

namespace klcells {

using OrderedJson = nlohmann::ordered_json;

inline const char* error_name(ErrorCode code) { return error_code_name(code); }

namespace detail {

// FNV-1a over a canonical description of matrix, weights, labels, radius.
inline std::string config_hash(const BallTable& ball) {
  const CoxeterSystem& sys = ball.system();
  std::string desc = "m:";
  for (int i = 0; i < sys.rank; ++i)
    for (int j = 0; j < sys.rank; ++j)
      desc +=
          std::to_string(sys.m[static_cast<size_t>(i)][static_cast<size_t>(j)]) +
          ",";
  desc += "w:";
  for (long w : sys.weights) desc += std::to_string(w) + ",";
  desc += "l:";
  for (const std::string& l : sys.labels) desc += l + ",";
  desc += "r:" + std::to_string(ball.radius());
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : desc) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[static_cast<size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return hex;
}

}  // namespace detail

inline OrderedJson meta_block(const BallTable& ball) {
  const CoxeterSystem& sys = ball.system();
  OrderedJson m;
  m["config_hash"] = detail::config_hash(ball);
  m["radius"] = ball.radius();
  m["weights"] = sys.weights;
  m["generators"] = sys.labels;
  m["elements"] = ball.size();
  return m;
}

// One-line header for non-JSON artifacts; same fields as meta_block.
inline std::string meta_line(const BallTable& ball) {
  std::string out = "config_hash=" + detail::config_hash(ball) +
                    " radius=" + std::to_string(ball.radius()) + " weights=";
  const std::vector<long>& w = ball.system().weights;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(w[i]);
  }
  return out;
}

inline std::string dump_json(const OrderedJson& doc) {
  return doc.dump(2) + "\n";
}

inline OrderedJson error_record(const KlError& e) {
  OrderedJson doc;
  doc["error"]["code"] = error_name(e.code());
  doc["error"]["detail"] = e.detail();
  return doc;
}

inline OrderedJson render_ball(const BallTable& ball) {
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  std::vector<long> by_length(static_cast<size_t>(ball.radius()) + 1, 0);
  OrderedJson elems = OrderedJson::array();
  for (int w = 0; w < ball.size(); ++w) {
    ++by_length[static_cast<size_t>(ball.length(w))];
    OrderedJson e;
    e["index"] = w;
    e["word"] = ball.word_str(w);
    e["length"] = ball.length(w);
    std::string desc;
    for (int s = 0; s < ball.rank(); ++s)
      if ((ball.right_descents(w) >> static_cast<uint32_t>(s)) & 1u) {
        if (!desc.empty()) desc += ",";
        desc += ball.system().labels[static_cast<size_t>(s)];
      }
    e["right_descents"] = desc;
    elems.push_back(std::move(e));
  }
  doc["count_by_length"] = by_length;
  doc["elements"] = std::move(elems);
  return doc;
}

inline std::string render_ball_text(const BallTable& ball) {
  std::string out = "# " + meta_line(ball) + "\n";
  for (int w = 0; w < ball.size(); ++w)
    out += std::to_string(w) + "\t" + std::to_string(ball.length(w)) + "\t" +
           ball.word_str(w) + "\n";
  return out;
}

// All nonzero subdiagonal canonical-basis coefficients P_{y,w}.
inline OrderedJson render_kl(KLCache& kl) {
  const BallTable& ball = kl.ball();
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  OrderedJson rows = OrderedJson::array();
  for (int w = 0; w < ball.size(); ++w)
    for (int y = 0; y < w; ++y) {
      if (!ball.bruhat_leq(y, w)) continue;
      LaurentPoly p = kl.kl_p(y, w);
      if (p.is_zero()) continue;
      OrderedJson row;
      row["y"] = ball.word_str(y);
      row["w"] = ball.word_str(w);
      row["p"] = p.str();
      rows.push_back(std::move(row));
    }
  doc["entries"] = std::move(rows);
  return doc;
}

inline std::string render_kl_text(KLCache& kl) {
  const BallTable& ball = kl.ball();
  std::string out = "# " + meta_line(ball) + "\n";
  for (int w = 0; w < ball.size(); ++w)
    for (int y = 0; y < w; ++y) {
      if (!ball.bruhat_leq(y, w)) continue;
      LaurentPoly p = kl.kl_p(y, w);
      if (p.is_zero()) continue;
      out += ball.word_str(y) + "\t" + ball.word_str(w) + "\t" + p.str() +
             "\n";
    }
  return out;
}

// All nonzero edge polynomials M^s_{z,w} over admissible triples.
inline OrderedJson render_mu(KLCache& kl) {
  const BallTable& ball = kl.ball();
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  OrderedJson rows = OrderedJson::array();
  for (int s = 0; s < ball.rank(); ++s)
    for (int w = 0; w < ball.size(); ++w) {
      if (ball.is_left_descent(w, s)) continue;
      for (int z = 0; z < w; ++z) {
        if (!ball.is_left_descent(z, s) || !ball.bruhat_leq(z, w)) continue;
        LaurentPoly m = kl.m_poly(s, z, w, Side::left);
        if (m.is_zero()) continue;
        OrderedJson row;
        row["s"] = ball.system().labels[static_cast<size_t>(s)];
        row["z"] = ball.word_str(z);
        row["w"] = ball.word_str(w);
        row["m"] = m.str();
        rows.push_back(std::move(row));
      }
    }
  doc["entries"] = std::move(rows);
  return doc;
}

// Standard-basis expansion of every canonical basis element.
inline OrderedJson render_cbasis(KLCache& kl) {
  const BallTable& ball = kl.ball();
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  OrderedJson rows = OrderedJson::array();
  for (int w = 0; w < ball.size(); ++w) {
    OrderedJson row;
    row["w"] = ball.word_str(w);
    OrderedJson coeffs = OrderedJson::array();
    for (const auto& [y, p] : kl.c_elt(w).coeffs()) {
      OrderedJson t;
      t["y"] = ball.word_str(y);
      t["p"] = p.str();
      coeffs.push_back(std::move(t));
    }
    row["coeffs"] = std::move(coeffs);
    rows.push_back(std::move(row));
  }
  doc["expansions"] = std::move(rows);
  return doc;
}

namespace detail {

inline OrderedJson partition_json(const BallTable& ball,
                                  const CellPartition& part) {
  OrderedJson p;
  OrderedJson cells = OrderedJson::array();
  for (size_t c = 0; c < part.cells.size(); ++c) {
    OrderedJson cell;
    cell["index"] = c;
    if (c < part.names.size()) cell["name"] = part.names[c];
    cell["certified"] = part.interior_certified[c] != 0;
    OrderedJson members = OrderedJson::array();
    for (int w : part.cells[c]) members.push_back(ball.word_str(w));
    cell["members"] = std::move(members);
    cells.push_back(std::move(cell));
  }
  p["cells"] = std::move(cells);
  return p;
}

}  // namespace detail

// Left, right, and two-sided partitions plus the left-cell order edges.
inline OrderedJson render_cells(KLCache& kl) {
  const BallTable& ball = kl.ball();
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  CellPartition left = cells_of(kl, CellKind::left);
  doc["left"] = detail::partition_json(ball, left);
  doc["right"] = detail::partition_json(ball, cells_of(kl, CellKind::right));
  doc["two_sided"] =
      detail::partition_json(ball, cells_of(kl, CellKind::two_sided));
  CellOrder ord = cell_order(kl, left);
  OrderedJson edges = OrderedJson::array();
  std::vector<std::pair<int, int>> sorted_edges = ord.edges;
  std::sort(sorted_edges.begin(), sorted_edges.end());
  sorted_edges.erase(std::unique(sorted_edges.begin(), sorted_edges.end()),
                     sorted_edges.end());
  for (const auto& [lo, hi] : sorted_edges)
    edges.push_back(OrderedJson::array({lo, hi}));
  doc["left_order_edges"] = std::move(edges);
  return doc;
}

// Difference between the computed left cells and the partition predicted
// by the alcove classifier, restricted to the certified interior.
inline OrderedJson render_compare(KLCache& kl, const G2Geometry& geo) {
  const BallTable& ball = kl.ball();
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  CellPartition computed = cells_of(kl, CellKind::left);
  CellPartition predicted = geo.predicted_partition();
  PartitionDiff diff = compare_partitions(ball, computed, predicted, true);
  auto side = [&](const std::vector<std::vector<int>>& cells) {
    OrderedJson out = OrderedJson::array();
    for (const auto& cell : cells) {
      OrderedJson members = OrderedJson::array();
      for (int w : cell) members.push_back(ball.word_str(w));
      out.push_back(std::move(members));
    }
    return out;
  };
  doc["interior_only"] = true;
  doc["computed_only"] = side(diff.only_in_a);
  doc["predicted_only"] = side(diff.only_in_b);
  doc["match"] = diff.only_in_a.empty() && diff.only_in_b.empty();
  return doc;
}

// DOT digraph of the left-cell order, reduced to covering edges.
inline std::string render_hasse_dot(KLCache& kl) {
  const BallTable& ball = kl.ball();
  CellPartition part = cells_of(kl, CellKind::left);
  CellOrder ord = cell_order(kl, part);
  size_t n = static_cast<size_t>(ord.cell_count);
  auto strict = [&](size_t a, size_t b) {
    return ord.leq[a][b] && !ord.leq[b][a];
  };
  std::string out = "// " + meta_line(ball) + "\ndigraph cell_order {\n";
  out += "  rankdir=BT;\n";
  for (size_t c = 0; c < n; ++c) {
    std::string label = "cell" + std::to_string(c);
    std::string rep = ball.word_str(part.cells[c].front());
    out += "  " + label + " [label=\"" + rep + " (" +
           std::to_string(part.cells[c].size()) + ")" +
           (part.interior_certified[c] ? "" : " ?") + "\"];\n";
  }
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b || !strict(a, b)) continue;
      bool covering = true;
      for (size_t m = 0; m < n && covering; ++m)
        if (m != a && m != b && strict(a, m) && strict(m, b)) covering = false;
      if (covering)
        out += "  cell" + std::to_string(a) + " -> cell" + std::to_string(b) +
               ";\n";
    }
  out += "}\n";
  return out;
}

// SVG drawing of the alcove tiling colored by region.
inline std::string render_g2_svg(const G2Geometry& geo) {
  return "<!-- " + meta_line(geo.ball()) + " -->\n" +
         geo.emit_svg(geo.predicted_partition());
}

inline OrderedJson condition_json(const ConditionCheck& c) {
  OrderedJson out;
  out["verdict"] = verdict_name(c.verdict);
  if (!c.witness.empty()) out["witness"] = c.witness;
  out["checked"] = c.checked;
  out["skipped"] = c.skipped;
  return out;
}

// Conditions report, preorder classes, and (when everything is certified)
// the ideal induced by the whole of U.
inline OrderedJson render_induct(InductionDatum& datum) {
  const BallTable& ball = datum.ball();
  OrderedJson doc;
  doc["meta"] = meta_block(ball);
  doc["datum"] = datum.name();
  OrderedJson members = OrderedJson::array();
  for (int i = 0; i < datum.u_count(); ++i) {
    OrderedJson m;
    m["u"] = ball.word_str(datum.u_members()[static_cast<size_t>(i)]);
    m["x_count"] = datum.x_scope(i).size();
    members.push_back(std::move(m));
  }
  doc["u_members"] = std::move(members);
  const ConditionsReport& rep = datum.conditions();
  doc["conditions"]["unit_present"] = condition_json(rep.unit_present);
  doc["conditions"]["length_additive"] = condition_json(rep.length_additive);
  doc["conditions"]["products_disjoint"] =
      condition_json(rep.products_disjoint);
  doc["conditions"]["span_closed"] = condition_json(rep.span_closed);
  doc["conditions"]["degrees_negative"] = condition_json(rep.degrees_negative);
  OrderedJson fails = OrderedJson::array();
  for (const auto& f : rep.degree_failures) {
    OrderedJson rec;
    rec["u"] = ball.word_str(datum.u_members()[static_cast<size_t>(f[0])]);
    rec["u1"] = ball.word_str(f[1]);
    rec["x"] = ball.word_str(f[2]);
    fails.push_back(std::move(rec));
  }
  doc["degree_failures"] = std::move(fails);
  if (!datum.notes().empty()) doc["notes"] = datum.notes();
  if (rep.span_closed.verdict == Verdict::certified_yes) {
    const PreorderResult& pre = datum.preorder();
    OrderedJson classes = OrderedJson::array();
    for (const auto& cls : pre.classes) {
      OrderedJson members_of = OrderedJson::array();
      for (int i : cls)
        members_of.push_back(
            ball.word_str(datum.u_members()[static_cast<size_t>(i)]));
      classes.push_back(std::move(members_of));
    }
    doc["preorder_classes"] = std::move(classes);
  }
  if (rep.all_pass()) {
    std::vector<int> all(static_cast<size_t>(datum.u_count()));
    for (int i = 0; i < datum.u_count(); ++i) all[static_cast<size_t>(i)] = i;
    InducedIdeal ideal = induced_ideal(datum, all);
    doc["ideal"]["member_count"] = ideal.members.size();
    doc["ideal"]["verdict"] = verdict_name(ideal.report.verdict);
    OrderedJson words = OrderedJson::array();
    for (int w : ideal.members) words.push_back(ball.word_str(w));
    doc["ideal"]["members"] = std::move(words);
  }
  return doc;
}

}  // namespace klcells
