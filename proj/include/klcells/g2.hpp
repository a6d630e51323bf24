#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "klcells/cells.hpp"
#include "klcells/g2_regions_data.hpp"

namespace klcells {

// The 31 regions of the alcove-plane decomposition: six cone families
// A/A'/B/C around the origin, three finite D regions, the two finite E
// regions, the singleton F and the fundamental alcove.
enum class RegionLabel : int {
  IDENT, E1, E2, F, D1, D2, D3,
  A1, A2, A3, A4, A5, A6,
  Ap1, Ap2, Ap3, Ap4, Ap5, Ap6,
  B1, B2, B3, B4, B5, B6,
  C1, C2, C3, C4, C5, C6,
};

inline constexpr int region_label_count = 31;

inline const char* region_name(RegionLabel l) {
  static constexpr const char* names[region_label_count] = {
      "IDENT", "E1",  "E2",  "F",   "D1",  "D2",  "D3",
      "A1",    "A2",  "A3",  "A4",  "A5",  "A6",
      "A'1",   "A'2", "A'3", "A'4", "A'5", "A'6",
      "B1",    "B2",  "B3",  "B4",  "B5",  "B6",
      "C1",    "C2",  "C3",  "C4",  "C5",  "C6",
  };
  return names[static_cast<int>(l)];
}

inline RegionLabel parse_region(const std::string& name) {
  for (int i = 0; i < region_label_count; ++i)
    if (name == region_name(static_cast<RegionLabel>(i)))
      return static_cast<RegionLabel>(i);
  throw KlError(ErrorCode::ConfigError, "unknown region label " + name);
}

// Grouping of labels into the predicted two-sided families; the primed
// cones belong to the same family as their unprimed partners.
enum class RegionFamily { IDENT, E, F, D, A, B, C };

inline RegionFamily region_family(RegionLabel l) {
  int i = static_cast<int>(l);
  if (l == RegionLabel::IDENT) return RegionFamily::IDENT;
  if (l == RegionLabel::E1 || l == RegionLabel::E2) return RegionFamily::E;
  if (l == RegionLabel::F) return RegionFamily::F;
  if (i <= static_cast<int>(RegionLabel::D3)) return RegionFamily::D;
  if (i <= static_cast<int>(RegionLabel::Ap6)) return RegionFamily::A;
  if (i <= static_cast<int>(RegionLabel::B6)) return RegionFamily::B;
  return RegionFamily::C;
}

// The G2 root datum in fundamental-weight coordinates: each positive root
// as an exact integer vector, and each coroot as the integer linear form
// computing <x, alpha%> in the same coordinates.
struct RootSystemG2 {
  std::array<std::array<long, 2>, 6> positive_roots;
  std::array<std::array<long, 2>, 6> coroots;

  long pairing(int root, int coroot) const {
    const auto& a = positive_roots[static_cast<size_t>(root)];
    const auto& c = coroots[static_cast<size_t>(coroot)];
    return c[0] * a[0] + c[1] * a[1];
  }

  // Image of alpha_j under the reflection in alpha_i's wall through 0.
  std::array<long, 2> reflect_root(int i, int j) const {
    long p = pairing(j, i);
    const auto& aj = positive_roots[static_cast<size_t>(j)];
    const auto& ai = positive_roots[static_cast<size_t>(i)];
    return {aj[0] - p * ai[0], aj[1] - p * ai[1]};
  }

  static const RootSystemG2& standard() {
    static const RootSystemG2 sys{
        {{{2, -3}, {-1, 2}, {1, -1}, {0, 1}, {-1, 3}, {1, 0}}},
        {{{1, 0}, {0, 1}, {3, 1}, {3, 2}, {1, 1}, {2, 1}}}};
    return sys;
  }
};

// Integer floor coordinates of an alcove: k_r < <x, alpha_r%> < k_r + 1
// on the alcove interior, one strip index per positive root. Consistency
// is witnessed by the alcove barycenter, which satisfies the strict
// inequalities exactly.
struct AlcoveCoords {
  std::array<int, 6> floors{};

  friend bool operator==(const AlcoveCoords& a, const AlcoveCoords& b) {
    return a.floors == b.floors;
  }
  friend bool operator<(const AlcoveCoords& a, const AlcoveCoords& b) {
    return a.floors < b.floors;
  }

  std::string str() const {
    std::string out = "(";
    for (int r = 0; r < 6; ++r) {
      if (r) out += ",";
      out += std::to_string(floors[static_cast<size_t>(r)]);
    }
    return out + ")";
  }
};

// The region decision table: exact member lists for the finite regions,
// and disjunctions of floor-coordinate strip constraints for the 24
// infinite cones. Finite membership takes precedence; outside the finite
// lists exactly one cone clause must match.
class RegionTable {
 public:
  static constexpr long unbounded_lo = std::numeric_limits<long>::min();
  static constexpr long unbounded_hi = std::numeric_limits<long>::max();

  struct Clause {
    std::array<long, 6> lo;
    std::array<long, 6> hi;

    bool matches(const AlcoveCoords& a) const {
      for (size_t r = 0; r < 6; ++r)
        if (a.floors[r] < lo[r] || a.floors[r] > hi[r]) return false;
      return true;
    }
  };

  static RegionTable from_json(const std::string& text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw KlError(ErrorCode::ConfigError,
                    std::string("region table parse: ") + e.what());
    }
    RegionTable table;
    const auto& labels = doc.at("labels");
    if (labels.size() != region_label_count)
      throw KlError(ErrorCode::ConfigError, "region table must list 31 labels");
    for (int i = 0; i < region_label_count; ++i)
      if (labels.at(static_cast<size_t>(i)).get<std::string>() !=
          region_name(static_cast<RegionLabel>(i)))
        throw KlError(ErrorCode::ConfigError,
                      "region labels out of canonical order");

    table.finite_lists_.resize(region_label_count);
    for (const auto& [name, rows] : doc.at("finite").items()) {
      RegionLabel lab = parse_region(name);
      for (const auto& row : rows) {
        AlcoveCoords a;
        if (row.size() != 6)
          throw KlError(ErrorCode::ConfigError, "finite row must have 6 floors");
        for (size_t r = 0; r < 6; ++r) a.floors[r] = row.at(r).get<int>();
        if (!table.finite_.emplace(a, lab).second)
          throw KlError(ErrorCode::ConfigError,
                        "duplicate finite member " + a.str());
        table.finite_lists_[static_cast<size_t>(lab)].push_back(a);
      }
    }

    table.sectors_.resize(region_label_count);
    for (const auto& [name, clauses] : doc.at("sectors").items()) {
      RegionLabel lab = parse_region(name);
      if (!table.finite_lists_[static_cast<size_t>(lab)].empty())
        throw KlError(ErrorCode::ConfigError,
                      "label " + name + " is both finite and a cone");
      for (const auto& clause : clauses) {
        Clause c;
        if (clause.size() != 6)
          throw KlError(ErrorCode::ConfigError, "clause must have 6 ranges");
        for (size_t r = 0; r < 6; ++r) {
          const auto& pair = clause.at(r);
          c.lo[r] = pair.at(0).is_null() ? unbounded_lo : pair.at(0).get<long>();
          c.hi[r] = pair.at(1).is_null() ? unbounded_hi : pair.at(1).get<long>();
          if (c.lo[r] > c.hi[r])
            throw KlError(ErrorCode::ConfigError, "empty range in clause");
        }
        table.sectors_[static_cast<size_t>(lab)].push_back(c);
      }
    }
    for (int i = 0; i < region_label_count; ++i) {
      RegionLabel lab = static_cast<RegionLabel>(i);
      if (table.finite_lists_[static_cast<size_t>(i)].empty() &&
          table.sectors_[static_cast<size_t>(i)].empty())
        throw KlError(ErrorCode::ConfigError,
                      std::string("label ") + region_name(lab) +
                          " has neither members nor clauses");
    }
    return table;
  }

  static const RegionTable& builtin() {
    static const RegionTable table =
        from_json(std::string(g2_regions_json));
    return table;
  }

  bool is_finite_region(RegionLabel l) const {
    return !finite_lists_[static_cast<size_t>(l)].empty();
  }

  const std::vector<AlcoveCoords>& finite_members(RegionLabel l) const {
    return finite_lists_[static_cast<size_t>(l)];
  }

  RegionLabel classify(const AlcoveCoords& a) const {
    auto it = finite_.find(a);
    if (it != finite_.end()) return it->second;
    int hit = -1;
    for (int i = 0; i < region_label_count; ++i) {
      for (const Clause& c : sectors_[static_cast<size_t>(i)]) {
        if (!c.matches(a)) continue;
        if (hit != -1)
          throw KlError(ErrorCode::UnclassifiedAlcove,
                        "floors " + a.str() + " match both " +
                            region_name(static_cast<RegionLabel>(hit)) +
                            " and " +
                            region_name(static_cast<RegionLabel>(i)));
        hit = i;
        break;
      }
    }
    if (hit == -1)
      throw KlError(ErrorCode::UnclassifiedAlcove,
                    "floors " + a.str() + " match no region");
    return static_cast<RegionLabel>(hit);
  }

  // Audit view without the finite-precedence rule: every label whose
  // finite list or cone clauses contain the point.
  std::vector<RegionLabel> all_matches(const AlcoveCoords& a) const {
    std::vector<RegionLabel> out;
    auto it = finite_.find(a);
    if (it != finite_.end()) out.push_back(it->second);
    for (int i = 0; i < region_label_count; ++i)
      for (const Clause& c : sectors_[static_cast<size_t>(i)])
        if (c.matches(a)) {
          out.push_back(static_cast<RegionLabel>(i));
          break;
        }
    return out;
  }

 private:
  std::map<AlcoveCoords, RegionLabel> finite_;
  std::vector<std::vector<AlcoveCoords>> finite_lists_;
  std::vector<std::vector<Clause>> sectors_;
};

// Rendering knobs for the alcove-tiling picture. All geometry stays in
// exact integers; pixel positions are emitted at millipixel resolution.
struct SvgStyle {
  long scale = 24;  // pixels per lattice unit of the weight plane
  long margin = 12; // padding around the bounding box, in pixels
  int thin = 1;     // alcove outline stroke width
  int thick = 4;    // stroke width of boundaries between distinct cells
};

// Exact alcove geometry for the rank-2 affine system with bonds (6,3,2):
// alcove coordinates per group element, region classification, the
// predicted partition, and deterministic SVG rendering. Plane points are
// held in six-fold fundamental-weight coordinates so every alcove vertex
// is an integer vector; A0 has vertices (0,0), (2,0), (0,3).
class G2Geometry {
 public:
  using Vertex = std::array<long, 2>;
  using Triangle = std::array<Vertex, 3>;

  explicit G2Geometry(const BallTable& ball,
                      const RegionTable& table = RegionTable::builtin())
      : ball_(ball), table_(table) {
    const CoxeterSystem& sys = ball.system();
    const std::vector<std::vector<int>> want = {
        {1, 6, 2}, {6, 1, 3}, {2, 3, 1}};
    if (sys.rank != 3 || sys.m != want)
      throw KlError(ErrorCode::UnsupportedRank,
                    "alcove geometry requires the rank-2 affine system "
                    "with bond orders (6,3,2)");
    build_alcoves();
    check_anchors();
  }

  const BallTable& ball() const { return ball_; }
  const RegionTable& table() const { return table_; }

  const Triangle& triangle_of(int w) const {
    return tris_[static_cast<size_t>(w)];
  }

  const AlcoveCoords& alcove_of(int w) const {
    return coords_[static_cast<size_t>(w)];
  }

  // Number of root hyperplanes separating the alcove of w from A0.
  long separation_count(int w) const {
    const AlcoveCoords& a = alcove_of(w);
    long total = 0;
    for (int k : a.floors) total += k < 0 ? -k : k;
    return total;
  }

  RegionLabel classify(int w) const { return table_.classify(alcove_of(w)); }

  std::vector<int> region_members(RegionLabel l) const {
    std::vector<int> out;
    for (int w = 0; w < ball_.size(); ++w)
      if (classify(w) == l) out.push_back(w);
    return out;
  }

  // Least element of the region inside the ball, -1 if the region is
  // still empty at this radius. Index order is (length, ShortLex).
  int region_min(RegionLabel l) const {
    for (int w = 0; w < ball_.size(); ++w)
      if (classify(w) == l) return w;
    return -1;
  }

  // The partition of the ball predicted by the region classifier, in the
  // same packaging as the computed cell partition. The nonempty regions
  // become cells sorted by least element; no order relation is predicted.
  CellPartition predicted_partition() const {
    std::vector<std::vector<int>> groups(region_label_count);
    for (int w = 0; w < ball_.size(); ++w)
      groups[static_cast<size_t>(classify(w))].push_back(w);

    std::vector<int> present;
    for (int i = 0; i < region_label_count; ++i)
      if (!groups[static_cast<size_t>(i)].empty()) present.push_back(i);
    std::sort(present.begin(), present.end(), [&](int a, int b) {
      return groups[static_cast<size_t>(a)].front() <
             groups[static_cast<size_t>(b)].front();
    });

    CellPartition part;
    part.kind = CellKind::left;
    part.radius = ball_.radius();
    part.cell_of.assign(static_cast<size_t>(ball_.size()), -1);
    for (int i : present) {
      int c = static_cast<int>(part.cells.size());
      for (int w : groups[static_cast<size_t>(i)])
        part.cell_of[static_cast<size_t>(w)] = c;
      bool interior = true;
      for (int w : groups[static_cast<size_t>(i)])
        if (!is_interior(ball_, w)) interior = false;
      part.interior_certified.push_back(interior ? 1 : 0);
      part.names.push_back(region_name(static_cast<RegionLabel>(i)));
      part.cells.push_back(std::move(groups[static_cast<size_t>(i)]));
    }
    return part;
  }

  // Deterministic SVG drawing of the ball's alcoves filled per cell of
  // the given partition, with thick strokes on boundaries between
  // distinct cells. Byte-identical for identical inputs.
  std::string emit_svg(const CellPartition& part,
                       const SvgStyle& style = {}) const {
    if (part.cell_of.size() != static_cast<size_t>(ball_.size()))
      throw KlError(ErrorCode::PreconditionViolated,
                    "partition does not cover the ball");
    if (part.cells.size() > 1440)
      throw KlError(ErrorCode::PreconditionViolated,
                    "too many cells to color distinctly");

    long min_x = std::numeric_limits<long>::max(), max_x = std::numeric_limits<long>::min();
    long min_y = min_x, max_y = max_x;
    std::vector<std::array<std::array<long, 2>, 3>> px(
        static_cast<size_t>(ball_.size()));
    for (int w = 0; w < ball_.size(); ++w) {
      for (int i = 0; i < 3; ++i) {
        auto p = project(tris_[static_cast<size_t>(w)][static_cast<size_t>(i)],
                         style.scale);
        px[static_cast<size_t>(w)][static_cast<size_t>(i)] = p;
        min_x = std::min(min_x, p[0]);
        max_x = std::max(max_x, p[0]);
        min_y = std::min(min_y, p[1]);
        max_y = std::max(max_y, p[1]);
      }
    }
    long pad = style.margin * 1000;
    long vb_x = min_x - pad, vb_y = min_y - pad;
    long vb_w = max_x - min_x + 2 * pad, vb_h = max_y - min_y + 2 * pad;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" +
           milli(vb_x) + " " + milli(vb_y) + " " + milli(vb_w) + " " +
           milli(vb_h) + "\" width=\"" + std::to_string((vb_w + 999) / 1000) +
           "\" height=\"" + std::to_string((vb_h + 999) / 1000) + "\">\n";
    out += "<g stroke=\"#444\" stroke-width=\"" + std::to_string(style.thin) +
           "\" stroke-linejoin=\"round\">\n";
    for (int w = 0; w < ball_.size(); ++w) {
      int c = part.cell_of[static_cast<size_t>(w)];
      std::string label = c < static_cast<int>(part.names.size())
                              ? part.names[static_cast<size_t>(c)]
                              : "cell" + std::to_string(c);
      out += "<polygon";
      if (w == 0) out += " id=\"alcove-e\"";
      out += " points=\"";
      for (int i = 0; i < 3; ++i) {
        if (i) out += " ";
        out += milli(px[static_cast<size_t>(w)][static_cast<size_t>(i)][0]) +
               "," +
               milli(px[static_cast<size_t>(w)][static_cast<size_t>(i)][1]);
      }
      out += "\" fill=\"" + cell_color(c) + "\" data-label=\"" + label +
             "\"/>\n";
    }
    out += "</g>\n";
    out += "<g stroke=\"#000\" stroke-width=\"" + std::to_string(style.thick) +
           "\" stroke-linecap=\"round\">\n";
    for (int w = 0; w < ball_.size(); ++w)
      for (int s = 0; s < ball_.rank(); ++s) {
        int nb = ball_.left(w, s);
        if (nb == BallTable::out_of_ball || nb <= w) continue;
        if (part.cell_of[static_cast<size_t>(w)] ==
            part.cell_of[static_cast<size_t>(nb)])
          continue;
        auto edge = shared_edge(w, nb);
        auto p1 = project(edge[0], style.scale);
        auto p2 = project(edge[1], style.scale);
        out += "<line x1=\"" + milli(p1[0]) + "\" y1=\"" + milli(p1[1]) +
               "\" x2=\"" + milli(p2[0]) + "\" y2=\"" + milli(p2[1]) +
               "\"/>\n";
      }
    out += "</g>\n</svg>\n";
    return out;
  }

  // Fill color of cell index i: distinct for every index drawn together.
  static std::string cell_color(int i) {
    int h = (i * 137) % 360;
    int l = 58 - 8 * (i / 360);
    return "hsl(" + std::to_string(h) + ",65%," + std::to_string(l) + "%)";
  }

 private:
  static long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
  }

  static long round_div(long num, long den) {
    return num >= 0 ? (num + den / 2) / den : -((-num + den / 2) / den);
  }

  // Wall form value in six-fold coordinates: <x, alpha_r%> * 6.
  static long form(int r, const Vertex& y) {
    const auto& c = RootSystemG2::standard().coroots[static_cast<size_t>(r)];
    return c[0] * y[0] + c[1] * y[1];
  }

  // Affine reflection of a point in the wall {<x, alpha_r%> = n}.
  static Vertex reflect(const Vertex& y, int r, long n) {
    long d = form(r, y) - 6 * n;
    const auto& a =
        RootSystemG2::standard().positive_roots[static_cast<size_t>(r)];
    return {y[0] - d * a[0], y[1] - d * a[1]};
  }

  // Generator walls: s1 and s2 reflect in their root walls through the
  // origin, s3 in the level-1 wall of the highest-coroot root.
  static Triangle apply_generator(const Triangle& t, int s) {
    static constexpr std::array<std::pair<int, long>, 3> walls = {
        {{0, 0}, {1, 0}, {3, 1}}};
    auto [r, n] = walls[static_cast<size_t>(s)];
    return {reflect(t[0], r, n), reflect(t[1], r, n), reflect(t[2], r, n)};
  }

  // The triangle of w is obtained from A0 by applying the canonical
  // word's reflections first letter first; the parent under the last
  // letter has smaller index, so one pass in index order fills the table.
  void build_alcoves() {
    size_t n = static_cast<size_t>(ball_.size());
    tris_.resize(n);
    coords_.resize(n);
    tris_[0] = Triangle{Vertex{0, 0}, Vertex{2, 0}, Vertex{0, 3}};
    for (int w = 1; w < ball_.size(); ++w) {
      int last = ball_.word(w).back();
      int parent = ball_.right(w, last);
      tris_[static_cast<size_t>(w)] =
          apply_generator(tris_[static_cast<size_t>(parent)], last);
    }
    for (int w = 0; w < ball_.size(); ++w) {
      const Triangle& t = tris_[static_cast<size_t>(w)];
      Vertex sum{t[0][0] + t[1][0] + t[2][0], t[0][1] + t[1][1] + t[2][1]};
      for (int r = 0; r < 6; ++r) {
        long p = form(r, sum);
        if (p % 18 == 0)
          throw KlError(ErrorCode::AuditFailed,
                        "degenerate barycenter at " + ball_.word_str(w));
        coords_[static_cast<size_t>(w)].floors[static_cast<size_t>(r)] =
            static_cast<int>(floor_div(p, 18));
      }
    }
  }

  // The region table is external data; these pinned words fail fast if a
  // mistranscribed table ships.
  void check_anchors() const {
    static const std::pair<const char*, RegionLabel> anchors[] = {
        {"e", RegionLabel::IDENT},
        {"s2.s3.s2", RegionLabel::F},
        {"s1.s2.s1.s2.s1", RegionLabel::C1},
        {"s1.s2.s1.s2.s1.s2", RegionLabel::A1},
        {"s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1", RegionLabel::Ap1},
        {"s1.s2.s1.s2.s1.s3.s2.s1", RegionLabel::C2},
        {"s2.s1.s2.s1.s2.s1.s3.s2.s1", RegionLabel::A2},
        {"s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1.s3.s2.s1", RegionLabel::Ap2},
        {"s2.s1.s2.s1.s2.s1.s3", RegionLabel::A3},
    };
    for (const auto& [word, label] : anchors) {
      size_t len = std::string(word) == "e"
                       ? 0
                       : (std::string(word).size() + 1) / 3;
      if (len > static_cast<size_t>(ball_.radius())) continue;
      int w = ball_.parse_word(word);
      if (classify(w) != label)
        throw KlError(ErrorCode::ConfigError,
                      std::string("region table anchor ") + word +
                          " classifies as " + region_name(classify(w)) +
                          ", expected " + region_name(label));
    }
  }

  // Euclidean projection at millipixel resolution with the y axis
  // flipped for screen coordinates; sqrt(3) enters only through the
  // fixed rational 1732051/1000000.
  static std::array<long, 2> project(const Vertex& y, long scale) {
    long px = round_div(scale * 1732051 * y[1], 12000);
    long py = -(scale * (2 * y[0] + y[1]) * 250);
    return {px, py};
  }

  static std::string milli(long m) {
    long whole = m / 1000, frac = m % 1000;
    std::string out;
    if (m < 0) {
      out += "-";
      whole = -whole;
      frac = -frac;
    }
    out += std::to_string(whole);
    if (frac != 0) {
      std::string f = std::to_string(frac);
      while (f.size() < 3) f = "0" + f;
      while (f.back() == '0') f.pop_back();
      out += "." + f;
    }
    return out;
  }

  std::array<Vertex, 2> shared_edge(int w, int nb) const {
    const Triangle& a = tris_[static_cast<size_t>(w)];
    const Triangle& b = tris_[static_cast<size_t>(nb)];
    std::array<Vertex, 2> out{};
    int found = 0;
    for (const Vertex& va : a)
      for (const Vertex& vb : b)
        if (va == vb) {
          if (found < 2) out[static_cast<size_t>(found)] = va;
          ++found;
        }
    if (found != 2)
      throw KlError(ErrorCode::AuditFailed,
                    "adjacent alcoves must share exactly one edge");
    return out;
  }

  const BallTable& ball_;
  const RegionTable& table_;
  std::vector<Triangle> tris_;
  std::vector<AlcoveCoords> coords_;
};

}  // namespace klcells
