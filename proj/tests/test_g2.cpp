#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "klcells/g2.hpp"

using namespace klcells;

namespace {

LaurentPoly v(int n) { return LaurentPoly::v_power(n); }

HeckeElt c_unit(int w) { return HeckeElt::unit(Basis::C, w); }

AlcoveCoords coords(std::array<int, 6> k) { return AlcoveCoords{k}; }

struct MinRow {
  RegionLabel label;
  int length;
};

const std::vector<MinRow>& region_min_lengths() {
  static const std::vector<MinRow> rows = {
      {RegionLabel::IDENT, 0}, {RegionLabel::E1, 1},  {RegionLabel::E2, 1},
      {RegionLabel::F, 3},     {RegionLabel::D1, 1},  {RegionLabel::D2, 2},
      {RegionLabel::D3, 3},    {RegionLabel::A1, 6},  {RegionLabel::A2, 9},
      {RegionLabel::A3, 7},    {RegionLabel::A4, 11}, {RegionLabel::A5, 8},
      {RegionLabel::A6, 10},   {RegionLabel::Ap1, 11}, {RegionLabel::Ap2, 14},
      {RegionLabel::Ap3, 12},  {RegionLabel::Ap4, 16}, {RegionLabel::Ap5, 13},
      {RegionLabel::Ap6, 15},  {RegionLabel::B1, 4},  {RegionLabel::B2, 2},
      {RegionLabel::B3, 6},    {RegionLabel::B4, 4},  {RegionLabel::B5, 3},
      {RegionLabel::B6, 5},    {RegionLabel::C1, 5},  {RegionLabel::C2, 8},
      {RegionLabel::C3, 6},    {RegionLabel::C4, 10}, {RegionLabel::C5, 7},
      {RegionLabel::C6, 9},
  };
  return rows;
}

}  // namespace

TEST_CASE("region labels round trip") {
  for (int i = 0; i < region_label_count; ++i) {
    RegionLabel l = static_cast<RegionLabel>(i);
    CHECK(parse_region(region_name(l)) == l);
  }
  CHECK(std::string(region_name(RegionLabel::Ap4)) == "A'4");
  CHECK_THROWS_AS(parse_region("Z9"), KlError);

  CHECK(region_family(RegionLabel::A3) == RegionFamily::A);
  CHECK(region_family(RegionLabel::Ap3) == RegionFamily::A);
  CHECK(region_family(RegionLabel::B6) == RegionFamily::B);
  CHECK(region_family(RegionLabel::C1) == RegionFamily::C);
  CHECK(region_family(RegionLabel::D2) == RegionFamily::D);
  CHECK(region_family(RegionLabel::E1) == RegionFamily::E);
  CHECK(region_family(RegionLabel::F) == RegionFamily::F);
  CHECK(region_family(RegionLabel::IDENT) == RegionFamily::IDENT);
}

TEST_CASE("root datum pairings and reflections") {
  const RootSystemG2& rs = RootSystemG2::standard();
  for (int i = 0; i < 6; ++i) CHECK(rs.pairing(i, i) == 2);

  CHECK(rs.pairing(0, 1) == -3);
  CHECK(rs.pairing(1, 0) == -1);

  CHECK(rs.reflect_root(0, 1) == rs.positive_roots[2]);
  CHECK(rs.reflect_root(1, 0) == rs.positive_roots[4]);
  CHECK(rs.reflect_root(1, 2) == rs.positive_roots[3]);

  std::set<std::array<long, 2>> roots;
  for (const auto& r : rs.positive_roots) {
    roots.insert(r);
    roots.insert({-r[0], -r[1]});
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 6; ++j) {
      auto img = rs.reflect_root(i, j);
      CHECK(roots.count(img) == 1);
      if (i == j)
        CHECK(img == std::array<long, 2>{-rs.positive_roots[static_cast<size_t>(
                                             i)][0],
                                         -rs.positive_roots[static_cast<size_t>(
                                             i)][1]});
    }
}

TEST_CASE("geometry rejects other systems") {
  BallTable other(build_system({{1, 4, 2}, {4, 1, 4}, {2, 4, 1}}, {1, 1, 1}),
                  2);
  CHECK_THROWS_AS(G2Geometry(other), KlError);
  try {
    G2Geometry g(other);
  } catch (const KlError& e) {
    CHECK(e.code() == ErrorCode::UnsupportedRank);
  }
}

TEST_CASE("fundamental alcove and one-step folds") {
  BallTable ball(g2_affine_system(5, 1), 6);
  G2Geometry geo(ball);

  G2Geometry::Triangle a0 = {G2Geometry::Vertex{0, 0}, {2, 0}, {0, 3}};
  CHECK(geo.triangle_of(0) == a0);
  CHECK(geo.alcove_of(0) == coords({0, 0, 0, 0, 0, 0}));

  CHECK(geo.alcove_of(ball.parse_word("s1")) == coords({-1, 0, 0, 0, 0, 0}));
  CHECK(geo.alcove_of(ball.parse_word("s2")) == coords({0, -1, 0, 0, 0, 0}));
  CHECK(geo.alcove_of(ball.parse_word("s3")) == coords({0, 0, 0, 1, 0, 0}));

  CHECK(geo.alcove_of(ball.parse_word("s1.s2")) ==
        coords({0, -1, 0, 0, -1, 0}));
  CHECK(geo.alcove_of(ball.parse_word("s2.s1")) ==
        coords({-1, 0, -1, 0, 0, 0}));
  CHECK(geo.alcove_of(ball.parse_word("s2.s3")) == coords({0, 0, 1, 1, 0, 0}));
  CHECK(geo.alcove_of(ball.parse_word("s2.s3.s2")) ==
        coords({0, -1, 1, 1, 0, 0}));
  CHECK(geo.alcove_of(ball.parse_word("s1.s2.s3")) ==
        coords({0, 0, 1, 1, 0, 1}));
}

TEST_CASE("length equals the hyperplane separation count") {
  BallTable ball(g2_affine_system(5, 1), 10);
  G2Geometry geo(ball);
  for (int w = 0; w < ball.size(); ++w)
    CHECK(geo.separation_count(w) == ball.length(w));
}

TEST_CASE("left multiplication moves to an adjacent alcove") {
  BallTable ball(g2_affine_system(5, 1), 8);
  G2Geometry geo(ball);
  for (int w = 0; w < ball.size(); ++w)
    for (int s = 0; s < ball.rank(); ++s) {
      int sw = ball.left(w, s);
      if (sw == BallTable::out_of_ball) continue;
      int shared = 0;
      for (const auto& va : geo.triangle_of(w))
        for (const auto& vb : geo.triangle_of(sw))
          if (va == vb) ++shared;
      CHECK(shared == 2);
      long moved = 0;
      for (int r = 0; r < 6; ++r)
        moved += std::abs(geo.alcove_of(w).floors[static_cast<size_t>(r)] -
                          geo.alcove_of(sw).floors[static_cast<size_t>(r)]);
      CHECK(moved == 1);
    }
}

TEST_CASE("classification is total and unambiguous") {
  BallTable ball(g2_affine_system(5, 1), 14);
  G2Geometry geo(ball);
  const RegionTable& table = geo.table();
  int finite_hits = 0;
  for (int w = 0; w < ball.size(); ++w) {
    RegionLabel lab = geo.classify(w);
    std::vector<RegionLabel> am = table.all_matches(geo.alcove_of(w));
    REQUIRE_FALSE(am.empty());
    CHECK(am.front() == lab);
    if (table.is_finite_region(lab)) {
      ++finite_hits;
    } else {
      CHECK(am.size() == 1);
    }
  }
  CHECK(finite_hits == 24);
}

TEST_CASE("finite regions are exactly their listed members") {
  BallTable ball(g2_affine_system(5, 1), 8);
  G2Geometry geo(ball);
  const RegionTable& table = geo.table();
  for (RegionLabel lab : {RegionLabel::IDENT, RegionLabel::E1, RegionLabel::E2,
                          RegionLabel::F, RegionLabel::D1, RegionLabel::D2,
                          RegionLabel::D3}) {
    CHECK(table.is_finite_region(lab));
    std::set<AlcoveCoords> listed(table.finite_members(lab).begin(),
                                  table.finite_members(lab).end());
    std::set<AlcoveCoords> found;
    for (int w : geo.region_members(lab)) found.insert(geo.alcove_of(w));
    CHECK(found == listed);
  }
  CHECK(table.finite_members(RegionLabel::IDENT).size() == 1);
  CHECK(table.finite_members(RegionLabel::E1).size() == 2);
  CHECK(table.finite_members(RegionLabel::E2).size() == 2);
  CHECK(table.finite_members(RegionLabel::F).size() == 1);
  CHECK(table.finite_members(RegionLabel::D1).size() == 6);
  CHECK(table.finite_members(RegionLabel::D2).size() == 6);
  CHECK(table.finite_members(RegionLabel::D3).size() == 6);
  CHECK_FALSE(table.is_finite_region(RegionLabel::B1));
}

TEST_CASE("named elements land in their regions") {
  BallTable ball(g2_affine_system(5, 1), 16);
  G2Geometry geo(ball);

  CHECK(geo.classify(0) == RegionLabel::IDENT);
  CHECK(geo.classify(ball.parse_word("s3")) == RegionLabel::E1);
  CHECK(geo.classify(ball.parse_word("s2.s3")) == RegionLabel::E1);
  CHECK(geo.classify(ball.parse_word("s2")) == RegionLabel::E2);
  CHECK(geo.classify(ball.parse_word("s3.s2")) == RegionLabel::E2);
  CHECK(geo.classify(ball.parse_word("s2.s3.s2")) == RegionLabel::F);
  CHECK(geo.classify(ball.parse_word("s1")) == RegionLabel::D1);
  CHECK(geo.classify(ball.parse_word("s1.s2")) == RegionLabel::D2);
  CHECK(geo.classify(ball.parse_word("s1.s2.s3")) == RegionLabel::D3);

  CHECK(geo.region_min(RegionLabel::C1) == ball.parse_word("s1.s2.s1.s2.s1"));
  CHECK(geo.region_min(RegionLabel::A1) ==
        ball.parse_word("s1.s2.s1.s2.s1.s2"));
  CHECK(geo.region_min(RegionLabel::Ap1) ==
        ball.parse_word("s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1"));
  CHECK(geo.region_min(RegionLabel::Ap1) ==
        ball.parse_word("s1.s2.s1.s2.s1.s2.s3.s2.s1.s2.s1"));
  CHECK(geo.region_min(RegionLabel::C2) ==
        ball.parse_word("s1.s2.s1.s2.s1.s3.s2.s1"));
  CHECK(geo.region_min(RegionLabel::A2) ==
        ball.parse_word("s2.s1.s2.s1.s2.s1.s3.s2.s1"));
  CHECK(geo.region_min(RegionLabel::Ap2) ==
        ball.parse_word("s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1.s3.s2.s1"));
  CHECK(geo.region_min(RegionLabel::A3) ==
        ball.parse_word("s2.s1.s2.s1.s2.s1.s3"));
  CHECK(geo.region_min(RegionLabel::B1) == ball.parse_word("s1.s3.s2.s1"));
  CHECK(geo.region_min(RegionLabel::B2) == ball.parse_word("s1.s3"));
  CHECK(geo.region_min(RegionLabel::B5) == ball.parse_word("s1.s3.s2"));
}

TEST_CASE("region minima are unique at the stated lengths") {
  BallTable ball(g2_affine_system(5, 1), 16);
  G2Geometry geo(ball);
  for (const MinRow& row : region_min_lengths()) {
    std::vector<int> members = geo.region_members(row.label);
    REQUIRE_FALSE(members.empty());
    CHECK(ball.length(members.front()) == row.length);
    int at_min = 0;
    for (int w : members)
      if (ball.length(w) == row.length) ++at_min;
    CHECK(at_min == 1);
  }
}

TEST_CASE("single-generator descent regions") {
  BallTable ball(g2_affine_system(5, 1), 10);
  G2Geometry geo(ball);
  for (int w = 0; w < ball.size(); ++w) {
    RegionLabel lab = geo.classify(w);
    if (region_family(lab) != RegionFamily::D) continue;
    uint32_t rd = ball.right_descents(w);
    if (lab == RegionLabel::D1) CHECK(rd == 0b001);
    if (lab == RegionLabel::D2) CHECK(rd == 0b010);
    if (lab == RegionLabel::D3) CHECK(rd == 0b100);
  }
}

TEST_CASE("two-generator descent sets match region unions") {
  BallTable ball(g2_affine_system(5, 1), 12);
  G2Geometry geo(ball);
  std::set<RegionLabel> r13 = {RegionLabel::B2, RegionLabel::A3,
                               RegionLabel::Ap3, RegionLabel::A2,
                               RegionLabel::C3};
  std::set<RegionLabel> r23 = {RegionLabel::F, RegionLabel::B4,
                               RegionLabel::A4, RegionLabel::A5};
  for (int w = 0; w < ball.size(); ++w) {
    RegionLabel lab = geo.classify(w);
    CHECK(in_RJ(ball, w, 0b101) == (r13.count(lab) == 1));
    CHECK(in_RJ(ball, w, 0b110) == (r23.count(lab) == 1));
  }
}

TEST_CASE("region families are stable under inversion") {
  BallTable ball(g2_affine_system(5, 1), 12);
  G2Geometry geo(ball);
  for (int w = 0; w < ball.size(); ++w)
    CHECK(region_family(geo.classify(w)) ==
          region_family(geo.classify(ball.invert(w))));
}

TEST_CASE("all regions appear inside radius 16") {
  BallTable ball(g2_affine_system(5, 1), 16);
  G2Geometry geo(ball);
  std::set<RegionLabel> seen;
  for (int w = 0; w < ball.size(); ++w) seen.insert(geo.classify(w));
  CHECK(seen.size() == static_cast<size_t>(region_label_count));
}

TEST_CASE("embedded region data matches the data file") {
  std::ifstream in(std::string(KLCELLS_SOURCE_DIR) + "/data/g2_regions.json",
                   std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == std::string(g2_regions_json));
}

TEST_CASE("region table rejects malformed data") {
  CHECK_THROWS_AS(RegionTable::from_json("not json"), KlError);
  CHECK_THROWS_AS(RegionTable::from_json("{\"labels\": []}"), KlError);

  nlohmann::json doc = nlohmann::json::parse(std::string(g2_regions_json));
  doc["labels"][0] = "E1";
  CHECK_THROWS_AS(RegionTable::from_json(doc.dump()), KlError);

  doc = nlohmann::json::parse(std::string(g2_regions_json));
  doc["finite"]["E1"].push_back(doc["finite"]["F"][0]);
  CHECK_THROWS_AS(RegionTable::from_json(doc.dump()), KlError);
}

TEST_CASE("predicted partition packaging") {
  BallTable ball(g2_affine_system(5, 1), 6);
  G2Geometry geo(ball);
  CellPartition part = geo.predicted_partition();

  REQUIRE_FALSE(part.cells.empty());
  CHECK(part.kind == CellKind::left);
  CHECK(part.radius == 6);
  CHECK(part.names.size() == part.cells.size());
  CHECK(part.interior_certified.size() == part.cells.size());
  CHECK(part.cells[0] == std::vector<int>{0});
  CHECK(part.names[0] == "IDENT");

  for (int w = 0; w < ball.size(); ++w) {
    int c = part.cell_of[static_cast<size_t>(w)];
    REQUIRE(c >= 0);
    CHECK(part.names[static_cast<size_t>(c)] ==
          region_name(geo.classify(w)));
  }
  for (size_t c = 1; c < part.cells.size(); ++c)
    CHECK(part.cells[c - 1].front() < part.cells[c].front());
  for (size_t c = 0; c < part.cells.size(); ++c) {
    bool all_interior = true;
    for (int w : part.cells[c])
      if (!is_interior(ball, w)) all_interior = false;
    CHECK((part.interior_certified[c] == 1) == all_interior);
  }
}

TEST_CASE("heavy-generator product identities from classifier minima") {
  BallTable ball(g2_affine_system(5, 1), 9);
  G2Geometry geo(ball);
  KLCache kl(ball);

  int u1 = geo.region_min(RegionLabel::C1);
  int v1 = geo.region_min(RegionLabel::A1);
  int u5 = geo.region_min(RegionLabel::C5);
  int v5 = geo.region_min(RegionLabel::A5);
  REQUIRE(ball.left(u1, 1) == v1);
  REQUIRE(ball.left(u5, 1) == v5);

  CHECK(kl.mul_c(MulKind::Ts_Cw, 1, u1) == c_unit(v1) - c_unit(u1) * v(-1));
  CHECK(kl.mul_c(MulKind::Ts_Cw, 1, u5) ==
        c_unit(v5) - c_unit(u5) * v(-1) + c_unit(v1));

  bool found = false;
  for (const CellEdge& e : left_edges(kl, u5).edges)
    if (e.to == v1 && e.gen == 1) found = true;
  CHECK(found);
}

TEST_CASE("ideal propagation matches the predicted regions") {
  BallTable ball(g2_affine_system(5, 1), 12);
  G2Geometry geo(ball);
  KLCache kl(ball);

  std::vector<int> a1 = geo.region_members(RegionLabel::A1);
  REQUIRE(is_left_ideal(kl, a1).verdict == Verdict::certified_yes);

  std::vector<int> b;
  for (int w = 0; w < ball.size(); ++w)
    if (in_RJ(ball, w, 0b101)) b.push_back(w);
  std::vector<int> out = propagate_ideal_right(kl, b, 1, a1);

  std::set<RegionLabel> targets = {RegionLabel::A1, RegionLabel::A5,
                                   RegionLabel::Ap5, RegionLabel::A6,
                                   RegionLabel::C5, RegionLabel::B5};
  for (int w : out) CHECK(targets.count(geo.classify(w)) == 1);

  std::set<int> got(out.begin(), out.end());
  CHECK(got.count(geo.region_min(RegionLabel::B5)) == 1);
  CHECK(got.count(geo.region_min(RegionLabel::C5)) == 1);
  CHECK(got.count(geo.region_min(RegionLabel::A5)) == 1);
}

TEST_CASE("svg rendering is deterministic and complete") {
  BallTable ball(g2_affine_system(5, 1), 4);
  G2Geometry geo(ball);
  CellPartition part = geo.predicted_partition();

  std::string svg = geo.emit_svg(part);
  CHECK(svg == geo.emit_svg(part));
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("id=\"alcove-e\"") != std::string::npos);
  CHECK(svg.find("data-label=\"IDENT\"") != std::string::npos);
  CHECK(svg.find("<line ") != std::string::npos);

  size_t polys = 0;
  for (size_t p = svg.find("<polygon"); p != std::string::npos;
       p = svg.find("<polygon", p + 1))
    ++polys;
  CHECK(polys == static_cast<size_t>(ball.size()));

  std::set<std::string> fills;
  for (size_t c = 0; c < part.cells.size(); ++c) {
    std::string color = G2Geometry::cell_color(static_cast<int>(c));
    CHECK(svg.find("fill=\"" + color + "\"") != std::string::npos);
    fills.insert(color);
  }
  CHECK(fills.size() == part.cells.size());

  CellPartition bad;
  bad.cell_of = {0};
  CHECK_THROWS_AS(geo.emit_svg(bad), KlError);
}
