#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <klcells/induction.hpp>

using namespace klcells;

namespace {

LaurentPoly v(int n) { return LaurentPoly::v_power(n); }

LaurentPoly one() { return LaurentPoly::from_int(1); }

std::vector<int> whole_ball(const BallTable& ball) {
  std::vector<int> out(static_cast<size_t>(ball.size()));
  for (int w = 0; w < ball.size(); ++w) out[static_cast<size_t>(w)] = w;
  return out;
}

std::vector<int> all_positions(const InductionDatum& d) {
  std::vector<int> out(static_cast<size_t>(d.u_count()));
  for (int i = 0; i < d.u_count(); ++i) out[static_cast<size_t>(i)] = i;
  return out;
}

}  // namespace

TEST_CASE("datum anchored at the unit element reproduces classical tables") {
  BallTable ball(g2_affine_system(5, 1), 7);
  KLCache kl(ball);
  InductionDatum datum(kl, "unit_anchor", {0}, {whole_ball(ball)});

  const ConditionsReport& rep = check_conditions(datum);
  CHECK(rep.unit_present.verdict == Verdict::certified_yes);
  CHECK(rep.length_additive.verdict == Verdict::certified_yes);
  CHECK(rep.products_disjoint.verdict == Verdict::certified_yes);
  CHECK(rep.span_closed.verdict == Verdict::certified_yes);
  CHECK(rep.degrees_negative.verdict == Verdict::certified_yes);
  CHECK(rep.degrees_negative.checked == 0);
  CHECK(rep.all_pass());

  for (int y = 0; y < ball.size(); ++y) {
    const auto& row = gen_r(datum, y, 0);
    CHECK(row.at({y, 0}) == one());
    for (int x = 0; x < ball.size(); ++x) {
      LaurentPoly expect = kl.r_poly(x, y);
      auto it = row.find({x, 0});
      LaurentPoly got = it == row.end() ? LaurentPoly() : it->second;
      if (got != expect) {
        CAPTURE(ball.word_str(x), ball.word_str(y));
        REQUIRE(got == expect);
      }
    }
  }

  for (int y = 0; y < ball.size(); ++y) {
    const auto& [family, combo] = gen_p_star(datum, y, 0);
    CHECK(combo == kl.c_elt(y));
    for (const auto& [lab, c] : family) {
      CHECK(c == kl.kl_p(lab.first, y));
      CHECK(c.max_exp() < 0);
    }
    for (int x = 0; x < ball.size(); ++x) {
      if (x == y) continue;
      LaurentPoly expect = kl.kl_p(x, y);
      if (!expect.is_zero()) CHECK(family.at({x, 0}) == expect);
    }
  }

  SUCCEED("classical coefficient tables recovered");
}

TEST_CASE("datum listing every element recovers the left cells") {
  BallTable ball(g2_affine_system(5, 1), 7);
  KLCache kl(ball);
  std::vector<int> us = whole_ball(ball);
  std::vector<std::vector<int>> xs(us.size(), std::vector<int>{0});
  InductionDatum datum(kl, "element_list", us, xs);

  CHECK(check_conditions(datum).all_pass());

  const PreorderResult& pre = preorder_u(datum);
  int s2 = ball.parse_word("s2");
  int s32 = ball.parse_word("s3.s2");
  int s3 = ball.parse_word("s3");
  int s23 = ball.parse_word("s2.s3");
  int w0 = ball.parse_word("s2.s3.s2");

  auto class_members = [&](int element) {
    std::vector<int> out;
    for (int i : pre.classes[static_cast<size_t>(
             pre.class_of[static_cast<size_t>(datum.u_position(element))])])
      out.push_back(datum.u_members()[static_cast<size_t>(i)]);
    std::sort(out.begin(), out.end());
    return out;
  };

  CHECK(class_members(0) == std::vector<int>{0});
  CHECK(class_members(s2) == std::vector<int>{s2, s32});
  CHECK(class_members(s3) == std::vector<int>{s3, s23});
  CHECK(class_members(w0) == std::vector<int>{w0});

  CHECK(pre.leq[static_cast<size_t>(datum.u_position(s2))]
               [static_cast<size_t>(datum.u_position(0))]);
  CHECK(pre.leq[static_cast<size_t>(datum.u_position(w0))]
               [static_cast<size_t>(datum.u_position(s2))]);
  CHECK_FALSE(pre.leq[static_cast<size_t>(datum.u_position(0))]
                     [static_cast<size_t>(datum.u_position(s2))]);

  CellPartition part = cells_of(kl, CellKind::left);
  for (const auto& cls : pre.classes) {
    std::set<int> cells;
    for (int i : cls)
      cells.insert(part.cell_of[static_cast<size_t>(
          datum.u_members()[static_cast<size_t>(i)])]);
    CHECK(cells.size() == 1);
  }
}

TEST_CASE("parabolic datum satisfies every closure condition") {
  BallTable ball(g2_affine_system(5, 1), 10);
  KLCache kl(ball);
  InductionDatum datum = parabolic_datum(kl, 0b110);
  CosetData cd = coset_data(ball, 0b110);

  CHECK(datum.u_members() == cd.parabolic);
  CHECK(datum.x_scope(datum.u_position(0)) == cd.reps);
  CHECK(datum.name() == "parabolic");

  const ConditionsReport& rep = check_conditions(datum);
  CHECK(rep.unit_present.verdict == Verdict::certified_yes);
  CHECK(rep.length_additive.verdict == Verdict::certified_yes);
  CHECK(rep.products_disjoint.verdict == Verdict::certified_yes);
  CHECK(rep.span_closed.verdict == Verdict::certified_yes);
  CHECK(rep.degrees_negative.verdict == Verdict::certified_yes);
  CHECK(rep.span_closed.checked > 0);
  CHECK(rep.degrees_negative.checked > 0);
}

TEST_CASE("parabolic preorder equals the internal left order of the subgroup") {
  BallTable ball(g2_affine_system(5, 1), 10);
  KLCache kl(ball);
  InductionDatum datum = parabolic_datum(kl, 0b110);
  const PreorderResult& pre = preorder_u(datum);

  CoxeterSystem sub =
      build_system({{1, 3}, {3, 1}}, {1, 1}, {"s2", "s3"});
  BallTable sub_ball(sub, 4);
  REQUIRE(sub_ball.size() == 6);
  KLCache sub_kl(sub_ball);
  CellPartition part = cells_of(sub_kl, CellKind::left);
  CellOrder ord = cell_order(sub_kl, part);

  REQUIRE(part.cells.size() == 4);
  for (const auto& cell : part.cells)
    CHECK(part.interior_certified[static_cast<size_t>(
        part.cell_of[static_cast<size_t>(cell.front())])]);

  size_t n = static_cast<size_t>(datum.u_count());
  std::vector<int> sub_of(n);
  for (size_t i = 0; i < n; ++i)
    sub_of[i] = sub_ball.parse_word(
        ball.word_str(datum.u_members()[i]));

  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      bool expect =
          ord.leq[static_cast<size_t>(part.cell_of[static_cast<size_t>(
              sub_of[i])])][static_cast<size_t>(
              part.cell_of[static_cast<size_t>(sub_of[j])])] != 0;
      if ((pre.leq[i][j] != 0) != expect) {
        CAPTURE(ball.word_str(datum.u_members()[i]),
                ball.word_str(datum.u_members()[j]));
        REQUIRE((pre.leq[i][j] != 0) == expect);
      }
    }

  std::set<std::set<int>> got;
  for (const auto& cls : pre.classes) {
    std::set<int> members;
    for (int i : cls) members.insert(sub_of[static_cast<size_t>(i)]);
    got.insert(members);
  }
  std::set<std::set<int>> expect;
  for (const auto& cell : part.cells)
    expect.insert(std::set<int>(cell.begin(), cell.end()));
  CHECK(got == expect);
}

TEST_CASE("parabolic ideal from an order-closed singleton") {
  BallTable ball(g2_affine_system(5, 1), 10);
  KLCache kl(ball);
  InductionDatum datum = parabolic_datum(kl, 0b110);
  CosetData cd = coset_data(ball, 0b110);

  int pos = datum.u_position(cd.longest);
  REQUIRE(pos >= 0);
  InducedIdeal ideal = induced_ideal(datum, {pos});

  std::vector<int> expect;
  for (int w = 0; w < ball.size(); ++w)
    if (in_RJ(ball, w, 0b110)) expect.push_back(w);
  CHECK(ideal.members == expect);
  CHECK(ideal.report.verdict == Verdict::certified_yes);

  CHECK_THROWS_AS(induced_ideal(datum, {datum.u_position(0)}), KlError);
  try {
    induced_ideal(datum, {datum.u_position(0)});
  } catch (const KlError& e) {
    CHECK(e.code() == ErrorCode::NotDownwardClosed);
  }
}

TEST_CASE("span consistency over order-closed subsets") {
  BallTable ball(g2_affine_system(5, 1), 9);
  KLCache kl(ball);
  InductionDatum datum = parabolic_datum(kl, 0b110);
  CosetData cd = coset_data(ball, 0b110);

  SpanCheck whole = span_consistency(datum, all_positions(datum));
  CHECK(whole.ok);
  SpanCheck bottom = span_consistency(datum, {datum.u_position(cd.longest)});
  CHECK(bottom.ok);
  CHECK_THROWS_AS(span_consistency(datum, {datum.u_position(0)}), KlError);
}

TEST_CASE("reduction coefficients satisfy the convolution identity") {
  BallTable ball(g2_affine_system(5, 1), 8);
  KLCache kl(ball);
  InductionDatum datum = parabolic_datum(kl, 0b110);

  long tested = 0;
  for (const auto& [top_prod, top] : datum.basis_index()) {
    const auto& row_top = gen_r(datum, top.first, top.second);
    std::map<InductionDatum::Label, LaurentPoly> acc;
    for (const auto& [mid, r_mid_top] : row_top) {
      const auto& row_mid = gen_r(datum, mid.first, mid.second);
      for (const auto& [bot, r_bot_mid] : row_mid)
        acc[bot] += r_bot_mid.bar() * r_mid_top;
    }
    for (const auto& [bot, total] : acc) {
      bool diagonal = bot == top;
      if (diagonal)
        CHECK(total == one());
      else if (!total.is_zero()) {
        CAPTURE(ball.word_str(top_prod));
        REQUIRE(total.is_zero());
      }
      ++tested;
    }
  }
  CHECK(tested > 0);
}

TEST_CASE("heavy generator datum builds exactly beyond the bound") {
  BallTable ball(g2_affine_system(5, 1), 9);
  KLCache kl(ball);
  InductionDatum datum = heavy_generator_datum(kl, 0b110, 0);
  CosetData cd = coset_data(ball, 0b110);

  REQUIRE(datum.u_count() == 6);
  int s1 = ball.parse_word("s1");
  for (int i = 0; i < datum.u_count(); ++i) {
    CHECK(datum.u_members()[static_cast<size_t>(i)] ==
          ball.mul(s1, cd.parabolic[static_cast<size_t>(i)]));
    CHECK(datum.x_scope(i).front() == 0);
  }
  CHECK(check_conditions(datum).all_pass());

  BallTable small(g2_affine_system(3, 1), 6);
  KLCache small_kl(small);
  CHECK_THROWS_AS(heavy_generator_datum(small_kl, 0b110, 0), KlError);
  try {
    heavy_generator_datum(small_kl, 0b110, 0);
  } catch (const KlError& e) {
    CHECK(e.code() == ErrorCode::WeightTooSmall);
  }
  CHECK_THROWS_AS(heavy_generator_datum(kl, 0b110, 1), KlError);
}

TEST_CASE("heavy generator ideal is the complement of the subgroup") {
  BallTable ball(g2_affine_system(5, 1), 9);
  KLCache kl(ball);
  InductionDatum datum = heavy_generator_datum(kl, 0b110, 0);

  InducedIdeal ideal = induced_ideal(datum, all_positions(datum));
  CosetData cd = coset_data(ball, 0b110);
  std::set<int> parabolic(cd.parabolic.begin(), cd.parabolic.end());
  std::vector<int> expect;
  for (int w = 0; w < ball.size(); ++w)
    if (!parabolic.count(w)) expect.push_back(w);
  CHECK(ideal.members == expect);
  CHECK(ideal.report.verdict == Verdict::certified_yes);
  for (int w : ideal.members)
    CHECK(std::binary_search(ideal.members.begin(), ideal.members.end(),
                             ball.invert(w)));
}

TEST_CASE("products across the subgroup wall collapse to canonical terms") {
  BallTable ball(g2_affine_system(5, 1), 9);
  KLCache kl(ball);
  CosetData cd = coset_data(ball, 0b110);
  int s1 = ball.parse_word("s1");

  for (int w : cd.parabolic) {
    int tw = ball.mul(s1, w);
    HeckeElt cc = kl.mul_c(MulKind::Cs_Cw, 0, w);
    REQUIRE(cc.term_count() == 1);
    CHECK(cc.coeff(tw) == one());

    HeckeElt tc = kl.mul_c(MulKind::Ts_Cw, 0, w);
    REQUIRE(tc.term_count() == 2);
    CHECK(tc.coeff(tw) == one());
    CHECK(tc.coeff(w) == -v(-5));
  }
}

TEST_CASE("alternating products agree after basis reduction") {
  BallTable ball(g2_affine_system(5, 1), 9);
  KLCache kl(ball);
  InductionDatum datum = heavy_generator_datum(kl, 0b110, 0);
  CosetData cd = coset_data(ball, 0b110);
  check_conditions(datum);

  bool saw_difference = false;
  for (int m = 1; m <= 3; ++m) {
    std::string left_word, right_word;
    for (int k = 0; k < m; ++k) {
      left_word += (k ? ".s2.s1" : "s2.s1");
      right_word += (k ? ".s1.s2" : "s1.s2");
    }
    int g_left = ball.parse_word(left_word);
    int g_right = ball.parse_word(right_word);
    for (int w : cd.parabolic) {
      HeckeElt a = t_mul(ball, HeckeElt::unit(Basis::T, g_left), kl.c_elt(w));
      HeckeElt b = t_mul(ball, HeckeElt::unit(Basis::T, g_right), kl.c_elt(w));
      HeckeElt delta = a - b;
      if (!delta.is_zero()) saw_difference = true;
      auto [coeffs, rem] = datum.reduce(std::move(delta));
      if (!rem.is_zero()) {
        CAPTURE(m, ball.word_str(w));
        REQUIRE(rem.is_zero());
      }
    }
  }
  CHECK(saw_difference);
}

TEST_CASE("json datum mirrors the builders") {
  BallTable ball(g2_affine_system(5, 1), 8);
  KLCache kl(ball);

  std::string text = R"json({
    "name": "demo",
    "U": ["e", "s2", "s3", "s2.s3", "s3.s2", "s2.s3.s2"],
    "X": {
      "e": "coset_reps(s2,s3)",
      "s2": "coset_reps(s2,s3)",
      "s3": "coset_reps(s2,s3)",
      "s2.s3": "coset_reps(s2,s3)",
      "s3.s2": "coset_reps(s2,s3)",
      "s2.s3.s2": "coset_reps(s2,s3)"
    }
  })json";
  InductionDatum datum = datum_from_json(kl, text);
  InductionDatum direct = parabolic_datum(kl, 0b110);
  CHECK(datum.name() == "demo");
  CHECK(datum.u_members() == direct.u_members());
  for (int i = 0; i < datum.u_count(); ++i)
    CHECK(datum.x_scope(i) == direct.x_scope(i));

  G2Geometry geo(ball);
  std::string regioned = R"json({
    "U": ["s1.s2.s1.s2.s1"],
    "X": {"s1.s2.s1.s2.s1": "classifier_region(C1)"}
  })json";
  InductionDatum cset = datum_from_json(kl, regioned, &geo);
  int u1 = ball.parse_word("s1.s2.s1.s2.s1");
  CHECK(cset.u_members() == std::vector<int>{u1});
  CHECK(cset.x_scope(0) ==
        region_shift_set(geo, RegionLabel::C1, u1));
  CHECK(cset.x_scope(0).front() == 0);

  std::string shifted = R"json({
    "U": ["s1.s2.s1.s2.s1"],
    "X": {"s1.s2.s1.s2.s1":
          "classifier_region(C1, shifted_by=s1.s2.s1.s2.s1)"}
  })json";
  InductionDatum same = datum_from_json(kl, shifted, &geo);
  CHECK(same.x_scope(0) == cset.x_scope(0));

  std::string explicit_lists = R"json({
    "U": ["s2"],
    "X": {"s2": ["e", "s3"]}
  })json";
  InductionDatum lists = datum_from_json(kl, explicit_lists);
  CHECK(lists.x_scope(0) ==
        std::vector<int>({0, ball.parse_word("s3")}));
}

TEST_CASE("json datum rejects malformed input") {
  BallTable ball(g2_affine_system(5, 1), 6);
  KLCache kl(ball);

  auto config_error = [&](const std::string& text, const G2Geometry* geo) {
    try {
      datum_from_json(kl, text, geo);
      FAIL("expected a configuration error for: " + text);
    } catch (const KlError& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
    }
  };

  config_error("not json", nullptr);
  config_error(R"json({"U": ["e"]})json", nullptr);
  config_error(R"json({"U": ["e"], "X": {}})json", nullptr);
  config_error(R"json({"U": ["e"], "X": {"e": 3}})json", nullptr);
  config_error(R"json({"U": ["e"], "X": {"e": "coset_reps("}})json", nullptr);
  config_error(R"json({"U": ["e"], "X": {"e": "mystery(s1)"}})json", nullptr);
  config_error(R"json({"U": ["e"], "X": {"e": "classifier_region(Q9)"}})json",
               nullptr);
  config_error(R"json({"U": ["e"], "X": {"e": "classifier_region(C1)"}})json",
               nullptr);
  G2Geometry geo(ball);
  config_error(
      R"json({"U": ["e"], "X": {"e": "classifier_region(C1, shift=s1)"}})json", &geo);
}

TEST_CASE("condition reports carry concrete witnesses") {
  BallTable ball(g2_affine_system(5, 1), 6);
  KLCache kl(ball);
  int s2 = ball.parse_word("s2");
  int s3 = ball.parse_word("s3");

  SECTION("missing unit") {
    InductionDatum datum(kl, "bad_unit", {s2}, {{s3}});
    const ConditionsReport& rep = check_conditions(datum);
    CHECK(rep.unit_present.verdict == Verdict::certified_no);
    CHECK(rep.unit_present.witness.find("misses e") != std::string::npos);
    CHECK(rep.length_additive.verdict == Verdict::certified_yes);
    CHECK(rep.span_closed.verdict == Verdict::certified_no);
    CHECK(rep.degrees_negative.verdict == Verdict::certified_yes);
  }

  SECTION("length drop") {
    InductionDatum datum(kl, "bad_length", {s2}, {{0, s2}});
    const ConditionsReport& rep = check_conditions(datum);
    CHECK(rep.length_additive.verdict == Verdict::certified_no);
    CHECK(rep.length_additive.witness.find("length drops") !=
          std::string::npos);
    CHECK(rep.span_closed.verdict == Verdict::inconclusive);
    CHECK(rep.degrees_negative.verdict == Verdict::inconclusive);
    CHECK_THROWS_AS(induced_ideal(datum, {0}), KlError);
  }

  SECTION("colliding products") {
    InductionDatum datum(kl, "bad_products", {0, s2}, {{s2}, {0}});
    const ConditionsReport& rep = check_conditions(datum);
    CHECK(rep.products_disjoint.verdict == Verdict::certified_no);
    CHECK(rep.products_disjoint.witness.find("collide") != std::string::npos);
  }
}

TEST_CASE("degree condition failure is witnessed and gates the ideal") {
  BallTable ball(g2_affine_system(5, 1), 6);
  KLCache kl(ball);
  int s1 = ball.parse_word("s1");
  int s21 = ball.parse_word("s2.s1");

  InductionDatum datum(kl, "degree_fail", {s21}, {{0, s1}});
  const ConditionsReport& rep = check_conditions(datum);
  CHECK(rep.unit_present.verdict == Verdict::certified_yes);
  CHECK(rep.length_additive.verdict == Verdict::certified_yes);
  CHECK(rep.degrees_negative.verdict == Verdict::certified_no);
  REQUIRE(rep.degree_failures.size() == 1);
  CHECK(rep.degree_failures[0][0] == 0);
  CHECK(rep.degree_failures[0][1] == s1);
  CHECK(rep.degree_failures[0][2] == s1);
  CHECK(rep.degrees_negative.witness.find("degree reaches zero") !=
        std::string::npos);
  CHECK_FALSE(datum.i5_repaired());
  CHECK_THROWS_AS(induced_ideal(datum, {0}), KlError);
}

TEST_CASE("region datum over the B1 family") {
  BallTable ball(g2_affine_system(5, 1), 14);
  KLCache kl(ball);
  G2Geometry geo(ball);
  InductionDatum datum = g2_b1_datum(kl, geo);

  const std::vector<std::string> words = {
      "s1.s3.s2.s1",
      "s1.s2.s1.s2.s1",
      "s1.s2.s1.s2.s1.s2",
      "s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1",
      "s1.s2.s1.s2.s1.s3.s2.s1",
      "s2.s1.s2.s1.s2.s1.s3.s2.s1",
      "s2.s1.s2.s1.s2.s3.s1.s2.s1.s2.s1.s3.s2.s1",
      "s2.s1.s2.s1.s2.s1.s3"};
  REQUIRE(datum.u_count() == static_cast<int>(words.size()));
  for (size_t i = 0; i < words.size(); ++i)
    CHECK(datum.u_members()[i] == ball.parse_word(words[i]));
  REQUIRE(datum.notes().size() == 1);
  CHECK(datum.notes()[0].find("spellings") != std::string::npos);

  const ConditionsReport& rep = check_conditions(datum);
  CHECK(rep.all_pass());

  const PreorderResult& pre = preorder_u(datum);
  CHECK(pre.classes[static_cast<size_t>(pre.class_of[0])] ==
        std::vector<int>{0});

  InducedIdeal ideal = induced_ideal(datum, all_positions(datum));
  CHECK(ideal.report.verdict == Verdict::certified_yes);
  const std::set<RegionLabel> expect_labels = {
      RegionLabel::B1, RegionLabel::C1, RegionLabel::A1, RegionLabel::Ap1,
      RegionLabel::C2, RegionLabel::A2, RegionLabel::Ap2, RegionLabel::A3};
  std::vector<int> expect;
  for (int w = 0; w < ball.size(); ++w)
    if (expect_labels.count(geo.classify(w))) expect.push_back(w);
  CHECK(ideal.members == expect);

  CHECK_THROWS_AS(induced_ideal(datum, {0}), KlError);
}
