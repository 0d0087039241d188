#include <cmath>
#include <vector>

#include "doctest.h"
#include "kpzlab/lpp.hpp"
#include "kpzlab/scaling.hpp"
#include "oracles.hpp"

using namespace kpz;
namespace oracle = kpz::testing;

namespace {

// the worked 2x2 example: w11=1, w21=2, w12=3, w22=4, zero boundary
FixedWeightField example_2x2() {
  return FixedWeightField({0, 0}, 2, 2, {1, 2, 3, 4});
}

}  // namespace

TEST_CASE("2x2 fixed field: passage time, lookup, increments, path") {
  auto w = example_2x2();
  PassageField pf = solve_passage(w, Storage::FullTable);
  CHECK(pf.at(2, 2) == doctest::Approx(8.0));  // max(1+2+4, 1+3+4)
  CHECK(last_passage(pf, {2, 2}) == doctest::Approx(8.0));
  CHECK(last_passage(pf, {0, 2}) == 0.0);  // zero boundary
  CHECK(last_passage(pf, {2, 0}) == 0.0);

  auto inc = top_row_increments(pf, 2);
  REQUIRE(inc.size() == 1);
  CHECK(inc[0] == doctest::Approx(4.0));  // L(2,2)-L(1,2) = 8-(1+3)

  MonotonePath path = backtrack_maximizer(pf, {2, 2});
  std::vector<LatticePoint> expect = {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}};
  REQUIRE(path.points.size() == expect.size());
  for (size_t k = 0; k < expect.size(); ++k) CHECK(path.points[k] == expect[k]);

  CHECK_THROWS_AS(last_passage(pf, {3, 1}), std::out_of_range);
}

TEST_CASE("1x1 field") {
  FixedWeightField w({0, 0}, 1, 1, {2.5});
  PassageField pf = solve_passage(w, Storage::FullTable);
  CHECK(pf.at(1, 1) == doctest::Approx(2.5));
  MonotonePath p = backtrack_maximizer(pf, {1, 1});
  CHECK(p.points.size() == 3);  // origin, axis cell, end
}

TEST_CASE("DP equals exhaustive enumeration on random rational rectangles") {
  int64_t id = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int64_t W = 1 + int64_t(hash2(5, uint64_t(trial), 1) % 6);
    int64_t H = 1 + int64_t(hash2(5, uint64_t(trial), 2) % 6);
    while (W * H > 12) (W > H ? W : H) -= 1;
    bool stationary = trial % 3 == 0;
    auto rational = [&]() { return double(1 + int64_t(hash2(9, uint64_t(id++), 0) % 16)) / 8.0; };
    std::vector<double> bulk(static_cast<size_t>(W * H));
    for (auto& v : bulk) v = rational();
    FixedWeightField w =
        stationary
            ? [&] {
                std::vector<double> row(static_cast<size_t>(W)), col(static_cast<size_t>(H));
                for (auto& v : row) v = rational();
                for (auto& v : col) v = rational();
                return FixedWeightField({0, 0}, W, H, bulk, BoundaryMode::Stationary, row, col);
              }()
            : FixedWeightField({0, 0}, W, H, bulk);
    PassageField pf = solve_passage(w, Storage::FullTable);
    for (int64_t j = 0; j <= H; ++j)
      for (int64_t i = 0; i <= W; ++i)
        CHECK(pf.at(i, j) == doctest::Approx(oracle::enum_passage(w, {0, 0}, {i, j})).epsilon(1e-12));
  }
}

TEST_CASE("monotonicity along rows and columns on random fields") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    WeightField w(seed, {0, 0}, 40, 30, BoundaryMode::Stationary, 0.4);
    PassageField pf = solve_passage(w, Storage::FullTable);
    for (int64_t j = 0; j <= 30; ++j)
      for (int64_t i = 1; i <= 40; ++i) CHECK(pf.at(i, j) >= pf.at(i - 1, j));
    for (int64_t i = 0; i <= 40; ++i)
      for (int64_t j = 1; j <= 30; ++j) CHECK(pf.at(i, j) >= pf.at(i, j - 1));
  }
}

TEST_CASE("superadditivity on shared weights") {
  WeightField w(77, {0, 0}, 50, 50, BoundaryMode::ZeroBoundary);
  PassageField pf = solve_passage(w, Storage::FullTable);
  for (int trial = 0; trial < 20; ++trial) {
    int64_t bi = 1 + int64_t(hash2(3, uint64_t(trial), 1) % 40);
    int64_t bj = 1 + int64_t(hash2(3, uint64_t(trial), 2) % 40);
    LatticePoint B{bi, bj}, C{50, 50};
    double lbc = point_to_point(w, B, C);
    CHECK(pf.at(C) >= pf.at(B) + lbc - 1e-9);
  }
}

TEST_CASE("rolling storage matches the full table on the final row") {
  WeightField w(123, {0, 0}, 60, 25, BoundaryMode::Stationary, 0.6);
  PassageField full = solve_passage(w, Storage::FullTable);
  PassageField roll = solve_passage(w, Storage::RollingRow);
  for (int64_t i = 0; i <= 60; ++i) CHECK(roll.at(i, 25) == full.at(i, 25));
  CHECK_THROWS_AS(roll.at(5, 10), std::out_of_range);
  CHECK_THROWS_AS(backtrack_maximizer(roll, {60, 25}), std::logic_error);
}

TEST_CASE("passage checkpoints agree with independent solves") {
  WeightField w(9, {0, 0}, 40, 40, BoundaryMode::ZeroBoundary);
  std::vector<LatticePoint> pts = {{10, 10}, {40, 40}, {25, 17}};
  auto vals = passage_checkpoints(w, pts);
  PassageField pf = solve_passage(w, Storage::FullTable);
  for (size_t k = 0; k < pts.size(); ++k) CHECK(vals[k] == pf.at(pts[k]));
}

TEST_CASE("backtracked path reproduces the DP value exactly") {
  for (uint64_t seed = 5; seed < 8; ++seed) {
    WeightField w(seed, {0, 0}, 30, 30, BoundaryMode::Stationary, 0.5);
    PassageField pf = solve_passage(w, Storage::FullTable);
    MonotonePath path = backtrack_maximizer(pf, {30, 30});
    REQUIRE(path.points.front() == LatticePoint{0, 0});
    REQUIRE(path.points.back() == LatticePoint{30, 30});
    double s = 0.0;
    for (size_t k = 1; k < path.points.size(); ++k) {
      auto d_i = path.points[k].i - path.points[k - 1].i;
      auto d_j = path.points[k].j - path.points[k - 1].j;
      CHECK(d_i + d_j == 1);  // unit up-right steps
      s += w(path.points[k].i, path.points[k].j);
    }
    CHECK(s == pf.at(30, 30));  // same additions in the same order
  }
}

TEST_CASE("exit point: fixed 1x1 cases and axis endpoint") {
  // boundary w10=5, w01=1, bulk w11=2: maximizer goes through (1,0)
  FixedWeightField wa({0, 0}, 1, 1, {2.0}, BoundaryMode::Stationary, {5.0}, {1.0});
  PassageField pa = solve_passage(wa, Storage::FullTable);
  CHECK(exit_point(pa, {1, 1}).z == 1);
  CHECK(pa.at(1, 1) == doctest::Approx(7.0));

  FixedWeightField wb({0, 0}, 1, 1, {2.0}, BoundaryMode::Stationary, {1.0}, {5.0});
  PassageField pb = solve_passage(wb, Storage::FullTable);
  CHECK(exit_point(pb, {1, 1}).z == -1);

  WeightField w(4, {0, 0}, 10, 10, BoundaryMode::Stationary, 0.5);
  PassageField pf = solve_passage(w, Storage::FullTable);
  CHECK(exit_point(pf, {7, 0}).z == 7);
  CHECK(exit_point(pf, {0, 4}).z == -4);
}

TEST_CASE("exit sign agrees with the forced-first-step oracle") {
  for (uint64_t seed = 21; seed < 29; ++seed) {
    WeightField w(seed, {0, 0}, 6, 6, BoundaryMode::Stationary, 0.45);
    PassageField pf = solve_passage(w, Storage::FullTable);
    double via_row = oracle::enum_passage_first_step(w, {0, 0}, {6, 6}, true);
    double via_col = oracle::enum_passage_first_step(w, {0, 0}, {6, 6}, false);
    int64_t z = exit_point(pf, {6, 6}).z;
    if (via_row > via_col) CHECK(z > 0);
    if (via_col > via_row) CHECK(z < 0);
  }
}

TEST_CASE("line_to_point: singleton equals point-to-point, brute force on sets") {
  WeightField w(31, {-20, -20}, 40, 40, BoundaryMode::ZeroBoundary);

  // singleton
  double v1 = line_to_point(StartSet::single({1, 1}), {15, 12}, w).value;
  CHECK(v1 == doctest::Approx(point_to_point(w, {1, 1}, {15, 12})));

  // truncated antidiagonal (-k, k), brute force over starts
  StartSet anti = StartSet::flat(0.5, -5, 5);
  LineToPointResult r = line_to_point(anti, {5, 5}, w, true);
  CHECK(r.value == doctest::Approx(oracle::enum_line_to_point(anti, {5, 5}, w)).epsilon(1e-12));
  // the reported argmax start alone reproduces the value
  CHECK(point_to_point(w, anti.point(r.argmax_k), {5, 5}) == doctest::Approx(r.value));

  // end point inside the start set: single-point path is admissible, value >= 0
  StartSet self = StartSet::single({5, 5});
  double v2 = line_to_point(self, {5, 5}, w).value;
  CHECK(v2 == 0.0);

  // no admissible start
  CHECK_THROWS_AS(line_to_point(StartSet::single({9, 9}), {5, 5}, w), std::domain_error);
}

TEST_CASE("line_to_point handles stacked starts (rho > 1/2)") {
  // rho = 0.7 makes consecutive particles adjacent, so the start staircase
  // repeats columns; brute force must still agree
  WeightField w(8, {-30, -30}, 60, 60, BoundaryMode::ZeroBoundary);
  StartSet s = StartSet::flat(0.7, -6, 6);
  CHECK_FALSE([&] {
    for (int64_t k = s.k_lo() + 1; k <= s.k_hi(); ++k)
      if (s.column_at(k) == s.column_at(k - 1)) return false;
    return true;
  }());
  double got = line_to_point(s, {9, 6}, w).value;
  CHECK(got == doctest::Approx(oracle::enum_line_to_point(s, {9, 6}, w)).epsilon(1e-12));
}

TEST_CASE("flat start set matches the particle map") {
  StartSet s = StartSet::flat(0.5, -4, 4);
  for (int64_t k = -4; k <= 4; ++k) CHECK(s.point(k) == LatticePoint{-k, k});
  CHECK(flat_position(1.0 / 3.0, 2) == -6);
  CHECK(flat_position(0.4, 3) == -7);  // -floor(7.5)
  CHECK(flat_position(0.3, 3) == -10);  // quotient snaps to the exact integer
  CHECK(StartSet::flat(0.3, -20, 20).is_down_right());
  CHECK_THROWS_AS(StartSet::flat(1.2, 0, 3), std::invalid_argument);
}

TEST_CASE("offsets must preserve the down-right ordering") {
  std::vector<int64_t> ok = {0, 0, 0};
  CHECK(StartSet::offsets(0.5, 0, ok).is_down_right());
  std::vector<int64_t> bad = {0, 5, 0};  // pushes a start up-right of its neighbor
  CHECK_THROWS_AS(StartSet::offsets(0.5, 0, bad), std::invalid_argument);
}

TEST_CASE("law of large numbers at n=2000") {
  WeightField w(2026, {0, 0}, 2000, 2000, BoundaryMode::ZeroBoundary);
  PassageField pf = solve_passage(w, Storage::RollingRow);
  CHECK(pf.at(2000, 2000) / 2000.0 == doctest::Approx(4.0).epsilon(0.025));
}

TEST_CASE("identical inputs give bitwise-identical tables") {
  WeightField a(555, {0, 0}, 30, 30, BoundaryMode::Stationary, 0.3);
  WeightField b(555, {0, 0}, 30, 30, BoundaryMode::Stationary, 0.3);
  PassageField pa = solve_passage(a, Storage::FullTable);
  PassageField pb = solve_passage(b, Storage::FullTable);
  for (int64_t j = 0; j <= 30; ++j)
    for (int64_t i = 0; i <= 30; ++i) CHECK(pa.at(i, j) == pb.at(i, j));
}

TEST_CASE("capacity guard") {
  auto old = max_table_cells();
  set_max_table_cells(1000);
  CHECK_THROWS_AS(WeightField(1, {0, 0}, 100, 100, BoundaryMode::ZeroBoundary), capacity_error);
  WeightField small(1, {0, 0}, 10, 10, BoundaryMode::ZeroBoundary);
  CHECK_THROWS_AS(solve_passage(WeightField(1, {0, 0}, 31, 31, BoundaryMode::ZeroBoundary),
                                Storage::FullTable),
                  capacity_error);
  set_max_table_cells(old);
}
