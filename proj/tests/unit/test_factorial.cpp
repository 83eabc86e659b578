#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "../support.hpp"
#include "mdd/error.hpp"
#include "mdd/factorial.hpp"
#include "mdd/mean_test.hpp"
#include "mdd/simulation.hpp"

using namespace mdd;
using testing::close_rel;

namespace {

bool throws_kind(ErrorKind kind, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

Cell make_cell(std::mt19937_64& rng, std::size_t a, std::size_t b, std::size_t n, std::size_t p, double shift,
               double signal = 0.0) {
  Cell c;
  c.level_a = a;
  c.level_b = b;
  c.label = std::to_string(a) + "," + std::to_string(b);
  c.data.x = testing::random_matrix(rng, n, p);
  c.data.y = testing::random_vector(rng, n);
  for (std::size_t i = 0; i < n; ++i) c.data.y[i] += shift + signal * c.data.x(i, 0);
  return c;
}

}  // namespace

TEST_CASE("single cell reduces to the one-sample statistic") {
  std::mt19937_64 rng(61);
  for (std::size_t n : {10, 25, 60}) {
    CellTable t;
    t.cells.push_back(make_cell(rng, 0, 0, n, 5, 0.0, 0.5));
    const auto f = factorial_mean_test(t);
    const auto m = mean_independence_test(t.cells[0].data.x, t.cells[0].data.y);
    CHECK(f.method == TestMethod::factorial);
    CHECK(close_rel(f.statistic * std::sqrt(finite_sample_factor(n)), m.statistic, 1e-10));
    FactorialOptions with_cn;
    with_cn.per_cell_finite_sample_factor = true;
    CHECK(close_rel(factorial_mean_test(t, with_cn).statistic, m.statistic, 1e-10));
  }
}

TEST_CASE("factorial aggregation") {
  std::mt19937_64 rng(62);
  CellTable t;
  t.levels_a = 2;
  t.levels_b = 2;
  const std::size_t sizes[] = {12, 20, 15, 30};
  for (std::size_t c = 0; c < 4; ++c) t.cells.push_back(make_cell(rng, c / 2, c % 2, sizes[c], 3, 2.0 * c, 0.3));
  const auto r = factorial_mean_test(t);

  double num = 0.0, den = 0.0;
  for (const auto& cell : t.cells) {
    const auto m = mean_independence_test(cell.data.x, cell.data.y);
    const double n = static_cast<double>(cell.data.n());
    const double pairs = n * (n - 1) / 2;
    num += std::sqrt(pairs) * m.mdd_sum;
    den += m.variance_estimate * finite_sample_factor(cell.data.n());
  }
  CHECK(close_rel(r.statistic, num / std::sqrt(den), 1e-10));
  CHECK(r.n == 77);
  CHECK(r.p == 3);

  SUBCASE("cell order does not matter") {
    CellTable shuffled = t;
    std::reverse(shuffled.cells.begin(), shuffled.cells.end());
    CHECK(close_rel(factorial_mean_test(shuffled).statistic, r.statistic, 1e-12));
  }
  SUBCASE("per-cell response shifts cancel") {
    CellTable shifted = t;
    for (std::size_t c = 0; c < 4; ++c) {
      for (double& v : shifted.cells[c].data.y) v += 100.0 * (c + 1);
    }
    CHECK(close_rel(factorial_mean_test(shifted).statistic, r.statistic, 1e-10));
  }
  SUBCASE("an extra null cell is harmless") {
    CellTable more = t;
    more.cells.push_back(make_cell(rng, 2, 0, 20, 3, 0.0));
    more.levels_a = 3;
    const auto extra = factorial_mean_test(more);
    CHECK(std::isfinite(extra.statistic));
  }
  SUBCASE("degenerate cell is named") {
    CellTable bad = t;
    std::fill(bad.cells[2].data.y.begin(), bad.cells[2].data.y.end(), 1.0);
    try {
      factorial_mean_test(bad);
      FAIL("expected DegenerateData");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateData);
      CHECK(std::string(e.what()).find(bad.cells[2].label) != std::string::npos);
    }
  }
  SUBCASE("cells need four rows and a common p") {
    CellTable small = t;
    small.cells[0] = make_cell(rng, 0, 0, 3, 3, 0.0);
    CHECK(throws_kind(ErrorKind::SampleTooSmall, [&] { factorial_mean_test(small); }));
    CellTable ragged = t;
    ragged.cells[1] = make_cell(rng, 0, 1, 20, 4, 0.0);
    CHECK(throws_kind(ErrorKind::InvalidData, [&] { factorial_mean_test(ragged); }));
  }
}

TEST_CASE("partition by factor columns") {
  std::mt19937_64 rng(63);
  Dataset d;
  const std::size_t n = 40;
  d.x = Matrix(n, 4);
  d.y = testing::random_vector(rng, n);
  d.column_names = {"g1", "a", "g2", "b"};
  for (std::size_t i = 0; i < n; ++i) {
    d.x(i, 0) = testing::random_vector(rng, 1)[0];
    d.x(i, 1) = static_cast<double>(i % 2) * 5.0;
    d.x(i, 2) = testing::random_vector(rng, 1)[0];
    d.x(i, 3) = static_cast<double>((i / 2) % 2) - 1.0;
  }
  const std::vector<std::size_t> factors{1, 3};
  const auto t = partition_by_factors(d, factors);
  CHECK(t.levels_a == 2);
  CHECK(t.levels_b == 2);
  REQUIRE(t.cells.size() == 4);
  std::size_t total = 0;
  for (const auto& c : t.cells) {
    CHECK(c.data.p() == 2);
    CHECK(c.data.column_names == std::vector<std::string>{"g1", "g2"});
    CHECK(c.data.n() == 10);
    total += c.data.n();
  }
  CHECK(total == n);
  // Rows of cell (level 0 of a, level 0 of b): a == 0 and b == -1.
  const auto& first = t.cells[0];
  CHECK(first.level_a == 0);
  CHECK(first.level_b == 0);
  CHECK(first.data.y[0] == d.y[0]);

  const std::vector<std::size_t> one{1};
  CHECK(partition_by_factors(d, one).cells.size() == 2);
  const std::vector<std::size_t> none{};
  CHECK(throws_kind(ErrorKind::InvalidConfig, [&] { partition_by_factors(d, none); }));
}

TEST_CASE("factorial simulation design") {
  SimulationConfig c;
  c.dgp = Dgp::factorial_ma_linear;
  c.n = 30;
  c.p = 20;
  c.seed = 5;
  const auto t = simulate_cells(c, 0);
  REQUIRE(t.cells.size() == 4);
  for (const auto& cell : t.cells) {
    CHECK(cell.data.n() == 30);
    CHECK(cell.data.p() == 20);
  }
  // Nuisance cell means shift the responses but not the statistic.
  SimulationConfig flat = c;
  flat.cell_means = {0.0, 0.0, 0.0, 0.0};
  const auto t0 = simulate_cells(flat, 0);
  CHECK(t0.cells[3].data.y[0] + 4.0 == doctest::Approx(t.cells[3].data.y[0]));
  CHECK(close_rel(factorial_mean_test(t0).statistic, factorial_mean_test(t).statistic, 1e-9));
}
