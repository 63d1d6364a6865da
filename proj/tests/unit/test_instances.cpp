#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "bmland/certify.hpp"
#include "bmland/instances.hpp"
#include "bmland/linalg.hpp"
#include "support.hpp"

using namespace bmland;

TEST_CASE("axial point") {
  const Point y = axial(6);
  CHECK(y.n() == 6);
  CHECK(y.p() == 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK((y.row(i) + y.row(i + 3)).norm() == 0.0);
  CHECK(y.matrix().topRows(3) == RowMatrix::Identity(3, 3));
  CHECK_THROWS_AS(axial(5), InvalidDimensions);
  CHECK_THROWS_AS(axial(0), InvalidDimensions);
}

TEST_CASE("almost-average matrix") {
  const SymMatrix m = almost_average(2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == -2.0);
  CHECK_THROWS_AS(almost_average(1), InvalidDimensions);

  for (Eigen::Index k : {2, 3, 4, 10, 25}) {
    // (1 + c) I - c J with c = 1/(k - 1.5): eigenvalues 1 + c and 1 - (k - 1) c.
    const double c = 1.0 / (k - 1.5);
    const Vector ev = symmetric_eigenvalues(almost_average(k).matrix());
    CHECK(ev(0) == doctest::Approx(-1.0 / (2.0 * k - 3.0)).epsilon(1e-12));
    CHECK(ev(0) == doctest::Approx(1.0 - (k - 1) * c).epsilon(1e-12));
    for (Eigen::Index i = 1; i < k; ++i) CHECK(ev(i) == doctest::Approx(1.0 + c));
  }
}

TEST_CASE("optimal value formula") {
  CHECK(almost_average_opt_value(2) == -8.0);
  CHECK_THROWS_AS(almost_average_opt_value(1), InvalidDimensions);
  for (Eigen::Index p : {2, 3, 7, 25}) {
    // attained by Y = all rows equal: <A, J> = sum of entries
    const SymMatrix a = block_cost(almost_average(p));
    CHECK(a.matrix().sum() == doctest::Approx(almost_average_opt_value(p)).epsilon(1e-12));
  }
}

TEST_CASE("block cost") {
  Rng rng(1);
  const SymMatrix m = testing::random_sym(3, rng);
  Vector alpha(6);
  alpha << 1, 2, 3, 4, 5, 6;
  const SymMatrix a = block_cost(m, alpha);
  CHECK(a.dim() == 6);
  CHECK(a.matrix().topRightCorner(3, 3) == m.matrix());
  CHECK(a.matrix().bottomLeftCorner(3, 3) == m.matrix());
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(a(i, i) == doctest::Approx(m(i % 3, i % 3) + alpha(i)));
  CHECK(is_block_form(a));
  CHECK_THROWS_AS(block_cost(m, Vector::Zero(5)), InvalidDimensions);
}

TEST_CASE("random pseudo-PD construction") {
  for (Eigen::Index k : {2, 3, 5, 20}) {
    Rng rng(100 + k);
    const auto draw = random_pseudo_pd(k, default_mu(k), rng);
    const Matrix& m = draw.m.matrix();
    CHECK(draw.attempts >= 1);
    CHECK(draw.attempts <= kDefaultMaxRetries);
    CHECK(draw.epsilon > 0.0);
    CHECK((m.array() >= 0.0).all());
    for (Eigen::Index i = 0; i < k; ++i) CHECK(min_eigenvalue(remove_index(m, i)) >= draw.epsilon - 1e-9);
    CHECK(std::abs(min_eigenvalue(m) + draw.epsilon) <= 1e-9);
    CHECK(pseudo_report(draw.m).strictly_pseudo_pd);
    CHECK(negative_eigen_count(draw.m) == 1);
  }
}

TEST_CASE("random pseudo-PD construction is deterministic per seed") {
  Rng a(7), b(7), c(8);
  const auto da = random_pseudo_pd(6, 2.0, a);
  const auto db = random_pseudo_pd(6, 2.0, b);
  const auto dc = random_pseudo_pd(6, 2.0, c);
  CHECK(da.m.matrix() == db.m.matrix());
  CHECK(da.epsilon == db.epsilon);
  CHECK(da.m.matrix() != dc.m.matrix());
}

TEST_CASE("random pseudo-PD argument validation") {
  Rng rng(1);
  CHECK_THROWS_AS(random_pseudo_pd(1, 1.0, rng), InvalidDimensions);
  CHECK_THROWS_AS(random_pseudo_pd(4, 0.0, rng), InvalidInput);
  CHECK_THROWS_AS(random_pseudo_pd(4, 1.0, rng, 0), InvalidInput);
  CHECK(default_mu(2) == doctest::Approx(2.0 * std::sqrt(std::log(2.0))));
}

TEST_CASE("random pseudo-PD with a small mean fails with a diagnostic") {
  // Entries of N(mu, 1) with tiny mu are often negative in U U^T.
  Rng rng(3);
  bool failed = false;
  try {
    random_pseudo_pd(30, 1e-3, rng, 1);
  } catch (const ConstructionFailed& e) {
    failed = true;
    CHECK(e.attempts() == 1);
  }
  CHECK(failed);
}

TEST_CASE("padding preserves objective and criticality") {
  const SymMatrix a = block_cost(almost_average(2));
  const Point y = axial(4);
  for (Eigen::Index np : {4, 5, 6, 10}) {
    const auto pad = pad_instance(a, y, np);
    CHECK(pad.a.dim() == np);
    CHECK(pad.y.n() == np);
    CHECK(objective_value(pad.a, pad.y) == objective_value(a, y));
    CHECK(first_order_check(pad.a, pad.y).ok);
    CHECK(second_order_check(pad.a, pad.y).ok);
  }
  CHECK_THROWS_AS(pad_instance(a, y, 3), InvalidDimensions);
  CHECK_THROWS_AS(pad_instance(a, y, 6, RowMatrix::Ones(2, 2)), InvalidInput);
  CHECK_THROWS_AS(pad_instance(a, y, 6, RowMatrix::Ones(3, 2)), InvalidDimensions);

  RowMatrix filler(2, 2);
  filler << 0, 1, -1, 0;
  const auto pad = pad_instance(a, y, 6, filler);
  CHECK(pad.y.matrix().bottomRows(2) == filler);
}

TEST_CASE("instance JSON round trip") {
  InstanceSpec s;
  s.n = 6;
  s.p = 3;
  s.alpha = Vector::LinSpaced(6, -1.0, 1.0 / 3.0);
  const SymMatrix a = s.realize();
  const InstanceSpec back = instance_from_json(nlohmann::json::parse(to_json(s).dump()));
  CHECK(back.realize().matrix() == a.matrix());

  InstanceSpec r;
  r.n = 8;
  r.p = 4;
  r.construction = InstanceSpec::Construction::RandomGaussian;
  r.seed = 42;
  r.mu = 2.5;
  const InstanceSpec rback = instance_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(rback.realize().matrix() == r.realize().matrix());

  InstanceSpec e;
  e.n = 4;
  e.p = 2;
  e.construction = InstanceSpec::Construction::Explicit;
  CHECK_THROWS_AS(e.realize(), InvalidInput);
  e.block = Matrix::Identity(2, 2);
  CHECK(instance_from_json(to_json(e)).realize().matrix() == block_cost(SymMatrix::identity(2)).matrix());

  CHECK_THROWS(instance_from_json(nlohmann::json::parse(R"({"n": 4})")));
  CHECK_THROWS_AS(construction_from_string("nope"), InvalidInput);
}

TEST_CASE("matrix text round trip is exact") {
  Rng rng(2);
  Matrix m(3, 4);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) m(i, j) = rng.normal() * 1e-7 + (i == j ? 1.0 / 3.0 : 0.0);
  std::stringstream ss;
  write_matrix_text(ss, m);
  CHECK(read_matrix_text(ss) == m);

  std::istringstream ragged("1 2\n3\n");
  CHECK_THROWS_AS(read_matrix_text(ragged), InvalidDimensions);
  std::istringstream junk("1 x\n");
  CHECK_THROWS_AS(read_matrix_text(junk), InvalidInput);
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/point.txt"), IoError);
}
