#include <doctest.h>

#include <array>
#include <cmath>

#include "sdr/rng.hpp"
#include "sdr/types.hpp"
#include "sdr/vec_ops.hpp"
#include "test_support.hpp"

using namespace sdr;
using test::make_vector;
using test::random_vector;

TEST_CASE("dot: small examples and dimension checking") {
  CHECK(dot(make_vector({1, 2}), make_vector({3, 4})) == doctest::Approx(11.0));
  CHECK(dot(make_vector({1, 2, 3}), Vector::Zero(3)) == 0.0);
  CHECK(dot(make_vector({1, 0}), make_vector({0, 1})) == 0.0);
  CHECK_THROWS_AS(dot(Vector::Zero(2), Vector::Zero(3)), Error);
  try {
    dot(Vector::Zero(2), Vector::Zero(3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension_mismatch);
  }
}

TEST_CASE("restrict picks coordinates in group order") {
  const Vector x = make_vector({5, 6, 7});
  const std::vector<int> s{0, 2};
  const Vector r = restrict(x, s);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == 5.0);
  CHECK(r[1] == 7.0);

  const std::vector<int> all{0, 1, 2};
  CHECK(restrict(x, all) == x);

  const std::vector<int> second{1};
  CHECK(restrict(make_vector({2, -1}), second)[0] == -1.0);

  const std::vector<int> bad{3};
  CHECK_THROWS_AS(restrict(x, bad), Error);
}

TEST_CASE("scatter_add adds on the index set and leaves the rest") {
  const std::vector<int> s{0, 2};
  const Vector out = scatter_add(Vector::Zero(3), s, make_vector({2, 4}));
  CHECK(out == make_vector({2, 0, 4}));

  const Vector x = make_vector({1, 1});
  const std::vector<int> second{1};
  CHECK(scatter_add(x, second, make_vector({-1})) == make_vector({1, 0}));
  CHECK(scatter_add(x, second, Vector::Zero(1)) == x);

  CHECK_THROWS_AS(scatter_add(x, second, Vector::Zero(2)), Error);
}

TEST_CASE("restrict/scatter_add adjointness on random inputs") {
  SeededRng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_index(8));
    const Vector x = random_vector(rng, n);
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (rng.next_unit() < 0.5) s.push_back(i);
    if (s.empty()) s.push_back(0);
    const Vector v = random_vector(rng, static_cast<int>(s.size()));
    const double lhs = dot(restrict(x, s), v);
    const double rhs = dot(x, scatter_add(Vector::Zero(n), s, v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("GroupSpec validates its sets") {
  CHECK_THROWS_AS(GroupSpec(3, {}), Error);
  CHECK_THROWS_AS(GroupSpec(3, {{}}), Error);
  CHECK_THROWS_AS(GroupSpec(3, {{0, 3}}), Error);
  CHECK_THROWS_AS(GroupSpec(3, {{0, 0}}), Error);
  const GroupSpec ok(3, {{0, 1}, {1, 2}});
  CHECK(ok.group_count() == 2);
  CHECK(ok.dimension() == 3);
}

TEST_CASE("Dataset validates labels, dimensions and finiteness") {
  CHECK_THROWS_AS(Dataset({}), Error);
  {
    std::vector<Sample> bad{{make_vector({1, 2}), 2}};
    CHECK_THROWS_AS(Dataset(std::move(bad)), Error);
  }
  {
    std::vector<Sample> bad{{make_vector({1, 2}), 1}, {make_vector({1}), -1}};
    CHECK_THROWS_AS(Dataset(std::move(bad)), Error);
  }
  {
    Vector nan_features = make_vector({1, 2});
    nan_features[0] = std::nan("");
    std::vector<Sample> bad{{nan_features, 1}};
    CHECK_THROWS_AS(Dataset(std::move(bad)), Error);
  }
}

TEST_CASE("draw_sample: singleton support always returns the sample") {
  const Dataset data = test::single_sample_dataset({1.0, -2.0}, -1);
  SeededRng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Sample& s = draw_sample(data, rng);
    CHECK(s.label == -1);
    CHECK(s.features[1] == -2.0);
  }
}

TEST_CASE("identical seeds give identical draw sequences") {
  SeededRng a(42), b(42);
  for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());

  SeededRng c(42), d(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.next_normal() == d.next_normal());
    CHECK(c.next_index(17) == d.next_index(17));
  }
}

TEST_CASE("derived streams differ from each other and the master") {
  SeededRng master(99);
  SeededRng data = SeededRng::derive(99, RngStream::data);
  SeededRng group = SeededRng::derive(99, RngStream::group);
  CHECK(master.next_u64() != data.next_u64());
  CHECK(data.next_u64() != group.next_u64());
}

TEST_CASE("uniform index draws hit each atom of a 4-point support evenly") {
  SeededRng rng(2024);
  std::array<int, 4> counts{0, 0, 0, 0};
  const int n_draws = 100000;
  for (int i = 0; i < n_draws; ++i) ++counts[rng.next_index(4)];
  for (int c : counts) {
    const double freq = static_cast<double>(c) / n_draws;
    CHECK(freq > 0.23);
    CHECK(freq < 0.27);
  }
}

TEST_CASE("unit draws live in [0,1) and normals have sane moments") {
  SeededRng rng(5);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = rng.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}
