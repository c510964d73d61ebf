#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <paract/geometry.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace paract;

TEST_CASE("half-step interior sampling") {
  const Grid g = sample(OpenBox::interval(0.0, 1.0), 4);
  REQUIRE(g.size() == 4);
  const auto& pts = g.axis_points(0);
  CHECK(pts[0] == 0.125);
  CHECK(pts[1] == 0.375);
  CHECK(pts[2] == 0.625);
  CHECK(pts[3] == 0.875);

  const Grid wide = sample(OpenBox::interval(-3.0, 3.0), 2);
  CHECK(wide.axis_points(0)[0] == -1.5);
  CHECK(wide.axis_points(0)[1] == 1.5);

  const Grid square = sample(OpenBox({{0.0, 1.0}, {0.0, 1.0}}), std::vector<int>{2, 2});
  REQUIRE(square.size() == 4);
  // Row-major: last axis fastest.
  CHECK(square.point(0) == std::vector<double>{0.25, 0.25});
  CHECK(square.point(1) == std::vector<double>{0.25, 0.75});
  CHECK(square.point(2) == std::vector<double>{0.75, 0.25});
  CHECK(square.point(3) == std::vector<double>{0.75, 0.75});
}

TEST_CASE("grid points respect box openness") {
  const OpenBox box = OpenBox::interval(-1.0, 2.0);
  for (int resolution : {2, 3, 17, 1024}) {
    const Grid g = sample(box, resolution);
    for (double x : g.axis_points(0)) {
      CHECK(x > box.axis(0).lo);
      CHECK(x < box.axis(0).hi);
    }
    for (std::size_t i = 1; i < g.axis_points(0).size(); ++i)
      CHECK(g.axis_points(0)[i - 1] < g.axis_points(0)[i]);
  }
}

TEST_CASE("sampling guards") {
  CHECK_THROWS_AS(sample(OpenBox::interval(0.0, 1.0), 1), Error);
  CHECK_THROWS_AS(sample(OpenBox({{0.0, 1.0}, {0.0, 1.0}}), 4000), OverflowRiskError);
  CHECK_THROWS_AS(OpenBox::interval(1.0, 1.0), Error);
  CHECK_THROWS_AS(OpenBox::interval(2.0, 1.0), Error);
  CHECK_THROWS_AS(sample(OpenBox::interval(0.0, 1.0), std::vector<int>{2, 2}),
                  DimensionMismatchError);
}

TEST_CASE("covering distance on small clouds") {
  PointCloud a(2);
  a.push(0.0, 0.0);
  PointCloud b(2);
  b.push(3.0, 4.0);
  CHECK(covering_distance(a, b) == 5.0);
  CHECK(covering_distance(a, a) == 0.0);

  PointCloud c(3);
  c.push(std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(covering_distance(a, c), DimensionMismatchError);
}

TEST_CASE("covering distance of one parabola sampled on shifted grids") {
  const OpenBox window = OpenBox::interval(-2.0, 2.0);
  const Grid dense = sample(window, 512);
  PointCloud a(2);
  for (double x : dense.axis_points(0)) a.push(x, x * x);

  PointCloud b(2);
  const double shift = 0.3 * dense.spacing(0);
  for (double x : dense.axis_points(0)) {
    const double t = x + shift;
    b.push(t, t * t);
  }

  const double measured = symmetric_covering_distance(a, b);
  CHECK(measured == oracle::naive_directed_distance(a, b));
  // Adjacent samples of the same curve stay within one cloud step.
  CHECK(measured <= cloud_spacing(a));
}

TEST_CASE("property: covering distance never grows when the target gains points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    PointCloud a(2);
    PointCloud b(2);
    for (int i = 0; i < 40; ++i) a.push(coord(rng), coord(rng));
    for (int i = 0; i < 10; ++i) b.push(coord(rng), coord(rng));
    const double before = covering_distance(a, b);
    PointCloud larger = b;
    for (int i = 0; i < 10; ++i) larger.push(coord(rng), coord(rng));
    CHECK(covering_distance(a, larger) <= before + 1e-15);
  }
}

TEST_CASE("cloud spacing") {
  PointCloud line(2);
  line.push(0.0, 0.0);
  line.push(1.0, 0.0);
  line.push(1.0, 2.0);
  CHECK(cloud_spacing(line) == 2.0);
  PointCloud single(2);
  single.push(0.0, 0.0);
  CHECK(cloud_spacing(single) == 0.0);
}

TEST_CASE("CSV serialization is exact and locale independent") {
  PointCloud cloud(2);
  cloud.push(0.5, 0.25);
  cloud.push(-1.5, 2.25);
  cloud.push(1e-7, 12345678.5);

  std::ostringstream plain;
  cloud.write_csv(plain);
  CHECK(plain.str() == "0.5,0.25\n-1.5,2.25\n1e-07,12345678.5\n");

  std::ostringstream with_header;
  const std::vector<std::string> header = {"x", "u"};
  cloud.write_csv(with_header, &header);
  CHECK(with_header.str() == "x,u\n0.5,0.25\n-1.5,2.25\n1e-07,12345678.5\n");
}

TEST_CASE("point cloud guards") {
  PointCloud cloud(2);
  CHECK_THROWS_AS(cloud.push(std::vector<double>{1.0}), DimensionMismatchError);
  CHECK_THROWS_AS(cloud.push(std::vector<double>{1.0, std::nan("")}), Error);
  CHECK_THROWS_AS(covering_distance(cloud, cloud), Error);  // empty
}

TEST_CASE("closed linspace hits both endpoints exactly") {
  const std::vector<double> pts = linspace_closed(-3.0, 3.0, 7);
  REQUIRE(pts.size() == 7);
  CHECK(pts.front() == -3.0);
  CHECK(pts.back() == 3.0);
  CHECK(pts[3] == 0.0);
}

TEST_CASE("open box membership") {
  const OpenBox box = OpenBox::interval(0.0, 1.0);
  const double inside[1] = {0.5};
  const double boundary[1] = {1.0};
  const double near[1] = {1.05};
  CHECK(box.contains(inside));
  CHECK(!box.contains(boundary));
  CHECK(box.contains_closure(boundary));
  CHECK(!box.contains_closure(near));
  CHECK(box.contains_closure(near, 0.1));
  CHECK(box == OpenBox::interval(0.0, 1.0));
  CHECK(!(box == OpenBox::interval(0.0, 2.0)));
}
