#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kg/bubbles.hpp"
#include "kg/errors.hpp"

using namespace kg;

namespace {

// Field +1 everywhere and -1 where `inside` holds, on an n^3 grid of
// index coordinates.
template <typename Pred>
Field3D marked(int n, Pred inside) {
  Field3D f(n, 1.0 / (n - 1));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) f(i, j, k) = inside(double(i), double(j), double(k)) ? -1.0 : 1.0;
  return f;
}

auto ball(double cx, double cy, double cz, double r) {
  return [=](double i, double j, double k) {
    return (i - cx) * (i - cx) + (j - cy) * (j - cy) + (k - cz) * (k - cz) <= r * r;
  };
}

std::vector<BubbleStats> stats_of(const Field3D& f) {
  return component_stats(detect_sign_regions(f, 1e-6, 1), f.dx);
}

}  // namespace

TEST_CASE("positive field has no bubbles") {
  const Field3D f = marked(9, [](double, double, double) { return false; });
  CHECK(detect_sign_regions(f, 1e-6, 1).count == 0);
  CHECK_THROWS_AS(detect_sign_regions(f, 0.0, 1), DomainError);
  CHECK_THROWS_AS(detect_sign_regions(f, 1e-6, 0), DomainError);
}

TEST_CASE("single voxel") {
  const Field3D f = marked(5, [](double i, double j, double k) { return i == 2 && j == 2 && k == 2; });
  const auto s = stats_of(f);
  REQUIRE(s.size() == 1);
  CHECK(s[0].euler_char == 1);
  CHECK(s[0].volume_voxels == 1);
}

TEST_CASE("voxel ball and torus against brute-force counts") {
  const auto b = stats_of(marked(32, ball(15.5, 15.5, 15.5, 10)));
  REQUIRE(b.size() == 1);
  CHECK(b[0].volume_voxels == 4224);
  CHECK(b[0].euler_char == 1);

  const auto t = stats_of(marked(40, [](double i, double j, double k) {
    const double x = i - 19.5, y = j - 19.5, z = k - 19.5;
    const double q = std::sqrt(x * x + y * y) - 10;
    return q * q + z * z <= 16;
  }));
  REQUIRE(t.size() == 1);
  CHECK(t[0].volume_voxels == 3216);
  CHECK(t[0].euler_char == 0);

  const auto sh = stats_of(marked(32, [](double i, double j, double k) {
    const double r2 = (i - 15.5) * (i - 15.5) + (j - 15.5) * (j - 15.5) + (k - 15.5) * (k - 15.5);
    return r2 <= 100 && r2 > 36;
  }));
  REQUIRE(sh.size() == 1);
  CHECK(sh[0].volume_voxels == 3312);
  CHECK(sh[0].euler_char == 2);
}

TEST_CASE("two balls in the unit box") {
  const int n = 61;
  const double h = 1.0 / (n - 1);
  const Field3D f = marked(n, [&](double i, double j, double k) {
    auto d2 = [&](double c) { return (i * h - c) * (i * h - c) + (j * h - c) * (j * h - c) + (k * h - c) * (k * h - c); };
    return d2(0.3) < 0.0225 || d2(0.7) < 0.0225;
  });
  const auto s = stats_of(f);
  REQUIRE(s.size() == 2);
  CHECK(s[0].volume_voxels + s[1].volume_voxels == 6013);
  const double exact = 4.0 / 3 * M_PI * 0.15 * 0.15 * 0.15 / (h * h * h);
  const double shell = 4 * M_PI * 0.15 * 0.15 / (h * h);
  for (const auto& b : s) {
    CHECK(std::abs(b.volume_voxels - exact) < shell);
    CHECK(b.euler_char == 1);
    for (int a = 0; a < 3; ++a) {
      CHECK(b.centroid(a) >= b.bbox_lo[a] * h);
      CHECK(b.centroid(a) <= b.bbox_hi[a] * h);
    }
  }
  CHECK(std::abs(s[0].centroid(0) - 0.3) < 0.5 * h);
}

TEST_CASE("a tube joins two balls") {
  const auto s = stats_of(marked(40, [](double i, double j, double k) {
    return ball(10, 20, 20, 6)(i, j, k) || ball(30, 20, 20, 6)(i, j, k) ||
           (i >= 10 && i <= 30 && std::abs(j - 20) <= 1 && std::abs(k - 20) <= 1);
  }));
  CHECK(s.size() == 1);
}

TEST_CASE("diagonal contact does not connect") {
  const auto s = stats_of(marked(6, [](double i, double j, double k) {
    return (i == 1 && j == 1 && k == 1) || (i == 2 && j == 2 && k == 2);
  }));
  CHECK(s.size() == 2);
}

TEST_CASE("labels are canonical and translation leaves chi unchanged") {
  const auto torus = [](double cx) {
    return [=](double i, double j, double k) {
      const double x = i - cx, y = j - 16, z = k - 16;
      const double q = std::sqrt(x * x + y * y) - 7;
      return q * q + z * z <= 6.25;
    };
  };
  const Field3D a = marked(34, torus(14)), b = marked(34, torus(17.5));
  const auto ga = detect_sign_regions(a, 1e-6, 1);
  CHECK(ga.labels == detect_sign_regions(a, 1e-6, 1).labels);
  CHECK(component_stats(ga, a.dx)[0].euler_char == component_stats(detect_sign_regions(b, 1e-6, 1), b.dx)[0].euler_char);
}

TEST_CASE("threshold monotonicity and reference sign") {
  Field3D f(12, 1.0 / 11);
  for (std::size_t p = 0; p < f.size(); ++p) f.values[p] = std::sin(0.37 * double(p));
  const auto lo = detect_sign_regions(f, 1e-3, 1), hi = detect_sign_regions(f, 0.5, 1);
  for (std::size_t p = 0; p < f.size(); ++p)
    if (hi.labels[p]) CHECK(lo.labels[p] != 0);
  long total = 0;
  for (const auto& s : component_stats(lo, f.dx)) total += s.volume_voxels;
  long marked_count = 0;
  for (int l : lo.labels) marked_count += l != 0;
  CHECK(total == marked_count);

  Field3D neg(5, 0.25);
  neg.values.setConstant(-1);
  CHECK(reference_sign_of(neg) == -1);
  CHECK(default_epsilon(neg) == doctest::Approx(1e-6));
}

TEST_CASE("timeline events") {
  const int n = 30;
  const Field3D empty = marked(n, [](double, double, double) { return false; });
  const Field3D two = marked(n, [](double i, double j, double k) { return ball(8, 15, 15, 4)(i, j, k) || ball(22, 15, 15, 4)(i, j, k); });
  const Field3D grown = marked(n, [](double i, double j, double k) { return ball(8, 15, 15, 7)(i, j, k) || ball(22, 15, 15, 7)(i, j, k); });
  const Field3D ring = marked(n, [](double i, double j, double k) {
    const double x = i - 15, y = j - 15, z = k - 15;
    const double q = std::sqrt(x * x + y * y) - 9;
    return q * q + z * z <= 9;
  });
  std::vector<Field3D> seq{empty, two, grown, ring, empty};
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i].time = 0.1 * double(i);
  const auto tl = build_timeline(seq, 1e-6, 1);
  CHECK(tl.first(EventKind::formation) == doctest::Approx(0.1));
  CHECK(tl.first(EventKind::merge) == doctest::Approx(0.2));
  CHECK(tl.first(EventKind::disappearance) == doctest::Approx(0.4));
  CHECK(tl.snapshots[1].bubbles.size() == 2);
  CHECK(tl.snapshots[2].bubbles.size() == 1);
  for (std::size_t i = 1; i < tl.events.size(); ++i) CHECK(tl.events[i].t >= tl.events[i - 1].t);
  int formations = 0;
  for (const auto& e : tl.events) formations += e.kind == EventKind::formation;
  CHECK(formations == 2);
  // the merged blob becomes the ring: a change of chi on one track
  CHECK(tl.first(EventKind::topology_change) == doctest::Approx(0.3));

  std::ostringstream out;
  write_timeline_jsonl(tl, out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == long(seq.size() + tl.events.size()));
  CHECK(text.find("\"kind\":\"merge\"") != std::string::npos);
}

TEST_CASE("empty start then two bubbles gives one formation time") {
  const Field3D empty = marked(20, [](double, double, double) { return false; });
  Field3D two = marked(20, [](double i, double j, double k) { return ball(5, 10, 10, 3)(i, j, k) || ball(15, 10, 10, 3)(i, j, k); });
  two.time = 0.5;
  const auto tl = build_timeline({empty, two}, 1e-6, 1);
  REQUIRE(tl.events.size() == 2);
  for (const auto& e : tl.events) {
    CHECK(e.kind == EventKind::formation);
    CHECK(e.t == 0.5);
  }
}
