#include <cmath>
#include <set>

#include "doctest.h"
#include "zistats/random.hpp"

using namespace zistats;

TEST_CASE("streams are pure functions of their seed") {
  RandomStream a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  RandomStream c(124);
  CHECK(RandomStream(123).next_u64() != c.next_u64());
}

TEST_CASE("child streams are independent of parent consumption") {
  RandomStream parent(7);
  const RandomStream before = parent;
  RandomStream child_a = before.child(5);
  parent.next_u64();
  parent.next_u64();
  RandomStream child_b = parent.child(5);
  // child derivation depends only on the key, not on how much the
  // parent has already produced
  CHECK(child_a.next_u64() == child_b.next_u64());
}

TEST_CASE("distinct children and parent do not collide") {
  RandomStream parent(99);
  std::set<std::uint64_t> firsts;
  firsts.insert(RandomStream(99).next_u64());
  for (std::uint64_t i = 0; i < 1000; ++i)
    firsts.insert(parent.child(i).next_u64());
  CHECK(firsts.size() == 1001);
}

TEST_CASE("uniform output has the right range and mean") {
  RandomStream s(2024);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 5 sigma band around 1/2 with sd = 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}
