#include <doctest.h>

#include "busyq/error.hpp"
#include "busyq/oracle.hpp"
#include "helpers.hpp"

using busyq::Error;
using busyq::Model;
using busyq::Rational;

TEST_CASE("DP distribution at small N") {
  CHECK(busyq::busy_dist_bruteforce(Model::from_rate(1, Rational(3), Rational(7))).s ==
        std::vector<Rational>{Rational(1)});
  CHECK(busyq::busy_dist_bruteforce(Model::from_rate(2, Rational(1), Rational(1))).s ==
        std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(busyq::busy_dist_bruteforce(Model::from_rate(3, Rational(1), Rational(1))).s ==
        std::vector<Rational>{Rational(1, 3), Rational(1, 6), Rational(1, 2)});
}

TEST_CASE("cap guards the DP and the enumeration") {
  Model big = Model::from_rate(17, Rational(1), Rational(1));
  CHECK_THROWS_AS(busyq::busy_dist_bruteforce(big), Error);
  CHECK_THROWS_AS(busyq::busy_dist_enumeration(big), Error);
  CHECK(busyq::busy_dist_bruteforce(big, 20).order() == 17);
}

TEST_CASE("DP equals full path enumeration") {
  for (int n = 1; n <= 12; ++n) {
    Model m = Model::from_rate(n, Rational(1), Rational(1));
    CHECK(busyq::busy_dist_bruteforce(m).s == busyq::busy_dist_enumeration(m).s);
  }
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Model m = testutil::random_model(9, seed);
    CHECK(busyq::busy_dist_bruteforce(m).s == busyq::busy_dist_enumeration(m).s);
  }
}

TEST_CASE("DP distribution sums to one") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Model m = testutil::random_model(10, seed + 17);
    CHECK(busyq::busy_dist_bruteforce(m).sum() == Rational(1));
  }
}

TEST_CASE("hitting probabilities p_n(i)") {
  Model m = Model::from_rate(3, Rational(1), Rational(1));
  CHECK(busyq::p_n_i_bruteforce(m, 1, 0) == Rational(1));
  CHECK(busyq::p_n_i_bruteforce(m, 1, 1) == Rational(0));
  CHECK(busyq::p_n_i_bruteforce(m, 2, 0) == Rational(1) - m.rho(1));
  // single trajectory up, right, up from (0,2): (2/3)*(1/2)*(1/2)
  CHECK(busyq::p_n_i_bruteforce(m, 3, 1) == Rational(1, 6));
  CHECK(busyq::p_n_i_bruteforce(m, 3, 0) == Rational(1, 3));
  for (int n = 2; n <= 3; ++n) {
    CHECK(busyq::p_n_i_bruteforce(m, n, n - 1) == Rational(0));
    CHECK(busyq::p_n_i_bruteforce(m, n, n) == Rational(0));
  }
  CHECK_THROWS_AS(busyq::p_n_i_bruteforce(m, 4, 0), Error);
  CHECK_THROWS_AS(busyq::p_n_i_bruteforce(m, 2, 3), Error);
}

TEST_CASE("phase-by-phase probability conservation") {
  // Mass entering phase n plus mass already absorbed equals one.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Model m = testutil::random_model(10, seed * 3 + 1);
    auto s = busyq::busy_dist_bruteforce(m).s;
    for (int n = 1; n <= m.n(); ++n) {
      Rational total(0);
      for (int i = 0; i <= n; ++i) total += busyq::p_n_i_bruteforce(m, n, i);
      for (int k = 1; k < n; ++k) total += s[k - 1];
      CHECK(total == Rational(1));
    }
  }
}

TEST_CASE("s_n recovered from the hitting probabilities") {
  // s_n = sum_i p_n(i) rho_n^(n-i) for n >= 2.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Model m = testutil::random_model(10, seed * 11 + 2);
    auto s = busyq::busy_dist_bruteforce(m).s;
    for (int n = 2; n <= m.n(); ++n) {
      Rational acc(0);
      for (int i = 0; i <= n - 2; ++i)
        acc += busyq::p_n_i_bruteforce(m, n, i) * m.rho(n).pow(n - i);
      CHECK(acc == s[n - 1]);
    }
  }
}
