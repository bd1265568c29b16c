#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freeframe/multiplier.hpp"
#include "freeframe/norms.hpp"

using namespace freeframe;

TEST_CASE("psi symbol values") {
    CHECK(psi_symbol(1, 1) == std::exp(-1.0));
    CHECK(psi_symbol(1, 0) == 1.0);
    CHECK(psi_symbol(2, 2) == doctest::Approx(std::exp(-std::sqrt(2.0))).epsilon(1e-15));
    CHECK(psi_symbol(3, 5) == 0.0);
    CHECK(psi_symbol(2, 0) == 0.0);
    // positive below the cutoff
    for (int k = 2; k <= 10; ++k)
        for (int d = 1; d <= k; ++d) CHECK(psi_symbol(k, d) > 0.0);
}

TEST_CASE("multiplier application") {
    auto la = GroupAlgebraElement::lambda(reduce("a"));
    auto le = GroupAlgebraElement::lambda(Word());

    GroupAlgebraElement r = RadialMultiplier::phi(1.0).apply(la);
    CHECK(r.coefficient(reduce("a")) == complexd(std::exp(-1.0), 0.0));

    GroupAlgebraElement x = le + GroupAlgebraElement::lambda(reduce("a"), 2.0);
    GroupAlgebraElement band = RadialMultiplier::band(1).apply(x);
    CHECK(band.coefficient(Word()) == complexd{});
    CHECK(band.coefficient(reduce("a")) == complexd(2.0, 0.0));

    CHECK(RadialMultiplier::psi(2).apply(le).empty());

    for (double t : {0.1, 1.0, 3.0}) {
        GroupAlgebraElement u = RadialMultiplier::phi(t).apply(le);
        CHECK(u.coefficient(Word()) == complexd(1.0, 0.0));
    }
}

TEST_CASE("phi symbol lies in (0,1] and decreases") {
    RadialMultiplier m = RadialMultiplier::phi(0.7);
    double prev = 2.0;
    for (int d = 0; d <= 40; ++d) {
        double s = m.symbol(d);
        CHECK(s > 0.0);
        CHECK(s <= 1.0);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("tail closed form matches direct summation") {
    // direct oracle: sum d x^d from large d downward, cut off relative to
    // the leading term
    auto direct = [](double t, int m) {
        double x = std::exp(-t);
        double lead = (m + 1) * std::pow(x, m + 1);
        int top = m + 1;
        while (top * std::pow(x, top) > lead * 1e-18 && top < m + 100000) ++top;
        double s = 0;
        for (int d = top; d >= m + 1; --d) s += d * std::pow(x, d);
        return s;
    };
    CHECK(tail_sum_closed_form(1.0, 1) == doctest::Approx(direct(1.0, 1)).epsilon(1e-12));
    for (double t : {0.2, 0.9, 2.5})
        for (int m : {0, 3, 10, 31})
            CHECK(tail_sum_closed_form(t, m) == doctest::Approx(direct(t, m)).epsilon(1e-12));

    CHECK(tail_sum_closed_form(50.0, 1) < 1e-20);
    CHECK_THROWS_AS(tail_sum_closed_form(0.0, 1), input_error);
    CHECK_THROWS_AS(tail_sum_closed_form(-1.0, 1), input_error);

    double prev = tail_sum_closed_form(1.0, 0);
    for (int m = 1; m <= 50; ++m) {
        double cur = tail_sum_closed_form(1.0, m);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("cb defect bound") {
    CHECK(cb_defect_upper(1.0, 3) == 2.0 * tail_sum_closed_form(1.0, 3));
    double prev = cb_defect_upper(1.0 / std::sqrt(10.0), 10);
    for (int k = 11; k <= 100; ++k) {
        double cur = cb_defect_upper(1.0 / std::sqrt(static_cast<double>(k)), k);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(cb_defect_upper(1.0 / std::sqrt(400.0), 400) < 1e-4);
}

TEST_CASE("schedule sup bound") {
    double b64 = schedule_sup_bound(64);
    CHECK(b64 > 1.0);
    CHECK(std::isfinite(b64));
    CHECK(std::abs(schedule_sup_bound(128) - b64) <= 1e-12);

    // independent summation oracle per k
    double best = 0;
    for (int k = 1; k <= 64; ++k) {
        double t = 1.0 / std::sqrt(static_cast<double>(k));
        double x = std::exp(-t);
        int top = k + 1;
        while (top * std::pow(x, top) > 1e-30 && top < 100000) ++top;
        double s = 0;
        for (int d = top; d >= k + 1; --d) s += d * std::pow(x, d);
        best = std::max(best, 2.0 * s);
    }
    CHECK(b64 == doctest::Approx(1.0 + best).epsilon(1e-12));
}

TEST_CASE("telescoping identity") {
    CHECK(telescope_check(1, 0) == 1.0);
    CHECK(telescope_check(5, 3) == doctest::Approx(std::exp(-3.0 / std::sqrt(5.0))).epsilon(1e-15));
    CHECK(telescope_check(5, 6) == 0.0);
    for (int K = 1; K <= 30; ++K)
        for (int d = 0; d <= 30; ++d) {
            double target = d <= K ? std::exp(-d / std::sqrt(static_cast<double>(K))) : 0.0;
            CHECK(std::abs(telescope_check(K, d) - target) <= 1e-14);
        }
}

TEST_CASE("sampled defect lower bounds stay below the certified bound") {
    for (auto [t, m] : {std::pair{1.0, 1}, std::pair{1.0, 3}}) {
        CoefficientMap map = [t = t, m = m](const Word& w) {
            return w.length() > m ? std::exp(-t * w.length()) : 0.0;
        };
        double lo = map_norm_lower(map, 2, 1, 4, 1e-6, 99, 800);
        CHECK(lo <= cb_defect_upper(t, m));
    }
}
