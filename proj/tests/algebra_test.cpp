#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freeframe/element.hpp"
#include "freeframe/io.hpp"

using namespace freeframe;

namespace {

GroupAlgebraElement random_element(SplitMix64& rng, int radius, int max_support) {
    GroupAlgebraElement x;
    std::uint64_t b = ball_size(radius);
    int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_support)));
    for (int i = 0; i < n; ++i)
        x.add_term(unrank(rng.below(b)), complexd(rng.uniform_sym(), rng.uniform_sym()));
    return x;
}

bool close(const GroupAlgebraElement& x, const GroupAlgebraElement& y, double tol) {
    GroupAlgebraElement d = x - y;
    return d.l1_norm() <= tol;
}

}  // namespace

TEST_CASE("delta pairing extracts coefficients") {
    GroupAlgebraElement x = GroupAlgebraElement::lambda(reduce("a")) +
                            GroupAlgebraElement::lambda(reduce("b"), 2.0);
    CHECK(delta_pairing(x, reduce("b")) == complexd(2.0, 0.0));
    CHECK(delta_pairing(GroupAlgebraElement::lambda(reduce("a")), Word()) == complexd{});
    for (const char* s : {"a", "bA", "aab"})
        CHECK(delta_pairing(GroupAlgebraElement::lambda(reduce(s)), reduce(s)) == complexd(1.0, 0.0));
}

TEST_CASE("convolution examples") {
    auto la = GroupAlgebraElement::lambda(reduce("a"));
    auto lA = GroupAlgebraElement::lambda(reduce("A"));
    auto lb = GroupAlgebraElement::lambda(reduce("b"));
    auto le = GroupAlgebraElement::lambda(Word());

    GroupAlgebraElement p = la * lA;
    CHECK(p.coefficient(Word()) == complexd(1.0, 0.0));
    CHECK(p.support_size() == 1);

    GroupAlgebraElement q = (la + lb) * lA;
    CHECK(q.coefficient(Word()) == complexd(1.0, 0.0));
    CHECK(q.coefficient(reduce("bA")) == complexd(1.0, 0.0));
    CHECK(q.support_size() == 2);

    SplitMix64 rng(5);
    GroupAlgebraElement x = random_element(rng, 3, 6);
    CHECK(close(x * le, x, 0.0));
}

TEST_CASE("convolution is associative and distributive") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        GroupAlgebraElement x = random_element(rng, 2, 4);
        GroupAlgebraElement y = random_element(rng, 2, 4);
        GroupAlgebraElement z = random_element(rng, 2, 4);
        CHECK(close((x * y) * z, x * (y * z), 1e-12));
        CHECK(close(x * (y + z), x * y + x * z, 1e-12));
    }
}

TEST_CASE("adjoint") {
    GroupAlgebraElement x = GroupAlgebraElement::lambda(reduce("a"), complexd(2.0, 1.0));
    GroupAlgebraElement xs = x.adjoint();
    CHECK(xs.coefficient(reduce("A")) == complexd(2.0, -1.0));

    SplitMix64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        GroupAlgebraElement u = random_element(rng, 3, 5);
        GroupAlgebraElement v = random_element(rng, 3, 5);
        CHECK(close(u.adjoint().adjoint(), u, 0.0));
        CHECK(close((u * v).adjoint(), v.adjoint() * u.adjoint(), 1e-12));
    }

    GroupAlgebraElement sa = GroupAlgebraElement::lambda(reduce("a")) +
                             GroupAlgebraElement::lambda(reduce("A"));
    CHECK(close(sa.adjoint(), sa, 0.0));
}

TEST_CASE("length components") {
    auto le = GroupAlgebraElement::lambda(Word());
    auto la = GroupAlgebraElement::lambda(reduce("a"), 2.0);
    GroupAlgebraElement x = le + la;
    CHECK(close(x.length_component(1), la, 0.0));
    CHECK(GroupAlgebraElement::lambda(reduce("a")).length_component(3).empty());
    SplitMix64 rng(31);
    GroupAlgebraElement y = random_element(rng, 3, 8);
    CHECK(y.length_component(0).coefficient(Word()) == y.coefficient(Word()));

    GroupAlgebraElement sum;
    for (int d = 0; d <= y.support_radius(); ++d) sum += y.length_component(d);
    CHECK(close(sum, y, 0.0));
}

TEST_CASE("norms and support radius") {
    GroupAlgebraElement x = GroupAlgebraElement::lambda(reduce("a")) +
                            GroupAlgebraElement::lambda(reduce("b"));
    CHECK(x.l1_norm() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(x.l2_norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(GroupAlgebraElement::lambda(reduce("ab")).support_radius() == 2);
}

TEST_CASE("drop tolerance keeps supports clean") {
    GroupAlgebraElement x;
    x.add_term(reduce("a"), 1e-20);
    CHECK(x.empty());
    x.add_term(reduce("a"), 1.0);
    x.add_term(reduce("a"), -1.0);
    CHECK(x.empty());
}

TEST_CASE("matrix level coincides with scalar at level 1") {
    SplitMix64 rng(41);
    GroupAlgebraElement x = random_element(rng, 2, 4);
    GroupAlgebraElement y = random_element(rng, 2, 4);
    MatrixLevelElement mx = MatrixLevelElement::from_scalar(x);
    MatrixLevelElement my = MatrixLevelElement::from_scalar(y);
    MatrixLevelElement prod = mx * my;
    GroupAlgebraElement sprod = x * y;
    for (const auto& [w, c] : sprod.terms())
        CHECK(std::abs(prod.coefficient(w)(0, 0) - c) <= 1e-14);
    MatrixLevelElement adj = mx.adjoint();
    GroupAlgebraElement xs = x.adjoint();
    for (const auto& [w, c] : xs.terms())
        CHECK(adj.coefficient(w)(0, 0) == c);
}

TEST_CASE("matrix level arithmetic") {
    MatrixLevelElement u(2);
    u.add_term(reduce("a"), CMat::unit(2, 0, 0));
    u.add_term(reduce("b"), CMat::unit(2, 0, 1));
    MatrixLevelElement uu = u.adjoint() * u;
    CHECK(uu.coefficient(Word())(0, 0) == complexd(1.0, 0.0));
    CHECK(uu.coefficient(Word())(1, 1) == complexd(1.0, 0.0));
    CHECK(uu.coefficient(reduce("Ab"))(0, 1) == complexd(1.0, 0.0));
    CHECK(u.support_radius() == 1);
    CHECK(CMat::identity(2).op_norm_upper() == doctest::Approx(1.0));
}

TEST_CASE("json round trip is bit exact") {
    SplitMix64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        GroupAlgebraElement x = random_element(rng, 3, 6);
        json j = json::parse(to_json(x).dump());
        GroupAlgebraElement back = scalar_element_from_json(j);
        REQUIRE(back.support_size() == x.support_size());
        for (const auto& [w, c] : x.terms()) {
            CHECK(back.coefficient(w).real() == c.real());
            CHECK(back.coefficient(w).imag() == c.imag());
        }
    }

    MatrixLevelElement u(2);
    SplitMix64 mrng(61);
    for (int t = 0; t < 4; ++t) {
        CMat m(2);
        for (int i = 0; i < 2; ++i)
            for (int j2 = 0; j2 < 2; ++j2) m(i, j2) = complexd(mrng.uniform_sym(), mrng.uniform_sym());
        u.add_term(unrank(mrng.below(ball_size(2))), m);
    }
    json j = json::parse(to_json(u).dump());
    MatrixLevelElement back = matrix_element_from_json(j);
    REQUIRE(back.level() == 2);
    for (const auto& [w, m] : u.terms())
        for (int i = 0; i < 2; ++i)
            for (int j2 = 0; j2 < 2; ++j2) CHECK(back.coefficient(w)(i, j2) == m(i, j2));
}

TEST_CASE("json input validation") {
    CHECK_THROWS_AS(scalar_element_from_json(json::parse("{}")), input_error);
    CHECK_THROWS_AS(scalar_element_from_json(json::parse(R"({"level":0,"terms":[]})")), input_error);
    CHECK_THROWS_AS(scalar_element_from_json(
                        json::parse(R"({"level":1,"terms":[{"word":"a","coeff":[1]}]})")),
                    input_error);
    CHECK_THROWS_AS(matrix_element_from_json(
                        json::parse(R"({"level":2,"terms":[{"word":"a","coeff":[[1,0]]}]})")),
                    input_error);
}
