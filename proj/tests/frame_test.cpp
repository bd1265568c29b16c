#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freeframe/frame.hpp"

using namespace freeframe;

TEST_CASE("index decomposition examples") {
    FrameIndex i1 = frame_decompose(1);
    CHECK(i1.k == 1);
    CHECK(i1.i == 1);
    CHECK(i1.p == 0);
    CHECK(i1.j == 1);

    FrameIndex i125 = frame_decompose(125);
    CHECK(i125.k == 1);
    CHECK(i125.i == 125);
    CHECK(i125.p == 24);
    CHECK(i125.j == 5);

    FrameIndex i126 = frame_decompose(126);
    CHECK(i126.k == 2);
    CHECK(i126.i == 1);
    CHECK(i126.p == 0);
    CHECK(i126.j == 1);

    CHECK(frame_boundary(1) == 125);
    CHECK(frame_boundary(2) == 5038);
    CHECK(frame_boundary(3) == 5038 + uint128(53) * 53 * 53);
    CHECK_THROWS_AS(frame_decompose(0), input_error);
}

TEST_CASE("index decomposition round trips") {
    const BlockIndexer& idx = f2_indexer();
    for (uint128 n = 1; n <= 1000000; n += 997) {
        FrameIndex d = idx.decompose(n);
        CHECK(idx.compose(d.k, d.i) == n);
        CHECK(d.i == d.p * idx.block_size(d.k) + d.j);
        CHECK(d.j >= 1);
        CHECK(d.j <= idx.block_size(d.k));
    }
    SplitMix64 rng(13);
    for (int trial = 0; trial < 10000; ++trial) {
        // random n below 2^100
        uint128 n = (uint128(rng.next() % (1ull << 36)) << 64) | rng.next();
        if (n == 0) n = 1;
        FrameIndex d = idx.decompose(n);
        CHECK(idx.compose(d.k, d.i) == n);
    }
}

TEST_CASE("block base order") {
    auto b1 = block_base_order(1);
    REQUIRE(b1.size() == 5);
    const char* expected[] = {"", "a", "b", "A", "B"};
    for (std::size_t i = 0; i < 5; ++i) CHECK(b1[i].letters() == expected[i]);
    CHECK(block_base_order(2).size() == 17);
    CHECK(block_base_order(3)[0].is_identity());
}

TEST_CASE("frame terms") {
    FrameTerm t1 = frame_term(1);
    CHECK(t1.word.is_identity());
    CHECK(t1.coefficient == 0.04);

    FrameTerm t2 = frame_term(2);
    CHECK(t2.word.letters() == "a");
    CHECK(t2.coefficient == std::exp(-1.0) / 25.0);

    FrameTerm t126 = frame_term(126);
    CHECK(t126.word.is_identity());
    CHECK(t126.coefficient == 0.0);  // zero coefficients are kept, not skipped

    // clones repeat the block base
    for (uint128 p = 0; p < 25; ++p) {
        FrameTerm t = frame_term(p * 5 + 2);
        CHECK(t.word.letters() == "a");
        CHECK(t.coefficient == t2.coefficient);
    }
}

TEST_CASE("coefficients are nonnegative and bounded by the clone weight") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        uint128 n = 1 + rng.below(150000);
        FrameIndex d = frame_decompose(n);
        FrameTerm t = frame_term(n);
        double m = static_cast<double>(f2_indexer().block_size(d.k));
        CHECK(t.coefficient >= 0.0);
        CHECK(t.coefficient <= 1.0 / (m * m) + 1e-18);
    }
}

TEST_CASE("clone convexity: a block contributes psi exactly") {
    for (int k : {1, 2}) {
        std::uint64_t m = f2_indexer().block_size(k);
        for (const auto& s : std::vector<Word>{Word(), reduce("a"), reduce("ab")}) {
            if (s.length() > k) continue;
            uint128 n = f2_indexer().boundary(k - 1) + rank(s) + 1;
            double a = frame_term(n).coefficient;
            double total = a * static_cast<double>(m) * static_cast<double>(m);
            CHECK(total == doctest::Approx(psi_symbol(k, s.length())).epsilon(1e-15));
        }
    }
}

TEST_CASE("partial sum weights") {
    Word a = reduce("a");
    CHECK(partial_sum_weight(0, a) == 0.0);
    CHECK(partial_sum_weight(125, a) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(partial_sum_weight(5038, a) ==
          doctest::Approx(std::exp(-1.0 / std::sqrt(2.0))).epsilon(1e-15));
    CHECK(partial_sum_weight(125, Word()) == 1.0);
}

TEST_CASE("partial sum weight equals the brute-force clone sum") {
    std::vector<Word> words = {Word(), reduce("a"), reduce("B"), reduce("ab")};
    for (uint128 m : std::vector<uint128>{1, 7, 63, 125, 126, 700, 2048}) {
        std::map<std::string, double> acc;
        for (uint128 n = 1; n <= m; ++n) {
            FrameTerm t = frame_term(n);
            acc[t.word.letters()] += t.coefficient;
        }
        for (const auto& s : words) {
            double direct = acc.count(s.letters()) ? acc[s.letters()] : 0.0;
            CHECK(partial_sum_weight(m, s) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("weights are monotone in m and bounded by one") {
    SplitMix64 rng(29);
    std::vector<Word> words;
    for (int len = 0; len <= 4; ++len) words.push_back(unrank(ball_size(len) - 1));
    for (const auto& s : words) {
        double prev = 0;
        for (uint128 m = 0; m <= 5038; m += 41) {
            double w = partial_sum_weight(m, s);
            CHECK(w >= prev - 1e-16);
            CHECK(w <= 1.0 + 1e-15);
            prev = w;
        }
    }
}

TEST_CASE("partial sums act coefficientwise") {
    GroupAlgebraElement la = GroupAlgebraElement::lambda(reduce("a"));
    GroupAlgebraElement r = apply_partial_sum(la, 125);
    CHECK(r.coefficient(reduce("a")) == complexd(std::exp(-1.0), 0.0));
    CHECK(apply_partial_sum(GroupAlgebraElement(), 321).empty());

    // block boundary identity against the multiplier route
    SplitMix64 rng(37);
    GroupAlgebraElement x;
    for (int t = 0; t < 5; ++t)
        x.add_term(unrank(rng.below(ball_size(3))), complexd(rng.uniform_sym(), rng.uniform_sym()));
    GroupAlgebraElement lhs = apply_partial_sum(x, frame_boundary(2));
    GroupAlgebraElement rhs = RadialMultiplier::phi_tm(1.0 / std::sqrt(2.0), 2).apply(x);
    for (const auto& [w, c] : x.terms())
        CHECK(std::abs(lhs.coefficient(w) - rhs.coefficient(w)) <= 1e-14);
}

TEST_CASE("reconstruction error certificates") {
    for (int K = 1; K <= 4; ++K) {
        NormEstimate e = reconstruction_error(GroupAlgebraElement::lambda(reduce("a")),
                                              frame_boundary(K), 2);
        double target = 1.0 - std::exp(-1.0 / std::sqrt(static_cast<double>(K)));
        CHECK(e.lower == doctest::Approx(target).epsilon(1e-12));
        CHECK(e.upper == doctest::Approx(target).epsilon(1e-12));
    }

    NormEstimate id = reconstruction_error(GroupAlgebraElement::lambda(Word()), 125, 2);
    CHECK(id.upper <= 1e-15);

    NormEstimate all = reconstruction_error(GroupAlgebraElement::lambda(reduce("ba")), 0, 2);
    CHECK(all.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(all.upper == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("coefficient sums telescope") {
    CHECK(coefficient_sum(Word(), 1) == 1.0);
    CHECK(coefficient_sum(reduce("a"), 4) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    for (int K = 1; K <= 20; ++K)
        for (const auto& s : std::vector<Word>{Word(), reduce("b"), reduce("aB")}) {
            if (K < s.length()) continue;
            CHECK(std::abs(coefficient_sum(s, K) -
                           std::exp(-s.length() / std::sqrt(static_cast<double>(K)))) <= 1e-14);
        }
    // the closed form converges to 1; the sum equals it to 1e-14 above
    CHECK(std::exp(-1.0 / std::sqrt(1e12)) >= 1.0 - 1e-6);
}

TEST_CASE("partial sum cb bounds") {
    double global = sm_cb_upper_global();
    CHECK(global > 1.0);
    CHECK(std::isfinite(global));
    SplitMix64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        uint128 m = 1 + rng.below(5038);
        double b = sm_cb_upper(m);
        CHECK(b > 1.0);
        CHECK(b <= global + 1e-12);
    }
    CHECK(sm_cb_upper(0) == 0.0);
}

TEST_CASE("subset sums") {
    // all block-1 clones of lambda_a
    std::vector<uint128> clones;
    for (uint128 p = 0; p < 25; ++p) clones.push_back(p * 5 + 2);
    GroupAlgebraElement r = subset_sum_apply(GroupAlgebraElement::lambda(reduce("a")), clones);
    CHECK(std::abs(r.coefficient(reduce("a")) - std::exp(-1.0)) <= 1e-14);

    GroupAlgebraElement empty = subset_sum_apply(GroupAlgebraElement::lambda(reduce("b")), clones);
    CHECK(empty.empty());

    MatrixLevelElement u = MatrixLevelElement::tensor(CMat::identity(2),
                                                      GroupAlgebraElement::lambda(reduce("a")));
    MatrixLevelElement mr = subset_sum_apply(u, clones);
    CHECK(std::abs(mr.coefficient(reduce("a"))(0, 0) - std::exp(-1.0)) <= 1e-14);
    CHECK(mr.coefficient(reduce("a"))(0, 1) == complexd{});
}

TEST_CASE("lebesgue constants") {
    // closed form for the first one: 1/3 + 2 sqrt(3)/pi
    const double pi = 3.14159265358979323846;
    double l1_exact = 1.0 / 3.0 + 2.0 * std::sqrt(3.0) / pi;
    LebesgueEstimate l1 = lebesgue_constant(1);
    CHECK(l1.converged);
    CHECK(l1.value == doctest::Approx(l1_exact).epsilon(1e-9));

    CHECK(lebesgue_constant(2).value == doctest::Approx(1.642188).epsilon(1e-4));
    CHECK(lebesgue_constant(3).value == doctest::Approx(1.778322).epsilon(1e-4));

    double l8 = lebesgue_constant(8).value;
    CHECK(l8 > l1.value);
    double drift = l8 - (4.0 / (pi * pi)) * std::log(8.0);
    CHECK(drift > 1.0);
    CHECK(drift < 1.4);

    CHECK(lebesgue_constant(0).value == doctest::Approx(1.0).epsilon(1e-12));
}
