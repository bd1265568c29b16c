#pragma once

#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "freeframe/basis.hpp"
#include "freeframe/frame.hpp"

namespace freeframe {

// The verification suite: ten numbered checks covering combinatorics,
// telescoping, tail bounds, block boundaries, reconstruction, cb bounds,
// norm certification, non-unconditionality, the basis-space constructions,
// and determinism. Every tolerance is pinned here. Report text contains no
// timings, so identical seeds give byte-identical reports; wall-clock limits
// still feed the pass/fail booleans where a check carries a budget.

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CriterionResult> results;
    std::string text;
    bool all_pass = false;
};

namespace verify_detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
}

inline GroupAlgebraElement random_sparse(SplitMix64& rng, int max_radius, int max_support) {
    GroupAlgebraElement x;
    int nsupp = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_support)));
    std::uint64_t b = ball_size(max_radius);
    for (int t = 0; t < nsupp; ++t)
        x.add_term(unrank(rng.below(b)), complexd(rng.uniform_sym(), rng.uniform_sym()));
    return x;
}

inline CriterionResult criterion_combinatorics() {
    auto t0 = clock::now();
    CriterionResult r{1, "combinatorics", true, ""};
    for (int d = 1; d <= 8; ++d)
        if (sphere(d).size() != sphere_size(d)) r.pass = false;
    for (int k = 0; k <= 8; ++k)
        if (ball(k).size() != ball_size(k)) r.pass = false;
    bool in_time = seconds_since(t0) < 1.0;
    r.pass = r.pass && in_time;
    r.detail = "sphere(1..8) and ball(0..8) sizes match 4*3^(d-1) and 2*3^k-1";
    return r;
}

inline CriterionResult criterion_telescoping() {
    CriterionResult r{2, "telescoping", true, ""};
    double worst = 0;
    for (int K = 1; K <= 30; ++K)
        for (int d = 0; d <= 30; ++d) {
            double target = d <= K ? std::exp(-d / std::sqrt(static_cast<double>(K))) : 0.0;
            worst = std::max(worst, std::abs(telescope_check(K, d) - target));
        }
    r.pass = worst <= 1e-14;
    r.detail = "max |sum_k psi_k(d) - exp(-d/sqrt(K))| over K,d <= 30: " + format_double(worst);
    return r;
}

inline CriterionResult criterion_tail_bound() {
    CriterionResult r{3, "tail-bound", true, ""};
    double worst_rel = 0;
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        double x = std::exp(-t);
        for (int m = 0; m <= 50; ++m) {
            // direct summation, small terms first; extend until the remaining
            // terms are negligible relative to the leading one
            double lead = (m + 1) * std::pow(x, m + 1);
            int top = m + 1;
            while (top * std::pow(x, top) > lead * 1e-18 && top < m + 100000) ++top;
            double direct = 0;
            for (int d = top; d >= m + 1; --d) direct += d * std::pow(x, d);
            double rel = std::abs(tail_sum_closed_form(t, m) - direct) / direct;
            worst_rel = std::max(worst_rel, rel);
        }
    }
    bool monotone = true;
    double prev = cb_defect_upper(1.0 / std::sqrt(10.0), 10);
    for (int k = 11; k <= 200; ++k) {
        double cur = cb_defect_upper(1.0 / std::sqrt(static_cast<double>(k)), k);
        if (cur >= prev) monotone = false;
        prev = cur;
    }
    r.pass = worst_rel <= 1e-12 && monotone;
    r.detail = "closed form vs direct sum, worst relative error " + format_double(worst_rel) +
               (monotone ? "; defect decreasing for k >= 10" : "; defect NOT monotone");
    return r;
}

inline CriterionResult criterion_block_boundary(std::uint64_t seed, unsigned threads) {
    CriterionResult r{4, "block-boundary", true, ""};
    std::vector<double> worst(100, 0.0);
    parallel_for(100, threads, [&](std::size_t i) {
        SplitMix64 rng(seed ^ (0xB10CB0ull + i));
        GroupAlgebraElement x = random_sparse(rng, 3, 6);
        struct Case {
            uint128 m;
            RadialMultiplier mult;
        };
        const Case cases[] = {{frame_boundary(1), RadialMultiplier::phi_tm(1.0, 1)},
                              {frame_boundary(2), RadialMultiplier::phi_tm(1.0 / std::sqrt(2.0), 2)}};
        double w = 0;
        for (const auto& cs : cases) {
            GroupAlgebraElement lhs = apply_partial_sum(x, cs.m);
            GroupAlgebraElement rhs = cs.mult.apply(x);
            for (const auto& [word, c] : x.terms())
                w = std::max(w, std::abs(lhs.coefficient(word) - rhs.coefficient(word)));
        }
        worst[i] = w;
    });
    double w = 0;
    for (double v : worst) w = std::max(w, v);
    r.pass = w <= 1e-14;
    r.detail = "S_125 vs Phi_{1,1} and S_5038 vs Phi_{1/sqrt2,2} on 100 random elements, worst " +
               format_double(w);
    return r;
}

inline CriterionResult criterion_reconstruction(std::uint64_t seed) {
    CriterionResult r{5, "frame-reconstruction", true, ""};
    double worst_err = 0, worst_sum = 0;
    for (const auto& s : ball(3)) {
        int len = s.length();
        for (int K = std::max(1, len); K <= 6; ++K) {
            double target = 1.0 - std::exp(-len / std::sqrt(static_cast<double>(K)));
            NormEstimate e = reconstruction_error(GroupAlgebraElement::lambda(s), frame_boundary(K),
                                                  2, 1e-10, seed, 2000);
            worst_err = std::max({worst_err, std::abs(e.lower - target), std::abs(e.upper - target)});
            double cs = coefficient_sum(s, K);
            worst_sum = std::max(worst_sum, std::abs(cs - std::exp(-len / std::sqrt(static_cast<double>(K)))));
        }
    }
    bool exact_identity = coefficient_sum(Word(), 1) == 1.0;
    r.pass = worst_err <= 1e-10 && worst_sum <= 1e-14 && exact_identity;
    r.detail = "boundary errors off by " + format_double(worst_err) + ", coefficient sums by " +
               format_double(worst_sum) + (exact_identity ? "; sum(e,1) == 1 exact" : "; sum(e,1) != 1");
    return r;
}

inline CriterionResult criterion_cb_bounds(std::uint64_t seed, unsigned threads) {
    auto t0 = clock::now();
    CriterionResult r{6, "cb-bound-consistency", true, ""};
    std::vector<uint128> ms = {125, frame_boundary(2)};
    SplitMix64 rng(seed ^ 0x5038ull);
    while (ms.size() < 50) ms.push_back(1 + rng.below(5038));

    std::vector<int> ok(ms.size(), 1);
    std::vector<double> margin(ms.size(), 0.0);
    parallel_for(ms.size(), threads, [&](std::size_t idx) {
        uint128 m = ms[idx];
        int level = idx % 2 == 0 ? 1 : 2;
        CoefficientMap map = [m](const Word& w) { return partial_sum_weight(m, w); };
        double lo = map_norm_lower(map, level, 1, 6, 1e-6, seed ^ (idx * 7919), 1500);
        double bound = sm_cb_upper(m);
        ok[idx] = lo <= bound;
        margin[idx] = bound - lo;
    });
    bool sm_ok = true;
    double min_margin = 1e300;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        sm_ok = sm_ok && ok[i];
        min_margin = std::min(min_margin, margin[i]);
    }

    bool defect_ok = true;
    const std::pair<double, int> pairs[] = {
        {1.0, 1}, {1.0, 3}, {1.0 / std::sqrt(2.0), 2}, {1.0 / std::sqrt(5.0), 5}, {0.5, 4}};
    for (const auto& [t, m] : pairs) {
        CoefficientMap map = [t, m](const Word& w) {
            return w.length() > m ? std::exp(-t * w.length()) : 0.0;
        };
        double lo = map_norm_lower(map, 2, 1, 6, 1e-6, seed ^ 0xDEFEC7ull, 1500);
        if (lo > cb_defect_upper(t, m)) defect_ok = false;
    }
    bool in_time = seconds_since(t0) < 300.0;
    r.pass = sm_ok && defect_ok && in_time;
    r.detail = std::string(sm_ok ? "S_m samples below sm_cb_upper (min margin " : "S_m sample EXCEEDS bound (min margin ") +
               format_double(min_margin) + ")" + (defect_ok ? "; defect samples below 2*tail" : "; defect sample EXCEEDS bound");
    return r;
}

inline CriterionResult criterion_norms(std::uint64_t seed) {
    CriterionResult r{7, "norm-certification", true, ""};
    const double two_sqrt3 = 2.0 * std::sqrt(3.0);

    auto t0 = clock::now();
    GroupAlgebraElement gen;
    for (const auto& s : sphere(1)) gen.add_term(s, 1.0);
    NormEstimate e = norm_interval(gen, 8, 1e-8, seed, 5000);
    bool gen_time = seconds_since(t0) < 60.0;

    t0 = clock::now();
    GroupAlgebraElement axis;
    axis.add_term(Word::parse("a"), 1.0);
    axis.add_term(Word::parse("A"), 1.0);
    double axis_lower = norm_lower(axis, 10, 1e-8, seed, 5000);
    bool axis_time = seconds_since(t0) < 60.0;

    bool lower_ok = e.lower >= 3.39;
    bool upper_ok = std::abs(e.upper - 4.0) <= 1e-12;
    bool contains = e.lower <= two_sqrt3 && two_sqrt3 <= e.upper;
    bool gap_ok = (two_sqrt3 - e.lower) / two_sqrt3 <= 0.02;
    bool axis_ok = axis_lower >= 1.98;
    r.pass = lower_ok && upper_ok && contains && gap_ok && axis_ok && gen_time && axis_time;
    r.detail = "generator sum at R=8: [" + format_double(e.lower) + ", " + format_double(e.upper) +
               "] vs target lower>=3.39 and gap<=2% of " + format_double(two_sqrt3) +
               "; axis lower at R=10: " + format_double(axis_lower) + " (>=1.98 " +
               (axis_ok ? "ok" : "FAIL") + ")";
    return r;
}

inline CriterionResult criterion_lebesgue() {
    CriterionResult r{8, "non-unconditionality", true, ""};
    const double pi = 3.14159265358979323846;
    auto L = [](int K) { return lebesgue_constant(K).value; };
    double l1 = L(1), l2 = L(2), l3 = L(3);
    bool classical = std::abs(l1 - 1.435991) <= 1e-4 && std::abs(l2 - 1.642188) <= 1e-4 &&
                     std::abs(l3 - 1.778322) <= 1e-4;
    double l8 = L(8), l64 = L(64);
    bool growth = l64 > l8 && l8 > l1;
    bool window = true;
    for (int K : {8, 16, 32, 64}) {
        double diff = L(K) - (4.0 / (pi * pi)) * std::log(static_cast<double>(K));
        if (diff < 1.0 || diff > 1.4) window = false;
    }
    r.pass = classical && growth && window;
    r.detail = "L_1=" + format_double(l1) + " L_2=" + format_double(l2) + " L_3=" + format_double(l3) +
               "; growth L_64>L_8>L_1 " + (growth ? "ok" : "FAIL") +
               "; L_K-(4/pi^2)ln K within [1.0,1.4] " + (window ? "ok" : "FAIL");
    return r;
}

inline CriterionResult criterion_constructions(std::uint64_t seed) {
    CriterionResult r{9, "basis-constructions", true, ""};
    std::string fails;

    // (N1) singleton equality, bit-for-bit.
    {
        SplitMix64 rng(seed ^ 0x9A1ull);
        for (uint128 i : std::vector<uint128>{1, 5, 130}) {
            CMat u(2);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) u(a, b) = complexd(rng.uniform_sym(), rng.uniform_sym());
            CoefficientSequence cs;
            cs.level = 2;
            cs.entries.emplace(i, u);
            NormEstimate t = triple_norm(cs, 2, 1e-8, seed, 2000);
            NormEstimate direct = matrix_level_norm(
                MatrixLevelElement::tensor(u, GroupAlgebraElement::lambda(frame_term(i).word)), 2,
                1e-8, seed, 2000);
            if (t.lower != direct.lower || t.upper != direct.upper) fails += " N1";
        }
    }

    // (N2) prefix monotonicity on 100 random sequences.
    {
        SplitMix64 rng(seed ^ 0x9A2ull);
        for (int trial = 0; trial < 100; ++trial) {
            int level = 1 + static_cast<int>(rng.below(2));
            CoefficientSequence full;
            full.level = level;
            int nsupp = 2 + static_cast<int>(rng.below(3));
            for (int t = 0; t < nsupp; ++t) {
                CMat m(level);
                for (int a = 0; a < level; ++a)
                    for (int b = 0; b < level; ++b) m(a, b) = complexd(rng.uniform_sym(), rng.uniform_sym());
                full.entries.emplace(1 + rng.below(200), m);
            }
            CoefficientSequence prefix;
            prefix.level = level;
            std::size_t keep = 1 + rng.below(full.entries.size());
            for (const auto& [i, m] : full.entries) {
                if (keep == 0) break;
                prefix.entries.emplace(i, m);
                --keep;
            }
            NormEstimate np = triple_norm(prefix, 2, 1e-6, seed, 1200);
            NormEstimate nf = triple_norm(full, 2, 1e-6, seed, 1200);
            if (np.lower > nf.upper + 1e-12) {
                fails += " N2";
                break;
            }
        }
    }

    // QT residual at block boundaries.
    {
        GroupAlgebraElement la = GroupAlgebraElement::lambda(Word::parse("a"));
        double prev = 2.0;
        for (int K = 1; K <= 5; ++K) {
            double res = qt_identity_check(la, frame_boundary(K));
            double target = 1.0 - std::exp(-1.0 / std::sqrt(static_cast<double>(K)));
            if (std::abs(res - target) > 1e-12) fails += " QT";
            if (res >= prev) fails += " QTmono";
            prev = res;
        }
    }

    // Auerbach systems on sup-norm spaces, d <= 4.
    {
        auto sup_space = [](std::size_t D) {
            NormedSpace sp;
            sp.dim = D;
            sp.norm = [](const std::vector<double>& v) {
                double m = 0;
                for (double e : v) m = std::max(m, std::abs(e));
                return m;
            };
            for (std::uint64_t mask = 0; mask < (1ull << D); ++mask) {
                std::vector<double> ep(D);
                for (std::size_t t = 0; t < D; ++t) ep[t] = (mask >> t) & 1 ? 1.0 : -1.0;
                sp.extreme_points.push_back(std::move(ep));
            }
            return sp;
        };
        SplitMix64 rng(seed ^ 0x9A4ull);
        auto run_case = [&](std::size_t D, int d) {
            NormedSpace sp = sup_space(D);
            std::vector<std::vector<double>> basis;
            if (d == static_cast<int>(D) && d == 3) {
                for (int j = 0; j < d; ++j) {
                    std::vector<double> e(D, 0.0);
                    e[static_cast<std::size_t>(j)] = 1.0;
                    basis.push_back(std::move(e));
                }
            } else {
                for (int j = 0; j < d; ++j) {
                    std::vector<double> v(D);
                    for (auto& e : v) e = rng.uniform_sym();
                    basis.push_back(std::move(v));
                }
            }
            AuerbachSystem sys = auerbach(sp, basis, 0.05, seed, 2000);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double v = sys.pair(static_cast<std::size_t>(a), sys.vectors[static_cast<std::size_t>(b)]);
                    if (std::abs(v - (a == b ? 1.0 : 0.0)) > 1e-10) fails += " AUbio";
                }
            if (sys.achieved_eps > 0.05) fails += " AUdual";
        };
        run_case(3, 3);
        run_case(3, 2);
        run_case(4, 3);
        run_case(4, 4);
    }

    // Generic cloning reproduces the concrete frame exactly.
    {
        BlockMapSpec<Word> spec = f2_block_map_spec(3);
        BlockIndexer idx = spec.indexer();
        for (uint128 n = 1; n <= 10000; ++n) {
            auto g = generic_frame_term(spec, idx, n);
            FrameTerm t = frame_term(n);
            if (!(g.pair->y == t.word) || g.f_coeff != t.coefficient || g.x_scale != 1.0) {
                fails += " GEN";
                break;
            }
        }
    }

    r.pass = fails.empty();
    r.detail = fails.empty() ? "N1 exact, N2 on 100 sequences, QT residuals, Auerbach d<=4, generic cloning"
                             : "failed:" + fails;
    return r;
}

inline void run_criteria(std::uint64_t seed, unsigned threads, std::vector<CriterionResult>& out) {
    out.push_back(criterion_combinatorics());
    out.push_back(criterion_telescoping());
    out.push_back(criterion_tail_bound());
    out.push_back(criterion_block_boundary(seed, threads));
    out.push_back(criterion_reconstruction(seed));
    out.push_back(criterion_cb_bounds(seed, threads));
    out.push_back(criterion_norms(seed));
    out.push_back(criterion_lebesgue());
    out.push_back(criterion_constructions(seed));
}

inline std::string render(const std::vector<CriterionResult>& rs) {
    std::ostringstream os;
    for (const auto& r : rs) {
        os << '[' << (r.id < 10 ? " " : "") << r.id << "] " << (r.pass ? "PASS" : "FAIL") << ' '
           << r.name << ": " << r.detail << '\n';
    }
    return os.str();
}

}  // namespace verify_detail

/// Runs the whole suite. The determinism check (criterion 10) re-runs
/// criteria 1-9 with the same seed and compares the rendered reports byte
/// for byte.
inline VerificationReport run_verification(std::uint64_t seed = kDefaultSeed, unsigned threads = 1) {
    using namespace verify_detail;
    VerificationReport rep;
    run_criteria(seed, threads, rep.results);
    std::string first = render(rep.results);

    std::vector<CriterionResult> second;
    run_criteria(seed, threads, second);
    bool identical = first == render(second);
    rep.results.push_back({10, "determinism", identical,
                           identical ? "two runs with the same seed render identical reports"
                                     : "reports differ between identical runs"});

    rep.all_pass = true;
    for (const auto& r : rep.results) rep.all_pass = rep.all_pass && r.pass;
    std::ostringstream os;
    os << render(rep.results) << "RESULT: " << (rep.all_pass ? "PASS" : "FAIL") << " (";
    int n = 0;
    for (const auto& r : rep.results) n += r.pass ? 1 : 0;
    os << n << "/" << rep.results.size() << " criteria passed)\n";
    rep.text = os.str();
    return rep;
}

}  // namespace freeframe
