#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "freeframe/multiplier.hpp"
#include "freeframe/norms.hpp"

namespace freeframe {

/// Decomposition of a frame index n into (block k, within-block index i,
/// clone round p, base index j): n = sum_{r<k} m_r^3 + i and i = p*m_k + j
/// with 1 <= j <= m_k, 0 <= p <= m_k^2 - 1.
struct FrameIndex {
    uint128 n = 0;
    int k = 0;
    uint128 i = 0;
    uint128 p = 0;
    std::uint64_t j = 0;
};

/// Block-cloned index arithmetic for arbitrary block sizes m(1), m(2), ...
/// Block k holds m(k)^3 consecutive indices (m(k)^2 clone rounds of the
/// m(k) base terms). Prefix sums are tracked in 128-bit arithmetic and the
/// block list is truncated where they would overflow.
class BlockIndexer {
public:
    explicit BlockIndexer(std::vector<std::uint64_t> sizes) : sizes_(std::move(sizes)) {
        constexpr uint128 kMax = ~uint128{0};
        prefix_.push_back(0);
        for (std::uint64_t m : sizes_) {
            if (m == 0) throw input_error("block sizes must be positive");
            uint128 cube = uint128(m) * m * m;
            if (prefix_.back() > kMax - cube) break;  // cap at the last representable block
            prefix_.push_back(prefix_.back() + cube);
        }
        sizes_.resize(prefix_.size() - 1);
    }

    int max_block() const { return static_cast<int>(sizes_.size()); }

    std::uint64_t block_size(int k) const {
        if (k < 1 || k > max_block()) throw capacity_error("block index out of range");
        return sizes_[static_cast<std::size_t>(k - 1)];
    }

    /// Total number of indices in blocks 1..K (boundary(0) = 0).
    uint128 boundary(int K) const {
        if (K < 0 || K > max_block()) throw capacity_error("block index out of range");
        return prefix_[static_cast<std::size_t>(K)];
    }

    FrameIndex decompose(uint128 n) const {
        if (n == 0) throw input_error("frame indices start at 1");
        if (n > prefix_.back()) throw capacity_error("frame index beyond block cap");
        int k = 1;
        while (n > prefix_[static_cast<std::size_t>(k)]) ++k;
        FrameIndex idx;
        idx.n = n;
        idx.k = k;
        idx.i = n - prefix_[static_cast<std::size_t>(k - 1)];
        std::uint64_t m = block_size(k);
        idx.p = (idx.i - 1) / m;
        idx.j = static_cast<std::uint64_t>(idx.i - idx.p * m);
        return idx;
    }

    uint128 compose(int k, uint128 i) const {
        std::uint64_t m = block_size(k);
        if (i == 0 || i > uint128(m) * m * m) throw input_error("within-block index out of range");
        return boundary(k - 1) + i;
    }

private:
    std::vector<std::uint64_t> sizes_;
    std::vector<uint128> prefix_;
};

/// Indexer for the free-group frame: block sizes m_k = 2*3^k - 1, k <= 26.
inline const BlockIndexer& f2_indexer() {
    static const BlockIndexer idx = [] {
        std::vector<std::uint64_t> sizes;
        for (int k = 1; k <= kMaxBlock; ++k) sizes.push_back(ball_size(k));
        return BlockIndexer(std::move(sizes));
    }();
    return idx;
}

inline uint128 frame_boundary(int K) { return f2_indexer().boundary(K); }
inline FrameIndex frame_decompose(uint128 n) { return f2_indexer().decompose(n); }

/// Base order of block k: ball(k-1) then sphere(k), both in canonical word
/// order - which is exactly ball(k) in canonical order. For k = 1 this is
/// [e, a, b, A, B].
inline std::vector<Word> block_base_order(int k, int radius_cap = kDefaultRadiusCap) {
    if (k < 1) throw input_error("block index must be >= 1");
    return ball(k, radius_cap);
}

/// One frame pair (x_n, f_n) = (lambda_word, coefficient * delta_word).
struct FrameTerm {
    Word word;
    double coefficient = 0;
};

inline FrameTerm frame_term(uint128 n) {
    FrameIndex idx = frame_decompose(n);
    FrameTerm t;
    t.word = unrank(idx.j - 1);
    double m = static_cast<double>(f2_indexer().block_size(idx.k));
    t.coefficient = psi_symbol(idx.k, t.word.length()) / (m * m);
    return t;
}

/// Cumulative frame weight of word s after the first m terms:
/// completed blocks contribute the telescoped value exp(-|s|/sqrt(k-1)),
/// the current block contributes (p + [rank(s)+1 <= j]) * psi_k(|s|)/m_k^2.
inline double partial_sum_weight(uint128 m, const Word& s) {
    if (m == 0) return 0.0;
    FrameIndex idx = f2_indexer().decompose(m);
    int k = idx.k;
    int d = s.length();
    double completed = 0.0;
    if (k >= 2 && d <= k - 1) completed = std::exp(-d / std::sqrt(static_cast<double>(k - 1)));
    double psi = psi_symbol(k, d);
    if (psi == 0.0) return completed;
    std::uint64_t m_k = f2_indexer().block_size(k);
    uint128 numer = idx.p + (rank(s) + 1 <= idx.j ? 1 : 0);
    uint128 msq = uint128(m_k) * m_k;
    if (numer == msq)  // block fully covered: telescoped value, exact
        return std::exp(-d / std::sqrt(static_cast<double>(k)));
    return completed + (static_cast<double>(numer) / static_cast<double>(msq)) * psi;
}

/// Weight profile of the m-th partial sum S_m.
struct PartialSumWeights {
    uint128 m = 0;
    double operator()(const Word& s) const { return partial_sum_weight(m, s); }
};

inline GroupAlgebraElement apply_partial_sum(const GroupAlgebraElement& x, uint128 m) {
    GroupAlgebraElement r;
    for (const auto& [w, c] : x.terms()) r.add_term(w, partial_sum_weight(m, w) * c);
    return r;
}

inline MatrixLevelElement apply_partial_sum(const MatrixLevelElement& u, uint128 m) {
    MatrixLevelElement r(u.level());
    for (const auto& [w, mat] : u.terms()) {
        CMat mc = mat;
        mc *= partial_sum_weight(m, w);
        r.add_term(w, mc);
    }
    return r;
}

/// Certified interval for ||x - S_m(x)||. The upper bound is the smaller of
/// the weighted l1 bound sum |x_s| (1 - w_m(s)) and the banded bound of the
/// difference element.
inline NormEstimate reconstruction_error(const GroupAlgebraElement& x, uint128 m, int radius,
                                         double tol = kDefaultTol, std::uint64_t seed = kDefaultSeed,
                                         long max_iter = kDefaultMaxIter,
                                         int radius_cap = kDefaultRadiusCap) {
    GroupAlgebraElement diff = x - apply_partial_sum(x, m);
    double l1w = 0;
    for (const auto& [w, c] : x.terms()) l1w += std::abs(c) * (1.0 - partial_sum_weight(m, w));
    auto st = detail::lower_stats(diff, radius, tol, seed, max_iter, radius_cap);
    NormEstimate e;
    e.upper = std::min(l1w, norm_upper(diff));
    e.lower = std::min(st.value, e.upper);
    e.radius = radius;
    e.iterations = st.iterations;
    e.tolerance = tol;
    e.seed = seed;
    e.converged = st.converged;
    return e;
}

/// Total frame weight of s over blocks 1..K; telescopes to exp(-|s|/sqrt(K))
/// once K >= |s| (each block contributes m_k^2 clones of psi_k(|s|)/m_k^2).
inline double coefficient_sum(const Word& s, int K) { return telescope_check(K, s.length()); }

inline double sm_cb_upper_global(int k_max = 64) { return 3.0 * schedule_sup_bound(k_max) + 1.0; }

/// cb upper bound for the partial-sum map S_m: the decomposition bound
/// ||Phi_{k-1}|| + (p/m_k^2)||Psi_k|| + j/m_k^2 with each factor replaced by
/// its certified bound, capped by the m-independent global bound.
inline double sm_cb_upper(uint128 m, int k_max = 64) {
    double global = sm_cb_upper_global(k_max);
    if (m == 0) return 0.0;
    FrameIndex idx = f2_indexer().decompose(m);
    int k = idx.k;
    auto phi_ub = [](int kk) {
        return 1.0 + cb_defect_upper(1.0 / std::sqrt(static_cast<double>(kk)), kk);
    };
    double psi_ub = k == 1 ? phi_ub(1) : phi_ub(k) + phi_ub(k - 1);
    double base = k >= 2 ? phi_ub(k - 1) : 0.0;
    std::uint64_t m_k = f2_indexer().block_size(k);
    double msq = static_cast<double>(uint128(m_k) * m_k);
    double specific = base + (static_cast<double>(idx.p) / msq) * psi_ub +
                      static_cast<double>(idx.j) / msq;
    return std::min(specific, global);
}

/// S_E(x) = sum_{n in E} a_n x(phi(n)) lambda_{phi(n)} for a finite index set.
inline GroupAlgebraElement subset_sum_apply(const GroupAlgebraElement& x,
                                            const std::vector<uint128>& indices) {
    GroupAlgebraElement r;
    for (uint128 n : indices) {
        FrameTerm t = frame_term(n);
        complexd c = x.coefficient(t.word);
        if (c != complexd{}) r.add_term(t.word, t.coefficient * c);
    }
    return r;
}

inline MatrixLevelElement subset_sum_apply(const MatrixLevelElement& u,
                                           const std::vector<uint128>& indices) {
    MatrixLevelElement r(u.level());
    for (uint128 n : indices) {
        FrameTerm t = frame_term(n);
        CMat c = u.coefficient(t.word);
        if (!c.negligible(kDropTolerance)) {
            c *= t.coefficient;
            r.add_term(t.word, c);
        }
    }
    return r;
}

struct LebesgueEstimate {
    double value = 0;
    bool converged = true;
};

namespace detail {

inline double dirichlet_abs(int K, double theta) {
    if (theta < 1e-14) return 2.0 * K + 1.0;
    return std::abs(std::sin((K + 0.5) * theta) / std::sin(0.5 * theta));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth, bool& ok) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth > 48) {
        ok = false;
        return left + right;
    }
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, ok) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, ok);
}

}  // namespace detail

/// Lebesgue constant L_K = (1/2pi) int |D_K|: the operator norm of the K-th
/// symmetric partial-sum projection on C(T), i.e. of the rearranged band sums
/// on the Z subgroup. Integrated piecewise between the kernel zeros.
inline LebesgueEstimate lebesgue_constant(int K, double quad_tol = 1e-10) {
    if (K < 0) throw input_error("Lebesgue index must be nonnegative");
    const double pi = 3.14159265358979323846;
    std::function<double(double)> f = [K](double th) { return detail::dirichlet_abs(K, th); };
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (int j = 1; j <= K; ++j) cuts.push_back(j * pi / (K + 0.5));
    cuts.push_back(pi);
    LebesgueEstimate est;
    double total = 0;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b <= a) continue;
        double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
        total += detail::adaptive_simpson(f, a, b, fa, fm, fb, whole,
                                          quad_tol / static_cast<double>(cuts.size()), 0, ok);
    }
    est.value = total / pi;
    est.converged = ok;
    return est;
}

}  // namespace freeframe
