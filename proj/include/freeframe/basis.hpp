#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "freeframe/frame.hpp"

namespace freeframe {

/// Finitely supported u = sum u_i (x) e_i with n x n matrix entries, indexed
/// by frame positions i >= 1.
struct CoefficientSequence {
    int level = 1;
    std::map<uint128, CMat> entries;

    bool empty() const { return entries.empty(); }
};

/// Q: sum u_i (x) e_i -> sum u_i (x) lambda_{phi(i)}.
inline MatrixLevelElement q_apply(const CoefficientSequence& u) {
    MatrixLevelElement r(u.level);
    for (const auto& [i, m] : u.entries) r.add_term(frame_term(i).word, m);
    return r;
}

/// The prefix norm sup_m ||sum_{i<=m} u_i (x) x_i||: a max over the finitely
/// many support prefixes. Certified as (max of lowers, max of uppers).
inline NormEstimate triple_norm(const CoefficientSequence& u, int radius, double tol = kDefaultTol,
                                std::uint64_t seed = kDefaultSeed, long max_iter = kDefaultMaxIter,
                                int radius_cap = kDefaultRadiusCap) {
    NormEstimate best;
    best.radius = radius;
    best.tolerance = tol;
    best.seed = seed;
    MatrixLevelElement acc(u.level);
    for (const auto& [i, m] : u.entries) {
        acc.add_term(frame_term(i).word, m);
        NormEstimate e = matrix_level_norm(acc, radius, tol, seed, max_iter, radius_cap);
        best.lower = std::max(best.lower, e.lower);
        best.upper = std::max(best.upper, e.upper);
        best.iterations += e.iterations;
        best.converged = best.converged && e.converged;
    }
    return best;
}

/// Unconditional variant: max over all subsets of the support. Brute force,
/// capped at 12 support points.
inline NormEstimate unconditional_triple_norm(const CoefficientSequence& u, int radius,
                                              double tol = kDefaultTol,
                                              std::uint64_t seed = kDefaultSeed,
                                              long max_iter = kDefaultMaxIter,
                                              int radius_cap = kDefaultRadiusCap) {
    std::vector<std::pair<Word, const CMat*>> supp;
    for (const auto& [i, m] : u.entries) supp.emplace_back(frame_term(i).word, &m);
    if (supp.size() > 12) throw capacity_error("unconditional norm limited to 12 support points");
    NormEstimate best;
    best.radius = radius;
    best.tolerance = tol;
    best.seed = seed;
    for (std::uint64_t mask = 1; mask < (1ull << supp.size()); ++mask) {
        MatrixLevelElement elem(u.level);
        for (std::size_t t = 0; t < supp.size(); ++t)
            if (mask & (1ull << t)) elem.add_term(supp[t].first, *supp[t].second);
        NormEstimate e = matrix_level_norm(elem, radius, tol, seed, max_iter, radius_cap);
        best.lower = std::max(best.lower, e.lower);
        best.upper = std::max(best.upper, e.upper);
        best.iterations += e.iterations;
        best.converged = best.converged && e.converged;
    }
    return best;
}

/// T truncated to the first N frame positions: entries f_i(x) = a_i
/// delta_{phi(i)}(x), plus the per-word tail weight 1 - w_N(s) that
/// quantifies what the truncation still misses.
struct TApplyResult {
    CoefficientSequence sequence;
    std::map<Word, double> tail_weight;
};

inline TApplyResult t_apply(const GroupAlgebraElement& x, uint128 N,
                            std::size_t entry_cap = 5'000'000) {
    if (N == 0) throw input_error("truncation length must be >= 1");
    TApplyResult out;
    out.sequence.level = 1;
    FrameIndex end = f2_indexer().decompose(N);
    std::size_t count = 0;
    for (int k = 1; k <= end.k; ++k) {
        std::uint64_t m = f2_indexer().block_size(k);
        double msq = static_cast<double>(m) * static_cast<double>(m);
        uint128 base = f2_indexer().boundary(k - 1);
        for (const auto& [s, c] : x.terms()) {
            if (s.length() > k) continue;
            double a = psi_symbol(k, s.length()) / msq;
            complexd value = a * c;
            if (std::abs(value) < kDropTolerance) continue;
            std::uint64_t j = rank(s) + 1;
            uint128 rounds = k < end.k ? uint128(m) * m : end.p + (j <= end.j ? 1 : 0);
            count += static_cast<std::size_t>(rounds);
            if (count > entry_cap) throw capacity_error("truncated coefficient sequence too large");
            for (uint128 p = 0; p < rounds; ++p)
                out.sequence.entries.emplace(base + p * m + j, CMat::scalar(value));
        }
    }
    for (const auto& [s, c] : x.terms())
        out.tail_weight[s] = 1.0 - partial_sum_weight(N, s);
    return out;
}

/// l1 distance between x and Q(T(x) truncated at N):
/// sum_s |x_s| (1 - w_N(s)).
inline double qt_identity_check(const GroupAlgebraElement& x, uint128 N) {
    double s = 0;
    for (const auto& [w, c] : x.terms()) s += std::abs(c) * (1.0 - partial_sum_weight(N, w));
    return s;
}

// ---------------------------------------------------------------------------
// Auerbach systems in finite-dimensional normed spaces.

/// A normed space given by coordinates and a norm oracle. extreme_points may
/// list candidate directions (e.g. the sign vectors of a sup-norm space);
/// only those lying in the working span are used.
struct NormedSpace {
    std::size_t dim = 0;
    std::function<double(const std::vector<double>&)> norm;
    std::vector<std::vector<double>> extreme_points;
};

struct AuerbachSystem {
    std::vector<std::vector<double>> vectors;      // unit vectors y_j
    std::vector<std::vector<double>> functionals;  // ambient representers g_j
    double achieved_eps = 0;                       // sampled dual-norm excess over 1
    bool within_eps = true;

    double pair(std::size_t j, const std::vector<double>& v) const {
        double s = 0;
        for (std::size_t t = 0; t < v.size(); ++t) s += functionals[j][t] * v[t];
        return s;
    }
};

namespace detail {

// Dense helpers for d <= 8.
inline bool invert_small(std::vector<double> a, int d, std::vector<double>& inv) {
    inv.assign(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) inv[static_cast<std::size_t>(i) * d + i] = 1.0;
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * d + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * d + col]))
                piv = r;
        if (std::abs(a[static_cast<std::size_t>(piv) * d + col]) < 1e-14) return false;
        if (piv != col)
            for (int c = 0; c < d; ++c) {
                std::swap(a[static_cast<std::size_t>(piv) * d + c], a[static_cast<std::size_t>(col) * d + c]);
                std::swap(inv[static_cast<std::size_t>(piv) * d + c], inv[static_cast<std::size_t>(col) * d + c]);
            }
        double diag = a[static_cast<std::size_t>(col) * d + col];
        for (int c = 0; c < d; ++c) {
            a[static_cast<std::size_t>(col) * d + c] /= diag;
            inv[static_cast<std::size_t>(col) * d + c] /= diag;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col) continue;
            double f = a[static_cast<std::size_t>(r) * d + col];
            if (f == 0) continue;
            for (int c = 0; c < d; ++c) {
                a[static_cast<std::size_t>(r) * d + c] -= f * a[static_cast<std::size_t>(col) * d + c];
                inv[static_cast<std::size_t>(r) * d + c] -= f * inv[static_cast<std::size_t>(col) * d + c];
            }
        }
    }
    return true;
}

}  // namespace detail

/// Approximate Auerbach system for span(basis): unit vectors y_j and exact
/// biorthogonal functionals with ||y*_j|| <= 1 + eps, certified by sampled
/// dual-norm evaluation. Determinant maximization by coordinate ascent over a
/// seeded candidate pool; at the fixed point no pool vector can enlarge the
/// determinant, which bounds the sampled dual norms by 1.
inline AuerbachSystem auerbach(const NormedSpace& space, const std::vector<std::vector<double>>& basis,
                               double eps = 0.05, std::uint64_t seed = kDefaultSeed,
                               int pool_samples = 4000, int max_rounds = 64) {
    const int d = static_cast<int>(basis.size());
    if (d == 0) throw input_error("empty basis");
    if (d > 8) throw capacity_error("auerbach limited to dimension 8");
    if (!(eps > 0)) throw input_error("eps must be positive");
    const std::size_t D = space.dim;

    auto normalize = [&](std::vector<double> v) {
        double n = space.norm(v);
        if (!(n > 0) || !std::isfinite(n)) throw input_error("norm oracle rejected a vector");
        for (auto& e : v) e /= n;
        return v;
    };

    std::vector<std::vector<double>> unit_basis;
    for (const auto& b : basis) {
        if (b.size() != D) throw input_error("basis vector has wrong dimension");
        unit_basis.push_back(normalize(b));
    }

    auto combine = [&](const std::vector<double>& alpha) {
        std::vector<double> v(D, 0.0);
        for (int j = 0; j < d; ++j)
            for (std::size_t t = 0; t < D; ++t) v[t] += alpha[static_cast<std::size_t>(j)] * unit_basis[static_cast<std::size_t>(j)][t];
        return v;
    };

    // Candidate pool: coefficient vectors (so membership in the span is
    // automatic), each rescaled to unit norm.
    struct Candidate {
        std::vector<double> alpha;
        std::vector<double> v;
    };
    std::vector<Candidate> pool;
    auto push_candidate = [&](std::vector<double> alpha) {
        std::vector<double> v = combine(alpha);
        double n = space.norm(v);
        if (!(n > 1e-12) || !std::isfinite(n)) return;
        for (auto& e : alpha) e /= n;
        for (auto& e : v) e /= n;
        pool.push_back({std::move(alpha), std::move(v)});
    };
    for (int j = 0; j < d; ++j) {
        std::vector<double> a(static_cast<std::size_t>(d), 0.0);
        a[static_cast<std::size_t>(j)] = 1.0;
        push_candidate(a);
        a[static_cast<std::size_t>(j)] = -1.0;
        push_candidate(a);
    }
    if (static_cast<int>(D) == d) {
        // Full-dimensional case: ambient extreme points live in the span;
        // recover their coefficients through the basis inverse.
        std::vector<double> B(static_cast<std::size_t>(d) * d), Binv;
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < d; ++t) B[static_cast<std::size_t>(t) * d + j] = unit_basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
        if (detail::invert_small(B, d, Binv)) {
            for (const auto& ep : space.extreme_points) {
                if (ep.size() != D) continue;
                std::vector<double> a(static_cast<std::size_t>(d), 0.0);
                for (int j = 0; j < d; ++j)
                    for (int t = 0; t < d; ++t) a[static_cast<std::size_t>(j)] += Binv[static_cast<std::size_t>(j) * d + t] * ep[static_cast<std::size_t>(t)];
                push_candidate(std::move(a));
            }
        }
    }
    SplitMix64 rng(seed ^ 0xAE0BACCAull);
    for (int i = 0; i < pool_samples; ++i) {
        std::vector<double> a(static_cast<std::size_t>(d));
        for (auto& e : a) e = rng.uniform_sym();
        push_candidate(std::move(a));
    }

    // Selection: columns of C are the alpha-coordinates of the current y's.
    std::vector<double> C(static_cast<std::size_t>(d) * d, 0.0);
    std::vector<std::size_t> chosen(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        chosen[static_cast<std::size_t>(j)] = static_cast<std::size_t>(2 * j);  // +unit_basis[j]
        for (int t = 0; t < d; ++t) C[static_cast<std::size_t>(t) * d + j] = pool[chosen[static_cast<std::size_t>(j)]].alpha[static_cast<std::size_t>(t)];
    }
    std::vector<double> Cinv;
    if (!detail::invert_small(C, d, Cinv)) throw input_error("basis vectors are not independent");

    for (int round = 0; round < max_rounds; ++round) {
        bool improved = false;
        for (int j = 0; j < d; ++j) {
            double best = 1.0 + 1e-12;
            std::size_t best_u = pool.size();
            for (std::size_t u = 0; u < pool.size(); ++u) {
                double tau = 0;
                for (int t = 0; t < d; ++t) tau += Cinv[static_cast<std::size_t>(j) * d + t] * pool[u].alpha[static_cast<std::size_t>(t)];
                if (std::abs(tau) > best) {
                    best = std::abs(tau);
                    best_u = u;
                }
            }
            if (best_u < pool.size()) {
                chosen[static_cast<std::size_t>(j)] = best_u;
                for (int t = 0; t < d; ++t) C[static_cast<std::size_t>(t) * d + j] = pool[best_u].alpha[static_cast<std::size_t>(t)];
                if (!detail::invert_small(C, d, Cinv)) throw input_error("degenerate replacement in auerbach ascent");
                improved = true;
            }
        }
        if (!improved) break;
    }

    AuerbachSystem sys;
    for (int j = 0; j < d; ++j) sys.vectors.push_back(pool[chosen[static_cast<std::size_t>(j)]].v);

    // Minimal-norm ambient representers g_j = Y (Y^T Y)^{-1} e_j.
    std::vector<double> M(static_cast<std::size_t>(d) * d, 0.0), Minv;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (std::size_t t = 0; t < D; ++t) s += sys.vectors[static_cast<std::size_t>(i)][t] * sys.vectors[static_cast<std::size_t>(j)][t];
            M[static_cast<std::size_t>(i) * d + j] = s;
        }
    if (!detail::invert_small(M, d, Minv)) throw input_error("selected vectors are not independent");
    for (int j = 0; j < d; ++j) {
        std::vector<double> g(D, 0.0);
        for (int i = 0; i < d; ++i) {
            double beta = Minv[static_cast<std::size_t>(i) * d + j];
            for (std::size_t t = 0; t < D; ++t) g[t] += beta * sys.vectors[static_cast<std::size_t>(i)][t];
        }
        sys.functionals.push_back(std::move(g));
    }

    // Sampled dual norms: the pool plus a fresh seeded batch.
    double excess = 0;
    auto probe = [&](const std::vector<double>& v) {
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (std::size_t t = 0; t < D; ++t) s += sys.functionals[static_cast<std::size_t>(j)][t] * v[t];
            excess = std::max(excess, std::abs(s) - 1.0);
        }
    };
    for (const auto& cand : pool) probe(cand.v);
    SplitMix64 rng2(seed ^ 0xF00DF00Dull);
    for (int i = 0; i < pool_samples; ++i) {
        std::vector<double> a(static_cast<std::size_t>(d));
        for (auto& e : a) e = rng2.uniform_sym();
        std::vector<double> v = combine(a);
        double n = space.norm(v);
        if (!(n > 1e-12)) continue;
        for (auto& e : v) e /= n;
        probe(v);
    }
    sys.achieved_eps = std::max(0.0, excess);
    sys.within_eps = sys.achieved_eps <= eps;
    return sys;
}

// ---------------------------------------------------------------------------
// Generic frame cloning from a block decomposition of the identity.

/// One base pair (y, g) of a block map: y with its norm (1 if already
/// normalized) and the scalar functional weight of g.
template <class Payload>
struct BlockMapPair {
    Payload y{};
    double y_norm = 1.0;
    double g_coeff = 0.0;
};

/// Blocks of base pairs; block k is cloned m(k)^2 times with functionals
/// divided by m(k)^2, exactly as in the free-group frame.
template <class Payload>
struct BlockMapSpec {
    std::vector<std::vector<BlockMapPair<Payload>>> blocks;

    BlockIndexer indexer() const {
        std::vector<std::uint64_t> sizes;
        sizes.reserve(blocks.size());
        for (const auto& b : blocks) sizes.push_back(static_cast<std::uint64_t>(b.size()));
        return BlockIndexer(std::move(sizes));
    }
};

/// The n-th cloned term: x_n = y / ||y|| (reported via x_scale) and
/// f_n = ||y|| g / m(k)^2.
template <class Payload>
struct GenericFrameTerm {
    int k = 0;
    uint128 p = 0;
    std::uint64_t j = 0;
    const BlockMapPair<Payload>* pair = nullptr;
    double x_scale = 1.0;
    double f_coeff = 0.0;
};

template <class Payload>
GenericFrameTerm<Payload> generic_frame_term(const BlockMapSpec<Payload>& spec,
                                             const BlockIndexer& indexer, uint128 n) {
    FrameIndex idx = indexer.decompose(n);
    const auto& pair = spec.blocks[static_cast<std::size_t>(idx.k - 1)][idx.j - 1];
    double m = static_cast<double>(indexer.block_size(idx.k));
    GenericFrameTerm<Payload> t;
    t.k = idx.k;
    t.p = idx.p;
    t.j = idx.j;
    t.pair = &pair;
    t.x_scale = 1.0 / pair.y_norm;
    t.f_coeff = pair.g_coeff * pair.y_norm / (m * m);
    return t;
}

/// The free-group frame expressed as a BlockMapSpec (blocks 1..K).
inline BlockMapSpec<Word> f2_block_map_spec(int K, int radius_cap = kDefaultRadiusCap) {
    BlockMapSpec<Word> spec;
    for (int k = 1; k <= K; ++k) {
        std::vector<BlockMapPair<Word>> block;
        for (const auto& s : block_base_order(k, radius_cap))
            block.push_back({s, 1.0, psi_symbol(k, s.length())});
        spec.blocks.push_back(std::move(block));
    }
    return spec;
}

// ---------------------------------------------------------------------------

/// Empirical lower bound for the smallest K with
/// ||sum_{j<=m} u_j (x) x_j|| <= K ||sum_{j<=l} u_j (x) x_j|| over prefixes
/// m <= l, sampled over coefficient tuples. Uses prefix-lower / full-upper,
/// so the result never overstates K; 1 is always feasible (m = l). A repeated
/// element with a sign flip drives the full-sum upper bound to 0 and the
/// result to infinity.
inline double cb_basic_criterion(const std::vector<GroupAlgebraElement>& seq, int samples,
                                 int radius, double tol = kDefaultTol,
                                 std::uint64_t seed = kDefaultSeed, long max_iter = kDefaultMaxIter,
                                 int radius_cap = kDefaultRadiusCap) {
    if (seq.empty()) throw input_error("empty candidate sequence");
    const std::size_t len = seq.size();
    double K = 1.0;
    if (len == 1) return K;

    auto ratio = [&](const std::vector<CMat>& coeffs, int level, std::size_t m, std::size_t l) {
        MatrixLevelElement prefix(level), full(level);
        for (std::size_t j = 0; j < l; ++j) {
            if (coeffs[j].negligible(kDropTolerance)) continue;
            for (const auto& [w, c] : seq[j].terms()) {
                CMat mc = coeffs[j];
                mc *= c;
                full.add_term(w, mc);
                if (j < m) prefix.add_term(w, mc);
            }
        }
        double up = norm_upper(full);
        double lo = detail::lower_stats(prefix, radius, tol, seed, max_iter, radius_cap).value;
        if (up < 1e-300) return lo > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        return lo / up;
    };

    // Structured witnesses: ( +1 at j1, -1 at j2 ) catches repeats.
    for (std::size_t j1 = 0; j1 < len; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < std::min(len, j1 + 4); ++j2) {
            std::vector<CMat> coeffs(len, CMat(1));
            coeffs[j1] = CMat::scalar(1.0);
            coeffs[j2] = CMat::scalar(-1.0);
            K = std::max(K, ratio(coeffs, 1, j1 + 1, j2 + 1));
        }

    SplitMix64 rng(seed ^ 0xCBBA51Cull);
    for (int s = 0; s < samples; ++s) {
        int level = 1 + static_cast<int>(rng.below(2));
        std::size_t l = 2 + rng.below(len - 1);
        std::size_t m = 1 + rng.below(l - 1);
        std::vector<CMat> coeffs(len, CMat(level));
        for (std::size_t j = 0; j < l; ++j) {
            CMat c(level);
            for (int a = 0; a < level; ++a)
                for (int b = 0; b < level; ++b) c(a, b) = complexd(rng.uniform_sym(), rng.uniform_sym());
            coeffs[j] = c;
        }
        K = std::max(K, ratio(coeffs, level, m, l));
    }
    return K;
}

}  // namespace freeframe
