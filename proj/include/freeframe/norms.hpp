#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "freeframe/element.hpp"
#include "freeframe/word.hpp"

namespace freeframe {

/// A certified interval for an operator norm, with the truncation radius and
/// iteration metadata that produced it.
struct NormEstimate {
    double lower = 0;
    double upper = 0;
    int radius = 0;
    long iterations = 0;
    double tolerance = 0;
    std::uint64_t seed = 0;
    bool converged = true;
};

inline constexpr double kDefaultTol = 1e-8;
inline constexpr long kDefaultMaxIter = 5000;
inline constexpr std::uint64_t kDefaultSeed = 12345;

namespace detail {

struct PowerStats {
    double value = 0;  // certified lower bound for the top singular value
    long iterations = 0;
    bool converged = true;
};

/// Power iteration on the Gram operator T*T. The Rayleigh quotient
/// ||Tv||^2/||v||^2 is a lower bound for the top squared singular value for
/// every v; the returned value is its square root shaved by
/// min(eigen-residual, 1e-13 * rho) to absorb rounding in the matvecs.
template <class Op>
PowerStats gram_power_iteration(const Op& op, double tol, std::uint64_t seed, long max_iter) {
    const std::size_t nc = op.cols();
    const std::size_t nr = op.rows();
    PowerStats st;
    if (nc == 0 || op.nnz() == 0) return st;

    std::vector<complexd> v(nc), y(nr), w(nc);
    SplitMix64 rng(seed);
    double nv = 0;
    for (auto& e : v) {
        e = complexd(rng.uniform_sym(), rng.uniform_sym());
        nv += std::norm(e);
    }
    nv = std::sqrt(nv);
    for (auto& e : v) e /= nv;

    double rho = 0, prev = -1;
    double residual = 0;
    long it = 0;
    for (it = 1; it <= max_iter; ++it) {
        std::fill(y.begin(), y.end(), complexd{});
        op.apply(v, y);
        double ny2 = 0;
        for (const auto& e : y) ny2 += std::norm(e);
        rho = ny2;  // v is unit
        std::fill(w.begin(), w.end(), complexd{});
        op.apply_adjoint(y, w);
        double res2 = 0, nw2 = 0;
        for (std::size_t i = 0; i < nc; ++i) {
            res2 += std::norm(w[i] - rho * v[i]);
            nw2 += std::norm(w[i]);
        }
        residual = std::sqrt(res2);
        if (it > 1 && std::abs(rho - prev) <= tol * std::max(rho, 1e-300)) break;
        prev = rho;
        if (nw2 == 0) break;
        double nw = std::sqrt(nw2);
        for (std::size_t i = 0; i < nc; ++i) v[i] = w[i] / nw;
    }
    st.iterations = std::min(it, max_iter);
    st.converged = it <= max_iter;
    double shave = std::min(residual, rho * 1e-13);
    st.value = std::sqrt(std::max(0.0, rho - shave));
    return st;
}

}  // namespace detail

/// Compression of the left regular representation of x to l2 of a ball:
/// basis vector e_w (w in ball(R)) maps to sum_s x_s e_{sw}; rows live in
/// ball(R + support_radius(x)). Stored column-major; indices follow rank().
class TruncatedRep {
public:
    TruncatedRep(const GroupAlgebraElement& x, int radius, int radius_cap = kDefaultRadiusCap) {
        if (radius < 0) throw input_error("truncation radius must be nonnegative");
        col_radius_ = radius;
        row_radius_ = radius + x.support_radius();
        if (row_radius_ > radius_cap)
            throw capacity_error("truncated representation exceeds the ball cap");
        ncols_ = ball_size(col_radius_);
        nrows_ = ball_size(row_radius_);
        col_ptr_.reserve(ncols_ + 1);
        col_ptr_.push_back(0);
        for (std::uint64_t c = 0; c < ncols_; ++c) {
            Word w = unrank(c);
            for (const auto& [s, a] : x.terms()) {
                rows_.push_back(rank(s * w));
                vals_.push_back(a);
            }
            col_ptr_.push_back(rows_.size());
        }
    }

    std::size_t cols() const { return ncols_; }
    std::size_t rows() const { return nrows_; }
    std::size_t nnz() const { return vals_.size(); }
    int col_radius() const { return col_radius_; }
    int row_radius() const { return row_radius_; }

    void apply(const std::vector<complexd>& v, std::vector<complexd>& y) const {
        for (std::size_t c = 0; c < ncols_; ++c) {
            complexd vc = v[c];
            if (vc == complexd{}) continue;
            for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k)
                y[rows_[k]] += vals_[k] * vc;
        }
    }

    void apply_adjoint(const std::vector<complexd>& y, std::vector<complexd>& w) const {
        for (std::size_t c = 0; c < ncols_; ++c) {
            complexd acc{};
            for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k)
                acc += std::conj(vals_[k]) * y[rows_[k]];
            w[c] += acc;
        }
    }

    /// Dense image of basis column c (row index -> value); used by tests.
    std::map<std::uint64_t, complexd> column(std::uint64_t c) const {
        std::map<std::uint64_t, complexd> out;
        for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) out[rows_[k]] += vals_[k];
        return out;
    }

private:
    int col_radius_ = 0;
    int row_radius_ = 0;
    std::uint64_t ncols_ = 0;
    std::uint64_t nrows_ = 0;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::uint64_t> rows_;
    std::vector<complexd> vals_;
};

/// Same compression on C^n (x) l2(ball(R)); vector slot (word w, i) sits at
/// index rank(w)*n + i.
class MatrixTruncatedRep {
public:
    MatrixTruncatedRep(const MatrixLevelElement& u, int radius, int radius_cap = kDefaultRadiusCap)
        : level_(u.level()) {
        if (radius < 0) throw input_error("truncation radius must be nonnegative");
        col_radius_ = radius;
        row_radius_ = radius + u.support_radius();
        if (row_radius_ > radius_cap)
            throw capacity_error("truncated representation exceeds the ball cap");
        ncols_words_ = ball_size(col_radius_);
        nrows_words_ = ball_size(row_radius_);
        col_ptr_.reserve(ncols_words_ + 1);
        col_ptr_.push_back(0);
        for (std::uint64_t c = 0; c < ncols_words_; ++c) {
            Word w = unrank(c);
            for (const auto& [s, m] : u.terms()) {
                rows_.push_back(rank(s * w));
                mats_.push_back(&m);
            }
            col_ptr_.push_back(rows_.size());
        }
    }

    std::size_t cols() const { return ncols_words_ * level_; }
    std::size_t rows() const { return nrows_words_ * level_; }
    std::size_t nnz() const { return mats_.size() * level_ * level_; }

    void apply(const std::vector<complexd>& v, std::vector<complexd>& y) const {
        const int n = level_;
        for (std::size_t c = 0; c < ncols_words_; ++c) {
            const complexd* vc = v.data() + c * n;
            for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
                complexd* yr = y.data() + rows_[k] * n;
                const CMat& m = *mats_[k];
                for (int i = 0; i < n; ++i) {
                    complexd acc{};
                    for (int j = 0; j < n; ++j) acc += m(i, j) * vc[j];
                    yr[i] += acc;
                }
            }
        }
    }

    void apply_adjoint(const std::vector<complexd>& y, std::vector<complexd>& w) const {
        const int n = level_;
        for (std::size_t c = 0; c < ncols_words_; ++c) {
            complexd* wc = w.data() + c * n;
            for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
                const complexd* yr = y.data() + rows_[k] * n;
                const CMat& m = *mats_[k];
                for (int j = 0; j < n; ++j) {
                    complexd acc{};
                    for (int i = 0; i < n; ++i) acc += std::conj(m(i, j)) * yr[i];
                    wc[j] += acc;
                }
            }
        }
    }

private:
    int level_;
    int col_radius_ = 0;
    int row_radius_ = 0;
    std::uint64_t ncols_words_ = 0;
    std::uint64_t nrows_words_ = 0;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::uint64_t> rows_;
    std::vector<const CMat*> mats_;
};

/// Banded upper bound: min(l1, sum_d (d+1) * l2(band d)).
inline double norm_upper(const GroupAlgebraElement& x) {
    double banded = 0;
    std::map<int, double> band_l2sq;
    for (const auto& [w, c] : x.terms()) band_l2sq[w.length()] += std::norm(c);
    for (const auto& [d, s2] : band_l2sq) banded += (d + 1) * std::sqrt(s2);
    return std::min(x.l1_norm(), banded);
}

/// Matrix-level analog with operator-norm coefficients.
inline double norm_upper(const MatrixLevelElement& u) {
    double l1 = 0, banded = 0;
    std::map<int, double> band_sq;
    for (const auto& [w, m] : u.terms()) {
        double op = m.op_norm_upper();
        l1 += op;
        band_sq[w.length()] += op * op;
    }
    for (const auto& [d, s2] : band_sq) banded += (d + 1) * std::sqrt(s2);
    return std::min(l1, banded);
}

namespace detail {

inline PowerStats lower_stats(const GroupAlgebraElement& x, int radius, double tol,
                              std::uint64_t seed, long max_iter, int radius_cap) {
    if (x.empty()) return {};
    TruncatedRep rep(x, radius, radius_cap);
    return gram_power_iteration(rep, tol, seed, max_iter);
}

inline PowerStats lower_stats(const MatrixLevelElement& u, int radius, double tol,
                              std::uint64_t seed, long max_iter, int radius_cap) {
    if (u.empty()) return {};
    MatrixTruncatedRep rep(u, radius, radius_cap);
    return gram_power_iteration(rep, tol, seed, max_iter);
}

}  // namespace detail

/// Certified lower bound for ||x|| from the ball(R) compression.
inline double norm_lower(const GroupAlgebraElement& x, int radius, double tol = kDefaultTol,
                         std::uint64_t seed = kDefaultSeed, long max_iter = kDefaultMaxIter,
                         int radius_cap = kDefaultRadiusCap) {
    return detail::lower_stats(x, radius, tol, seed, max_iter, radius_cap).value;
}

inline NormEstimate norm_interval(const GroupAlgebraElement& x, int radius,
                                  double tol = kDefaultTol, std::uint64_t seed = kDefaultSeed,
                                  long max_iter = kDefaultMaxIter,
                                  int radius_cap = kDefaultRadiusCap) {
    auto st = detail::lower_stats(x, radius, tol, seed, max_iter, radius_cap);
    NormEstimate e;
    e.upper = norm_upper(x);
    e.lower = std::min(st.value, e.upper);
    e.radius = radius;
    e.iterations = st.iterations;
    e.tolerance = tol;
    e.seed = seed;
    e.converged = st.converged;
    return e;
}

inline NormEstimate matrix_level_norm(const MatrixLevelElement& u, int radius,
                                      double tol = kDefaultTol, std::uint64_t seed = kDefaultSeed,
                                      long max_iter = kDefaultMaxIter,
                                      int radius_cap = kDefaultRadiusCap) {
    auto st = detail::lower_stats(u, radius, tol, seed, max_iter, radius_cap);
    NormEstimate e;
    e.upper = norm_upper(u);
    e.lower = std::min(st.value, e.upper);
    e.radius = radius;
    e.iterations = st.iterations;
    e.tolerance = tol;
    e.seed = seed;
    e.converged = st.converged;
    return e;
}

/// A coefficient-symbol map: the coefficient at lambda_s is scaled by
/// weight(s). Radial multipliers and frame partial sums are both of this form.
using CoefficientMap = std::function<double(const Word&)>;

inline MatrixLevelElement apply_coefficient_map(const CoefficientMap& map,
                                                const MatrixLevelElement& u) {
    MatrixLevelElement r(u.level());
    for (const auto& [w, m] : u.terms()) {
        CMat mc = m;
        mc *= map(w);
        r.add_term(w, mc);
    }
    return r;
}

/// Empirical lower bound for the level-n norm of a coefficient map:
/// max over samples of (certified lower of the image) / (certified upper of
/// the input). Samples mix single words, full spheres and random sparse
/// elements; everything is seeded and deterministic.
inline double map_norm_lower(const CoefficientMap& map, int level, int samples, int radius,
                             double tol = kDefaultTol, std::uint64_t seed = kDefaultSeed,
                             long max_iter = kDefaultMaxIter, int radius_cap = kDefaultRadiusCap) {
    if (samples < 1) throw input_error("sample count must be >= 1");
    if (level < 1) throw input_error("level must be >= 1");
    SplitMix64 rng(seed ^ 0xA5A5A5A5A5A5A5A5ull);
    std::vector<MatrixLevelElement> pool;

    auto random_mat = [&](int n) {
        CMat m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = complexd(rng.uniform_sym(), rng.uniform_sym());
        return m;
    };

    // Single words lambda_s with identity coefficient: these have upper
    // bound exactly 1 and pin down pointwise symbol values.
    for (const auto& s : ball(std::min(2, radius_cap)))
        pool.push_back(MatrixLevelElement::tensor(CMat::identity(level), GroupAlgebraElement::lambda(s)));

    // Sphere-supported samples with random matrix coefficients.
    for (int d = 0; d <= 2; ++d) {
        MatrixLevelElement u(level);
        for (const auto& s : sphere(d)) u.add_term(s, random_mat(level));
        pool.push_back(std::move(u));
    }

    // Random sparse samples.
    std::uint64_t b3 = ball_size(3);
    for (int i = 0; i < samples; ++i) {
        MatrixLevelElement u(level);
        int nsupp = 1 + static_cast<int>(rng.below(5));
        for (int t = 0; t < nsupp; ++t) u.add_term(unrank(rng.below(b3)), random_mat(level));
        if (!u.empty()) pool.push_back(std::move(u));
    }

    double best = 0;
    for (const auto& u : pool) {
        double up = norm_upper(u);
        if (up < 1e-300) continue;
        MatrixLevelElement img = apply_coefficient_map(map, u);
        if (img.empty()) continue;
        double lo = detail::lower_stats(img, radius, tol, seed, max_iter, radius_cap).value;
        best = std::max(best, lo / up);
    }
    return best;
}

}  // namespace freeframe
