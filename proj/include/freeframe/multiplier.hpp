#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "freeframe/element.hpp"

namespace freeframe {

// Radial coefficient multipliers on span{lambda_s}: the coefficient at s is
// scaled by symbol(|s|). The family used throughout:
//   phi(t)       symbol(d) = exp(-t d), t > 0
//   band(d0)     indicator of d = d0
//   phi_tm(t,m)  exp(-t d) for d <= m, 0 beyond
//   psi(k)       the telescoping blocks of the schedule t_k = 1/sqrt(k),
//                m_k = k: psi(1) = phi_tm(1,1); for k >= 2,
//                symbol(d) = exp(-d/sqrt(k)) - exp(-d/sqrt(k-1)) for d <= k-1,
//                exp(-d/sqrt(k)) at d = k, 0 beyond.

/// psi(k) coefficient at band d.
inline double psi_symbol(int k, int d) {
    if (k < 1) throw input_error("psi block index must be >= 1");
    if (d < 0) throw input_error("band index must be nonnegative");
    if (k == 1) return d <= 1 ? std::exp(-static_cast<double>(d)) : 0.0;
    if (d > k) return 0.0;
    double cur = std::exp(-d / std::sqrt(static_cast<double>(k)));
    if (d == k) return cur;
    return cur - std::exp(-d / std::sqrt(static_cast<double>(k - 1)));
}

class RadialMultiplier {
public:
    enum class Kind { Phi, Band, PhiTm, Psi, Custom };

    static RadialMultiplier phi(double t) {
        require_positive(t);
        RadialMultiplier m;
        m.kind_ = Kind::Phi;
        m.symbol_ = [t](int d) { return std::exp(-t * d); };
        return m;
    }

    static RadialMultiplier band(int d0) {
        if (d0 < 0) throw input_error("band index must be nonnegative");
        RadialMultiplier m;
        m.kind_ = Kind::Band;
        m.cutoff_ = d0;
        m.symbol_ = [d0](int d) { return d == d0 ? 1.0 : 0.0; };
        return m;
    }

    static RadialMultiplier phi_tm(double t, int mm) {
        require_positive(t);
        if (mm < 0) throw input_error("band cutoff must be nonnegative");
        RadialMultiplier m;
        m.kind_ = Kind::PhiTm;
        m.cutoff_ = mm;
        m.symbol_ = [t, mm](int d) { return d <= mm ? std::exp(-t * d) : 0.0; };
        return m;
    }

    static RadialMultiplier psi(int k) {
        RadialMultiplier m;
        m.kind_ = Kind::Psi;
        m.cutoff_ = k;
        m.symbol_ = [k](int d) { return psi_symbol(k, d); };
        return m;
    }

    static RadialMultiplier custom(std::function<double(int)> symbol, int cutoff = -1) {
        RadialMultiplier m;
        m.kind_ = Kind::Custom;
        m.cutoff_ = cutoff;
        m.symbol_ = std::move(symbol);
        return m;
    }

    Kind kind() const { return kind_; }
    double symbol(int d) const { return symbol_(d); }
    int cutoff() const { return cutoff_; }

    GroupAlgebraElement apply(const GroupAlgebraElement& x) const {
        GroupAlgebraElement r;
        for (const auto& [w, c] : x.terms()) r.add_term(w, symbol_(w.length()) * c);
        return r;
    }

    MatrixLevelElement apply(const MatrixLevelElement& u) const {
        MatrixLevelElement r(u.level());
        for (const auto& [w, m] : u.terms()) {
            CMat mc = m;
            mc *= symbol_(w.length());
            r.add_term(w, mc);
        }
        return r;
    }

private:
    static void require_positive(double t) {
        if (!(t > 0)) throw input_error("multiplier parameter t must be positive");
    }

    Kind kind_ = Kind::Custom;
    int cutoff_ = -1;
    std::function<double(int)> symbol_;
};

/// Closed form of sum_{d=m+1}^inf d e^{-td}:
///   x^{m+2}/(1-x)^2 + (m+1) x^{m+1}/(1-x)   with x = e^{-t}.
inline double tail_sum_closed_form(double t, int m) {
    if (!(t > 0)) throw input_error("tail parameter t must be positive");
    if (m < 0) throw input_error("tail cutoff must be nonnegative");
    double x = std::exp(-t);
    double xm1 = std::pow(x, m + 1);
    return xm1 * x / ((1 - x) * (1 - x)) + (m + 1) * xm1 / (1 - x);
}

/// Upper bound 2 sum_{d>m} d e^{-td} for the cb distance between phi(t)
/// and its band truncation phi_tm(t, m).
inline double cb_defect_upper(double t, int m) { return 2.0 * tail_sum_closed_form(t, m); }

/// 1 + max_{1<=k<=k_max} cb_defect_upper(1/sqrt(k), k). The max over all k
/// sits at small k (the tail decays along the schedule), so modest k_max
/// already gives the stable value; 64 is the default everywhere.
inline double schedule_sup_bound(int k_max) {
    if (k_max < 1) throw input_error("k_max must be >= 1");
    double best = 0;
    for (int k = 1; k <= k_max; ++k)
        best = std::max(best, cb_defect_upper(1.0 / std::sqrt(static_cast<double>(k)), k));
    return 1.0 + best;
}

/// sum_{k<=K} psi_symbol(k, d); telescopes to exp(-d/sqrt(K)) for d <= K.
inline double telescope_check(int K, int d) {
    if (K < 1) throw input_error("K must be >= 1");
    double s = 0;
    for (int k = 1; k <= K; ++k) s += psi_symbol(k, d);
    return s;
}

}  // namespace freeframe
