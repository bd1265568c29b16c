#pragma once

#include <complex>
#include <map>
#include <vector>

#include "freeframe/common.hpp"
#include "freeframe/word.hpp"

namespace freeframe {

using complexd = std::complex<double>;

/// Small dense complex matrix (matrix levels stay at n <= 8 in practice).
class CMat {
public:
    CMat() = default;
    explicit CMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    static CMat identity(int n) {
        CMat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMat unit(int n, int i, int j) {
        CMat m(n);
        m(i, j) = 1.0;
        return m;
    }

    static CMat scalar(complexd c) {
        CMat m(1);
        m(0, 0) = c;
        return m;
    }

    int dim() const { return n_; }
    complexd& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const complexd& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<complexd>& data() const { return a_; }

    CMat& operator+=(const CMat& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    CMat& operator*=(complexd c) {
        for (auto& v : a_) v *= c;
        return *this;
    }

    friend CMat operator*(const CMat& x, const CMat& y) {
        CMat r(x.n_);
        for (int i = 0; i < x.n_; ++i)
            for (int k = 0; k < x.n_; ++k) {
                complexd v = x(i, k);
                if (v == complexd{}) continue;
                for (int j = 0; j < x.n_; ++j) r(i, j) += v * y(k, j);
            }
        return r;
    }

    CMat conj_transpose() const {
        CMat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    double frobenius() const {
        double s = 0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// Certified upper bound for the operator norm: min(Frobenius,
    /// sqrt(max column sum * max row sum)).
    double op_norm_upper() const {
        double cmax = 0, rmax = 0;
        for (int i = 0; i < n_; ++i) {
            double rs = 0;
            for (int j = 0; j < n_; ++j) rs += std::abs((*this)(i, j));
            rmax = std::max(rmax, rs);
        }
        for (int j = 0; j < n_; ++j) {
            double cs = 0;
            for (int i = 0; i < n_; ++i) cs += std::abs((*this)(i, j));
            cmax = std::max(cmax, cs);
        }
        return std::min(frobenius(), std::sqrt(cmax * rmax));
    }

    bool negligible(double tol) const { return frobenius() < tol; }

private:
    int n_ = 0;
    std::vector<complexd> a_;
};

/// Finitely supported x = sum a_s lambda_s with complex coefficients.
/// Coefficients with |a_s| below the drop tolerance are pruned after each
/// arithmetic operation, so supports stay finite and comparisons stable.
class GroupAlgebraElement {
public:
    using TermMap = std::map<Word, complexd>;

    GroupAlgebraElement() = default;

    static GroupAlgebraElement lambda(const Word& s, complexd c = 1.0) {
        GroupAlgebraElement x;
        x.set(s, c);
        return x;
    }

    static GroupAlgebraElement zero() { return {}; }

    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }

    void set(const Word& s, complexd c) {
        if (std::abs(c) < kDropTolerance)
            terms_.erase(s);
        else
            terms_[s] = c;
    }

    void add_term(const Word& s, complexd c) {
        auto it = terms_.find(s);
        if (it == terms_.end()) {
            if (std::abs(c) >= kDropTolerance) terms_.emplace(s, c);
        } else {
            it->second += c;
            if (std::abs(it->second) < kDropTolerance) terms_.erase(it);
        }
    }

    /// delta_s pairing: the coefficient of lambda_s (0 if absent).
    complexd coefficient(const Word& s) const {
        auto it = terms_.find(s);
        return it == terms_.end() ? complexd{} : it->second;
    }

    GroupAlgebraElement& operator+=(const GroupAlgebraElement& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }

    GroupAlgebraElement& operator-=(const GroupAlgebraElement& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }

    friend GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement& b) { return a += b; }
    friend GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement& b) { return a -= b; }

    friend GroupAlgebraElement operator*(complexd c, const GroupAlgebraElement& x) {
        GroupAlgebraElement r;
        for (const auto& [w, v] : x.terms_) r.add_term(w, c * v);
        return r;
    }

    /// Convolution: (x*y)_t = sum_{rs=t} x_r y_s.
    friend GroupAlgebraElement operator*(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
        GroupAlgebraElement r;
        for (const auto& [u, a] : x.terms_)
            for (const auto& [v, b] : y.terms_) r.add_term(u * v, a * b);
        return r;
    }

    /// C*-involution: coefficient at s becomes conj of coefficient at s^{-1}.
    GroupAlgebraElement adjoint() const {
        GroupAlgebraElement r;
        for (const auto& [w, c] : terms_) r.add_term(w.inverse(), std::conj(c));
        return r;
    }

    /// Restriction to words of length exactly d (the band projection P_d).
    GroupAlgebraElement length_component(int d) const {
        GroupAlgebraElement r;
        for (const auto& [w, c] : terms_)
            if (w.length() == d) r.add_term(w, c);
        return r;
    }

    double l1_norm() const {
        double s = 0;
        for (const auto& [w, c] : terms_) s += std::abs(c);
        return s;
    }

    double l2_norm() const {
        double s = 0;
        for (const auto& [w, c] : terms_) s += std::norm(c);
        return std::sqrt(s);
    }

    int support_radius() const {
        int r = 0;
        for (const auto& [w, c] : terms_) r = std::max(r, w.length());
        return r;
    }

private:
    TermMap terms_;
};

/// Biorthogonal pairing delta_s(x).
inline complexd delta_pairing(const GroupAlgebraElement& x, const Word& s) {
    return x.coefficient(s);
}

inline GroupAlgebraElement convolve(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
    return x * y;
}

/// u = sum u_s (x) lambda_s at matrix level n; coefficients are dense n x n.
class MatrixLevelElement {
public:
    using TermMap = std::map<Word, CMat>;

    explicit MatrixLevelElement(int level = 1) : level_(level) {
        if (level < 1) throw input_error("matrix level must be positive");
    }

    static MatrixLevelElement from_scalar(const GroupAlgebraElement& x) {
        MatrixLevelElement u(1);
        for (const auto& [w, c] : x.terms()) u.add_term(w, CMat::scalar(c));
        return u;
    }

    /// m (x) x for a fixed matrix m.
    static MatrixLevelElement tensor(const CMat& m, const GroupAlgebraElement& x) {
        MatrixLevelElement u(m.dim());
        for (const auto& [w, c] : x.terms()) {
            CMat mc = m;
            mc *= c;
            u.add_term(w, mc);
        }
        return u;
    }

    int level() const { return level_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const Word& s, const CMat& m) {
        if (m.dim() != level_) throw input_error("matrix coefficient has wrong dimension");
        auto it = terms_.find(s);
        if (it == terms_.end()) {
            if (!m.negligible(kDropTolerance)) terms_.emplace(s, m);
        } else {
            it->second += m;
            if (it->second.negligible(kDropTolerance)) terms_.erase(it);
        }
    }

    CMat coefficient(const Word& s) const {
        auto it = terms_.find(s);
        return it == terms_.end() ? CMat(level_) : it->second;
    }

    MatrixLevelElement& operator+=(const MatrixLevelElement& o) {
        if (o.level_ != level_) throw input_error("matrix level mismatch");
        for (const auto& [w, m] : o.terms_) add_term(w, m);
        return *this;
    }

    MatrixLevelElement& operator-=(const MatrixLevelElement& o) {
        if (o.level_ != level_) throw input_error("matrix level mismatch");
        for (const auto& [w, m] : o.terms_) {
            CMat neg = m;
            neg *= -1.0;
            add_term(w, neg);
        }
        return *this;
    }

    friend MatrixLevelElement operator+(MatrixLevelElement a, const MatrixLevelElement& b) { return a += b; }
    friend MatrixLevelElement operator-(MatrixLevelElement a, const MatrixLevelElement& b) { return a -= b; }

    MatrixLevelElement scaled(complexd c) const {
        MatrixLevelElement r(level_);
        for (const auto& [w, m] : terms_) {
            CMat mc = m;
            mc *= c;
            r.add_term(w, mc);
        }
        return r;
    }

    friend MatrixLevelElement operator*(const MatrixLevelElement& x, const MatrixLevelElement& y) {
        if (x.level_ != y.level_) throw input_error("matrix level mismatch");
        MatrixLevelElement r(x.level_);
        for (const auto& [u, a] : x.terms_)
            for (const auto& [v, b] : y.terms_) r.add_term(u * v, a * b);
        return r;
    }

    MatrixLevelElement adjoint() const {
        MatrixLevelElement r(level_);
        for (const auto& [w, m] : terms_) r.add_term(w.inverse(), m.conj_transpose());
        return r;
    }

    MatrixLevelElement length_component(int d) const {
        MatrixLevelElement r(level_);
        for (const auto& [w, m] : terms_)
            if (w.length() == d) r.add_term(w, m);
        return r;
    }

    int support_radius() const {
        int r = 0;
        for (const auto& [w, m] : terms_) r = std::max(r, w.length());
        return r;
    }

private:
    int level_;
    TermMap terms_;
};

}  // namespace freeframe
