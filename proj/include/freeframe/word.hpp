#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "freeframe/common.hpp"

namespace freeframe {

// Letters of F_2 are serialized as a, b, A, B with A = a^{-1}, B = b^{-1}.
// The canonical word order is by length first, then lexicographic with
// a < b < A < B; the identity (empty word) is minimal.

inline bool is_letter(char c) { return c == 'a' || c == 'b' || c == 'A' || c == 'B'; }

inline char inverse_letter(char c) {
    switch (c) {
        case 'a': return 'A';
        case 'A': return 'a';
        case 'b': return 'B';
        case 'B': return 'b';
    }
    throw input_error(std::string("invalid letter: ") + c);
}

inline int letter_rank(char c) {
    switch (c) {
        case 'a': return 0;
        case 'b': return 1;
        case 'A': return 2;
        case 'B': return 3;
    }
    throw input_error(std::string("invalid letter: ") + c);
}

inline constexpr std::array<char, 4> kLetters = {'a', 'b', 'A', 'B'};

/// A fully reduced word in F_2. Immutable after construction.
class Word {
public:
    Word() = default;

    /// Reduces an arbitrary letter sequence. "e" is accepted for the identity.
    static Word parse(std::string_view text) {
        if (text == "e") return Word();
        std::string stack;
        stack.reserve(text.size());
        for (char c : text) {
            if (!is_letter(c)) throw input_error(std::string("invalid letter: ") + c);
            if (!stack.empty() && stack.back() == inverse_letter(c))
                stack.pop_back();
            else
                stack.push_back(c);
        }
        Word w;
        w.letters_ = std::move(stack);
        return w;
    }

    /// Wraps a sequence that is already reduced (internal fast path).
    static Word from_reduced(std::string letters) {
        Word w;
        w.letters_ = std::move(letters);
        return w;
    }

    const std::string& letters() const { return letters_; }
    int length() const { return static_cast<int>(letters_.size()); }
    bool is_identity() const { return letters_.empty(); }

    std::string str(bool pretty_identity = false) const {
        if (letters_.empty() && pretty_identity) return "e";
        return letters_;
    }

    Word inverse() const {
        std::string inv;
        inv.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            inv.push_back(inverse_letter(*it));
        return from_reduced(std::move(inv));
    }

    friend Word operator*(const Word& lhs, const Word& rhs) {
        std::string stack = lhs.letters_;
        for (char c : rhs.letters_) {
            if (!stack.empty() && stack.back() == inverse_letter(c))
                stack.pop_back();
            else
                stack.push_back(c);
        }
        return from_reduced(std::move(stack));
    }

    bool operator==(const Word& o) const { return letters_ == o.letters_; }

    // Length-then-lex order with a < b < A < B.
    std::strong_ordering operator<=>(const Word& o) const {
        if (letters_.size() != o.letters_.size())
            return letters_.size() <=> o.letters_.size();
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            int l = letter_rank(letters_[i]);
            int r = letter_rank(o.letters_[i]);
            if (l != r) return l <=> r;
        }
        return std::strong_ordering::equal;
    }

private:
    std::string letters_;
};

inline Word reduce(std::string_view raw) { return Word::parse(raw); }
inline Word multiply(const Word& a, const Word& b) { return a * b; }
inline Word inverse(const Word& w) { return w.inverse(); }
inline Word identity_word() { return Word(); }

namespace detail {
// 3^k for k <= 39 (the largest power fitting comfortably in 64 bits here).
inline std::uint64_t pow3(int k) {
    static const auto table = [] {
        std::array<std::uint64_t, 40> t{};
        t[0] = 1;
        for (int i = 1; i < 40; ++i) t[i] = 3 * t[i - 1];
        return t;
    }();
    if (k < 0 || k >= 40) throw capacity_error("3^k out of range");
    return table[static_cast<std::size_t>(k)];
}
}  // namespace detail

/// |sphere(d)| = 4*3^{d-1} for d >= 1, and 1 for d = 0.
inline std::uint64_t sphere_size(int d) {
    if (d < 0) throw input_error("sphere radius must be nonnegative");
    if (d == 0) return 1;
    return 4 * detail::pow3(d - 1);
}

/// |ball(k)| = 2*3^k - 1.
inline std::uint64_t ball_size(int k) {
    if (k < 0) throw input_error("ball radius must be nonnegative");
    return 2 * detail::pow3(k) - 1;
}

/// All reduced words of length d, in canonical order.
inline std::vector<Word> sphere(int d, int radius_cap = kDefaultRadiusCap) {
    if (d < 0) throw input_error("sphere radius must be nonnegative");
    if (d > radius_cap) throw capacity_error("sphere radius exceeds enumeration cap");
    std::vector<Word> out;
    out.reserve(sphere_size(d));
    if (d == 0) {
        out.emplace_back();
        return out;
    }
    std::string cur;
    cur.reserve(d);
    // Depth-first in letter-rank order yields lexicographic order per length.
    auto walk = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == d) {
            out.push_back(Word::from_reduced(cur));
            return;
        }
        for (char c : kLetters) {
            if (!cur.empty() && c == inverse_letter(cur.back())) continue;
            cur.push_back(c);
            self(self);
            cur.pop_back();
        }
    };
    walk(walk);
    return out;
}

/// Concatenation sphere(0), ..., sphere(k): the ball in canonical order.
inline std::vector<Word> ball(int k, int radius_cap = kDefaultRadiusCap) {
    if (k < 0) throw input_error("ball radius must be nonnegative");
    if (k > radius_cap) throw capacity_error("ball radius exceeds enumeration cap");
    std::vector<Word> out;
    out.reserve(ball_size(k));
    for (int d = 0; d <= k; ++d) {
        auto s = sphere(d, radius_cap);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

/// Position of w in the canonical enumeration (identity has rank 0).
inline std::uint64_t rank(const Word& w) {
    int d = w.length();
    if (d == 0) return 0;
    if (d > 39) throw capacity_error("word too long to rank");
    const std::string& ls = w.letters();
    std::uint64_t idx = static_cast<std::uint64_t>(letter_rank(ls[0])) * detail::pow3(d - 1);
    for (int t = 1; t < d; ++t) {
        char excluded = inverse_letter(ls[t - 1]);
        int pos = 0;
        for (char c : kLetters) {
            if (c == excluded) continue;
            if (c == ls[t]) break;
            ++pos;
        }
        idx += static_cast<std::uint64_t>(pos) * detail::pow3(d - 1 - t);
    }
    return ball_size(d - 1) + idx;
}

/// Inverse of rank(). r must lie below ball_size(max_radius).
inline Word unrank(std::uint64_t r, int max_radius = kMaxBlock) {
    if (r == 0) return Word();
    int d = 1;
    while (d <= max_radius && ball_size(d) <= r) ++d;
    if (d > max_radius) throw input_error("rank out of enumerated range");
    std::uint64_t idx = r - ball_size(d - 1);
    std::string ls;
    ls.reserve(d);
    std::uint64_t q = idx / detail::pow3(d - 1);
    idx %= detail::pow3(d - 1);
    ls.push_back(kLetters[static_cast<std::size_t>(q)]);
    for (int t = 1; t < d; ++t) {
        char excluded = inverse_letter(ls.back());
        std::uint64_t p = idx / detail::pow3(d - 1 - t);
        idx %= detail::pow3(d - 1 - t);
        int pos = 0;
        for (char c : kLetters) {
            if (c == excluded) continue;
            if (pos == static_cast<int>(p)) {
                ls.push_back(c);
                break;
            }
            ++pos;
        }
    }
    return Word::from_reduced(std::move(ls));
}

}  // namespace freeframe
