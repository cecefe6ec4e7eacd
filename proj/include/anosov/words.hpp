#pragma once

// Exact combinatorics of free groups F_n (n >= 2): freely reduced words,
// cyclic reduction, conjugacy-class enumeration and abelianization.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "anosov/error.hpp"

namespace anosov {

/// A generator index together with an exponent of +1 or -1.
struct Letter {
    int gen = 0;
    int exp = 1;

    constexpr Letter inverse() const { return {gen, -exp}; }
    constexpr bool cancels(Letter other) const { return gen == other.gen && exp == -other.exp; }

    /// Total order on the alphabet: a < A < b < B < ...
    constexpr int code() const { return 2 * gen + (exp < 0 ? 1 : 0); }
    static constexpr Letter from_code(int c) { return {c / 2, (c % 2) ? -1 : 1}; }

    friend constexpr bool operator==(Letter, Letter) = default;
    friend constexpr auto operator<=>(Letter l, Letter r) { return l.code() <=> r.code(); }
};

/// Freely reduced word in F_n. Only reduce() and the group operations build
/// one, so the reduced invariant always holds.
class Word {
public:
    Word() = default;
    explicit Word(int rank) : rank_(rank) {}

    int rank() const { return rank_; }
    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    friend bool operator==(const Word&, const Word&) = default;
    /// Shortlex order: length first, then letter codes.
    friend std::strong_ordering operator<=>(const Word& l, const Word& r) {
        if (auto c = l.rank_ <=> r.rank_; c != 0) return c;
        if (auto c = l.letters_.size() <=> r.letters_.size(); c != 0) return c;
        return std::lexicographical_compare_three_way(l.letters_.begin(), l.letters_.end(),
                                                      r.letters_.begin(), r.letters_.end());
    }

private:
    friend Word reduce(int rank, const std::vector<Letter>& letters);
    int rank_ = 0;
    std::vector<Letter> letters_;
};

/// Free reduction. Throws InvalidArgument on a generator outside 0..rank-1
/// or an exponent other than +-1.
inline Word reduce(int rank, const std::vector<Letter>& letters) {
    Word w(rank);
    for (Letter l : letters) {
        if (l.gen < 0 || l.gen >= rank) {
            throw InvalidArgument("unknown generator index " + std::to_string(l.gen));
        }
        if (l.exp != 1 && l.exp != -1) throw InvalidArgument("letter exponent must be +1 or -1");
        if (!w.letters_.empty() && w.letters_.back().cancels(l)) {
            w.letters_.pop_back();
        } else {
            w.letters_.push_back(l);
        }
    }
    return w;
}

inline Word generator(int rank, int gen, int exp = 1) { return reduce(rank, {{gen, exp}}); }

inline Word multiply(const Word& u, const Word& v) {
    if (u.rank() != v.rank()) throw InvalidArgument("multiply: words from different free groups");
    std::vector<Letter> letters = u.letters();
    letters.insert(letters.end(), v.letters().begin(), v.letters().end());
    return reduce(u.rank(), letters);
}

inline Word invert(const Word& w) {
    std::vector<Letter> letters;
    letters.reserve(w.length());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) letters.push_back(it->inverse());
    return reduce(w.rank(), letters);
}

inline Word power(const Word& w, int n) {
    Word base = n < 0 ? invert(w) : w;
    Word out(w.rank());
    for (int i = 0; i < std::abs(n); ++i) out = multiply(out, base);
    return out;
}

inline bool is_cyclically_reduced(const Word& w) {
    return w.length() < 2 || !w.letters().front().cancels(w.letters().back());
}

/// Strips matching inverse letters from both ends; the result is conjugate to w.
inline Word cyclic_reduction(const Word& w) {
    const auto& l = w.letters();
    std::size_t lo = 0, hi = l.size();
    while (hi - lo >= 2 && l[lo].cancels(l[hi - 1])) {
        ++lo;
        --hi;
    }
    return reduce(w.rank(), std::vector<Letter>(l.begin() + static_cast<std::ptrdiff_t>(lo),
                                                l.begin() + static_cast<std::ptrdiff_t>(hi)));
}

/// Minimal word length over the conjugacy class; exact in a free group.
inline int translation_length(const Word& w) { return static_cast<int>(cyclic_reduction(w).length()); }

/// Exponent-sum vector, the image of w in Z^n.
inline std::vector<int> abelianize(const Word& w) {
    std::vector<int> v(static_cast<std::size_t>(w.rank()), 0);
    for (Letter l : w.letters()) v[static_cast<std::size_t>(l.gen)] += l.exp;
    return v;
}

inline Word rotate(const Word& w, std::size_t shift) {
    std::vector<Letter> l = w.letters();
    if (!l.empty()) std::rotate(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(shift % l.size()), l.end());
    return reduce(w.rank(), l);
}

/// Lexicographically least cyclic rotation of a cyclically reduced word.
inline Word least_rotation(const Word& w) {
    Word best = w;
    for (std::size_t s = 1; s < w.length(); ++s) {
        Word r = rotate(w, s);
        if (r < best) best = std::move(r);
    }
    return best;
}

/// Conjugacy class representative: cyclically reduced, least rotation, with
/// its decomposition w = root^power (root not a proper power).
struct ClassRep {
    Word word;
    bool is_primitive = true;
    Word root;
    int power = 1;
};

inline ClassRep class_rep(const Word& w) {
    ClassRep rep;
    rep.word = least_rotation(cyclic_reduction(w));
    const auto& l = rep.word.letters();
    const std::size_t n = l.size();
    rep.root = rep.word;
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = l[i] == l[i - p];
        if (periodic) {
            rep.root = reduce(rep.word.rank(), std::vector<Letter>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(p)));
            rep.power = static_cast<int>(n / p);
            rep.is_primitive = false;
            break;
        }
    }
    return rep;
}

/// Streams one representative per cyclic-rotation class of cyclically
/// reduced words of length 1..max_length, in shortlex order of the
/// representatives. The callback returns false to stop early.
inline void for_each_class(int rank, int max_length, const std::function<bool(const ClassRep&)>& visit) {
    if (rank < 1) throw InvalidArgument("for_each_class: rank must be positive");
    const int alphabet = 2 * rank;
    for (int len = 1; len <= max_length; ++len) {
        std::vector<int> codes(static_cast<std::size_t>(len), 0);
        // Depth-first walk over reduced words in lexicographic order.
        std::function<bool(int)> extend = [&](int pos) -> bool {
            if (pos == len) {
                std::vector<Letter> letters(codes.size());
                std::transform(codes.begin(), codes.end(), letters.begin(), Letter::from_code);
                Word w = reduce(rank, letters);
                if (!is_cyclically_reduced(w)) return true;
                std::vector<Letter> rotated(letters.size());
                for (int s = 1; s < len; ++s) {
                    std::rotate_copy(letters.begin(), letters.begin() + s, letters.end(), rotated.begin());
                    if (rotated < letters) return true;  // not the least rotation
                }
                return visit(class_rep(w));
            }
            for (int c = 0; c < alphabet; ++c) {
                if (pos > 0 && Letter::from_code(c).cancels(Letter::from_code(codes[static_cast<std::size_t>(pos - 1)]))) {
                    continue;
                }
                codes[static_cast<std::size_t>(pos)] = c;
                if (!extend(pos + 1)) return false;
            }
            return true;
        };
        if (!extend(0)) return;
    }
}

inline std::vector<ClassRep> enumerate_classes(int rank, int max_length) {
    std::vector<ClassRep> out;
    for_each_class(rank, max_length, [&](const ClassRep& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

/// Free group of rank n >= 2 with named generators. Words print as
/// space-separated names; an uppercased name denotes the inverse.
class FreeGroup {
public:
    explicit FreeGroup(int rank) : FreeGroup(default_names(rank)) {}

    explicit FreeGroup(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() < 2) throw InvalidArgument("free group rank must be at least 2");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto& n = names_[i];
            if (n.empty() || !std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; })) {
                throw InvalidArgument("invalid generator name '" + n + "'");
            }
            if (upper(n) == n) throw InvalidArgument("generator name '" + n + "' has no distinct inverse spelling");
            for (std::size_t j = 0; j < names_.size(); ++j) {
                if (i != j && (names_[j] == n || names_[j] == upper(n))) {
                    throw InvalidArgument("generator names collide: '" + n + "'");
                }
            }
        }
    }

    int rank() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

    Word identity() const { return Word(rank()); }
    Word gen(int i, int exp = 1) const { return generator(rank(), i, exp); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < rank(); ++i) {
            if (names_[static_cast<std::size_t>(i)] == name) return i;
        }
        throw InvalidArgument("unknown generator '" + name + "'");
    }

    /// Accepts "a b A b". When every name is a single character the compact
    /// form "abAb" is accepted too.
    Word parse(const std::string& text) const {
        std::vector<Letter> letters;
        std::istringstream in(text);
        std::string tok;
        const bool compact = std::all_of(names_.begin(), names_.end(), [](const std::string& s) { return s.size() == 1; });
        while (in >> tok) {
            if (auto l = lookup(tok)) {
                letters.push_back(*l);
            } else if (compact) {
                for (char c : tok) {
                    auto l1 = lookup(std::string(1, c));
                    if (!l1) throw InvalidArgument("unknown generator '" + std::string(1, c) + "' in word '" + text + "'");
                    letters.push_back(*l1);
                }
            } else {
                throw InvalidArgument("unknown generator '" + tok + "' in word '" + text + "'");
            }
        }
        return reduce(rank(), letters);
    }

    std::string format(const Word& w) const {
        if (w.rank() != rank()) throw InvalidArgument("format: word from a different free group");
        std::string out;
        for (Letter l : w.letters()) {
            if (!out.empty()) out += ' ';
            const auto& n = names_[static_cast<std::size_t>(l.gen)];
            out += l.exp > 0 ? n : upper(n);
        }
        return out;
    }

    friend bool operator==(const FreeGroup&, const FreeGroup&) = default;

private:
    static std::vector<std::string> default_names(int rank) {
        if (rank < 2 || rank > 26) throw InvalidArgument("default generator names need 2 <= rank <= 26");
        std::vector<std::string> n;
        for (int i = 0; i < rank; ++i) n.emplace_back(1, static_cast<char>('a' + i));
        return n;
    }

    static std::string upper(std::string s) {
        for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }

    std::optional<Letter> lookup(const std::string& tok) const {
        for (int i = 0; i < rank(); ++i) {
            const auto& n = names_[static_cast<std::size_t>(i)];
            if (tok == n) return Letter{i, 1};
            if (tok == upper(n)) return Letter{i, -1};
        }
        return std::nullopt;
    }

    std::vector<std::string> names_;
};

}  // namespace anosov
