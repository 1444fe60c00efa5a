#pragma once

// Generators, exact counting and set operations for the explicit language
// families: binomial, threshold, Dyck, divisibility, parity, permutation,
// palindrome and xor.

#include "expr.hpp"

#include <gmpxx.h>

#include <functional>
#include <numeric>
#include <string>

namespace rexlen {

enum class Family { Binomial, Threshold, Dyck, Divisibility, Parity, Permutation, Palindrome, Xor };

struct FamilySpec {
    Family family;
    int n = 0; // word length (for dyck/palindrome: half the word length)
    int k = 0;
    int p = 0;

    std::string text() const;
};

struct InvalidFamily : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void validate(const FamilySpec& s) {
    switch (s.family) {
    case Family::Binomial:
    case Family::Threshold:
        if (s.n < 1 || s.k < 0 || s.k > s.n) throw InvalidFamily("binomial/threshold need 0 <= k <= n, n >= 1");
        break;
    case Family::Dyck:
        if (s.n < 1) throw InvalidFamily("dyck needs 2n >= 2");
        break;
    case Family::Divisibility:
        if (s.n < 1 || s.p < 3 || s.p % 2 == 0) throw InvalidFamily("divisibility needs n >= 1 and odd p > 2");
        break;
    case Family::Parity:
        if (s.n < 0 || s.k < 1) throw InvalidFamily("parity needs n >= 0 and k >= 1");
        break;
    case Family::Permutation:
        if (s.n < 1) throw InvalidFamily("permutation needs n >= 1");
        break;
    case Family::Palindrome:
        if (s.n < 1) throw InvalidFamily("palindrome needs 2n >= 2");
        break;
    case Family::Xor:
        if (s.n < 1) throw InvalidFamily("xor needs n >= 1");
        break;
    }
}

} // namespace detail

inline FamilySpec make_family(Family f, int n, int k = 0, int p = 0) {
    FamilySpec s{f, n, k, p};
    detail::validate(s);
    return s;
}

// CLI syntax: "binomial:n=8,k=3", "div:n=8,p=5", "dyck:2n=6", "parity:n=6,k=3",
// "perm:n=3", "palindrome:2n=4", "threshold:n=8,k=3", "xor:n=5".
inline FamilySpec parse_family(const std::string& text) {
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    FamilySpec s{};
    bool want_k = false, want_p = false, two_n = false;
    if (name == "binomial") { s.family = Family::Binomial; want_k = true; }
    else if (name == "threshold") { s.family = Family::Threshold; want_k = true; }
    else if (name == "dyck") { s.family = Family::Dyck; two_n = true; }
    else if (name == "div") { s.family = Family::Divisibility; want_p = true; }
    else if (name == "parity") { s.family = Family::Parity; want_k = true; }
    else if (name == "perm") { s.family = Family::Permutation; }
    else if (name == "palindrome") { s.family = Family::Palindrome; two_n = true; }
    else if (name == "xor") { s.family = Family::Xor; }
    else throw InvalidFamily("unknown family '" + name + "'");

    bool have_n = false, have_k = false, have_p = false;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = item.find('=');
            if (eq == std::string::npos) throw InvalidFamily("expected key=value in '" + item + "'");
            std::string key = item.substr(0, eq);
            int value = 0;
            try {
                value = std::stoi(item.substr(eq + 1));
            } catch (...) {
                throw InvalidFamily("bad integer in '" + item + "'");
            }
            if (key == "n" && !two_n) { s.n = value; have_n = true; }
            else if (key == "2n" && two_n) {
                if (value % 2 != 0) throw InvalidFamily("2n must be even");
                s.n = value / 2;
                have_n = true;
            }
            else if (key == "k" && want_k) { s.k = value; have_k = true; }
            else if (key == "p" && want_p) { s.p = value; have_p = true; }
            else throw InvalidFamily("unexpected key '" + key + "' for family " + name);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (!have_n) throw InvalidFamily("missing n parameter");
    if (want_k && !have_k) throw InvalidFamily("missing k parameter");
    if (want_p && !have_p) throw InvalidFamily("missing p parameter");
    detail::validate(s);
    return s;
}

inline std::string FamilySpec::text() const {
    switch (family) {
    case Family::Binomial: return "binomial:n=" + std::to_string(n) + ",k=" + std::to_string(k);
    case Family::Threshold: return "threshold:n=" + std::to_string(n) + ",k=" + std::to_string(k);
    case Family::Dyck: return "dyck:2n=" + std::to_string(2 * n);
    case Family::Divisibility: return "div:n=" + std::to_string(n) + ",p=" + std::to_string(p);
    case Family::Parity: return "parity:n=" + std::to_string(n) + ",k=" + std::to_string(k);
    case Family::Permutation: return "perm:n=" + std::to_string(n);
    case Family::Palindrome: return "palindrome:2n=" + std::to_string(2 * n);
    case Family::Xor: return "xor:n=" + std::to_string(n);
    }
    return {};
}

inline Alphabet family_alphabet(const FamilySpec& s) {
    switch (s.family) {
    case Family::Parity: return Alphabet::numeric(s.k);
    case Family::Permutation: return Alphabet::numeric(s.n);
    default: return Alphabet::binary();
    }
}

// Binary convention: letter 1 displays '0', letter 2 displays '1'.
constexpr int BIT0 = 1;
constexpr int BIT1 = 2;

inline bool is_dyck_word(const Word& w) {
    int height = 0;
    for (int c : w) {
        height += (c == BIT0) ? 1 : -1;
        if (height < 0) return false;
    }
    return height == 0;
}

// ---------------------------------------------------------------------------
// Exact counting

struct ExactCount {
    mpz_class value;
    std::string formula_tag;
};

inline mpz_class binomial_coeff(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class factorial(int n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline mpz_class pow_int(int base, int exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return r;
}

// Probability that an n-step uniform walk on the k-cube started at the origin
// ends at q: p_q = 2^{-k} sum_j (1-2j/k)^n sum_i (-1)^i C(|q|,i) C(k-|q|,j-i).
inline mpq_class hypercube_prob(int n, int k, const std::vector<int>& q) {
    if (static_cast<int>(q.size()) != k) throw SemanticsError("q must have k bits");
    int ones = 0;
    for (int b : q) {
        if (b != 0 && b != 1) throw SemanticsError("q must be a 0/1 vector");
        ones += b;
    }
    mpq_class total = 0;
    for (int j = 0; j <= k; ++j) {
        mpz_class inner = 0;
        for (int i = 0; i <= ones; ++i) {
            mpz_class term = binomial_coeff(ones, i) * binomial_coeff(k - ones, j - i);
            if (i % 2 == 0) inner += term;
            else inner -= term;
        }
        // (1 - 2j/k)^n = ((k-2j)/k)^n
        mpz_class num(k - 2 * j);
        mpz_class num_pow;
        mpz_pow_ui(num_pow.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n));
        mpq_class walk(num_pow, pow_int(k, n));
        walk.canonicalize();
        total += walk * mpq_class(inner);
    }
    mpq_class result = total / pow_int(2, k);
    result.canonicalize();
    return result;
}

inline ExactCount count(const FamilySpec& s) {
    detail::validate(s);
    switch (s.family) {
    case Family::Binomial:
        return {binomial_coeff(s.n, s.k), "binomial coefficient C(n,k)"};
    case Family::Threshold: {
        mpz_class total = 0;
        for (int j = s.k; j <= s.n; ++j) total += binomial_coeff(s.n, j);
        return {total, "sum of C(n,j) for j >= k"};
    }
    case Family::Dyck: {
        mpz_class c = binomial_coeff(2 * s.n, s.n) / (s.n + 1);
        return {c, "Catalan number C(2n,n)/(n+1)"};
    }
    case Family::Divisibility: {
        // multiples of p among 0..2^n-1
        mpz_class top = pow_int(2, s.n) - 1;
        return {top / s.p + 1, "floor((2^n-1)/p)+1"};
    }
    case Family::Parity: {
        mpq_class p0 = hypercube_prob(s.n, s.k, std::vector<int>(s.k, 0));
        mpq_class val = p0 * pow_int(s.k, s.n);
        val.canonicalize();
        if (val.get_den() != 1) throw SemanticsError("parity count must be an integer");
        return {val.get_num(), "k^n * p_0 from the k-cube walk"};
    }
    case Family::Permutation:
        return {factorial(s.n), "n!"};
    case Family::Palindrome:
        return {pow_int(2, s.n), "2^n"};
    case Family::Xor:
        return {pow_int(2, s.n - 1), "2^(n-1)"};
    }
    throw InvalidFamily("unsupported family");
}

// ---------------------------------------------------------------------------
// Generators

struct GenerateOptions {
    std::size_t budget = 2'000'000;
};

inline Language generate(const FamilySpec& s, const GenerateOptions& opt = {}) {
    detail::validate(s);
    std::vector<Word> out;
    auto guard = [&] { detail::check_budget(out.size(), opt.budget); };

    switch (s.family) {
    case Family::Binomial:
    case Family::Threshold:
    case Family::Xor: {
        if (s.n > 26) throw BudgetError("binary enumeration limited to n <= 26");
        for (long m = 0; m < (1L << s.n); ++m) {
            int ones = __builtin_popcountl(static_cast<unsigned long>(m));
            bool keep = false;
            if (s.family == Family::Binomial) keep = ones == s.k;
            else if (s.family == Family::Threshold) keep = ones >= s.k;
            else keep = ones % 2 == 0;
            if (!keep) continue;
            Word w(s.n);
            for (int i = 0; i < s.n; ++i) w[i] = (m >> (s.n - 1 - i)) & 1 ? BIT1 : BIT0;
            out.push_back(std::move(w));
            guard();
        }
        return Language(2, std::move(out));
    }
    case Family::Dyck: {
        Word w;
        std::function<void(int, int)> rec = [&](int open, int closed) {
            if (static_cast<int>(w.size()) == 2 * s.n) {
                out.push_back(w);
                guard();
                return;
            }
            if (open < s.n) {
                w.push_back(BIT0);
                rec(open + 1, closed);
                w.pop_back();
            }
            if (closed < open) {
                w.push_back(BIT1);
                rec(open, closed + 1);
                w.pop_back();
            }
        };
        rec(0, 0);
        return Language(2, std::move(out));
    }
    case Family::Divisibility: {
        if (s.n > 26) throw BudgetError("binary enumeration limited to n <= 26");
        for (long m = 0; m < (1L << s.n); ++m) {
            if (m % s.p != 0) continue;
            Word w(s.n);
            for (int i = 0; i < s.n; ++i) w[i] = (m >> (s.n - 1 - i)) & 1 ? BIT1 : BIT0;
            out.push_back(std::move(w));
            guard();
        }
        return Language(2, std::move(out));
    }
    case Family::Parity: {
        Word w;
        std::vector<int> parity(s.k, 0);
        std::function<void(int, int)> rec = [&](int pos, int odd) {
            if (odd > s.n - pos) return; // cannot even out in the remaining steps
            if (pos == s.n) {
                out.push_back(w);
                guard();
                return;
            }
            for (int a = 1; a <= s.k; ++a) {
                w.push_back(a);
                int delta = parity[a - 1] ? -1 : 1;
                parity[a - 1] ^= 1;
                rec(pos + 1, odd + delta);
                parity[a - 1] ^= 1;
                w.pop_back();
            }
        };
        rec(0, 0);
        return Language(s.k, std::move(out));
    }
    case Family::Permutation: {
        Word w(s.n);
        std::iota(w.begin(), w.end(), 1);
        do {
            out.push_back(w);
            guard();
        } while (std::next_permutation(w.begin(), w.end()));
        return Language(s.n, std::move(out));
    }
    case Family::Palindrome: {
        if (s.n > 24) throw BudgetError("palindrome enumeration limited to 2n <= 48");
        for (long m = 0; m < (1L << s.n); ++m) {
            Word w(2 * s.n);
            for (int i = 0; i < s.n; ++i) {
                int bit = (m >> (s.n - 1 - i)) & 1 ? BIT1 : BIT0;
                w[i] = bit;
                w[2 * s.n - 1 - i] = bit;
            }
            out.push_back(std::move(w));
            guard();
        }
        return Language(2, std::move(out));
    }
    }
    throw InvalidFamily("unsupported family");
}

// ---------------------------------------------------------------------------
// Set operations

inline Language intersect(const Language& a, const Language& b) {
    if (a.alphabet_size() != b.alphabet_size())
        throw SemanticsError("intersection needs a common alphabet");
    std::vector<Word> out;
    for (const Word& w : a.words())
        if (b.contains(w)) out.push_back(w);
    return Language(a.alphabet_size(), std::move(out));
}

inline void shuffle_words(const Word& v, const Word& w, std::set<Word>& out, std::size_t budget) {
    Word cur;
    cur.reserve(v.size() + w.size());
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
        if (i == v.size() && j == w.size()) {
            out.insert(cur);
            detail::check_budget(out.size(), budget);
            return;
        }
        if (i < v.size()) {
            cur.push_back(v[i]);
            rec(i + 1, j);
            cur.pop_back();
        }
        if (j < w.size()) {
            cur.push_back(w[j]);
            rec(i, j + 1);
            cur.pop_back();
        }
    };
    rec(0, 0);
}

inline Language shuffle(const Language& a, const Language& b, std::size_t budget = 2'000'000) {
    if (a.alphabet_size() != b.alphabet_size())
        throw SemanticsError("shuffle needs a common alphabet");
    std::set<Word> out;
    for (const Word& v : a.words())
        for (const Word& w : b.words())
            shuffle_words(v, w, out, budget);
    return Language(a.alphabet_size(), std::vector<Word>(out.begin(), out.end()));
}

inline Language n_slice(const Language& l, int n) {
    std::vector<Word> out;
    for (const Word& w : l.words())
        if (static_cast<int>(w.size()) == n) out.push_back(w);
    return Language(l.alphabet_size(), std::move(out));
}

} // namespace rexlen
