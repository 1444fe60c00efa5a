#pragma once

// Test-only helpers: seeded expression generators and independent brute-force
// oracles. Nothing here is used by the library itself.

#include <rexlen/expr.hpp>

#include <gmpxx.h>

#include <map>
#include <random>

namespace testutil {

using namespace rexlen;

// Homogeneous, epsilon-free expression of the given degree. Union nesting is
// depth-limited so sizes stay reasonable.
inline ExprPtr random_homogeneous(std::mt19937& rng, int degree, int alphabet, int depth = 0) {
    auto coin = [&](double p) { return std::uniform_real_distribution<>(0, 1)(rng) < p; };
    if (degree == 1) {
        if (depth < 3 && coin(0.3))
            return Expr::make_union(random_homogeneous(rng, 1, alphabet, depth + 1),
                                    random_homogeneous(rng, 1, alphabet, depth + 1));
        std::uniform_int_distribution<int> d(1, alphabet);
        return Expr::make_letter(d(rng));
    }
    if (depth < 3 && coin(0.25))
        return Expr::make_union(random_homogeneous(rng, degree, alphabet, depth + 1),
                                random_homogeneous(rng, degree, alphabet, depth + 1));
    std::uniform_int_distribution<int> d(1, degree - 1);
    int left = d(rng);
    return Expr::make_concat(random_homogeneous(rng, left, alphabet, depth),
                             random_homogeneous(rng, degree - left, alphabet, depth + 1));
}

// Arbitrary expression (may contain stars and epsilons); for printer tests.
inline ExprPtr random_any(std::mt19937& rng, int alphabet, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth >= 5 ? 1 : 9);
    int c = pick(rng);
    if (c <= 0) return Expr::make_eps();
    if (c <= 1 || depth >= 5) {
        std::uniform_int_distribution<int> d(1, alphabet);
        return Expr::make_letter(d(rng));
    }
    if (c <= 4) return Expr::make_union(random_any(rng, alphabet, depth + 1), random_any(rng, alphabet, depth + 1));
    if (c <= 7) return Expr::make_concat(random_any(rng, alphabet, depth + 1), random_any(rng, alphabet, depth + 1));
    return Expr::make_star(random_any(rng, alphabet, depth + 1));
}

// Number of distinct derivations of w in e (star-free). This is the count of
// singleton subexpressions in sum-product normal form describing w.
inline mpz_class derivation_count(const ExprPtr& e, const Word& w) {
    // der over spans [i,j)
    auto rec = [&](auto&& self, const ExprPtr& u, std::size_t i, std::size_t j) -> mpz_class {
        switch (u->kind) {
        case ExprKind::Letter:
            return (j == i + 1 && w[i] == u->letter) ? 1 : 0;
        case ExprKind::Epsilon:
            return i == j ? 1 : 0;
        case ExprKind::Union:
            return self(self, u->left, i, j) + self(self, u->right, i, j);
        case ExprKind::Concat: {
            mpz_class total = 0;
            for (std::size_t m = i; m <= j; ++m) {
                mpz_class l = self(self, u->left, i, m);
                if (l == 0) continue;
                total += l * self(self, u->right, m, j);
            }
            return total;
        }
        case ExprKind::Star:
            throw SemanticsError("derivation counting is star-free only");
        }
        return 0;
    };
    return rec(rec, e, 0, w.size());
}

// Minimal expression sizes by exhaustive bottom-up enumeration of all
// star-free expressions (a second, independent route to the same numbers as
// the library's oracle).
inline std::map<std::string, int> enumerate_min_sizes(int max_size, int alphabet,
                                                      std::size_t max_words, int max_len) {
    std::map<std::string, int> best;
    std::vector<std::vector<Language>> by_size(static_cast<std::size_t>(max_size) + 1);
    auto consider = [&](const Language& l, int s) {
        for (const Word& w : l.words())
            if (static_cast<int>(w.size()) > max_len) return;
        std::string k = l.key();
        if (best.count(k)) return;
        best[k] = s;
        by_size[static_cast<std::size_t>(s)].push_back(l);
    };
    consider(Language(alphabet, {Word{}}), 1);
    for (int a = 1; a <= alphabet; ++a) consider(Language(alphabet, {Word{a}}), 1);
    for (int s = 3; s <= max_size; s += 2) {
        for (int s1 = 1; s1 <= s - 2; ++s1) {
            int s2 = s - 1 - s1;
            if (s2 < 1) continue;
            for (std::size_t i = 0; i < by_size[static_cast<std::size_t>(s1)].size(); ++i)
                for (std::size_t j = 0; j < by_size[static_cast<std::size_t>(s2)].size(); ++j) {
                    Language a = by_size[static_cast<std::size_t>(s1)][i];
                    Language b = by_size[static_cast<std::size_t>(s2)][j];
                    std::vector<Word> un = a.words();
                    un.insert(un.end(), b.words().begin(), b.words().end());
                    Language u(alphabet, un);
                    if (u.size() <= max_words) consider(u, s);
                    std::vector<Word> pr;
                    bool ok = true;
                    for (const Word& x : a.words()) {
                        for (const Word& y : b.words()) {
                            Word w = x;
                            w.insert(w.end(), y.begin(), y.end());
                            if (static_cast<int>(w.size()) > max_len) { ok = false; break; }
                            pr.push_back(std::move(w));
                        }
                        if (!ok) break;
                    }
                    if (ok) {
                        Language c(alphabet, pr);
                        if (c.size() <= max_words) consider(c, s);
                    }
                }
        }
    }
    return best;
}

inline Language language_from_key(const std::string& key) {
    int alphabet = std::stoi(key.substr(0, key.find('#')));
    std::string body = key.substr(key.find('#') + 1);
    std::vector<Word> ws;
    Word w;
    std::string num;
    for (char c : body) {
        if (c == ',') { w.push_back(std::stoi(num)); num.clear(); }
        else if (c == ';') { ws.push_back(w); w.clear(); }
        else num.push_back(c);
    }
    return Language(alphabet, ws);
}

// Largest log-product sublanguage by direct subset enumeration over all
// product splits; independent of the concept-lattice search in the library.
inline mpz_class maxsub_brute(const Language& l, std::map<std::string, mpz_class>& memo) {
    auto it = memo.find(l.key());
    if (it != memo.end()) return it->second;
    int n = l.degree();
    mpz_class best = 1;
    if (n >= 2) {
        for (int dp = 1; dp <= n - 1; ++dp) {
            int ds = n - dp;
            std::map<Word, int> pidx, sidx;
            std::vector<Word> pw, sw;
            std::set<std::pair<int, int>> edges;
            for (const Word& w : l.words()) {
                Word u(w.begin(), w.begin() + dp), v(w.begin() + dp, w.end());
                if (!pidx.count(u)) { pidx[u] = static_cast<int>(pw.size()); pw.push_back(u); }
                if (!sidx.count(v)) { sidx[v] = static_cast<int>(sw.size()); sw.push_back(v); }
                edges.emplace(pidx[u], sidx[v]);
            }
            bool side_p = pw.size() <= sw.size();
            std::size_t m = side_p ? pw.size() : sw.size();
            for (unsigned long mask = 1; mask < (1ul << m); ++mask) {
                std::vector<Word> aset, cset;
                if (side_p) {
                    for (std::size_t i = 0; i < m; ++i)
                        if (mask >> i & 1) aset.push_back(pw[i]);
                    for (std::size_t j = 0; j < sw.size(); ++j) {
                        bool all = true;
                        for (std::size_t i = 0; i < m && all; ++i)
                            if ((mask >> i & 1) && !edges.count({static_cast<int>(i), static_cast<int>(j)}))
                                all = false;
                        if (all) cset.push_back(sw[j]);
                    }
                } else {
                    for (std::size_t j = 0; j < m; ++j)
                        if (mask >> j & 1) cset.push_back(sw[j]);
                    for (std::size_t i = 0; i < pw.size(); ++i) {
                        bool all = true;
                        for (std::size_t j = 0; j < m && all; ++j)
                            if ((mask >> j & 1) && !edges.count({static_cast<int>(i), static_cast<int>(j)}))
                                all = false;
                        if (all) aset.push_back(pw[i]);
                    }
                }
                if (aset.empty() || cset.empty()) continue;
                if (dp >= ds) {
                    mpz_class v = maxsub_brute(Language(l.alphabet_size(), aset), memo) *
                                  static_cast<unsigned long>(cset.size());
                    if (v > best) best = v;
                }
                if (ds >= dp) {
                    mpz_class v = maxsub_brute(Language(l.alphabet_size(), cset), memo) *
                                  static_cast<unsigned long>(aset.size());
                    if (v > best) best = v;
                }
            }
        }
    }
    memo[l.key()] = best;
    return best;
}

// Every word of every subexpression must occur as a contiguous factor of some
// word of the whole language.
inline bool factor_property_holds(const ExprPtr& root, int alphabet) {
    Language whole = language(root, alphabet);
    auto is_factor_of_some = [&](const Word& w) {
        for (const Word& big : whole.words()) {
            if (w.size() > big.size()) continue;
            for (std::size_t off = 0; off + w.size() <= big.size(); ++off)
                if (std::equal(w.begin(), w.end(), big.begin() + off)) return true;
        }
        return false;
    };
    std::vector<const Expr*> stack{root.get()};
    std::set<const Expr*> seen;
    while (!stack.empty()) {
        const Expr* u = stack.back();
        stack.pop_back();
        if (!seen.insert(u).second) continue;
        ExprPtr hold(root, u); // aliasing ptr, keeps root alive
        Language sub = language(hold, alphabet);
        for (const Word& w : sub.words())
            if (!is_factor_of_some(w)) return false;
        if (u->left) stack.push_back(u->left.get());
        if (u->right) stack.push_back(u->right.get());
    }
    return true;
}

} // namespace testutil
