#pragma once

// Log-product expressions: the recursive predicate with certificates, the
// union decomposition, canonical-path and gamma factorizations, the balanced
// two-way split, the permutation-language counting recursion M(n), and the
// exact maximum log-product sublanguage search.

#include "expr.hpp"

#include <gmpxx.h>

#include <map>

namespace rexlen {

namespace detail {

inline void require_homogeneous_starfree(const ExprPtr& e, const char* what) {
    if (e->has_star) throw SemanticsError(std::string(what) + " needs a star-free expression");
    if (!e->homogeneous) throw SemanticsError(std::string(what) + " needs a homogeneous expression");
}

// spine child of a log-product concatenation: the child of maximal degree
// that is itself log-product; ties resolved to the left.
inline bool is_lp(const Expr* u, std::map<const Expr*, bool>& memo) {
    auto it = memo.find(u);
    if (it != memo.end()) return it->second;
    bool r = false;
    if (u->kind == ExprKind::Letter) r = true;
    else if (u->kind == ExprKind::Concat) {
        const Expr* l = u->left.get();
        const Expr* rgt = u->right.get();
        if (l->degree >= rgt->degree && is_lp(l, memo)) r = true;
        else if (rgt->degree >= l->degree && is_lp(rgt, memo)) r = true;
    }
    memo[u] = r;
    return r;
}

} // namespace detail

struct SpineStep {
    bool left;          // spine continues into the left child
    int spine_degree;
    int sibling_degree;
};

struct LogProductCert {
    std::vector<SpineStep> spine; // root downwards; empty for a single letter
};

inline std::optional<LogProductCert> is_log_product(const ExprPtr& e) {
    detail::require_homogeneous_starfree(e, "is_log_product");
    std::map<const Expr*, bool> memo;
    if (!detail::is_lp(e.get(), memo)) return std::nullopt;
    LogProductCert cert;
    const Expr* cur = e.get();
    while (cur->kind == ExprKind::Concat) {
        const Expr* l = cur->left.get();
        const Expr* r = cur->right.get();
        bool go_left = l->degree >= r->degree && detail::is_lp(l, memo);
        cert.spine.push_back({go_left,
                              go_left ? l->degree : r->degree,
                              go_left ? r->degree : l->degree});
        cur = go_left ? l : r;
    }
    return cert;
}

// ---------------------------------------------------------------------------
// R == B_1 + ... + B_l with every B_i log-product and l <= rpn(R).
// Letters are trivial; unions concatenate the sublists; a concatenation
// distributes the decomposition of its larger-degree child over the other
// (ties to the left).

inline std::vector<ExprPtr> decompose(const ExprPtr& e) {
    detail::require_homogeneous_starfree(e, "decompose");
    if (e->degree == 0) throw SemanticsError("decompose rejects expressions describing only the empty word");
    auto rec = [&](auto&& self, const ExprPtr& u) -> std::vector<ExprPtr> {
        switch (u->kind) {
        case ExprKind::Letter:
            return {u};
        case ExprKind::Union: {
            std::vector<ExprPtr> out = self(self, u->left);
            std::vector<ExprPtr> r = self(self, u->right);
            out.insert(out.end(), r.begin(), r.end());
            return out;
        }
        case ExprKind::Concat: {
            std::vector<ExprPtr> out;
            if (u->left->degree >= u->right->degree) {
                for (const ExprPtr& b : self(self, u->left)) out.push_back(Expr::make_concat(b, u->right));
            } else {
                for (const ExprPtr& b : self(self, u->right)) out.push_back(Expr::make_concat(u->left, b));
            }
            return out;
        }
        default:
            throw SemanticsError("decompose reached an epsilon branch of positive-degree context");
        }
    };
    return rec(rec, e);
}

// ---------------------------------------------------------------------------
// Canonical-path factorization: B = F_1 ... F_m, the siblings of the spine in
// concatenation order plus the terminal node.

struct Factorization {
    std::vector<ExprPtr> factors;
};

inline Factorization canonical_factorize(const ExprPtr& e) {
    if (!is_log_product(e)) throw SemanticsError("canonical_factorize needs a log-product expression");
    std::map<const Expr*, bool> memo;
    std::vector<ExprPtr> prefix, suffix_stack;
    ExprPtr cur = e;
    while (cur->kind == ExprKind::Concat) {
        bool go_left = cur->left->degree >= cur->right->degree && detail::is_lp(cur->left.get(), memo);
        if (go_left) {
            suffix_stack.push_back(cur->right);
            cur = cur->left;
        } else {
            prefix.push_back(cur->left);
            cur = cur->right;
        }
    }
    Factorization f;
    f.factors = std::move(prefix);
    f.factors.push_back(cur);
    f.factors.insert(f.factors.end(), suffix_stack.rbegin(), suffix_stack.rend());
    // the path halves the degree at worst, so m >= ceil(log2 n)
    int need = 0;
    while ((1 << need) < e->degree) ++need;
    if (static_cast<int>(f.factors.size()) < need)
        throw SemanticsError("canonical factorization came out too short; this is a bug");
    return f;
}

inline ExprPtr concat_all(const std::vector<ExprPtr>& parts) {
    ExprPtr out;
    for (const ExprPtr& p : parts) out = out ? Expr::make_concat(out, p) : p;
    if (!out) throw SemanticsError("cannot concatenate an empty factor list");
    return out;
}

// ---------------------------------------------------------------------------
// gamma-factorization: B == P_1 ... P_m S_m ... S_1 with
// deg P_i + deg S_i >= gamma for i < m and deg P_m + deg S_m <= gamma.

struct GammaFactorization {
    std::vector<ExprPtr> prefixes; // P_1 .. P_m
    std::vector<ExprPtr> suffixes; // S_1 .. S_m

    std::size_t m() const { return prefixes.size(); }
    ExprPtr reassembled() const {
        std::vector<ExprPtr> parts = prefixes;
        for (auto it = suffixes.rbegin(); it != suffixes.rend(); ++it) parts.push_back(*it);
        return concat_all(parts);
    }
};

namespace detail {

inline GammaFactorization gamma_factorize_rec(const ExprPtr& e, const mpq_class& gamma) {
    mpq_class n(e->degree);
    if (n <= gamma) return {{e}, {Expr::make_eps()}};
    if (n - gamma < 1) {
        // no integer degree can land in the window ((n-g)/2, n-g]; two
        // trivial inner factors already meet every constraint
        return {{e, Expr::make_eps()}, {Expr::make_eps(), Expr::make_eps()}};
    }

    std::map<const Expr*, bool> memo;
    ExprPtr pre, suf;
    ExprPtr cur = e;
    while (mpq_class(cur->degree) > n - gamma) {
        // the walk only passes concatenations: degree > n-gamma >= 1
        bool go_left = cur->left->degree >= cur->right->degree && is_lp(cur->left.get(), memo);
        if (go_left) {
            suf = suf ? Expr::make_concat(cur->right, suf) : cur->right;
            cur = cur->left;
        } else {
            pre = pre ? Expr::make_concat(pre, cur->left) : cur->left;
            cur = cur->right;
        }
    }
    GammaFactorization sub = gamma_factorize_rec(cur, gamma);
    GammaFactorization out;
    out.prefixes.push_back(pre ? pre : Expr::make_eps());
    out.suffixes.push_back(suf ? suf : Expr::make_eps());
    out.prefixes.insert(out.prefixes.end(), sub.prefixes.begin(), sub.prefixes.end());
    out.suffixes.insert(out.suffixes.end(), sub.suffixes.begin(), sub.suffixes.end());
    return out;
}

} // namespace detail

inline bool gamma_constraints_hold(const GammaFactorization&, int, const mpq_class&);

inline GammaFactorization gamma_factorize(const ExprPtr& e, const mpq_class& gamma) {
    if (gamma < 1) throw SemanticsError("gamma must be >= 1");
    if (!is_log_product(e)) throw SemanticsError("gamma_factorize needs a log-product expression");
    GammaFactorization out = detail::gamma_factorize_rec(e, gamma);
    if (!gamma_constraints_hold(out, e->degree, gamma))
        throw SemanticsError("gamma factorization violated its constraints; this is a bug");
    return out;
}

// Exact check of the three gamma constraints plus the factor-count bound
// m >= log2(1 + n/gamma), i.e. gamma * 2^m >= gamma + n.
inline bool gamma_constraints_hold(const GammaFactorization& g, int degree, const mpq_class& gamma) {
    std::size_t m = g.m();
    if (m == 0 || g.suffixes.size() != m) return false;
    for (std::size_t i = 0; i < m; ++i) {
        mpq_class pair_deg(g.prefixes[i]->degree + g.suffixes[i]->degree);
        if (i + 1 < m) {
            if (pair_deg < gamma) return false;
        } else {
            if (pair_deg > gamma) return false;
        }
    }
    mpq_class lhs = gamma;
    for (std::size_t i = 0; i < m; ++i) lhs *= 2;
    return lhs >= gamma + degree;
}

// ---------------------------------------------------------------------------
// Balanced split: B == X . Y with n/3 <= deg X, deg Y <= 2n/3.

inline std::pair<ExprPtr, ExprPtr> balanced_split(const ExprPtr& e) {
    if (!is_log_product(e)) throw SemanticsError("balanced_split needs a log-product expression");
    int n = e->degree;
    if (n < 2) throw SemanticsError("balanced_split needs degree >= 2");
    std::map<const Expr*, bool> memo;
    ExprPtr pre, suf;
    ExprPtr cur = e;
    auto finish = [n](ExprPtr x, ExprPtr y) -> std::pair<ExprPtr, ExprPtr> {
        for (int d : {x->degree, y->degree})
            if (3 * d < n || 3 * d > 2 * n)
                throw SemanticsError("balanced split left the middle third; this is a bug");
        return {std::move(x), std::move(y)};
    };
    while (true) {
        // a jump happens strictly before the walk could leave the spine
        bool go_left = cur->left->degree >= cur->right->degree && detail::is_lp(cur->left.get(), memo);
        if (go_left) {
            suf = suf ? Expr::make_concat(cur->right, suf) : cur->right;
            cur = cur->left;
            if (3 * suf->degree >= n) return finish(pre ? Expr::make_concat(pre, cur) : cur, suf);
        } else {
            pre = pre ? Expr::make_concat(pre, cur->left) : cur->left;
            cur = cur->right;
            if (3 * pre->degree >= n) return finish(pre, suf ? Expr::make_concat(cur, suf) : cur);
        }
    }
}

// ---------------------------------------------------------------------------
// M(n): the exact maximum number of words a log-product expression contained
// in the permutation language P_n can describe.
// M(1) = 1, M(n) = max over ceil(n/2) <= k <= n-1 of (n-k)! M(k).

inline mpz_class perm_logproduct_max(int n) {
    if (n < 1) throw SemanticsError("perm_logproduct_max needs n >= 1");
    std::vector<mpz_class> m(static_cast<std::size_t>(n) + 1);
    m[1] = 1;
    for (int i = 2; i <= n; ++i) {
        mpz_class best = 0;
        for (int k = (i + 1) / 2; k <= i - 1; ++k) {
            mpz_class f;
            mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(i - k));
            mpz_class cand = f * m[static_cast<std::size_t>(k)];
            if (cand > best) best = cand;
        }
        m[static_cast<std::size_t>(i)] = best;
    }
    return m[static_cast<std::size_t>(n)];
}

// ---------------------------------------------------------------------------
// Exact maximum of |L(B)| over log-product B with L(B) contained in l.
//
// For every ordered degree split the prefix/suffix compatibility relation is
// searched over its closed bicliques (A = common prefixes of C, C = common
// suffixes of A); the log-product side recurses, the other side counts in
// full. The returned witness is a log-product expression attaining the
// maximum, so callers can re-verify the count.

struct MaxLogProduct {
    mpz_class count;
    ExprPtr witness;
};

namespace detail {

inline ExprPtr chain_expr(const Word& w) {
    ExprPtr out;
    for (int a : w) out = out ? Expr::make_concat(out, Expr::make_letter(a)) : Expr::make_letter(a);
    return out;
}

inline ExprPtr union_expr(const std::vector<Word>& ws) {
    ExprPtr out;
    for (const Word& w : ws) {
        ExprPtr c = chain_expr(w);
        out = out ? Expr::make_union(out, c) : c;
    }
    return out;
}

struct MaxSubCtx {
    std::map<std::string, MaxLogProduct> memo;
    std::size_t budget;
    std::size_t work = 0;

    void charge(std::size_t amount) {
        work += amount;
        if (work > budget) throw BudgetError("max_logproduct_sublanguage exceeded its search budget");
    }
};

using Bits = std::vector<std::uint64_t>;

inline Bits bits_make(std::size_t n, bool full) {
    Bits b((n + 63) / 64, full ? ~0ull : 0ull);
    if (full && n % 64) b.back() = (~0ull) >> (64 - n % 64);
    return b;
}
inline void bits_set(Bits& b, std::size_t i) { b[i / 64] |= 1ull << (i % 64); }
inline bool bits_get(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1; }
inline void bits_and(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
}
inline std::size_t bits_count(const Bits& b) {
    std::size_t n = 0;
    for (auto x : b) n += static_cast<std::size_t>(__builtin_popcountll(x));
    return n;
}

inline MaxLogProduct max_sub(const Language& l, MaxSubCtx& ctx) {
    std::string key = l.key();
    if (auto it = ctx.memo.find(key); it != ctx.memo.end()) return it->second;
    int n = l.degree();
    int k = l.alphabet_size();
    MaxLogProduct best{1, chain_expr(l.words().front())};
    if (n >= 2) {
        for (int dp = 1; dp <= n - 1; ++dp) {
            int ds = n - dp;
            // index prefixes and suffixes
            std::map<Word, std::size_t> pidx, sidx;
            std::vector<Word> pwords, swords;
            std::vector<std::pair<std::size_t, std::size_t>> edges;
            for (const Word& w : l.words()) {
                Word u(w.begin(), w.begin() + dp), v(w.begin() + dp, w.end());
                auto [pi, pnew] = pidx.emplace(u, pwords.size());
                if (pnew) pwords.push_back(u);
                auto [si, snew] = sidx.emplace(v, swords.size());
                if (snew) swords.push_back(v);
                edges.emplace_back(pi->second, si->second);
            }
            std::size_t np = pwords.size(), ns = swords.size();
            std::vector<Bits> prow(np, bits_make(ns, false)); // prefix -> suffixes
            std::vector<Bits> scol(ns, bits_make(np, false)); // suffix -> prefixes
            for (auto [pi, si] : edges) {
                bits_set(prow[pi], si);
                bits_set(scol[si], pi);
            }
            // closed prefix sets: all intersections of suffix neighborhoods
            std::set<Bits> closed;
            closed.insert(bits_make(np, true));
            std::vector<Bits> frontier{bits_make(np, true)};
            while (!frontier.empty()) {
                std::vector<Bits> next;
                for (const Bits& a : frontier)
                    for (std::size_t j = 0; j < ns; ++j) {
                        Bits x = a;
                        bits_and(x, scol[j]);
                        if (bits_count(x) == 0) continue;
                        if (closed.insert(x).second) next.push_back(std::move(x));
                        ctx.charge(1);
                    }
                frontier = std::move(next);
            }
            for (const Bits& a : closed) {
                // C = common suffixes of A
                Bits c = bits_make(ns, true);
                std::vector<Word> awords;
                for (std::size_t i = 0; i < np; ++i)
                    if (bits_get(a, i)) {
                        bits_and(c, prow[i]);
                        awords.push_back(pwords[i]);
                    }
                std::size_t csize = bits_count(c);
                if (awords.empty() || csize == 0) continue;
                std::vector<Word> cwords;
                for (std::size_t j = 0; j < ns; ++j)
                    if (bits_get(c, j)) cwords.push_back(swords[j]);
                ctx.charge(awords.size() + cwords.size());
                if (dp >= ds) { // left factor carries the spine
                    MaxLogProduct sub = max_sub(Language(k, awords), ctx);
                    mpz_class cand = sub.count * static_cast<unsigned long>(csize);
                    if (cand > best.count)
                        best = {cand, Expr::make_concat(sub.witness, union_expr(cwords))};
                }
                if (ds >= dp) { // right factor carries the spine
                    MaxLogProduct sub = max_sub(Language(k, cwords), ctx);
                    mpz_class cand = sub.count * static_cast<unsigned long>(awords.size());
                    if (cand > best.count)
                        best = {cand, Expr::make_concat(union_expr(awords), sub.witness)};
                }
            }
        }
    }
    ctx.memo.emplace(std::move(key), best);
    return best;
}

} // namespace detail

inline MaxLogProduct max_logproduct_sublanguage(const Language& l, std::size_t budget = 5'000'000) {
    if (l.empty()) throw SemanticsError("max_logproduct_sublanguage needs a nonempty language");
    if (!l.homogeneous()) throw SemanticsError("max_logproduct_sublanguage needs a homogeneous language");
    if (l.degree() < 1) throw SemanticsError("max_logproduct_sublanguage needs degree >= 1");
    detail::MaxSubCtx ctx{{}, budget};
    return detail::max_sub(l, ctx);
}

} // namespace rexlen
