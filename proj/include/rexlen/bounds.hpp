#pragma once

// Certificate evaluators for the explicit lower bounds, the recursive
// upper-bound expression for the divisibility language, the exact minimal-rpn
// search, the fooling-set maximizer, and the combined bound report.

#include "automata.hpp"
#include "envelopes.hpp"
#include "interval.hpp"
#include "logproduct.hpp"

#include <optional>
#include <unordered_map>

namespace rexlen {

// ---------------------------------------------------------------------------
// Permutation certificate: h(n) = n! 4^(1-n) n^((3 + log2 n)/4)

inline Interval h_perm(int n, mpfr_prec_t prec = 128) {
    if (n < 1) throw SemanticsError("h_perm needs n >= 1");
    Interval fac = Interval::of_mpz(factorial(n), prec);
    mpq_class four_pow(1);
    for (int i = 1; i < n; ++i) four_pow /= 4;
    Interval nn = Interval::of_long(n, prec);
    Interval expo = (Interval::of_long(3, prec) + Interval::log2(nn)) / Interval::of_long(4, prec);
    return fac * Interval::of_mpq(four_pow, prec) * Interval::pow(nn, expo);
}

struct PermutationCert {
    Interval h;     // h(n)
    Interval ratio; // n!/h(n) = 4^(n-1) n^(-(log2 n)/4 - 3/4)
};

inline PermutationCert lb_permutation(int n, mpfr_prec_t prec = 128) {
    Interval h = h_perm(n, prec);
    Interval ratio = Interval::of_mpz(factorial(n), prec) / h;
    return {h, ratio};
}

// max over ceil(n/2) <= k <= n-1 of (n-k)! h(k); the companion row to h(n).
// The maximum of enclosures is an enclosure of the maximum.
inline Interval perm_recursion_row(int n, mpfr_prec_t prec = 128) {
    if (n < 2) throw SemanticsError("perm_recursion_row needs n >= 2");
    std::optional<Interval> best;
    for (int k = (n + 1) / 2; k <= n - 1; ++k) {
        Interval cand = Interval::of_mpz(factorial(n - k), prec) * h_perm(k, prec);
        if (!best) best = cand;
        else best = Interval::max(*best, cand);
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Divisibility certificate: count / h with h = 2^n n p^(1 - log2(n / log2 p))

inline Interval lb_divisibility_value(int n, int p, mpfr_prec_t prec) {
    Interval pp = Interval::of_long(p, prec);
    Interval log2p = Interval::log2(pp);
    Interval inner = Interval::log2(Interval::of_long(n, prec) / log2p);
    Interval expo = Interval::of_long(1, prec) - inner;
    Interval h = Interval::of_mpz(pow_int(2, n) * n, prec) * Interval::pow(pp, expo);
    mpz_class cnt = count(make_family(Family::Divisibility, n, 0, p)).value;
    return Interval::of_mpz(cnt, prec) / h;
}

struct DivisibilityCert {
    mpz_class count;
    Interval value;      // count / h
    Interval asymptotic; // n^-1 p^(log2(n/log2 p) - 2)
    bool vacuous;        // certificate below 1 at this scale
};

inline DivisibilityCert lb_divisibility(int n, int p, mpfr_prec_t prec = 160) {
    FamilySpec s = make_family(Family::Divisibility, n, 0, p);
    DivisibilityCert c{count(s).value, lb_divisibility_value(n, p, prec), Interval(prec), false};
    Interval pp = Interval::of_long(p, prec);
    Interval expo = Interval::log2(Interval::of_long(n, prec) / Interval::log2(pp)) - Interval::of_long(2, prec);
    c.asymptotic = Interval::pow(pp, expo) / Interval::of_long(n, prec);
    c.vacuous = compare_with_widening([&](mpfr_prec_t q) { return lb_divisibility_value(n, p, q); },
                                      mpq_class(1)) < 0;
    return c;
}

// ---------------------------------------------------------------------------
// Parity certificate: count / h with h = k^n 2^((2-k)(m*-1)), where m* is the
// conservative integer reading of the gamma-factorization guarantee with
// gamma = k ln k.

inline int parity_m_star(int n, int k, mpfr_prec_t start = 96) {
    for (mpfr_prec_t p = start; p <= (1 << 16); p *= 2) {
        Interval gamma = Interval::of_long(k, p) * Interval::ln(Interval::of_long(k, p));
        Interval t = Interval::of_long(1, p) + Interval::of_long(n, p) / gamma;
        mpz_class c;
        if (Interval::log2(t).ceiling(c)) return static_cast<int>(c.get_si());
    }
    throw PrecisionError("m* stayed indeterminate");
}

struct ParityCert {
    mpz_class count;
    int m_star;
    mpq_class h;     // k^n 2^((2-k)(m*-1)), exact
    mpq_class value; // count / h, exact
    bool vacuous;
    bool count_bound_ok; // count >= k^n 2^(1-k)
};

inline ParityCert lb_parity(int n, int k) {
    if (n % 2 != 0) throw SemanticsError("lb_parity needs even n");
    if (k < 2) throw SemanticsError("lb_parity needs k >= 2");
    ParityCert c;
    c.count = count(make_family(Family::Parity, n, k)).value;
    c.m_star = parity_m_star(n, k);
    mpq_class kn(pow_int(k, n));
    int e = (2 - k) * (c.m_star - 1); // nonpositive for k >= 2
    mpq_class two_pow = e >= 0 ? mpq_class(pow_int(2, e)) : mpq_class(1, pow_int(2, -e));
    c.h = kn * two_pow;
    c.value = mpq_class(c.count) / c.h;
    c.value.canonicalize();
    c.vacuous = c.value < 1;
    mpq_class floor_bound = kn * (k >= 1 ? mpq_class(1, pow_int(2, k - 1)) : mpq_class(1));
    c.count_bound_ok = mpq_class(c.count) >= floor_bound;
    return c;
}

// ---------------------------------------------------------------------------
// Upper-bound expression for the divisibility language: for block length d and
// remainder r, sum the p products R(d/2, r1) R(d/2, r2) over the pairs with
// r1 2^(d/2) + r2 = r mod p; blocks shorter than log2 p pin a single word.

struct DivisibilityUpperBound {
    ExprPtr expr;
    int depth = 0;        // recursion levels above the base cases
    int max_branches = 0; // subexpression references per expanded level
};

inline DivisibilityUpperBound ub_divisibility_expr(int n, int p) {
    if (n < 1 || (n & (n - 1)) != 0) throw SemanticsError("ub_divisibility_expr needs n to be a power of 2");
    if (p < 3 || p % 2 == 0) throw SemanticsError("ub_divisibility_expr needs odd p > 2");

    std::map<std::pair<int, int>, ExprPtr> memo;
    std::map<int, int> depth_of;
    int max_branches = 0;

    auto rec = [&](auto&& self, int d, int r) -> ExprPtr {
        auto key = std::make_pair(d, r);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        ExprPtr result;
        if (pow_int(2, d) < p) {
            depth_of[d] = 0;
            if (mpz_class(r) < pow_int(2, d)) {
                for (int i = d - 1; i >= 0; --i) {
                    ExprPtr bit = Expr::make_letter((r >> i) & 1 ? BIT1 : BIT0);
                    result = result ? Expr::make_concat(result, bit) : bit;
                }
            }
        } else {
            int half = d / 2;
            mpz_class shift = pow_int(2, half);
            int shift_mod = static_cast<int>(mpz_class(shift % p).get_si());
            int branches = 0;
            for (int r1 = 0; r1 < p; ++r1) {
                int r2 = ((r - r1 * shift_mod) % p + p) % p;
                ExprPtr a = self(self, half, r1);
                if (!a) continue;
                ExprPtr b = self(self, half, r2);
                if (!b) continue;
                branches += 2;
                ExprPtr term = Expr::make_concat(a, b);
                result = result ? Expr::make_union(result, term) : term;
            }
            max_branches = std::max(max_branches, branches);
            depth_of[d] = 1 + depth_of[half];
        }
        memo[key] = result;
        return result;
    };

    ExprPtr expr = rec(rec, n, 0);
    if (!expr) throw SemanticsError("divisibility upper bound came out empty; this is a bug");
    return {expr, depth_of[n], max_branches};
}

// ceil(log2(n / log2 p)), the depth bound for the recursion above
inline int ub_divisibility_depth_bound(int n, int p, mpfr_prec_t start = 96) {
    for (mpfr_prec_t q = start; q <= (1 << 16); q *= 2) {
        Interval v = Interval::log2(Interval::of_long(n, q) / Interval::log2(Interval::of_long(p, q)));
        mpz_class c;
        if (v.ceiling(c)) return static_cast<int>(c.get_si());
    }
    throw PrecisionError("depth bound stayed indeterminate");
}

// ---------------------------------------------------------------------------
// Exact minimal reverse polish length, by dynamic programming over the
// describable languages whose words are factors of words of the target.
// For homogeneous targets every subexpression is homogeneous, so epsilon
// leaves never help and are dropped from the universe.

struct MinRpnOptions {
    int max_size = 40;
    std::size_t max_languages = 400'000;
};

struct MinRpnResult {
    bool found = false;
    int value = -1;
    ExprPtr witness;
    std::string cap_reason; // when !found
};

inline MinRpnResult min_rpn_exact(const Language& l, const MinRpnOptions& opt = {}) {
    if (l.empty()) throw SemanticsError("min_rpn_exact needs a nonempty language");

    std::set<Word> factors;
    std::size_t max_len = 0;
    std::set<int> letters;
    for (const Word& w : l.words()) {
        max_len = std::max(max_len, w.size());
        for (std::size_t i = 0; i <= w.size(); ++i)
            for (std::size_t j = i; j <= w.size(); ++j)
                factors.insert(Word(w.begin() + i, w.begin() + j));
        for (int a : w) letters.insert(a);
    }
    bool homog = l.homogeneous();
    bool allow_eps = !homog || l.degree() == 0;

    struct Entry {
        Language lang;
        int size;
        ExprKind kind;
        int letter = 0;
        int left = -1, right = -1;
    };
    std::vector<Entry> entries;
    std::unordered_map<std::string, int> index_of;
    std::vector<std::vector<int>> by_size(1);

    auto build_witness = [&](auto&& self, int idx) -> ExprPtr {
        const Entry& e = entries[static_cast<std::size_t>(idx)];
        switch (e.kind) {
        case ExprKind::Letter: return Expr::make_letter(e.letter);
        case ExprKind::Epsilon: return Expr::make_eps();
        case ExprKind::Union: return Expr::make_union(self(self, e.left), self(self, e.right));
        default: return Expr::make_concat(self(self, e.left), self(self, e.right));
        }
    };

    int target_idx = -1;
    auto add = [&](Entry&& e) -> bool {
        std::string key = e.lang.key();
        if (index_of.count(key)) return false;
        int idx = static_cast<int>(entries.size());
        index_of.emplace(std::move(key), idx);
        if (static_cast<std::size_t>(e.size) >= by_size.size()) by_size.resize(static_cast<std::size_t>(e.size) + 1);
        by_size[static_cast<std::size_t>(e.size)].push_back(idx);
        bool is_target = e.lang == l;
        entries.push_back(std::move(e));
        if (is_target) target_idx = idx;
        return true;
    };

    if (allow_eps) add({Language(l.alphabet_size(), {Word{}}), 1, ExprKind::Epsilon});
    for (int a : letters) add({Language(l.alphabet_size(), {Word{a}}), 1, ExprKind::Letter, a});
    if (target_idx >= 0)
        return {true, 1, build_witness(build_witness, target_idx), ""};

    for (int s = 3; s <= opt.max_size; s += 2) {
        // sizes of star-free binary trees over size-1 leaves are odd
        for (int s1 = 1; s1 <= s - 2; ++s1) {
            int s2 = s - 1 - s1;
            if (s2 < 1 || static_cast<std::size_t>(s1) >= by_size.size() ||
                static_cast<std::size_t>(s2) >= by_size.size())
                continue;
            for (int i : by_size[static_cast<std::size_t>(s1)]) {
                for (int j : by_size[static_cast<std::size_t>(s2)]) {
                    // add() may reallocate entries; keep operands by value
                    Language a = entries[static_cast<std::size_t>(i)].lang;
                    Language b = entries[static_cast<std::size_t>(j)].lang;
                    // union (commutative: generate once)
                    if (s1 <= s2 && (!homog || a.degree() == b.degree())) {
                        std::vector<Word> ws = a.words();
                        ws.insert(ws.end(), b.words().begin(), b.words().end());
                        add({Language(l.alphabet_size(), std::move(ws)), s, ExprKind::Union, 0, i, j});
                    }
                    // concatenation, kept only when factor-closed
                    bool ok = true;
                    std::vector<Word> prod;
                    for (const Word& u : a.words()) {
                        for (const Word& v : b.words()) {
                            if (u.size() + v.size() > max_len) { ok = false; break; }
                            Word w = u;
                            w.insert(w.end(), v.begin(), v.end());
                            if (!factors.count(w)) { ok = false; break; }
                            prod.push_back(std::move(w));
                        }
                        if (!ok) break;
                    }
                    if (ok) add({Language(l.alphabet_size(), std::move(prod)), s, ExprKind::Concat, 0, i, j});
                    if (entries.size() > opt.max_languages)
                        return {false, -1, nullptr, "language universe exceeded the cap"};
                }
            }
        }
        if (target_idx >= 0)
            return {true, s, build_witness(build_witness, target_idx), ""};
    }
    return {false, -1, nullptr, "no expression within the size cap"};
}

// ---------------------------------------------------------------------------
// Fooling sets. Candidates are the (prefix, suffix) splits of the words of l
// at one fixed position; the pairwise fooling condition forms a graph whose
// maximum clique is the largest fooling set at that position. The result is
// the best over all positions (any such set lower-bounds NFA sizes).

struct FoolingResult {
    int size = 0;
    int split = 0;
    std::vector<std::pair<Word, Word>> witness;
};

namespace detail {

class MaxCliqueSolver {
public:
    MaxCliqueSolver(std::vector<Bits> adj, std::size_t n) : adj_(std::move(adj)), n_(n) {}

    std::vector<int> solve() {
        std::vector<int> p(n_);
        for (std::size_t i = 0; i < n_; ++i) p[i] = static_cast<int>(i);
        std::vector<int> r;
        expand(r, p);
        return best_;
    }

private:
    void expand(std::vector<int>& r, std::vector<int>& p) {
        if (p.empty()) {
            if (r.size() > best_.size()) best_ = r;
            return;
        }
        // greedy coloring; classes are independent sets, so a clique takes at
        // most one vertex per class
        std::vector<std::vector<int>> classes;
        std::vector<Bits> marked; // neighbors of current class members
        for (int v : p) {
            std::size_t c = 0;
            while (c < classes.size() && bits_get(marked[c], static_cast<std::size_t>(v))) ++c;
            if (c == classes.size()) {
                classes.emplace_back();
                marked.push_back(bits_make(n_, false));
            }
            classes[c].push_back(v);
            for (std::size_t w = 0; w < n_; ++w)
                if (bits_get(adj_[static_cast<std::size_t>(v)], w)) bits_set(marked[c], w);
        }
        // re-list p in class order so the color bound is monotone along it
        std::vector<int> ordered;
        std::vector<int> color;
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (int v : classes[c]) {
                ordered.push_back(v);
                color.push_back(static_cast<int>(c) + 1);
            }
        for (std::size_t idx = ordered.size(); idx-- > 0;) {
            if (r.size() + static_cast<std::size_t>(color[idx]) <= best_.size()) return;
            int v = ordered[idx];
            r.push_back(v);
            std::vector<int> next;
            for (std::size_t k = 0; k < idx; ++k)
                if (bits_get(adj_[static_cast<std::size_t>(v)], static_cast<std::size_t>(ordered[k])))
                    next.push_back(ordered[k]);
            expand(r, next);
            r.pop_back();
        }
    }

    std::vector<Bits> adj_;
    std::size_t n_;
    std::vector<int> best_;
};

} // namespace detail

inline FoolingResult max_fooling_set(const Language& l, std::size_t budget = 200'000) {
    std::size_t max_len = 0;
    for (const Word& w : l.words()) max_len = std::max(max_len, w.size());
    FoolingResult best;
    for (std::size_t split = 0; split <= max_len; ++split) {
        std::set<std::pair<Word, Word>> cand_set;
        for (const Word& w : l.words()) {
            if (w.size() < split) continue;
            cand_set.emplace(Word(w.begin(), w.begin() + static_cast<long>(split)),
                             Word(w.begin() + static_cast<long>(split), w.end()));
        }
        std::vector<std::pair<Word, Word>> cands(cand_set.begin(), cand_set.end());
        std::size_t n = cands.size();
        if (n * n > budget) throw BudgetError("fooling-set candidate graph exceeds the budget");
        if (n <= best.witness.size()) continue;
        std::vector<detail::Bits> adj(n, detail::bits_make(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                Word uivj = cands[i].first;
                uivj.insert(uivj.end(), cands[j].second.begin(), cands[j].second.end());
                bool fooling = !l.contains(uivj);
                if (!fooling) {
                    Word ujvi = cands[j].first;
                    ujvi.insert(ujvi.end(), cands[i].second.begin(), cands[i].second.end());
                    fooling = !l.contains(ujvi);
                }
                if (fooling) {
                    detail::bits_set(adj[i], j);
                    detail::bits_set(adj[j], i);
                }
            }
        std::vector<int> clique = detail::MaxCliqueSolver(adj, n).solve();
        if (clique.size() > best.witness.size()) {
            best.split = static_cast<int>(split);
            best.witness.clear();
            for (int v : clique) best.witness.push_back(cands[static_cast<std::size_t>(v)]);
        }
    }
    best.size = static_cast<int>(best.witness.size());
    return best;
}

// ---------------------------------------------------------------------------
// Bound report

struct BoundReport {
    FamilySpec spec;
    mpz_class count;
    int dfa_states = 0;
    int slice_states = 0; // trimmed slice NFA, all layers
    std::optional<int> conversion_family_states; // 3 + (n-1) p accounting at n == p
    unsigned long long upper_rpn = 0;
    std::string upper_source;
    std::optional<unsigned long long> upper_rpn_conversion; // always present when computed
    bool has_certificate = false;
    Interval certificate{96};
    std::string certificate_text;
    bool vacuous = false;
    std::string certificate_note;
    std::optional<int> exact_min;
    std::string exact_note;
};

namespace detail {

inline DfaSpec bound_family_dfa(const FamilySpec& s) {
    if (s.family == Family::Threshold) {
        DfaSpec d;
        d.states = s.k + 1;
        d.alphabet = 2;
        d.initial = 0;
        d.finals = {s.k};
        d.delta.assign(static_cast<std::size_t>(s.k + 1), std::vector<int>(2));
        for (int q = 0; q <= s.k; ++q) {
            d.delta[q][BIT0 - 1] = q;
            d.delta[q][BIT1 - 1] = std::min(q + 1, s.k);
        }
        return d;
    }
    return build_family_dfa(s);
}

} // namespace detail

inline BoundReport bound_report(const FamilySpec& s, bool want_exact = false,
                                const MinRpnOptions& oracle_opt = {}) {
    BoundReport r;
    r.spec = s;
    r.count = count(s).value;

    DfaSpec dfa = detail::bound_family_dfa(s);
    r.dfa_states = dfa.states;
    int len = (s.family == Family::Dyck || s.family == Family::Palindrome) ? 2 * s.n : s.n;
    LayeredNFA a = slice(dfa, len);
    for (int w : a.layer_sizes) r.slice_states += w;
    if (s.family == Family::Divisibility && s.n == s.p)
        r.conversion_family_states = 3 + (s.n - 1) * s.p;

    ConversionResult conv = to_expression(a);
    if (!conv.stats.recurrence_holds) throw SemanticsError("conversion recurrence failed; this is a bug");
    r.upper_rpn = conv.stats.expanded_rpn;
    r.upper_source = "layered conversion";
    r.upper_rpn_conversion = conv.stats.expanded_rpn;
    if (s.family == Family::Divisibility && (s.n & (s.n - 1)) == 0) {
        DivisibilityUpperBound ub = ub_divisibility_expr(s.n, s.p);
        if (rpn(ub.expr) < r.upper_rpn) {
            r.upper_rpn = rpn(ub.expr);
            r.upper_source = "recursive remainder builder";
        }
    }

    switch (s.family) {
    case Family::Divisibility: {
        DivisibilityCert c = lb_divisibility(s.n, s.p);
        r.has_certificate = true;
        r.certificate = c.value;
        r.certificate_text = c.value.brief();
        r.vacuous = c.vacuous;
        if (c.vacuous) r.certificate_note = "vacuous at this scale";
        break;
    }
    case Family::Parity: {
        ParityCert c = lb_parity(s.n, s.k);
        r.has_certificate = true;
        r.certificate = Interval::of_mpq(c.value, 96);
        r.certificate_text = c.value.get_str();
        r.vacuous = c.vacuous;
        r.certificate_note = "m* = ceil(log2(1 + n/(k ln k))) = " + std::to_string(c.m_star) +
                             (c.vacuous ? "; vacuous at this scale" : "");
        break;
    }
    case Family::Permutation: {
        PermutationCert c = lb_permutation(s.n);
        r.has_certificate = true;
        r.certificate = c.ratio;
        r.certificate_text = c.ratio.brief();
        r.vacuous = c.ratio.hi_double() < 1.0;
        if (r.vacuous) r.certificate_note = "vacuous at this scale";
        break;
    }
    default:
        r.certificate_note = "lower bound rests on an external formula-size result; not computed here";
        break;
    }

    if (want_exact) {
        Language lang = generate(s);
        std::size_t maxw = 0;
        for (const Word& w : lang.words()) maxw = std::max(maxw, w.size());
        if (lang.size() <= 12 && maxw <= 6 && lang.alphabet_size() <= 3) {
            MinRpnResult m = min_rpn_exact(lang, oracle_opt);
            if (m.found) r.exact_min = m.value;
            else r.exact_note = m.cap_reason;
        } else {
            r.exact_note = "instance above the oracle's size limits";
        }
    }
    return r;
}

} // namespace rexlen
