#pragma once

// Layered NFAs for finite languages: n-slice construction from DFAs, the
// family automata, exact language enumeration, and the divide-and-conquer
// conversion into regular expressions with its instrumented size recurrence.

#include "expr.hpp"
#include "families.hpp"

#include <map>
#include <tuple>

namespace rexlen {

struct EmptySliceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic automaton over letters 1..alphabet; delta[q][a-1] == -1 means
// the transition is missing (partial DFAs are taken at face value).
struct DfaSpec {
    int states = 0;
    int alphabet = 0;
    int initial = 0;
    std::vector<int> finals;
    std::vector<std::vector<int>> delta;

    int step(int q, int a) const { return delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(a - 1)]; }
    bool is_final(int q) const {
        return std::find(finals.begin(), finals.end(), q) != finals.end();
    }
};

// States are partitioned into layers 0..n; transitions only advance one layer.
struct LayeredNFA {
    int alphabet = 0;
    std::vector<int> layer_sizes;
    int initial = 0;                         // index within layer 0
    std::vector<std::pair<int, int>> finals; // (layer, index)
    // succ[j][s][a-1] = successor indices in layer j+1, sorted
    std::vector<std::vector<std::vector<std::vector<int>>>> succ;

    int length() const { return static_cast<int>(layer_sizes.size()) - 1; }
    int width() const {
        int w = 0;
        for (int s : layer_sizes) w = std::max(w, s);
        return w;
    }
    bool is_final(int layer, int idx) const {
        return std::find(finals.begin(), finals.end(), std::make_pair(layer, idx)) != finals.end();
    }
};

// ---------------------------------------------------------------------------
// Family DFAs

inline DfaSpec build_family_dfa(const FamilySpec& s) {
    DfaSpec d;
    switch (s.family) {
    case Family::Divisibility: {
        d.states = s.p;
        d.alphabet = 2;
        d.initial = 0;
        d.finals = {0};
        d.delta.assign(static_cast<std::size_t>(s.p), {0, 0});
        for (int q = 0; q < s.p; ++q) {
            d.delta[q][BIT0 - 1] = (2 * q) % s.p;
            d.delta[q][BIT1 - 1] = (2 * q + 1) % s.p;
        }
        return d;
    }
    case Family::Parity: {
        // hypercube automaton: reading letter j flips bit j of the state
        d.states = 1 << s.k;
        d.alphabet = s.k;
        d.initial = 0;
        d.finals = {0};
        d.delta.assign(static_cast<std::size_t>(d.states), std::vector<int>(s.k));
        for (int q = 0; q < d.states; ++q)
            for (int a = 1; a <= s.k; ++a) d.delta[q][a - 1] = q ^ (1 << (a - 1));
        return d;
    }
    case Family::Permutation: {
        // subset automaton: delta(q, a) = q + {a} for letters not yet seen
        d.states = 1 << s.n;
        d.alphabet = s.n;
        d.initial = 0;
        d.finals = {(1 << s.n) - 1};
        d.delta.assign(static_cast<std::size_t>(d.states), std::vector<int>(s.n, -1));
        for (int q = 0; q < d.states; ++q)
            for (int a = 1; a <= s.n; ++a)
                if (!(q & (1 << (a - 1)))) d.delta[q][a - 1] = q | (1 << (a - 1));
        return d;
    }
    case Family::Binomial: {
        // counts ones up to k; zeros loop everywhere
        d.states = s.k + 1;
        d.alphabet = 2;
        d.initial = 0;
        d.finals = {s.k};
        d.delta.assign(static_cast<std::size_t>(s.k + 1), std::vector<int>(2, -1));
        for (int q = 0; q <= s.k; ++q) {
            d.delta[q][BIT0 - 1] = q;
            if (q < s.k) d.delta[q][BIT1 - 1] = q + 1;
        }
        return d;
    }
    case Family::Dyck: {
        // height counter, capped at h = n
        int h = s.n;
        d.states = h + 1;
        d.alphabet = 2;
        d.initial = 0;
        d.finals = {0};
        d.delta.assign(static_cast<std::size_t>(h + 1), std::vector<int>(2, -1));
        for (int q = 0; q <= h; ++q) {
            if (q < h) d.delta[q][BIT0 - 1] = q + 1;
            if (q > 0) d.delta[q][BIT1 - 1] = q - 1;
        }
        return d;
    }
    default:
        throw InvalidFamily("no DFA builder for family " + s.text());
    }
}

// ---------------------------------------------------------------------------
// n-slice of a DFA: product with the length-n counter, trimmed, with states
// of identical forward behavior collapsed layer by layer.

inline LayeredNFA slice(const DfaSpec& dfa, int n) {
    if (n < 1) throw SemanticsError("slice length must be >= 1");

    // forward reachability per layer
    std::vector<std::vector<int>> reach(static_cast<std::size_t>(n) + 1);
    {
        std::vector<char> cur(static_cast<std::size_t>(dfa.states), 0);
        cur[static_cast<std::size_t>(dfa.initial)] = 1;
        for (int j = 0; j <= n; ++j) {
            for (int q = 0; q < dfa.states; ++q)
                if (cur[q]) reach[j].push_back(q);
            if (j == n) break;
            std::vector<char> next(static_cast<std::size_t>(dfa.states), 0);
            for (int q = 0; q < dfa.states; ++q)
                if (cur[q])
                    for (int a = 1; a <= dfa.alphabet; ++a)
                        if (int t = dfa.step(q, a); t >= 0) next[t] = 1;
            cur = std::move(next);
        }
    }

    // backward: keep states that reach a final at layer n
    std::vector<std::vector<char>> keep(static_cast<std::size_t>(n) + 1,
                                        std::vector<char>(static_cast<std::size_t>(dfa.states), 0));
    for (int q : reach[n])
        if (dfa.is_final(q)) keep[n][q] = 1;
    for (int j = n - 1; j >= 0; --j)
        for (int q : reach[j])
            for (int a = 1; a <= dfa.alphabet; ++a)
                if (int t = dfa.step(q, a); t >= 0 && keep[j + 1][t]) keep[j][q] = 1;

    bool empty = true;
    for (int q = 0; q < dfa.states; ++q)
        if (keep[n][q]) empty = false;
    if (empty || !keep[0][dfa.initial])
        throw EmptySliceError("the automaton accepts no word of length " + std::to_string(n));

    // raw layered automaton over kept product states
    std::vector<std::vector<int>> layer_states(static_cast<std::size_t>(n) + 1);
    std::vector<std::map<int, int>> index_of(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        for (int q = 0; q < dfa.states; ++q)
            if (keep[j][q]) {
                index_of[j][q] = static_cast<int>(layer_states[j].size());
                layer_states[j].push_back(q);
            }

    // collapse states with identical forward rows, from the last layer back
    std::vector<std::vector<int>> collapse(static_cast<std::size_t>(n) + 1); // raw idx -> merged idx
    std::vector<int> merged_count(static_cast<std::size_t>(n) + 1, 0);
    for (int j = n; j >= 0; --j) {
        std::map<std::vector<std::pair<int, int>>, int> groups;
        collapse[j].assign(layer_states[j].size(), 0);
        for (std::size_t s = 0; s < layer_states[j].size(); ++s) {
            int q = layer_states[j][s];
            std::vector<std::pair<int, int>> sig;
            if (j < n)
                for (int a = 1; a <= dfa.alphabet; ++a)
                    if (int t = dfa.step(q, a); t >= 0 && keep[j + 1][t])
                        sig.emplace_back(a, collapse[j + 1][static_cast<std::size_t>(index_of[j + 1].at(t))]);
            auto [it, inserted] = groups.emplace(std::move(sig), merged_count[j]);
            if (inserted) ++merged_count[j];
            collapse[j][s] = it->second;
        }
    }

    LayeredNFA out;
    out.alphabet = dfa.alphabet;
    out.layer_sizes.resize(static_cast<std::size_t>(n) + 1);
    out.succ.resize(static_cast<std::size_t>(n));
    for (int j = 0; j <= n; ++j) out.layer_sizes[j] = merged_count[j];
    for (int j = 0; j < n; ++j) {
        out.succ[j].assign(static_cast<std::size_t>(merged_count[j]),
                           std::vector<std::vector<int>>(static_cast<std::size_t>(dfa.alphabet)));
        for (std::size_t s = 0; s < layer_states[j].size(); ++s) {
            int q = layer_states[j][s];
            int from = collapse[j][s];
            for (int a = 1; a <= dfa.alphabet; ++a)
                if (int t = dfa.step(q, a); t >= 0 && keep[j + 1][t]) {
                    int to = collapse[j + 1][static_cast<std::size_t>(index_of[j + 1].at(t))];
                    auto& v = out.succ[j][static_cast<std::size_t>(from)][static_cast<std::size_t>(a - 1)];
                    if (std::find(v.begin(), v.end(), to) == v.end()) v.push_back(to);
                }
        }
        for (auto& per_state : out.succ[j])
            for (auto& v : per_state) std::sort(v.begin(), v.end());
    }
    out.initial = collapse[0][static_cast<std::size_t>(index_of[0].at(dfa.initial))];
    out.finals = {{n, 0}};
    // all kept layer-n states are final and share the empty row, so they merged
    if (merged_count[n] != 1) throw SemanticsError("final layer failed to collapse");
    return out;
}

// ---------------------------------------------------------------------------
// Exact accepted language, via per-state suffix languages.

inline Language nfa_language(const LayeredNFA& a, std::size_t budget = 2'000'000) {
    int n = a.length();
    if (n < 0 || a.layer_sizes.empty() || a.layer_sizes[0] == 0)
        throw SemanticsError("empty automaton has no language");
    // suffix[j][s] = words leading from (j,s) to a final state
    std::vector<std::vector<std::vector<Word>>> suffix(static_cast<std::size_t>(n) + 1);
    std::size_t stored = 0;
    for (int j = n; j >= 0; --j) {
        suffix[j].resize(static_cast<std::size_t>(a.layer_sizes[j]));
        for (int s = 0; s < a.layer_sizes[j]; ++s) {
            std::set<Word> acc;
            if (a.is_final(j, s)) acc.insert(Word{});
            if (j < n)
                for (int letter = 1; letter <= a.alphabet; ++letter)
                    for (int t : a.succ[j][static_cast<std::size_t>(s)][static_cast<std::size_t>(letter - 1)])
                        for (const Word& w : suffix[j + 1][static_cast<std::size_t>(t)]) {
                            Word ext;
                            ext.reserve(w.size() + 1);
                            ext.push_back(letter);
                            ext.insert(ext.end(), w.begin(), w.end());
                            acc.insert(std::move(ext));
                        }
            stored += acc.size();
            detail::check_budget(stored, budget);
            suffix[j][static_cast<std::size_t>(s)].assign(acc.begin(), acc.end());
        }
    }
    return Language(a.alphabet, suffix[0][static_cast<std::size_t>(a.initial)]);
}

// ---------------------------------------------------------------------------
// Conversion to a regular expression.
//
// R(x,y,d) describes the length-d words leading from x to y; for d >= 2 it is
// the union over the middle layer of R(x,q,floor(d/2)) . R(q,y,ceil(d/2)).
// Memoization shares syntax subtrees; reported sizes count the expanded tree.

struct ConversionStats {
    int width = 0;
    int alphabet = 0;
    unsigned long long expanded_rpn = 0;
    unsigned long long expanded_leaves = 0;
    std::size_t shared_nodes = 0;
    std::map<int, unsigned long long> max_leaves_by_d; // T(d), measured
    bool recurrence_holds = true;                      // T(d) <= w(T(fl d/2)+T(ce d/2)), T(1) <= k
};

struct ConversionResult {
    ExprPtr expr;
    ConversionStats stats;
};

inline ConversionResult to_expression(const LayeredNFA& a) {
    ConversionStats stats;
    stats.width = a.width();
    stats.alphabet = a.alphabet;

    std::map<std::tuple<int, int, int, int>, ExprPtr> memo; // (layer of x, x, y, d) -> expr or nullptr
    std::map<std::tuple<int, int, int, int>, bool> done;

    auto rec = [&](auto&& self, int layer, int x, int y, int d) -> ExprPtr {
        auto key = std::make_tuple(layer, x, y, d);
        if (done.count(key)) return memo.count(key) ? memo[key] : nullptr;
        done[key] = true;
        ExprPtr result;
        if (d == 0) {
            result = (x == y) ? Expr::make_eps() : nullptr;
        } else if (d == 1) {
            for (int letter = 1; letter <= a.alphabet; ++letter) {
                const auto& ts = a.succ[layer][static_cast<std::size_t>(x)][static_cast<std::size_t>(letter - 1)];
                if (std::binary_search(ts.begin(), ts.end(), y)) {
                    ExprPtr lit = Expr::make_letter(letter);
                    result = result ? Expr::make_union(result, lit) : lit;
                }
            }
        } else {
            int dl = d / 2, dr = d - dl;
            int mid_layer = layer + dl;
            for (int q = 0; q < a.layer_sizes[static_cast<std::size_t>(mid_layer)]; ++q) {
                ExprPtr lhs = self(self, layer, x, q, dl);
                if (!lhs) continue;
                ExprPtr rhs = self(self, mid_layer, q, y, dr);
                if (!rhs) continue;
                ExprPtr term = Expr::make_concat(lhs, rhs);
                result = result ? Expr::make_union(result, term) : term;
            }
        }
        if (result) {
            memo[key] = result;
            auto& t = stats.max_leaves_by_d[d];
            t = std::max(t, result->leaves);
        }
        return result;
    };

    ExprPtr total;
    for (auto [flayer, fidx] : a.finals) {
        ExprPtr part = rec(rec, 0, a.initial, fidx, flayer);
        if (!part) continue;
        total = total ? Expr::make_union(total, part) : part;
    }
    if (!total) throw SemanticsError("automaton accepts the empty language");

    stats.expanded_rpn = total->rpn_nodes;
    stats.expanded_leaves = total->leaves;
    stats.shared_nodes = dag_nodes(total);
    for (const auto& [d, t] : stats.max_leaves_by_d) {
        if (d == 1) {
            if (t > static_cast<unsigned long long>(a.alphabet)) stats.recurrence_holds = false;
        } else if (d >= 2) {
            int dl = d / 2, dr = d - dl;
            auto itl = stats.max_leaves_by_d.find(dl);
            auto itr = stats.max_leaves_by_d.find(dr);
            if (itl == stats.max_leaves_by_d.end() || itr == stats.max_leaves_by_d.end()) continue;
            unsigned long long bound = static_cast<unsigned long long>(stats.width) * (itl->second + itr->second);
            if (t > bound) stats.recurrence_holds = false;
        }
    }
    return {total, stats};
}

} // namespace rexlen
