#pragma once

// The reduction from expressions over {0,1} to monotone arithmetic formulas:
// leaf positions, the arithmetic version (0 -> constant 1, 1 at position i ->
// x_i, union -> +, concatenation -> *), produced sets with exact coefficients,
// boolean evaluation, and letter-position permutations of languages.

#include "expr.hpp"

#include <gmpxx.h>

#include <map>

namespace rexlen {

// Rewrites eps.X -> X and X.eps -> X bottom-up; a union of two {eps} branches
// collapses to a single eps. Homogeneous inputs of degree >= 1 come out
// epsilon-free.
inline ExprPtr eliminate_epsilon(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::Letter:
    case ExprKind::Epsilon:
        return e;
    case ExprKind::Union: {
        ExprPtr l = eliminate_epsilon(e->left);
        ExprPtr r = eliminate_epsilon(e->right);
        if (l->kind == ExprKind::Epsilon && r->kind == ExprKind::Epsilon) return l;
        if (l == e->left && r == e->right) return e;
        return Expr::make_union(l, r);
    }
    case ExprKind::Concat: {
        ExprPtr l = eliminate_epsilon(e->left);
        ExprPtr r = eliminate_epsilon(e->right);
        if (l->kind == ExprKind::Epsilon) return r;
        if (r->kind == ExprKind::Epsilon) return l;
        if (l == e->left && r == e->right) return e;
        return Expr::make_concat(l, r);
    }
    case ExprKind::Star: {
        ExprPtr c = eliminate_epsilon(e->left);
        if (c->kind == ExprKind::Epsilon) return c;
        if (c == e->left) return e;
        return Expr::make_star(c);
    }
    }
    return e;
}

struct LeafPosition {
    int letter;
    int position; // 1-based position of the leaf's letter in every derived word
};

namespace detail {

inline void require_positionable(const ExprPtr& e) {
    if (e->has_star) throw SemanticsError("positions need a star-free expression");
    if (!e->homogeneous) throw SemanticsError("positions need a homogeneous expression");
    if (e->degree < 1) throw SemanticsError("positions need degree >= 1");
}

} // namespace detail

// Leaf positions in left-to-right leaf order. The input is normalized with
// eliminate_epsilon first, so every remaining leaf is a letter.
inline std::vector<LeafPosition> positions(const ExprPtr& expr) {
    detail::require_positionable(expr);
    ExprPtr e = eliminate_epsilon(expr);
    std::vector<LeafPosition> out;
    auto rec = [&](auto&& self, const ExprPtr& u, int offset) -> void {
        switch (u->kind) {
        case ExprKind::Letter:
            out.push_back({u->letter, offset + 1});
            return;
        case ExprKind::Union:
            self(self, u->left, offset);
            self(self, u->right, offset);
            return;
        case ExprKind::Concat:
            self(self, u->left, offset);
            self(self, u->right, offset + u->left->degree);
            return;
        default:
            throw SemanticsError("unexpected node after epsilon elimination");
        }
    };
    rec(rec, e, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Monotone arithmetic formulas

enum class GateKind : std::uint8_t { One, Var, Add, Mul };

class ArithFormula;
using ArithPtr = std::shared_ptr<const ArithFormula>;

class ArithFormula {
public:
    GateKind kind;
    int var = 0; // Var gates: 1-based variable index
    ArithPtr left, right;
    unsigned long long size = 1; // node count

    static ArithPtr one() { return finish({GateKind::One, 0, nullptr, nullptr, 1}); }
    static ArithPtr variable(int i) { return finish({GateKind::Var, i, nullptr, nullptr, 1}); }
    static ArithPtr add(ArithPtr a, ArithPtr b) {
        unsigned long long s = 1 + a->size + b->size;
        return finish({GateKind::Add, 0, std::move(a), std::move(b), s});
    }
    static ArithPtr mul(ArithPtr a, ArithPtr b) {
        unsigned long long s = 1 + a->size + b->size;
        return finish({GateKind::Mul, 0, std::move(a), std::move(b), s});
    }

private:
    static ArithPtr finish(ArithFormula&& f) { return std::make_shared<const ArithFormula>(f); }

public:
    ArithFormula(GateKind k, int v, ArithPtr l, ArithPtr r, unsigned long long s)
        : kind(k), var(v), left(std::move(l)), right(std::move(r)), size(s) {}
};

inline std::string arith_text(const ArithPtr& f) {
    switch (f->kind) {
    case GateKind::One: return "1";
    case GateKind::Var: return "x" + std::to_string(f->var);
    case GateKind::Add: return "(" + arith_text(f->left) + "+" + arith_text(f->right) + ")";
    case GateKind::Mul: return "(" + arith_text(f->left) + "*" + arith_text(f->right) + ")";
    }
    return {};
}

// The arithmetic version of a homogeneous expression over {0,1}.
inline ArithPtr arithmetic_version(const ExprPtr& expr) {
    detail::require_positionable(expr);
    if (expr->max_letter > 2)
        throw SemanticsError("arithmetic version is defined over the alphabet {0,1}");
    ExprPtr e = eliminate_epsilon(expr);
    auto rec = [&](auto&& self, const ExprPtr& u, int offset) -> ArithPtr {
        switch (u->kind) {
        case ExprKind::Letter:
            // letter 0 -> constant 1, letter 1 at position i -> x_i
            return u->letter == 1 ? ArithFormula::one() : ArithFormula::variable(offset + 1);
        case ExprKind::Union:
            return ArithFormula::add(self(self, u->left, offset), self(self, u->right, offset));
        case ExprKind::Concat:
            return ArithFormula::mul(self(self, u->left, offset),
                                     self(self, u->right, offset + u->left->degree));
        default:
            throw SemanticsError("unexpected node after epsilon elimination");
        }
    };
    return rec(rec, e, 0);
}

// Exponent vector -> positive coefficient.
using ProducedSet = std::map<std::vector<int>, mpz_class>;

// Bottom-up: + merges with coefficient addition, * forms the Minkowski sum
// with coefficient multiplication.
inline ProducedSet produced_set(const ArithPtr& f, int num_vars, std::size_t budget = 2'000'000) {
    auto rec = [&](auto&& self, const ArithPtr& u) -> ProducedSet {
        switch (u->kind) {
        case GateKind::One:
            return {{std::vector<int>(static_cast<std::size_t>(num_vars), 0), 1}};
        case GateKind::Var: {
            if (u->var < 1 || u->var > num_vars) throw SemanticsError("variable index out of range");
            std::vector<int> v(static_cast<std::size_t>(num_vars), 0);
            v[static_cast<std::size_t>(u->var - 1)] = 1;
            return {{std::move(v), 1}};
        }
        case GateKind::Add: {
            ProducedSet a = self(self, u->left);
            ProducedSet b = self(self, u->right);
            for (auto& [vec, c] : b) a[vec] += c;
            detail::check_budget(a.size(), budget);
            return a;
        }
        case GateKind::Mul: {
            ProducedSet a = self(self, u->left);
            ProducedSet b = self(self, u->right);
            ProducedSet out;
            for (const auto& [va, ca] : a)
                for (const auto& [vb, cb] : b) {
                    std::vector<int> sum(va.size());
                    for (std::size_t i = 0; i < va.size(); ++i) sum[i] = va[i] + vb[i];
                    out[std::move(sum)] += ca * cb;
                    detail::check_budget(out.size(), budget);
                }
            return out;
        }
        }
        return {};
    };
    return rec(rec, f);
}

// Keys of a produced set read back as a language (multilinear sets only).
inline Language produced_keys_as_language(const ProducedSet& ps, int num_vars) {
    std::vector<Word> ws;
    for (const auto& [vec, c] : ps) {
        Word w(vec.size());
        for (std::size_t i = 0; i < vec.size(); ++i) {
            if (vec[i] != 0 && vec[i] != 1)
                throw SemanticsError("produced set is not multilinear");
            w[i] = vec[i] ? 2 : 1;
        }
        ws.push_back(std::move(w));
    }
    return Language(std::max(num_vars > 0 ? 2 : 1, 2), std::move(ws));
}

// ---------------------------------------------------------------------------
// Characteristic-function evaluation: union -> OR, concatenation -> AND,
// leaf 1 at position i -> x_i, leaf 0 at position i -> NOT x_i.
inline bool boolean_eval(const ExprPtr& expr, const std::vector<bool>& assignment) {
    detail::require_positionable(expr);
    if (expr->max_letter > 2) throw SemanticsError("boolean evaluation is defined over {0,1}");
    if (static_cast<int>(assignment.size()) != expr->degree)
        throw SemanticsError("assignment length must equal the degree");
    ExprPtr e = eliminate_epsilon(expr);
    auto rec = [&](auto&& self, const ExprPtr& u, int offset) -> bool {
        switch (u->kind) {
        case ExprKind::Letter: {
            bool x = assignment[static_cast<std::size_t>(offset)];
            return u->letter == 2 ? x : !x;
        }
        case ExprKind::Union:
            return self(self, u->left, offset) || self(self, u->right, offset);
        case ExprKind::Concat:
            return self(self, u->left, offset) && self(self, u->right, offset + u->left->degree);
        default:
            throw SemanticsError("unexpected node after epsilon elimination");
        }
    };
    return rec(rec, e, 0);
}

// sigma(L) = { w_{sigma(1)} ... w_{sigma(n)} : w in L }
inline Language permute_language(const Language& l, const std::vector<int>& sigma) {
    int n = l.degree();
    if (n < 0) throw SemanticsError("permutation needs a homogeneous language");
    if (static_cast<int>(sigma.size()) != n) throw SemanticsError("sigma must have length n");
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (int s : sigma) {
        if (s < 1 || s > n || hit[static_cast<std::size_t>(s - 1)])
            throw SemanticsError("sigma must be a bijection on [n]");
        hit[static_cast<std::size_t>(s - 1)] = 1;
    }
    std::vector<Word> out;
    for (const Word& w : l.words()) {
        Word v(w.size());
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)] - 1)];
        out.push_back(std::move(v));
    }
    return Language(l.alphabet_size(), std::move(out));
}

} // namespace rexlen
