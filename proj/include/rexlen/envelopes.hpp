#pragma once

// Envelope extraction: rewrite an expression into one for its sublanguage of
// longest, shortest, or extremal-weight words without increasing its size.
// Union children of non-extremal weight are deleted in a postorder pass;
// concatenations are untouched since they preserve homogeneity.

#include "expr.hpp"

#include <gmpxx.h>

#include <map>

namespace rexlen {

class Weighting {
public:
    Weighting() = default;
    explicit Weighting(std::map<int, mpq_class> mu) : mu_(std::move(mu)) {
        for (const auto& [letter, w] : mu_) {
            if (letter < 1) throw SemanticsError("weighting letters are 1-based");
            if (w < 0) throw SemanticsError("weights must be nonnegative");
        }
    }

    static Weighting uniform(int alphabet, const mpq_class& w = 1) {
        std::map<int, mpq_class> mu;
        for (int a = 1; a <= alphabet; ++a) mu[a] = w;
        return Weighting(std::move(mu));
    }

    const mpq_class& of(int letter) const {
        auto it = mu_.find(letter);
        if (it == mu_.end())
            throw SemanticsError("weighting has no entry for letter " + std::to_string(letter));
        return it->second;
    }

    mpq_class word_weight(const Word& w) const {
        mpq_class total = 0;
        for (int a : w) total += of(a);
        return total;
    }

    const std::map<int, mpq_class>& entries() const { return mu_; }

private:
    std::map<int, mpq_class> mu_;
};

enum class EnvelopeDirection { Lower, Higher };

namespace detail {

inline bool zero_weight_subtree(const ExprPtr& u, const Weighting& mu) {
    if (u->kind == ExprKind::Letter) return mu.of(u->letter) == 0;
    if (u->left && !zero_weight_subtree(u->left, mu)) return false;
    if (u->right && !zero_weight_subtree(u->right, mu)) return false;
    return true;
}

struct Enveloped {
    ExprPtr expr;
    mpq_class weight;
};

inline Enveloped envelope_rec(const ExprPtr& u, const Weighting& mu, EnvelopeDirection dir) {
    switch (u->kind) {
    case ExprKind::Letter:
        return {u, mu.of(u->letter)};
    case ExprKind::Epsilon:
        return {u, 0};
    case ExprKind::Star: {
        if (!u->left->has_letter) return {Expr::make_eps(), 0}; // describes {eps} anyway
        if (zero_weight_subtree(u->left, mu)) return {u, 0};    // kept whole; may stay infinite
        if (dir == EnvelopeDirection::Higher)
            throw SemanticsError("higher envelope of a star over positive-weight words is unbounded");
        return {Expr::make_eps(), 0};
    }
    case ExprKind::Union: {
        Enveloped l = envelope_rec(u->left, mu, dir);
        Enveloped r = envelope_rec(u->right, mu, dir);
        if (l.weight == r.weight) {
            if (l.expr == u->left && r.expr == u->right) return {u, l.weight};
            return {Expr::make_union(l.expr, r.expr), l.weight};
        }
        bool keep_left = dir == EnvelopeDirection::Lower ? l.weight < r.weight : l.weight > r.weight;
        return keep_left ? l : r;
    }
    case ExprKind::Concat: {
        Enveloped l = envelope_rec(u->left, mu, dir);
        Enveloped r = envelope_rec(u->right, mu, dir);
        if (l.expr == u->left && r.expr == u->right) return {u, l.weight + r.weight};
        return {Expr::make_concat(l.expr, r.expr), l.weight + r.weight};
    }
    }
    return {u, 0};
}

} // namespace detail

inline ExprPtr mu_envelope(const ExprPtr& e, const Weighting& mu, EnvelopeDirection dir) {
    ExprPtr out = detail::envelope_rec(e, mu, dir).expr;
    if (out->rpn_nodes > e->rpn_nodes) throw SemanticsError("envelope grew; this is a bug");
    return out;
}

// words of maximal length; input must describe a finite language
inline ExprPtr higher_envelope(const ExprPtr& e) {
    return mu_envelope(e, Weighting::uniform(std::max(e->max_letter, 1)), EnvelopeDirection::Higher);
}

// words of minimal length; stars are replaced by the empty word first
inline ExprPtr lower_envelope(const ExprPtr& e) {
    return mu_envelope(e, Weighting::uniform(std::max(e->max_letter, 1)), EnvelopeDirection::Lower);
}

// the infinite variant: every letter a becomes a . (a_1 + ... + a_k)*
inline ExprPtr star_variant(const ExprPtr& e, int alphabet) {
    ExprPtr sigma;
    for (int a = 1; a <= alphabet; ++a) {
        ExprPtr letter = Expr::make_letter(a);
        sigma = sigma ? Expr::make_union(sigma, letter) : letter;
    }
    ExprPtr sigma_star = Expr::make_star(sigma);
    auto rec = [&](auto&& self, const ExprPtr& u) -> ExprPtr {
        switch (u->kind) {
        case ExprKind::Letter:
            return Expr::make_concat(u, sigma_star);
        case ExprKind::Epsilon:
            return u;
        case ExprKind::Union:
            return Expr::make_union(self(self, u->left), self(self, u->right));
        case ExprKind::Concat:
            return Expr::make_concat(self(self, u->left), self(self, u->right));
        case ExprKind::Star:
            return Expr::make_star(self(self, u->left));
        }
        return u;
    };
    return rec(rec, e);
}

} // namespace rexlen
