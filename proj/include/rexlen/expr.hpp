#pragma once

// Regular-expression syntax trees over integer alphabets, with exact
// bounded-language semantics. Letters are 1-based ids; small alphabets may
// attach one display character per letter for parsing and printing.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rexlen {

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& msg)
        : std::runtime_error(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SemanticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Alphabet

class Alphabet {
public:
    Alphabet() : size_(0) {}

    // Letters 1..chars.size(), displayed by the given characters.
    static Alphabet chars(const std::string& cs) {
        Alphabet a;
        a.size_ = static_cast<int>(cs.size());
        a.display_.assign(cs.begin(), cs.end());
        for (std::size_t i = 0; i < cs.size(); ++i) {
            for (std::size_t j = i + 1; j < cs.size(); ++j)
                if (cs[i] == cs[j]) throw SemanticsError("duplicate display character in alphabet");
        }
        return a;
    }

    // Letters 1..k. Displays assigned for k <= 62; 'e' is skipped so the
    // ASCII epsilon spelling stays unambiguous.
    static Alphabet numeric(int k) {
        if (k < 1) throw SemanticsError("alphabet size must be >= 1");
        static const std::string seq =
            "123456789abcdfghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0";
        Alphabet a;
        a.size_ = k;
        if (k <= static_cast<int>(seq.size()))
            a.display_.assign(seq.begin(), seq.begin() + k);
        return a;
    }

    static Alphabet binary() { return chars("01"); }

    int size() const { return size_; }

    bool has_display(int id) const {
        return id >= 1 && id <= static_cast<int>(display_.size());
    }
    char display(int id) const { return display_[static_cast<std::size_t>(id - 1)]; }

    // 0 when the character is not a letter of this alphabet.
    int id_of(char c) const {
        for (std::size_t i = 0; i < display_.size(); ++i)
            if (display_[i] == c) return static_cast<int>(i) + 1;
        return 0;
    }

private:
    int size_;
    std::vector<char> display_;
};

// ---------------------------------------------------------------------------
// Words and finite languages

using Word = std::vector<int>;

inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

inline std::string word_text(const Word& w, const Alphabet& a) {
    if (w.empty()) return "-";
    std::string s;
    for (int id : w) {
        if (a.has_display(id)) s.push_back(a.display(id));
        else s += "{" + std::to_string(id) + "}";
    }
    return s;
}

class Language {
public:
    Language() : k_(1) {}
    explicit Language(int alphabet_size) : k_(alphabet_size) {
        if (k_ < 1) throw SemanticsError("alphabet size must be >= 1");
    }
    Language(int alphabet_size, std::vector<Word> words) : k_(alphabet_size), words_(std::move(words)) {
        if (k_ < 1) throw SemanticsError("alphabet size must be >= 1");
        normalize();
    }

    int alphabet_size() const { return k_; }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::vector<Word>& words() const { return words_; }

    bool contains(const Word& w) const {
        return std::binary_search(words_.begin(), words_.end(), w, shortlex_less);
    }

    // Common word length, or -1 when lengths differ. Empty language: -1.
    int degree() const {
        if (words_.empty()) return -1;
        std::size_t n = words_.front().size();
        if (words_.back().size() != n) return -1;
        return static_cast<int>(n);
    }
    bool homogeneous() const { return !words_.empty() && words_.front().size() == words_.back().size(); }

    bool operator==(const Language& o) const { return k_ == o.k_ && words_ == o.words_; }
    bool operator!=(const Language& o) const { return !(*this == o); }

    void insert(Word w) {
        validate(w);
        auto it = std::lower_bound(words_.begin(), words_.end(), w, shortlex_less);
        if (it == words_.end() || *it != w) words_.insert(it, std::move(w));
    }

    std::string key() const {
        std::string s = std::to_string(k_) + "#";
        for (const auto& w : words_) {
            for (int c : w) { s += std::to_string(c); s.push_back(','); }
            s.push_back(';');
        }
        return s;
    }

private:
    void validate(const Word& w) const {
        for (int id : w)
            if (id < 1 || id > k_) throw SemanticsError("letter id out of alphabet range");
    }
    void normalize() {
        for (const auto& w : words_) validate(w);
        std::sort(words_.begin(), words_.end(), shortlex_less);
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
    }

    int k_;
    std::vector<Word> words_;
};

// ---------------------------------------------------------------------------
// Expression AST. Nodes are immutable and may be shared (conversion memoizes
// subtrees); cached sizes count the expanded tree, not the shared graph.

enum class ExprKind : std::uint8_t { Letter, Epsilon, Union, Concat, Star };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    ExprKind kind;
    int letter = 0;      // Letter nodes
    ExprPtr left, right; // Union/Concat: both children; Star: left only

    unsigned long long rpn_nodes = 1; // expanded node count
    unsigned long long leaves = 1;    // expanded leaf count (letters and epsilons)
    bool homogeneous = true;
    int degree = 0;          // valid when homogeneous
    bool has_letter = false; // some Letter leaf below
    bool has_star = false;
    int max_letter = 0;

    static ExprPtr make_letter(int id) {
        if (id < 1) throw SemanticsError("letter ids are 1-based");
        Expr e;
        e.kind = ExprKind::Letter;
        e.letter = id;
        e.degree = 1;
        e.has_letter = true;
        e.max_letter = id;
        return finish(std::move(e));
    }

    static ExprPtr make_eps() {
        Expr e;
        e.kind = ExprKind::Epsilon;
        return finish(std::move(e));
    }

    static ExprPtr make_union(ExprPtr a, ExprPtr b) {
        Expr e;
        e.kind = ExprKind::Union;
        e.left = std::move(a);
        e.right = std::move(b);
        e.rpn_nodes = 1 + e.left->rpn_nodes + e.right->rpn_nodes;
        e.leaves = e.left->leaves + e.right->leaves;
        e.homogeneous = e.left->homogeneous && e.right->homogeneous &&
                        e.left->degree == e.right->degree;
        e.degree = e.homogeneous ? e.left->degree : -1;
        e.has_letter = e.left->has_letter || e.right->has_letter;
        e.has_star = e.left->has_star || e.right->has_star;
        e.max_letter = std::max(e.left->max_letter, e.right->max_letter);
        return finish(std::move(e));
    }

    static ExprPtr make_concat(ExprPtr a, ExprPtr b) {
        Expr e;
        e.kind = ExprKind::Concat;
        e.left = std::move(a);
        e.right = std::move(b);
        e.rpn_nodes = 1 + e.left->rpn_nodes + e.right->rpn_nodes;
        e.leaves = e.left->leaves + e.right->leaves;
        e.homogeneous = e.left->homogeneous && e.right->homogeneous;
        e.degree = e.homogeneous ? e.left->degree + e.right->degree : -1;
        e.has_letter = e.left->has_letter || e.right->has_letter;
        e.has_star = e.left->has_star || e.right->has_star;
        e.max_letter = std::max(e.left->max_letter, e.right->max_letter);
        return finish(std::move(e));
    }

    static ExprPtr make_star(ExprPtr a) {
        Expr e;
        e.kind = ExprKind::Star;
        e.left = std::move(a);
        e.rpn_nodes = 1 + e.left->rpn_nodes;
        e.leaves = e.left->leaves;
        // T* is homogeneous only when T cannot produce a letter, i.e. L(T*)={eps}.
        e.homogeneous = !e.left->has_letter;
        e.degree = e.homogeneous ? 0 : -1;
        e.has_letter = e.left->has_letter;
        e.has_star = true;
        e.max_letter = e.left->max_letter;
        return finish(std::move(e));
    }

    Expr(const Expr&) = default;

private:
    Expr() = default;
    static ExprPtr finish(Expr&& e) { return std::make_shared<const Expr>(e); }
};

inline unsigned long long rpn(const ExprPtr& e) { return e->rpn_nodes; }

// Unique node count of the shared graph (equals rpn for plain trees).
inline std::size_t dag_nodes(const ExprPtr& e) {
    std::set<const Expr*> seen;
    std::vector<const Expr*> stack{e.get()};
    while (!stack.empty()) {
        const Expr* u = stack.back();
        stack.pop_back();
        if (!seen.insert(u).second) continue;
        if (u->left) stack.push_back(u->left.get());
        if (u->right) stack.push_back(u->right.get());
    }
    return seen.size();
}

struct DegreeInfo {
    bool homogeneous;
    int degree; // defined only when homogeneous
};

inline DegreeInfo degree_info(const ExprPtr& e) {
    return {e->homogeneous, e->homogeneous ? e->degree : -1};
}

inline bool equal_ast(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case ExprKind::Letter: return a->letter == b->letter;
    case ExprKind::Epsilon: return true;
    case ExprKind::Star: return equal_ast(a->left, b->left);
    default: return equal_ast(a->left, b->left) && equal_ast(a->right, b->right);
    }
}

// ---------------------------------------------------------------------------
// Parser. Grammar:
//   expr   := term ('+' term)*
//   term   := factor+
//   factor := atom '*'?
//   atom   := letter | 'e' | '(' expr ')'
//   letter := display char from the alphabet, or '{' integer '}'
// Unions and concatenations associate to the left. "ε" is accepted for 'e';
// the empty-language symbol is rejected outright.

namespace detail {

class Parser {
public:
    Parser(const std::string& text, const Alphabet& alpha) : s_(text), a_(alpha) {}

    ExprPtr run() {
        skip_ws();
        ExprPtr e = parse_union();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError(pos_, "unexpected trailing input");
        return e;
    }

private:
    ExprPtr parse_union() {
        ExprPtr e = parse_term();
        skip_ws();
        while (peek() == '+') {
            ++pos_;
            skip_ws();
            e = Expr::make_union(e, parse_term());
            skip_ws();
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        skip_ws();
        while (starts_atom()) {
            e = Expr::make_concat(e, parse_factor());
            skip_ws();
        }
        return e;
    }

    ExprPtr parse_factor() {
        ExprPtr e = parse_atom();
        skip_ws();
        if (peek() == '*') {
            ++pos_;
            return Expr::make_star(e);
        }
        return e;
    }

    ExprPtr parse_atom() {
        if (pos_ >= s_.size()) throw ParseError(pos_, "expected atom, found end of input");
        // UTF-8 specials first.
        if (match_utf8("\xE2\x88\x85"))
            throw ParseError(pos_, "the empty-language symbol is not allowed in expressions");
        if (match_utf8_consume("\xCE\xB5")) return Expr::make_eps();

        char c = s_[pos_];
        if (c == '(') {
            std::size_t open = pos_++;
            skip_ws();
            ExprPtr e = parse_union();
            skip_ws();
            if (peek() != ')') throw ParseError(open, "unbalanced '('");
            ++pos_;
            return e;
        }
        if (c == '{') {
            std::size_t open = pos_++;
            std::size_t start = pos_;
            while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
            if (pos_ == start || peek() != '}')
                throw ParseError(open, "expected '{integer}' letter");
            int id = std::stoi(s_.substr(start, pos_ - start));
            ++pos_;
            if (id < 1 || id > a_.size()) throw ParseError(open, "unknown letter {" + std::to_string(id) + "}");
            return Expr::make_letter(id);
        }
        if (int id = a_.id_of(c); id != 0) {
            ++pos_;
            return Expr::make_letter(id);
        }
        if (c == 'e') { // epsilon unless 'e' is a declared letter (checked above)
            ++pos_;
            return Expr::make_eps();
        }
        throw ParseError(pos_, std::string("unknown letter '") + c + "'");
    }

    bool starts_atom() {
        if (pos_ >= s_.size()) return false;
        if (match_utf8("\xCE\xB5")) return true;
        char c = s_[pos_];
        if (c == '(' || c == '{' || c == 'e') return true;
        return a_.id_of(c) != 0;
    }

    bool match_utf8(const char* seq) const {
        std::size_t n = std::char_traits<char>::length(seq);
        return s_.compare(pos_, n, seq) == 0;
    }
    bool match_utf8_consume(const char* seq) {
        if (!match_utf8(seq)) return false;
        pos_ += std::char_traits<char>::length(seq);
        return true;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
            ++pos_;
    }

    const std::string& s_;
    const Alphabet& a_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ExprPtr parse(const std::string& text, const Alphabet& alpha) {
    return detail::Parser(text, alpha).run();
}

// Canonical printer; parse(print(e)) reproduces the AST exactly.
inline std::string print(const ExprPtr& e, const Alphabet& alpha) {
    auto letter_text = [&](int id) -> std::string {
        if (alpha.has_display(id)) return std::string(1, alpha.display(id));
        return "{" + std::to_string(id) + "}";
    };
    // "e" collides with a declared letter 'e'; fall back to the UTF-8 form.
    const std::string eps_text = alpha.id_of('e') != 0 ? "\xCE\xB5" : "e";
    // prec: 0 union context, 1 concat context, 2 star argument
    auto rec = [&](auto&& self, const ExprPtr& u, int prec, bool right_side) -> std::string {
        switch (u->kind) {
        case ExprKind::Letter: return letter_text(u->letter);
        case ExprKind::Epsilon: return eps_text;
        case ExprKind::Union: {
            std::string s = self(self, u->left, 0, false) + "+" + self(self, u->right, 0, true);
            // left-associated chains print bare; anything else is bracketed
            if (prec > 0 || right_side) return "(" + s + ")";
            return s;
        }
        case ExprKind::Concat: {
            std::string s = self(self, u->left, 1, false) + self(self, u->right, 1, true);
            if (prec > 1 || (prec == 1 && right_side)) return "(" + s + ")";
            return s;
        }
        case ExprKind::Star: {
            std::string s = self(self, u->left, 2, false) + "*";
            if (prec == 2) return "(" + s + ")"; // star of a starred factor
            return s;
        }
        }
        return {};
    };
    return rec(rec, e, 0, false);
}

// ---------------------------------------------------------------------------
// Bounded language semantics

struct LanguageOptions {
    std::optional<int> max_len;        // required when the expression has a star
    std::size_t budget = 2'000'000;    // hard cap on intermediate set sizes
};

namespace detail {

inline void check_budget(std::size_t n, std::size_t budget) {
    if (n > budget) throw BudgetError("language enumeration exceeded budget of " + std::to_string(budget) + " words");
}

inline std::vector<Word> words_of(const ExprPtr& e, const LanguageOptions& opt) {
    switch (e->kind) {
    case ExprKind::Letter: return {{e->letter}};
    case ExprKind::Epsilon: return {{}};
    case ExprKind::Union: {
        std::vector<Word> ws = words_of(e->left, opt);
        std::vector<Word> rs = words_of(e->right, opt);
        ws.insert(ws.end(), rs.begin(), rs.end());
        std::sort(ws.begin(), ws.end(), shortlex_less);
        ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
        check_budget(ws.size(), opt.budget);
        return ws;
    }
    case ExprKind::Concat: {
        std::vector<Word> ls = words_of(e->left, opt);
        std::vector<Word> rs = words_of(e->right, opt);
        std::set<Word> out;
        for (const auto& x : ls)
            for (const auto& y : rs) {
                if (opt.max_len && static_cast<int>(x.size() + y.size()) > *opt.max_len) continue;
                Word w = x;
                w.insert(w.end(), y.begin(), y.end());
                out.insert(std::move(w));
                check_budget(out.size(), opt.budget);
            }
        return {out.begin(), out.end()};
    }
    case ExprKind::Star: {
        if (!opt.max_len)
            throw SemanticsError("expression contains a star; bounded enumeration needs max_len");
        std::vector<Word> base = words_of(e->left, opt);
        std::set<Word> out;
        out.insert(Word{});
        std::vector<Word> frontier{Word{}};
        while (!frontier.empty()) {
            std::vector<Word> next;
            for (const auto& x : frontier)
                for (const auto& y : base) {
                    if (y.empty()) continue;
                    if (static_cast<int>(x.size() + y.size()) > *opt.max_len) continue;
                    Word w = x;
                    w.insert(w.end(), y.begin(), y.end());
                    if (out.insert(w).second) next.push_back(std::move(w));
                    check_budget(out.size(), opt.budget);
                }
            frontier = std::move(next);
        }
        return {out.begin(), out.end()};
    }
    }
    return {};
}

} // namespace detail

inline Language language(const ExprPtr& e, int alphabet_size, LanguageOptions opt = {}) {
    if (e->has_star && !opt.max_len)
        throw SemanticsError("expression contains a star; bounded enumeration needs max_len");
    std::vector<Word> ws = detail::words_of(e, opt);
    if (opt.max_len) {
        std::vector<Word> kept;
        for (auto& w : ws)
            if (static_cast<int>(w.size()) <= *opt.max_len) kept.push_back(std::move(w));
        ws = std::move(kept);
    }
    int k = std::max(alphabet_size, 1);
    return Language(k, std::move(ws));
}

inline Language language(const ExprPtr& e, LanguageOptions opt = {}) {
    return language(e, std::max(e->max_letter, 1), std::move(opt));
}

inline bool equivalent(const ExprPtr& a, const ExprPtr& b, int alphabet_size = 0) {
    if (a->has_star || b->has_star)
        throw SemanticsError("equivalence is decided for star-free expressions only; "
                             "use bounded language comparison for starred expressions");
    int k = alphabet_size > 0 ? alphabet_size : std::max({a->max_letter, b->max_letter, 1});
    return language(a, k) == language(b, k);
}

} // namespace rexlen
