// rexlen: expression-length toolkit for finite languages.
//
// Subcommands: parse, lang, convert, arith, logprod, envelope, bound, oracle,
// repro. Exit codes: 0 success, 1 enumeration/budget/runtime failure, 2 usage.

#include <rexlen/arith.hpp>
#include <rexlen/bounds.hpp>
#include <rexlen/io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>

using namespace rexlen;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string load_expr_text(const std::string& value) {
    std::ifstream in(value);
    if (in) {
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
            text.pop_back();
        return text;
    }
    return value;
}

Alphabet resolve_alphabet(const std::string& spec, int size_spec, const std::string& expr_text) {
    if (size_spec > 0) return Alphabet::numeric(size_spec);
    if (!spec.empty()) return Alphabet::chars(spec);
    // infer: '{id}' letters force a numeric alphabet, else the sorted set of
    // letter characters appearing in the text ('e' stays the empty word)
    int max_id = 0;
    std::set<char> chars;
    for (std::size_t i = 0; i < expr_text.size(); ++i) {
        char c = expr_text[i];
        if (c == '{') {
            std::size_t j = i + 1;
            int v = 0;
            while (j < expr_text.size() && isdigit(static_cast<unsigned char>(expr_text[j])))
                v = v * 10 + (expr_text[j++] - '0');
            max_id = std::max(max_id, v);
            i = j;
        } else if (isalnum(static_cast<unsigned char>(c)) && c != 'e') {
            chars.insert(c);
        }
    }
    if (max_id > 0) return Alphabet::numeric(max_id);
    if (chars.empty()) return Alphabet::chars("01");
    return Alphabet::chars(std::string(chars.begin(), chars.end()));
}

Alphabet display_alphabet(int k) {
    return k == 2 ? Alphabet::binary() : Alphabet::numeric(k);
}

json language_json(const Language& l, const Alphabet& a) {
    json words = json::array();
    for (const Word& w : l.words()) words.push_back(word_text(w, a));
    return {{"alphabet", l.alphabet_size()}, {"count", l.size()}, {"words", std::move(words)}};
}

void emit_language(const Language& l, const Alphabet& a, const std::string& emit, const std::string& out) {
    if (!out.empty()) {
        write_language_file(out, l);
        std::cout << "wrote " << l.size() << " words to " << out << "\n";
        return;
    }
    if (emit == "json") std::cout << language_json(l, a).dump(2) << "\n";
    else write_language(std::cout, l);
}

// 2-decimal truncation rendered as a string, e.g. 398 -> "3.98"
std::string trunc2_eval(const std::function<Interval(mpfr_prec_t)>& eval) {
    mpz_class t = fixed_trunc_with_widening(eval, 2);
    mpz_class whole = t / 100, frac = t % 100;
    std::string f = frac.get_str();
    if (f.size() < 2) f = "0" + f;
    return whole.get_str() + "." + f;
}

int run_parse(const std::string& expr_val, const std::string& alpha_spec, int alpha_size, bool want_rpn,
              bool want_degree, bool want_lang, int max_len, const std::string& emit) {
    std::string text = load_expr_text(expr_val);
    Alphabet a = resolve_alphabet(alpha_spec, alpha_size, text);
    ExprPtr e = parse(text, a);
    DegreeInfo d = degree_info(e);
    json j;
    j["canonical"] = print(e, a);
    j["rpn"] = rpn(e);
    j["homogeneous"] = d.homogeneous;
    if (d.homogeneous) j["degree"] = d.degree;
    LanguageOptions opt;
    if (max_len >= 0) opt.max_len = max_len;
    if (want_lang) j["language"] = language_json(language(e, a.size(), opt), a);
    if (emit == "json") {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (want_rpn) std::cout << "rpn " << rpn(e) << "\n";
    if (want_degree) {
        if (d.homogeneous) std::cout << "homogeneous, degree " << d.degree << "\n";
        else std::cout << "non-homogeneous\n";
    }
    if (want_lang) write_language(std::cout, language(e, a.size(), opt));
    if (!want_rpn && !want_degree && !want_lang) std::cout << j["canonical"].get<std::string>() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// repro manifests. Expected values are recorded here so regressions anywhere
// in the pipeline turn the command red.

struct Table4Target {
    int n;
    const char* recursion_row; // max over k of (n-k)! h(k), truncated to 2 decimals
    const char* h_row;         // h(n), truncated to 2 decimals
    const char* note;
};

// The n=5 closed-form entry: the recorded reference digits "3.89" contradict
// the defining formula h(n) = n! 4^(1-n) n^((3+log2 n)/4), which evaluates to
// 3.9894...; the reference digits look like a transposition of "3.98".
constexpr Table4Target TABLE4[] = {
    {2, "1.00", "1.00", ""},
    {3, "1.00", "1.32", ""},
    {4, "2.00", "2.12", ""},
    {5, "2.64", "3.98", "reference digits 3.89 disagree with the defining formula (3.98...)"},
    {6, "7.92", "8.58", ""},
    {7, "12.72", "20.74", ""},
};

struct Table1Target {
    const char* family;
    long count;
    int dfa_states;
    int slice_states;
    unsigned long long upper_rpn;
    const char* cert; // 2-decimal truncation, "-" when not computed
};

// Desk-scale snapshot of the bound pipeline; regenerated values must match.
constexpr Table1Target TABLE1[] = {
    {"binomial:n=8,k=3", 56, 4, 24, 175, "-"},
    {"threshold:n=8,k=3", 219, 4, 24, 201, "-"},
    {"dyck:2n=8", 14, 5, 15, 87, "-"},
    {"div:n=8,p=5", 52, 5, 29, 255, "0.08"},
    {"parity:n=6,k=3", 183, 8, 20, 263, "0.50"},
    {"perm:n=4", 24, 16, 16, 95, "11.31"},
};

int run_repro_table4(int n_max) {
    bool ok = true;
    std::cout << "n    max_k (n-k)!h(k)    h(n)\n";
    for (int n = 2; n <= n_max; ++n) {
        std::string row1 = trunc2_eval([&](mpfr_prec_t p) { return perm_recursion_row(n, p); });
        std::string row2 = trunc2_eval([&](mpfr_prec_t p) { return h_perm(n, p); });
        std::string status = "(unchecked)";
        for (const Table4Target& t : TABLE4)
            if (t.n == n) {
                bool match = row1 == t.recursion_row && row2 == t.h_row;
                status = match ? "ok"
                               : "MISMATCH (expected " + std::string(t.recursion_row) + ", " + t.h_row + ")";
                if (!match) ok = false;
                if (t.note[0]) status += "  [" + std::string(t.note) + "]";
            }
        printf("%-4d %-18s %-7s %s\n", n, row1.c_str(), row2.c_str(), status.c_str());
    }
    return ok ? 0 : 1;
}

int run_repro_table1() {
    bool ok = true;
    printf("%-20s %6s %4s %6s %10s %-12s\n", "family", "count", "dfa", "slice", "upper-rpn", "lower-cert");
    for (const Table1Target& t : TABLE1) {
        BoundReport r = bound_report(parse_family(t.family), false);
        std::string cert = "-";
        if (r.has_certificate) cert = trunc2_eval([&](mpfr_prec_t) { return r.certificate; });
        bool match = r.count == t.count && r.dfa_states == t.dfa_states &&
                     r.slice_states == t.slice_states && r.upper_rpn == t.upper_rpn && cert == t.cert;
        if (!match) ok = false;
        printf("%-20s %6s %4d %6d %10llu %-12s %s%s\n", t.family, r.count.get_str().c_str(), r.dfa_states,
               r.slice_states, r.upper_rpn, cert.c_str(), match ? "ok" : "MISMATCH",
               r.vacuous ? " (vacuous)" : "");
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"expression-length toolkit for finite languages"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned long long seed = 0;
    std::size_t budget = 2'000'000;
    app.add_option("--seed", seed, "seed for randomized generators (reserved; outputs stay deterministic)");
    app.add_option("--budget", budget, "cap on enumerated words / search work");

    // parse
    auto* cmd_parse = app.add_subcommand("parse", "parse an expression; report rpn, degree, language");
    std::string p_expr, p_alpha, p_emit = "text";
    bool p_rpn = false, p_degree = false, p_lang = false;
    int p_maxlen = -1, p_asize = 0;
    cmd_parse->add_option("--expr", p_expr, "expression text or file")->required();
    cmd_parse->add_option("--alphabet", p_alpha, "letter characters, e.g. 01 or abc");
    cmd_parse->add_option("--alphabet-size", p_asize, "numeric alphabet with letters {1}..{k}");
    cmd_parse->add_flag("--rpn", p_rpn, "print the reverse polish length");
    cmd_parse->add_flag("--degree", p_degree, "print homogeneity and degree");
    cmd_parse->add_flag("--language", p_lang, "enumerate the described language");
    cmd_parse->add_option("--max-len", p_maxlen, "length bound for starred expressions");
    cmd_parse->add_option("--emit", p_emit, "text|json")->check(CLI::IsMember({"text", "json"}));

    // lang
    auto* cmd_lang = app.add_subcommand("lang", "family generators, counts and set operations");
    auto* lang_gen = cmd_lang->add_subcommand("generate", "enumerate a family");
    std::string lg_family, lg_out, lg_emit = "text";
    lang_gen->add_option("--family", lg_family, "family spec, e.g. binomial:n=8,k=3")->required();
    lang_gen->add_option("--out", lg_out, "write to a language file");
    lang_gen->add_option("--emit", lg_emit, "text|json")->check(CLI::IsMember({"text", "json"}));
    auto* lang_count = cmd_lang->add_subcommand("count", "exact count from the closed form");
    std::string lc_family, lc_emit = "text";
    lang_count->add_option("--family", lc_family)->required();
    lang_count->add_option("--emit", lc_emit, "text|json")->check(CLI::IsMember({"text", "json"}));
    auto* lang_op = cmd_lang->add_subcommand("op", "intersect, shuffle or slice language files");
    std::string lo_op, lo_a, lo_b, lo_out;
    int lo_n = -1;
    lang_op->add_option("--op", lo_op, "intersect|shuffle|slice")
        ->required()
        ->check(CLI::IsMember({"intersect", "shuffle", "slice"}));
    lang_op->add_option("--a", lo_a, "first language file")->required();
    lang_op->add_option("--b", lo_b, "second language file (intersect/shuffle)");
    lang_op->add_option("--n", lo_n, "slice length");
    lang_op->add_option("--out", lo_out, "write the result to a language file");
    auto* lang_cube = cmd_lang->add_subcommand("hypercube", "exact k-cube walk probability");
    int hc_n = 0, hc_k = 0;
    std::string hc_q;
    lang_cube->add_option("--n", hc_n, "steps")->required();
    lang_cube->add_option("--k", hc_k, "dimension")->required();
    lang_cube->add_option("--q", hc_q, "target vertex as a 0/1 string")->required();

    // convert
    auto* cmd_convert = app.add_subcommand("convert", "slice an automaton and convert it to an expression");
    std::string cv_automaton, cv_family, cv_emit = "expr", cv_out;
    int cv_slice = -1;
    cmd_convert->add_option("--automaton", cv_automaton, "automaton JSON file");
    cmd_convert->add_option("--family", cv_family, "use a built-in family automaton instead");
    cmd_convert->add_option("--slice", cv_slice, "slice length (required for DFA inputs)");
    cmd_convert->add_option("--emit", cv_emit, "expr|stats|json|dfa-json")
        ->check(CLI::IsMember({"expr", "stats", "json", "dfa-json"}));
    cmd_convert->add_option("--out", cv_out, "write output here instead of stdout");

    // arith
    auto* cmd_arith = app.add_subcommand("arith", "arithmetic version of a binary-alphabet expression");
    std::string ar_expr, ar_alpha, ar_emit = "formula";
    int ar_asize = 0;
    cmd_arith->add_option("--expr", ar_expr)->required();
    cmd_arith->add_option("--alphabet", ar_alpha, "letter characters");
    cmd_arith->add_option("--alphabet-size", ar_asize, "numeric alphabet size");
    cmd_arith->add_option("--emit", ar_emit, "formula|produced-set")
        ->check(CLI::IsMember({"formula", "produced-set"}));

    // logprod
    auto* cmd_lp = app.add_subcommand("logprod", "log-product predicate, decomposition, factorizations");
    auto* lp_check = cmd_lp->add_subcommand("check", "test the log-product predicate");
    auto* lp_decomp = cmd_lp->add_subcommand("decompose", "write as a union of log-product parts");
    auto* lp_fact = cmd_lp->add_subcommand("factorize", "canonical or gamma factorization");
    auto* lp_maxsub = cmd_lp->add_subcommand("maxsub", "largest log-product sublanguage");
    auto* lp_permmax = cmd_lp->add_subcommand("permmax", "counting recursion for permutation languages");
    std::string lpc_expr, lpc_alpha;
    int lpc_asize = 0;
    for (auto* c : {lp_check, lp_decomp, lp_fact}) {
        c->add_option("--expr", lpc_expr)->required();
        c->add_option("--alphabet", lpc_alpha, "letter characters");
        c->add_option("--alphabet-size", lpc_asize, "numeric alphabet size");
    }
    std::string lpf_gamma;
    lp_fact->add_option("--gamma", lpf_gamma, "rational gamma, e.g. 3/2; canonical factorization if absent");
    std::string lpm_language;
    lp_maxsub->add_option("--language", lpm_language, "language file")->required();
    int lpp_n = 0;
    lp_permmax->add_option("--n", lpp_n)->required();

    // envelope
    auto* cmd_env = app.add_subcommand("envelope", "extract lower/higher (mu-)envelopes");
    std::string en_expr, en_alpha, en_dir, en_mu;
    int en_asize = 0;
    cmd_env->add_option("--expr", en_expr)->required();
    cmd_env->add_option("--alphabet", en_alpha, "letter characters");
    cmd_env->add_option("--alphabet-size", en_asize, "numeric alphabet size");
    cmd_env->add_option("--dir", en_dir, "lower|higher")->required()->check(CLI::IsMember({"lower", "higher"}));
    cmd_env->add_option("--mu", en_mu, "weighting file (letter value per line)");

    // bound
    auto* cmd_bound = app.add_subcommand("bound", "lower-bound certificates and constructed upper bounds");
    std::string bd_family, bd_emit = "text";
    bool bd_exact = false, bd_upper = false;
    cmd_bound->add_option("--family", bd_family)->required();
    cmd_bound->add_flag("--exact", bd_exact, "run the exact minimal-rpn oracle when feasible");
    cmd_bound->add_flag("--upper", bd_upper, "also print the constructed upper-bound expression");
    cmd_bound->add_option("--emit", bd_emit, "text|json")->check(CLI::IsMember({"text", "json"}));

    // oracle
    auto* cmd_oracle = app.add_subcommand("oracle", "exact minimal rpn and fooling sets");
    auto* or_minrpn = cmd_oracle->add_subcommand("minrpn", "exact minimal reverse polish length");
    auto* or_fool = cmd_oracle->add_subcommand("fooling", "maximum fooling set");
    std::string om_language, of_language;
    int om_cap = 40;
    or_minrpn->add_option("--language", om_language)->required();
    or_minrpn->add_option("--cap", om_cap, "size cap");
    or_fool->add_option("--language", of_language)->required();

    // repro
    auto* cmd_repro = app.add_subcommand("repro", "regenerate recorded tables and verify them");
    std::string rp_table;
    int rp_nmax = 7;
    cmd_repro->add_option("table", rp_table, "table1|table4")
        ->required()
        ->check(CLI::IsMember({"table1", "table4"}));
    cmd_repro->add_option("--n-max", rp_nmax, "last row for table4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_parse) return run_parse(p_expr, p_alpha, p_asize, p_rpn, p_degree, p_lang, p_maxlen, p_emit);

        if (*cmd_lang) {
            if (*lang_gen) {
                FamilySpec s = parse_family(lg_family);
                GenerateOptions opt;
                opt.budget = budget;
                emit_language(generate(s, opt), family_alphabet(s), lg_emit, lg_out);
                return 0;
            }
            if (*lang_count) {
                ExactCount c = count(parse_family(lc_family));
                if (lc_emit == "json")
                    std::cout << json{{"count", c.value.get_str()}, {"formula", c.formula_tag}}.dump(2)
                              << "\n";
                else std::cout << c.value.get_str() << "  (" << c.formula_tag << ")\n";
                return 0;
            }
            if (*lang_op) {
                Language a = read_language_file(lo_a);
                Language out(a.alphabet_size());
                if (lo_op == "slice") {
                    if (lo_n < 0) throw UsageError("slice needs --n");
                    out = n_slice(a, lo_n);
                } else {
                    if (lo_b.empty()) throw UsageError(lo_op + " needs --b");
                    Language b = read_language_file(lo_b);
                    out = lo_op == "intersect" ? intersect(a, b) : shuffle(a, b, budget);
                }
                emit_language(out, display_alphabet(out.alphabet_size()), "text", lo_out);
                return 0;
            }
            if (*lang_cube) {
                std::vector<int> q;
                for (char c : hc_q) {
                    if (c != '0' && c != '1') throw UsageError("--q must be a 0/1 string");
                    q.push_back(c - '0');
                }
                std::cout << hypercube_prob(hc_n, hc_k, q).get_str() << "\n";
                return 0;
            }
            throw UsageError("lang needs a subcommand");
        }

        if (*cmd_convert) {
            if (cv_emit == "dfa-json") {
                if (cv_family.empty()) throw UsageError("dfa-json needs --family");
                json j = dfa_to_json(build_family_dfa(parse_family(cv_family)));
                if (cv_out.empty()) std::cout << j.dump(2) << "\n";
                else std::ofstream(cv_out) << j.dump(2) << "\n";
                return 0;
            }
            LayeredNFA layered;
            if (!cv_automaton.empty()) {
                json j = read_json_file(cv_automaton);
                if (j.contains("layers")) {
                    layered = layered_from_json(j);
                } else {
                    if (cv_slice < 1) throw UsageError("a DFA input needs --slice n");
                    layered = slice(dfa_from_json(j), cv_slice);
                }
            } else if (!cv_family.empty()) {
                FamilySpec s = parse_family(cv_family);
                int len = cv_slice >= 1
                              ? cv_slice
                              : (s.family == Family::Dyck || s.family == Family::Palindrome ? 2 * s.n : s.n);
                layered = slice(build_family_dfa(s), len);
            } else {
                throw UsageError("convert needs --automaton or --family");
            }
            ConversionResult r = to_expression(layered);
            Alphabet a = display_alphabet(layered.alphabet);
            if (cv_emit == "expr") {
                std::string text = print(r.expr, a);
                if (cv_out.empty()) std::cout << text << "\n";
                else std::ofstream(cv_out) << text << "\n";
                return 0;
            }
            json stats{{"width", r.stats.width},
                       {"length", layered.length()},
                       {"alphabet", r.stats.alphabet},
                       {"expanded_rpn", r.stats.expanded_rpn},
                       {"expanded_leaves", r.stats.expanded_leaves},
                       {"shared_nodes", r.stats.shared_nodes},
                       {"leaf_recurrence_holds", r.stats.recurrence_holds}};
            if (cv_emit == "json") stats["expr"] = print(r.expr, a);
            std::cout << stats.dump(2) << "\n";
            return 0;
        }

        if (*cmd_arith) {
            std::string text = load_expr_text(ar_expr);
            Alphabet a = resolve_alphabet(ar_alpha.empty() && ar_asize == 0 ? "01" : ar_alpha, ar_asize, text);
            ExprPtr e = parse(text, a);
            ArithPtr f = arithmetic_version(e);
            if (ar_emit == "formula") {
                std::cout << arith_text(f) << "\n";
                std::cout << "size " << f->size << "  (rpn " << rpn(e) << ")\n";
            } else {
                ProducedSet ps = produced_set(f, e->degree, budget);
                for (const auto& [vec, coeff] : ps) {
                    for (std::size_t i = 0; i < vec.size(); ++i) std::cout << (i ? " " : "") << vec[i];
                    std::cout << "  x" << coeff.get_str() << "\n";
                }
            }
            return 0;
        }

        if (*cmd_lp) {
            if (*lp_permmax) {
                std::cout << perm_logproduct_max(lpp_n).get_str() << "\n";
                return 0;
            }
            if (*lp_maxsub) {
                Language l = read_language_file(lpm_language);
                MaxLogProduct r = max_logproduct_sublanguage(l, budget);
                std::cout << r.count.get_str() << "\n";
                std::cout << "witness: " << print(r.witness, display_alphabet(l.alphabet_size())) << "\n";
                return 0;
            }
            std::string text = load_expr_text(lpc_expr);
            Alphabet a = resolve_alphabet(lpc_alpha, lpc_asize, text);
            ExprPtr e = parse(text, a);
            if (*lp_check) {
                auto cert = is_log_product(e);
                std::cout << (cert ? "log-product" : "not log-product") << "\n";
                if (cert)
                    for (const SpineStep& s : cert->spine)
                        std::cout << "  spine " << (s.left ? "left" : "right") << " deg " << s.spine_degree
                                  << " | sibling deg " << s.sibling_degree << "\n";
                return cert ? 0 : 1;
            }
            if (*lp_decomp) {
                for (const ExprPtr& b : decompose(e)) std::cout << print(b, a) << "\n";
                return 0;
            }
            if (!lpf_gamma.empty()) {
                mpq_class g(lpf_gamma);
                g.canonicalize();
                GammaFactorization gf = gamma_factorize(e, g);
                for (std::size_t i = 0; i < gf.m(); ++i)
                    std::cout << "P" << i + 1 << " = " << print(gf.prefixes[i], a) << "   S" << i + 1
                              << " = " << print(gf.suffixes[i], a) << "\n";
            } else {
                Factorization f = canonical_factorize(e);
                for (std::size_t i = 0; i < f.factors.size(); ++i)
                    std::cout << "F" << i + 1 << " = " << print(f.factors[i], a) << "\n";
            }
            return 0;
        }

        if (*cmd_env) {
            std::string text = load_expr_text(en_expr);
            Alphabet a = resolve_alphabet(en_alpha, en_asize, text);
            ExprPtr e = parse(text, a);
            EnvelopeDirection dir = en_dir == "lower" ? EnvelopeDirection::Lower : EnvelopeDirection::Higher;
            ExprPtr out;
            if (!en_mu.empty()) out = mu_envelope(e, read_weighting_file(en_mu), dir);
            else out = dir == EnvelopeDirection::Lower ? lower_envelope(e) : higher_envelope(e);
            std::cout << print(out, a) << "\n";
            return 0;
        }

        if (*cmd_bound) {
            FamilySpec s = parse_family(bd_family);
            BoundReport r = bound_report(s, bd_exact);
            json j{{"family", s.text()},
                   {"count", r.count.get_str()},
                   {"dfa_states", r.dfa_states},
                   {"slice_states", r.slice_states},
                   {"upper_rpn", r.upper_rpn},
                   {"upper_source", r.upper_source}};
            if (r.conversion_family_states) j["conversion_family_states"] = *r.conversion_family_states;
            if (r.has_certificate) {
                j["lower_certificate"] = r.certificate_text;
                j["vacuous"] = r.vacuous;
            }
            if (!r.certificate_note.empty()) j["certificate_note"] = r.certificate_note;
            if (r.exact_min) j["exact_min_rpn"] = *r.exact_min;
            if (!r.exact_note.empty()) j["exact_note"] = r.exact_note;
            if (bd_upper) {
                if (s.family == Family::Divisibility && (s.n & (s.n - 1)) == 0)
                    j["upper_expr"] = print(ub_divisibility_expr(s.n, s.p).expr, Alphabet::binary());
                else {
                    int len = s.family == Family::Dyck ? 2 * s.n : s.n;
                    ConversionResult conv = to_expression(slice(detail::bound_family_dfa(s), len));
                    Alphabet a = Alphabet::binary();
                    if (s.family == Family::Parity) a = Alphabet::numeric(s.k);
                    if (s.family == Family::Permutation) a = Alphabet::numeric(s.n);
                    j["upper_expr"] = print(conv.expr, a);
                }
            }
            if (bd_emit == "json") {
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            std::cout << s.text() << ": count " << j["count"].get<std::string>() << ", DFA " << r.dfa_states
                      << " states, slice " << r.slice_states << " states, upper rpn " << r.upper_rpn << " ("
                      << r.upper_source << ")";
            if (r.has_certificate)
                std::cout << ", lower certificate " << r.certificate_text
                          << (r.vacuous ? " (vacuous at this scale)" : "");
            if (r.exact_min) std::cout << ", exact min rpn " << *r.exact_min;
            std::cout << "\n";
            if (!r.certificate_note.empty()) std::cout << "  note: " << r.certificate_note << "\n";
            if (bd_upper && j.contains("upper_expr"))
                std::cout << "  upper expr: " << j["upper_expr"].get<std::string>() << "\n";
            return 0;
        }

        if (*cmd_oracle) {
            if (*or_minrpn) {
                Language l = read_language_file(om_language);
                MinRpnOptions opt;
                opt.max_size = om_cap;
                MinRpnResult r = min_rpn_exact(l, opt);
                if (!r.found) {
                    std::cout << "exceeds cap: " << r.cap_reason << "\n";
                    return 1;
                }
                std::cout << r.value << "\n";
                std::cout << "witness: " << print(r.witness, display_alphabet(l.alphabet_size())) << "\n";
                return 0;
            }
            if (*or_fool) {
                Language l = read_language_file(of_language);
                FoolingResult f = max_fooling_set(l, budget);
                Alphabet a = display_alphabet(l.alphabet_size());
                std::cout << f.size << "  (split at " << f.split << ")\n";
                for (const auto& [u, v] : f.witness)
                    std::cout << "  (" << word_text(u, a) << ", " << word_text(v, a) << ")\n";
                return 0;
            }
            throw UsageError("oracle needs a subcommand");
        }

        if (*cmd_repro) {
            if (rp_table == "table4") return run_repro_table4(rp_nmax);
            return run_repro_table1();
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidFamily& e) {
        std::cerr << "family error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
