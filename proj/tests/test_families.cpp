#include <catch2/catch.hpp>

#include <rexlen/families.hpp>

#include <random>

using namespace rexlen;

namespace {
const Alphabet BIN = Alphabet::binary();

Word bw(const std::string& s) {
    Word out;
    for (char c : s) out.push_back(c == '0' ? BIT0 : BIT1);
    return out;
}
} // namespace

TEST_CASE("family spec parsing") {
    FamilySpec s = parse_family("binomial:n=8,k=3");
    CHECK(s.family == Family::Binomial);
    CHECK(s.n == 8);
    CHECK(s.k == 3);
    CHECK(s.text() == "binomial:n=8,k=3");

    CHECK(parse_family("dyck:2n=6").n == 3);
    CHECK(parse_family("div:n=8,p=5").p == 5);
    CHECK(parse_family("perm:n=4").n == 4);

    CHECK_THROWS_AS(parse_family("frob:n=2"), InvalidFamily);
    CHECK_THROWS_AS(parse_family("binomial:n=2,k=5"), InvalidFamily);
    CHECK_THROWS_AS(parse_family("div:n=4,p=4"), InvalidFamily);
    CHECK_THROWS_AS(parse_family("div:n=4,p=1"), InvalidFamily);
    CHECK_THROWS_AS(parse_family("dyck:2n=5"), InvalidFamily);
    CHECK_THROWS_AS(parse_family("binomial:n=8"), InvalidFamily);
}

TEST_CASE("generators produce the expected word sets") {
    CHECK(generate(make_family(Family::Binomial, 4, 2)).size() == 6);

    Language div43 = generate(parse_family("div:n=4,p=3"));
    CHECK(div43 == Language(2, {bw("0000"), bw("0011"), bw("0110"), bw("1001"), bw("1100"), bw("1111")}));

    Language par22 = generate(parse_family("parity:n=2,k=2"));
    CHECK(par22 == Language(2, {{1, 1}, {2, 2}}));

    CHECK(generate(parse_family("perm:n=3")).size() == 6);
    CHECK(generate(parse_family("palindrome:2n=4")).size() == 4);
    CHECK(generate(parse_family("xor:n=3")).size() == 4);
    CHECK(generate(parse_family("threshold:n=4,k=3")).size() == 5);
}

TEST_CASE("exact counts") {
    CHECK(count(parse_family("dyck:2n=6")).value == 5);
    CHECK(count(parse_family("div:n=4,p=3")).value == 6);
    CHECK(count(parse_family("parity:n=2,k=2")).value == 2);
    CHECK(count(parse_family("perm:n=5")).value == 120);
    CHECK(count(parse_family("binomial:n=10,k=4")).value == 210);

    // Catalan numbers for n = 1..10
    const long catalan[] = {1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
    for (int n = 1; n <= 10; ++n)
        CHECK(count(make_family(Family::Dyck, n)).value == catalan[n - 1]);
}

TEST_CASE("count matches enumeration at desk scale") {
    std::vector<FamilySpec> specs;
    for (int n = 1; n <= 10; ++n) specs.push_back(make_family(Family::Dyck, n));
    for (int n = 1; n <= 12; ++n)
        for (int p : {3, 5, 7, 9}) specs.push_back(make_family(Family::Divisibility, n, 0, p));
    for (int n = 0; n <= 8; ++n)
        for (int k = 1; k <= 3; ++k) specs.push_back(make_family(Family::Parity, n, k));
    for (int n = 1; n <= 7; ++n) specs.push_back(make_family(Family::Permutation, n));
    for (int n = 1; n <= 10; ++n)
        for (int k = 0; k <= std::min(n, 4); ++k) {
            specs.push_back(make_family(Family::Binomial, n, k));
            specs.push_back(make_family(Family::Threshold, n, k));
        }
    for (const FamilySpec& s : specs) {
        CAPTURE(s.text());
        CHECK(count(s).value == static_cast<long>(generate(s).size()));
    }
}

TEST_CASE("hypercube walk probabilities") {
    CHECK(hypercube_prob(2, 2, {0, 0}) == mpq_class(1, 2));
    CHECK(hypercube_prob(2, 2, {1, 1}) == mpq_class(1, 2));
    CHECK(hypercube_prob(2, 2, {0, 1}) == 0);
    for (int n = 0; n <= 8; n += 2) CHECK(hypercube_prob(n, 1, {0}) == 1);

    // against direct enumeration: k^n * p_q = number of words ending in state q
    for (int k = 2; k <= 3; ++k)
        for (int n = 0; n <= 6; ++n) {
            std::vector<long> ending(1 << k, 0);
            std::vector<int> word(n, 1);
            for (long m = 0; m < static_cast<long>(std::pow(k, n)) ; ++m) {
                long x = m;
                int state = 0;
                for (int i = 0; i < n; ++i) {
                    int a = static_cast<int>(x % k);
                    x /= k;
                    state ^= 1 << a;
                }
                ending[state]++;
            }
            for (int q = 0; q < (1 << k); ++q) {
                std::vector<int> qv(k);
                for (int b = 0; b < k; ++b) qv[b] = (q >> b) & 1;
                mpq_class expect(ending[q]);
                expect /= pow_int(k, n);
                CAPTURE(n, k, q);
                CHECK(hypercube_prob(n, k, qv) == expect);
            }
        }
}

TEST_CASE("dyck words scan correctly") {
    Language d = generate(parse_family("dyck:2n=8"));
    CHECK(d.size() == 14);
    for (const Word& w : d.words()) {
        CHECK(is_dyck_word(w));
        int zeros = 0, ones = 0;
        for (int c : w) (c == BIT0 ? zeros : ones)++;
        CHECK(zeros == ones);
    }
    CHECK_FALSE(is_dyck_word(bw("10")));
    CHECK_FALSE(is_dyck_word(bw("0010")));
}

TEST_CASE("set operations") {
    Language zeros(2, {bw("00")});
    Language ones(2, {bw("11")});
    CHECK(shuffle(zeros, ones) == generate(make_family(Family::Binomial, 4, 2)));

    Language d = generate(parse_family("div:n=4,p=3"));
    CHECK(intersect(d, d) == d);

    Language all(2, {bw("0"), bw("1"), bw("00"), bw("01"), bw("10"), bw("11")});
    CHECK(n_slice(all, 2).size() == 4);

    // shuffle is commutative and associative on sets
    std::mt19937 rng(3);
    auto rnd_lang = [&](int maxlen) {
        std::vector<Word> ws;
        std::uniform_int_distribution<int> cnt(1, 3), len(1, maxlen), bit(1, 2);
        int c = cnt(rng);
        for (int i = 0; i < c; ++i) {
            Word w(len(rng));
            for (auto& x : w) x = bit(rng);
            ws.push_back(std::move(w));
        }
        return Language(2, std::move(ws));
    };
    for (int i = 0; i < 20; ++i) {
        Language a = rnd_lang(3), b = rnd_lang(3), c = rnd_lang(2);
        CHECK(shuffle(a, b) == shuffle(b, a));
        CHECK(shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c)));
    }

    CHECK_THROWS_AS(intersect(Language(2, {}), Language(3, {})), SemanticsError);

    Language long0(2, {Word(6, 1)});
    Language long1(2, {Word(6, 2)});
    CHECK_THROWS_AS(shuffle(long0, long1, 10), BudgetError);

    CHECK_THROWS_AS(hypercube_prob(2, 2, {0}), SemanticsError);
    CHECK_THROWS_AS(hypercube_prob(2, 2, {0, 2}), SemanticsError);
}

TEST_CASE("parity generator includes zero-length edge") {
    Language l = generate(make_family(Family::Parity, 0, 2));
    REQUIRE(l.size() == 1);
    CHECK(l.words()[0].empty());
}
