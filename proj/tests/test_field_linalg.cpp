#include "flagkit/enumeration.hpp"
#include "flagkit/subspace.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace flagkit;

namespace {

using F2 = PrimeField;

Matrix<PrimeField> mat(const PrimeField& f, std::size_t r, std::size_t c,
                       std::initializer_list<int> vals) {
    std::vector<PrimeField::Element> entries;
    for (int v : vals) entries.push_back(f.from_int(v));
    return Matrix<PrimeField>(f, r, c, std::move(entries));
}

Subspace<PrimeField> sp(const PrimeField& f, std::size_t ambient,
                        std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<PrimeField::Element>> gens;
    for (auto& row : rows) {
        std::vector<PrimeField::Element> v;
        for (int x : row) v.push_back(f.from_int(x));
        gens.push_back(std::move(v));
    }
    return Subspace<PrimeField>::span(f, ambient, gens);
}

}  // namespace

TEST_CASE("prime field arithmetic") {
    PrimeField f5(5);
    CHECK(f5.add(3, 4) == 2);
    CHECK(f5.mul(3, 4) == 2);
    CHECK(f5.inv(3) == 2);
    CHECK(f5.neg(0) == 0);
    for (std::uint32_t a = 1; a < 5; ++a) CHECK(f5.mul(a, f5.inv(a)) == 1);
    CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(101), std::invalid_argument);
    CHECK_NOTHROW(PrimeField(97));
}

TEST_CASE("rational field arithmetic is exact") {
    RationalField q;
    auto third = q.div(q.one(), q.from_int(3));
    auto sum = q.zero();
    for (int i = 0; i < 3; ++i) sum = q.add(sum, third);
    CHECK(sum == q.one());
}

TEST_CASE("rref: invertible case over F_2") {
    PrimeField f(2);
    auto r = rref(mat(f, 2, 2, {1, 1, 0, 1}));
    CHECK(r.mat == Matrix<PrimeField>::identity(f, 2));
    CHECK(r.rank == 2);
}

TEST_CASE("rref: zero matrix stays zero") {
    PrimeField f(3);
    Matrix<PrimeField> z(f, 2, 3);
    auto r = rref(z);
    CHECK(r.mat == z);
    CHECK(r.rank == 0);
}

TEST_CASE("rref: dependent rows over F_3 against hand reduction") {
    PrimeField f(3);
    auto r = rref(mat(f, 2, 2, {1, 2, 2, 4}));
    // hand reduction: second row is twice the first
    CHECK(r.rank == 1);
    CHECK(r.mat.row(0) == mat(f, 1, 2, {1, 2}).row(0));
    // zero row dropped at the Subspace level
    auto s = Subspace<PrimeField>::span(mat(f, 2, 2, {1, 2, 2, 4}));
    CHECK(s.dim() == 1);
}

TEST_CASE("rref over Q with fractional steps") {
    RationalField q;
    std::vector<Rational> entries = {Rational(2), Rational(1), Rational(1), Rational(1)};
    Matrix<RationalField> m(q, 2, 2, entries);
    CHECK(rref(m).mat == Matrix<RationalField>::identity(q, 2));
}

TEST_CASE("span canonicalizes duplicates and empties") {
    PrimeField f(2);
    auto s = sp(f, 3, {{1, 0, 0}, {1, 0, 0}});
    CHECK(s.dim() == 1);
    CHECK(s == sp(f, 3, {{1, 0, 0}}));

    CHECK(Subspace<PrimeField>::span(f, 3, {}).is_zero());
    CHECK(sp(f, 2, {{1, 1}, {0, 1}}).is_full());
}

TEST_CASE("span is canonical: equal spans give identical representations") {
    PrimeField f(3);
    auto a = sp(f, 3, {{1, 2, 0}, {0, 1, 1}});
    auto b = sp(f, 3, {{1, 0, 1}, {2, 1, 1}});  // row ops of the same space
    CHECK(a == b);
    CHECK(a.basis() == b.basis());
}

TEST_CASE("sum and intersect") {
    PrimeField f(2);
    auto a = sp(f, 3, {{1, 0, 0}, {0, 1, 0}});
    auto b = sp(f, 3, {{0, 1, 0}, {0, 0, 1}});
    CHECK(intersect(a, b) == sp(f, 3, {{0, 1, 0}}));
    CHECK(sum(a, b).is_full());
    CHECK(intersect(a, a) == a);
    CHECK(sum(a, a) == a);
}

TEST_CASE("dimension formula over sampled pairs in F_3^4") {
    PrimeField f(3);
    std::mt19937 rng(20240811);
    auto random_subspace = [&](std::size_t d) {
        Matrix<PrimeField> gens(f, d, 4);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                gens.at(r, c) = f.from_index(rng() % 3);
        return Subspace<PrimeField>::span(gens);
    };
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_subspace(2);
        auto b = random_subspace(2);
        CHECK(sum(a, b).dim() + intersect(a, b).dim() == a.dim() + b.dim());
    }
}

TEST_CASE("modular-law fragment, exhaustive over 2-dim pairs in F_2^4") {
    PrimeField f(2);
    auto all = enumerate_subspaces(f, 4, 2);
    REQUIRE(all.size() == 35);
    for (const auto& a : all)
        for (const auto& b : all)
            REQUIRE(sum(a, b).dim() + intersect(a, b).dim() == 4);
}

TEST_CASE("preimage, image, kernel") {
    PrimeField f(2);
    auto id3 = LinearMap<PrimeField>{Matrix<PrimeField>::identity(f, 3)};
    auto s = sp(f, 3, {{1, 0, 0}});
    CHECK(preimage(id3, s) == s);

    auto zero_map = LinearMap<PrimeField>{Matrix<PrimeField>(f, 2, 3)};
    CHECK(preimage(zero_map, sp(f, 2, {{1, 0}})) == Subspace<PrimeField>::full(f, 3));
    CHECK(kernel(zero_map) == Subspace<PrimeField>::full(f, 3));

    // projection F_2^3 -> F_2^2 dropping the third coordinate
    auto proj = LinearMap<PrimeField>{mat(f, 2, 3, {1, 0, 0, 0, 1, 0})};
    CHECK(preimage(proj, sp(f, 2, {{1, 0}})) == sp(f, 3, {{1, 0, 0}, {0, 0, 1}}));
    CHECK(kernel(proj) == sp(f, 3, {{0, 0, 1}}));
    CHECK(image(proj, sp(f, 3, {{1, 1, 0}})) == sp(f, 2, {{1, 1}}));
    CHECK(preimage(proj, image(proj, s)).contains(s));
}

TEST_CASE("preimage respects inclusions") {
    PrimeField f(3);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix<PrimeField> m(f, 3, 4);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 4; ++c) m.at(r, c) = f.from_index(rng() % 3);
        LinearMap<PrimeField> map{m};
        Matrix<PrimeField> gen(f, 2, 3);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 3; ++c) gen.at(r, c) = f.from_index(rng() % 3);
        auto t = Subspace<PrimeField>::span(gen);
        Matrix<PrimeField> sub(f, 1, 3);
        if (t.dim() > 0) sub.set_row(0, t.basis().row(0));
        auto s = Subspace<PrimeField>::span(sub);
        REQUIRE(t.contains(s));
        CHECK(preimage(map, t).contains(preimage(map, s)));
    }
}

TEST_CASE("annihilator") {
    PrimeField f(2);
    CHECK(annihilator(Subspace<PrimeField>::zero(f, 3)) == Subspace<PrimeField>::full(f, 3));
    CHECK(annihilator(Subspace<PrimeField>::full(f, 3)) == Subspace<PrimeField>::zero(f, 3));
    CHECK(annihilator(sp(f, 3, {{1, 0, 0}})) == sp(f, 3, {{0, 1, 0}, {0, 0, 1}}));
}

TEST_CASE("annihilator is an involution, exhaustive over F_2^3") {
    PrimeField f(2);
    for (std::size_t m = 0; m <= 3; ++m)
        for (const auto& s : enumerate_subspaces(f, 3, m)) {
            CHECK(annihilator(s).dim() == 3 - s.dim());
            CHECK(annihilator(annihilator(s)) == s);
        }
}

TEST_CASE("subspace enumeration counts and order") {
    PrimeField f2(2);
    auto lines = enumerate_subspaces(f2, 3, 1);
    REQUIRE(lines.size() == 7);
    // golden order: pivot patterns lexicographic, free entries base-p with the
    // last position fastest
    CHECK(lines[0] == sp(f2, 3, {{1, 0, 0}}));
    CHECK(lines[1] == sp(f2, 3, {{1, 0, 1}}));
    CHECK(lines[2] == sp(f2, 3, {{1, 1, 0}}));
    CHECK(lines[3] == sp(f2, 3, {{1, 1, 1}}));
    CHECK(lines[4] == sp(f2, 3, {{0, 1, 0}}));
    CHECK(lines[5] == sp(f2, 3, {{0, 1, 1}}));
    CHECK(lines[6] == sp(f2, 3, {{0, 0, 1}}));

    auto only_zero = enumerate_subspaces(f2, 3, 0);
    REQUIRE(only_zero.size() == 1);
    CHECK(only_zero[0].is_zero());

    CHECK(enumerate_subspaces(f2, 4, 2).size() == 35);
    CHECK(oracle::q_binomial_recurrence(4, 2, 2) == 35);
}

TEST_CASE("enumeration matches independent counts for n <= 5, q in {2,3}") {
    for (std::uint32_t q : {2u, 3u}) {
        PrimeField f(q);
        for (std::size_t n = 1; n <= 5; ++n) {
            for (std::size_t m = 0; m <= n; ++m) {
                const auto expected = oracle::count_rref_matrices(n, m, q);
                REQUIRE(gaussian_binomial(n, m, q) == expected);
                REQUIRE(oracle::q_binomial_recurrence(n, m, q) == expected);
                if (expected <= 3000) {
                    auto subs = enumerate_subspaces(f, n, m, 4000);
                    REQUIRE(subs.size() == expected);
                    // no duplicates: canonical forms are distinct
                    std::set<std::vector<PrimeField::Element>> seen;
                    for (const auto& s : subs) seen.insert(s.basis().entries());
                    REQUIRE(seen.size() == subs.size());
                }
            }
        }
    }
}

TEST_CASE("brute-force tuple scan agrees on small grassmannians") {
    CHECK(oracle::count_subspaces_bruteforce(3, 1, 2) == 7);
    CHECK(oracle::count_subspaces_bruteforce(4, 2, 2) == 35);
    CHECK(oracle::count_subspaces_bruteforce(4, 1, 3) == 40);
    CHECK(oracle::count_subspaces_bruteforce(5, 2, 2) == 155);
}

TEST_CASE("enumeration budget") {
    PrimeField f(3);
    CHECK_THROWS_AS(enumerate_subspaces(f, 5, 2, 100), BudgetExceeded);
}

TEST_CASE("wedge power") {
    PrimeField f(2);
    auto s1 = sp(f, 3, {{1, 1, 0}});
    CHECK(wedge_power(s1, 1) == s1);

    CHECK(wedge_power(sp(f, 3, {{1, 0, 0}, {0, 1, 0}}), 2) == sp(f, 3, {{1, 0, 0}}));

    auto s = sp(f, 3, {{1, 1, 0}, {0, 0, 1}});
    auto w = wedge_power(s, 2);
    oracle::IntMat m = {{1, 1, 0}, {0, 0, 1}};
    auto minors = oracle::wedge2_minors(m, 2);
    std::vector<std::vector<PrimeField::Element>> expect_gen(1);
    for (auto v : minors) expect_gen[0].push_back(f.from_int(v));
    CHECK(w == Subspace<PrimeField>::span(f, 3, expect_gen));

    CHECK_THROWS_AS(wedge_power(s, 1), std::invalid_argument);
}

TEST_CASE("rational subspaces behave like prime-field ones") {
    RationalField q;
    auto half = Rational(1, 2);
    Matrix<RationalField> gens(q, 2, 3);
    gens.at(0, 0) = half;
    gens.at(0, 1) = Rational(1);
    gens.at(1, 1) = Rational(3);
    gens.at(1, 2) = Rational(1);
    auto s = Subspace<RationalField>::span(gens);
    CHECK(s.dim() == 2);
    CHECK(annihilator(annihilator(s)) == s);
    CHECK(sum(s, s) == s);
}
