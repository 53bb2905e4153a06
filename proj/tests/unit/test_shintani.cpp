#include <catch_amalgamated.hpp>

#include <random>

#include "padic_shintani/shintani.hpp"

using namespace psh;

namespace {

// Hurwitz oracle: sum_{x = a mod m, x > 0} e^{xX} = -sum_n m^{n-1} B_n(a/m) X^{n-1}/n!
// for 0 < a < m
Rational hurwitz_coeff(long a, long m, int j) {
    return -rpow(Rational(m), j) * bernoulli_poly(j + 1, make_rational(a, m)) / Rational(factorial(j + 1));
}

TestFn1 char_fn(const DirichletChar& chi) {
    std::vector<std::tuple<Coeff, Rational, Rational>> t;
    for (long a = 0; a < chi.modulus(); ++a)
        if (!chi.value(a).is_zero()) t.push_back({chi.value(a), Rational(a), Rational(chi.modulus())});
    return TestFn1::from_terms(t);
}

TestFn2 Z2() { return TestFn2::indicator({0, 0}, Lattice2::rect(1, 1)); }

// numerator of l1 l2 l3 * F, all three forms cleared
Series cleared(const ConeSeries& F, const std::vector<Cusp>& cs, int comp = 0) {
    ConeSeries G = F;
    for (const auto& c : cs) G = G.times_linear(c.num, c.den);
    REQUIRE(G.denominators().empty());
    return G.comps[comp].numerator();
}

}  // namespace

TEST_CASE("one-variable cone series: Hurwitz oracle", "[shintani]") {
    auto xi = cone_series_1d(TestFn1::indicator(1, 3), 6);
    CHECK(xi.numerator_coeff(1) == Cyclotomic(make_rational(1, 6)));
    CHECK(xi.numerator_coeff(0) == Cyclotomic(make_rational(-1, 3)));
    for (auto [a, m] : std::vector<std::pair<long, long>>{{1, 3}, {2, 5}, {3, 7}, {1, 2}})
        for (int j = 0; j <= 5; ++j) CHECK(cone_series_1d(TestFn1::indicator(a, m), 7).numerator_coeff(j + 1) == Cyclotomic(hurwitz_coeff(a, m, j)));
    // [Z] with the half-weighted origin: constant 0, linear -1/12
    auto z = cone_series_1d(TestFn1::indicator(0, 1), 6);
    CHECK(z.numerator_coeff(1) == Cyclotomic(0));
    CHECK(z.numerator_coeff(2) == Cyclotomic(make_rational(-1, 12)));
    CHECK(z.numerator_coeff(0) == Cyclotomic(-1));
    // refinement additivity
    auto sum = cone_series_1d(TestFn1::indicator(0, 5), 6);
    for (long b = 1; b < 5; ++b) {
        auto piece = cone_series_1d(TestFn1::indicator(b, 5), 6);
        sum.comps[0] = sum.comps[0] + piece.comps[0];
    }
    CHECK(sum.comps[0].numerator() == z.comps[0].numerator());
}

TEST_CASE("xi_moment against generalized Bernoulli numbers", "[shintani]") {
    for (const char* name : {"quad3", "quad4", "5:4:1", "7:3:1"}) {
        auto chi = DirichletChar::parse(name);
        auto f = char_fn(chi);
        for (int j = 0; j <= 5; ++j) CHECK(xi_moment(f, j) == l_value_at_negative(j + 1, chi));
    }
    // [Z]: zeta(-j) for j >= 1
    for (int j = 1; j <= 6; ++j) CHECK(xi_moment(TestFn1::indicator(0, 1), j) == Cyclotomic(-bernoulli_poly(j + 1, 0) / Rational(j + 1)));
}

TEST_CASE("psi_infty0 on products and refinements", "[shintani]") {
    int D = 6;
    auto f = TestFn2::product(TestFn1::indicator(1, 3), TestFn1::indicator(2, 5));
    auto psi = psi_infty0(f, D);
    for (int i = 0; i + 1 <= D; ++i)
        for (int j = 0; i + j + 2 <= D; ++j)
            CHECK(psi.numerator_coeff(i + 1, j + 1) == Cyclotomic(hurwitz_coeff(1, 3, i) * hurwitz_coeff(2, 5, j)));
    // the origin carries no weight: [Z^2] minus the 2x2 refinement pieces
    auto whole = psi_infty0(Z2(), D).comps[0];
    Laurent parts = psi_infty0(TestFn2::indicator({0, 0}, Lattice2::rect(2, 2)), D).comps[0];
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 0}, {0, 1}, {1, 1}})
        parts = parts + psi_infty0(TestFn2::indicator({Rational(a), Rational(b)}, Lattice2::rect(2, 2)), D).comps[0];
    CHECK(parts.numerator() == whole.numerator());
    // cyclotomic values split into components and recombine
    auto q = TestFn2::product(char_fn(DirichletChar::parse("5:4:1")), TestFn1::indicator(0, 1));
    auto pq = psi_infty0(q, 5);
    CHECK(pq.order == 4);
    CHECK(pq.numerator_coeff(2, 0) == xi_moment(char_fn(DirichletChar::parse("5:4:1")), 1) * Cyclotomic(make_rational(-1, 1)));
}

TEST_CASE("psi_divisor: transport independence and cocycle", "[shintani]") {
    int D = 7;
    auto f = make_f_ell(5, 3);
    auto a = psi_divisor(f, Cusp::make(1, 2), Cusp::make(-1, 3), D);
    // positive rescaling of the columns leaves the symbol unchanged
    Mat2 g{1, -1, 2, 3};
    CHECK(psi_divisor_via(f, g * Mat2{3, 0, 0, 2}, D) == a);
    CHECK(psi_divisor_via(f, g * Mat2{1, 0, 0, 7}, D) == a);
    // f'_l is even, so the opposite cone gives the same symbol
    CHECK(psi_divisor_via(f, g * Mat2{-2, 0, 0, -5}, D) == a);
    // antisymmetry and the three-term relation as rational functions
    std::vector<Cusp> cs{Cusp::infinity(), Cusp::make(0, 1), Cusp::make(2, 3)};
    auto rs = psi_divisor(f, cs[0], cs[1], D), st = psi_divisor(f, cs[1], cs[2], D), tr = psi_divisor(f, cs[2], cs[0], D);
    auto sr = psi_divisor(f, cs[1], cs[0], D);
    CHECK(cleared(rs, {cs[0], cs[1]}) == cleared(sr, {cs[0], cs[1]}) * Rational(-1));
    Series total = cleared(rs, cs) + cleared(st, cs) + cleared(tr, cs);
    CHECK(total.truncated(D).is_zero());
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> d(-5, 5);
    for (int t = 0; t < 6; ++t) {
        std::vector<Cusp> c3;
        while (c3.size() < 3) {
            long n = d(rng), m = d(rng);
            if (n == 0 && m == 0) continue;
            Cusp c = Cusp::make(n, m);
            if (std::find(c3.begin(), c3.end(), c) == c3.end()) c3.push_back(c);
        }
        Series s = cleared(psi_divisor(Z2(), c3[0], c3[1], D), c3) + cleared(psi_divisor(Z2(), c3[1], c3[2], D), c3) +
                   cleared(psi_divisor(Z2(), c3[2], c3[0], D), c3);
        CHECK(s.is_zero());
    }
}

TEST_CASE("pole structure", "[shintani]") {
    int D = 6;
    auto f = make_f_ell(5, 3);
    std::mt19937 rng(17);
    std::uniform_int_distribution<long> d(-12, 12);
    int good_seen = 0, bad_seen = 0;
    for (int t = 0; t < 25; ++t) {
        long a = d(rng), c = d(rng), b = d(rng), e = d(rng);
        if ((a == 0 && c == 0) || (b == 0 && e == 0)) continue;
        Cusp r = Cusp::make(a, c), s = Cusp::make(b, e);
        if (r == s) continue;
        auto rep = pole_report(f, r, s, D);
        CHECK(rep.predicted_forms_clear);
        if (rep.good_r) CHECK(rep.drops_r);
        if (rep.good_s) CHECK(rep.drops_s);
        good_seen += rep.good_r + rep.good_s;
        bad_seen += !rep.good_r + !rep.good_s;
    }
    CHECK(good_seen > 0);
    CHECK(bad_seen > 0);
    // f'_5 is bad at infinity and the pole stays
    auto rep = pole_report(f, Cusp::infinity(), Cusp::make(0, 1), D);
    CHECK_FALSE(rep.good_r);
    CHECK_FALSE(rep.drops_r);
    CHECK(rep.good_s);
    CHECK(rep.drops_s);
}

TEST_CASE("coset moments form a distribution", "[shintani]") {
    auto F = with_p_units(make_f_ell(5, 3));
    long p = 3;
    for (auto [a, b] : std::vector<std::pair<long, long>>{{0, 1}, {2, 2}, {1, 4}}) {
        auto parent = coset_moments(F, a, b, p, 1, 2);
        std::map<std::pair<int, int>, Cyclotomic> acc;
        for (long i = 0; i < p; ++i)
            for (long j = 0; j < p; ++j) {
                long a2 = a + 3 * i, b2 = b + 3 * j;
                auto child = coset_moments(F, a2, b2, p, 2, 2);
                Rational da = a2 - a, db = b2 - b;
                acc[{0, 0}] += child.at({0, 0});
                acc[{1, 0}] += child.at({1, 0}) + Cyclotomic(da) * child.at({0, 0});
                acc[{0, 1}] += child.at({0, 1}) + Cyclotomic(db) * child.at({0, 0});
                acc[{1, 1}] += child.at({1, 1}) + Cyclotomic(da) * child.at({0, 1}) + Cyclotomic(db) * child.at({1, 0}) +
                               Cyclotomic(da * db) * child.at({0, 0});
            }
        for (const auto& [ij, v] : acc) CHECK(v == parent.at(ij));
    }
    CHECK(mu_coset_moment(F, 1, 4, p, 2, 1, 1) == coset_moments(F, 1, 4, p, 2, 2).at({1, 1}));
    CHECK_THROWS_AS(mu_coset_moment(F, 1, 3, p, 2, 0, 0), HypothesisError);
    auto table = moment_table(F, p, 1, 1);
    CHECK(table.size() == 3 * 2 * 3);
}

TEST_CASE("unit Riemann sums", "[shintani]") {
    long p = 5;
    RiemannConfig cfg{p, 2, 6, 8, 6};
    // polynomial integrands are exact: (1 - p^n) zeta(-n) on the units
    for (long n = 1; n <= 5; ++n) {
        auto v = unit_integral(TestFn1::indicator(0, 1), WeightCharacter::integer(n, p, 14), cfg);
        Rational want = (1 - rpow(Rational(p), n)) * (-bernoulli_poly(n + 1, 0) / Rational(n + 1));
        CHECK(agree_to(v, PadicNumber::from_rational(p, want, 14), 8));
    }
    // a bounded measure: the level-N sums stabilize at negative weights
    auto psi = char_fn(DirichletChar::parse("quad3"));
    for (long n : {-1L, -2L, -4L}) {
        auto s = WeightCharacter::integer(n, p, 14);
        auto a = unit_integral(psi, s, {p, 3, 8, 8, 6});
        auto b = unit_integral(psi, s, {p, 4, 8, 8, 6});
        CHECK(difference_valuation(a, b) >= 6);
        // integration by parts on the units, every coset has zero mass
        auto dd = unit_integral(psi, s.shifted(1), {p, 4, 8, 8, 6}, true);
        CHECK(difference_valuation(dd, PadicNumber::from_integer(p, n + 1, 14) * b) >= 6);
    }
}

TEST_CASE("evil moments vanish below the weight", "[shintani]") {
    auto f1 = TestFn1::indicator(0, 1);
    auto f2 = char_fn(DirichletChar::parse("quad3"));
    RiemannConfig cfg{5, 3, 6, 6, 4};
    for (int k : {1, 2, 3})
        for (int m = 0; m < k; ++m) CHECK(evil_moment(f1, f2, k, m, cfg).is_zero());
    // odd psi: y^{-m} d(D_y xi) survives only for odd m
    CHECK_FALSE(evil_moment(f1, f2, 1, 1, cfg).is_zero());
    CHECK(evil_moment(f1, f2, 2, 2, cfg).is_zero());
    auto even = char_fn(DirichletChar::parse("quad5"));
    CHECK_FALSE(evil_moment(f1, even, 0, 0, {7, 3, 6, 6, 4}).is_zero());
}

TEST_CASE("U_p eigen-relation of the symbol moments", "[shintani]") {
    // f'_7 with p = 3: eigenvalue 1
    auto rep = up_eigen_check(make_f_ell(7, 3), 2, Cyclotomic(1), 5, 3, 4);
    REQUIRE(rep.hypotheses_ok);
    CHECK(rep.rows.size() == 4);
    CHECK(rep.pass(3));
    // f'_{1,quad3} is odd: odd k gives the relation, even k only zeros
    auto g = make_f_tau_psi(DirichletChar::trivial(), DirichletChar::parse("quad3"), 5);
    auto r2 = up_eigen_check(g, 1, Cyclotomic(1), 4, 2, 4);
    REQUIRE(r2.hypotheses_ok);
    CHECK(r2.pass(3));
    CHECK(up_eigen_check(g, 0, Cyclotomic(1), 2, 2, 3).degenerate);
    // quartic tau at p = 7 carries eigenvalue tau(7); tau psi is even
    auto tau = DirichletChar::parse("5:4:1");
    auto h = make_f_tau_psi(tau, DirichletChar::parse("quad3"), 7);
    CHECK(tau.value(7) != Cyclotomic(1));
    auto r3 = up_eigen_check(h, 2, tau.value(7), 4, 2, 3);
    CHECK_FALSE(r3.degenerate);
    REQUIRE(r3.hypotheses_ok);
    CHECK(r3.pass(3));
    // [Z^2] is not good at 0
    TestFn2 z2 = Z2();
    z2.pflag = PFlag::full;
    z2.p = 3;
    auto bad = up_eigen_check(z2, 2, Cyclotomic(1), 3, 2, 3);
    CHECK_FALSE(bad.hypotheses_ok);
    CHECK(bad.failure.find("vanishing") != std::string::npos);
}
