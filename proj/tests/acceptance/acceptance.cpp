// One line per acceptance criterion; exit status 0 only when every line passes.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "padic_shintani/hecke.hpp"
#include "padic_shintani/lfunction.hpp"

using namespace psh;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

TestFn2 rect(long m1, long m2) { return TestFn2::indicator({0, 0}, Lattice2::rect(m1, m2)); }

std::string join(const std::vector<long>& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? "," : "") << (xs[i] >= kInfiniteValuation / 2 ? std::string("inf") : std::to_string(xs[i]));
    return s.str();
}

long min_of(const std::vector<long>& xs) {
    long m = kInfiniteValuation;
    for (long x : xs) m = std::min(m, x);
    return m;
}

std::vector<long> small_primes_except(long level, long p) {
    std::vector<long> qs;
    for (long q : {2L, 3L, 5L, 7L, 11L, 13L})
        if (level % q && q != p) qs.push_back(q);
    return qs;
}

// ---------------------------------------------------------------------------

Outcome hecke_suite() {
    int checks = 0, bad = 0;
    auto expect = [&](bool ok) {
        ++checks;
        bad += !ok;
    };
    for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) {
        // q[Z^2]|[q]^{*-1} + [Z^2] = [Z^2]|T_q
        TestFn2 lhs = Coeff(q) * apply_adj_inv(HeckeOp::scalar(q), rect(1, 1)) + rect(1, 1);
        expect(apply_adj_inv(HeckeOp::T(q, 1), rect(1, 1)) == lhs);
        expect(lhs == Coeff(q) * rect(q, q) + rect(1, 1));
    }
    for (long p : {3L, 5L, 7L}) {
        auto U = HeckeOp::U(p);
        expect(apply_adj_inv(U, rect(1, p)) == Coeff(p) * rect(p, p));
        expect(apply_adj_inv(U, rect(1, 1)) == Coeff(p) * rect(p, p) + p_units_model(p));
    }
    for (long ell : {7L, 11L})
        for (long p : {3L, 5L}) {
            auto f = make_f_ell(ell, p);
            auto qs = small_primes_except(ell, p);
            for (const auto& r : verify_eigen(f, eigen_spec_f_ell(f, qs))) expect(r.pass);
            auto u = with_p_units(f);
            for (const auto& r : verify_eigen(u, eigen_spec_f_ell(u, qs))) expect(r.pass);
            expect(apply_adj_inv(HeckeOp::U(p), u) == u);
        }
    for (auto [t, s] : std::vector<std::pair<const char*, const char*>>{{"triv", "quad3"}, {"quad4", "quad3"}})
        for (long p : {5L, 7L}) {
            auto tau = DirichletChar::parse(t), psi = DirichletChar::parse(s);
            auto f = make_f_tau_psi(tau, psi, p);
            long N = f.stabilizer.level;
            std::vector<long> as;
            for (long a = 1; a < 2 * N; ++a)
                if (gcd(a, N) == 1) as.push_back(a);
            auto qs = small_primes_except(N, p);
            for (const auto& r : verify_eigen(f, eigen_spec_f_tau_psi(f, tau, psi, qs, as))) expect(r.pass);
            auto u = with_p_units(f);
            for (const auto& r : verify_eigen(u, eigen_spec_f_tau_psi(u, tau, psi, qs, {}))) expect(r.pass);
            expect(apply_adj_inv(HeckeOp::U(p), u) == tau.value(p) * u);
        }
    return {bad == 0, std::to_string(checks - bad) + "/" + std::to_string(checks) + " exact identities"};
}

Outcome vanishing_suite() {
    int checks = 0, bad = 0;
    auto expect = [&](bool ok) {
        ++checks;
        bad += !ok;
    };
    for (long p : {3L, 5L}) {
        auto f = make_f_ell(11, p);
        expect(vanishing_check(f, 0, 1));
        for (long a = 1; a < p; ++a) expect(vanishing_check(f, a, p));
    }
    for (auto [t, s, p] : std::vector<std::tuple<const char*, const char*, long>>{
             {"triv", "quad3", 5}, {"quad4", "quad3", 5}, {"triv", "quad3", 7}, {"quad4", "quad7", 3}}) {
        auto g = make_f_tau_psi(DirichletChar::parse(t), DirichletChar::parse(s), p);
        for (long a = 1; a < p; ++a) expect(vanishing_check(g, a, p));
    }
    expect(!vanishing_check(rect(1, 1), 0, 1));
    return {bad == 0, std::to_string(checks - bad) + "/" + std::to_string(checks) + " cusp verdicts as predicted ([Z^2] bad at 0)"};
}

TestFn1 random_fn1(std::mt19937& rng) {
    std::uniform_int_distribution<long> mod_d(1, 12), coef(-3, 3);
    long m = mod_d(rng);
    std::uniform_int_distribution<long> off(0, m - 1);
    std::vector<std::tuple<Coeff, Rational, Rational>> t;
    int nterms = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < nterms; ++i) {
        long c = coef(rng);
        if (c == 0) c = 1;
        t.push_back({Coeff(c), Rational(off(rng)), Rational(m)});
    }
    return TestFn1::from_terms(t);
}

Outcome distribution_suite() {
    std::mt19937 rng(20240611);
    int cases = 0, bad = 0;
    // xi_moment is additive over a partition into residue classes mod r
    for (int t = 0; t < 100; ++t) {
        TestFn1 f = random_fn1(rng);
        long r = 2 + static_cast<long>(rng() % 3);
        int j = static_cast<int>(rng() % 9);
        Cyclotomic acc = 0;
        for (long c = 0; c < r; ++c) acc += xi_moment(f * TestFn1::indicator(c, r), j);
        ++cases;
        bad += !(acc == xi_moment(f, j));
    }
    // coset moments at level N are the recentred sums of the level N+1 moments
    for (int t = 0; t < 100; ++t) {
        long p = rng() % 2 ? 3 : 5;
        int N = 1 + static_cast<int>(rng() % 2);
        int deg = static_cast<int>(rng() % (p == 3 ? 9 : 5));
        TestFn2 F = TestFn2::product(random_fn1(rng), random_fn1(rng));
        long pN = ipow(Integer(p), N).get_si();
        long a = static_cast<long>(rng() % pN), b;
        do b = 1 + static_cast<long>(rng() % (pN - 1));
        while (b % p == 0);
        auto parent = coset_moments(F, a, b, p, N, deg);
        std::map<std::pair<int, int>, Cyclotomic> acc;
        for (long u = 0; u < p; ++u)
            for (long v = 0; v < p; ++v) {
                long a2 = a + u * pN, b2 = b + v * pN;
                auto child = coset_moments(F, a2, b2, p, N + 1, deg);
                Rational da = a2 - a, db = b2 - b;
                for (const auto& [ij, _] : parent) {
                    auto [i, j] = ij;
                    for (int s = 0; s <= i; ++s)
                        for (int w = 0; w <= j; ++w) {
                            Rational c = Rational(binomial(i, s)) * Rational(binomial(j, w)) * rpow(da, i - s) * rpow(db, j - w);
                            if (c != 0) acc[ij] += Cyclotomic(c) * child.at({s, w});
                        }
                }
            }
        bool ok = true;
        for (const auto& [ij, v] : parent) ok = ok && acc[ij] == v;
        ++cases;
        bad += !ok;
    }
    return {bad == 0, std::to_string(cases - bad) + "/" + std::to_string(cases) + " randomized cases (seed 20240611)"};
}

Outcome kl_suite() {
    LConfig cfg{5, 8, 3, 3, 6, 9};
    std::vector<long> dvs;
    for (const char* name : {"quad3", "quad4"}) {
        auto chi = DirichletChar::parse(name);
        for (int n = 1; n <= 6; ++n) {
            auto v = kubota_leopoldt(chi, WeightCharacter::integer(n, 5, cfg.working()), cfg);
            Cyclotomic euler = Cyclotomic(1) - chi.value(5) * Cyclotomic(rpow(Rational(5), n - 1));
            Cyclotomic want = -(euler * l_value_at_negative(n, chi));
            PadicNumber w = embed_padic(want, 5, cfg.working());
            dvs.push_back(std::min(difference_valuation(v.value, w), std::min(v.value.precision(), w.precision())));
        }
    }
    return {min_of(dvs) >= 5, "digits of agreement quad3 n=1..6, quad4 n=1..6: " + join(dvs) + " (need 5)"};
}

Outcome two_path_suite() {
    struct Case {
        std::string name;
        long p;
        TestFn2 f;
        Cyclotomic lambda;
    };
    auto tau4 = DirichletChar::parse("quad4");
    std::vector<Case> cs = {{"f_ell(11) p=3", 3, make_f_ell(11, 3), Cyclotomic(1)},
                            {"f_ell(7) p=5", 5, make_f_ell(7, 5), Cyclotomic(1)},
                            {"f(triv,quad3) p=5", 5, make_f_tau_psi(DirichletChar::trivial(), DirichletChar::parse("quad3"), 5), Cyclotomic(1)},
                            {"f(quad4,quad3) p=5", 5, make_f_tau_psi(tau4, DirichletChar::parse("quad3"), 5), tau4.value(5)}};
    bool pass = true;
    std::ostringstream d;
    for (const auto& c : cs) {
        LConfig cfg{c.p, 8, 3, 3, 6, 9};
        const auto& [f1, f2] = *c.f.factored;
        std::vector<long> dvs;
        bool all_zero = true;
        for (int k : {0, 2})
            for (int m = k; m <= k + 6; ++m) {
                auto t = two_path(f1, f2, k, m, c.lambda, cfg);
                dvs.push_back(std::min<long>(t.difference_valuation, cfg.working()));
                all_zero = all_zero && t.restricted.value.is_zero() && t.payoff.value.is_zero();
            }
        long lo = min_of(dvs);
        pass = pass && lo >= 4;
        d << c.name << " min " << lo << (all_zero ? " (both paths identically 0: tau psi odd at even k)" : "") << "; ";
    }
    return {pass, d.str() + "restricted = -(k+1) payoff for k>0, = payoff for k=0 (need 4)"};
}

Outcome theorem_c_ell() {
    LConfig cfg{3, 8, 3, 3, 6, 9};
    long W = cfg.working();
    std::vector<long> printed, derived, creg;
    for (long s : {2L, 4L, 6L}) {
        auto ws = WeightCharacter::integer(s, 3, W);
        auto r = evil_lp(EllCase{11}, 0, ws, cfg);
        printed.push_back(std::min(r.printed_difference_valuation, W));
        derived.push_back(std::min(r.difference_valuation, W));
        // zeta_p(1 +- s) from c = 2 and from c = 7
        for (const auto& t : {ws, ws.negated()}) {
            auto a = zeta_p_regularized(2, t, cfg), b = zeta_p_regularized(7, t, cfg);
            creg.push_back(std::min(difference_valuation(a.lp->value, b.lp->value), a.lp->value.precision()));
        }
    }
    auto z = evil_lp(EllCase{11}, 0, WeightCharacter::integer(0, 3, W), cfg);
    bool zero_ok = z.value.value.is_zero() || z.value.value.valuation() >= z.value.value.precision();
    bool printed_ok = min_of(printed) >= 4, c_ok = min_of(creg) >= 4;
    std::ostringstream d;
    d << "printed (1-l^s) form digits at s=2,4,6: " << join(printed) << (printed_ok ? "" : " [mismatch]")
      << "; derived (1-l^-s) form: " << join(derived) << "; zeta_p c=2 vs c=7: min " << min_of(creg)
      << "; s=0 value " << z.value.value.str() << (zero_ok ? "" : " [not a zero; agrees with the closed-form limit to " + std::to_string(std::min(z.difference_valuation, W)) + " digits]");
    return {printed_ok && c_ok && zero_ok, d.str()};
}

Outcome theorem_c_char() {
    LConfig cfg{5, 8, 3, 3, 6, 9};
    long W = cfg.working();
    auto run = [&](const char* tau, std::vector<long> ss) {
        std::vector<std::string> m;
        CharCase cs{DirichletChar::parse(tau), DirichletChar::parse("quad3")};
        for (long s : ss) m.push_back(evil_lp(cs, 2, WeightCharacter::integer(s, 5, W), cfg).matched);
        return m;
    };
    // psi = quad3 is odd: correct-sign s are odd
    std::vector<long> ss = {1, 3, 5, 7, 9, 11, 13};
    auto spec_case = run("triv", ss);
    std::set<std::string> seen(spec_case.begin(), spec_case.end());
    bool pass = seen.size() == 1 && (*seen.begin() == "proof" || *seen.begin() == "statement") && ss.size() >= 6;
    std::ostringstream d;
    d << "tau=triv: ";
    for (std::size_t i = 0; i < ss.size(); ++i) d << "s=" << ss[i] << ":" << spec_case[i] << " ";
    d << (pass ? "" : "[no single convention: L_p vanishes identically, tau psi odd at even k] ");
    std::vector<long> ss2 = {5, 7, 9, 11, 13, 15};
    auto other = run("quad4", ss2);
    std::set<std::string> seen2(other.begin(), other.end());
    d << "| tau=quad4 s=5..15 odd: " << (seen2.size() == 1 ? *seen2.begin() : std::string("mixed"));
    return {pass, d.str()};
}

Outcome up_suite() {
    struct Case {
        std::string name;
        TestFn2 f;
        Cyclotomic lambda;
        int level;
    };
    auto q4 = DirichletChar::parse("quad4");
    std::vector<Case> cs = {{"f_ell(11) p=3", make_f_ell(11, 3), Cyclotomic(1), 3},
                            {"f_ell(7) p=5", make_f_ell(7, 5), Cyclotomic(1), 2},
                            {"f(quad4,quad7) p=3", make_f_tau_psi(q4, DirichletChar::parse("quad7"), 3), q4.value(3), 3},
                            {"f(quad4,quad3) p=5", make_f_tau_psi(q4, DirichletChar::parse("quad3"), 5), q4.value(5), 2}};
    bool pass = true;
    std::ostringstream d;
    for (const auto& c : cs)
        for (int k : {0, 2}) {
            auto rep = up_eigen_check(c.f, k, c.lambda, 6, c.level, 4);
            std::vector<long> ag;
            for (const auto& r : rep.rows) ag.push_back(r.agreement);
            bool ok = rep.pass(3);
            pass = pass && ok;
            d << c.name << " k=" << k << " min " << (ag.empty() ? -1 : std::min(min_of(ag), 99L)) << (ok ? "" : " FAIL " + rep.failure) << "; ";
        }
    // tau trivial with psi = quad3 is odd, hence degenerate at even k
    auto odd = up_eigen_check(make_f_tau_psi(DirichletChar::trivial(), DirichletChar::parse("quad3"), 5), 2, Cyclotomic(1), 6, 2, 4);
    d << "f(triv,quad3) p=5 k=2 " << (odd.degenerate ? "degenerate (not counted)" : "nondegenerate?");
    return {pass, d.str()};
}

Outcome pole_suite() {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> dist(-15, 15);
    std::vector<TestFn2> fs = {make_f_ell(5, 3), make_f_ell(11, 5),
                               make_f_tau_psi(DirichletChar::parse("quad4"), DirichletChar::parse("quad3"), 5)};
    int done = 0, bad = 0, good = 0;
    while (done < 10) {
        long a = dist(rng), c = dist(rng), b = dist(rng), e = dist(rng);
        if ((a == 0 && c == 0) || (b == 0 && e == 0)) continue;
        Cusp r = Cusp::make(a, c), s = Cusp::make(b, e);
        if (r == s) continue;
        auto rep = pole_report(fs[done % fs.size()], r, s, 6);
        bool ok = rep.predicted_forms_clear && (!rep.good_r || rep.drops_r) && (!rep.good_s || rep.drops_s);
        good += rep.good_r + rep.good_s;
        bad += !ok;
        ++done;
    }
    return {bad == 0, std::to_string(done - bad) + "/10 divisors (seed 7): poles clear by the predicted forms, " +
                          std::to_string(good) + " good cusps dropped their factor"};
}

Outcome low_moment_suite() {
    int zeros = 0, checks = 0, nonzero_above = 0;
    // the weight -k kernel z^k (y + xz)^{-k}: z^m coefficients for m < k vanish and the
    // rest are binom(-k, m-k) x^{m-k} y^{-m}
    for (int k : {2, 4})
        for (auto [x, y] : std::vector<std::pair<Rational, Rational>>{{Rational(3), Rational(2)}, {make_rational(-5, 7), Rational(4)}}) {
            int D = k + 6;
            Series base(1, D);
            base.at(0) = y;
            base.at(1) = x;
            Series inv = base.inverse(), acc(1, D);
            acc.at(k) = 1;
            for (int i = 0; i < k; ++i) acc = acc * inv;
            for (int m = 0; m <= D; ++m) {
                Rational want = m < k ? Rational(0) : binomial_rational(Rational(-k), m - k) * rpow(x, m - k) * rpow(y, -m);
                ++checks;
                zeros += acc.at(m) == want;
            }
        }
    RiemannConfig cfg{5, 3, 6, 8, 4};
    std::vector<std::pair<TestFn1, TestFn1>> pairs;
    for (const auto& f : {make_f_ell(7, 5), make_f_tau_psi(DirichletChar::parse("quad4"), DirichletChar::parse("quad3"), 5)})
        pairs.push_back(*f.factored);
    for (int k : {2, 4})
        for (const auto& [f1, f2] : pairs) {
            for (int m = 0; m < k; ++m) {
                ++checks;
                zeros += evil_moment(f1, f2, k, m, cfg).is_zero();
            }
            for (int m = k; m <= k + 2; ++m) nonzero_above += !evil_moment(f1, f2, k, m, cfg).is_zero();
        }
    return {zeros == checks && nonzero_above > 0,
            std::to_string(zeros) + "/" + std::to_string(checks) + " exact (kernel coefficients and evil_moment for m<k); " +
                std::to_string(nonzero_above) + " nonzero moments at m>=k for contrast"};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Hecke identity suite", hecke_suite},
        {"vanishing hypothesis", vanishing_suite},
        {"distribution relations", distribution_suite},
        {"Kubota-Leopoldt interpolation", kl_suite},
        {"two-path agreement", two_path_suite},
        {"ell case closed form", theorem_c_ell},
        {"character case shift resolution", theorem_c_char},
        {"U_p eigen-property", up_suite},
        {"pole structure", pole_suite},
        {"vanishing of low moments", low_moment_suite},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::ostringstream t;
        t.precision(1);
        t << std::fixed << secs;
        std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[i].first << "] " << o.detail
                  << " (" << t.str() << "s)" << std::endl;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass" << std::endl;
    return failures == 0 ? 0 : 1;
}
