#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "padic_shintani/hecke.hpp"
#include "padic_shintani/padics.hpp"
#include "padic_shintani/series.hpp"
#include "padic_shintani/testfn.hpp"

namespace psh {

namespace detail {

inline unsigned thread_count() {
    if (const char* env = std::getenv("PADIC_SHINTANI_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

// fn(i) for i in [0, n); fn must only touch state owned by index i
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned T = std::min<std::size_t>(thread_count(), n);
    if (T <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    for (unsigned t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += T) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// X / (1 - e^{mX}) to degree D
inline const Series& x_over_one_minus_exp(const Rational& m, int D) {
    static std::mutex mu;
    static std::map<std::pair<Rational, int>, Series> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(m, D);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, invert_one_minus_exp(m, D).numerator()).first;
    return it->second;
}

inline std::vector<Rational> factorials(int n) {
    std::vector<Rational> f(n + 1, Rational(1));
    for (int i = 1; i <= n; ++i) f[i] = f[i - 1] * i;
    return f;
}

// X xi_f(X) for rational f: the half-weighted cone numerator
inline Series cone_numerator(const TestFn1& f, int D) {
    Series E(1, D);
    if (f.is_zero()) return E;
    auto fact = factorials(D);
    for (const auto& [i, v] : f.raw_points()) {
        Rational a = make_rational(i, f.grid_den());
        Rational coef = v.to_rational();
        Rational pw = 1;
        for (int j = 0; j <= D; ++j) {
            E.at(j) += coef * pw / fact[j];
            pw *= a;
        }
    }
    Series P = x_over_one_minus_exp(f.modulus(), D) * E;
    // the boundary point 0 carries weight 1/2
    Coeff c0 = f.value(0);
    if (!c0.is_zero() && D >= 1) P.at(1) -= c0.to_rational() / 2;
    return P;
}

}  // namespace detail

// P1 projective line point num/den; (1, 0) is infinity
struct Cusp {
    long num = 1, den = 0;

    static Cusp infinity() { return {1, 0}; }
    static Cusp make(long num, long den) {
        if (num == 0 && den == 0) throw Error("invalid cusp");
        long g = gcd(num, den);
        num /= g;
        den /= g;
        if (den < 0 || (den == 0 && num < 0)) {
            num = -num;
            den = -den;
        }
        return {num, den};
    }
    bool operator==(const Cusp& o) const { return num == o.num && den == o.den; }
    std::string str() const { return den == 0 ? "oo" : std::to_string(num) + "/" + std::to_string(den); }
};

// sum_i zeta_order^i comps[i], each a rational Laurent series
struct ConeSeries {
    long order = 1;
    std::vector<Laurent> comps;
    std::string provenance;

    int nvars() const { return comps.front().nvars(); }
    int trunc() const { return comps.front().trunc(); }
    const std::vector<LinearForm>& denominators() const { return comps.front().denominators(); }

    // numerator coefficient of X^i Y^j
    Cyclotomic numerator_coeff(int i, int j = 0) const {
        Cyclotomic acc = 0;
        for (std::size_t t = 0; t < comps.size(); ++t) {
            Rational v = comps[t].numerator().get(i, j);
            if (v != 0) acc += Cyclotomic::zeta_power(order, static_cast<long>(t)) * Cyclotomic(v);
        }
        return acc;
    }

    ConeSeries map(const std::function<Laurent(const Laurent&)>& fn) const {
        ConeSeries r{order, {}, provenance};
        for (const auto& c : comps) r.comps.push_back(fn(c));
        return r;
    }
    ConeSeries substitute_gl2(const Mat2& g) const {
        return map([&](const Laurent& l) { return l.substitute_gl2(g); });
    }
    ConeSeries times_linear(const Rational& a, const Rational& b) const {
        return map([&](const Laurent& l) { return l.times_linear(a, b); });
    }
    ConeSeries scaled(const Rational& s) const {
        return map([&](const Laurent& l) {
            Laurent r = l;
            r *= s;
            return r;
        });
    }
    // cancel denominators that divide every component exactly; the common
    // pole set is kept aligned across components
    ConeSeries cancelled() const {
        ConeSeries r = *this;
        std::vector<LinearForm> keep;
        for (const auto& l : denominators()) {
            bool all = true;
            for (const auto& c : r.comps) {
                if (c.trunc() < 1 || !divide_by_linear(c.numerator(), l).second) {
                    all = false;
                    break;
                }
            }
            if (!all) continue;
            for (auto& c : r.comps) {
                auto q = divide_by_linear(c.numerator(), l).first;
                std::vector<LinearForm> den = c.denominators();
                den.erase(std::find(den.begin(), den.end(), l));
                c = Laurent(q, den);
            }
        }
        return r;
    }
    bool operator==(const ConeSeries& o) const { return order == o.order && comps == o.comps; }
};

// one-variable half-weighted cone series sum' f(x) e^{xX} over x >= 0
inline ConeSeries cone_series_1d(const TestFn1& f, int D) {
    auto [order, parts] = f.components();
    ConeSeries r{order, {}, "cone_series_1d"};
    for (const auto& g : parts) r.comps.push_back(Laurent(detail::cone_numerator(g, D), {LinearForm::X()}));
    return r;
}

// j! times the degree-j coefficient of the cone series
inline Cyclotomic xi_moment(const TestFn1& f, int j) {
    if (j < 0) throw Error("negative moment degree");
    auto xi = cone_series_1d(f, j + 1);
    return xi.numerator_coeff(j + 1) * Cyclotomic(Rational(factorial(j)));
}

namespace detail {

// XY Psi{oo,0}(f) for rational f, truncated at total degree D
inline Series psi_numerator(const TestFn2& f, int D) {
    Series out(2, D);
    if (f.is_zero()) return out;
    std::map<long, std::map<long, Coeff>> rows;
    for (const auto& [ij, c] : f.raw_points()) rows[ij.second][ij.first] = c;
    Rational L1 = f.period_x(), L2 = f.period_y();
    for (const auto& [j, row] : rows) {
        Rational beta = make_rational(j, f.grid_y());
        std::vector<std::tuple<Coeff, Rational, Rational>> terms;
        for (const auto& [i, c] : row) terms.push_back({c, make_rational(i, f.grid_x()), L1});
        Series A = cone_numerator(TestFn1::from_terms(terms), D);
        Series B = cone_numerator(TestFn1::indicator(beta, L2), D);
        for (int a = 0; a <= D; ++a) {
            if (A.at(a) == 0) continue;
            for (int b = 0; a + b <= D; ++b)
                if (B.at(b) != 0) out.at(a, b) += A.at(a) * B.at(b);
        }
    }
    // the origin has weight 0, not 1/4
    Coeff h00 = f.value({0, 0});
    if (!h00.is_zero() && D >= 2) out.at(1, 1) -= h00.to_rational() / 4;
    return out;
}

}  // namespace detail

// Psi{oo,0}(f) = (1/(XY)) * numerator
inline ConeSeries psi_infty0(const TestFn2& f, int D) {
    auto [order, parts] = f.components();
    ConeSeries r{order, {}, "psi_infty0"};
    for (const auto& g : parts) r.comps.push_back(Laurent(detail::psi_numerator(g, D), {LinearForm::X(), LinearForm::Y()}));
    return r;
}

// column matrix (r s) for cusps in lowest terms
inline Mat2 cusp_matrix(const Cusp& r, const Cusp& s) {
    return Mat2{Rational(r.num), Rational(s.num), Rational(r.den), Rational(s.den)};
}

// Psi{r,s}(f) transported from {oo,0} through any gamma with gamma oo = r,
// gamma 0 = s; a negative determinant flips the sign
inline ConeSeries psi_divisor_via(const TestFn2& f, const Mat2& g, int D) {
    Rational det = g.det();
    if (det == 0) throw Error("divisor endpoints coincide");
    ConeSeries r = psi_infty0(act_gl2(f, g), D).substitute_gl2(g);
    if (det < 0) r = r.scaled(-1);
    r.provenance = "psi_divisor";
    return r;
}

inline ConeSeries psi_divisor(const TestFn2& f, const Cusp& r, const Cusp& s, int D) {
    if (r == s) throw Error("divisor endpoints coincide");
    return psi_divisor_via(f, cusp_matrix(r, s), D);
}

struct PoleReport {
    bool predicted_forms_clear = false;  // multiplying by both forms leaves no denominator
    bool good_r = false, good_s = false;
    bool drops_r = false, drops_s = false;  // the factor divides the numerator
};

inline PoleReport pole_report(const TestFn2& f, const Cusp& r, const Cusp& s, int D) {
    PoleReport rep;
    ConeSeries psi = psi_divisor(f, r, s, D);
    ConeSeries cleared = psi.times_linear(r.num, r.den).times_linear(s.num, s.den);
    rep.predicted_forms_clear = cleared.denominators().empty();
    rep.good_r = vanishing_check(f, r.num, r.den);
    rep.good_s = vanishing_check(f, s.num, s.den);
    auto divides = [&](const Cusp& c) {
        auto [l, sc] = LinearForm::make(c.num, c.den);
        for (const auto& comp : psi.comps)
            if (!divide_by_linear(comp.numerator(), l).second) return false;
        return true;
    };
    rep.drops_r = divides(r);
    rep.drops_s = divides(s);
    return rep;
}

// indicator of the coset (a + p^N Z) x (b + p^N Z)
inline TestFn2 coset_indicator(long a, long b, long pN) {
    return TestFn2::indicator({Rational(mod(a, pN)), Rational(mod(b, pN))}, Lattice2::rect(pN, pN));
}

// raw moments i! j! [X^i Y^j] of XY Psi{oo,0}(f) for total degree <= deg
inline std::map<std::pair<int, int>, Cyclotomic> raw_moments(const TestFn2& f, int deg) {
    auto psi = psi_infty0(f, deg);
    auto fact = detail::factorials(deg);
    std::map<std::pair<int, int>, Cyclotomic> out;
    for (int d = 0; d <= deg; ++d)
        for (int i = 0; i <= d; ++i) {
            int j = d - i;
            out[{i, j}] = psi.numerator_coeff(i, j) * Cyclotomic(fact[i] * fact[j]);
        }
    return out;
}

// int over (a + p^N Z_p) x (b + p^N Z_p) of (x - a)^i (y - b)^j dmu, from the
// raw moments of the product with the coset indicator
inline std::map<std::pair<int, int>, Cyclotomic> coset_moments(const TestFn2& F, long a, long b, long p, int N, int deg) {
    if (gcd(b, p) != 1) throw HypothesisError("coset moment needs a unit y-residue");
    long pN = ipow(Integer(p), N).get_si();
    auto raw = raw_moments(F * coset_indicator(a, b, pN), deg);
    std::map<std::pair<int, int>, Cyclotomic> out;
    for (int d = 0; d <= deg; ++d)
        for (int i = 0; i <= d; ++i) {
            int j = d - i;
            Rational acc_r = 0;
            Cyclotomic acc = 0;
            for (int s = 0; s <= i; ++s)
                for (int t = 0; t <= j; ++t) {
                    Rational w = Rational(binomial(i, s) * binomial(j, t)) * rpow(Rational(-a), i - s) * rpow(Rational(-b), j - t);
                    const auto& m = raw.at({s, t});
                    if (m.is_rational()) acc_r += w * m.rational_part();
                    else acc += m * Cyclotomic(w);
                }
            out[{i, j}] = acc + Cyclotomic(acc_r);
        }
    return out;
}

inline Cyclotomic mu_coset_moment(const TestFn2& F, long a, long b, long p, int N, int i, int j) {
    return coset_moments(F, a, b, p, N, i + j).at({i, j});
}

struct MomentEntry {
    long a, b;
    int N, i, j;
    Cyclotomic value;
};

// all unit-coset moments of F at level N with i + j <= deg
inline std::vector<MomentEntry> moment_table(const TestFn2& F, long p, int N, int deg) {
    long pN = ipow(Integer(p), N).get_si();
    std::vector<std::pair<long, long>> cells;
    for (long a = 0; a < pN; ++a)
        for (long b = 0; b < pN; ++b)
            if (b % p) cells.push_back({a, b});
    std::vector<std::map<std::pair<int, int>, Cyclotomic>> vals(cells.size());
    detail::parallel_for(cells.size(), [&](std::size_t t) { vals[t] = coset_moments(F, cells[t].first, cells[t].second, p, N, deg); });
    std::vector<MomentEntry> out;
    for (std::size_t t = 0; t < cells.size(); ++t)
        for (const auto& [ij, v] : vals[t]) out.push_back({cells[t].first, cells[t].second, N, ij.first, ij.second, v});
    return out;
}

struct RiemannConfig {
    long p = 3;
    int level = 4;     // N: cosets mod p^N
    int taylor = 6;    // d: Taylor degree on each coset
    long prec = 8;     // target p-adic precision
    long guard = 6;    // extra working digits
};

// int_{Z_p^x} z^s dxi_f by Riemann sums of centred coset moments; with
// derivative set, the measure is X xi_f (the D_z action) instead of xi_f
inline PadicNumber unit_integral(const TestFn1& f, const WeightCharacter& s, const RiemannConfig& cfg, bool derivative = false) {
    long p = cfg.p, W = cfg.prec + cfg.guard;
    long pN = ipow(Integer(p), cfg.level).get_si();
    int d = cfg.taylor;
    auto [order, parts] = f.components();
    std::vector<PadicNumber> zeta_pows;
    for (std::size_t t = 0; t < parts.size(); ++t) zeta_pows.push_back(embed_padic(Cyclotomic::zeta_power(order, static_cast<long>(t)), p, W));
    const WeightCharacter& sw = s;
    std::vector<PadicNumber> bw;
    for (int t = 0; t <= d; ++t) bw.push_back(binom_weight(sw, static_cast<unsigned long>(t)));
    auto fact = detail::factorials(d + 1);
    std::vector<long> units;
    for (long b = 1; b < pN; ++b)
        if (b % p) units.push_back(b);
    std::vector<PadicNumber> partial(units.size(), PadicNumber::zero(p, W));
    detail::parallel_for(units.size(), [&](std::size_t u) {
        long b = units[u];
        PadicNumber acc = PadicNumber::zero(p, W);
        PadicNumber zb = char_eval(sw, b, W);
        PadicNumber binv = PadicNumber::from_integer(p, b, W).inverse();
        TestFn1 cos = TestFn1::indicator(b, pN);
        for (std::size_t t = 0; t < parts.size(); ++t) {
            TestFn1 g = parts[t] * cos;
            if (g.is_zero()) continue;
            Series P = detail::cone_numerator(g, d + 1);
            // recentre the regular part only; the residue -haar/X is not a moment
            if (!derivative) P.at(0) = 0;
            P = P * exp_series({Rational(-b)}, d + 1);
            PadicNumber sum = PadicNumber::zero(p, W);
            PadicNumber bpow = PadicNumber::from_integer(p, 1, W);
            for (int j = 0; j <= d; ++j) {
                // centred moment of (z - b)^j
                Rational m = fact[j] * (derivative ? P.at(j) : P.at(j + 1));
                if (m != 0) sum = sum + bw[j] * bpow * PadicNumber::from_rational(p, m, W);
                bpow = bpow * binv;
            }
            acc = acc + zeta_pows[t] * sum;
        }
        partial[u] = zb * acc;
    });
    PadicNumber total = PadicNumber::zero(p, W);
    for (const auto& x : partial) total = total + x;
    return total;
}

struct EvilConfig {
    RiemannConfig riemann;
};

// weight -k moment m of the symbol at {oo,0} for f' = f1 x f2 on Z_p x Z_p^x.
// k > 0: binom(-k, m-k) * int x^{m-k} d(D_x xi_1) * int y^{-m} d(D_y xi_2);
// k = 0: the limit form binom(-1, m) * int x^m d(D_x xi_1) * int y^{-m-1} dxi_2.
inline PadicNumber evil_moment(const TestFn1& f1, const TestFn1& f2, int k, int m, const RiemannConfig& cfg) {
    long p = cfg.p, W = cfg.prec + cfg.guard;
    if (k < 0) throw Error("weight must be non-negative");
    if (m < k) return PadicNumber::zero(p, W);
    int j = m - k;
    // int x^j d(X xi_1) = j! [X^j](X xi_1); the j = 0 term is the residue -haar(f1)
    auto xi1 = cone_series_1d(f1, j + 1);
    Cyclotomic A = xi1.numerator_coeff(j) * Cyclotomic(Rational(factorial(j)));
    PadicNumber Ap = embed_padic(A, p, W);
    if (k > 0) {
        PadicNumber B = unit_integral(f2, WeightCharacter::integer(-m, p, W), cfg, true);
        PadicNumber c = PadicNumber::from_rational(p, binomial_rational(Rational(-k), j), W);
        return c * Ap * B;
    }
    PadicNumber B = unit_integral(f2, WeightCharacter::integer(-m - 1, p, W), cfg, false);
    PadicNumber c = PadicNumber::from_rational(p, binomial_rational(Rational(-1), m), W);
    return c * Ap * B;
}

struct UpRow {
    int m;
    Cyclotomic lhs, rhs;
    long agreement;  // v_p(lhs - rhs) - v_p(rhs); kInfiniteValuation when equal
};

struct UpReport {
    bool hypotheses_ok = false;
    bool degenerate = false;  // every right-hand side is zero: the weight has the wrong parity
    std::string failure;
    std::vector<UpRow> rows;
    bool pass(long digits) const {
        if (!hypotheses_ok || degenerate) return false;
        for (const auto& r : rows)
            if (r.agreement < digits) return false;
        return !rows.empty();
    }
};

namespace detail {

// min v_p over power-basis coordinates; p is unramified in Q(zeta_n) here, so
// this is the valuation of the ideal generated by x at p
inline long cyclo_valuation(const Cyclotomic& x, long p) {
    long v = kInfiniteValuation;
    for (const auto& c : x.coeffs())
        if (c != 0) v = std::min(v, valuation(c, p));
    return v;
}

// M(n) = int_{Z_p x Z_p^x} x^n y^{-k-1-n} dmu' for mu' = X Psi{oo, a/c}(F),
// n = 0..nmax, by exact Riemann sums over y-cosets mod p^N
inline std::vector<Cyclotomic> divisor_moments(const TestFn2& F, long a, long c, int k, int nmax, long p, int N, int d) {
    int D = nmax + d + 2;
    long pN = ipow(Integer(p), N).get_si();
    Mat2 g{1, Rational(a), 0, Rational(c)};
    auto fact = factorials(D);
    std::vector<long> units;
    for (long b = 1; b < pN; ++b)
        if (b % p) units.push_back(b);
    std::vector<std::vector<Cyclotomic>> part(units.size(), std::vector<Cyclotomic>(nmax + 1));
    parallel_for(units.size(), [&](std::size_t u) {
        long b = units[u];
        TestFn2 G = F * TestFn2::indicator({0, Rational(b)}, Lattice2::rect(1, pN));
        ConeSeries psi = psi_divisor_via(G, g, D);
        // the a/c pole cancels for a good cusp; what is left is (1/X) mu'
        auto [l, sc] = LinearForm::make(a, c);
        for (std::size_t t = 0; t < psi.comps.size(); ++t) {
            auto [Q, exact] = divide_by_linear(psi.comps[t].numerator(), l);
            if (!exact) throw HypothesisError("pole at cusp " + std::to_string(a) + "/" + std::to_string(c) + " does not cancel");
            Cyclotomic z = Cyclotomic::zeta_power(psi.order, static_cast<long>(t));
            for (int n = 0; n <= nmax; ++n) {
                long e = k + 1 + n;
                Rational acc = 0;
                Rational B(b);
                for (int t2 = 0; t2 <= d; ++t2) {
                    // centred moment int x^n (y - b)^t2
                    Rational cen = 0;
                    for (int s = 0; s <= t2; ++s) {
                        if (n + s > Q.trunc()) continue;
                        Rational raw = fact[n] * fact[s] * Q.get(n, s);
                        cen += Rational(binomial(t2, s)) * rpow(-B, t2 - s) * raw;
                    }
                    acc += binomial_rational(Rational(-e), t2) * rpow(B, -e - t2) * cen;
                }
                if (acc != 0) part[u][n] += z * Cyclotomic(acc);
            }
        }
    });
    std::vector<Cyclotomic> M(nmax + 1);
    for (const auto& pu : part)
        for (int n = 0; n <= nmax; ++n) M[n] += pu[n];
    return M;
}

}  // namespace detail

// compares sum_a (weight -k moments at {oo, a/p} moved by (1 a; 0 p)) with
// p^{k+1} lambda times the moments at {oo, 0}, for m = k..mmax
inline UpReport up_eigen_check(const TestFn2& full_model, int k, const Cyclotomic& lambda, int mmax, int N, int d) {
    UpReport rep;
    long p = full_model.p;
    if (full_model.pflag != PFlag::full) throw Error("expected a model filled in with [Z_p^2]");
    // H1: good at 0 and at a/p
    if (!vanishing_check(full_model, 0, 1)) {
        rep.failure = "vanishing hypothesis fails at cusp 0";
        return rep;
    }
    for (long a = 1; a < p; ++a)
        if (!vanishing_check(full_model, a, p)) {
            rep.failure = "vanishing hypothesis fails at cusp " + std::to_string(a) + "/" + std::to_string(p);
            return rep;
        }
    // H2: the part away from p is a beta_i eigenvector with eigenvalue lambda
    TestFn2 U = p_units_model(p);
    TestFn2 F = with_p_units(full_model);
    for (long i = 1; i <= p; ++i) {
        auto op = HeckeOp::beta_op(p, i);
        if (apply_adj_inv(op, F) != lambda * (full_model * apply_adj_inv(op, U))) {
            rep.failure = "beta_" + std::to_string(i) + " eigen hypothesis fails";
            return rep;
        }
    }
    rep.hypotheses_ok = true;
    // an even or odd f whose parity matches (-1)^{k+1} kills every moment
    TestFn2 neg = act_gl2(full_model, Mat2::scalar(-1));
    int eps = neg == full_model ? 1 : (neg == Coeff(-1) * full_model ? -1 : 0);
    rep.degenerate = eps != 0 && eps == ((k + 1) % 2 == 0 ? 1 : -1);
    int nmax = mmax - k;
    std::vector<std::vector<Cyclotomic>> Ma;
    for (long a = 0; a < p; ++a) Ma.push_back(detail::divisor_moments(F, a, p, k, nmax, p, N, d));
    auto M0 = detail::divisor_moments(F, 0, 1, k, nmax, p, N, d);
    std::vector<std::pair<Cyclotomic, Cyclotomic>> sides;
    for (int m = k; m <= mmax; ++m) {
        Cyclotomic L = 0;
        for (long a = 0; a < p; ++a)
            for (int j = k; j <= m; ++j) {
                Rational w = Rational(binomial(m, j)) * rpow(Rational(a), m - j) * rpow(Rational(p), j) * binomial_rational(Rational(-k - 1), j - k);
                if (w != 0) L += Ma[a][j - k] * Cyclotomic(w);
            }
        Cyclotomic R = lambda * M0[m - k] * Cyclotomic(rpow(Rational(p), k + 1) * binomial_rational(Rational(-k - 1), m - k));
        sides.push_back({L, R});
    }
    // digits are counted relative to the size of the nonzero right-hand sides;
    // rows whose right side vanishes exactly use the same scale
    long scale = kInfiniteValuation;
    for (const auto& [L, R] : sides) scale = std::min(scale, detail::cyclo_valuation(R, p));
    if (scale == kInfiniteValuation) scale = 0;
    for (std::size_t t = 0; t < sides.size(); ++t) {
        const auto& [L, R] = sides[t];
        long vd = detail::cyclo_valuation(L - R, p);
        long vr = detail::cyclo_valuation(R, p);
        long agree = vd == kInfiniteValuation ? kInfiniteValuation : vd - (vr == kInfiniteValuation ? scale : vr);
        rep.rows.push_back({k + static_cast<int>(t), L, R, agree});
    }
    return rep;
}

}  // namespace psh
