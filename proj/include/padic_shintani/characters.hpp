#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "padic_shintani/foundation.hpp"
#include "padic_shintani/padics.hpp"

namespace psh {

namespace detail {

inline long euler_phi(long n) {
    long r = n;
    for (long q : prime_factors(n)) r = r / q * (q - 1);
    return r;
}

// n-th cyclotomic polynomial, integer coefficients, low degree first
inline const std::vector<long>& cyclotomic_poly(long n) {
    static std::mutex mu;
    static std::map<long, std::vector<long>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // x^n - 1 divided by Phi_d for proper divisors d
    std::vector<long> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d) continue;
        // compute Phi_d without recursion through the locked cache
        std::vector<long> pd;
        {
            std::vector<long> t(d + 1, 0);
            t[0] = -1;
            t[d] = 1;
            for (long e = 1; e < d; ++e) {
                if (d % e) continue;
                auto f = cache.count(e) ? cache[e] : std::vector<long>{};
                if (f.empty()) throw Error("cyclotomic cache order");
                std::vector<long> q(t.size() - f.size() + 1, 0);
                for (long i = static_cast<long>(t.size()) - 1; i >= static_cast<long>(f.size()) - 1; --i) {
                    long c = t[i];
                    long qi = i - static_cast<long>(f.size()) + 1;
                    q[qi] = c;
                    for (std::size_t j = 0; j < f.size(); ++j) t[qi + j] -= c * f[j];
                }
                t = q;
            }
            pd = t;
            cache[d] = pd;
        }
        std::vector<long> q(num.size() - pd.size() + 1, 0);
        for (long i = static_cast<long>(num.size()) - 1; i >= static_cast<long>(pd.size()) - 1; --i) {
            long c = num[i];
            long qi = i - static_cast<long>(pd.size()) + 1;
            q[qi] = c;
            for (std::size_t j = 0; j < pd.size(); ++j) num[qi + j] -= c * pd[j];
        }
        num = q;
    }
    return cache[n] = num;
}

}  // namespace detail

// Element of Q(zeta_n), stored in the power basis modulo Phi_n.
class Cyclotomic {
public:
    Cyclotomic() : n_(1), c_{Rational(0)} {}
    Cyclotomic(const Rational& r) : n_(1), c_{r} {}  // NOLINT: implicit from rationals
    Cyclotomic(long r) : n_(1), c_{Rational(r)} {}   // NOLINT
    Cyclotomic(int r) : n_(1), c_{Rational(r)} {}    // NOLINT

    static Cyclotomic zeta_power(long n, long k) {
        std::vector<Rational> poly(n, Rational(0));
        poly[mod(k, n)] = 1;
        return Cyclotomic(n, poly);
    }

    long order() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Rational rational_part() const { return c_[0]; }
    Rational to_rational() const {
        if (!is_rational()) throw Error("cyclotomic value is not rational");
        return c_[0];
    }
    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    // the same element viewed in Q(zeta_L), n | L
    Cyclotomic lift(long L) const {
        if (L == n_) return *this;
        if (L % n_) throw Error("cyclotomic lift to a non-multiple order");
        std::vector<Rational> poly(L, Rational(0));
        long step = L / n_;
        for (std::size_t i = 0; i < c_.size(); ++i) poly[i * step] += c_[i];
        return raw(L, std::move(poly));
    }

    Cyclotomic& operator+=(const Cyclotomic& o) {
        long L = std::lcm(n_, o.n_);
        if (L != n_) *this = lift(L);
        Cyclotomic b = o.lift(L);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
        shrink();
        return *this;
    }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this += -o; }
    Cyclotomic& operator*=(const Rational& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }
    Cyclotomic& operator/=(const Cyclotomic& o) {
        if (!o.is_rational()) throw Error("division by a non-rational cyclotomic value");
        return *this *= Rational(1 / o.c_[0]);
    }
    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        if (b.n_ == 1) {
            Cyclotomic r = a;
            return r *= b.c_[0];
        }
        if (a.n_ == 1) {
            Cyclotomic r = b;
            return r *= a.c_[0];
        }
        long L = std::lcm(a.n_, b.n_);
        Cyclotomic x = a.lift(L), y = b.lift(L);
        std::vector<Rational> poly(x.c_.size() + y.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i] == 0) continue;
            for (std::size_t j = 0; j < y.c_.size(); ++j)
                if (y.c_[j] != 0) poly[i + j] += x.c_[i] * y.c_[j];
        }
        return Cyclotomic(L, poly);
    }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        long L = std::lcm(a.n_, b.n_);
        return a.lift(L).c_ == b.lift(L).c_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    std::string str() const {
        if (is_rational()) return to_string(c_[0]);
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += "(" + to_string(c_[i]) + ")";
            if (i) s += "*z" + std::to_string(n_) + "^" + std::to_string(i);
        }
        return s;
    }

    Cyclotomic(long n, std::vector<Rational> poly) {
        *this = raw(n, std::move(poly));
        // canonical order: the smallest order containing the element
        shrink();
    }

private:
    // reduce mod Phi_n without changing the order
    static Cyclotomic raw(long n, std::vector<Rational> poly) {
        const auto& phi = detail::cyclotomic_poly(n);
        std::size_t deg = phi.size() - 1;
        for (std::size_t i = poly.size(); i-- > deg;) {
            Rational top = poly[i];
            if (top == 0) continue;
            for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= top * phi[j];
        }
        poly.resize(deg);
        Cyclotomic r;
        r.n_ = n;
        r.c_ = std::move(poly);
        return r;
    }

    void shrink() {
        if (n_ == 1) return;
        if (is_rational()) {
            Rational r = c_[0];
            n_ = 1;
            c_ = {r};
            return;
        }
        // try proper divisors d of n whose lift reproduces this element
        for (long d = 1; d < n_; ++d) {
            if (n_ % d) continue;
            long step = n_ / d;
            bool ok = true;
            for (std::size_t i = 0; i < c_.size() && ok; ++i)
                if (c_[i] != 0 && i % step) ok = false;
            if (!ok) continue;
            std::vector<Rational> poly(d, Rational(0));
            for (std::size_t i = 0; i < c_.size(); i += step) poly[i / step] = c_[i];
            Cyclotomic cand = raw(d, poly);
            if (cand.lift(n_).c_ == c_) {
                cand.shrink();
                *this = cand;
                return;
            }
        }
    }

    long n_;
    std::vector<Rational> c_;
};

// Dirichlet character mod M with values in mu_n: chi(a) = zeta_n^{e(a)}.
class DirichletChar {
public:
    DirichletChar() : M_(1), n_(1), exps_{0} {}

    // generator images as exponents of zeta_n, one per generator of (Z/M)^x
    // in the order returned by unit_generators(M)
    static DirichletChar from_generators(long M, long n, const std::vector<long>& images) {
        auto gens = unit_generators(M);
        if (images.size() != gens.size())
            throw HypothesisError("character mod " + std::to_string(M) + " needs " + std::to_string(gens.size()) +
                                  " generator images");
        DirichletChar chi;
        chi.M_ = M;
        chi.n_ = n;
        chi.exps_.assign(M, -1);
        // walk the group generated by the generators
        std::vector<std::pair<long, long>> frontier{{1 % M, 0}};
        chi.exps_[1 % M] = 0;
        while (!frontier.empty()) {
            auto [a, e] = frontier.back();
            frontier.pop_back();
            for (std::size_t i = 0; i < gens.size(); ++i) {
                long b = mod(a * gens[i].first, M);
                long f = mod(e + images[i], n);
                if (chi.exps_[b] < 0) {
                    chi.exps_[b] = f;
                    frontier.push_back({b, f});
                } else if (chi.exps_[b] != f) {
                    throw HypothesisError("generator images do not define a character");
                }
            }
        }
        chi.reduce_order();
        return chi;
    }

    static DirichletChar trivial() { return DirichletChar(); }

    // named characters: triv, quadM (M in 3,4,5,7,8,11,12,13), or "M:n:e1,e2,..."
    static DirichletChar parse(const std::string& name);

    // generators of (Z/M)^x with their orders: a primitive root for each odd
    // prime power and -1, 5 for powers of 2, lifted by CRT
    static std::vector<std::pair<long, long>> unit_generators(long M) {
        std::vector<std::pair<long, long>> gens;
        if (M <= 2) return gens;
        long rest = M;
        for (long q : prime_factors(M)) {
            long qe = 1;
            while (rest % q == 0) {
                rest /= q;
                qe *= q;
            }
            long other = M / qe;
            auto crt = [&](long g) {
                // x = g mod qe, x = 1 mod other
                if (other == 1) return mod(g, M);
                long inv = inv_mod(other, qe);
                long x = mod(1 + other * mod((g - 1) * inv, qe), M);
                return x;
            };
            if (q == 2) {
                if (qe == 2) continue;
                gens.push_back({crt(qe - 1), 2});
                if (qe >= 8) gens.push_back({crt(5), qe / 4});
            } else {
                long phi = qe / q * (q - 1);
                long g = 2;
                for (;; ++g) {
                    if (g % q == 0) continue;
                    bool prim = true;
                    for (long r : prime_factors(phi)) {
                        Integer t;
                        mpz_powm_ui(t.get_mpz_t(), Integer(g).get_mpz_t(), phi / r, Integer(qe).get_mpz_t());
                        if (t == 1) prim = false;
                    }
                    if (prim) break;
                }
                gens.push_back({crt(g), phi});
            }
        }
        return gens;
    }

    long modulus() const { return M_; }
    long order() const { return n_; }

    bool is_trivial() const { return n_ == 1; }

    // exponent of zeta_n, or -1 when gcd(a, M) > 1
    long exponent(long a) const { return exps_[mod(a, M_)]; }

    Cyclotomic value(long a) const {
        long e = exponent(a);
        if (e < 0) return Cyclotomic(0);
        return Cyclotomic::zeta_power(n_, e);
    }

    int parity() const {
        long e = exponent(-1);
        return 2 * e == n_ ? -1 : 1;
    }

    long conductor() const {
        for (long d = 1; d <= M_; ++d) {
            if (M_ % d) continue;
            bool ok = true;
            for (long a = 1; a < M_ && ok; ++a)
                if (gcd(a, M_) == 1 && mod(a, d) == 1 % d && exponent(a) != 0) ok = false;
            if (ok) return d;
        }
        return M_;
    }
    bool is_primitive() const { return conductor() == M_; }

    DirichletChar inverse() const {
        DirichletChar c = *this;
        for (auto& e : c.exps_)
            if (e >= 0) e = mod(-e, n_);
        return c;
    }

    std::string name;

private:
    void reduce_order() {
        long g = n_;
        for (long e : exps_)
            if (e >= 0) g = gcd(g, e);
        if (g == 0) g = n_;
        for (auto& e : exps_)
            if (e >= 0) e /= g;
        n_ /= g;
    }

    long M_;
    long n_;
    std::vector<long> exps_;
};

inline DirichletChar DirichletChar::parse(const std::string& s) {
    DirichletChar chi;
    if (s == "triv" || s == "trivial" || s == "1") {
        chi.name = "triv";
        return chi;
    }
    if (s.rfind("quad", 0) == 0) {
        long M = std::stol(s.substr(4));
        // the quadratic character: the unique order-2 character of conductor M
        // among the supported moduli (Kronecker symbol of the discriminant)
        long D;
        switch (M) {
            case 3: D = -3; break;
            case 4: D = -4; break;
            case 5: D = 5; break;
            case 7: D = -7; break;
            case 8: D = 8; break;
            case 11: D = -11; break;
            case 12: D = 12; break;
            case 13: D = 13; break;
            default: throw HypothesisError("unsupported quadratic character: " + s);
        }
        auto kron = [&](long a) -> long {
            // Kronecker symbol (D/a) for a > 0 coprime to D
            long result = 1;
            long aa = a;
            while (aa % 2 == 0) {
                aa /= 2;
                long dm = mod(D, 8);
                if (dm == 3 || dm == 5) result = -result;
            }
            // Jacobi (D/aa) with aa odd
            long x = mod(D, aa), y = aa;
            long j = 1;
            while (x != 0) {
                while (x % 2 == 0) {
                    x /= 2;
                    long r = y % 8;
                    if (r == 3 || r == 5) j = -j;
                }
                std::swap(x, y);
                if (x % 4 == 3 && y % 4 == 3) j = -j;
                x %= y;
            }
            if (y != 1) return 0;
            return result * j;
        };
        chi.M_ = M;
        chi.n_ = 2;
        chi.exps_.assign(M, -1);
        for (long a = 1; a < M; ++a)
            if (gcd(a, M) == 1) chi.exps_[a] = kron(a) == 1 ? 0 : 1;
        chi.name = s;
        return chi;
    }
    // M:n:e1,e2,...
    auto c1 = s.find(':'), c2 = s.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw HypothesisError("cannot parse character: " + s);
    long M = std::stol(s.substr(0, c1)), n = std::stol(s.substr(c1 + 1, c2 - c1 - 1));
    std::vector<long> imgs;
    std::string rest = s.substr(c2 + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        imgs.push_back(std::stol(rest.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    chi = from_generators(M, n, imgs);
    chi.name = s;
    return chi;
}

inline Cyclotomic char_value(const DirichletChar& chi, long a) { return chi.value(a); }

// B_0(x), ..., B_n(x) with B_1(x) = x - 1/2, from
// sum_{k<m} binom(m,k) B_k(x) = m x^{m-1}
inline std::vector<Rational> bernoulli_polys(int n, const Rational& x) {
    std::vector<Rational> B(n + 1);
    B[0] = 1;
    for (int j = 1; j <= n; ++j) {
        int m = j + 1;
        Rational s = 0;
        for (int k = 0; k < j; ++k) s += Rational(binomial(m, k)) * B[k];
        B[j] = (Rational(m) * rpow(x, j) - s) / Rational(m);
    }
    return B;
}

inline Rational bernoulli_poly(int n, const Rational& x) { return bernoulli_polys(n, x)[n]; }

// B_{n,chi} = M^{n-1} sum_{a=1}^{M} chi(a) B_n(a/M)
inline Cyclotomic gen_bernoulli(int n, const DirichletChar& chi) {
    if (n < 1) throw Error("gen_bernoulli needs n >= 1");
    long M = chi.modulus();
    Cyclotomic acc = 0;
    for (long a = 1; a <= M; ++a) {
        Cyclotomic v = chi.value(a);
        if (v.is_zero()) continue;
        acc += v * Cyclotomic(bernoulli_poly(n, Rational(a, M)));
    }
    acc *= rpow(Rational(M), n - 1);
    return acc;
}

// L(chi, 1-n) = -B_{n,chi}/n
inline Cyclotomic l_value_at_negative(int n, const DirichletChar& chi) {
    Cyclotomic b = gen_bernoulli(n, chi);
    b *= Rational(-1, n);
    return b;
}

// smallest positive residue of exact multiplicative order n mod p
inline long primitive_root_residue(long n, long p) {
    for (long a = 1; a < p; ++a) {
        long x = 1;
        long ord = 0;
        do {
            x = x * a % p;
            ++ord;
        } while (x != 1);
        if (ord == n) return a;
    }
    throw HypothesisError("no such root in Q_p");
}

inline PadicNumber embed_padic(const Cyclotomic& v, long p, long N) {
    if (v.is_rational()) return PadicNumber::from_rational(p, v.rational_part(), N);
    long n = v.order();
    if ((p - 1) % n != 0)
        throw HypothesisError("character not p-rational; choose p ≡ 1 mod " + std::to_string(n));
    PadicNumber z = hensel_root_of_unity(n, primitive_root_residue(n, p), p, N);
    PadicNumber acc = PadicNumber::zero(p, N), zp = PadicNumber::from_integer(p, 1, N);
    for (const auto& c : v.coeffs()) {
        if (c != 0) acc = acc + PadicNumber::from_rational(p, c, N) * zp;
        zp = zp * z;
    }
    return acc;
}

}  // namespace psh
