#pragma once

#include <optional>
#include <string>

#include "padic_shintani/foundation.hpp"

namespace psh {

// p-adic number p^v * u with u a unit known modulo p^(N - v); N is the
// absolute precision.  A value that is 0 modulo p^N is stored with u = 0.
class PadicNumber {
public:
    PadicNumber() = default;

    static PadicNumber zero(long p, long N) {
        check_prime(p);
        PadicNumber x;
        x.p_ = p;
        x.N_ = N;
        x.v_ = N;
        x.u_ = 0;
        return x;
    }

    static PadicNumber from_rational(long p, const Rational& r, long N) {
        check_prime(p);
        if (r == 0) return zero(p, N);
        long v = psh::valuation(r, p);
        if (v >= N) return zero(p, N);
        PadicNumber x;
        x.p_ = p;
        x.N_ = N;
        x.v_ = v;
        Rational unit = r / rpow(Rational(p), v);
        Integer m = x.rel_modulus();
        Integer den_inv;
        Integer den = unit.get_den();
        mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
        x.u_ = mod(Integer(unit.get_num() * den_inv), m);
        return x;
    }
    static PadicNumber from_integer(long p, const Integer& n, long N) { return from_rational(p, Rational(n), N); }

    long prime() const { return p_; }
    long precision() const { return N_; }
    long valuation() const { return v_; }
    long relative_precision() const { return N_ - v_; }
    bool is_zero() const { return u_ == 0; }
    const Integer& unit_part() const { return u_; }

    // representative of the value as an integer mod p^N (needs v >= 0)
    Integer residue() const {
        if (is_zero()) return 0;
        if (v_ < 0) throw Error("residue of a non-integral p-adic number");
        Integer m = ipow(Integer(p_), static_cast<unsigned long>(N_));
        return mod(Integer(u_ * ipow(Integer(p_), static_cast<unsigned long>(v_))), m);
    }

    Rational to_rational() const {
        if (is_zero()) return 0;
        return Rational(u_) * rpow(Rational(p_), v_);
    }

    PadicNumber with_precision(long N) const {
        if (N >= N_) return *this;
        if (is_zero() || v_ >= N) return zero(p_, N);
        PadicNumber x = *this;
        x.N_ = N;
        x.u_ = mod(u_, x.rel_modulus());
        return x;
    }

    PadicNumber operator-() const {
        PadicNumber x = *this;
        if (!is_zero()) x.u_ = mod(Integer(-u_), rel_modulus());
        return x;
    }

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
        a.check_same(b);
        long N = std::min(a.N_, b.N_);
        if (a.is_zero()) return b.with_precision(N);
        if (b.is_zero()) return a.with_precision(N);
        long vm = std::min(a.v_, b.v_);
        Integer P(a.p_);
        Integer s = a.u_ * ipow(P, a.v_ - vm) + b.u_ * ipow(P, b.v_ - vm);
        return normalized(a.p_, vm, s, N);
    }
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
        a.check_same(b);
        if (a.is_zero() || b.is_zero()) {
            // 0 * x is known to precision N_zero + v(x)
            long N;
            if (a.is_zero() && b.is_zero()) N = a.N_ + b.N_;
            else if (a.is_zero()) N = a.N_ + b.v_;
            else N = b.N_ + a.v_;
            return zero(a.p_, N);
        }
        long v = a.v_ + b.v_;
        long r = std::min(a.relative_precision(), b.relative_precision());
        return normalized(a.p_, v, a.u_ * b.u_, v + r);
    }

    PadicNumber inverse() const {
        if (is_zero()) throw Error("division by an element indistinguishable from zero");
        PadicNumber x;
        x.p_ = p_;
        x.v_ = -v_;
        x.N_ = x.v_ + relative_precision();
        Integer inv;
        Integer m = rel_modulus();
        mpz_invert(inv.get_mpz_t(), u_.get_mpz_t(), m.get_mpz_t());
        x.u_ = inv;
        return x;
    }
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

    PadicNumber pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        PadicNumber r = from_integer(p_, 1, std::max(relative_precision(), 1L));
        PadicNumber b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    // true when a and b agree modulo p^n
    friend bool agree_to(const PadicNumber& a, const PadicNumber& b, long n) {
        PadicNumber d = a - b;
        return d.is_zero() ? d.precision() >= n : d.valuation() >= n;
    }
    // valuation of a-b, capped at the known precision
    friend long difference_valuation(const PadicNumber& a, const PadicNumber& b) {
        PadicNumber d = a - b;
        return d.is_zero() ? d.precision() : d.valuation();
    }

    // base-p digits from p^v up to p^(N-1)
    std::vector<long> digits() const {
        std::vector<long> out;
        if (is_zero()) return out;
        Integer t = u_;
        for (long i = v_; i < N_; ++i) {
            Integer q, rem;
            mpz_fdiv_qr_ui(q.get_mpz_t(), rem.get_mpz_t(), t.get_mpz_t(), p_);
            out.push_back(rem.get_si());
            t = q;
        }
        return out;
    }

    // e.g. "3 + 2*5 + 4*5^2 + O(5^4)"
    std::string str() const {
        std::string s;
        auto ds = digits();
        std::string P = std::to_string(p_);
        for (std::size_t k = 0; k < ds.size(); ++k) {
            if (ds[k] == 0) continue;
            long e = v_ + static_cast<long>(k);
            std::string term = std::to_string(ds[k]);
            if (e != 0) {
                std::string pw = e == 1 ? P : P + "^" + std::to_string(e);
                if (e < 0) pw = P + "^(" + std::to_string(e) + ")";
                term = ds[k] == 1 ? pw : term + "*" + pw;
            }
            s += (s.empty() ? "" : " + ") + term;
        }
        if (s.empty()) s = "0";
        return s + " + O(" + P + "^" + std::to_string(N_) + ")";
    }

private:
    static void check_prime(long p) {
        if (p <= 2 || !is_prime(p)) throw HypothesisError("p must be an odd prime");
    }
    void check_same(const PadicNumber& o) const {
        if (p_ != o.p_) throw Error("p-adic prime mismatch");
    }
    Integer rel_modulus() const {
        return ipow(Integer(p_), static_cast<unsigned long>(std::max(0L, N_ - v_)));
    }
    static PadicNumber normalized(long p, long v, Integer s, long N) {
        if (v >= N) return zero(p, N);
        Integer m = ipow(Integer(p), static_cast<unsigned long>(N - v));
        s = mod(s, m);
        if (s == 0) return zero(p, N);
        while (mpz_divisible_ui_p(s.get_mpz_t(), p)) {
            mpz_divexact_ui(s.get_mpz_t(), s.get_mpz_t(), p);
            ++v;
        }
        PadicNumber x;
        x.p_ = p;
        x.N_ = N;
        x.v_ = v;
        x.u_ = mod(s, x.rel_modulus());
        return x;
    }

    long p_ = 3;
    long N_ = 0;
    long v_ = 0;
    Integer u_ = 0;
};

inline PadicNumber teichmuller(long a, long p, long N) {
    if (mod(a, p) == 0) throw Error("teichmuller: argument divisible by p");
    Integer m = ipow(Integer(p), static_cast<unsigned long>(N));
    Integer x = mod(Integer(a), m);
    for (;;) {
        Integer y;
        mpz_powm_ui(y.get_mpz_t(), x.get_mpz_t(), p, m.get_mpz_t());
        if (y == x) break;
        x = y;
    }
    return PadicNumber::from_integer(p, x, N);
}

// Teichmuller lift of a p-adic unit
inline PadicNumber teichmuller(const PadicNumber& z) {
    if (z.valuation() != 0 || z.is_zero()) throw Error("teichmuller: argument is not a unit");
    long p = z.prime();
    return teichmuller(mod(z.residue(), Integer(p)).get_si(), p, z.precision());
}

inline PadicNumber padic_log(const PadicNumber& u) {
    long p = u.prime(), N = u.precision();
    PadicNumber x = u - PadicNumber::from_integer(p, 1, N);
    if (u.valuation() != 0 || x.valuation() < 1) throw Error("outside convergence domain");
    if (x.is_zero()) return PadicNumber::zero(p, N);
    // terms x^n/n have valuation >= n - v_p(n); stop once that reaches N
    auto logp = [p](long n) {
        long e = 0;
        for (long t = n; t >= p; t /= p) ++e;
        return e;
    };
    long nmax = 1;
    while (nmax - logp(nmax) < N + 1) ++nmax;
    long guard = logp(nmax);
    Integer P(p);
    Integer W = ipow(P, static_cast<unsigned long>(N + guard));
    Integer xi = x.residue();
    Integer xp = 1, acc = 0;
    for (long n = 1; n <= nmax; ++n) {
        xp = mod(Integer(xp * xi), W);
        long vn = valuation(Integer(n), p);
        Integer q;
        mpz_divexact(q.get_mpz_t(), xp.get_mpz_t(), ipow(P, vn).get_mpz_t());
        long nu = n;
        for (long i = 0; i < vn; ++i) nu /= p;
        Integer inv;
        Integer Wq = ipow(P, static_cast<unsigned long>(N));
        mpz_invert(inv.get_mpz_t(), Integer(nu).get_mpz_t(), Wq.get_mpz_t());
        Integer term = mod(Integer(q * inv), Wq);
        if (n % 2 == 1) acc += term;
        else acc -= term;
    }
    return PadicNumber::from_integer(p, acc, N);
}

inline PadicNumber padic_exp(const PadicNumber& x) {
    long p = x.prime(), N = x.precision();
    if (!x.is_zero() && x.valuation() < 1) throw Error("outside convergence domain");
    if (x.is_zero()) return PadicNumber::from_integer(p, 1, N);
    // v(x^n/n!) >= n - (n-1)/(p-1)
    long nmax = 1;
    while (nmax - (nmax - 1) / (p - 1) < N + 1) ++nmax;
    long guard = static_cast<long>(valuation(factorial(nmax), p));
    Integer P(p);
    Integer W = ipow(P, static_cast<unsigned long>(N + guard));
    Integer xi = mod(Integer(x.residue()), W);
    Integer num = 1, acc = 1;
    Integer Wn = ipow(P, static_cast<unsigned long>(N));
    for (long n = 1; n <= nmax; ++n) {
        num = mod(Integer(num * xi), W);
        Integer f = factorial(n);
        long vf = valuation(f, p);
        Integer q;
        mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), ipow(P, vf).get_mpz_t());
        Integer fu;
        mpz_divexact(fu.get_mpz_t(), f.get_mpz_t(), ipow(P, vf).get_mpz_t());
        Integer inv;
        mpz_invert(inv.get_mpz_t(), fu.get_mpz_t(), Wn.get_mpz_t());
        acc += q * inv;
    }
    return PadicNumber::from_integer(p, acc, N);
}

// a point of weight space: z -> omega(z)^i * exp(w log<z>), or z -> z^k exactly
struct WeightCharacter {
    long p = 3;
    long i = 0;                  // torsion index mod p-1
    PadicNumber w;               // weight in Z_p
    std::optional<long> k;       // exact integer tag

    static WeightCharacter integer(long k, long p, long N) {
        WeightCharacter s;
        s.p = p;
        s.i = mod(k, p - 1);
        s.w = PadicNumber::from_integer(p, k, N);
        s.k = k;
        return s;
    }
    static WeightCharacter general(long i, const PadicNumber& w) {
        WeightCharacter s;
        s.p = w.prime();
        s.i = mod(i, s.p - 1);
        s.w = w;
        return s;
    }

    int sgn() const { return i % 2 == 0 ? 1 : -1; }

    // s - n and -s as characters (used for shifted evaluations)
    WeightCharacter shifted(long n) const {
        WeightCharacter s = *this;
        s.i = mod(i + n, p - 1);
        s.w = w + PadicNumber::from_integer(p, n, w.precision());
        if (k) s.k = *k + n;
        return s;
    }
    WeightCharacter negated() const {
        WeightCharacter s = *this;
        s.i = mod(-i, p - 1);
        s.w = -w;
        if (k) s.k = -*k;
        return s;
    }

    std::string str() const {
        if (k) return "int:" + std::to_string(*k);
        return "char:" + std::to_string(i) + "," + w.str();
    }
};

inline PadicNumber wt(const WeightCharacter& s) { return s.w; }

inline PadicNumber char_eval(const WeightCharacter& s, const PadicNumber& z) {
    if (z.is_zero() || z.valuation() != 0) throw Error("char_eval: argument is not a unit");
    if (s.k) return z.pow(*s.k);
    PadicNumber om = teichmuller(z);
    PadicNumber angle = z / om;
    PadicNumber e = padic_exp(s.w * padic_log(angle));
    return om.pow(s.i) * e.with_precision(z.precision());
}

inline PadicNumber char_eval(const WeightCharacter& s, long z, long N) {
    return char_eval(s, PadicNumber::from_integer(s.p, z, N));
}

inline PadicNumber binom_weight(const WeightCharacter& s, unsigned long n) {
    long N = s.w.precision();
    if (s.k) return PadicNumber::from_rational(s.p, binomial_rational(*s.k, n), N - valuation(factorial(n), s.p));
    PadicNumber r = PadicNumber::from_integer(s.p, 1, N);
    for (unsigned long j = 0; j < n; ++j) r = r * (s.w - PadicNumber::from_integer(s.p, static_cast<long>(j), N));
    return r / PadicNumber::from_integer(s.p, factorial(n), N);
}

// the n-th root of unity congruent to a mod p, by Newton iteration on x^n - 1
inline PadicNumber hensel_root_of_unity(long n, long a, long p, long N) {
    if (n <= 0 || (p - 1) % n != 0) throw HypothesisError("no such root in Q_p");
    Integer P(p);
    Integer pm = P;
    Integer an;
    mpz_powm_ui(an.get_mpz_t(), Integer(mod(a, p)).get_mpz_t(), n, pm.get_mpz_t());
    if (an != 1) throw HypothesisError("no such root in Q_p");
    Integer m = ipow(P, static_cast<unsigned long>(N));
    Integer x = mod(Integer(a), m);
    for (long it = 0; it < N + 2; ++it) {
        Integer xn, xn1;
        mpz_powm_ui(xn.get_mpz_t(), x.get_mpz_t(), n, m.get_mpz_t());
        mpz_powm_ui(xn1.get_mpz_t(), x.get_mpz_t(), n - 1, m.get_mpz_t());
        Integer d = mod(Integer(xn1 * n), m), inv;
        mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
        x = mod(Integer(x - (xn - 1) * inv), m);
    }
    return PadicNumber::from_integer(p, x, N);
}

}  // namespace psh
