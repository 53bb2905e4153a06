#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psh {

using Integer = mpz_class;
using Rational = mpq_class;
using Vec2 = std::array<Rational, 2>;

// Every library failure is an Error; HypothesisError marks inputs that break
// a mathematical precondition (the CLI maps it to exit code 3).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HypothesisError : Error {
    using Error::Error;
};

inline Rational make_rational(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer mod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline Integer floor(const Rational& x) { return floor_div(x.get_num(), x.get_den()); }

// x reduced into [0, m) for rational m > 0.
inline Rational rmod(const Rational& x, const Rational& m) {
    Rational q = x / m;
    return x - m * Rational(floor(q));
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline long gcd(long a, long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Extended gcd: returns g = gcd(a,b) >= 0 with a*x + b*y = g.
inline long ext_gcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        long t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0;
    y = y0;
    return a;
}

inline long inv_mod(long a, long m) {
    long x, y;
    if (ext_gcd(mod(a, m), m, x, y) != 1) throw Error("not invertible mod " + std::to_string(m));
    return mod(x, m);
}

inline Integer ipow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rational rpow(const Rational& b, long e) {
    if (e < 0) {
        if (b == 0) throw Error("zero to a negative power");
        return rpow(1 / b, -e);
    }
    Rational r(Integer(ipow(b.get_num(), e)), Integer(ipow(b.get_den(), e)));
    return r;
}

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// p-adic valuation of a nonzero integer / rational.  Zero has "infinite"
// valuation, reported as INT32_MAX.
inline constexpr long kInfiniteValuation = INT32_MAX;

inline long valuation(const Integer& x, long p) {
    if (x == 0) return kInfiniteValuation;
    Integer t = x;
    long v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        ++v;
    }
    return v;
}

inline long valuation(const Rational& x, long p) {
    if (x == 0) return kInfiniteValuation;
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<long> prime_factors(long n) {
    std::vector<long> out;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// falling factorial x(x-1)...(x-n+1)/n!
inline Rational binomial_rational(const Rational& x, unsigned long n) {
    Rational r = 1;
    for (unsigned long i = 0; i < n; ++i) r *= x - Rational(static_cast<long>(i));
    r /= Rational(factorial(n));
    return r;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

struct Mat2 {
    Rational a = 1, b = 0, c = 0, d = 1;

    Mat2() = default;
    Mat2(Rational a_, Rational b_, Rational c_, Rational d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
    Mat2(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2 identity() { return {}; }
    static Mat2 scalar(const Rational& s) { return {s, 0, 0, s}; }

    Rational det() const { return a * d - b * c; }

    Vec2 operator*(const Vec2& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    Mat2 inverse() const {
        Rational D = det();
        if (D == 0) throw Error("singular matrix");
        return {d / D, -b / D, -c / D, a / D};
    }

    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

    std::string str() const {
        return "(" + to_string(a) + " " + to_string(b) + "; " + to_string(c) + " " + to_string(d) + ")";
    }
};

inline Mat2 adjugate(const Mat2& g) { return {g.d, -g.b, -g.c, g.a}; }

// Full-rank lattice in Q^2.  Basis columns are (h11, h21) and (0, h22): the
// lower-triangular Hermite normal form with h11, h22 > 0 and 0 <= h21 < h22.
class Lattice2 {
public:
    Lattice2() : h11_(1), h21_(0), h22_(1) {}

    static Lattice2 from_hnf(Rational h11, Rational h21, Rational h22) {
        Lattice2 L;
        L.h11_ = std::move(h11);
        L.h22_ = std::move(h22);
        L.h21_ = rmod(h21, L.h22_);
        if (L.h11_ <= 0 || L.h22_ <= 0) throw Error("degenerate lattice");
        return L;
    }

    static Lattice2 rect(const Rational& m1, const Rational& m2) { return from_hnf(m1, 0, m2); }

    const Rational& h11() const { return h11_; }
    const Rational& h21() const { return h21_; }
    const Rational& h22() const { return h22_; }

    Vec2 b1() const { return {h11_, h21_}; }
    Vec2 b2() const { return {Rational(0), h22_}; }

    // covolume, i.e. [Z^2 : L] when L is a sublattice of Z^2
    Rational covolume() const { return h11_ * h22_; }

    bool contains(const Vec2& v) const {
        Rational u = v[0] / h11_;
        if (!is_integer(u)) return false;
        Rational w = (v[1] - u * h21_) / h22_;
        return is_integer(w);
    }

    bool contains(const Lattice2& o) const { return contains(o.b1()) && contains(o.b2()); }

    bool operator==(const Lattice2& o) const { return h11_ == o.h11_ && h21_ == o.h21_ && h22_ == o.h22_; }

    Lattice2 transform(const Mat2& g) const;

    std::string str() const {
        return "{(" + to_string(h11_) + "," + to_string(h21_) + "),(0," + to_string(h22_) + ")}";
    }

private:
    Rational h11_, h21_, h22_;
};

inline Lattice2 hnf_basis(const std::vector<Vec2>& gens) {
    Integer den = 1;
    for (const auto& g : gens)
        for (const auto& x : g) den = lcm(den, x.get_den());
    std::vector<std::array<Integer, 2>> v;
    for (const auto& g : gens) {
        Rational x = g[0] * den, y = g[1] * den;
        v.push_back({x.get_num(), y.get_num()});
    }
    // Euclid on the first coordinate until at most one generator has x != 0.
    auto pivot = [&]() -> long {
        long best = -1;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i][0] == 0) continue;
            if (best < 0 || abs(v[i][0]) < abs(v[best][0])) best = static_cast<long>(i);
        }
        return best;
    };
    for (;;) {
        long pi = pivot();
        if (pi < 0) throw Error("degenerate lattice");
        bool reduced_any = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (static_cast<long>(i) == pi || v[i][0] == 0) continue;
            Integer q = floor_div(v[i][0], v[pi][0]);
            v[i][0] -= q * v[pi][0];
            v[i][1] -= q * v[pi][1];
            reduced_any = true;
        }
        if (!reduced_any) break;
    }
    long pi = pivot();
    std::array<Integer, 2> top = v[pi];
    if (top[0] < 0) { top[0] = -top[0]; top[1] = -top[1]; }
    Integer g2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (static_cast<long>(i) != pi) g2 = gcd(g2, v[i][1]);
    if (g2 == 0) throw Error("degenerate lattice");
    Rational h11(top[0], den), h21(top[1], den), h22(g2, den);
    h11.canonicalize();
    h21.canonicalize();
    h22.canonicalize();
    return Lattice2::from_hnf(h11, h21, h22);
}

inline Lattice2 Lattice2::transform(const Mat2& g) const { return hnf_basis({g * b1(), g * b2()}); }

inline Lattice2 lattice_sum(const Lattice2& A, const Lattice2& B) {
    return hnf_basis({A.b1(), A.b2(), B.b1(), B.b2()});
}

// Intersection of two lattices, via duality: (A ∩ B)^dual = A^dual + B^dual.
inline Lattice2 lattice_intersection(const Lattice2& A, const Lattice2& B) {
    auto dual = [](const Lattice2& L) {
        // the dual of the column basis matrix H is H^{-T}
        Mat2 H(L.h11(), 0, L.h21(), L.h22());
        Mat2 Hi = H.inverse();
        return hnf_basis({{Hi.a, Hi.b}, {Hi.c, Hi.d}});
    };
    return dual(lattice_sum(dual(A), dual(B)));
}

}  // namespace psh
