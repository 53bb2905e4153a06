#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "padic_shintani/characters.hpp"
#include "padic_shintani/foundation.hpp"

namespace psh {

using Coeff = Cyclotomic;

namespace detail {

// lcm and gcd of positive rationals
inline Rational rlcm(const Rational& a, const Rational& b) {
    Rational r(lcm(a.get_num(), b.get_num()), gcd(a.get_den(), b.get_den()));
    r.canonicalize();
    return r;
}
inline Rational rgcd(const Rational& a, const Rational& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    Rational r(gcd(a.get_num(), b.get_num()), lcm(a.get_den(), b.get_den()));
    r.canonicalize();
    return r;
}

inline long to_long(const Integer& x) {
    if (!x.fits_slong_p()) throw Error("test function grid too large");
    return x.get_si();
}

inline std::vector<long> divisors_desc(long n) {
    std::vector<long> ds;
    for (long d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            ds.push_back(d);
            if (d * d != n) ds.push_back(n / d);
        }
    std::sort(ds.rbegin(), ds.rend());
    return ds;
}

}  // namespace detail

// f = sum_a c_a [a + mZ] with the points a on the grid (1/d)Z, a in [0, m).
// Stored canonically: m is the minimal period, d the minimal grid.
class TestFn1 {
public:
    TestFn1() = default;

    static TestFn1 indicator(const Rational& a, const Rational& m, const Coeff& c = Coeff(1)) {
        return from_terms({{c, a, m}});
    }

    // terms (coefficient, offset, modulus)
    static TestFn1 from_terms(const std::vector<std::tuple<Coeff, Rational, Rational>>& terms) {
        if (terms.empty()) return TestFn1();
        Rational L = 0;
        Integer D = 1;
        for (const auto& [c, a, m] : terms) {
            if (m <= 0) throw Error("test function modulus must be positive");
            L = L == 0 ? m : detail::rlcm(L, m);
            D = lcm(D, lcm(a.get_den(), m.get_den()));
        }
        long n = detail::to_long(Integer(Rational(L * D).get_num()));
        std::map<long, Coeff> pts;
        for (const auto& [c, a, m] : terms) {
            long step = detail::to_long(Integer(Rational(m * D).get_num()));
            long base = detail::to_long(mod(Integer(Rational(a * D).get_num()), Integer(step)));
            for (long i = base; i < n; i += step) pts[i] += c;
        }
        return canonical(detail::to_long(D), n, std::move(pts));
    }

    Rational modulus() const { return Rational(n_, d_); }
    long grid_den() const { return d_; }
    long period_steps() const { return n_; }
    bool is_zero() const { return pts_.empty(); }

    // (point in [0, m), coefficient)
    std::vector<std::pair<Rational, Coeff>> points() const {
        std::vector<std::pair<Rational, Coeff>> out;
        for (const auto& [i, c] : pts_) out.push_back({make_point(i), c});
        return out;
    }
    const std::map<long, Coeff>& raw_points() const { return pts_; }

    Coeff value(const Rational& x) const {
        Rational t = x * d_;
        if (!is_integer(t)) return Coeff(0);
        long i = detail::to_long(mod(t.get_num(), Integer(n_)));
        auto it = pts_.find(i);
        return it == pts_.end() ? Coeff(0) : it->second;
    }

    // common refinement data: the same function on grid D with period steps n
    std::map<long, Coeff> refined(long D, long n) const {
        std::map<long, Coeff> out;
        long scale = D / d_;
        long per = n_ * scale;
        if (D % d_ != 0 || n % per != 0) throw Error("invalid refinement of a test function");
        for (const auto& [i, c] : pts_)
            for (long j = i * scale; j < n; j += per) out[j] = c;
        return out;
    }

    friend TestFn1 operator+(const TestFn1& f, const TestFn1& g) { return combine(f, g, 1); }
    friend TestFn1 operator-(const TestFn1& f, const TestFn1& g) { return combine(f, g, -1); }
    friend TestFn1 operator*(const Coeff& s, const TestFn1& f) {
        std::map<long, Coeff> pts;
        for (const auto& [i, c] : f.pts_) pts[i] = s * c;
        return canonical(f.d_, f.n_, std::move(pts));
    }
    // pointwise product
    friend TestFn1 operator*(const TestFn1& f, const TestFn1& g) {
        if (f.is_zero() || g.is_zero()) return TestFn1();
        long D = std::lcm(f.d_, g.d_);
        long n = std::lcm(f.n_ * (D / f.d_), g.n_ * (D / g.d_));
        auto a = f.refined(D, n), b = g.refined(D, n);
        std::map<long, Coeff> pts;
        for (const auto& [i, c] : a) {
            auto it = b.find(i);
            if (it != b.end()) pts[i] = c * it->second;
        }
        return canonical(D, n, std::move(pts));
    }

    bool operator==(const TestFn1& o) const { return d_ == o.d_ && n_ == o.n_ && pts_ == o.pts_; }

    // rational components: f = sum_i zeta_order^i * component_i
    std::pair<long, std::vector<TestFn1>> components() const {
        long L = 1;
        for (const auto& [i, c] : pts_) L = std::lcm(L, c.order());
        std::size_t dim = detail::euler_phi(L);
        std::vector<std::map<long, Coeff>> parts(dim);
        for (const auto& [i, c] : pts_) {
            auto cc = c.lift(L).coeffs();
            for (std::size_t k = 0; k < cc.size(); ++k)
                if (cc[k] != 0) parts[k][i] = Coeff(cc[k]);
        }
        std::vector<TestFn1> out;
        for (auto& p : parts) out.push_back(canonical(d_, n_, std::move(p)));
        return {L, out};
    }

    std::string str() const {
        std::string s;
        for (const auto& [i, c] : pts_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")[" + to_string(make_point(i)) + "+" + to_string(modulus()) + "Z]";
        }
        return s.empty() ? "0" : s;
    }

    static TestFn1 canonical(long d, long n, std::map<long, Coeff> pts) {
        for (auto it = pts.begin(); it != pts.end();) {
            if (it->second.is_zero()) it = pts.erase(it);
            else ++it;
        }
        TestFn1 f;
        if (pts.empty()) return f;
        // minimal period
        for (long k : detail::divisors_desc(n)) {
            if (k == 1) break;
            long sh = n / k;
            bool ok = true;
            for (const auto& [i, c] : pts) {
                auto it = pts.find((i + sh) % n);
                if (it == pts.end() || it->second != c) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                std::map<long, Coeff> red;
                for (auto& [i, c] : pts)
                    if (i < sh) red[i] = c;
                pts = std::move(red);
                n = sh;
                break;
            }
        }
        // minimal grid
        long g = gcd(d, n);
        for (const auto& [i, c] : pts) g = gcd(g, i);
        f.d_ = d / g;
        f.n_ = n / g;
        for (auto& [i, c] : pts) f.pts_[i / g] = c;
        return f;
    }

private:
    Rational make_point(long i) const { return make_rational(i, d_); }

    static TestFn1 combine(const TestFn1& f, const TestFn1& g, int sign) {
        if (f.is_zero() && g.is_zero()) return TestFn1();
        long D = std::lcm(f.is_zero() ? 1 : f.d_, g.is_zero() ? 1 : g.d_);
        long n = std::lcm(f.is_zero() ? 1 : f.n_ * (D / f.d_), g.is_zero() ? 1 : g.n_ * (D / g.d_));
        auto a = f.is_zero() ? std::map<long, Coeff>{} : f.refined(D, n);
        if (!g.is_zero())
            for (auto& [i, c] : g.refined(D, n)) {
                if (sign > 0) a[i] += c;
                else a[i] -= c;
            }
        return canonical(D, n, std::move(a));
    }

    long d_ = 1;
    long n_ = 1;
    std::map<long, Coeff> pts_;
};

// sum of coefficients divided by the modulus; haar([Z]) = 1
inline Coeff haar(const TestFn1& f) {
    Coeff acc = 0;
    for (const auto& [i, c] : f.raw_points()) acc += c;
    acc *= 1 / f.modulus();
    return acc;
}

enum class StabilizerKind { none, gamma0, gamma1 };
struct Stabilizer {
    StabilizerKind kind = StabilizerKind::none;
    long level = 1;
};

// component at p of a global model: unset, [Z_p^2], or [Z_p x Z_p^x]
enum class PFlag { none, full, units };

// f = sum c [(alpha, beta) + L1 Z x L2 Z] with points on the grid
// (1/d1)Z x (1/d2)Z; stored canonically with minimal periods and grids.
class TestFn2 {
public:
    using Point = std::pair<long, long>;

    TestFn2() = default;

    struct Term {
        Coeff coeff;
        Vec2 offset;
        Lattice2 lattice;
    };

    static TestFn2 from_terms(const std::vector<Term>& terms);
    static TestFn2 indicator(const Vec2& v, const Lattice2& L, const Coeff& c = Coeff(1)) {
        return from_terms({{c, v, L}});
    }
    static TestFn2 product(const TestFn1& f1, const TestFn1& f2) {
        std::map<Point, Coeff> pts;
        for (const auto& [i, a] : f1.raw_points())
            for (const auto& [j, b] : f2.raw_points()) pts[{i, j}] = a * b;
        TestFn2 f = canonical(f1.grid_den(), f2.grid_den(), f1.period_steps(), f2.period_steps(), std::move(pts));
        f.factored = std::make_pair(f1, f2);
        return f;
    }

    Rational period_x() const { return Rational(n1_, d1_); }
    Rational period_y() const { return Rational(n2_, d2_); }
    long grid_x() const { return d1_; }
    long grid_y() const { return d2_; }
    long steps_x() const { return n1_; }
    long steps_y() const { return n2_; }
    bool is_zero() const { return pts_.empty(); }
    std::size_t size() const { return pts_.size(); }
    const std::map<Point, Coeff>& raw_points() const { return pts_; }

    Vec2 point(const Point& ij) const { return {make_rational(ij.first, d1_), make_rational(ij.second, d2_)}; }

    Coeff value(const Vec2& v) const {
        Rational x = v[0] * d1_, y = v[1] * d2_;
        if (!is_integer(x) || !is_integer(y)) return Coeff(0);
        Point ij{detail::to_long(mod(x.get_num(), Integer(n1_))), detail::to_long(mod(y.get_num(), Integer(n2_)))};
        auto it = pts_.find(ij);
        return it == pts_.end() ? Coeff(0) : it->second;
    }

    // terms of the canonical form: one per point, lattice L1 Z x L2 Z
    std::vector<Term> terms() const {
        std::vector<Term> out;
        Lattice2 R = Lattice2::rect(period_x(), period_y());
        for (const auto& [ij, c] : pts_) out.push_back({c, point(ij), R});
        return out;
    }

    // the same function on a finer grid / larger period box
    std::map<Point, Coeff> refined(long D1, long D2, long N1, long N2) const {
        long s1 = D1 / d1_, s2 = D2 / d2_;
        long p1 = n1_ * s1, p2 = n2_ * s2;
        if (D1 % d1_ || D2 % d2_ || N1 % p1 || N2 % p2) throw Error("invalid refinement of a test function");
        std::map<Point, Coeff> out;
        for (const auto& [ij, c] : pts_)
            for (long i = ij.first * s1; i < N1; i += p1)
                for (long j = ij.second * s2; j < N2; j += p2) out[{i, j}] = c;
        return out;
    }

    friend TestFn2 operator+(const TestFn2& f, const TestFn2& g) { return combine(f, g, 1); }
    friend TestFn2 operator-(const TestFn2& f, const TestFn2& g) { return combine(f, g, -1); }
    friend TestFn2 operator*(const Coeff& s, const TestFn2& f) {
        std::map<Point, Coeff> pts;
        for (const auto& [ij, c] : f.pts_) pts[ij] = s * c;
        return canonical(f.d1_, f.d2_, f.n1_, f.n2_, std::move(pts));
    }
    // pointwise product
    friend TestFn2 operator*(const TestFn2& f, const TestFn2& g) {
        if (f.is_zero() || g.is_zero()) return TestFn2();
        long D1 = std::lcm(f.d1_, g.d1_), D2 = std::lcm(f.d2_, g.d2_);
        long N1 = std::lcm(f.n1_ * (D1 / f.d1_), g.n1_ * (D1 / g.d1_));
        long N2 = std::lcm(f.n2_ * (D2 / f.d2_), g.n2_ * (D2 / g.d2_));
        // iterate over the smaller support, look values up in the other
        const TestFn2& small = f.size() <= g.size() ? f : g;
        const TestFn2& big = f.size() <= g.size() ? g : f;
        std::map<Point, Coeff> pts;
        long s1 = D1 / small.d1_, s2 = D2 / small.d2_, p1 = small.n1_ * s1, p2 = small.n2_ * s2;
        long b1 = D1 / big.d1_, b2 = D2 / big.d2_;
        for (const auto& [ij, c] : small.pts_)
            for (long i = ij.first * s1; i < N1; i += p1)
                for (long j = ij.second * s2; j < N2; j += p2) {
                    if (i % b1 || j % b2) continue;
                    auto it = big.pts_.find({(i / b1) % big.n1_, (j / b2) % big.n2_});
                    if (it != big.pts_.end()) pts[{i, j}] = c * it->second;
                }
        return canonical(D1, D2, N1, N2, std::move(pts));
    }

    bool operator==(const TestFn2& o) const {
        return d1_ == o.d1_ && d2_ == o.d2_ && n1_ == o.n1_ && n2_ == o.n2_ && pts_ == o.pts_;
    }
    bool operator!=(const TestFn2& o) const { return !(*this == o); }

    std::pair<long, std::vector<TestFn2>> components() const {
        long L = 1;
        for (const auto& [ij, c] : pts_) L = std::lcm(L, c.order());
        std::size_t dim = detail::euler_phi(L);
        std::vector<std::map<Point, Coeff>> parts(dim);
        for (const auto& [ij, c] : pts_) {
            auto cc = c.lift(L).coeffs();
            for (std::size_t k = 0; k < cc.size(); ++k)
                if (cc[k] != 0) parts[k][ij] = Coeff(cc[k]);
        }
        std::vector<TestFn2> out;
        for (auto& p : parts) out.push_back(canonical(d1_, d2_, n1_, n2_, std::move(p)));
        return {L, out};
    }

    std::string str() const {
        std::string s;
        for (const auto& [ij, c] : pts_) {
            auto v = point(ij);
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")[(" + to_string(v[0]) + "," + to_string(v[1]) + ")+" + to_string(period_x()) + "Zx" +
                 to_string(period_y()) + "Z]";
        }
        return s.empty() ? "0" : s;
    }

    static TestFn2 canonical(long d1, long d2, long n1, long n2, std::map<Point, Coeff> pts);

    // metadata carried by the named constructors
    std::optional<std::pair<TestFn1, TestFn1>> factored;
    Stabilizer stabilizer;
    PFlag pflag = PFlag::none;
    long p = 0;

private:
    static TestFn2 combine(const TestFn2& f, const TestFn2& g, int sign) {
        if (f.is_zero() && g.is_zero()) return TestFn2();
        if (f.is_zero()) return sign > 0 ? g : Coeff(-1) * g;
        if (g.is_zero()) return f;
        long D1 = std::lcm(f.d1_, g.d1_), D2 = std::lcm(f.d2_, g.d2_);
        long N1 = std::lcm(f.n1_ * (D1 / f.d1_), g.n1_ * (D1 / g.d1_));
        long N2 = std::lcm(f.n2_ * (D2 / f.d2_), g.n2_ * (D2 / g.d2_));
        auto a = f.refined(D1, D2, N1, N2);
        for (auto& [ij, c] : g.refined(D1, D2, N1, N2)) {
            if (sign > 0) a[ij] += c;
            else a[ij] -= c;
        }
        return canonical(D1, D2, N1, N2, std::move(a));
    }

    long d1_ = 1, d2_ = 1, n1_ = 1, n2_ = 1;
    std::map<Point, Coeff> pts_;
};

inline TestFn2 TestFn2::canonical(long d1, long d2, long n1, long n2, std::map<Point, Coeff> pts) {
    for (auto it = pts.begin(); it != pts.end();) {
        if (it->second.is_zero()) it = pts.erase(it);
        else ++it;
    }
    TestFn2 f;
    if (pts.empty()) return f;
    auto shift_ok = [&](long sx, long sy) {
        for (const auto& [ij, c] : pts) {
            auto it = pts.find({(ij.first + sx) % n1, (ij.second + sy) % n2});
            if (it == pts.end() || it->second != c) return false;
        }
        return true;
    };
    for (long k : detail::divisors_desc(n1)) {
        if (k == 1) break;
        if (shift_ok(n1 / k, 0)) {
            long sh = n1 / k;
            std::map<Point, Coeff> red;
            for (auto& [ij, c] : pts)
                if (ij.first < sh) red[ij] = c;
            pts = std::move(red);
            n1 = sh;
            break;
        }
    }
    for (long k : detail::divisors_desc(n2)) {
        if (k == 1) break;
        if (shift_ok(0, n2 / k)) {
            long sh = n2 / k;
            std::map<Point, Coeff> red;
            for (auto& [ij, c] : pts)
                if (ij.second < sh) red[ij] = c;
            pts = std::move(red);
            n2 = sh;
            break;
        }
    }
    long g1 = gcd(d1, n1), g2 = gcd(d2, n2);
    for (const auto& [ij, c] : pts) {
        g1 = gcd(g1, ij.first);
        g2 = gcd(g2, ij.second);
    }
    f.d1_ = d1 / g1;
    f.n1_ = n1 / g1;
    f.d2_ = d2 / g2;
    f.n2_ = n2 / g2;
    for (auto& [ij, c] : pts) f.pts_[{ij.first / g1, ij.second / g2}] = c;
    return f;
}

namespace detail {

// rectangular sublattice L1 Z x L2 Z of an HNF lattice, and representatives
// of the lattice modulo it
struct RectSplit {
    Rational L1, L2;
    std::vector<Vec2> reps;
};

inline RectSplit rect_split(const Lattice2& L) {
    RectSplit s;
    Rational ratio = L.h21() / L.h22();
    Integer k = ratio.get_den();
    s.L1 = L.h11() * Rational(k);
    s.L2 = L.h22();
    long kk = to_long(k);
    for (long u = 0; u < kk; ++u) s.reps.push_back({L.h11() * u, rmod(L.h21() * u, s.L2)});
    return s;
}

// accumulate terms sharing nothing in particular onto a common rectangular grid
inline TestFn2 accumulate(const std::vector<std::pair<Coeff, Vec2>>& points, const std::vector<RectSplit>& splits,
                          const std::vector<std::size_t>& which) {
    Rational L1 = 0, L2 = 0;
    Integer D1 = 1, D2 = 1;
    for (const auto& s : splits) {
        L1 = L1 == 0 ? s.L1 : rlcm(L1, s.L1);
        L2 = L2 == 0 ? s.L2 : rlcm(L2, s.L2);
    }
    D1 = lcm(D1, L1.get_den());
    D2 = lcm(D2, L2.get_den());
    for (const auto& s : splits)
        for (const auto& r : s.reps) {
            D1 = lcm(D1, r[0].get_den());
            D2 = lcm(D2, r[1].get_den());
        }
    for (const auto& [c, v] : points) {
        D1 = lcm(D1, v[0].get_den());
        D2 = lcm(D2, v[1].get_den());
    }
    long d1 = to_long(D1), d2 = to_long(D2);
    long n1 = to_long(Integer(Rational(L1 * D1).get_num())), n2 = to_long(Integer(Rational(L2 * D2).get_num()));
    std::map<TestFn2::Point, Coeff> pts;
    for (std::size_t t = 0; t < points.size(); ++t) {
        const auto& [c, v] = points[t];
        const auto& s = splits[which[t]];
        long st1 = to_long(Integer(Rational(s.L1 * D1).get_num())), st2 = to_long(Integer(Rational(s.L2 * D2).get_num()));
        for (const auto& r : s.reps) {
            long x0 = to_long(mod(Integer(Rational((v[0] + r[0]) * D1).get_num()), Integer(st1)));
            long y0 = to_long(mod(Integer(Rational((v[1] + r[1]) * D2).get_num()), Integer(st2)));
            for (long i = x0; i < n1; i += st1)
                for (long j = y0; j < n2; j += st2) pts[{i, j}] += c;
        }
    }
    return TestFn2::canonical(d1, d2, n1, n2, std::move(pts));
}

}  // namespace detail

inline TestFn2 TestFn2::from_terms(const std::vector<Term>& terms) {
    if (terms.empty()) return TestFn2();
    std::vector<detail::RectSplit> splits;
    std::vector<std::size_t> which;
    std::vector<std::pair<Coeff, Vec2>> points;
    std::vector<Lattice2> seen;
    for (const auto& t : terms) {
        std::size_t idx = 0;
        while (idx < seen.size() && !(seen[idx] == t.lattice)) ++idx;
        if (idx == seen.size()) {
            seen.push_back(t.lattice);
            splits.push_back(detail::rect_split(t.lattice));
        }
        which.push_back(idx);
        points.push_back({t.coeff, t.offset});
    }
    return detail::accumulate(points, splits, which);
}

inline TestFn2 canonicalize(const TestFn2& f) { return TestFn2::from_terms(f.terms()); }

// (f|g)(v) = f(g v): each term [v + L] goes to [g^{-1} v + g^{-1} L]
inline TestFn2 act_gl2(const TestFn2& f, const Mat2& g) {
    if (g.det() == 0) throw Error("singular matrix");
    if (f.is_zero()) return f;
    Mat2 gi = g.inverse();
    Lattice2 L = Lattice2::rect(f.period_x(), f.period_y()).transform(gi);
    std::vector<detail::RectSplit> splits{detail::rect_split(L)};
    std::vector<std::size_t> which;
    std::vector<std::pair<Coeff, Vec2>> points;
    for (const auto& [ij, c] : f.raw_points()) {
        points.push_back({c, gi * f.point(ij)});
        which.push_back(0);
    }
    return detail::accumulate(points, splits, which);
}

// x -> f(w + x (a, b))
inline TestFn1 restrict_line(const TestFn2& f, long a, long b, const Vec2& w) {
    if (a == 0 && b == 0) throw Error("zero direction");
    if (f.is_zero()) return TestFn1();
    Rational L1 = f.period_x(), L2 = f.period_y();
    // period of the restriction: T with T a in L1 Z and T b in L2 Z
    Rational T = 0;
    if (a != 0) T = L1 / std::abs(a);
    if (b != 0) T = T == 0 ? L2 / std::abs(b) : detail::rlcm(T, L2 / std::abs(b));
    // candidate x values from the grid in one nonzero coordinate
    std::vector<std::tuple<Coeff, Rational, Rational>> terms;
    long steps;
    if (a != 0) {
        Rational grid = Rational(1, f.grid_x() * std::abs(a));
        steps = detail::to_long(Integer(Rational(T / grid).get_num()));
        Rational x0 = rmod(-w[0] / a, grid);
        for (long t = 0; t < steps; ++t) {
            Rational x = x0 + grid * t;
            Coeff c = f.value({w[0] + x * a, w[1] + x * b});
            if (!c.is_zero()) terms.push_back({c, x, T});
        }
    } else {
        Rational grid = Rational(1, f.grid_y() * std::abs(b));
        steps = detail::to_long(Integer(Rational(T / grid).get_num()));
        Rational x0 = rmod(-w[1] / b, grid);
        for (long t = 0; t < steps; ++t) {
            Rational x = x0 + grid * t;
            Coeff c = f.value({w[0], w[1] + x * b});
            if (!c.is_zero()) terms.push_back({c, x, T});
        }
    }
    return TestFn1::from_terms(terms);
}

// every line in direction (a, b) meeting the support, up to translation by
// the period lattice: one offset per transversal class
inline std::vector<Vec2> line_offsets(const TestFn2& f, long a, long b) {
    std::vector<Vec2> out;
    if (f.is_zero()) return out;
    Rational L1 = f.period_x(), L2 = f.period_y();
    // transversal coordinate c(w) = b w1 - a w2, taken modulo c(period lattice)
    Rational G = detail::rgcd(Rational(b) * L1, Rational(a) * L2);
    std::map<Rational, Vec2> classes;
    for (long i = 0; i < f.steps_x(); ++i)
        for (long j = 0; j < f.steps_y(); ++j) {
            Vec2 w = f.point({i, j});
            Rational c = Rational(b) * w[0] - Rational(a) * w[1];
            Rational key = G == 0 ? c : rmod(c, G);
            classes.emplace(key, w);
        }
    for (auto& [k, w] : classes) out.push_back(w);
    return out;
}

// cusp r = num/den in lowest terms; (1, 0) encodes infinity
inline bool vanishing_check(const TestFn2& f, long num, long den) {
    long g = gcd(num, den);
    if (g == 0) throw Error("invalid cusp");
    num /= g;
    den /= g;
    for (const auto& w : line_offsets(f, num, den))
        if (!haar(restrict_line(f, num, den, w)).is_zero()) return false;
    return true;
}

// [Z^2] - l[Z x lZ]: the global model of f'_l (x) [Z_p^2]
inline TestFn2 make_f_ell(long ell, long p) {
    if (!is_prime(ell)) throw HypothesisError("ell must be prime");
    if (ell == p) throw HypothesisError("ell must differ from p");
    TestFn1 f1 = TestFn1::indicator(0, 1);
    TestFn1 f2 = TestFn1::indicator(0, 1) - TestFn1::indicator(0, ell, Coeff(ell));
    TestFn2 f = TestFn2::product(f1, f2);
    f.stabilizer = {StabilizerKind::gamma0, ell};
    f.pflag = PFlag::full;
    f.p = p;
    return f;
}

// (sum_i tau^{-1}(i)[i + LZ]) x (sum_j psi(j)[jL + NZ]), N = LM
inline TestFn2 make_f_tau_psi(const DirichletChar& tau, const DirichletChar& psi, long p) {
    long L = tau.modulus(), M = psi.modulus(), N = L * M;
    if (L % p == 0 || M % p == 0) throw HypothesisError("conductors must be prime to p");
    auto tinv = tau.inverse();
    std::vector<std::tuple<Coeff, Rational, Rational>> t1, t2;
    for (long i = 0; i < L; ++i)
        if (!tinv.value(i).is_zero()) t1.push_back({tinv.value(i), Rational(i), Rational(L)});
    for (long j = 0; j < M; ++j)
        if (!psi.value(j).is_zero()) t2.push_back({psi.value(j), Rational(j * L), Rational(N)});
    TestFn2 f = TestFn2::product(TestFn1::from_terms(t1), TestFn1::from_terms(t2));
    f.stabilizer = {StabilizerKind::gamma1, N};
    f.pflag = PFlag::full;
    f.p = p;
    return f;
}

// global model of [Z_p x Z_p^x] at p: [Z^2] - [Z x pZ]
inline TestFn2 p_units_model(long p) {
    return TestFn2::indicator({0, 0}, Lattice2::rect(1, 1)) - TestFn2::indicator({0, 0}, Lattice2::rect(1, p));
}

// f' (x) [Z_p x Z_p^x] from f' (x) [Z_p^2]
inline TestFn2 with_p_units(const TestFn2& f) {
    if (f.pflag != PFlag::full) throw Error("expected a model filled in with [Z_p^2]");
    TestFn2 g = f * p_units_model(f.p);
    if (f.factored) {
        TestFn1 u = TestFn1::indicator(0, 1) - TestFn1::indicator(0, f.p);
        g.factored = std::make_pair(f.factored->first, f.factored->second * u);
    }
    g.stabilizer = f.stabilizer;
    g.pflag = PFlag::units;
    g.p = f.p;
    return g;
}

}  // namespace psh
