#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "padic_shintani/foundation.hpp"

namespace psh {

// Truncated power series in one variable X or two variables X, Y, truncated
// at total degree D.  Coefficients live in an exact field K.
template <class K = Rational>
class PSeries {
public:
    PSeries() : PSeries(1, 0) {}
    PSeries(int nvars, int D) : nvars_(nvars), D_(D), c_(size_for(nvars, D)) {
        if (nvars != 1 && nvars != 2) throw Error("PSeries supports one or two variables");
        if (D < 0) throw Error("negative truncation order");
    }

    static PSeries constant(int nvars, int D, const K& v) {
        PSeries s(nvars, D);
        s.c_[0] = v;
        return s;
    }
    static PSeries monomial(int nvars, int D, int i, int j, const K& v) {
        PSeries s(nvars, D);
        if (i + j <= D) s.at(i, j) = v;
        return s;
    }

    int nvars() const { return nvars_; }
    int trunc() const { return D_; }

    static std::size_t size_for(int nvars, int D) {
        return nvars == 1 ? static_cast<std::size_t>(D + 1) : static_cast<std::size_t>((D + 1) * (D + 2) / 2);
    }
    std::size_t index(int i, int j) const {
        if (nvars_ == 1) return static_cast<std::size_t>(i);
        int d = i + j;
        return static_cast<std::size_t>(d * (d + 1) / 2 + j);
    }

    // coefficient of X^i Y^j (j must be 0 for one variable)
    K& at(int i, int j = 0) { return c_[index(i, j)]; }
    const K& at(int i, int j = 0) const { return c_[index(i, j)]; }
    K get(int i, int j = 0) const {
        if (i < 0 || j < 0 || i + j > D_ || (nvars_ == 1 && j != 0)) return K(0);
        return c_[index(i, j)];
    }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const K& x) { return x == 0; });
    }

    PSeries truncated(int D) const {
        D = std::min(D, D_);
        PSeries r(nvars_, D);
        for (int d = 0; d <= D; ++d)
            for (int j = 0; j <= (nvars_ == 2 ? d : 0); ++j) r.at(d - j, j) = at(d - j, j);
        return r;
    }

    // view a one-variable series as a series in the second variable of two
    PSeries as_two_var(bool in_y) const {
        if (nvars_ == 2) return *this;
        PSeries r(2, D_);
        for (int i = 0; i <= D_; ++i) {
            if (in_y) r.at(0, i) = c_[i];
            else r.at(i, 0) = c_[i];
        }
        return r;
    }

    PSeries& operator+=(const PSeries& o) {
        check_vars(o);
        if (o.D_ < D_) *this = truncated(o.D_);
        for (int d = 0; d <= D_; ++d)
            for (int j = 0; j <= (nvars_ == 2 ? d : 0); ++j) at(d - j, j) += o.at(d - j, j);
        return *this;
    }
    PSeries& operator-=(const PSeries& o) {
        check_vars(o);
        if (o.D_ < D_) *this = truncated(o.D_);
        for (int d = 0; d <= D_; ++d)
            for (int j = 0; j <= (nvars_ == 2 ? d : 0); ++j) at(d - j, j) -= o.at(d - j, j);
        return *this;
    }
    PSeries& operator*=(const K& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend PSeries operator+(PSeries a, const PSeries& b) { return a += b; }
    friend PSeries operator-(PSeries a, const PSeries& b) { return a -= b; }
    friend PSeries operator*(PSeries a, const K& s) { return a *= s; }
    friend PSeries operator*(const K& s, PSeries a) { return a *= s; }
    PSeries operator-() const { return *this * K(-1); }

    friend PSeries operator*(const PSeries& a, const PSeries& b) {
        a.check_vars(b);
        int D = std::min(a.D_, b.D_);
        PSeries r(a.nvars_, D);
        if (a.nvars_ == 1) {
            for (int i = 0; i <= D; ++i) {
                if (a.c_[i] == 0) continue;
                for (int j = 0; i + j <= D; ++j)
                    if (b.c_[j] != 0) r.c_[i + j] += a.c_[i] * b.c_[j];
            }
            return r;
        }
        for (int d1 = 0; d1 <= D; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const K& x = a.at(d1 - j1, j1);
                if (x == 0) continue;
                for (int d2 = 0; d1 + d2 <= D; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2) {
                        const K& y = b.at(d2 - j2, j2);
                        if (y != 0) r.at(d1 - j1 + d2 - j2, j1 + j2) += x * y;
                    }
            }
        return r;
    }

    bool operator==(const PSeries& o) const { return nvars_ == o.nvars_ && D_ == o.D_ && c_ == o.c_; }

    // multiplicative inverse; needs a nonzero constant term
    PSeries inverse() const {
        if (c_[0] == 0) throw Error("series not invertible: zero constant term");
        PSeries r(nvars_, D_);
        K inv0 = K(1) / c_[0];
        r.c_[0] = inv0;
        // degree-by-degree: r_d = -inv0 * sum_{e<d} this_{d-e} r_e
        for (int d = 1; d <= D_; ++d)
            for (int j = 0; j <= (nvars_ == 2 ? d : 0); ++j) {
                int i = d - j;
                K acc = 0;
                for (int e = 0; e < d; ++e)
                    for (int jj = 0; jj <= (nvars_ == 2 ? e : 0); ++jj) {
                        int ii = e - jj;
                        if (ii > i || jj > j) continue;
                        const K& x = r.at(ii, jj);
                        if (x == 0) continue;
                        const K& y = at(i - ii, j - jj);
                        if (y != 0) acc += x * y;
                    }
                r.at(i, j) = -inv0 * acc;
            }
        return r;
    }

    // F(X,Y) -> F(aX+cY, bX+dY) for g = (a b; c d); one-variable: F(X) -> F(aX)
    PSeries substitute(const Mat2& g) const;

private:
    void check_vars(const PSeries& o) const {
        if (nvars_ != o.nvars_) throw Error("series variable count mismatch");
    }

    int nvars_;
    int D_;
    std::vector<K> c_;
};

using Series = PSeries<Rational>;

// e^{a1 X + a2 Y} truncated at total degree D.
inline Series exp_series(const std::vector<Rational>& a, int D) {
    int n = static_cast<int>(a.size());
    Series s(n, D);
    if (n == 1) {
        Rational t = 1;
        for (int i = 0; i <= D; ++i) {
            s.at(i) = t;
            t *= a[0] / Rational(i + 1);
        }
        return s;
    }
    std::vector<Rational> px(D + 1), py(D + 1);
    px[0] = py[0] = 1;
    for (int i = 1; i <= D; ++i) {
        px[i] = px[i - 1] * a[0] / Rational(i);
        py[i] = py[i - 1] * a[1] / Rational(i);
    }
    for (int d = 0; d <= D; ++d)
        for (int j = 0; j <= d; ++j) s.at(d - j, j) = px[d - j] * py[j];
    return s;
}

namespace detail {

// homogeneous polynomial of degree n in X, Y stored by Y-exponent
template <class K>
std::vector<K> hmul(const std::vector<K>& a, const std::vector<K>& b) {
    std::vector<K> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    return r;
}

}  // namespace detail

template <class K>
PSeries<K> PSeries<K>::substitute(const Mat2& g) const {
    if (nvars_ == 1) {
        PSeries r(1, D_);
        Rational t = 1;
        for (int i = 0; i <= D_; ++i) {
            r.c_[i] = c_[i] * K(t);
            t *= g.a;
        }
        return r;
    }
    // powers of the images of X and Y as homogeneous polynomials (indexed by Y power)
    std::vector<std::vector<K>> px(D_ + 1), py(D_ + 1);
    px[0] = py[0] = {K(1)};
    std::vector<K> lx{K(g.a), K(g.c)}, ly{K(g.b), K(g.d)};
    for (int i = 1; i <= D_; ++i) {
        px[i] = detail::hmul(px[i - 1], lx);
        py[i] = detail::hmul(py[i - 1], ly);
    }
    PSeries r(2, D_);
    for (int d = 0; d <= D_; ++d)
        for (int j = 0; j <= d; ++j) {
            const K& x = at(d - j, j);
            if (x == 0) continue;
            auto h = detail::hmul(px[d - j], py[j]);
            for (int t = 0; t <= d; ++t)
                if (h[t] != 0) r.at(d - t, t) += x * h[t];
        }
    return r;
}

// aX + bY with the first nonzero coefficient normalized to 1.
struct LinearForm {
    Rational a, b;

    // normalize (a,b); returns the scalar s with (a,b) = s * normalized
    static std::pair<LinearForm, Rational> make(const Rational& a, const Rational& b) {
        if (a == 0 && b == 0) throw Error("zero linear form");
        Rational s = a != 0 ? a : b;
        return {LinearForm{a / s, b / s}, s};
    }
    static LinearForm X() { return {1, 0}; }
    static LinearForm Y() { return {0, 1}; }

    bool is_monomial() const { return a == 0 || b == 0; }

    // l((X,Y)g) = a(g.a X + g.c Y) + b(g.b X + g.d Y)
    std::pair<LinearForm, Rational> transform(const Mat2& g) const {
        return make(a * g.a + b * g.b, a * g.c + b * g.d);
    }

    template <class K>
    PSeries<K> as_series(int nvars, int D) const {
        PSeries<K> s(nvars, D);
        if (D >= 1) {
            s.at(1, 0) = K(a);
            if (nvars == 2) s.at(0, 1) = K(b);
        }
        return s;
    }

    bool operator==(const LinearForm& o) const { return a == o.a && b == o.b; }
    bool operator<(const LinearForm& o) const {
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
    std::string str() const { return "(" + to_string(a) + "X+" + to_string(b) + "Y)"; }
};

// Exact division of a truncated series by a linear form, degree by degree.
// Returns the quotient (truncation D-1) and whether every graded remainder
// vanished.
template <class K>
std::pair<PSeries<K>, bool> divide_by_linear(const PSeries<K>& N, const LinearForm& l) {
    int D = N.trunc();
    if (D < 1) throw Error("insufficient truncation");
    PSeries<K> Q(N.nvars(), D - 1);
    bool exact = N.get(0, 0) == 0;
    if (N.nvars() == 1) {
        for (int i = 1; i <= D; ++i) Q.at(i - 1) = N.at(i) / K(l.a);
        return {Q, exact};
    }
    for (int d = 1; d <= D; ++d) {
        // (aX + bY) * sum_t q_t X^{d-1-t} Y^t ; coefficient of X^{d-s}Y^s is a q_s + b q_{s-1}
        std::vector<K> q(d);
        if (l.b != 0) {
            for (int s = d; s >= 1; --s) {
                K rhs = N.at(d - s, s);
                if (s < d) rhs -= K(l.a) * q[s];
                q[s - 1] = rhs / K(l.b);
            }
            if (N.at(d, 0) - K(l.a) * q[0] != 0) exact = false;
        } else {
            for (int s = 0; s < d; ++s) q[s] = N.at(d - s, s) / K(l.a);
            if (N.at(0, d) != 0) exact = false;
        }
        for (int t = 0; t < d; ++t) Q.at(d - 1 - t, t) = q[t];
    }
    return {Q, exact};
}

// numerator / product(denominators); the numerator absorbs normalization scalars.
template <class K = Rational>
class LaurentSeries {
public:
    LaurentSeries() = default;
    explicit LaurentSeries(PSeries<K> num, std::vector<LinearForm> den = {}) : num_(std::move(num)), den_(std::move(den)) {
        std::sort(den_.begin(), den_.end());
    }

    // numerator / (scale * l) with l normalized from (a, b)
    static LaurentSeries with_pole(PSeries<K> num, const Rational& a, const Rational& b) {
        auto [l, s] = LinearForm::make(a, b);
        num *= K(1 / s);
        return LaurentSeries(std::move(num), {l});
    }

    const PSeries<K>& numerator() const { return num_; }
    PSeries<K>& numerator() { return num_; }
    const std::vector<LinearForm>& denominators() const { return den_; }
    int nvars() const { return num_.nvars(); }
    int trunc() const { return num_.trunc(); }
    int pole_count() const { return static_cast<int>(den_.size()); }
    // graded pieces of degree < max_degree() are reliable
    int max_degree() const { return trunc() - pole_count(); }

    LaurentSeries& operator*=(const K& s) {
        num_ *= s;
        return *this;
    }

    friend LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) {
        // union of denominator multisets
        std::vector<LinearForm> u;
        std::set_union(f.den_.begin(), f.den_.end(), g.den_.begin(), g.den_.end(), std::back_inserter(u));
        auto lift = [&](const LaurentSeries& h) {
            std::vector<LinearForm> missing;
            std::set_difference(u.begin(), u.end(), h.den_.begin(), h.den_.end(), std::back_inserter(missing));
            PSeries<K> n = h.num_;
            for (const auto& l : missing) n = n * l.template as_series<K>(n.nvars(), n.trunc());
            return n;
        };
        // multiplying by a linear form raises degree; truncation of the lifted
        // numerator stays valid up to its own order
        PSeries<K> a = lift(f), b = lift(g);
        return LaurentSeries(a + b, u);
    }
    friend LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) {
        LaurentSeries h = g;
        h *= K(-1);
        return f + h;
    }
    friend LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) {
        std::vector<LinearForm> den = f.den_;
        den.insert(den.end(), g.den_.begin(), g.den_.end());
        LaurentSeries r(f.num_ * g.num_, den);
        r.cancel();
        return r;
    }

    // divide out denominator factors that divide the numerator exactly
    LaurentSeries& cancel() {
        for (std::size_t i = 0; i < den_.size();) {
            if (num_.trunc() < 1) break;
            auto [q, exact] = divide_by_linear(num_, den_[i]);
            if (exact) {
                num_ = q;
                den_.erase(den_.begin() + static_cast<long>(i));
            } else {
                ++i;
            }
        }
        return *this;
    }

    LaurentSeries substitute_gl2(const Mat2& g) const {
        if (g.det() == 0) throw Error("singular matrix");
        PSeries<K> n = num_.substitute(g);
        std::vector<LinearForm> den;
        for (const auto& l : den_) {
            auto [l2, s] = nvars() == 1 ? LinearForm::make(l.a * g.a, 0) : l.transform(g);
            n *= K(1 / s);
            den.push_back(l2);
        }
        return LaurentSeries(std::move(n), std::move(den));
    }

    // multiply by a linear form (a, b), cancelling a matching denominator
    LaurentSeries times_linear(const Rational& a, const Rational& b) const {
        auto [l, s] = LinearForm::make(a, b);
        LaurentSeries r = *this;
        r.num_ *= K(s);
        auto it = std::find(r.den_.begin(), r.den_.end(), l);
        if (it != r.den_.end()) {
            r.den_.erase(it);
            return r;
        }
        r.num_ = r.num_ * l.template as_series<K>(nvars(), trunc());
        return r;
    }

    // numerator / product of denominators when that is a power series; throws
    // if some factor fails to divide
    PSeries<K> to_power_series() const {
        PSeries<K> n = num_;
        for (const auto& l : den_) {
            auto [q, exact] = divide_by_linear(n, l);
            if (!exact) throw Error("pole does not cancel: " + l.str());
            n = q;
        }
        return n;
    }

    bool operator==(const LaurentSeries& o) const { return num_ == o.num_ && den_ == o.den_; }

private:
    PSeries<K> num_;
    std::vector<LinearForm> den_;
};

using Laurent = LaurentSeries<Rational>;

// 1/(1 - e^{mX}) in one variable: (1/X) times the inverse of (1 - e^{mX})/X.
// Numerator carries truncation D, so graded pieces up to degree D-1 are valid.
inline Laurent invert_one_minus_exp(const Rational& m, int D) {
    if (m == 0) throw Error("zero period");
    Series s(1, D);
    // (1 - e^{mX})/X = -sum_{n>=0} m^{n+1} X^n / (n+1)!
    Rational t = m;
    for (int n = 0; n <= D; ++n) {
        s.at(n) = -t;
        t *= m / Rational(n + 2);
    }
    return Laurent(s.inverse(), {LinearForm::X()});
}

// Degree-w graded piece of F as a map from exponents (possibly negative) to
// coefficients.  Monomial denominators shift exponents; other linear factors
// must divide the graded numerator exactly.
template <class K>
std::map<std::pair<int, int>, K> homogeneous_component(const LaurentSeries<K>& F, int w) {
    int r = F.pole_count();
    if (w < -r) throw Error("degree below the pole order");
    int d = w + r;
    if (d > F.trunc()) throw Error("insufficient truncation");
    const auto& N = F.numerator();
    // homogeneous numerator of degree d, as Y-exponent indexed coefficients
    std::vector<K> h(F.nvars() == 2 ? d + 1 : 1);
    if (F.nvars() == 1) h[0] = N.at(d);
    else
        for (int j = 0; j <= d; ++j) h[j] = N.at(d - j, j);
    int shift_x = 0, shift_y = 0;
    for (const auto& l : F.denominators()) {
        if (F.nvars() == 1 || l.b == 0) {
            ++shift_x;
            for (auto& x : h) x /= K(l.a);
        } else if (l.a == 0) {
            ++shift_y;
            for (auto& x : h) x /= K(l.b);
        } else {
            // exact polynomial division of h (degree n) by aX + bY
            int n = static_cast<int>(h.size()) - 1;
            if (n < 1) throw Error("non-polynomial graded component");
            std::vector<K> q(n);
            for (int s = n; s >= 1; --s) {
                K rhs = h[s];
                if (s < n) rhs -= K(l.a) * q[s];
                q[s - 1] = rhs / K(l.b);
            }
            if (h[0] - K(l.a) * q[0] != 0) throw Error("non-polynomial graded component");
            h = q;
        }
    }
    std::map<std::pair<int, int>, K> out;
    if (F.nvars() == 1) {
        if (h[0] != 0) out[{d - shift_x, 0}] = h[0];
        return out;
    }
    int n = static_cast<int>(h.size()) - 1;
    for (int j = 0; j <= n; ++j)
        if (h[j] != 0) out[{n - j - shift_x, j - shift_y}] = h[j];
    return out;
}

}  // namespace psh
