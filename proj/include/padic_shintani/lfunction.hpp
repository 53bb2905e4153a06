#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padic_shintani/shintani.hpp"

namespace psh {

// sum_i chi(i) [i + M Z]
inline TestFn1 character_fn(const DirichletChar& chi) {
    std::vector<std::tuple<Coeff, Rational, Rational>> t;
    for (long a = 0; a < chi.modulus(); ++a) {
        Coeff v = chi.value(a);
        if (!v.is_zero()) t.push_back({v, Rational(a), Rational(chi.modulus())});
    }
    return TestFn1::from_terms(t);
}

struct LConfig {
    long p = 5;
    long prec = 8;   // target absolute p-adic digits
    long guard = 3;  // extra working digits
    int level = 3;   // starting Riemann level N
    int taylor = 6;  // Taylor degree d on each coset
    int max_level = 8;
    long working() const { return prec + guard; }
};

struct LValue {
    PadicNumber value;
    int level = 0;
    int taylor = 0;
    long stabilization = kInfiniteValuation;  // v_p(value at N - value at N-1)
    std::string inputs;
    std::vector<std::string> flags;

    long precision() const { return value.precision(); }
};

namespace detail {

inline WeightCharacter at_working(const WeightCharacter& s, long W) {
    if (s.k) return WeightCharacter::integer(*s.k, s.p, W);
    return s;
}

inline WeightCharacter shift(const WeightCharacter& s, long n, long W) {
    if (s.k) return WeightCharacter::integer(*s.k + n, s.p, W);
    return s.shifted(n);
}

inline WeightCharacter neg(const WeightCharacter& s, long W) {
    if (s.k) return WeightCharacter::integer(-*s.k, s.p, W);
    return s.negated();
}

inline bool is_trivial_character(const WeightCharacter& s) {
    if (s.k) return *s.k == 0;
    return s.i == 0 && s.w.is_zero();
}

// reruns fn at levels N, N+1, ... until two consecutive values agree to prec
template <class Fn>
LValue stabilize(Fn fn, const LConfig& cfg, const std::string& inputs) {
    int N = cfg.level;
    PadicNumber a = fn(N);
    for (;;) {
        PadicNumber b = fn(N + 1);
        long dv = difference_valuation(a, b);
        if (dv >= cfg.prec) {
            LValue r;
            r.value = b.with_precision(std::min(b.precision(), dv));
            r.level = N + 1;
            r.taylor = cfg.taylor;
            r.stabilization = dv;
            r.inputs = inputs;
            return r;
        }
        if (N + 1 >= cfg.max_level) throw Error("unbounded or under-resolved distribution");
        a = b;
        ++N;
    }
}

inline LValue exact_value(const PadicNumber& v, const std::string& inputs) {
    LValue r;
    r.value = v;
    r.inputs = inputs;
    return r;
}

// log_p of the principal unit part <c> = c / omega(c)
inline PadicNumber log_angle(long c, long p, long W) {
    PadicNumber z = PadicNumber::from_integer(p, c, W);
    return padic_log(z / teichmuller(z));
}

}  // namespace detail

// -int_{Z_p^x} z^{s-1} dxi_f by stabilized Riemann sums
inline LValue mellin(const TestFn1& f, const WeightCharacter& s, const LConfig& cfg) {
    // xi_f is unbounded on the units when f has Haar mass; each level would lose a digit
    if (!haar(f).is_zero()) throw HypothesisError("unbounded distribution: nonzero Haar mass needs c-regularization");
    long W = cfg.working();
    auto s1 = detail::shift(s, -1, W);
    return detail::stabilize(
        [&](int N) { return -unit_integral(f, s1, {cfg.p, N, cfg.taylor, cfg.prec, cfg.guard}); }, cfg,
        "mellin(" + f.str() + ", " + s.str() + ")");
}

inline long default_regularizer(long p) {
    for (long c = 2;; ++c)
        if (gcd(c, p) == 1) return c;
}

struct ZetaValue {
    LValue raw;                // mellin([Z] - c[cZ], s)
    PadicNumber unit;          // 1 - c^s
    bool invertible = false;
    std::optional<LValue> lp;  // raw / unit: the mellin transform of [Z]
};

inline ZetaValue zeta_p_regularized(long c, const WeightCharacter& s, const LConfig& cfg) {
    long p = cfg.p, W = cfg.working();
    if (c <= 1 || gcd(c, p) != 1) throw HypothesisError("regularizer c must be > 1 and prime to p");
    ZetaValue z;
    TestFn1 f = TestFn1::indicator(0, 1) - TestFn1::indicator(0, c, Coeff(c));
    z.raw = mellin(f, s, cfg);
    z.raw.inputs = "zeta_p_regularized(c=" + std::to_string(c) + ", " + s.str() + ")";
    z.unit = PadicNumber::from_integer(p, 1, W) - char_eval(detail::at_working(s, W), c, W);
    z.invertible = !z.unit.is_zero() && z.unit.valuation() < cfg.prec;
    if (z.invertible) {
        LValue l = z.raw;
        l.value = z.raw.value / z.unit;
        l.inputs = "deregularized " + z.raw.inputs;
        z.lp = l;
    } else {
        z.raw.flags.push_back("regularizing factor not invertible at working precision; raw value only");
    }
    return z;
}

// R with mellin([Z], s) ~ R / wt(s) near the trivial character, from the
// regularized value at 0: 1 - c^s ~ -wt(s) log<c>
inline PadicNumber trivial_residue(long c, const LConfig& cfg) {
    long W = cfg.working();
    auto z = zeta_p_regularized(c, WeightCharacter::integer(0, cfg.p, W), cfg);
    return -z.raw.value / detail::log_angle(c, cfg.p, W);
}

// mellin of f with its Haar part h[Z] routed through c-regularization
inline LValue mellin_regularized(const TestFn1& f, const WeightCharacter& s, const LConfig& cfg, long c) {
    long W = cfg.working();
    Coeff h = haar(f);
    if (h.is_zero()) return mellin(f, s, cfg);
    if (detail::is_trivial_character(s)) throw HypothesisError("pole at the trivial character");
    auto z = zeta_p_regularized(c, s, cfg);
    if (!z.lp) throw HypothesisError("regularizing factor 1 - c^s vanishes at working precision");
    LValue rest = mellin(f - h * TestFn1::indicator(0, 1), s, cfg);
    LValue r = rest;
    r.value = rest.value + embed_padic(h, cfg.p, W) * z.lp->value;
    r.level = std::max(rest.level, z.lp->level);
    r.inputs = "mellin(" + f.str() + ", " + s.str() + ") via c=" + std::to_string(c);
    r.flags.push_back("Haar part routed through c-regularization");
    return r;
}

// the Kubota-Leopoldt function attached to chi in the naming used by the
// Shintani factors: the mellin transform of sum chi(i)[i + MZ]
inline LValue kubota_leopoldt(const DirichletChar& chi, const WeightCharacter& s, const LConfig& cfg) {
    long p = cfg.p;
    if (chi.conductor() % p == 0) throw HypothesisError("conductor must be prime to p");
    if (chi.is_trivial()) {
        auto z = zeta_p_regularized(default_regularizer(p), s, cfg);
        if (!z.lp) throw HypothesisError("trivial character at a non-invertible regularizing factor");
        LValue r = *z.lp;
        r.flags.push_back("trivial character routed through c-regularization");
        return r;
    }
    if ((p - 1) % chi.order() != 0)
        throw HypothesisError("character not p-rational; choose p ≡ 1 mod " + std::to_string(chi.order()));
    LValue r = mellin(character_fn(chi), s, cfg);
    r.inputs = "kubota_leopoldt(chi mod " + std::to_string(chi.modulus()) + ", " + s.str() + ")";
    return r;
}

// ---------------------------------------------------------------------------
// payoff and the restricted moment path

inline long payoff_constant(int k) { return k == 0 ? 1 : k; }

// (-1)^{m-k} c_k binom(m, k+1) L(f1, m-k) L(f2, -m); at m = k with haar(f1) != 0
// the pole of L(f1, .) meets the zero of the binomial and the limit is
// c_k/(k+1) * R * haar(f1) * L(f2, -k)
inline LValue payoff(const TestFn1& f1, const TestFn1& f2, int k, int m, const LConfig& cfg, long c = 0) {
    long p = cfg.p, W = cfg.working();
    if (k < 0 || k % 2) throw HypothesisError("payoff needs an even weight k >= 0");
    if (c == 0) c = default_regularizer(p);
    std::string in = "payoff(k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")";
    if (m < k) return detail::exact_value(PadicNumber::zero(p, W), in);
    LValue L2 = mellin_regularized(f2, WeightCharacter::integer(-m, p, W), cfg, c);
    Coeff h = haar(f1);
    PadicNumber ck = PadicNumber::from_integer(p, payoff_constant(k), W);
    LValue r = L2;
    r.inputs = in;
    if (m == k) {
        if (h.is_zero()) {
            r.value = PadicNumber::zero(p, W);
            return r;
        }
        PadicNumber R = trivial_residue(c, cfg);
        r.value = ck * PadicNumber::from_rational(p, make_rational(1, k + 1), W) * R * embed_padic(h, p, W) * L2.value;
        r.flags.push_back("limit at the pole of the first factor");
        return r;
    }
    LValue L1 = mellin_regularized(f1, WeightCharacter::integer(m - k, p, W), cfg, c);
    Rational coef = Rational((m - k) % 2 ? -1 : 1) * Rational(binomial(m, k + 1));
    r.value = ck * PadicNumber::from_rational(p, coef, W) * L1.value * L2.value;
    r.level = std::max(L1.level, L2.level);
    return r;
}

// (1 - p^{m-k-1}/lambda) times the weight -k moment m of the symbol
inline LValue restricted_evil(const TestFn1& f1, const TestFn1& f2, int k, int m, const Cyclotomic& lambda, const LConfig& cfg) {
    long p = cfg.p, W = cfg.working();
    PadicNumber lam = embed_padic(lambda, p, W);
    PadicNumber factor = PadicNumber::from_integer(p, 1, W) - PadicNumber::from_rational(p, rpow(Rational(p), m - k - 1), W) / lam;
    LValue r = detail::stabilize(
        [&](int N) { return factor * evil_moment(f1, f2, k, m, {p, N, cfg.taylor, cfg.prec, cfg.guard}); }, cfg,
        "restricted_evil(k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
    return r;
}

struct TwoPath {
    int k, m;
    LValue payoff, restricted;
    PadicNumber scale;  // restricted = scale * payoff
    long difference_valuation;
};

// restricted moment = -(k+1) payoff for k > 0 and = payoff for k = 0
inline TwoPath two_path(const TestFn1& f1, const TestFn1& f2, int k, int m, const Cyclotomic& lambda, const LConfig& cfg) {
    long p = cfg.p, W = cfg.working();
    TwoPath t{k, m, payoff(f1, f2, k, m, cfg), restricted_evil(f1, f2, k, m, lambda, cfg),
              PadicNumber::from_integer(p, k == 0 ? 1 : -(k + 1), W), 0};
    t.difference_valuation = difference_valuation(t.restricted.value, t.scale * t.payoff.value);
    return t;
}

// ---------------------------------------------------------------------------
// closed forms: the auxiliary-prime case and the two-character case

struct EllCase {
    long ell;
};
struct CharCase {
    DirichletChar tau, psi;
};

struct EvilLp {
    std::string case_name;
    int k = 0;
    WeightCharacter s;
    LValue value;                     // moment product from the Shintani factors
    std::optional<LValue> closed;     // closed form, derived normalization
    long difference_valuation = 0;    // v(value - closed)
    std::optional<LValue> printed;    // closed form as printed (ell case) or the other shift (char case)
    long printed_difference_valuation = 0;
    std::string matched;              // char case: which shift convention matches
    std::vector<std::string> flags;
};

namespace detail {

inline LValue times(const LValue& a, const PadicNumber& x) {
    LValue r = a;
    r.value = a.value * x;
    return r;
}

// zeta_p(1 - s) = -mellin([Z], s), via c-regularization
inline LValue zeta_one_minus(long c, const WeightCharacter& s, const LConfig& cfg) {
    auto z = zeta_p_regularized(c, s, cfg);
    if (!z.lp) throw HypothesisError("regularizing factor 1 - c^s vanishes at working precision");
    return times(*z.lp, PadicNumber::from_integer(cfg.p, -1, cfg.working()));
}

}  // namespace detail

// ell case, k = 0: binom(wt s, 1) L([Z], s) L([Z] - ell[ell Z], -s) against
// wt(s)(1 - ell^{-s}) zeta_p(1+s) zeta_p(1-s); the printed (1 - ell^s) is
// reported alongside
inline EvilLp evil_lp(const EllCase& cs, int k, const WeightCharacter& s0, const LConfig& cfg, long c_moment = 2, long c_closed = 7) {
    long p = cfg.p, W = cfg.working(), ell = cs.ell;
    if (!is_prime(ell) || ell == p) throw HypothesisError("ell must be a prime different from p");
    if (k < 0 || k % 2) throw HypothesisError("k must be even and >= 0");
    if (gcd(c_moment, p) != 1 || gcd(c_closed, p) != 1) throw HypothesisError("regularizer c must be prime to p");
    WeightCharacter s = detail::at_working(s0, W);
    EvilLp out;
    out.case_name = "ell";
    out.k = k;
    out.s = s;
    if (s.sgn() != 1) out.flags.push_back("sign hypothesis violated; closed form not asserted for this sign");
    TestFn1 f1 = TestFn1::indicator(0, 1);
    TestFn1 f2 = TestFn1::indicator(0, 1) - TestFn1::indicator(0, ell, Coeff(ell));
    WeightCharacter sk = detail::shift(s, -k, W);
    LValue L2 = mellin(f2, detail::neg(s, W), cfg);
    if (detail::is_trivial_character(sk)) {
        // binom(wt s, k+1) L([Z], s - k) -> R/(k+1) at s = k
        PadicNumber R = trivial_residue(c_moment, cfg);
        out.value = detail::times(L2, R * PadicNumber::from_rational(p, make_rational(1, k + 1), W));
        out.flags.push_back("limit at the pole of zeta_p(1-s)");
    } else {
        LValue L1 = mellin_regularized(f1, sk, cfg, c_moment);
        out.value = detail::times(L2, binom_weight(s, k + 1) * L1.value);
        out.value.level = std::max(L1.level, L2.level);
    }
    out.value.inputs = "evil_lp(ell=" + std::to_string(ell) + ", k=" + std::to_string(k) + ", " + s.str() + ")";
    if (k != 0) return out;
    PadicNumber one = PadicNumber::from_integer(p, 1, W);
    if (detail::is_trivial_character(s)) {
        // wt(s) zeta_p(1-s) -> -R and (1 - ell^{-s}) zeta_p(1+s) -> R log<ell>;
        // with the printed (1 - ell^s) the second limit is -R log<ell>
        PadicNumber R = trivial_residue(c_closed, cfg);
        PadicNumber lg = detail::log_angle(ell, p, W);
        out.closed = detail::exact_value(-R * R * lg, "closed form (limit)");
        out.printed = detail::exact_value(R * R * lg, "printed closed form (limit)");
    } else {
        LValue zm = detail::zeta_one_minus(c_closed, s, cfg);                   // zeta_p(1 - s)
        LValue zp = detail::zeta_one_minus(c_closed, detail::neg(s, W), cfg);  // zeta_p(1 + s)
        PadicNumber base = s.w * zm.value * zp.value;
        PadicNumber em = one - char_eval(detail::neg(s, W), ell, W);
        PadicNumber ep = one - char_eval(s, ell, W);
        out.closed = detail::exact_value(base * em, "wt(s)(1-ell^{-s}) zeta_p(1+s) zeta_p(1-s)");
        out.printed = detail::exact_value(base * ep, "wt(s)(1-ell^s) zeta_p(1+s) zeta_p(1-s)");
        out.closed->level = out.printed->level = std::max(zm.level, zp.level);
    }
    out.difference_valuation = difference_valuation(out.value.value, out.closed->value);
    out.printed_difference_valuation = difference_valuation(out.value.value, out.printed->value);
    return out;
}

// character case: binom(wt s, k+1) L(f1, s-k) L(f2, -s) for the factors of
// f'_{tau,psi}, against the Kubota-Leopoldt closed forms with the proof shift
// (s-k, -s) and the statement shift (s-k-1, 1-s), both with L^{-s-1}
inline EvilLp evil_lp(const CharCase& cs, int k, const WeightCharacter& s0, const LConfig& cfg, long c_moment = 2) {
    long p = cfg.p, W = cfg.working();
    if (k < 0 || k % 2) throw HypothesisError("k must be even and >= 0");
    if (k > 0 && cs.psi.is_trivial()) throw HypothesisError("k > 0 needs a nontrivial psi");
    if (k == 0 && gcd(cs.tau.modulus(), cs.psi.modulus()) != 1) throw HypothesisError("k = 0 needs coprime moduli");
    TestFn2 f = make_f_tau_psi(cs.tau, cs.psi, p);
    const auto& [f1, f2] = *f.factored;
    long L = cs.tau.modulus();
    WeightCharacter s = detail::at_working(s0, W);
    EvilLp out;
    out.case_name = "char";
    out.k = k;
    out.s = s;
    Cyclotomic par = cs.psi.value(-1);
    if (s.sgn() != (par == Cyclotomic(1) ? 1 : -1)) out.flags.push_back("sign hypothesis violated; closed form not asserted for this sign");
    WeightCharacter sk = detail::shift(s, -k, W);
    LValue L2 = mellin_regularized(f2, detail::neg(s, W), cfg, c_moment);
    LValue L1 = mellin_regularized(f1, sk, cfg, c_moment);
    PadicNumber bin = binom_weight(s, k + 1);
    out.value = detail::times(L2, bin * L1.value);
    out.value.level = std::max(L1.level, L2.level);
    out.value.inputs = "evil_lp(char, k=" + std::to_string(k) + ", " + s.str() + ")";
    // L^{-s-1} from f2 = (psi function) | [L]^{*-1}
    PadicNumber Lpow = char_eval(detail::shift(s, 1, W), L, W).inverse();
    auto kl = [&](const DirichletChar& chi, const WeightCharacter& t) { return kubota_leopoldt(chi, t, cfg).value; };
    DirichletChar tinv = cs.tau.inverse();
    PadicNumber proof = Lpow * bin * kl(tinv, sk) * kl(cs.psi, detail::neg(s, W));
    out.closed = detail::exact_value(proof, "L^{-s-1} binom(wt s, k+1) L_p(tau^-1, s-k) L_p(psi, -s)");
    WeightCharacter sk1 = detail::shift(s, -k - 1, W);
    if (cs.tau.is_trivial() && detail::is_trivial_character(sk1)) {
        out.flags.push_back("statement shift sits on the pole of L_p(1, .)");
    } else {
        PadicNumber stmt = Lpow * bin * kl(tinv, sk1) * kl(cs.psi, detail::shift(detail::neg(s, W), 1, W));
        out.printed = detail::exact_value(stmt, "L^{-s-1} binom(wt s, k+1) L_p(tau^-1, s-k-1) L_p(psi, 1-s)");
        out.printed_difference_valuation = difference_valuation(out.value.value, out.printed->value);
    }
    out.difference_valuation = difference_valuation(out.value.value, out.closed->value);
    bool proof_ok = out.difference_valuation >= cfg.prec - cfg.guard;
    bool stmt_ok = out.printed && out.printed_difference_valuation >= cfg.prec - cfg.guard;
    out.matched = proof_ok && stmt_ok ? "both" : proof_ok ? "proof" : stmt_ok ? "statement" : "neither";
    return out;
}

}  // namespace psh
