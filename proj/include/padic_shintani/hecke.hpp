#pragma once

#include <string>
#include <utility>
#include <vector>

#include "padic_shintani/testfn.hpp"

namespace psh {

// SL_2(Z) matrix congruent to diag(a^{-1}, a) mod N
inline Mat2 diamond_rep(long a, long N) {
    if (N < 1) throw Error("level must be positive");
    if (gcd(a, N) != 1) throw Error("diamond operator needs gcd(a, N) = 1");
    if (N == 1) return Mat2::identity();
    long A = inv_mod(a, N), D0 = mod(a, N);
    // with C = N and B = N u the determinant condition reads
    // k + A t = N u for D = D0 + t N, k = (A D0 - 1)/N
    long k = (A * D0 - 1) / N;
    long t = mod(-k * inv_mod(A, N), N);
    long u = (A * t + k) / N;
    long B = N * u, D = D0 + t * N;
    return Mat2{Rational(A), Rational(B), Rational(N), Rational(D)};
}

// An operator f -> sum_i f | (rep_i^*)^{-1}, rep^* the adjugate.  The
// matrices moved by the adjugate-inverse are rep_i / det(rep_i).
struct HeckeOp {
    std::string name;
    std::vector<Mat2> reps;
    // sign(det) twist consumed by the symbol transport; -1 only for iota
    int sign_twist = 1;

    // (1 a; 0 q), a = 0..q-1, and sigma_q (q 0; 0 1) with sigma_q a diamond
    // representative at the given level
    static HeckeOp T(long q, long level) {
        HeckeOp op{"T_" + std::to_string(q), {}, 1};
        for (long a = 0; a < q; ++a) op.reps.push_back(Mat2{1, Rational(a), 0, Rational(q)});
        op.reps.push_back(diamond_rep(q, level) * Mat2{Rational(q), 0, 0, 1});
        return op;
    }
    // adjugates of beta_i = (p i; 0 1), i = 1..p
    static HeckeOp U(long p) {
        HeckeOp op{"U_" + std::to_string(p), {}, 1};
        for (long i = 1; i <= p; ++i) op.reps.push_back(adjugate(beta(p, i)));
        return op;
    }
    static HeckeOp beta_op(long p, long i) {
        return HeckeOp{"beta_" + std::to_string(i), {adjugate(beta(p, i))}, 1};
    }
    static HeckeOp diamond(long a, long level) {
        return HeckeOp{"diamond_" + std::to_string(a), {diamond_rep(a, level)}, 1};
    }
    static HeckeOp iota() { return HeckeOp{"iota", {Mat2{1, 0, 0, -1}}, -1}; }
    static HeckeOp scalar(const Rational& q) { return HeckeOp{"scalar_" + to_string(q), {Mat2::scalar(q)}, 1}; }

    static Mat2 beta(long p, long i) { return Mat2{Rational(p), Rational(i), 0, 1}; }
};

// the matrix a representative moves test functions by
inline Mat2 adj_inv(const Mat2& rep) { return adjugate(rep).inverse(); }

inline TestFn2 apply_adj_inv(const HeckeOp& op, const TestFn2& f) {
    TestFn2 acc;
    for (const auto& r : op.reps) acc = acc + act_gl2(f, adj_inv(r));
    return acc;
}

// level at which diamond representatives must be congruent: the recorded
// stabilizer level, times p when the p-component is the units flag
inline long hecke_level(const TestFn2& f) {
    long N = f.stabilizer.level;
    if (f.pflag == PFlag::units) N *= f.p;
    return N;
}

struct EigenResult {
    std::string op;
    bool pass;
};

inline std::vector<EigenResult> verify_eigen(const TestFn2& f, const std::vector<std::pair<HeckeOp, TestFn2>>& spec) {
    std::vector<EigenResult> out;
    for (const auto& [op, want] : spec) out.push_back({op.name, apply_adj_inv(op, f) == want});
    return out;
}

// f'_l: T_q gives f + q f|[q]^{*-1}; iota fixes it
inline std::vector<std::pair<HeckeOp, TestFn2>> eigen_spec_f_ell(const TestFn2& f, const std::vector<long>& qs) {
    std::vector<std::pair<HeckeOp, TestFn2>> spec;
    for (long q : qs) {
        TestFn2 fq = apply_adj_inv(HeckeOp::scalar(q), f);
        spec.push_back({HeckeOp::T(q, hecke_level(f)), f + Coeff(q) * fq});
    }
    spec.push_back({HeckeOp::iota(), f});
    return spec;
}

// f'_{tau,psi}: T_q gives tau(q) f + q psi(q) f|[q]^{*-1}, diamond a gives
// tau(a) psi(a) f, iota gives tau(-1) f and each beta_i acts by tau(p) away from p
inline std::vector<std::pair<HeckeOp, TestFn2>> eigen_spec_f_tau_psi(const TestFn2& f, const DirichletChar& tau,
                                                                     const DirichletChar& psi,
                                                                     const std::vector<long>& qs,
                                                                     const std::vector<long>& as) {
    std::vector<std::pair<HeckeOp, TestFn2>> spec;
    long N = hecke_level(f);
    for (long q : qs) {
        TestFn2 fq = apply_adj_inv(HeckeOp::scalar(q), f);
        spec.push_back({HeckeOp::T(q, N), tau.value(q) * f + (Coeff(q) * psi.value(q)) * fq});
    }
    for (long a : as) spec.push_back({HeckeOp::diamond(a, N), (tau.value(a) * psi.value(a)) * f});
    spec.push_back({HeckeOp::iota(), tau.value(-1) * f});
    // beta_i moves the p-component too; only the part away from p is an eigenvector
    TestFn2 z2 = TestFn2::indicator({0, 0}, Lattice2::rect(1, 1));
    for (long i = 1; i <= f.p; ++i) {
        auto op = HeckeOp::beta_op(f.p, i);
        spec.push_back({op, tau.value(f.p) * (f * apply_adj_inv(op, z2))});
    }
    return spec;
}

}  // namespace psh
