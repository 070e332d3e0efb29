#pragma once

#include <functional>
#include <vector>

#include "tz/exact.hpp"
#include "tz/field.hpp"
#include "tz/series.hpp"

namespace tz {

using AddChar = std::function<CycNum(const KElem&)>;

struct Cone {
    std::vector<KElem> v;  // totally positive, Q-independent
};

struct ConeDecomp {
    KElem eps;       // generator of E (1 when d = 1)
    long index = 1;  // [E_m : E]
    std::vector<Cone> cones;
};

// {(b)} for d = 1, {(b), (b, b eps)} for d = 2
ConeDecomp cone_decomp(const BaseField& k, const KElem& eps, const KElem& b);
// fan through b, b u, ..., b u^steps for E = <u^steps>; with xi given, interior rays
// on which xi is trivial are moved inside their sector
ConeDecomp cone_fan(const BaseField& k, const KElem& u, long steps, const KElem& b,
                    const Lattice* L = nullptr, const std::function<CycNum(const KElem&)>* xi = nullptr);

// exact membership: is x in the E-translate eps^n C(v) for some n, and which
bool cone_contains(const Cone& c, const KElem& x);
int cover_count(const ConeDecomp& C, const KElem& x, int range = 6);

struct BoxPoint {
    KElem a;
    std::vector<Q> t;  // a = sum t_l w_l, t_l in (0,1]
};

// points of (shift + L) in P(w) = sum (0,1] w_l, for 1 <= len(w) <= d
std::vector<BoxPoint> box_points(const std::vector<KElem>& w, const Lattice& L,
                                 const KElem& shift = KElem());

// generator of Q_{>0} v cap L, multiplied up until xi is nontrivial on it
KElem edge_multiplier(const Lattice& L, const KElem& v, const AddChar& xi);

// sum over the box of xi(a) / prod (1 - xi(w_l))
CycNum twisted_zeta_zero_cone(const AddChar& xi, const Lattice& L, const Cone& v,
                              const std::vector<KElem>& w);
CycNum twisted_zeta_zero_cone(const AddChar& xi, const Lattice& L, const Cone& v);
CycNum twisted_zeta_zero(const AddChar& xi, const Lattice& L, const ConeDecomp& C);

// zero value of sum_{a in (shift + L) cap C(v)} N(a)^-s
Q bernoulli_zero_cone(const Lattice& L, const KElem& shift, const Cone& v);
Q bernoulli_zero(const Lattice& L, const KElem& shift, const ConeDecomp& C);

// totally positive b in L with xi nontrivial on Q b cap L (d = 2 translate)
KElem choose_translate(const Lattice& L, const AddChar& xi);

// ---------------------------------------------------------------------------
// generating series over k = Q: polynomials in T = 1 + X, index = exponent

using TPoly = std::vector<CycNum>;

TPoly tpoly_mul(const TPoly& a, const TPoly& b);
TPoly tpoly_V(const TPoly& a, long p, int r);        // keep exponents divisible by p^r
TPoly tpoly_inflate(const TPoly& a, long e);         // T -> T^e
TPoly tpoly_trim(TPoly a);
// sum b_k (1 + X)^k truncated at X^N
TruncSeries<CycNum> tpoly_series(const TPoly& a, int N);
// p^-r sum over zeta in mu_{p^r} of a(zeta T)
TPoly tpoly_root_average(const TPoly& a, long p, int r);

bool p_integral(const CycNum& x, long p);

using IntChar = std::function<CycNum(const Z&)>;

// additive character a -> e(t a / f) on Z
IntChar int_char(long t, long f);

struct FSeries {
    long p = 0;
    int m = 0;
    long q = 0;  // w = p^m q
    TPoly G, H;  // F = G / H
    TruncSeries<CycNum> F;
};

// w = p^m q with rho(w) != 1; q = 0 picks the least admissible q
FSeries F_series(const IntChar& rho, long p, int m, int N, long q = 0);

// V_r(G_m * (N(H_m) / H_m)) and G_{m+r}(T^{p^r})
std::pair<TPoly, TPoly> distribution_sides(const IntChar& rho, long p, int m, int r);
// the same relation compared as series in Y = T^{p^r} - 1 up to degree floor(N/p)
bool distribution_series_check(const IntChar& rho, long p, int m, int r, int N);

}  // namespace tz
