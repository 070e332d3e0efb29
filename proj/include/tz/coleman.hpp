#pragma once

#include <map>
#include <string>
#include <vector>

#include "tz/regulator.hpp"
#include "tz/series.hpp"
#include "tz/shintani.hpp"

namespace tz {

using PSeries = TruncSeries<PadicElem>;

// ---------------------------------------------------------------------------
// g with g(0) = 0, integral, and log u = sum_t phi^t(g(zeta_{n-t} - 1)) / p^t

struct GSeries {
    LocalFieldPtr L;  // H_f(zeta_{p^{n+1}})
    PadicElem u;
    PSeries h;  // h(zeta_n - 1) = u, h(0) = 1
    PSeries g;
    int level = 0;
    // checks
    bool integral = false;
    bool vanishes_at_zero = false;
    bool coeffs_in_H = false;  // no pi-components in the coefficients
    bool reconstruction = false;
    Q min_valuation;
    long reconstruction_prec = 0;
    json to_json() const;
};

// alt != 0 adds alt * X * P(X) to the interpolating polynomial, P the minimal polynomial of pi
GSeries g_series(const PadicElem& u, int N, long alt = 0);

// value of a truncated series at zeta - 1 and its guaranteed precision
PadicElem eval_at(const PSeries& s, const PadicElem& x);
// apply the Frobenius power a to every coefficient
PSeries frobenius_coeffs(const PSeries& s, long a);
PSeries series_log(const PSeries& one_plus);

// V_r F(0) = p^-r sum_{zeta in mu_{p^r}} F(zeta - 1), from the truncated coefficients;
// precision is the smaller of the coefficient precision and the tail bound
PadicElem V_at_zero(const PSeries& F, int r, long* tail_bound = nullptr);

// ---------------------------------------------------------------------------
// a_h for k = Q, m = f' p^{n+1} inf with 1 < f' prime to p, K = k(m), u supported at one prime

struct AhReport {
    Cycle m;
    long p = 0;
    int n = 0;
    int N = 0;
    std::vector<PadicElem> series_path;     // indexed by G
    std::vector<PadicElem> regulator_path;  // coefficient of h in p^-(n+1) j(Phi_m(0)^*) lambda(u)
    long precision = 0;
    bool integral = false;
    bool agree = false;
    json to_json() const;
};

AhReport a_h_path(const Cycle& m, long p, const PadicElem& uhat, int N, long prec, long alt = 0, long s_shift = 0);

// ---------------------------------------------------------------------------
// Hilbert pairing values [a, u]_{1,n} by the Artin-Hasse formulas,
// for a = zeta^i prod_b (1 - zeta^b)^{k_b}

struct CycGen {
    long zeta = 0;
    std::map<long, long> one_minus;  // b -> k_b
    std::string str() const;
};

CycGen eta_one();                              // (1 - zeta_n)^-1
CycGen act(const CycGen& a, long b, long pn);  // sigma_b

// value in Z/p^{n+1}, u a principal unit of Q_p(zeta_n)-type field L (cyclotomic)
long hilbert_pair(const CycGen& a, const PadicElem& u);

// [a, u]^G = sum_sigma [a, sigma u] sigma^-1 for K = Q(mu_{p^{n+1}}) (one prime above p)
std::vector<long> hilbert_pair_G(const LocalSetup& S, const CycGen& a, const SemilocalUnit& u);

struct Conj44Report {
    long p = 0;
    int n = 0;
    struct Row {
        std::string unit;
        std::vector<long> s_bar, H;
        bool integral = false;
        bool pass = false;
    };
    std::vector<Row> rows;
    bool pass = false;
    json to_json() const;
};

// kappa^*(1) s_bar(u) = H_n((1 - zeta_n)^-1, u) for K = Q(mu_{p^{n+1}})
Conj44Report conj44_check(long p, int n, const std::vector<std::pair<std::string, SemilocalUnit>>& units,
                          const LocalSetup& S);
LocalSetup cyclotomic_setup(long p, int n, long prec);

}  // namespace tz
