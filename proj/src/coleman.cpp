#include "tz/coleman.hpp"

#include <algorithm>
#include <cmath>

#include "tz/arith.hpp"

namespace tz {

namespace {

long ipow(long p, long n)
{
    long r = 1;
    for (long i = 0; i < n; ++i) r *= p;
    return r;
}

void require_cyclotomic(const LocalFieldPtr& L)
{
    if (!L || L->kind != LocalField::Cyclotomic)
        throw std::domain_error("needs a field H_f(zeta_{p^{n+1}})");
}

PadicElem zeta_of(const LocalFieldPtr& L) { return PadicElem(L, 1) + PadicElem::pi(L); }

PSeries make_series(const LocalFieldPtr& L, int N) { return PSeries(1, N, PadicElem::zero(L, L->cap)); }

}  // namespace

PSeries frobenius_coeffs(const PSeries& s, long a)
{
    if (a == 0) return s;
    PSeries r = s;
    for (int k = 0; k <= s.cap(); ++k)
        if (!s.at(k).exact_zero()) r.at(k) = apply_aut(s.at(k), LocalAut{a, 1});
    return r;
}

PSeries series_log(const PSeries& q)
{
    const LocalFieldPtr& L = q.zero().field();
    PSeries Y = q;
    Y.at(0) = PadicElem::zero(L, L->cap);
    if (!(q.at(0) - PadicElem(L, 1)).is_zero()) throw std::domain_error("series log needs constant term 1");
    PSeries r = make_series(L, q.cap()), pw = Y;
    for (int m = 1; m <= q.cap(); ++m) {
        PadicElem c(L, Q(m % 2 ? 1 : -1, m));
        r += pw.scaled(c);
        pw = pw * Y;
    }
    return r;
}

PadicElem eval_at(const PSeries& s, const PadicElem& x)
{
    const LocalFieldPtr& L = x.field();
    PadicElem r = PadicElem::zero(L, L->cap);
    for (int k = s.cap(); k >= 0; --k) r = r * x + s.at(k);
    if (x.is_zero()) return r;
    Q tail = Q(s.cap() + 1) * x.valuation();
    Z fl;
    mpz_fdiv_q(fl.get_mpz_t(), tail.get_num_mpz_t(), tail.get_den_mpz_t());
    return r.with_prec(fl.get_si());
}

PadicElem V_at_zero(const PSeries& F, int r, long* tail_bound)
{
    const LocalFieldPtr& L = F.zero().field();
    long p = L->p, pr = ipow(p, r);
    int N = F.cap();
    PadicElem s = PadicElem::zero(L, L->cap);
    for (int k = 0; k <= N; ++k) {
        Z w = 0;
        for (int j = 0; j <= k; j += (int)pr) w += ((k - j) % 2 ? -1 : 1) * binom(k, j);
        if (w != 0) s = s + mul_int(F.at(k), w);
    }
    long ph = (p - 1) * ipow(p, r - 1);
    long bound = (N + 1 + ph - 1) / ph - r;
    if (tail_bound) *tail_bound = bound;
    return s.with_prec(bound);
}

// ---------------------------------------------------------------------------

GSeries g_series(const PadicElem& u, int N, long alt)
{
    const LocalFieldPtr& L = u.field();
    require_cyclotomic(L);
    long p = L->p;
    int e = L->e, f = L->f;
    if (N <= e) throw std::invalid_argument("series cap must exceed the ramification index");
    if (!(u - PadicElem(L, 1)).is_zero() && (u - PadicElem(L, 1)).valuation() <= 0)
        throw std::domain_error("g_series needs a principal unit");
    GSeries G;
    G.L = L;
    G.u = u;
    G.level = L->level;

    // u = sum_i C_i pi^i with C_i in O_H
    std::vector<PadicElem> C(e, PadicElem::zero(L, L->cap));
    PadicElem y = f > 1 ? PadicElem::y(L) : PadicElem(L, 1);
    for (int i = 0; i < e; ++i) {
        PadicElem yj(L, 1);
        for (int j = 0; j < f; ++j) {
            C[i] = C[i] + u.coord(i, j) * yj;
            yj = yj * y;
        }
    }
    // C_0 = 1 + p t and p = -(pi^e + sum_{0<i<e} E_i pi^i)
    PadicElem t = (C[0] - PadicElem(L, 1)) * PadicElem(L, Q(1, p));
    PSeries h = make_series(L, N);
    h.at(0) = PadicElem(L, 1);
    for (int i = 1; i < e; ++i) h.at(i) = C[i] - t * PadicElem(L, Q(L->E[i]));
    h.at(e) = h.at(e) - t;
    if (alt != 0) {
        PadicElem a(L, alt);
        for (int i = 0; i < e; ++i) h.at(i + 1) = h.at(i + 1) + a * PadicElem(L, Q(L->E[i]));
        if (e + 1 <= N) h.at(e + 1) = h.at(e + 1) + a;
    }
    G.h = h;

    PSeries hp = h;
    for (long i = 1; i < p; ++i) hp = hp * h;
    PSeries den = frobenius_coeffs(h, 1).substitute_power({p});
    PSeries q = hp * den.inverse();
    G.g = series_log(q).scaled(PadicElem(L, Q(1, p)));

    // checks
    G.vanishes_at_zero = G.g.at(0).is_zero();
    G.integral = true;
    G.coeffs_in_H = true;
    bool any = false;
    for (int k = 0; k <= N; ++k) {
        const PadicElem& c = G.g.at(k);
        if (c.is_zero()) continue;
        if (!any || c.valuation() < G.min_valuation) G.min_valuation = c.valuation();
        any = true;
        if (c.valuation() < 0) G.integral = false;
        for (int i = 1; i < e; ++i)
            for (int j = 0; j < f; ++j)
                if (!c.coord(i, j).is_zero()) G.coeffs_in_H = false;
    }
    if (!any) G.min_valuation = 0;

    int n = L->level;
    PadicElem z = zeta_of(L), total = PadicElem::zero(L, L->cap);
    for (int t2 = 0; t2 <= n; ++t2) {
        PadicElem zt = z.pow(ipow(p, t2));
        PadicElem term = apply_aut(eval_at(G.g, zt - PadicElem(L, 1)), LocalAut{t2, 1});
        total = total + term * PadicElem(L, Q(1, ipow(p, t2)));
    }
    PadicElem diff = total - plog(u);
    G.reconstruction = diff.is_zero();
    G.reconstruction_prec = diff.absprec();
    return G;
}

json GSeries::to_json() const
{
    return json{{"tower", L->tower_json()},
                {"p", L->p},
                {"level", level},
                {"u", u.to_json()},
                {"g", g.to_json([](const PadicElem& x) { return x.to_json(); })},
                {"checks",
                 {{"integral", integral},
                  {"vanishes_at_zero", vanishes_at_zero},
                  {"coefficients_in_H", coeffs_in_H},
                  {"reconstruction", reconstruction},
                  {"reconstruction_prec", reconstruction_prec},
                  {"min_valuation", q_str(min_valuation)}}}};
}

// ---------------------------------------------------------------------------

AhReport a_h_path(const Cycle& m, long p, const PadicElem& uhat, int N, long prec, long alt, long s_shift)
{
    if (m.k.quadratic()) throw std::domain_error("a_h path: k = Q only; use the regulator path");
    long f = Z(m.f.rational_generator().get_num()).get_si();
    long fp = f, r = 0;
    while (fp % p == 0) {
        fp /= p;
        ++r;
    }
    if (r == 0 || fp == 1) throw std::domain_error("a_h path needs m = f' p^{n+1} inf with f' > 1 prime to p");
    AhReport rep;
    rep.m = m;
    rep.p = p;
    rep.n = (int)r - 1;
    rep.N = N;
    long pn = ipow(p, r);

    auto R = ray_data(m);
    Extension K = full_extension(R);
    LocalSetup S = local_setup(K, p, prec);
    if (uhat.field() != S.L) throw std::invalid_argument("unit must lie in " + S.L->describe());
    long G = K.G->size();

    // regulator path
    SemilocalUnit u;
    u.comp.push_back(std::vector<PadicElem>(S.places[0].reps.size(), PadicElem(S.L, 1)));
    u.comp[0][0] = uhat;
    PGroupRing lam = lambda_ip(S, u, 0);
    PGroupRing phis(K.G);
    GroupRingElem ps = phi_zero(m).involution();
    for (auto& [g, v] : ps.terms()) {
        long h = K.q.apply_index(g);
        phis.c[h] = phis.c[h] + embed_cyc(S.L, v);
    }
    PGroupRing reg = (phis * lam).scaled(PadicElem(S.L, Q(1, pn)));
    rep.regulator_path = reg.c;

    // series path
    GSeries gs = g_series(uhat, N, alt);
    long x = invmod(pn % fp, fp);
    long y = (1 - x * pn) / fp;
    long f1 = mult_order(p % fp, fp);
    std::vector<PSeries> gl;
    for (long l = 0; l < f1; ++l) gl.push_back(frobenius_coeffs(gs.g, l));
    rep.series_path.resize(G);
    rep.precision = prec;
    for (long h = 0; h < G; ++h) {
        long a = S.b_of[h];
        IntChar rho = int_char(mod(a * x, fp), fp);
        long s = mod(a * y, pn) + s_shift * pn;
        PSeries F = make_series(S.L, N);
        for (long l = 0; l < f1; ++l) {
            FSeries Fl = F_series(rho, p, (int)l, N);
            TruncSeries<CycNum> sub = Fl.F.substitute_power({s});
            PSeries P = make_series(S.L, N);
            for (int k = 0; k <= N; ++k) P.at(k) = embed_cyc(S.L, sub.at(k));
            F += P * gl[l];
        }
        rep.series_path[h] = V_at_zero(F, (int)r);
    }

    rep.integral = true;
    rep.agree = true;
    for (long h = 0; h < G; ++h) {
        const PadicElem& a = rep.series_path[h];
        const PadicElem& b = rep.regulator_path[h];
        rep.precision = std::min({rep.precision, a.absprec(), b.exact_zero() ? prec : b.absprec()});
        if (!a.in_Qp() || a.val_or_prec() < 0) rep.integral = false;
        bool eq = b.exact_zero() ? a.is_zero() : a.equals(b);
        if (!eq) rep.agree = false;
    }
    return rep;
}

json AhReport::to_json() const
{
    json rows = json::array();
    for (size_t h = 0; h < series_path.size(); ++h)
        rows.push_back({{"h", h},
                        {"series_path", series_path[h].to_json()},
                        {"regulator_path", regulator_path[h].exact_zero() ? json(nullptr) : regulator_path[h].to_json()}});
    return json{{"cycle", m.str()}, {"p", p},          {"n", n},           {"series_cap", N},
                {"values", rows},   {"precision", precision}, {"integral", integral}, {"agree", agree}};
}

// ---------------------------------------------------------------------------

std::string CycGen::str() const
{
    std::string s = "zeta^" + std::to_string(zeta);
    for (auto& [b, k] : one_minus) s += " (1-zeta^" + std::to_string(b) + ")^" + std::to_string(k);
    return s;
}

CycGen eta_one()
{
    CycGen a;
    a.one_minus[1] = -1;
    return a;
}

CycGen act(const CycGen& a, long b, long pn)
{
    CycGen r;
    r.zeta = mod(a.zeta * b, pn);
    for (auto& [c, k] : a.one_minus) r.one_minus[mod(c * b, pn)] += k;
    return r;
}

long hilbert_pair(const CycGen& a, const PadicElem& u)
{
    const LocalFieldPtr& L = u.field();
    require_cyclotomic(L);
    long p = L->p, r = L->level + 1, pn = ipow(p, r);
    PadicElem lg = plog(u), one(L, 1), z = zeta_of(L);
    PadicElem v = mul_int(local_trace(lg), a.zeta);
    for (auto& [b, k] : a.one_minus) {
        if (b % pn == 0) throw std::domain_error("1 - zeta^b vanishes");
        PadicElem zb = z.pow(mod(b, pn));
        v = v - mul_int(local_trace(zb / (one - zb) * lg), Z(k) * b);
    }
    v = v * PadicElem(L, Q(1, pn));
    if (!v.in_Qp()) throw std::logic_error("pairing value not in Q_p");
    if (v.val_or_prec() < 0) throw std::domain_error("pairing value not integral");
    if (v.absprec() < r) throw std::domain_error("precision exhausted in pairing");
    return Z(v.residue_mod(r) % pn).get_si();
}

std::vector<long> hilbert_pair_G(const LocalSetup& S, const CycGen& a, const SemilocalUnit& u)
{
    require_cyclotomic(S.L);
    if (S.k.quadratic() || S.places[0].reps.size() != 1 || S.f != ipow(S.p, S.L->level + 1))
        throw std::domain_error("[.,.]^G implemented for K = Q(mu_{p^{n+1}}) only");
    const FinAbGroup& G = *S.K.G;
    std::vector<long> res(G.size());
    for (long g = 0; g < G.size(); ++g)
        res[G.index(G.neg(G.elem(g)))] = hilbert_pair(a, semilocal_act(S, g, u).comp[0][0]);
    return res;
}

LocalSetup cyclotomic_setup(long p, int n, long prec)
{
    long pn = ipow(p, n + 1);
    Cycle m = parse_cycle(BaseField{0}, std::to_string(pn) + "*inf");
    return local_setup(full_extension(ray_data(m)), p, prec);
}

Conj44Report conj44_check(long p, int n, const std::vector<std::pair<std::string, SemilocalUnit>>& units,
                          const LocalSetup& S)
{
    Conj44Report rep;
    rep.p = p;
    rep.n = n;
    rep.pass = true;
    long pn = ipow(p, n + 1);
    for (auto& [label, u] : units) {
        Conj44Report::Row row;
        row.unit = label;
        IntegralityReport ir = integrality_check(S, {Theta{{u}, label}});
        row.integral = ir.integral;
        if (!row.integral || ir.precision < n + 1) {
            rep.pass = false;
            rep.rows.push_back(row);
            continue;
        }
        for (auto& c : ir.s[0].c) row.s_bar.push_back(Z(c.residue_mod(n + 1) % pn).get_si());
        // kappa^*(1) = 1
        row.H = hilbert_pair_G(S, eta_one(), u);
        row.pass = row.s_bar == row.H;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

json Conj44Report::to_json() const
{
    json out = json::array();
    for (auto& r : rows)
        out.push_back({{"unit", r.unit}, {"s_bar", r.s_bar}, {"H", r.H}, {"integral", r.integral}, {"pass", r.pass}});
    return json{{"p", p}, {"n", n}, {"generator", eta_one().str()}, {"rows", out}, {"pass", pass}};
}

}  // namespace tz
