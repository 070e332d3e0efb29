#include "tz/regulator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "tz/arith.hpp"

namespace tz {

// ---------------------------------------------------------------------------
// group ring

PGroupRing PGroupRing::operator+(const PGroupRing& o) const
{
    PGroupRing r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] + o.c[i];
    return r;
}

PGroupRing PGroupRing::operator-(const PGroupRing& o) const
{
    PGroupRing r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] - o.c[i];
    return r;
}

PGroupRing PGroupRing::operator*(const PGroupRing& o) const
{
    PGroupRing r(G);
    for (long i = 0; i < G->size(); ++i) {
        if (c[i].exact_zero()) continue;
        Elem ei = G->elem(i);
        for (long j = 0; j < G->size(); ++j) {
            if (o.c[j].exact_zero()) continue;
            long k = G->index(G->add(ei, G->elem(j)));
            r.c[k] = r.c[k] + c[i] * o.c[j];
        }
    }
    return r;
}

PGroupRing PGroupRing::shifted(long g) const
{
    PGroupRing r(G);
    for (long i = 0; i < G->size(); ++i) r.c[G->index(G->add(G->elem(i), G->elem(g)))] = c[i];
    return r;
}

PGroupRing PGroupRing::scaled(const PadicElem& s) const
{
    PGroupRing r = *this;
    for (auto& x : r.c) x = x * s;
    return r;
}

long PGroupRing::precision() const
{
    long m = std::numeric_limits<long>::max();
    for (auto& x : c) m = std::min(m, x.absprec());
    return m;
}

Q PGroupRing::min_valuation() const
{
    bool any = false;
    Q m;
    for (auto& x : c) {
        if (x.is_zero()) continue;
        if (!any || x.valuation() < m) m = x.valuation();
        any = true;
    }
    return any ? m : Q(precision());
}

bool PGroupRing::is_zero() const
{
    return std::all_of(c.begin(), c.end(), [](const PadicElem& x) { return x.is_zero(); });
}

json PGroupRing::to_json() const
{
    json terms = json::array();
    for (long i = 0; i < G->size(); ++i) {
        if (c[i].exact_zero()) continue;
        terms.push_back({{"elem", G->elem(i)}, {"coeff", c[i].to_json()}});
    }
    return json{{"orders", G->orders()}, {"terms", terms}};
}

bool is_group_ring_unit(const PGroupRing& x)
{
    const FinAbGroup& G = *x.G;
    long n = G.size();
    std::vector<std::vector<PadicElem>> A(n, std::vector<PadicElem>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) A[G.index(G.add(G.elem(i), G.elem(j)))][j] = x.c[i];
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r) {
            if (A[r][col].exact_zero() || A[r][col].is_zero()) continue;
            if (piv < 0 || A[r][col].valuation() < A[piv][col].valuation()) piv = r;
        }
        if (piv < 0) return false;
        std::swap(A[piv], A[col]);
        PadicElem inv = A[col][col].inv();
        for (long r = col + 1; r < n; ++r) {
            if (A[r][col].exact_zero()) continue;
            PadicElem t = A[r][col] * inv;
            for (long c = col; c < n; ++c) A[r][c] = A[r][c] - t * A[col][c];
        }
    }
    return true;
}

json SemilocalUnit::to_json() const
{
    json j = json::array();
    for (auto& place : comp) {
        json a = json::array();
        for (auto& x : place) a.push_back(x.to_json());
        j.push_back(a);
    }
    return j;
}

// ---------------------------------------------------------------------------
// local data

namespace {

LocalAut identity_aut(const LocalFieldPtr& L) { return {0, L->kind == LocalField::Tame ? 0 : 1}; }

void fill_reps(const FinAbGroup& G, LocalSetup::Place& P)
{
    std::sort(P.D.begin(), P.D.end());
    std::vector<bool> covered(G.size(), false);
    for (long g = 0; g < G.size(); ++g) {
        if (covered[g]) continue;
        P.reps.push_back(g);
        for (long d : P.D) covered[G.index(G.add(G.elem(g), G.elem(d)))] = true;
    }
}

long legendre(long a, long p)
{
    a = mod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

long mod_q(const Q& x, long l)
{
    long n = Z(x.get_num() % l).get_si(), d = Z(x.get_den() % l).get_si();
    return mod(n * invmod(mod(d, l), l), l);
}

bool is_square_Q(const Q& x, Q& r)
{
    if (x < 0) return false;
    Z n = x.get_num(), d = x.get_den();
    Z sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    r = Q(sn, sd);
    return true;
}

// x is a square in k
bool is_square_k(const KElem& x)
{
    if (x.b == 0) {
        Q r;
        if (is_square_Q(x.a, r)) return true;
        // a = D t^2
        return x.D != 0 && is_square_Q(x.a / x.D, r);
    }
    Q n;
    if (!is_square_Q(x.norm(), n)) return false;
    for (int s : {1, -1}) {
        Q u2 = (x.a + s * n) / 2, u;
        if (u2 == 0 || !is_square_Q(u2, u)) continue;
        Q v = x.b / (2 * u);
        if (u * u + x.D * v * v == x.a) return true;
    }
    return false;
}

Z zpow_(long p, long n)
{
    Z r;
    mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)p, (unsigned long)n);
    return r;
}

void setup_rational(LocalSetup& S)
{
    const Extension& K = S.K;
    long f = Z(S.K.M->m.f.rational_generator().get_num()).get_si();
    S.f = f;
    long p = S.p, a = 0, fp = f;
    while (fp % p == 0) {
        fp /= p;
        ++a;
    }
    long f0 = fp == 1 ? 1 : mult_order(p % fp, fp);
    S.L = a >= 1 ? make_cyclotomic(p, (int)f0, (int)a - 1, S.prec) : make_unramified(p, (int)f0, S.prec);
    long pa = 1;
    for (long i = 0; i < a; ++i) pa *= p;
    std::map<long, long> dlog;
    long t = 1 % fp;
    for (long j = 0; j < f0; ++j) {
        dlog[t] = j;
        t = (t * p) % std::max(fp, 1L);
    }
    const FinAbGroup& G = *K.G;
    S.b_of.assign(G.size(), 0);
    S.places.resize(1);
    auto& P = S.places[0];
    for (long b = 1; b <= f; ++b) {
        if (std::gcd(b, f) != 1) continue;
        long g = K.q.apply_index(K.M->class_of(KElem(b, 0)));
        if (!S.b_of[g]) S.b_of[g] = b;
        auto it = dlog.find(fp == 1 ? 0 : b % fp);
        if (it == dlog.end()) continue;
        LocalAut s{it->second, a >= 1 ? b % pa : 1};
        if (!P.hat.count(g)) {
            P.hat[g] = s;
            P.D.push_back(g);
        }
        if (g == 0) P.fix.push_back(s);
    }
    if (S.b_of.empty() || !S.b_of[0]) S.b_of[0] = 1;
    fill_reps(G, P);
    long fK = Z(S.conductor.f.rational_generator().get_num()).get_si();
    P.ramified = fK % p == 0;
}

void setup_quadratic(LocalSetup& S)
{
    const Extension& K = S.K;
    if (K.G->size() != 2)
        throw std::domain_error("real quadratic k: only quadratic extensions K/k are supported");
    long p = S.p;
    S.emb = split_embedding(S.k, p, S.prec);
    if (S.opt.swap_roots) {
        S.emb.root = zpow_(p, S.prec) - S.emb.root;
        S.emb.residue = p - S.emb.residue;
    }
    S.gamma = kummer_generator(K);

    enum Kind { Split, Inert, Ram };
    std::vector<Kind> kind(2);
    std::vector<PadicElem> dq(2);
    int first_ram = -1;
    for (int i = 0; i < 2; ++i) {
        dq[i] = embed_k(S.Qp, S.emb, S.gamma, i + 1);
        long v = Z(dq[i].valuation().get_num()).get_si();
        if (v % 2) {
            kind[i] = Ram;
            if (first_ram < 0) first_ram = i;
        } else {
            PadicElem w = dq[i] * PadicElem(S.Qp, Q(1, zpow_(p, v)));
            kind[i] = legendre(w.residue_mod(1).get_si(), p) == 1 ? Split : Inert;
        }
    }
    // roots of unity needed by Phi
    long N = 1;
    for (auto& [g, v] : S.phi.terms()) N = std::lcm(N, v.conductor());
    long a = 0, Np = N;
    while (Np % p == 0) {
        Np /= p;
        ++a;
    }
    long F = Np == 1 ? 1 : mult_order(p % Np, Np);
    bool inert = kind[0] == Inert || kind[1] == Inert;
    if (inert) F = std::lcm(F, 2L);
    if (a >= 1 && first_ram >= 0) F = std::lcm(F, 2L);
    if (first_ram >= 0 && kind[0] == Ram && kind[1] == Ram) F = std::lcm(F, 2L);
    if (a >= 1) {
        S.L = make_cyclotomic(p, (int)F, (int)a - 1, S.prec);
    } else if (first_ram >= 0) {
        PadicElem u = dq[first_ram] * PadicElem(S.Qp, Q(1, p));
        S.L = make_tame(p, (int)F, 2, u.residue_mod(S.prec - 1), S.prec);
    } else {
        S.L = make_unramified(p, (int)F, S.prec);
    }
    auto auts = galois_group(S.L);
    S.root.resize(2);
    S.places.resize(2);
    for (int i = 0; i < 2; ++i) {
        PadicElem di = embed_k(S.L, S.emb, S.gamma, i + 1);
        if (i == first_ram && S.L->kind == LocalField::Tame) S.root[i] = PadicElem::pi(S.L);
        else S.root[i] = padic_sqrt(di);
        if (!(S.root[i] * S.root[i]).equals(di)) throw std::logic_error("square root of gamma failed");
        auto& P = S.places[i];
        P.ramified = kind[i] == Ram;
        P.D = {0};
        P.hat[0] = identity_aut(S.L);
        for (auto& s : auts) {
            PadicElem img = apply_aut(S.root[i], s);
            if (img.equals(S.root[i])) P.fix.push_back(s);
            else if (kind[i] != Split && !P.hat.count(1)) P.hat[1] = s;
        }
        if (kind[i] != Split) P.D.push_back(1);
        fill_reps(*K.G, P);
    }
}

}  // namespace

long LocalSetup::delta() const
{
    long n = 0;
    for (auto& P : places)
        if (!P.ramified) ++n;
    return n;
}

KElem kummer_generator(const Extension& K)
{
    const BaseField& k = K.M->m.k;
    const RayClassData& M = *K.M;
    std::vector<KElem> gens{KElem(-1, k.D), unit_data(k).eps};
    Lattice two = Lattice::ideal(k, {KElem(2, k.D)});
    for (auto& [P, e] : factor_ideal(M.m.f * two)) {
        auto g = find_generator(P.P);
        if (!g) throw std::runtime_error("no generator for a prime ideal");
        gens.push_back(*g);
    }
    // Frobenius test data at split primes
    struct Test {
        long l, s, g;  // sqrt D = s mod the prime, class of Frobenius in Gal(K/k)
    };
    std::vector<Test> tests;
    Q nf = M.m.f.norm();
    for (long l = 3; tests.size() < 60 && l < 20000; l += 2) {
        if (!is_prime(l) || k.disc() % l == 0 || Z(nf.get_num() % l) == 0) continue;
        if (legendre(k.D, l) != 1) continue;
        for (auto& P : primes_above(k, l)) {
            // P has basis l, B + omega
            long r = mod(-mod_q(P.P.B, l), l);
            long s = k.half() ? mod(2 * r - 1, l) : r;
            long g = K.q.apply_index(M.class_of_ideal(P.P));
            tests.push_back({l, s, g});
        }
    }
    size_t n = gens.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        KElem gam(1, k.D);
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) gam = gam * gens[i];
        bool ok = true;
        for (auto& t : tests) {
            long x = mod(mod_q(gam.a, t.l) + mod_q(gam.b, t.l) * t.s, t.l);
            long want = t.g == 0 ? 1 : -1;
            if (legendre(x, t.l) != want) {
                ok = false;
                break;
            }
        }
        if (ok) return gam;
    }
    throw std::runtime_error("no Kummer generator found for " + M.m.str());
}

LocalSetup local_setup(const Extension& K, long p, long prec, const SetupOptions& opt)
{
    LocalSetup S;
    S.k = K.M->m.k;
    S.p = p;
    S.prec = prec;
    S.K = K;
    S.opt = opt;
    S.Qp = make_unramified(p, 1, prec);
    S.conductor = conductor(K).m;
    S.phi = phi_field(K);
    if (S.k.quadratic()) setup_quadratic(S);
    else setup_rational(S);
    return S;
}

KNum knum_mul(const LocalSetup& S, const KNum& x, const KNum& y)
{
    KNum r;
    if (!S.k.quadratic()) {
        r.z = x.z * y.z;
        return r;
    }
    r.a = x.a * y.a + x.b * y.b * S.gamma;
    r.b = x.a * y.b + x.b * y.a;
    return r;
}

KNum knum_act(const LocalSetup& S, long g, const KNum& x)
{
    KNum r = x;
    if (!S.k.quadratic()) r.z = x.z.galois(S.b_of[g]);
    else if (g != 0) r.b = -x.b;
    return r;
}

PadicElem embed_global(const LocalSetup& S, const KNum& x, int i, long g)
{
    if (!S.k.quadratic()) {
        long t = mod(S.b_of[g] * S.opt.j_twist, std::max(S.f, 1L));
        if (S.f <= 2) t = 1;
        return embed_cyc(S.L, x.z.galois(t));
    }
    PadicElem a = embed_k(S.L, S.emb, x.a, i + 1);
    PadicElem b = embed_k(S.L, S.emb, x.b, i + 1);
    return g == 0 ? a + b * S.root[i] : a - b * S.root[i];
}

SemilocalUnit semilocal_from_global(const LocalSetup& S, const KNum& x)
{
    const FinAbGroup& G = *S.K.G;
    SemilocalUnit u;
    for (int i = 0; i < S.d(); ++i) {
        std::vector<PadicElem> c;
        for (long r : S.places[i].reps) c.push_back(embed_global(S, x, i, G.index(G.neg(G.elem(r)))));
        u.comp.push_back(c);
    }
    return u;
}

SemilocalUnit exp_semilocal(const LocalSetup& S, const KNum& x)
{
    SemilocalUnit u = semilocal_from_global(S, x);
    for (auto& place : u.comp)
        for (auto& c : place) c = pexp(c);
    return u;
}

SemilocalUnit semilocal_mul(const SemilocalUnit& u, const SemilocalUnit& v)
{
    SemilocalUnit r = u;
    for (size_t i = 0; i < r.comp.size(); ++i)
        for (size_t j = 0; j < r.comp[i].size(); ++j) r.comp[i][j] = u.comp[i][j] * v.comp[i][j];
    return r;
}

SemilocalUnit semilocal_act(const LocalSetup& S, long h, const SemilocalUnit& u)
{
    const FinAbGroup& G = *S.K.G;
    SemilocalUnit r = u;
    for (int i = 0; i < S.d(); ++i) {
        const auto& P = S.places[i];
        std::set<long> D(P.D.begin(), P.D.end());
        for (size_t ri = 0; ri < P.reps.size(); ++ri) {
            Elem base = G.add(G.elem(h), G.neg(G.elem(P.reps[ri])));
            for (size_t rj = 0; rj < P.reps.size(); ++rj) {
                long d = G.index(G.add(base, G.elem(P.reps[rj])));
                if (D.count(d)) {
                    r.comp[i][ri] = apply_aut(u.comp[i][rj], P.hat.at(d));
                    break;
                }
            }
        }
    }
    return r;
}

SemilocalUnit random_semilocal(const LocalSetup& S, std::mt19937_64& rng)
{
    SemilocalUnit u;
    const LocalFieldPtr& L = S.L;
    long bound = L->p * L->p * L->p;
    std::uniform_int_distribution<long> dist(0, bound - 1);
    for (int i = 0; i < S.d(); ++i) {
        std::vector<PadicElem> c;
        for (size_t r = 0; r < S.places[i].reps.size(); ++r) {
            std::vector<Z> co(L->degree());
            for (auto& x : co) x = dist(rng);
            PadicElem y = PadicElem(L, 1) + PadicElem::from_coords(L, co, 0, L->cap) * PadicElem::pi(L);
            PadicElem prod(L, 1);
            for (auto& s : S.places[i].fix) prod = prod * apply_aut(y, s);
            c.push_back(prod);
        }
        u.comp.push_back(c);
    }
    return u;
}

PGroupRing lambda_ip(const LocalSetup& S, const SemilocalUnit& u, int i)
{
    const FinAbGroup& G = *S.K.G;
    const auto& P = S.places[i];
    PGroupRing res(S.K.G);
    for (size_t ri = 0; ri < P.reps.size(); ++ri) {
        PadicElem lg = plog(u.comp[i][ri]);
        for (long d : P.D) {
            long g = G.index(G.add(G.elem(P.reps[ri]), G.neg(G.elem(d))));
            res.c[g] = res.c[g] + apply_aut(lg, P.hat.at(d));
        }
    }
    return res;
}

PGroupRing rho_i(const LocalSetup& S, const KNum& x, int i)
{
    const FinAbGroup& G = *S.K.G;
    PGroupRing res(S.K.G);
    for (long g = 0; g < G.size(); ++g) res.c[G.index(G.neg(G.elem(g)))] = embed_global(S, x, i, g);
    return res;
}

PGroupRing regulator(const LocalSetup& S, const std::vector<SemilocalUnit>& theta)
{
    int d = S.d();
    if ((int)theta.size() != d) throw std::invalid_argument("regulator needs d units");
    if (d == 1) return lambda_ip(S, theta[0], 0);
    PGroupRing a = lambda_ip(S, theta[0], 0), b = lambda_ip(S, theta[1], 1);
    PGroupRing c = lambda_ip(S, theta[1], 0), e = lambda_ip(S, theta[0], 1);
    return a * b - c * e;
}

PGroupRing phi_star_embedded(const LocalSetup& S)
{
    GroupRingElem ps = S.phi.involution();
    PGroupRing r(S.K.G);
    for (auto& [g, v] : ps.terms()) {
        CycNum w = S.k.quadratic() ? v : v.galois(mod(S.opt.j_twist, std::max(v.conductor(), 1L)));
        r.c[g] = embed_cyc(S.L, w);
    }
    if (S.k.quadratic()) {
        KElem sd(Q(0), Q(S.k.half() ? 1 : 2), S.k.D);
        r = r.scaled(embed_k(S.L, S.emb, sd, 1));
    }
    return r;
}

PGroupRing s_value(const LocalSetup& S, const std::vector<SemilocalUnit>& theta)
{
    return phi_star_embedded(S) * regulator(S, theta);
}

bool is_normal_basis(const LocalSetup& S, const KNum& alpha)
{
    if (S.k.quadratic()) return !alpha.a.is_zero() && !alpha.b.is_zero();
    for (auto& chi : all_characters(S.K.G)) {
        CycNum r;
        for (long g = 0; g < S.K.G->size(); ++g) r += chi.value(g) * knum_act(S, g, alpha).z;
        if (r.is_zero()) return false;
    }
    return true;
}

Theta build_theta(const LocalSetup& S, std::mt19937_64& rng, KNum* alpha_out)
{
    KNum beta;
    bool found = false;
    if (S.k.quadratic()) {
        beta.a = KElem(1, S.k.D);
        beta.b = KElem(1, S.k.D);
        std::uniform_int_distribution<long> dist(-3, 3);
        for (int t = 0; t < 50 && !found; ++t) {
            if (is_normal_basis(S, beta)) found = true;
            else {
                beta.a = KElem(Q(dist(rng)), Q(dist(rng)), S.k.D);
                beta.b = KElem(Q(dist(rng)), Q(dist(rng)), S.k.D);
            }
        }
    } else {
        long f = std::max(S.f, 1L);
        std::vector<long> Hb;
        for (long b = 1; b <= f; ++b)
            if (std::gcd(b, f) == 1 && S.K.q.apply_index(S.K.M->class_of(KElem(b, 0))) == 0) Hb.push_back(b);
        std::uniform_int_distribution<long> dist(-2, 2);
        CycNum y = CycNum::root(1, f);
        for (int t = 0; t < 50 && !found; ++t) {
            CycNum tr;
            for (long b : Hb) tr += y.galois(b);
            beta.z = tr;
            if (is_normal_basis(S, beta)) found = true;
            else {
                y = CycNum();
                for (long i = 0; i < std::max(euler_phi(f), 1L); ++i) y += CycNum(dist(rng)) * CycNum::root(i, f);
            }
        }
    }
    if (!found) throw std::runtime_error("normal basis search budget exhausted");
    // alpha = p beta lies in p O_K
    KNum alpha = beta;
    KNum pk;
    pk.z = CycNum(S.p);
    pk.a = KElem(S.p, S.k.D);
    pk.b = KElem(0, S.k.D);
    alpha = knum_mul(S, alpha, pk);
    if (alpha_out) *alpha_out = alpha;
    Theta th;
    th.origin = "exp";
    th.u.push_back(exp_semilocal(S, alpha));
    if (S.d() == 2) {
        KNum y2;
        y2.a = KElem(Q(0), Q(1), S.k.D);
        y2.b = KElem(0, S.k.D);
        th.u.push_back(exp_semilocal(S, knum_mul(S, y2, alpha)));
    }
    th.regulator_unit = is_group_ring_unit(regulator(S, th.u));
    return th;
}

long roots_of_unity_order(const Extension& K)
{
    if (K.M->m.k.quadratic()) throw std::domain_error("roots_of_unity_order: k = Q only");
    long f = Z(K.M->m.f.rational_generator().get_num()).get_si();
    long N = f;
    for (long b = 1; b <= f; ++b)
        if (std::gcd(b, f) == 1 && K.q.apply_index(K.M->class_of(KElem(b, 0))) == 0) N = std::gcd(N, b - 1);
    if (N == 0) N = f;
    return N % 2 ? 2 * N : N;
}

Hypotheses hypotheses(const LocalSetup& S)
{
    Hypotheses h;
    const BaseField& k = S.k;
    auto cs = complex_conjugations(S.K);
    h.e_minus_zero = minus_idempotent(S.K.G, cs).is_zero_elem();
    bool any_ram = false;
    for (auto& P : S.places) any_ram = any_ram || P.ramified;
    h.p_unramified = !any_ram;
    auto fac = factor_ideal(S.conductor.f);
    Lattice fprime = Lattice::unit(k);
    std::vector<std::pair<PrimeIdeal, int>> at_p;
    for (auto& [P, e] : fac) {
        if (P.p != S.p) {
            h.ram_away_from_p = true;
            for (int t = 0; t < e; ++t) fprime = fprime * P.P;
        } else {
            at_p.emplace_back(P, e);
        }
    }
    if (!k.quadratic()) {
        h.p_coprime_wK = roots_of_unity_order(S.K) % S.p != 0;
    } else {
        h.p_coprime_wK = S.p != 3 || !is_square_k(KElem(-3, k.D) * S.gamma);
    }
    if (!k.quadratic()) h.covered_by = "k=Q";
    else if (h.e_minus_zero) h.covered_by = "e_minus_zero";
    else if (h.p_unramified) h.covered_by = "p_unramified";
    else if (h.ram_away_from_p || h.p_coprime_wK) h.covered_by = "split_p";

    // the auxiliary cycle: f' times p_i^{max(n_i,0)+1} times all real places
    Lattice fa = fprime;
    ConductorData cd = conductor(S.K);
    if (!h.ram_away_from_p) {
        for (long l = 3; l < 5000 && h.q0.empty(); l += 2) {
            if (!is_prime(l) || l == S.p || l == 3) continue;
            for (auto& Q0 : primes_above(k, l)) {
                if (k.disc() % l == 0 || Z(S.conductor.f.norm().get_num() % l) == 0) continue;
                if ((Q0.normP - 1) % S.p == 0) continue;
                if (cd.to_K.apply_index(cd.R->class_of_ideal(Q0.P)) != 0) continue;
                fa = Q0.P;
                h.q0 = Q0.P.str();
                break;
            }
        }
    }
    for (auto& Pp : primes_above(k, S.p)) {
        int e = 1;
        for (auto& [P, ee] : at_p)
            if (P.P == Pp.P) e = ee;
        for (int t = 0; t < e; ++t) fa = fa * Pp.P;
    }
    std::vector<int> z;
    for (int v = 1; v <= k.degree(); ++v) z.push_back(v);
    h.augmented = cycle_of(k, fa, z);
    return h;
}

IntegralityReport integrality_check(const LocalSetup& S, const std::vector<Theta>& thetas)
{
    IntegralityReport rep;
    rep.delta = S.delta();
    rep.hyp = hypotheses(S);
    rep.precision = std::numeric_limits<long>::max();
    bool first = true;
    for (auto& th : thetas) {
        PGroupRing s = s_value(S, th.u);
        PGroupRing q(S.K.G);
        for (size_t i = 0; i < s.c.size(); ++i) {
            const PadicElem& x = s.c[i];
            if (x.exact_zero()) {
                q.c[i] = PadicElem::zero(S.Qp, S.prec);
                continue;
            }
            if (!x.in_Qp()) {
                rep.in_Qp = false;
                q.c[i] = x;
                continue;
            }
            q.c[i] = x.to_Qp(S.Qp);
        }
        Q mv = q.min_valuation();
        if (first || mv < rep.min_valuation) rep.min_valuation = mv;
        first = false;
        rep.precision = std::min(rep.precision, q.precision());
        rep.s.push_back(q);
        rep.origins.push_back(th.origin);
    }
    rep.precision_ok = rep.precision >= rep.delta + 5;
    bool bound = true;
    for (auto& s : rep.s)
        for (auto& x : s.c)
            if (x.val_or_prec() < rep.delta) bound = false;
    rep.integral = rep.in_Qp && rep.precision_ok && bound;
    return rep;
}

json IntegralityReport::to_json() const
{
    json ss = json::array();
    for (size_t i = 0; i < s.size(); ++i) ss.push_back({{"theta", origins[i]}, {"s", s[i].to_json()}});
    json hy{{"e_minus_zero", hyp.e_minus_zero},
            {"p_unramified", hyp.p_unramified},
            {"ramified_prime_away_from_p", hyp.ram_away_from_p},
            {"p_coprime_to_wK", hyp.p_coprime_wK},
            {"covered_by", hyp.covered_by},
            {"auxiliary_cycle", hyp.augmented.str()}};
    if (!hyp.q0.empty()) hy["q0"] = hyp.q0;
    return json{{"values", ss},
                {"min_valuation", q_str(min_valuation)},
                {"precision", precision},
                {"delta", delta},
                {"coefficients_in_Qp", in_Qp},
                {"precision_ok", precision_ok},
                {"verdict", integral ? "integral" : (precision_ok ? "not integral" : "precision exhausted")},
                {"hypotheses", hy}};
}

}  // namespace tz
