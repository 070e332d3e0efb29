#include "tz/shintani.hpp"

#include <stdexcept>

namespace tz {

namespace {

Z ceil_q(const Q& q)
{
    Z r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Z floor_q(const Q& q)
{
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// into (0,1]
Q unit_interval(const Q& t) { return t - Q(ceil_q(t)) + 1; }

bool is_integer(const Q& q) { return q.get_den() == 1; }

Q B1(const Q& t) { return t - Q(1, 2); }
Q B2(const Q& t) { return t * t - t + Q(1, 6); }

// integer HNF of two rows: lattice {(A,0),(B,C)}
void hnf2(Z r1x, Z r1y, Z r2x, Z r2y, Z& A, Z& B, Z& C)
{
    while (r2y != 0) {
        Z q;
        mpz_fdiv_q(q.get_mpz_t(), r1y.get_mpz_t(), r2y.get_mpz_t());
        r1x -= q * r2x;
        r1y -= q * r2y;
        std::swap(r1x, r2x);
        std::swap(r1y, r2y);
    }
    // now r2y = 0: r1 carries the y pivot
    if (r1y < 0) { r1x = -r1x; r1y = -r1y; }
    A = abs(r2x);
    if (A == 0 || r1y == 0) throw std::invalid_argument("box_points: degenerate multipliers");
    C = r1y;
    mpz_fdiv_r(B.get_mpz_t(), r1x.get_mpz_t(), A.get_mpz_t());
}

}  // namespace

ConeDecomp cone_decomp(const BaseField& k, const KElem& eps, const KElem& b)
{
    if (!b.totally_positive()) throw std::invalid_argument("cone_decomp: b not totally positive");
    ConeDecomp C;
    C.eps = eps;
    if (!k.quadratic()) {
        C.eps = KElem(1, 0);
        C.cones.push_back(Cone{{b}});
        return C;
    }
    if (!eps.totally_positive() || eps == KElem(1, k.D))
        throw std::invalid_argument("cone_decomp: eps must be a totally positive nontrivial unit");
    C.cones.push_back(Cone{{b}});
    C.cones.push_back(Cone{{b, b * eps}});
    return C;
}

ConeDecomp cone_fan(const BaseField& k, const KElem& u, long steps, const KElem& b,
                    const Lattice* L, const AddChar* xi)
{
    if (!k.quadratic() || steps <= 1) {
        KElem e = u;
        for (long i = 1; i < steps; ++i) e = e * u;
        return cone_decomp(k, e, b);
    }
    if (!b.totally_positive()) throw std::invalid_argument("cone_fan: b not totally positive");
    std::vector<KElem> chain{b};
    for (long i = 1; i <= steps; ++i) chain.push_back(chain.back() * u);
    if (xi && L)
        for (long i = 1; i < steps; ++i) {
            KElem c = chain[i];
            for (long j = 1; (*xi)(L->primitive_along(c)) == CycNum(1); ++j) {
                if (j > 1000) throw std::domain_error("cone_fan: no admissible ray in sector");
                c = chain[i] + Q(j) * chain[i - 1];
            }
            chain[i] = c;
        }
    ConeDecomp C;
    C.eps = chain.back() / b;
    for (long i = 0; i < steps; ++i) {
        C.cones.push_back(Cone{{chain[i]}});
        C.cones.push_back(Cone{{chain[i], chain[i + 1]}});
    }
    return C;
}

bool cone_contains(const Cone& c, const KElem& x)
{
    BaseField k{x.D};
    if (c.v.size() == 1) {
        if (!k.quadratic()) return x.a / c.v[0].a > 0;
        KElem t = x / c.v[0];
        return t.b == 0 && t.a > 0;
    }
    auto t = solve_coords(k, c.v, x);
    return t[0] > 0 && t[1] > 0;
}

int cover_count(const ConeDecomp& C, const KElem& x, int range)
{
    int n = 0;
    KElem einv = C.eps.inv();
    for (int e = -range; e <= range; ++e) {
        KElem y = x;
        for (int i = 0; i < std::abs(e); ++i) y = y * (e > 0 ? einv : C.eps);
        for (auto& c : C.cones)
            if (cone_contains(c, y)) ++n;
        if (!BaseField{x.D}.quadratic()) break;
    }
    return n;
}

std::vector<BoxPoint> box_points(const std::vector<KElem>& w, const Lattice& L, const KElem& shift0)
{
    const BaseField& k = L.k;
    KElem shift = shift0;
    shift.D = k.D;
    for (auto& x : w)
        if (!L.contains(x)) throw std::invalid_argument("box_points: multiplier not in lattice");
    std::vector<BoxPoint> out;
    auto lb = L.basis();
    if (w.size() == (size_t)k.degree() && w.size() == 2) {
        auto c1 = solve_coords(k, lb, w[0]);
        auto c2 = solve_coords(k, lb, w[1]);
        Z A, B, C;
        hnf2(c1[0].get_num(), c1[1].get_num(), c2[0].get_num(), c2[1].get_num(), A, B, C);
        long nA = A.get_si(), nC = C.get_si();
        for (long j = 0; j < nC; ++j)
            for (long i = 0; i < nA; ++i) {
                KElem y = shift + Q(i) * lb[0] + Q(j) * lb[1];
                auto t = solve_coords(k, w, y);
                for (auto& q : t) q = unit_interval(q);
                KElem a = t[0] * w[0] + t[1] * w[1];
                a.D = k.D;
                out.push_back(BoxPoint{a, t});
            }
        return out;
    }
    if (w.size() != 1) throw std::invalid_argument("box_points: unsupported cone dimension");
    // a line: points of shift + L on Q w, as mu * w0 with w0 primitive
    KElem w0 = L.primitive_along(w[0]);
    Q M = (w[0] / w0).a;
    if (!is_integer(M) || M <= 0) throw std::invalid_argument("box_points: multiplier not a positive multiple");
    Q mu0;
    if (!k.quadratic()) {
        mu0 = shift.a / w0.a;
    } else {
        auto s = solve_coords(k, lb, shift);
        auto pq = solve_coords(k, lb, w0);
        Z p = pq[0].get_num(), q = pq[1].get_num();
        Z g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        mu0 = Q(x) * s[0] + Q(y) * s[1];
        if (!is_integer(mu0 * Q(p) - s[0]) || !is_integer(mu0 * Q(q) - s[1])) return out;
    }
    mu0 = unit_interval(mu0);
    long nM = M.get_num().get_si();
    for (long n = 0; n < nM; ++n) {
        Q mu = mu0 + n;
        KElem a = mu * w0;
        a.D = k.D;
        out.push_back(BoxPoint{a, {mu / M}});
    }
    return out;
}

KElem edge_multiplier(const Lattice& L, const KElem& v, const AddChar& xi)
{
    KElem w0 = L.primitive_along(v);
    if (xi(w0) == CycNum(1))
        throw std::domain_error("character is trivial on the edge through " + v.str());
    return w0;
}

CycNum twisted_zeta_zero_cone(const AddChar& xi, const Lattice& L, const Cone& v,
                              const std::vector<KElem>& w)
{
    CycNum den(1);
    for (auto& x : w) {
        CycNum e = xi(x);
        if (e == CycNum(1)) throw std::domain_error("twisted zeta: xi(w) = 1 on an edge");
        den *= CycNum(1) - e;
    }
    CycNum num;
    for (auto& b : box_points(w, L)) num += xi(b.a);
    (void)v;
    return num / den;
}

CycNum twisted_zeta_zero_cone(const AddChar& xi, const Lattice& L, const Cone& v)
{
    std::vector<KElem> w;
    for (auto& x : v.v) w.push_back(edge_multiplier(L, x, xi));
    return twisted_zeta_zero_cone(xi, L, v, w);
}

CycNum twisted_zeta_zero(const AddChar& xi, const Lattice& L, const ConeDecomp& C)
{
    CycNum s;
    for (auto& v : C.cones) s += twisted_zeta_zero_cone(xi, L, v);
    return s / CycNum(C.index);
}

Q bernoulli_zero_cone(const Lattice& L, const KElem& shift, const Cone& v)
{
    std::vector<KElem> w;
    for (auto& x : v.v) w.push_back(L.primitive_along(x));
    Q s = 0;
    if (w.size() == 1) {
        for (auto& b : box_points(w, L, shift)) s += -B1(b.t[0]);
        return s;
    }
    Q tr12 = (w[0] / w[1]).trace(), tr21 = (w[1] / w[0]).trace();
    for (auto& b : box_points(w, L, shift))
        s += B1(b.t[0]) * B1(b.t[1]) + Q(1, 4) * (B2(b.t[0]) * tr12 + B2(b.t[1]) * tr21);
    return s;
}

Q bernoulli_zero(const Lattice& L, const KElem& shift, const ConeDecomp& C)
{
    Q s = 0;
    for (auto& v : C.cones) s += bernoulli_zero_cone(L, shift, v);
    return s / C.index;
}

KElem choose_translate(const Lattice& L, const AddChar& xi)
{
    auto b = L.basis();
    for (long r = 1; r < 200; ++r)
        for (long i = -r; i <= r; ++i)
            for (long j = -r; j <= r; ++j) {
                if (std::max(std::abs(i), std::abs(j)) != r) continue;
                KElem x = Q(i) * b[0] + Q(j) * b[1];
                x.D = L.k.D;
                if (!x.totally_positive()) continue;
                if (xi(L.primitive_along(x)) != CycNum(1)) return x;
            }
    throw std::domain_error("choose_translate: no admissible translate found");
}

// ---------------------------------------------------------------------------

TPoly tpoly_trim(TPoly a)
{
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    return a;
}

TPoly tpoly_mul(const TPoly& a, const TPoly& b)
{
    if (a.empty() || b.empty()) return {};
    TPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero())
            for (size_t j = 0; j < b.size(); ++j)
                if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    return tpoly_trim(r);
}

TPoly tpoly_V(const TPoly& a, long p, int r)
{
    long q = 1;
    for (int i = 0; i < r; ++i) q *= p;
    TPoly out = a;
    for (size_t i = 0; i < out.size(); ++i)
        if (i % q) out[i] = CycNum();
    return tpoly_trim(out);
}

TPoly tpoly_inflate(const TPoly& a, long e)
{
    if (a.empty()) return {};
    TPoly r((a.size() - 1) * e + 1);
    for (size_t i = 0; i < a.size(); ++i) r[i * e] = a[i];
    return r;
}

TruncSeries<CycNum> tpoly_series(const TPoly& a, int N)
{
    TruncSeries<CycNum> t(1, std::max<int>(N, (int)a.size() - 1), CycNum());
    for (size_t i = 0; i < a.size(); ++i) t.at((int)i) = a[i];
    return t.from_T().truncated(N);
}

TPoly tpoly_root_average(const TPoly& a, long p, int r)
{
    long q = 1;
    for (int i = 0; i < r; ++i) q *= p;
    TPoly out(a.size());
    for (long j = 0; j < q; ++j)
        for (size_t i = 0; i < a.size(); ++i)
            if (!a[i].is_zero()) out[i] += a[i] * CycNum::root((long)((j * (long)i) % q), q);
    for (auto& x : out) x = x / CycNum(q);
    return tpoly_trim(out);
}

bool p_integral(const CycNum& x, long p)
{
    for (auto& c : x.coeffs())
        if (c.get_den() % p == 0) return false;
    return true;
}

IntChar int_char(long t, long f)
{
    return [t, f](const Z& a) {
        Z r = (a * t) % f;
        if (r < 0) r += f;
        return CycNum::root(r.get_si(), f);
    };
}

namespace {

Z ipow(long p, int m)
{
    Z r = 1;
    for (int i = 0; i < m; ++i) r *= p;
    return r;
}

}  // namespace

FSeries F_series(const IntChar& rho, long p, int m, int N, long q)
{
    FSeries F;
    F.p = p;
    F.m = m;
    Z pm = ipow(p, m);
    if (q == 0) {
        for (q = 1; q < 100000; ++q)
            if (rho(pm * q) != CycNum(1)) break;
    }
    if (rho(pm * q) == CycNum(1)) throw std::domain_error("F_series: character trivial on the chosen multiplier");
    F.q = q;
    F.G.assign(q + 1, CycNum());
    for (long t = 1; t <= q; ++t) F.G[t] = rho(pm * t);
    F.H.assign(q + 1, CycNum());
    F.H[0] = CycNum(1);
    F.H[q] = -rho(pm * q);
    F.F = tpoly_series(F.G, N) * tpoly_series(F.H, N).inverse();
    return F;
}

std::pair<TPoly, TPoly> distribution_sides(const IntChar& rho, long p, int m, int r)
{
    FSeries A = F_series(rho, p, m, 1);
    FSeries B = F_series(rho, p, m + r, 1, A.q);
    long pr = ipow(p, r).get_si();
    // N(H)/H = sum_{j < p^r} (a T^q)^j for H = 1 - a T^q
    CycNum a = -A.H[A.q];
    TPoly Ht((pr - 1) * A.q + 1);
    CycNum aj(1);
    for (long j = 0; j < pr; ++j, aj *= a) Ht[j * A.q] = aj;
    TPoly lhs = tpoly_V(tpoly_mul(A.G, Ht), p, r);
    TPoly rhs = tpoly_trim(tpoly_inflate(B.G, pr));
    return {lhs, rhs};
}

bool distribution_series_check(const IntChar& rho, long p, int m, int r, int N)
{
    int M = N / (int)p;
    FSeries A = F_series(rho, p, m, 1);
    FSeries B = F_series(rho, p, m + r, M, A.q);
    long pr = ipow(p, r).get_si();
    auto [lhs, rhs] = distribution_sides(rho, p, m, r);
    (void)rhs;
    // V_r F_m = P(U) / (1 - a^{p^r} U^q) with U = T^{p^r}
    TPoly P;
    for (size_t i = 0; i < lhs.size(); i += pr) P.push_back(lhs[i]);
    CycNum a = -A.H[A.q];
    TPoly NH(A.q + 1);
    NH[0] = CycNum(1);
    NH[A.q] = -a.pow(pr);
    TruncSeries<CycNum> left = tpoly_series(P, M) * tpoly_series(NH, M).inverse();
    return left == B.F;
}

}  // namespace tz
