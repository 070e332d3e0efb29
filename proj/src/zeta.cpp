#include "tz/zeta.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "tz/arith.hpp"
#include "tz/shintani.hpp"

namespace tz {

RayPtr ray_data(const Cycle& m)
{
    static std::mutex mu;
    static std::map<std::string, RayPtr> cache;
    std::string key = m.key();
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto r = std::make_shared<const RayClassData>(ray_class_group(m));
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(key, r).first->second;
}

std::vector<Lattice> ideal_divisors(const Lattice& f)
{
    std::vector<Lattice> out{Lattice::unit(f.k)};
    for (auto& [P, e] : factor_ideal(f)) {
        std::vector<Lattice> next;
        for (auto& g : out) {
            Lattice x = g;
            next.push_back(x);
            for (int i = 1; i <= e; ++i) {
                x = x * P.P;
                next.push_back(x);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const Lattice& a, const Lattice& b) {
        if (a.norm() != b.norm()) return a.norm() < b.norm();
        return std::tie(a.A, a.B, a.C) < std::tie(b.A, b.B, b.C);
    });
    return out;
}

Cycle cycle_of(const BaseField& k, const Lattice& f, std::vector<int> z)
{
    std::sort(z.begin(), z.end());
    return Cycle{k, f, z};
}

Cycle full_infinity(const Cycle& m)
{
    return cycle_of(m.k, m.f, m.k.quadratic() ? std::vector<int>{1, 2} : std::vector<int>{1});
}

Q partial_zeta_zero(const RayClassData& n, long c)
{
    if (!n.m.all_infinite()) throw std::invalid_argument("partial_zeta_zero: cycle must contain all real places");
    const BaseField& k = n.m.k;
    KElem x = n.R->elem(n.rep.at(c));
    x.D = k.D;
    KElem one(1, k.D);
    if (!k.quadratic()) return bernoulli_zero_cone(n.m.f, x, Cone{{one}});
    ConeDecomp C = cone_fan(k, unit_data(k).eps_plus, n.eps_m_steps, one);
    return bernoulli_zero(n.m.f, x, C);
}

namespace {

CycNum twisted_class(const RayClassData& m, const WClass& w)
{
    const BaseField& k = m.m.k;
    AddChar xi = [&w](const KElem& x) { return w.xi(x); };
    if (!k.quadratic()) return twisted_zeta_zero_cone(xi, w.I, Cone{{KElem(1, 0)}});
    KElem b = choose_translate(w.I, xi);
    return twisted_zeta_zero(xi, w.I, cone_fan(k, unit_data(k).eps_plus, m.eps_m_steps, b, &w.I, &xi));
}

CycNum untwisted_value(const RayClassData& m)
{
    const BaseField& k = m.m.k;
    Lattice I = Lattice::ideal(k, {different_generator(k)}).inverse();
    KElem one(1, k.D);
    if (!k.quadratic()) return CycNum(bernoulli_zero_cone(I, KElem(0, 0), Cone{{one}}));
    return CycNum(bernoulli_zero(I, KElem(0, k.D), cone_fan(k, unit_data(k).eps_plus, m.eps_m_steps, one)));
}

GroupRingElem project_from_full(const Cycle& m, GroupRingElem (*f)(const Cycle&))
{
    Cycle full = full_infinity(m);
    GroupRingElem x = f(full);
    return x.project(ray_projection(*ray_data(full), *ray_data(m)));
}

bool is_unit_ideal(const Lattice& f) { return f.norm() == 1; }

}  // namespace

CycNum twisted_zeta_class(const RayClassData& m, long c)
{
    if (!m.m.all_infinite()) throw std::invalid_argument("twisted_zeta_class: cycle must contain all real places");
    if (is_unit_ideal(m.m.f)) return untwisted_value(m);
    auto W = w_orbit(m);
    return twisted_class(m, W.at(c));
}

GroupRingElem theta_zero(const Cycle& n)
{
    if (!n.all_infinite()) return project_from_full(n, theta_zero);
    auto R = ray_data(n);
    GroupRingElem x(R->G);
    for (long c = 0; c < R->G->size(); ++c) {
        Q v = partial_zeta_zero(*R, c);
        x.add_to(R->G->index(R->G->neg(R->G->elem(c))), CycNum(v));
    }
    return x;
}

GroupRingElem phi_zero(const Cycle& m)
{
    if (!m.all_infinite()) return project_from_full(m, phi_zero);
    auto R = ray_data(m);
    GroupRingElem x(R->G);
    if (is_unit_ideal(m.f)) {
        x.add_to(0, untwisted_value(*R));
        return x;
    }
    auto W = w_orbit(*R);
    for (long c = 0; c < R->G->size(); ++c)
        x.add_to(R->G->index(R->G->neg(R->G->elem(c))), twisted_class(*R, W[c]));
    return x;
}

Thm22Report verify_thm22(const Cycle& m)
{
    Thm22Report rep;
    rep.m = m;
    auto M = ray_data(m);
    rep.lhs = phi_zero(m).involution();
    rep.rhs = GroupRingElem(M->G);
    for (auto& g : ideal_divisors(m.f)) {
        Cycle n = cycle_of(m.k, g, m.z);
        auto N = ray_data(n);
        GroupRingElem t = build_A(*N) * theta_zero(n);
        t = t.scaled(CycNum(unit_index(*N, *M)));
        t = GroupRingElem::corestrict(t, ray_projection(*M, *N));
        rep.terms.emplace_back(n.str(), t);
        rep.rhs += t;
    }
    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<long> subgroup_generated(const FinAbGroup& G, const std::vector<Elem>& gens)
{
    std::set<long> S{0};
    std::vector<long> todo{0};
    while (!todo.empty()) {
        long i = todo.back();
        todo.pop_back();
        for (auto& g : gens) {
            long j = G.index(G.add(G.elem(i), g));
            if (S.insert(j).second) todo.push_back(j);
        }
    }
    return std::vector<long>(S.begin(), S.end());
}

Extension make_extension(RayPtr M, std::vector<long> H)
{
    const FinAbGroup& G = *M->G;
    std::sort(H.begin(), H.end());
    H.erase(std::unique(H.begin(), H.end()), H.end());
    std::set<long> Hs(H.begin(), H.end());
    if (!Hs.count(0)) throw std::invalid_argument("make_extension: H lacks the identity");
    for (long a : H)
        for (long b : H)
            if (!Hs.count(G.index(G.add(G.elem(a), G.elem(b)))))
                throw std::invalid_argument("make_extension: H is not a subgroup");
    long n = G.size();
    std::vector<long> key(n, -1), reps;
    for (long i = 0; i < n; ++i) {
        if (key[i] >= 0) continue;
        long id = (long)reps.size();
        reps.push_back(i);
        for (long h : H) key[G.index(G.add(G.elem(i), G.elem(h)))] = id;
    }
    auto mul = [&](size_t a, size_t b) {
        return (size_t)key[G.index(G.add(G.elem(reps[a]), G.elem(reps[b])))];
    };
    AbStructure S = decompose_group(reps.size(), (size_t)key[0], mul);
    Extension K;
    K.M = M;
    K.H = H;
    K.coset_rep.resize(S.G->size());
    std::vector<std::string> labels(S.G->size());
    for (long g = 0; g < S.G->size(); ++g) {
        K.coset_rep[g] = reps[S.elem_of[g]];
        labels[g] = M->label(K.coset_rep[g]);
    }
    auto Gq = std::make_shared<FinAbGroup>(*S.G);
    Gq->set_labels(labels);
    K.G = Gq;
    K.q.src = M->G;
    K.q.dst = K.G;
    for (size_t t = 0; t < G.rank(); ++t) {
        Elem e = G.zero();
        e[t] = 1;
        K.q.images.push_back(K.G->elem(S.dlog[key[G.index(e)]]));
    }
    return K;
}

Extension full_extension(RayPtr M) { return make_extension(M, {0}); }

Extension kernel_field(RayPtr M, const Character& chi)
{
    std::vector<long> H;
    for (long i = 0; i < M->G->size(); ++i)
        if (chi.value(i) == CycNum(1)) H.push_back(i);
    return make_extension(M, H);
}

GroupHom induced_map(const Extension& K, const RayClassData& n)
{
    GroupHom pi = ray_projection(*K.M, n);
    std::vector<long> pre(n.G->size(), -1);
    for (long i = 0; i < K.M->G->size(); ++i) {
        long j = pi.apply_index(i);
        if (pre[j] < 0) pre[j] = i;
        else if (K.q.apply_index(pre[j]) != K.q.apply_index(i))
            throw std::invalid_argument("induced_map: K is not contained in k(n)");
    }
    GroupHom h;
    h.src = n.G;
    h.dst = K.G;
    for (size_t t = 0; t < n.G->rank(); ++t) {
        Elem e = n.G->zero();
        e[t] = 1;
        h.images.push_back(K.q.apply(K.M->G->elem(pre[n.G->index(e)])));
    }
    return h;
}

ConductorData conductor(const Extension& K)
{
    const Cycle& m = K.M->m;
    std::set<long> Hs(K.H.begin(), K.H.end());
    std::vector<std::vector<int>> zs;
    size_t nz = m.z.size();
    for (unsigned mask = 0; mask < (1u << nz); ++mask) {
        std::vector<int> z;
        for (size_t i = 0; i < nz; ++i)
            if (mask & (1u << i)) z.push_back(m.z[i]);
        zs.push_back(z);
    }
    std::sort(zs.begin(), zs.end(), [](auto& a, auto& b) { return a.size() < b.size(); });
    for (auto& g : ideal_divisors(m.f))
        for (auto& z : zs) {
            Cycle c = cycle_of(m.k, g, z);
            auto R = ray_data(c);
            GroupHom pi = ray_projection(*K.M, *R);
            bool ok = true;
            for (long i = 0; i < K.M->G->size() && ok; ++i)
                if (pi.apply_index(i) == 0 && !Hs.count(i)) ok = false;
            if (ok) return ConductorData{c, R, induced_map(K, *R)};
        }
    throw std::logic_error("conductor: no divisor of m cuts out K");
}

GroupHom restriction(const Extension& K, const Extension& L)
{
    if (K.M->m.key() != L.M->m.key()) throw std::invalid_argument("restriction: different ambient cycles");
    GroupHom h;
    h.src = K.G;
    h.dst = L.G;
    for (size_t t = 0; t < K.G->rank(); ++t) {
        Elem e = K.G->zero();
        e[t] = 1;
        h.images.push_back(L.q.apply(K.M->G->elem(K.coset_rep[K.G->index(e)])));
    }
    std::set<long> LH(L.H.begin(), L.H.end());
    for (long h0 : K.H)
        if (!LH.count(h0)) throw std::invalid_argument("restriction: L is not contained in K");
    return h;
}

GroupRingElem theta_field(const Extension& K)
{
    ConductorData cd = conductor(K);
    return theta_zero(cd.m).project(cd.to_K);
}

GroupRingElem phi_field(const Extension& K)
{
    ConductorData cd = conductor(K);
    Q s = Q(1) / (Q(cd.m.k.disc()) * cd.m.f.norm());
    return phi_zero(cd.m).project(cd.to_K).scaled(CycNum(s));
}

GroupRingElem cor23_phi(const Extension& K)
{
    ConductorData cd = conductor(K);
    const Cycle& m = cd.m;
    RayPtr Rm = cd.R;
    std::vector<long> H0;
    for (long j = 0; j < Rm->G->size(); ++j)
        if (cd.to_K.apply_index(j) == 0) H0.push_back(j);
    Extension K0 = make_extension(Rm, H0);
    std::set<long> H0s(H0.begin(), H0.end());

    GroupRingElem sum(K0.G);
    for (auto& g : ideal_divisors(m.f)) {
        Cycle n = cycle_of(m.k, g, m.z);
        RayPtr Rn = ray_data(n);
        GroupHom pmn = ray_projection(*Rm, *Rn);
        std::vector<Elem> gens;
        long inter = 0;
        for (long i = 0; i < Rm->G->size(); ++i)
            if (pmn.apply_index(i) == 0) {
                gens.push_back(Rm->G->elem(i));
                if (H0s.count(i)) ++inter;
            }
        for (long h : H0) gens.push_back(Rm->G->elem(h));
        Extension Kn = make_extension(Rm, subgroup_generated(*Rm->G, gens));
        GroupRingElem B = build_A(*Rn).project(induced_map(Kn, *Rn));
        B = B.scaled(CycNum(unit_index(*Rn, *Rm) * inter));
        ConductorData cdn = conductor(Kn);
        for (auto& [P, e] : factor_ideal(g)) {
            (void)e;
            if (P.P.contains(cdn.m.f)) continue;  // P divides f(K[n])
            Elem s = cdn.to_K.apply(cdn.R->G->elem(cdn.R->class_of_ideal(P.P)));
            GroupRingElem f = GroupRingElem::identity(Kn.G, CycNum(1));
            f.add_to(Kn.G->index(Kn.G->neg(s)), CycNum(-1));
            B = B * f;
        }
        GroupRingElem t = B * theta_zero(cdn.m).project(cdn.to_K);
        sum += GroupRingElem::corestrict(t, restriction(K0, Kn));
    }
    sum = sum.scaled(CycNum(Q(1) / (Q(m.k.disc()) * m.f.norm()))).involution();
    // back to the presentation of Gal(K/k) carried by K
    GroupHom iso;
    iso.src = K0.G;
    iso.dst = K.G;
    for (size_t t = 0; t < K0.G->rank(); ++t) {
        Elem e = K0.G->zero();
        e[t] = 1;
        iso.images.push_back(cd.to_K.apply(Rm->G->elem(K0.coset_rep[K0.G->index(e)])));
    }
    return sum.project(iso);
}

CycNum gauss_sum(RayPtr M, const Character& chi)
{
    Extension K = kernel_field(M, chi);
    ConductorData cd = conductor(K);
    GroupHom pi = ray_projection(*M, *cd.R);
    std::vector<long> pre(cd.R->G->size(), -1);
    for (long i = 0; i < M->G->size(); ++i)
        if (pre[pi.apply_index(i)] < 0) pre[pi.apply_index(i)] = i;
    GroupRingElem A = build_A(*cd.R);
    CycNum s;
    for (long j = 0; j < cd.R->G->size(); ++j) {
        CycNum a = A.coeff(j);
        if (!a.is_zero()) s += a * chi.value(pre[j]).conj();
    }
    return s;
}

long conjugation_class(const RayClassData& m, int v)
{
    const BaseField& k = m.m.k;
    std::vector<KElem> cand{KElem(-1, k.D)};
    if (k.quadratic()) {
        KElem eps = unit_data(k).eps;
        cand.push_back(eps);
        cand.push_back(-eps);
    }
    for (auto& u : cand) {
        bool ok = u.sign(v) < 0;
        for (int w : m.m.z)
            if (w != v) ok = ok && u.sign(w) > 0;
        if (ok) return m.coset_of_unit.at(m.R->index(u));
    }
    throw std::domain_error("conjugation_class: no unit with the required signs");
}

std::vector<Elem> complex_conjugations(const Extension& K)
{
    std::vector<Elem> out;
    const Cycle& m = K.M->m;
    for (int v = 1; v <= m.k.degree(); ++v) {
        if (std::find(m.z.begin(), m.z.end(), v) == m.z.end()) out.push_back(K.G->zero());
        else out.push_back(K.q.apply(K.M->G->elem(conjugation_class(*K.M, v))));
    }
    return out;
}

Prop21Report prop21_check(const Extension& K)
{
    Prop21Report r;
    GroupRingElem phi = phi_field(K);
    auto cs = complex_conjugations(K);
    const BaseField& k = K.M->m.k;
    if (!k.quadratic()) {
        ConductorData cd = conductor(K);
        Q e = Q(-1, 2);
        for (auto& [P, n] : factor_ideal(cd.m.f)) {
            (void)n;
            e *= 1 - Q(1, P.p);
        }
        Character chi0{K.G, K.G->zero()};
        r.q_value_ok = char_apply(chi0, phi) == CycNum(e);
        phi = phi + idempotent(chi0).scaled(CycNum(-e));
    }
    GroupRingElem em = minus_idempotent(K.G, cs);
    r.idempotent_ok = em * phi == phi;
    r.support_ok = true;
    for (auto& chi : all_characters(K.G)) {
        CycNum v = char_apply(chi, phi);
        bool odd = true;
        for (auto& c : cs) odd = odd && chi.value(c) == CycNum(-1);
        if (v.is_zero() == odd) r.support_ok = false;
        std::string name = "chi(";
        for (size_t i = 0; i < chi.a.size(); ++i) name += (i ? "," : "") + std::to_string(chi.a[i]);
        r.values.emplace_back(name + ")", v);
    }
    return r;
}

bool prop22_check(const Extension& K, long t)
{
    if (K.M->m.k.quadratic()) throw std::invalid_argument("prop22_check: base field must be Q");
    GroupRingElem phi = phi_field(K);
    long f = K.M->m.f.rational_generator().get_num().get_si();
    long tt = mod(t, f == 1 ? 1 : f);
    if (tt == 0) tt = 1;
    Elem s = K.q.apply(K.M->G->elem(K.M->class_of(KElem(tt, 0))));
    return phi.map_coeffs([t](const CycNum& x) { return x.galois(t); }) == phi.shifted(s);
}

}  // namespace tz
