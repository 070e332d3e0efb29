#include <gtest/gtest.h>

#include <random>

#include "tz/arith.hpp"
#include "tz/regulator.hpp"

using namespace tz;

static const BaseField QQ{0}, K2{2};

static Extension cyc_field(long f) { return full_extension(ray_data(parse_cycle(QQ, std::to_string(f) + "*inf"))); }

static Extension desk_field() { return full_extension(ray_data(parse_cycle(K2, "(sqrt2)*(3+sqrt2)*inf1*inf2"))); }

static KNum rational(long n)
{
    KNum x;
    x.z = CycNum(n);
    x.a = KElem(n, 0);
    return x;
}

static KNum quad(const KElem& a, const KElem& b)
{
    KNum x;
    x.a = a;
    x.b = b;
    return x;
}

static bool same(const PGroupRing& x, const PGroupRing& y)
{
    for (size_t i = 0; i < x.c.size(); ++i) {
        const PadicElem& a = x.c[i];
        const PadicElem& b = y.c[i];
        if (a.exact_zero() && b.exact_zero()) continue;
        if (a.exact_zero() ? !b.is_zero() : b.exact_zero() ? !a.is_zero() : !a.equals(b)) return false;
    }
    return true;
}

TEST(Regulator, LambdaOfOneVanishes)
{
    LocalSetup S = local_setup(cyc_field(3), 3, 20);
    EXPECT_TRUE(lambda_ip(S, semilocal_from_global(S, rational(1)), 0).is_zero());
}

TEST(Regulator, LambdaOfFourIsConstant)
{
    LocalSetup S = local_setup(cyc_field(3), 3, 20);
    PGroupRing l = lambda_ip(S, semilocal_from_global(S, rational(4)), 0);
    PadicElem lg = plog(PadicElem(S.L, 4));
    for (auto& c : l.c) EXPECT_TRUE(c.equals(lg));
}

// alpha_c = 3^-1 Tr(zeta/(1 - zeta) log 4) = -log(4)/3, and log 4 = 21 mod 27
TEST(Regulator, SValueMuThreeUnitFour)
{
    LocalSetup S = local_setup(cyc_field(3), 3, 20);
    PGroupRing s = s_value(S, {semilocal_from_global(S, rational(4))});
    PadicElem z = PadicElem::pi(S.L) + PadicElem(S.L, 1);
    PadicElem oracle = local_trace(z / (PadicElem(S.L, 1) - z)) * plog(PadicElem(S.L, 4)) * PadicElem(S.L, Q(1, 3));
    for (auto& c : s.c) {
        ASSERT_TRUE(c.in_Qp());
        EXPECT_TRUE(c.equals(oracle));
        EXPECT_EQ(c.to_Qp(S.Qp).residue_mod(2), 2);
    }
}

// alpha_c = p^-(n+1) Tr(zeta/(1 - zeta) log j sigma_c(u)) on the coefficient of sigma_c^-1
TEST(Regulator, SValueMatchesTraceFormula)
{
    for (auto [p, n] : {std::pair{3L, 0L}, {3L, 1L}, {5L, 0L}}) {
        long f = 1;
        for (long i = 0; i <= n; ++i) f *= p;
        Extension K = cyc_field(f);
        LocalSetup S = local_setup(K, p, 24);
        std::mt19937_64 rng(5 + p + n);
        SemilocalUnit u = random_semilocal(S, rng);
        PGroupRing s = s_value(S, {u});
        PadicElem z = PadicElem::pi(S.L) + PadicElem(S.L, 1);
        PadicElem w = z / (PadicElem(S.L, 1) - z);
        PadicElem scale(S.L, Q(1, f));
        PadicElem lg = plog(u.comp[0][0]);
        for (long c = 1; c < f; ++c) {
            if (c % p == 0) continue;
            long g = K.q.apply_index(K.M->class_of(KElem(c, 0)));
            long ginv = K.G->index(K.G->neg(K.G->elem(g)));
            PadicElem alpha = local_trace(w * apply_aut(lg, LocalAut{0, c})) * scale;
            EXPECT_TRUE(s.c[ginv].equals(alpha)) << p << " " << n << " c=" << c;
        }
    }
}

TEST(Regulator, LambdaOfExpIsRho)
{
    LocalSetup S = local_setup(cyc_field(9), 3, 20);
    KNum x;
    x.z = CycNum(9) * (CycNum::root(1, 9) + CycNum(2) * CycNum::root(4, 9));
    EXPECT_TRUE(same(lambda_ip(S, exp_semilocal(S, x), 0), rho_i(S, x, 0)));

    LocalSetup T = local_setup(desk_field(), 7, 20);
    KNum y = quad(KElem(Q(7), Q(14), 2), KElem(Q(-7), Q(7), 2));
    for (int i = 0; i < 2; ++i) EXPECT_TRUE(same(lambda_ip(T, exp_semilocal(T, y), i), rho_i(T, y, i))) << i;
}

TEST(Regulator, Equivariance)
{
    for (long f : {5L, 9L, 7L}) {
        long p = f == 5 ? 3 : f == 9 ? 3 : 7;
        LocalSetup S = local_setup(cyc_field(f), p, 16);
        std::mt19937_64 rng(f);
        SemilocalUnit u = random_semilocal(S, rng);
        PGroupRing l = lambda_ip(S, u, 0);
        for (long h = 0; h < S.K.G->size(); ++h)
            EXPECT_TRUE(same(lambda_ip(S, semilocal_act(S, h, u), 0), l.shifted(h))) << f << " " << h;
    }
    LocalSetup T = local_setup(desk_field(), 7, 16);
    std::mt19937_64 rng(3);
    SemilocalUnit u = random_semilocal(T, rng);
    for (int i = 0; i < 2; ++i)
        EXPECT_TRUE(same(lambda_ip(T, semilocal_act(T, 1, u), i), lambda_ip(T, u, i).shifted(1))) << i;
}

TEST(Regulator, ActionMatchesGlobalAction)
{
    LocalSetup S = local_setup(cyc_field(7), 7, 12);
    KNum x;
    x.z = CycNum(1) + CycNum(7) * CycNum::root(2, 7);
    for (long h = 0; h < S.K.G->size(); ++h) {
        SemilocalUnit a = semilocal_act(S, h, semilocal_from_global(S, x));
        SemilocalUnit b = semilocal_from_global(S, knum_act(S, h, x));
        EXPECT_TRUE(a.comp[0][0].equals(b.comp[0][0])) << h;
    }
}

TEST(Regulator, Alternating)
{
    LocalSetup T = local_setup(desk_field(), 7, 16);
    std::mt19937_64 rng(11);
    SemilocalUnit u = random_semilocal(T, rng), v = random_semilocal(T, rng);
    EXPECT_TRUE(regulator(T, {u, u}).is_zero());
    EXPECT_TRUE(same(regulator(T, {u, v}), PGroupRing(T.K.G) - regulator(T, {v, u})));
    // multilinear in the first slot
    SemilocalUnit w = random_semilocal(T, rng);
    EXPECT_TRUE(same(regulator(T, {semilocal_mul(u, w), v}), regulator(T, {u, v}) + regulator(T, {w, v})));
}

TEST(Regulator, RootsOfUnityInKernel)
{
    LocalSetup S = local_setup(cyc_field(9), 3, 16);
    KNum z;
    z.z = CycNum::root(1, 9);
    EXPECT_TRUE(lambda_ip(S, semilocal_from_global(S, z), 0).is_zero());
}

TEST(Regulator, NormCompatibility)
{
    auto R = ray_data(parse_cycle(QQ, "9*inf"));
    Extension big = full_extension(R);
    Extension small = make_extension(R, subgroup_generated(*R->G, {R->G->elem(R->class_of(KElem(4, 0)))}));
    ASSERT_EQ(small.degree(), 2);
    LocalSetup Sb = local_setup(big, 3, 20), Ss = local_setup(small, 3, 20);
    KNum a;
    a.z = CycNum(3) * (CycNum::root(1, 9) - CycNum(2) * CycNum::root(2, 9));
    KNum tr;
    for (long b : {1L, 4L, 7L}) tr.z += a.z.galois(b);
    PGroupRing lb = regulator(Sb, {exp_semilocal(Sb, a)});
    PGroupRing ls = regulator(Ss, {exp_semilocal(Ss, tr)});
    GroupHom res = restriction(big, small);
    PGroupRing proj(small.G);
    for (long g = 0; g < big.G->size(); ++g) {
        long h = res.apply_index(g);
        proj.c[h] = proj.c[h] + lb.c[g];
    }
    EXPECT_TRUE(same(proj, ls));
}

TEST(Integrality, CyclotomicPrimePower)
{
    for (auto [p, n] : {std::pair{3L, 0L}, {3L, 1L}, {5L, 0L}, {7L, 0L}}) {
        long f = 1;
        for (long i = 0; i <= n; ++i) f *= p;
        LocalSetup S = local_setup(cyc_field(f), p, 30);
        EXPECT_EQ(S.delta(), 0);
        std::vector<Theta> th;
        std::mt19937_64 rng(17 * p + n);
        for (int t = 0; t < 5; ++t) th.push_back({{random_semilocal(S, rng)}, "random"});
        IntegralityReport r = integrality_check(S, th);
        EXPECT_TRUE(r.in_Qp);
        EXPECT_GE(r.precision, 10);
        EXPECT_TRUE(r.integral) << p << " " << n << " min " << r.min_valuation;
        EXPECT_EQ(r.hyp.covered_by, "k=Q");
    }
}

TEST(Integrality, UnramifiedMuFive)
{
    LocalSetup S = local_setup(cyc_field(5), 3, 30);
    EXPECT_EQ(S.delta(), 1);
    std::vector<Theta> th;
    std::mt19937_64 rng(23);
    for (int t = 0; t < 5; ++t) th.push_back({{random_semilocal(S, rng)}, "random"});
    th.push_back(build_theta(S, rng));
    IntegralityReport r = integrality_check(S, th);
    EXPECT_TRUE(r.in_Qp);
    EXPECT_GE(r.min_valuation, 1);
    EXPECT_TRUE(r.integral);
    EXPECT_TRUE(r.hyp.p_unramified);
}

TEST(Integrality, TwistIndependence)
{
    Extension K = cyc_field(7);
    for (long t : {3L, 5L}) {
        LocalSetup S1 = local_setup(K, 3, 20), S2 = local_setup(K, 3, 20, {t, false});
        std::mt19937_64 r1(9), r2(9);
        PGroupRing a = s_value(S1, build_theta(S1, r1).u), b = s_value(S2, build_theta(S2, r2).u);
        for (size_t i = 0; i < a.c.size(); ++i) {
            ASSERT_TRUE(a.c[i].in_Qp());
            EXPECT_TRUE(a.c[i].to_Qp(S1.Qp).equals(b.c[i].to_Qp(S2.Qp))) << t << " " << i;
        }
    }
}

TEST(Integrality, RootsOfUnityOrder)
{
    EXPECT_EQ(roots_of_unity_order(cyc_field(3)), 6);
    EXPECT_EQ(roots_of_unity_order(cyc_field(5)), 10);
    EXPECT_EQ(roots_of_unity_order(cyc_field(4)), 4);
    EXPECT_EQ(roots_of_unity_order(cyc_field(9)), 18);
}

TEST(Desk, KummerGenerator)
{
    Extension K = desk_field();
    ASSERT_EQ(K.degree(), 2);
    EXPECT_EQ(kummer_generator(K), KElem(Q(5), Q(4), 2));
}

TEST(Desk, PlacesAndDelta)
{
    LocalSetup S = local_setup(desk_field(), 7, 20);
    ASSERT_EQ(S.places.size(), 2u);
    EXPECT_EQ(S.places[0].D.size(), 2u);  // inert
    EXPECT_FALSE(S.places[0].ramified);
    EXPECT_TRUE(S.places[1].ramified);
    EXPECT_EQ(S.delta(), 1);
    EXPECT_EQ(S.L->kind, LocalField::Tame);
}

TEST(Desk, ThetaRegulatorHasUnitCoefficient)
{
    LocalSetup S = local_setup(desk_field(), 7, 24);
    std::mt19937_64 rng(1);
    Theta th = build_theta(S, rng);
    EXPECT_TRUE(th.regulator_unit);
    // Exp of p O_K: each lambda entry has valuation >= 1
    PGroupRing R = regulator(S, th.u);
    EXPECT_GE(R.min_valuation(), 2);
    PGroupRing deg(S.K.G);
    deg.c[1] = PadicElem(S.L, 1);
    deg.c[0] = PadicElem(S.L, -1);
    EXPECT_FALSE(is_group_ring_unit(deg));
}

TEST(Desk, SValueVanishesAndHypotheses)
{
    LocalSetup S = local_setup(desk_field(), 7, 24);
    std::mt19937_64 rng(1);
    IntegralityReport r = integrality_check(S, {build_theta(S, rng), {{random_semilocal(S, rng), random_semilocal(S, rng)}, "random"}});
    for (auto& s : r.s) EXPECT_TRUE(s.is_zero());
    EXPECT_TRUE(r.integral);
    EXPECT_TRUE(r.hyp.e_minus_zero);
    EXPECT_FALSE(r.hyp.ram_away_from_p);
    EXPECT_TRUE(r.hyp.p_coprime_wK);
    EXPECT_FALSE(r.hyp.q0.empty());
}

TEST(Desk, RootSwapKeepsValuationProfile)
{
    Extension K = desk_field();
    LocalSetup A = local_setup(K, 7, 20), B = local_setup(K, 7, 20, {1, true});
    std::mt19937_64 ra(2), rb(2);
    PGroupRing x = regulator(A, build_theta(A, ra).u), y = regulator(B, build_theta(B, rb).u);
    auto profile = [](const PGroupRing& r) {
        std::vector<Q> v;
        for (auto& c : r.c) v.push_back(c.val_or_prec());
        std::sort(v.begin(), v.end());
        return v;
    };
    EXPECT_EQ(profile(x), profile(y));
}

TEST(Desk, InertPrimeRejected)
{
    EXPECT_THROW(local_setup(desk_field(), 3, 20), std::domain_error);
}
