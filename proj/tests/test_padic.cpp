#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tz/arith.hpp"
#include "tz/padic.hpp"

using namespace tz;

static PadicElem random_principal(const LocalFieldPtr& L, oracle::Lcg& g, long minval = 1)
{
    // 1 + p^minval * (random integral combination of the basis)
    std::vector<Z> c(L->degree());
    for (auto& x : c) x = g.next(L->p * L->p * L->p);
    PadicElem t = PadicElem::from_coords(L, c, 0, L->cap);
    return PadicElem(L, 1) + t * PadicElem::pi(L).pow(minval);
}

TEST(Padic, LogOfFourMod27)
{
    auto Q3 = make_unramified(3, 1, 40);
    PadicElem l = plog(PadicElem(Q3, 4));
    EXPECT_EQ(l.residue_mod(3), 21);
    EXPECT_GE(l.absprec(), 38);
    EXPECT_TRUE(plog(PadicElem(Q3, 1)).is_zero());
}

TEST(Padic, LogSeriesOracle)
{
    // 3 - 9/2 + 9 - 81/4 + ... summed exactly as a rational and compared mod 3^12
    auto Q3 = make_unramified(3, 1, 40);
    Q s = 0, z = 3, zn = 3;
    for (int n = 1; n <= 40; ++n) {
        s += (n % 2 ? 1 : -1) * zn / n;
        zn *= z;
    }
    PadicElem diff = plog(PadicElem(Q3, 4)) - PadicElem(Q3, s);
    EXPECT_TRUE(diff.with_prec(12).is_zero());
}

TEST(Padic, ExpLogRoundTrip)
{
    auto Q3 = make_unramified(3, 1, 40);
    PadicElem u(Q3, 10);
    PadicElem back = pexp(plog(u));
    EXPECT_TRUE(back.equals(u));
    EXPECT_GE(back.absprec(), 38);
    EXPECT_THROW(pexp(PadicElem(Q3, 2)), std::domain_error);
}

TEST(Padic, ExpLogRoundTripRamified)
{
    auto L = make_cyclotomic(3, 1, 1, 30);
    oracle::Lcg g(5);
    for (int t = 0; t < 5; ++t) {
        PadicElem u = random_principal(L, g, 4);  // v(u-1) = 4/6 > 1/2
        PadicElem back = pexp(plog(u));
        EXPECT_TRUE(back.equals(u));
        EXPECT_GE(back.absprec(), 20);
    }
}

TEST(Padic, LogIsHomomorphism)
{
    oracle::Lcg g(11);
    for (auto L : {make_cyclotomic(3, 1, 1, 30), make_unramified(7, 2, 30), make_cyclotomic(5, 2, 0, 25),
                   make_tame(7, 2, 2, Z(3), 30)}) {
        for (int t = 0; t < 4; ++t) {
            PadicElem u = random_principal(L, g), v = random_principal(L, g);
            PadicElem d = plog(u * v) - plog(u) - plog(v);
            EXPECT_TRUE(d.is_zero()) << L->describe() << " " << d.str();
            EXPECT_GE(d.absprec(), 15) << L->describe();
        }
    }
}

TEST(Padic, LogKillsRootsOfUnity)
{
    auto L = make_cyclotomic(3, 2, 1, 30);
    EXPECT_TRUE(plog(root_of_unity(L, 9)).is_zero());
    EXPECT_TRUE(plog(root_of_unity(L, 8)).is_zero());
    EXPECT_TRUE(plog(root_of_unity(L, 72)).is_zero());
}

TEST(Padic, TraceOfZetaOverOneMinusZeta)
{
    auto L = make_cyclotomic(3, 1, 0, 40);
    PadicElem z = root_of_unity(L, 3);
    PadicElem x = z / (PadicElem(L, 1) - z);
    PadicElem t1 = local_trace(x), t2 = local_trace_matrix(x);
    ASSERT_TRUE(t1.in_Qp());
    EXPECT_EQ(t1.as_rational(), -1);
    EXPECT_TRUE(t1.equals(t2));
}

TEST(Padic, TraceImplementationsAgree)
{
    oracle::Lcg g(3);
    for (auto L : {make_cyclotomic(3, 1, 1, 25), make_cyclotomic(5, 2, 0, 20), make_tame(7, 2, 2, Z(3), 25),
                   make_unramified(3, 4, 25)}) {
        for (int t = 0; t < 3; ++t) {
            std::vector<Z> c(L->degree());
            for (auto& v : c) v = g.next(1000) - 500;
            PadicElem x = PadicElem::from_coords(L, c, 1, L->cap);
            PadicElem a = local_trace(x), b = local_trace_matrix(x);
            EXPECT_TRUE(a.in_Qp()) << L->describe();
            EXPECT_TRUE(a.equals(b)) << L->describe() << " " << a.str() << " vs " << b.str();
        }
    }
}

TEST(Padic, NormOfUniformizer)
{
    for (long p : {3L, 5L, 7L}) {
        auto L = make_cyclotomic(p, 1, 0, 20);
        PadicElem n = local_norm(root_of_unity(L, p) - PadicElem(L, 1));
        EXPECT_EQ(n.as_rational(), p);
    }
    auto L9 = make_cyclotomic(3, 1, 1, 20);
    EXPECT_EQ(local_norm(PadicElem::pi(L9)).as_rational(), 3);
}

TEST(Padic, Teichmuller)
{
    auto Q3 = make_unramified(3, 1, 30);
    PadicElem w = teichmuller(Q3, {2});
    EXPECT_TRUE(w.equals(PadicElem(Q3, -1)));
    auto Q7 = make_unramified(7, 1, 30);
    PadicElem w3 = teichmuller(Q7, {3});
    EXPECT_TRUE(w3.pow(6).equals(PadicElem(Q7, 1)));
    EXPECT_EQ(w3.residue_mod(1), 3);
    auto H2 = make_unramified(5, 2, 20);
    PadicElem t = teichmuller(H2, {1, 1});
    EXPECT_TRUE(t.pow(24).equals(PadicElem(H2, 1)));
}

TEST(Padic, FrobeniusOrder)
{
    for (int f : {2, 3, 4}) {
        auto H = make_unramified(3, f, 20);
        PadicElem y = PadicElem::y(H);
        PadicElem cur = y;
        for (int i = 1; i < f; ++i) {
            cur = frobenius(cur);
            EXPECT_FALSE(cur.equals(y));
        }
        EXPECT_TRUE(frobenius(cur).equals(y));
        EXPECT_TRUE(frobenius(PadicElem(H, Q(5, 7))).equals(PadicElem(H, Q(5, 7))));
        // Frobenius reduces to the p-th power
        EXPECT_TRUE((frobenius(y) - y.pow(3)).val_or_prec() >= 1);
    }
}

TEST(Padic, FrobeniusFixesCyclotomicPart)
{
    auto L = make_cyclotomic(3, 2, 1, 20);
    PadicElem z = root_of_unity(L, 9);
    EXPECT_TRUE(frobenius(z).equals(z));
    for (long b : {2L, 4L, 5L}) EXPECT_TRUE(apply_aut(z, {0, b}).equals(z.pow(b)));
    PadicElem w = root_of_unity(L, 8);
    EXPECT_TRUE(frobenius(w).equals(w.pow(3)));
}

TEST(Padic, RootsOfUnityCompatible)
{
    auto L = make_cyclotomic(3, 2, 1, 20);
    EXPECT_TRUE(root_of_unity(L, 72).pow(8).equals(root_of_unity(L, 9)));
    EXPECT_TRUE(root_of_unity(L, 72).pow(9).equals(root_of_unity(L, 8)));
    EXPECT_TRUE(root_of_unity(L, 24).pow(3).equals(root_of_unity(L, 8)));
    EXPECT_TRUE(root_of_unity(L, 9).pow(3).equals(root_of_unity(L, 3)));
    EXPECT_THROW(root_of_unity(L, 27), std::domain_error);
    EXPECT_THROW(root_of_unity(L, 5), std::domain_error);
}

TEST(Padic, EmbedCycIsRingHom)
{
    auto L = make_cyclotomic(3, 2, 1, 25);
    oracle::Lcg g(9);
    for (int t = 0; t < 6; ++t) {
        CycNum a = oracle::random_cyc(g, 72), b = oracle::random_cyc(g, 24);
        EXPECT_TRUE(embed_cyc(L, a * b).equals(embed_cyc(L, a) * embed_cyc(L, b)));
        EXPECT_TRUE(embed_cyc(L, a + b).equals(embed_cyc(L, a) + embed_cyc(L, b)));
    }
}

TEST(Padic, InverseIncludingNonUnits)
{
    oracle::Lcg g(21);
    for (auto L : {make_cyclotomic(3, 1, 1, 25), make_tame(7, 2, 2, Z(3), 25), make_unramified(5, 3, 25)}) {
        for (int t = 0; t < 5; ++t) {
            std::vector<Z> c(L->degree());
            for (auto& v : c) v = g.next(50);
            PadicElem x = PadicElem::from_coords(L, c, 0, L->cap) * PadicElem::pi(L).pow(t);
            if (x.is_zero()) continue;
            PadicElem one = x * x.inv();
            EXPECT_TRUE(one.equals(PadicElem(L, 1))) << L->describe();
            EXPECT_EQ((x.inv()).valuation(), -x.valuation());
        }
    }
}

TEST(Padic, TameField)
{
    auto L = make_tame(7, 1, 2, Z(3), 30);
    PadicElem pi = PadicElem::pi(L);
    EXPECT_TRUE((pi * pi).equals(PadicElem(L, 21)));
    EXPECT_EQ(pi.valuation(), Q(1, 2));
    EXPECT_TRUE(apply_aut(pi, {0, 1}).equals(-pi));
    EXPECT_EQ(local_norm(pi).as_rational(), -21);
}

TEST(Padic, SplitEmbeddingQsqrt2)
{
    BaseField k{2};
    auto s = split_embedding(k, 7, 30);
    EXPECT_EQ(s.residue, 3);
    auto Q7 = make_unramified(7, 1, 30);
    KElem r2(Q(0), Q(1), 2);
    EXPECT_EQ(embed_k(Q7, s, r2, 1).residue_mod(1), 3);
    EXPECT_EQ(embed_k(Q7, s, r2, 2).residue_mod(1), 4);
    EXPECT_TRUE(embed_k(Q7, s, r2, 1).pow(2).equals(PadicElem(Q7, 2)));
    KElem a(Q(3), Q(1), 2);
    EXPECT_EQ(embed_k(Q7, s, a, 1).valuation(), 0);
    EXPECT_EQ(embed_k(Q7, s, a, 2).valuation(), 1);
    PadicElem n = embed_k(Q7, s, a, 1) * embed_k(Q7, s, a, 2);
    EXPECT_TRUE(n.equals(PadicElem(Q7, 7)));
    // ring homomorphism
    KElem b(Q(5, 3), Q(-2), 2);
    EXPECT_TRUE(embed_k(Q7, s, a * b, 2).equals(embed_k(Q7, s, a, 2) * embed_k(Q7, s, b, 2)));
    EXPECT_THROW(split_embedding(BaseField{2}, 3, 20), std::domain_error);
    EXPECT_THROW(split_embedding(BaseField{2}, 2, 20), std::domain_error);
}

TEST(Padic, SqrtInUnramifiedQuadratic)
{
    auto H = make_unramified(7, 2, 30);
    PadicElem r = padic_sqrt(PadicElem(H, 3));
    EXPECT_TRUE((r * r).equals(PadicElem(H, 3)));
    EXPECT_FALSE(r.in_Qp());
    EXPECT_TRUE(frobenius(r).equals(-r));
}

TEST(Padic, PrecisionSoundness)
{
    // same pipeline at 40 and 50 digits: reported digits agree
    oracle::Lcg g1(4), g2(4);
    auto A = make_cyclotomic(3, 1, 1, 40), B = make_cyclotomic(3, 1, 1, 50);
    for (int t = 0; t < 3; ++t) {
        std::vector<Z> c(6);
        for (auto& v : c) v = g1.next(100);
        for (int i = 0; i < 6; ++i) g2.next(100);
        PadicElem ua = PadicElem(A, 1) + PadicElem::from_coords(A, c, -1, 40);
        PadicElem ub = PadicElem(B, 1) + PadicElem::from_coords(B, c, -1, 50);
        PadicElem la = local_trace(plog(ua) * root_of_unity(A, 9)), lb = local_trace(plog(ub) * root_of_unity(B, 9));
        long M = la.absprec();
        EXPECT_GE(M, 30);
        EXPECT_EQ(la.residue_mod(M), lb.residue_mod(M));
    }
}

TEST(Padic, Json)
{
    auto Q3 = make_unramified(3, 1, 20);
    json j = PadicElem(Q3, Q(4, 9)).to_json();
    EXPECT_EQ(j["p"], 3);
    EXPECT_EQ(j["val"], "-2");
    EXPECT_EQ(j["prec"], 18);
    auto L = make_tame(7, 2, 2, Z(3), 20);
    EXPECT_EQ(L->tower_json()["tame"][0], 2);
}
