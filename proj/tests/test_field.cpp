#include <gtest/gtest.h>

#include "tz/arith.hpp"
#include "tz/field.hpp"

using namespace tz;

static const BaseField QQ{0}, K2{2}, K5{5};

TEST(Units, FundamentalUnits)
{
    EXPECT_EQ(fundamental_unit(K2), parse_elem(K2, "1+sqrt2"));
    EXPECT_EQ(fundamental_unit(K5), parse_elem(K5, "(1+sqrt5)/2"));
    EXPECT_EQ(unit_data(K2).eps_plus, parse_elem(K2, "3+2*sqrt2"));
    EXPECT_EQ(unit_data(K2).norm_eps, Q(-1));
    EXPECT_EQ(fundamental_unit(BaseField{3}), parse_elem(BaseField{3}, "2+sqrt3"));
    EXPECT_EQ(fundamental_unit(BaseField{7}), parse_elem(BaseField{7}, "8+3*sqrt7"));
    EXPECT_EQ(fundamental_unit(BaseField{13}), parse_elem(BaseField{13}, "(3+sqrt13)/2"));
    EXPECT_EQ(unit_data(QQ).eps_plus, KElem(1, 0));
}

TEST(Units, NarrowClassNumber)
{
    EXPECT_TRUE(narrow_class_number_one(K2));
    EXPECT_TRUE(narrow_class_number_one(K5));
    EXPECT_TRUE(narrow_class_number_one(BaseField{13}));
    EXPECT_FALSE(narrow_class_number_one(BaseField{3}));   // N(eps) = +1
    EXPECT_FALSE(narrow_class_number_one(BaseField{10}));  // class number 2
}

TEST(Elements, SignsAndParsing)
{
    KElem x = parse_elem(K2, "3-2*sqrt2");
    EXPECT_EQ(x.sign(1), 1);
    EXPECT_EQ(x.sign(2), 1);
    EXPECT_EQ(parse_elem(K2, "1-sqrt2").sign(1), -1);
    EXPECT_EQ(parse_elem(K2, "1-sqrt2").sign(2), 1);
    EXPECT_EQ(parse_elem(K5, "w"), parse_elem(K5, "(1+sqrt5)/2"));
    EXPECT_THROW(parse_elem(K2, "sqrt3"), std::invalid_argument);
}

TEST(Lattices, HnfAndContainment)
{
    Lattice P = Lattice::ideal(K2, {parse_elem(K2, "sqrt2")});
    EXPECT_EQ(P.norm(), Q(2));
    EXPECT_TRUE(P.contains(KElem(2, 2)));
    EXPECT_FALSE(P.contains(KElem(1, 2)));
    Lattice I = Lattice::ideal(K2, {parse_elem(K2, "3+sqrt2")});
    EXPECT_EQ(I.norm(), Q(7));
    EXPECT_EQ((P * I).norm(), Q(14));
    EXPECT_EQ(I * I.inverse(), Lattice::unit(K2));
    Lattice J = Lattice::ideal(K5, {KElem(3, 5)});
    EXPECT_EQ(J.norm(), Q(9));
    EXPECT_EQ(J.inverse() * J, Lattice::unit(K5));
}

TEST(Lattices, PrimeFactorisation)
{
    // 7 splits in Q(sqrt2); 3 is inert; 2 ramifies
    EXPECT_EQ(primes_above(K2, 7).size(), 2u);
    EXPECT_EQ(primes_above(K2, 3).size(), 1u);
    EXPECT_EQ(primes_above(K2, 3)[0].normP, 9);
    EXPECT_EQ(primes_above(K2, 2).size(), 1u);
    auto f = factor_ideal(Lattice::ideal(K2, {KElem(14, 2)}));
    long total = 0;
    for (auto& [P, e] : f) total += e;
    EXPECT_EQ(total, 4);  // (sqrt2)^2 p p'
    EXPECT_EQ(different_generator(K2), parse_elem(K2, "4+2*sqrt2"));
}

TEST(RayClass, RationalFive)
{
    auto rc = ray_class_group(parse_cycle(QQ, "5*inf"));
    EXPECT_EQ(rc.G->orders(), std::vector<long>{4});
    auto rc2 = ray_class_group(parse_cycle(QQ, "5"));
    EXPECT_EQ(rc2.G->size(), 2);
    for (long a = 1; a < 5; ++a) {
        // labels are the least residues
        long g = rc.class_of(KElem(a, 0));
        EXPECT_EQ(rc.label(g), "s" + std::to_string(a));
    }
}

TEST(RayClass, QuadraticInstances)
{
    auto rc = ray_class_group(parse_cycle(K2, "(sqrt2)*(3+sqrt2)*inf1*inf2"));
    EXPECT_EQ(rc.G->size(), 2);
    EXPECT_EQ(rc.unit_count, 6);
    EXPECT_EQ(rc.image_Ez, 3);
    auto t = ray_class_group(parse_cycle(K5, "1*inf1*inf2"));
    EXPECT_EQ(t.G->size(), 1);
    EXPECT_EQ(ray_class_group(parse_cycle(K2, "3*inf1*inf2")).G->size(), 2);
    EXPECT_EQ(ray_class_group(parse_cycle(K5, "3*inf1*inf2")).G->size(), 2);
    EXPECT_EQ(ray_class_group(parse_cycle(K5, "(sqrt5)*inf1*inf2")).G->size(), 2);
    EXPECT_THROW(ray_class_group(parse_cycle(BaseField{3}, "inf1*inf2")), std::domain_error);
}

TEST(RayClass, ExactSequenceAndProjection)
{
    for (long f : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}) {
        auto rc = ray_class_group(parse_cycle(QQ, std::to_string(f) + "*inf"));
        EXPECT_EQ(rc.G->size(), euler_phi(f));
        for (long g : divisors(f)) {
            auto rn = ray_class_group(parse_cycle(QQ, std::to_string(g) + "*inf"));
            auto h = ray_projection(rc, rn);
            EXPECT_TRUE(h.surjective());
            for (long a = 1; a <= f; ++a)
                if (std::gcd(a, f) == 1)
                    EXPECT_EQ(h.apply_index(rc.class_of(KElem(a, 0))), rn.class_of(KElem(a % g == 0 ? g : a % g, 0)));
        }
    }
}

TEST(Torsion, Examples)
{
    Lattice Z1 = Lattice::unit(QQ);
    auto t3 = torsion_classes(Lattice::ideal(QQ, {KElem(3, 0)}), Z1);
    ASSERT_EQ(t3.size(), 2u);
    EXPECT_EQ(t3[0], KElem(Q(1, 3), Q(0), 0));
    EXPECT_EQ(t3[1], KElem(Q(2, 3), Q(0), 0));
    auto t1 = torsion_classes(Z1, Z1);
    ASSERT_EQ(t1.size(), 1u);
    EXPECT_TRUE(t1[0].is_zero());
    Lattice g = Lattice::ideal(K2, {parse_elem(K2, "sqrt2")});
    auto t2 = torsion_classes(g, Lattice::unit(K2));
    ASSERT_EQ(t2.size(), 1u);
    EXPECT_FALSE(Lattice::unit(K2).contains(t2[0]));
    EXPECT_TRUE(Lattice::unit(K2).contains(parse_elem(K2, "sqrt2") * t2[0]));
    // counts equal |(O/g)^x|
    Lattice g6 = Lattice::ideal(QQ, {KElem(12, 0)});
    EXPECT_EQ((long)torsion_classes(g6, Z1).size(), 4);
}

TEST(Torsion, ClassOfTorsion)
{
    auto n = ray_class_group(parse_cycle(QQ, "3*inf"));
    Lattice J = Lattice::ideal(QQ, {KElem(3, 0)});
    EXPECT_EQ(class_of_torsion(n, KElem(Q(1, 3), Q(0), 0), J), 0);
    EXPECT_EQ(n.label(class_of_torsion(n, KElem(Q(2, 3), Q(0), 0), J)), "s2");
    // independent of representative
    EXPECT_EQ(class_of_torsion(n, KElem(Q(-1, 3), Q(0), 0), J), class_of_torsion(n, KElem(Q(2, 3), Q(0), 0), J));
    EXPECT_EQ(class_of_torsion(n, KElem(Q(7, 3), Q(0), 0), J), class_of_torsion(n, KElem(Q(1, 3), Q(0), 0), J));
}

TEST(Torsion, BuildA)
{
    auto n = ray_class_group(parse_cycle(QQ, "3*inf"));
    GroupRingElem A = build_A(n);
    EXPECT_EQ(A.coeff(n.class_of(KElem(1, 0))), CycNum::root(1, 3));
    EXPECT_EQ(A.coeff(n.class_of(KElem(2, 0))), CycNum::root(2, 3));
    auto z = ray_class_group(parse_cycle(QQ, "1*inf"));
    EXPECT_EQ(build_A(z), GroupRingElem::identity(z.G, CycNum(1)));
    auto z2 = ray_class_group(parse_cycle(K2, "1*inf1*inf2"));
    EXPECT_EQ(build_A(z2), GroupRingElem::identity(z2.G, CycNum(1)));
    // quadratic character mod 3 on (Z/3)^x: Gauss sum
    Character chi{n.G, Elem{1}};
    CycNum g = char_apply(chi.conj(), A);
    EXPECT_EQ(g, CycNum::root(1, 3) - CycNum::root(2, 3));
    EXPECT_EQ(g * g.conj(), CycNum(3));
}

TEST(WClasses, OrbitReproducesRationalCharacters)
{
    auto m = ray_class_group(parse_cycle(QQ, "5*inf"));
    auto W = w_orbit(m);
    for (long c = 0; c < m.G->size(); ++c) {
        // xi_c(1/5) = e(a/5) with a the residue of the class
        long a = m.R->elem(m.rep[c]).a.get_num().get_si();
        EXPECT_EQ(W[c].xi(KElem(Q(1, 5), Q(0), 0)), CycNum::root(a, 5));
        EXPECT_TRUE(w_equivalent(m, W[c], W[c]));
        for (long d = 0; d < m.G->size(); ++d)
            if (d != c) EXPECT_FALSE(w_equivalent(m, W[c], W[d]));
    }
}
