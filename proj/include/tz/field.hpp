#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tz/exact.hpp"

namespace tz {

// ---------------------------------------------------------------------------
// k = Q (D = 0) or Q(sqrt D), D > 1 squarefree

struct BaseField {
    long D = 0;
    bool quadratic() const { return D != 0; }
    int degree() const { return D ? 2 : 1; }
    bool half() const { return D % 4 == 1; }  // omega = (1 + sqrt D)/2
    long disc() const { return D == 0 ? 1 : (half() ? D : 4 * D); }
    std::string name() const { return D ? "Q(sqrt" + std::to_string(D) + ")" : "Q"; }
    friend bool operator==(const BaseField& a, const BaseField& b) { return a.D == b.D; }
};

BaseField parse_field(const std::string& s);

// a + b sqrt D
struct KElem {
    Q a = 0, b = 0;
    long D = 0;

    KElem() = default;
    KElem(long n, long D_ = 0) : a(n), b(0), D(D_) {}
    KElem(Q a_, Q b_, long D_) : a(std::move(a_)), b(std::move(b_)), D(D_) { a.canonicalize(); b.canonicalize(); }

    static KElem omega(const BaseField& k);
    static KElem from_omega(const BaseField& k, const Q& x, const Q& y);  // x + y omega
    std::pair<Q, Q> omega_coords() const;

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }
    KElem conj() const { return KElem(a, -b, D); }  // tau_2 relative to tau_1
    Q norm() const { return a * a - b * b * D; }
    Q trace() const { return D ? 2 * a : a; }
    KElem inv() const;
    int sign(int i) const;  // sign of tau_i, i in {1,2}
    bool totally_positive() const;
    bool integral() const;

    KElem& operator+=(const KElem& o) { a += o.a; b += o.b; D = D ? D : o.D; return *this; }
    KElem& operator-=(const KElem& o) { a -= o.a; b -= o.b; D = D ? D : o.D; return *this; }
    friend KElem operator+(KElem x, const KElem& y) { return x += y; }
    friend KElem operator-(KElem x, const KElem& y) { return x -= y; }
    KElem operator-() const { return KElem(-a, -b, D); }
    friend KElem operator*(const KElem& x, const KElem& y);
    friend KElem operator*(const Q& s, const KElem& y) { return KElem(s * y.a, s * y.b, y.D); }
    friend KElem operator/(const KElem& x, const KElem& y) { return x * y.inv(); }
    friend bool operator==(const KElem& x, const KElem& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const KElem& x, const KElem& y) { return !(x == y); }

    std::string str() const;
    json to_json() const { return json{q_str(a), q_str(b)}; }
};

KElem parse_elem(const BaseField& k, const std::string& s);

// coordinates of x on a Q-basis (w1, w2) of k (or w1 of Q)
std::vector<Q> solve_coords(const BaseField& k, const std::vector<KElem>& basis, const KElem& x);

// ---------------------------------------------------------------------------
// full rank Z-lattices in k: basis A, B + C omega (A, C > 0, 0 <= B < A)

struct Lattice {
    BaseField k;
    Q A = 1, B = 0, C = 1;

    static Lattice span(const BaseField& k, const std::vector<KElem>& gens);
    static Lattice ideal(const BaseField& k, const std::vector<KElem>& gens);  // O-span
    static Lattice unit(const BaseField& k) { return ideal(k, {KElem(1, k.D)}); }

    std::vector<KElem> basis() const;
    bool contains(const KElem& x) const;
    bool contains(const Lattice& L) const;
    Q norm() const { return k.quadratic() ? A * C : A; }  // index relative to O
    bool integral() const;
    Lattice operator*(const Lattice& o) const;
    Lattice scaled(const KElem& x) const;
    Lattice inverse() const;  // ideals only
    Lattice sum(const Lattice& o) const;
    Lattice intersect_Q() const;  // I cap Q as a lattice in Q, returns generator in A
    Q rational_generator() const;  // positive generator of I cap Q
    // positive generator of Q_{>0} v cap L
    KElem primitive_along(const KElem& v) const;
    friend bool operator==(const Lattice& x, const Lattice& y) { return x.A == y.A && x.B == y.B && x.C == y.C; }
    std::string str() const;
};

struct PrimeIdeal {
    Lattice P;
    long p;      // rational prime below
    long normP;  // absolute norm
};

std::vector<PrimeIdeal> primes_above(const BaseField& k, long p);
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const Lattice& I);  // integral I
std::optional<KElem> find_generator(const Lattice& I, long bound = 400);

// ---------------------------------------------------------------------------
// units

struct UnitData {
    KElem eps;        // fundamental unit (1 for Q)
    Q norm_eps = 1;
    KElem eps_plus;   // generator of totally positive units
};

UnitData unit_data(const BaseField& k);
KElem fundamental_unit(const BaseField& k);
// totally positive generator of the different
KElem different_generator(const BaseField& k);
// Cl(k) narrow trivial: check N(eps) = -1 and principal primes below Minkowski bound
bool narrow_class_number_one(const BaseField& k);
KElem totally_positive_generator(const Lattice& I);  // throws if none found

// ---------------------------------------------------------------------------
// cycles and ray class groups

struct Cycle {
    BaseField k;
    Lattice f;
    std::vector<int> z;  // real places in {1} or {1,2}
    bool all_infinite() const { return (int)z.size() == k.degree(); }
    std::string str() const;
    std::string key() const;  // canonical text for hashing
};

Cycle parse_cycle(const BaseField& k, const std::string& s);

class ResidueRing {
public:
    explicit ResidueRing(const Lattice& f);
    long size() const { return nA_ * nC_; }
    long index(const KElem& x) const;  // x integral
    KElem elem(long idx) const;
    long mul(long i, long j) const { return index(elem(i) * elem(j)); }
    bool is_unit(long i) const;
    const Lattice& modulus() const { return f_; }

private:
    Lattice f_;
    long nA_, nC_;
    Z A_, B_, C_;
};

struct RayClassData {
    Cycle m;
    GroupPtr G;
    std::shared_ptr<ResidueRing> R;
    std::vector<long> units;            // residue indices of (O/f)^x
    std::vector<long> coset_of_unit;    // residue index -> group index (-1 if not a unit)
    std::vector<long> rep;              // group index -> residue index of a representative
    std::vector<KElem> Ez;              // generators of E_z
    long image_Ez = 1;                  // |im(E_z -> (O/f)^x)|
    long unit_count = 1;                // |(O/f)^x|
    KElem eps_m;                        // generator of E_m modulo torsion (1 for Q)
    long eps_m_steps = 1;               // eps_m = eps_plus^steps
    bool eps_m_sign_free = false;       // -1 in E_m

    long class_of(const KElem& alpha) const;  // alpha integral, prime to f, z-positive
    long class_of_ideal(const Lattice& a) const;  // integral, prime to f
    KElem positive_rep(long g) const;  // totally positive element in class g
    std::string label(long g) const;
};

RayClassData ray_class_group(const Cycle& m);
// surjection Cl_m -> Cl_m~ for m~ | m
GroupHom ray_projection(const RayClassData& big, const RayClassData& small);
// [E_z : E_m] computed as a ratio of images, E_z for the z of m
long unit_index(const RayClassData& n, const RayClassData& m);

// ---------------------------------------------------------------------------
// torsion classes, [y;J]_n and A_n

// classes y in g^-1 I / I with annihilator exactly g, canonical representatives
std::vector<KElem> torsion_classes(const Lattice& g, const Lattice& I);
// [y; J]_n = [bJ]_n for b in y + J... with b z-positive
long class_of_torsion(const RayClassData& n, const KElem& y, const Lattice& J);
GroupRingElem build_A(const RayClassData& n);

// the class c . w^0 in the form {x -> e(Tr(alpha x)), f^-1 D^-1}
struct WClass {
    KElem alpha;      // totally positive (z-positive) representative
    Lattice I;        // f^-1 D^-1
    Lattice f;
    CycNum xi(const KElem& x) const;  // e(Tr(alpha x))
};

std::vector<WClass> w_orbit(const RayClassData& m);
// equivalence of {e(Tr(a x)), I} and {e(Tr(b x)), I}
bool w_equivalent(const RayClassData& m, const WClass& u, const WClass& v);

}  // namespace tz
