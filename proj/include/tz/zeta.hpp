#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tz/exact.hpp"
#include "tz/field.hpp"

namespace tz {

using RayPtr = std::shared_ptr<const RayClassData>;

// memoized ray class data
RayPtr ray_data(const Cycle& m);

// integral ideals g containing f
std::vector<Lattice> ideal_divisors(const Lattice& f);
Cycle cycle_of(const BaseField& k, const Lattice& f, std::vector<int> z);
Cycle full_infinity(const Cycle& m);

// value at s = 0 of the partial zeta function of class c of Cl_n
Q partial_zeta_zero(const RayClassData& n, long c);
// value at s = 0 of the twisted zeta function of c . w^0
CycNum twisted_zeta_class(const RayClassData& m, long c);

GroupRingElem theta_zero(const Cycle& n);
GroupRingElem phi_zero(const Cycle& m);

struct Thm22Report {
    Cycle m;
    GroupRingElem lhs, rhs;  // Phi_m(0)^* and the divisor sum
    bool equal = false;
    std::vector<std::pair<std::string, GroupRingElem>> terms;
};
Thm22Report verify_thm22(const Cycle& m);

// ---------------------------------------------------------------------------
// subextensions K of k(m), given by the subgroup H of G_m fixing K

struct Extension {
    RayPtr M;
    std::vector<long> H;  // sorted indices into G_m
    GroupPtr G;           // Gal(K/k)
    GroupHom q;           // G_m -> Gal(K/k)
    std::vector<long> coset_rep;  // index in G -> least element of G_m
    long degree() const { return G->size(); }
};

Extension make_extension(RayPtr M, std::vector<long> H);
Extension full_extension(RayPtr M);
// fixed field of the kernel of chi
Extension kernel_field(RayPtr M, const Character& chi);
// subgroup generated by the given elements
std::vector<long> subgroup_generated(const FinAbGroup& G, const std::vector<Elem>& gens);

// conductor m(K) and the map G_{m(K)} -> Gal(K/k)
struct ConductorData {
    Cycle m;
    RayPtr R;
    GroupHom to_K;
};
ConductorData conductor(const Extension& K);
// Gal(K/k) -> Gal(L/k) for L contained in K, both over the same ambient G_m
GroupHom restriction(const Extension& K, const Extension& L);
// G_n -> Gal(K/k) when K is contained in k(n) and n | m
GroupHom induced_map(const Extension& K, const RayClassData& n);

GroupRingElem theta_field(const Extension& K);
GroupRingElem phi_field(const Extension& K);
// Phi_{K/k}(0) assembled from partial zetas over K cap k(n) for n = g z(K)
GroupRingElem cor23_phi(const Extension& K);

// chi^-1(A_{m(chi)}) for a character of G_m
CycNum gauss_sum(RayPtr M, const Character& chi);

// complex conjugations c_v in Gal(K/k) for the real places v of k (identity when unramified)
std::vector<Elem> complex_conjugations(const Extension& K);
// class of the unit with sign -1 at v and +1 at the other places of z
long conjugation_class(const RayClassData& m, int v);

struct Prop21Report {
    bool idempotent_ok = false;  // e^- x = x
    bool support_ok = false;     // chi(x) != 0 iff chi(c_v) = -1 for all v
    bool q_value_ok = true;      // k = Q: chi_0(Phi) = -1/2 prod (1 - 1/q)
    std::vector<std::pair<std::string, CycNum>> values;  // chi -> chi(Phi)
    bool ok() const { return idempotent_ok && support_ok && q_value_ok; }
};
Prop21Report prop21_check(const Extension& K);

// coefficient Galois action versus multiplication by sigma_t (k = Q)
bool prop22_check(const Extension& K, long t);

}  // namespace tz
