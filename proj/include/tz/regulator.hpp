#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "tz/padic.hpp"
#include "tz/zeta.hpp"

namespace tz {

// group ring over Gal(K/k) with dense p-adic coefficients
struct PGroupRing {
    GroupPtr G;
    std::vector<PadicElem> c;

    PGroupRing() = default;
    explicit PGroupRing(GroupPtr g) : G(g), c(g->size()) {}
    PGroupRing operator+(const PGroupRing& o) const;
    PGroupRing operator-(const PGroupRing& o) const;
    PGroupRing operator*(const PGroupRing& o) const;
    PGroupRing shifted(long g) const;  // times the group element g
    PGroupRing scaled(const PadicElem& s) const;
    Q min_valuation() const;  // over nonzero coefficients; absprec when all vanish
    long precision() const;   // min absprec over coefficients
    bool is_zero() const;
    json to_json() const;
};

// x invertible in L[G]: nonzero determinant of multiplication by x
bool is_group_ring_unit(const PGroupRing& x);

// elements of K: k = Q uses z (K inside Q(mu_f)); otherwise a + b sqrt(gamma)
struct KNum {
    CycNum z;
    KElem a, b;
};

struct SetupOptions {
    long j_twist = 1;         // k = Q: use j o sigma_t
    bool swap_roots = false;  // quadratic k: use the other Hensel root for sqrt D
};

// completions of K above p with the decomposition data needed by lambda_{i,p}
struct LocalSetup {
    BaseField k;
    long p = 0;
    long prec = 0;
    Extension K;
    SetupOptions opt;
    LocalFieldPtr L;     // ambient field containing every j tau_i(K)
    LocalFieldPtr Qp;
    SplitEmbedding emb;

    // k = Q
    long f = 1;               // K inside Q(mu_f)
    std::vector<long> b_of;   // g -> least b with sigma_b|K = g
    // quadratic k
    KElem gamma;
    std::vector<PadicElem> root;  // j tau_i(sqrt gamma)

    struct Place {
        std::vector<long> D;      // decomposition group
        std::vector<long> reps;   // coset representatives of G/D
        std::map<long, LocalAut> hat;
        std::vector<LocalAut> fix;  // automorphisms of L fixing the completion
        bool ramified = false;
    };
    std::vector<Place> places;
    Cycle conductor;
    GroupRingElem phi;  // Phi_{K/k}(0)

    int d() const { return k.degree(); }
    long delta() const;
};

LocalSetup local_setup(const Extension& K, long p, long prec, const SetupOptions& opt = {});

// K = k(sqrt gamma) for quadratic K/k, gamma a product of -1, eps and prime generators
KElem kummer_generator(const Extension& K);

KNum knum_mul(const LocalSetup& S, const KNum& x, const KNum& y);
KNum knum_act(const LocalSetup& S, long g, const KNum& x);
PadicElem embed_global(const LocalSetup& S, const KNum& x, int i, long g = 0);  // j tau_i(g x)

// components comp[i][r] = j tau_i(r^-1 u) for the coset representatives r of place i
struct SemilocalUnit {
    std::vector<std::vector<PadicElem>> comp;
    json to_json() const;
};

SemilocalUnit semilocal_from_global(const LocalSetup& S, const KNum& x);
SemilocalUnit exp_semilocal(const LocalSetup& S, const KNum& x);  // Exp_p on p O_K
SemilocalUnit semilocal_mul(const SemilocalUnit& u, const SemilocalUnit& v);
SemilocalUnit semilocal_act(const LocalSetup& S, long h, const SemilocalUnit& u);
SemilocalUnit random_semilocal(const LocalSetup& S, std::mt19937_64& rng);

PGroupRing lambda_ip(const LocalSetup& S, const SemilocalUnit& u, int i);
PGroupRing rho_i(const LocalSetup& S, const KNum& x, int i);
PGroupRing regulator(const LocalSetup& S, const std::vector<SemilocalUnit>& theta);
PGroupRing phi_star_embedded(const LocalSetup& S);  // j(sqrt d_k Phi_{K/k}(0)^*)
PGroupRing s_value(const LocalSetup& S, const std::vector<SemilocalUnit>& theta);

struct Theta {
    std::vector<SemilocalUnit> u;
    std::string origin;
    bool regulator_unit = false;  // R(theta) invertible in the group ring (checked for theta_0)
};
// theta_0 = Exp(y_1 alpha) ^ ... ^ Exp(y_d alpha) for a normal basis generator alpha in p O_K
Theta build_theta(const LocalSetup& S, std::mt19937_64& rng, KNum* alpha_out = nullptr);
bool is_normal_basis(const LocalSetup& S, const KNum& alpha);

struct Hypotheses {
    bool split = true;
    bool ram_away_from_p = false;  // f(K) has a prime factor not above p
    bool p_coprime_wK = false;     // p does not divide the number of roots of unity in K
    bool e_minus_zero = false;
    bool p_unramified = false;
    std::string covered_by;  // label of the case giving the bound, empty if none
    Cycle augmented;         // the cycle f' p_1^{n_1+1}..p_d^{n_d+1} inf
    std::string q0;          // auxiliary prime when no ramified prime lies away from p
};
Hypotheses hypotheses(const LocalSetup& S);
long roots_of_unity_order(const Extension& K);  // k = Q only

struct IntegralityReport {
    std::vector<PGroupRing> s;  // per theta, coefficients in Q_p
    std::vector<std::string> origins;
    Q min_valuation;
    long precision = 0;
    long delta = 0;
    bool in_Qp = true;
    bool precision_ok = false;
    bool integral = false;
    Hypotheses hyp;
    json to_json() const;
};
IntegralityReport integrality_check(const LocalSetup& S, const std::vector<Theta>& thetas);

}  // namespace tz
