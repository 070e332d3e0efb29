#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tz/exact.hpp"
#include "tz/field.hpp"

namespace tz {

// ---------------------------------------------------------------------------
// local fields: H_f, H_f(zeta_{p^{r+1}}) or H_f(pi) with pi^e = u p (tame)

struct LocalField {
    enum Kind { Unramified, Cyclotomic, Tame };

    long p = 0;
    int f = 1;
    int e = 1;
    Kind kind = Unramified;
    int level = -1;  // zeta_{p^{level+1}} = 1 + pi for Cyclotomic
    Z unit = 1;      // tame: pi^e = unit * p
    long cap = 0;    // coordinates are stored modulo p^cap

    std::vector<Z> h;      // monic defining polynomial of H_f, degree f
    std::vector<Z> E;      // pi^e = -sum_{i<e} E[i] pi^i
    std::vector<Z> frob;   // image of y under Frobenius, mod p^cap
    Z pcap;

    int degree() const { return e * f; }
    long q() const;  // residue field size
    std::string describe() const;
    json tower_json() const;
};

using LocalFieldPtr = std::shared_ptr<const LocalField>;

LocalFieldPtr make_unramified(long p, int f, long prec);
LocalFieldPtr make_cyclotomic(long p, int f, int level, long prec);
LocalFieldPtr make_tame(long p, int f, int e, const Z& unit, long prec);

// elements c * p^-k with c integral on the basis pi^i y^j (index i f + j),
// c known modulo pi^m; a default-constructed element is an exact zero.
// from_coords takes m in p-digits.
class PadicElem {
public:
    PadicElem() = default;
    PadicElem(LocalFieldPtr F, const Q& q);
    PadicElem(LocalFieldPtr F, long n) : PadicElem(std::move(F), Q(n)) {}
    static PadicElem zero(LocalFieldPtr F, long absprec);
    static PadicElem from_coords(LocalFieldPtr F, std::vector<Z> c, long k, long m);
    static PadicElem pi(LocalFieldPtr F);
    static PadicElem y(LocalFieldPtr F);

    const LocalFieldPtr& field() const { return F_; }
    bool exact_zero() const { return !F_; }
    bool is_zero() const;          // zero to its precision
    Q valuation() const;           // throws on zero
    long absprec() const;          // floor of absprec_q
    Q absprec_q() const;           // value known modulo p^absprec (rational for ramified fields)
    Q val_or_prec() const;         // valuation, or absprec for zeros

    PadicElem operator-() const;
    friend PadicElem operator+(const PadicElem& a, const PadicElem& b);
    friend PadicElem operator-(const PadicElem& a, const PadicElem& b) { return a + (-b); }
    friend PadicElem operator*(const PadicElem& a, const PadicElem& b);
    friend PadicElem operator/(const PadicElem& a, const PadicElem& b) { return a * b.inv(); }
    PadicElem& operator+=(const PadicElem& b) { return *this = *this + b; }
    PadicElem& operator*=(const PadicElem& b) { return *this = *this * b; }
    PadicElem inv() const;
    PadicElem pow(long n) const;
    PadicElem with_prec(long absprec) const;  // reduce to at most absprec

    // agreement to the smaller of the two precisions
    bool equals(const PadicElem& o) const { return (*this - o).is_zero(); }

    // coordinate on pi^i y^j as an element of Q_p
    PadicElem coord(int i, int j) const;
    bool in_Qp() const;
    PadicElem to_Qp(const LocalFieldPtr& base) const;
    // the rational number c0 p^-k with c0 in [0, p^m), for elements of Q_p
    Q as_rational() const;
    Z residue_mod(long n) const;  // element of Z_p reduced mod p^n

    // automorphism: y -> Frob^a(y), pi -> image
    PadicElem apply(long a, const PadicElem& pi_image) const;

    json to_json() const;
    std::string str() const;

private:
    LocalFieldPtr F_;
    std::vector<Z> c_;
    long k_ = 0, m_ = 0;
    void normalize();
    int vpi() const;
    static PadicElem make(LocalFieldPtr F, std::vector<Z> c, long k, long mpi);
};

inline bool is_zero(const PadicElem& x) { return x.is_zero(); }
PadicElem mul_int(const PadicElem& x, const Z& n);
inline PadicElem inverse(const PadicElem& x) { return x.inv(); }
PadicElem unit_like(const PadicElem& zero);

// Galois group of L/Q_p as pairs (a, b): Frobenius power a and ramified part b
// (b in (Z/p^{level+1})^x for cyclotomic, b in Z/e for tame via pi -> w^b pi, b = 1 unramified)
struct LocalAut {
    long a = 0, b = 1;
};
std::vector<LocalAut> galois_group(const LocalFieldPtr& L);
PadicElem apply_aut(const PadicElem& x, const LocalAut& s);
PadicElem frobenius(const PadicElem& x, long a = 1);
PadicElem local_trace(const PadicElem& x);         // sum over the Galois group
PadicElem local_trace_matrix(const PadicElem& x);  // trace of multiplication
PadicElem local_norm(const PadicElem& x);

PadicElem plog(const PadicElem& u);
PadicElem pexp(const PadicElem& x);

// Teichmueller lift of an element of the residue field given by coordinates mod p
PadicElem teichmuller(const LocalFieldPtr& L, const std::vector<long>& residue);
// primitive N-th root of unity, N = p^a N' with N' | q - 1 and a <= level + 1;
// deterministic and compatible (zeta_{NM}^M = zeta_N)
PadicElem root_of_unity(const LocalFieldPtr& L, long N);
PadicElem embed_cyc(const LocalFieldPtr& L, const CycNum& x);

// square root in Z_p of a p-adic unit with given residue of the root
Z hensel_sqrt(const Z& a, long p, long residue, long prec);
// square root of x in L (x a unit square); throws if none
PadicElem padic_sqrt(const PadicElem& x);

// j tau_i on k: sqrt D -> the Hensel root = least residue (i = 1) or its negative (i = 2)
struct SplitEmbedding {
    long p = 0;
    long D = 0;
    long residue = 0;  // least residue of the chosen root of D
    Z root;            // modulo p^prec
    long prec = 0;
};
SplitEmbedding split_embedding(const BaseField& k, long p, long prec);
PadicElem embed_k(const LocalFieldPtr& L, const SplitEmbedding& s, const KElem& x, int i);

}  // namespace tz
