#pragma once

#include <gmpxx.h>

#include <functional>
#include <ostream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace tz {

using json = nlohmann::json;
using Q = mpq_class;
using Z = mpz_class;

std::string q_str(const Q& q);
Q q_parse(const std::string& s);

// ---------------------------------------------------------------------------
// CycNum: element of Q(mu_N) in the power basis, N minimal and not 2 mod 4

class CycNum {
public:
    CycNum() : N_(1), c_{Q(0)} {}
    CycNum(long n) : N_(1), c_{Q(n)} {}
    CycNum(const Q& q) : N_(1), c_{q} { c_[0].canonicalize(); }

    static CycNum root(long k, long n);  // e(k/n)
    static CycNum from_coeffs(long N, std::vector<Q> c);

    long conductor() const { return N_; }
    const std::vector<Q>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_rational() const { return N_ == 1; }
    Q rational() const;

    CycNum conj() const { return galois(-1); }
    CycNum galois(long t) const;
    CycNum inv() const;
    CycNum pow(long e) const;
    Q trace() const;  // Tr_{Q(mu_N)/Q}
    Q norm() const;

    // coordinates after lifting to Q(mu_M), N | M, M canonical
    std::vector<Q> lift(long M) const;

    CycNum& operator+=(const CycNum& b);
    CycNum& operator-=(const CycNum& b);
    CycNum& operator*=(const CycNum& b);
    CycNum& operator/=(const CycNum& b) { return *this *= b.inv(); }

    friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
    friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
    friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
    friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }
    CycNum operator-() const;
    friend bool operator==(const CycNum& a, const CycNum& b) { return a.N_ == b.N_ && a.c_ == b.c_; }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    std::string str() const;
    json to_json() const;
    static CycNum from_json(const json& j);

private:
    void minimize();
    long N_;
    std::vector<Q> c_;
};

inline bool is_zero(const CycNum& x) { return x.is_zero(); }
inline std::ostream& operator<<(std::ostream& os, const CycNum& x) { return os << x.str(); }

// ---------------------------------------------------------------------------
// finite abelian groups in invariant factor form

using Elem = std::vector<long>;

class FinAbGroup {
public:
    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<long> orders);

    const std::vector<long>& orders() const { return orders_; }
    size_t rank() const { return orders_.size(); }
    long size() const { return size_; }
    long exponent() const { return orders_.empty() ? 1 : orders_.back(); }

    long index(const Elem& e) const;
    Elem elem(long idx) const;
    Elem zero() const { return Elem(orders_.size(), 0); }
    Elem add(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, long k) const;
    long order(const Elem& a) const;
    Elem normalize(Elem a) const;

    void set_labels(std::vector<std::string> l) { labels_ = std::move(l); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(long idx) const;

    friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) { return a.orders_ == b.orders_; }

private:
    std::vector<long> orders_;
    long size_ = 1;
    std::vector<std::string> labels_;
};

using GroupPtr = std::shared_ptr<const FinAbGroup>;

// structure of an abelian group given by an enumeration and a product
struct AbStructure {
    GroupPtr G;
    std::vector<size_t> gens;  // enumerated element for each generator
    std::vector<long> dlog;    // enumerated element -> index in G
    std::vector<size_t> elem_of;  // index in G -> enumerated element
};

AbStructure decompose_group(size_t n, size_t identity,
                            const std::function<size_t(size_t, size_t)>& mul);

struct GroupHom {
    GroupPtr src, dst;
    std::vector<Elem> images;  // image of each generator of src
    Elem apply(const Elem& e) const;
    long apply_index(long i) const { return dst->index(apply(src->elem(i))); }
    bool surjective() const;
    long kernel_size() const;
};

// ---------------------------------------------------------------------------
// group rings with sparse coefficients; T needs +,-,*, default zero, is_zero

template <class T>
class GroupRing {
public:
    GroupRing() = default;
    explicit GroupRing(GroupPtr G) : G_(std::move(G)) {}

    static GroupRing identity(GroupPtr G, const T& one)
    {
        GroupRing r(G);
        r.set(0, one);
        return r;
    }

    const GroupPtr& group() const { return G_; }
    const std::map<long, T>& terms() const { return c_; }

    T coeff(long idx) const
    {
        auto it = c_.find(idx);
        return it == c_.end() ? T() : it->second;
    }
    T coeff(const Elem& e) const { return coeff(G_->index(e)); }

    void set(long idx, const T& v)
    {
        if (is_zero(v)) c_.erase(idx);
        else c_[idx] = v;
    }
    void add_to(long idx, const T& v)
    {
        auto it = c_.find(idx);
        if (it == c_.end()) set(idx, v);
        else {
            it->second = it->second + v;
            if (is_zero(it->second)) c_.erase(it);
        }
    }

    bool is_zero_elem() const { return c_.empty(); }

    GroupRing& operator+=(const GroupRing& b)
    {
        for (auto& [i, v] : b.c_) add_to(i, v);
        return *this;
    }
    GroupRing& operator-=(const GroupRing& b)
    {
        for (auto& [i, v] : b.c_) add_to(i, -v);
        return *this;
    }
    friend GroupRing operator+(GroupRing a, const GroupRing& b) { return a += b; }
    friend GroupRing operator-(GroupRing a, const GroupRing& b) { return a -= b; }

    friend GroupRing operator*(const GroupRing& a, const GroupRing& b)
    {
        GroupRing r(a.G_);
        for (auto& [i, x] : a.c_) {
            Elem ei = a.G_->elem(i);
            for (auto& [j, y] : b.c_)
                r.add_to(a.G_->index(a.G_->add(ei, a.G_->elem(j))), x * y);
        }
        return r;
    }
    GroupRing scaled(const T& s) const
    {
        GroupRing r(G_);
        for (auto& [i, v] : c_) r.set(i, v * s);
        return r;
    }
    GroupRing map_coeffs(const std::function<T(const T&)>& f) const
    {
        GroupRing r(G_);
        for (auto& [i, v] : c_) r.set(i, f(v));
        return r;
    }
    // multiplication by a group element
    GroupRing shifted(const Elem& g) const
    {
        GroupRing r(G_);
        for (auto& [i, v] : c_) r.set(G_->index(G_->add(G_->elem(i), g)), v);
        return r;
    }

    // (sum a_h h)* = sum a_h h^-1
    GroupRing involution() const
    {
        GroupRing r(G_);
        for (auto& [i, v] : c_) r.set(G_->index(G_->neg(G_->elem(i))), v);
        return r;
    }

    // pi: push forward along a surjection
    GroupRing project(const GroupHom& q) const
    {
        GroupRing r(q.dst);
        for (auto& [i, v] : c_) r.add_to(q.apply_index(i), v);
        return r;
    }

    // nu~: send h in the target to the sum of its preimages
    static GroupRing corestrict(const GroupRing& x, const GroupHom& q)
    {
        if (!q.surjective()) throw std::invalid_argument("corestrict: map not surjective");
        GroupRing r(q.src);
        for (long i = 0; i < q.src->size(); ++i) {
            auto it = x.c_.find(q.apply_index(i));
            if (it != x.c_.end()) r.set(i, it->second);
        }
        return r;
    }

    friend bool operator==(const GroupRing& a, const GroupRing& b)
    {
        return *a.G_ == *b.G_ && a.c_ == b.c_;
    }

private:
    GroupPtr G_;
    std::map<long, T> c_;
};

using GroupRingElem = GroupRing<CycNum>;

json gr_to_json(const GroupRingElem& x);
GroupRingElem gr_from_json(const json& j);
std::string gr_str(const GroupRingElem& x);

// ---------------------------------------------------------------------------
// characters: chi(e) = e(sum a_i e_i / n_i)

struct Character {
    GroupPtr G;
    Elem a;
    CycNum value(const Elem& e) const;
    CycNum value(long idx) const { return value(G->elem(idx)); }
    long order() const;
    Character conj() const;
    bool is_trivial() const;
};

std::vector<Character> all_characters(const GroupPtr& G);
CycNum char_apply(const Character& chi, const GroupRingElem& x);
// e_chi = |G|^-1 sum chi(g) g^-1
GroupRingElem idempotent(const Character& chi);
// prod_v (1 - c_v)/2
GroupRingElem minus_idempotent(const GroupPtr& G, const std::vector<Elem>& cs);

}  // namespace tz
