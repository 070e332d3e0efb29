#pragma once

#include <stdexcept>
#include <vector>

#include "tz/exact.hpp"

namespace tz {

// binomial coefficient as an exact integer
inline Z binom(long n, long k)
{
    Z r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Coefficient ring requirements: +, -, *, unary -, is_zero(T), mul_int(T, Z), inverse(T),
// unit_like(T).
inline CycNum mul_int(const CycNum& x, const Z& n) { return x * CycNum(Q(n)); }
inline CycNum inverse(const CycNum& x) { return x.inv(); }
inline CycNum unit_like(const CycNum&) { return CycNum(1); }

// d-variable (d <= 2) power series truncated at degree cap N in each variable
template <class T>
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(int d, int N, T zero) : d_(d), N_(N), zero_(zero)
    {
        if (d < 1 || d > 2) throw std::invalid_argument("TruncSeries: d must be 1 or 2");
        c_.assign(size_t(d == 1 ? N + 1 : (N + 1) * (N + 1)), zero_);
    }

    int vars() const { return d_; }
    int cap() const { return N_; }
    const T& zero() const { return zero_; }

    const T& at(int i, int j = 0) const { return c_[idx(i, j)]; }
    T& at(int i, int j = 0) { return c_[idx(i, j)]; }

    static TruncSeries constant(int d, int N, const T& zero, const T& a)
    {
        TruncSeries s(d, N, zero);
        s.at(0, 0) = a;
        return s;
    }
    // X_v (v = 0 or 1)
    static TruncSeries variable(int d, int N, const T& zero, const T& one, int v = 0)
    {
        TruncSeries s(d, N, zero);
        if (N >= 1) (v == 0 ? s.at(1, 0) : s.at(0, 1)) = one;
        return s;
    }

    TruncSeries& operator+=(const TruncSeries& o)
    {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        return *this;
    }
    TruncSeries& operator-=(const TruncSeries& o)
    {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
        return *this;
    }
    friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
    friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
    TruncSeries operator-() const
    {
        TruncSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    TruncSeries scaled(const T& a) const
    {
        TruncSeries r = *this;
        for (auto& x : r.c_)
            if (!is_zero(x)) x = x * a;
        return r;
    }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b)
    {
        a.check(b);
        TruncSeries r(a.d_, a.N_, a.zero_);
        int N = a.N_;
        if (a.d_ == 1) {
            for (int i = 0; i <= N; ++i) {
                if (is_zero(a.c_[i])) continue;
                for (int j = 0; i + j <= N; ++j)
                    if (!is_zero(b.c_[j])) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
            }
            return r;
        }
        for (int i1 = 0; i1 <= N; ++i1)
            for (int j1 = 0; j1 <= N; ++j1) {
                const T& x = a.at(i1, j1);
                if (is_zero(x)) continue;
                for (int i2 = 0; i1 + i2 <= N; ++i2)
                    for (int j2 = 0; j1 + j2 <= N; ++j2) {
                        const T& y = b.at(i2, j2);
                        if (!is_zero(y)) r.at(i1 + i2, j1 + j2) = r.at(i1 + i2, j1 + j2) + x * y;
                    }
            }
        return r;
    }

    // multiplicative inverse; constant term must be invertible
    TruncSeries inverse() const
    {
        using tz::inverse;
        T a0 = at(0, 0);
        if (is_zero(a0)) throw std::domain_error("TruncSeries: constant term not invertible");
        T inv0 = inverse(a0);
        // 1/(a0 (1 + Y)) with Y = F/a0 - 1, by repeated squaring of the truncated geometric series
        TruncSeries Y = scaled(inv0);
        Y.at(0, 0) = zero_;
        TruncSeries r = constant(d_, N_, zero_, inv0);
        TruncSeries term = constant(d_, N_, zero_, inv0);
        int maxdeg = d_ * N_;
        for (int k = 1; k <= maxdeg; ++k) {
            term = -(term * Y);
            if (term.is_zero_series()) break;
            r += term;
        }
        return r;
    }

    bool is_zero_series() const
    {
        for (auto& x : c_)
            if (!is_zero(x)) return false;
        return true;
    }

    // F(S_1, S_2) for series S_v with zero constant term
    TruncSeries compose(const std::vector<TruncSeries>& S) const
    {
        if ((int)S.size() != d_) throw std::invalid_argument("compose: arity mismatch");
        for (auto& s : S) {
            check(s);
            if (!is_zero(s.at(0, 0))) throw std::invalid_argument("compose: nonzero constant term");
        }
        if (d_ == 1) {
            TruncSeries r(d_, N_, zero_);
            for (int k = N_; k >= 0; --k) {
                r = r * S[0];
                r.at(0) = r.at(0) + c_[k];
            }
            return r;
        }
        TruncSeries r(d_, N_, zero_);
        std::vector<TruncSeries> P1{constant(d_, N_, zero_, one_like())}, P2{P1[0]};
        for (int i = 1; i <= N_; ++i) {
            P1.push_back(P1.back() * S[0]);
            P2.push_back(P2.back() * S[1]);
        }
        for (int i = 0; i <= N_; ++i)
            for (int j = 0; j <= N_; ++j)
                if (!is_zero(at(i, j))) r += (P1[i] * P2[j]).scaled(at(i, j));
        return r;
    }

    // F((1+X_1)^{s_1} - 1, ...)
    TruncSeries substitute_power(const std::vector<long>& s) const
    {
        std::vector<TruncSeries> S;
        for (int v = 0; v < d_; ++v) S.push_back(binomial_power(d_, N_, zero_, one_like(), s[v], v));
        return compose(S);
    }

    // (1+X_v)^s - 1 for an integer s >= 0
    static TruncSeries binomial_power(int d, int N, const T& zero, const T& one, long s, int v = 0)
    {
        TruncSeries r(d, N, zero);
        for (int k = 1; k <= N && k <= s; ++k) {
            T c = mul_int(one, binom(s, k));
            (v == 0 ? r.at(k, 0) : r.at(0, k)) = c;
        }
        return r;
    }

    // coefficients on the basis T_1^a T_2^b with T_v = 1 + X_v; exact for the truncation
    TruncSeries to_T() const { return change_basis(-1); }
    TruncSeries from_T() const { return change_basis(1); }

    // keep the T-exponents divisible by p^{r_v}
    TruncSeries V(long p, const std::vector<int>& r) const
    {
        std::vector<long> q;
        for (int v = 0; v < d_; ++v) {
            long x = 1;
            for (int i = 0; i < r[v]; ++i) x *= p;
            q.push_back(x);
        }
        TruncSeries t = to_T();
        for (int i = 0; i <= N_; ++i)
            for (int j = 0; j <= (d_ == 2 ? N_ : 0); ++j)
                if (i % q[0] != 0 || (d_ == 2 && j % q[1] != 0)) t.at(i, j) = zero_;
        return t.from_T();
    }

    friend bool operator==(const TruncSeries& a, const TruncSeries& b)
    {
        return a.d_ == b.d_ && a.N_ == b.N_ && a.c_ == b.c_;
    }

    TruncSeries truncated(int M) const
    {
        TruncSeries r(d_, M, zero_);
        for (int i = 0; i <= std::min(M, N_); ++i)
            for (int j = 0; j <= (d_ == 2 ? std::min(M, N_) : 0); ++j) r.at(i, j) = at(i, j);
        return r;
    }

    template <class F>
    json to_json(F coeff_json) const
    {
        json terms = json::array();
        for (int i = 0; i <= N_; ++i)
            for (int j = 0; j <= (d_ == 2 ? N_ : 0); ++j)
                if (!is_zero(at(i, j))) {
                    json e = d_ == 2 ? json{i, j} : json{i};
                    terms.push_back({{"expo", e}, {"coeff", coeff_json(at(i, j))}});
                }
        json caps = json::array();
        for (int v = 0; v < d_; ++v) caps.push_back(N_);
        return {{"caps", caps}, {"terms", terms}};
    }

private:
    int d_ = 1, N_ = 0;
    T zero_{};
    std::vector<T> c_;

    size_t idx(int i, int j) const
    {
        if (i < 0 || j < 0 || i > N_ || j > N_ || (d_ == 1 && j != 0))
            throw std::out_of_range("TruncSeries: index");
        return size_t(i) + size_t(j) * size_t(N_ + 1);
    }
    void check(const TruncSeries& o) const
    {
        if (o.d_ != d_ || o.N_ != N_) throw std::invalid_argument("TruncSeries: shape mismatch");
    }
    T one_like() const { return unit_like(zero_); }

    // sign = -1: X -> T - 1 expansion (to T basis); sign = +1: T -> X + 1 (back)
    TruncSeries change_basis(int sign) const
    {
        TruncSeries r(d_, N_, zero_);
        // 1-d transform along each axis
        auto coef = [&](int k, int m) {  // coefficient of Y^m in (Y + sign)^k
            Z b = binom(k, m);
            if (sign < 0 && ((k - m) & 1)) b = -b;
            return b;
        };
        if (d_ == 1) {
            for (int k = 0; k <= N_; ++k) {
                if (is_zero(c_[k])) continue;
                for (int m = 0; m <= k; ++m) r.c_[m] = r.c_[m] + mul_int(c_[k], coef(k, m));
            }
            return r;
        }
        TruncSeries tmp(d_, N_, zero_);
        for (int j = 0; j <= N_; ++j)
            for (int k = 0; k <= N_; ++k) {
                if (is_zero(at(k, j))) continue;
                for (int m = 0; m <= k; ++m) tmp.at(m, j) = tmp.at(m, j) + mul_int(at(k, j), coef(k, m));
            }
        for (int i = 0; i <= N_; ++i)
            for (int k = 0; k <= N_; ++k) {
                if (is_zero(tmp.at(i, k))) continue;
                for (int m = 0; m <= k; ++m) r.at(i, m) = r.at(i, m) + mul_int(tmp.at(i, k), coef(k, m));
            }
        return r;
    }
};

}  // namespace tz
