#include "tz/arith.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace tz {

long mod(long a, long n)
{
    long r = a % n;
    return r < 0 ? r + n : r;
}

long powmod(long a, long e, long n)
{
    if (n == 1) return 0;
    __int128 r = 1, b = mod(a, n);
    while (e > 0) {
        if (e & 1) r = r * b % n;
        b = b * b % n;
        e >>= 1;
    }
    return (long)r;
}

long invmod(long a, long n)
{
    long g = n, x = 0, x1 = 1, r = mod(a, n);
    if (n == 1) return 0;
    while (r != 0) {
        long q = g / r;
        long t = g - q * r; g = r; r = t;
        t = x - q * x1; x = x1; x1 = t;
    }
    if (g != 1) throw std::domain_error("invmod: not invertible");
    return mod(x, n);
}

std::vector<std::pair<long, int>> factor(long n)
{
    std::vector<std::pair<long, int>> out;
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<long> prime_divisors(long n)
{
    std::vector<long> out;
    for (auto& [p, e] : factor(n)) out.push_back(p);
    return out;
}

std::vector<long> divisors(long n)
{
    std::vector<long> out{1};
    for (auto& [p, e] : factor(n)) {
        size_t m = out.size();
        long pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < m; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long euler_phi(long n)
{
    long r = n;
    for (auto& [p, e] : factor(n)) r = r / p * (p - 1);
    return r;
}

bool is_prime(long n)
{
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long mult_order(long a, long n)
{
    if (std::gcd(mod(a, n), n) != 1) throw std::domain_error("mult_order: not a unit");
    long k = 1, x = mod(a, n);
    if (n == 1) return 1;
    while (x != 1) { x = (long)((__int128)x * a % n); x = mod(x, n); ++k; }
    return k;
}

long primitive_root(long p)
{
    auto ps = prime_divisors(p - 1);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long q : ps)
            if (powmod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    return 1;
}

long crt(long a, long m, long b, long n)
{
    // x = a mod m, x = b mod n
    long t = mod((__int128)(b - a) * invmod(m, n) % n, n);
    return mod(a + m * t, m * n);
}

const std::vector<long>& cyclotomic_poly(long n)
{
    static std::mutex mu;
    static std::map<long, std::unique_ptr<std::vector<long>>> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return *it->second;
    }
    // x^n - 1 divided by Phi_d for proper divisors d
    std::vector<long> num(n + 1, 0);
    num[0] = -1; num[n] = 1;
    for (long d : divisors(n)) {
        if (d == n) continue;
        const auto& q = cyclotomic_poly(d);
        int dq = (int)q.size() - 1;
        int dn = (int)num.size() - 1;
        std::vector<long> quo(dn - dq + 1, 0);
        for (int i = dn; i >= dq; --i) {
            long c = num[i];
            quo[i - dq] = c;
            if (c == 0) continue;
            for (int j = 0; j <= dq; ++j) num[i - dq + j] -= c * q[j];
        }
        num = quo;
    }
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<std::vector<long>>(num);
    return *slot;
}

}  // namespace tz
