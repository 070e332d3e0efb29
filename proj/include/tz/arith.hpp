#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tz {

long mod(long a, long n);
long powmod(long a, long e, long n);
long invmod(long a, long n);   // throws if not invertible
long euler_phi(long n);
bool is_prime(long n);
std::vector<std::pair<long, int>> factor(long n);
std::vector<long> prime_divisors(long n);
std::vector<long> divisors(long n);
long mult_order(long a, long n);  // order of a in (Z/n)^x
long primitive_root(long p);      // odd prime p
long crt(long a, long m, long b, long n);  // coprime moduli

// coefficients of the n-th cyclotomic polynomial, low degree first
const std::vector<long>& cyclotomic_poly(long n);

// Q(mu_n) = Q(mu_n') with n' not 2 mod 4
inline long canonical_conductor(long n) { return (n % 4 == 2) ? n / 2 : n; }

}  // namespace tz
