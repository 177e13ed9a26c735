#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

namespace kext {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

namespace num {

/// Residue of v in [0, n).
inline std::int64_t mod(std::int64_t v, std::int64_t n)
{
    std::int64_t r = v % n;
    return r < 0 ? r + n : r;
}

inline std::int64_t mod(const BigInt& v, std::int64_t n)
{
    BigInt r = v % n;
    if (r < 0) r += n;
    return static_cast<std::int64_t>(r);
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n)
{
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

inline std::int64_t addmod(std::int64_t a, std::int64_t b, std::int64_t n)
{
    std::int64_t s = a + b;
    return s >= n ? s - n : s;
}

inline std::int64_t submod(std::int64_t a, std::int64_t b, std::int64_t n)
{
    return a >= b ? a - b : a - b + n;
}

inline std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t n)
{
    std::int64_t r = 1 % n;
    a = mod(a, n);
    while (e) {
        if (e & 1) r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

/// (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

inline std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t n)
{
    auto [g, s, t] = ext_gcd(mod(a, n), n);
    (void)t;
    if (g != 1) return std::nullopt;
    return mod(s, n);
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// For n = p^k returns (p, k); otherwise nullopt.
inline std::optional<std::pair<std::int64_t, int>> prime_power(std::int64_t n)
{
    if (n < 2) return std::nullopt;
    std::int64_t p = 0;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            p = d;
            break;
        }
    if (p == 0) return std::make_pair(n, 1);
    int k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    if (n != 1) return std::nullopt;
    return std::make_pair(p, k);
}

/// A unit w of Z/n with w*a = gcd(a, n) (mod n).
inline std::int64_t normalizing_unit(std::int64_t a, std::int64_t n)
{
    a = mod(a, n);
    if (a == 0) return 1 % n;
    std::int64_t g = std::gcd(a, n);
    std::int64_t ng = n / g;
    std::int64_t ag = a / g;
    std::int64_t w0 = ng == 1 ? 0 : *inverse_mod(ag % ng, ng);
    for (std::int64_t w = w0; w < n + ng; w += ng) {
        std::int64_t cand = w % n;
        if (std::gcd(cand == 0 ? n : cand, n) == 1) return cand == 0 ? 1 % n : cand;
    }
    return 1 % n;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const BigRat& v)
{
    BigInt n = boost::multiprecision::numerator(v);
    BigInt d = boost::multiprecision::denominator(v);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

} // namespace num
} // namespace kext
