#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace modres {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt binomial_big(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (long long j = 0; j < k; ++j) {
        c *= n - j;
        c /= j + 1;
    }
    return c;
}

// Multinomial coefficient (sum parts)! / prod parts_i!
inline BigInt multinomial_big(const std::vector<long long>& parts) {
    BigInt c = 1;
    long long total = 0;
    for (long long p : parts) {
        c *= binomial_big(total + p, p);
        total += p;
    }
    return c;
}

inline BigInt pow_big(long long base, long long exp) {
    BigInt r = 1, b = base;
    for (; exp > 0; exp >>= 1, b *= b)
        if (exp & 1) r *= b;
    return r;
}

inline double to_double(const BigRat& r) { return r.convert_to<double>(); }
inline long double to_long_double(const BigRat& r) { return r.convert_to<long double>(); }

}  // namespace modres
