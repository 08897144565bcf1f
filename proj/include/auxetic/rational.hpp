#pragma once
// Minimal exact rational arithmetic for the integer period-dependence
// systems. Offsets are small integers and the lattice dimension is <= 4, so
// 64-bit numerators/denominators with 128-bit intermediates are ample.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace auxetic {

class Rational {
  public:
    Rational() = default;
    Rational(long long num) : n_(num), d_(1) {}
    Rational(long long num, long long den) : n_(num), d_(den) { reduce(); }

    long long num() const { return n_; }
    long long den() const { return d_; }

    bool is_zero() const { return n_ == 0; }
    double to_double() const { return (double)n_ / (double)d_; }

    Rational operator+(const Rational& o) const {
        return make((__int128)n_ * o.d_ + (__int128)o.n_ * d_,
                    (__int128)d_ * o.d_);
    }
    Rational operator-(const Rational& o) const {
        return make((__int128)n_ * o.d_ - (__int128)o.n_ * d_,
                    (__int128)d_ * o.d_);
    }
    Rational operator*(const Rational& o) const {
        return make((__int128)n_ * o.n_, (__int128)d_ * o.d_);
    }
    Rational operator/(const Rational& o) const {
        if (o.n_ == 0) throw InputError("rational division by zero");
        return make((__int128)n_ * o.d_, (__int128)d_ * o.n_);
    }
    Rational operator-() const { return Rational(-n_, d_); }
    bool operator==(const Rational& o) const {
        return n_ == o.n_ && d_ == o.d_;
    }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    std::string str() const {
        return d_ == 1 ? std::to_string(n_)
                       : std::to_string(n_) + "/" + std::to_string(d_);
    }

  private:
    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw InputError("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        const __int128 lim = (__int128)1 << 62;
        if (n >= lim || n <= -lim || d >= lim)
            throw Error("rational overflow");
        Rational r;
        r.n_ = (long long)n;
        r.d_ = (long long)d;
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
    void reduce() { *this = make(n_, d_); }

    long long n_ = 0;
    long long d_ = 1;
};

// Solves A x = b exactly by Gaussian elimination with nonzero pivoting.
// Throws BadBasisError when A is singular.
inline std::vector<Rational> solve_rational(
    std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
    const size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) throw BadBasisError("singular integer period basis");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            const Rational factor = A[r][col] / A[col][col];
            for (size_t c = col; c < n; ++c)
                A[r][c] = A[r][c] - factor * A[col][c];
            b[r] = b[r] - factor * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return x;
}

}  // namespace auxetic
