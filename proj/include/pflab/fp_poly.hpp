#pragma once

// Dense univariate polynomial arithmetic over F_p, p a small prime.
// Coefficient vectors are little-endian (index = degree) and kept normalized:
// no trailing zeros, the zero polynomial is the empty vector.

#include <cstdint>
#include <string>
#include <vector>

#include "pflab/errors.hpp"

namespace pflab::fp {

using Poly = std::vector<int>;

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly normalized(Poly f, int p) {
    for (auto& c : f) {
        c %= p;
        if (c < 0) c += p;
    }
    trim(f);
    return f;
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline bool is_monic(const Poly& f, int p) {
    return !f.empty() && f.back() % p == 1;
}

inline Poly add(const Poly& a, const Poly& b, int p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    trim(r);
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, int p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % p + p) % p;
    trim(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    trim(r);
    return r;
}

inline int inv_mod(int a, int p) {
    // p is prime and a != 0 mod p
    int r = 1, base = ((a % p) + p) % p, e = p - 2;
    while (e > 0) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r;
}

// Division with remainder; divisor must be nonzero.
inline void divmod(const Poly& a, const Poly& b, int p, Poly& q, Poly& r) {
    if (b.empty()) throw std::domain_error("fp::divmod: division by zero polynomial");
    r = a;
    q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    const int lead_inv = inv_mod(b.back(), p);
    while (degree(r) >= degree(b)) {
        int shift = degree(r) - degree(b);
        int coeff = r.back() * lead_inv % p;
        q[shift] = coeff;
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::size_t k = i + shift;
            r[k] = ((r[k] - coeff * b[i]) % p + p) % p;
        }
        trim(r);
    }
    trim(q);
}

inline Poly mod(const Poly& a, const Poly& b, int p) {
    Poly q, r;
    divmod(a, b, p, q, r);
    return r;
}

inline Poly monic_scaled(Poly f, int p) {
    if (f.empty()) return f;
    int s = inv_mod(f.back(), p);
    for (auto& c : f) c = c * s % p;
    return f;
}

inline Poly gcd(Poly a, Poly b, int p) {
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic_scaled(std::move(a), p);
}

inline Poly derivative(const Poly& f, int p) {
    Poly r;
    for (std::size_t i = 1; i < f.size(); ++i) r.push_back(static_cast<int>(i) % p * f[i] % p);
    trim(r);
    return r;
}

// Squarefree over F_p: gcd(f, f') = 1. The formal derivative handles the
// characteristic-p wrinkle (f' = 0 for p-th powers) exactly.
inline bool squarefree(const Poly& f, int p) {
    Poly g = gcd(f, derivative(f, p), p);
    return degree(g) == 0;
}

// Canonical text form, descending degree: "X^3+2*X+1", "0" for zero.
inline std::string to_string(const Poly& f) {
    if (f.empty()) return "0";
    std::string out;
    for (int d = degree(f); d >= 0; --d) {
        if (f[d] == 0) continue;
        if (!out.empty()) out += "+";
        if (d == 0) {
            out += std::to_string(f[d]);
        } else {
            if (f[d] != 1) out += std::to_string(f[d]) + "*";
            out += "X";
            if (d > 1) out += "^" + std::to_string(d);
        }
    }
    return out;
}

} // namespace pflab::fp
