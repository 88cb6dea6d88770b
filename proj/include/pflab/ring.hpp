#pragma once

// Finite commutative rings with identity, represented as dense element
// indices 0..size-1 with structural arithmetic per construction kind.
// Rings of size <= Caps::table_cap materialize full operation tables lazily
// (at most once, race-safe); larger rings always evaluate structurally.
// Every ring is immutable after construction and safe to share across
// threads.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pflab/caps.hpp"
#include "pflab/errors.hpp"
#include "pflab/fp_poly.hpp"

namespace pflab {

enum class RingKind {
    modular,
    poly_quotient,
    truncated_poly,
    product,
    quotient,
    duplication,
    localization,
    table,
};

inline const char* kind_name(RingKind k) {
    switch (k) {
        case RingKind::modular: return "modular";
        case RingKind::poly_quotient: return "poly-quotient";
        case RingKind::truncated_poly: return "truncated-poly";
        case RingKind::product: return "product";
        case RingKind::quotient: return "quotient";
        case RingKind::duplication: return "duplication";
        case RingKind::localization: return "localization";
        case RingKind::table: return "table";
    }
    return "?";
}

class FiniteRing;

namespace detail {

// Type-erased per-ring cache. Higher layers (lattice, tensor, census) stash
// derived data here keyed by string; insertion is at-most-once, the first
// computed value wins.
class CacheBag {
public:
    template <class T, class Make>
    std::shared_ptr<const T> get_or_compute(const std::string& key, Make&& make) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = slots_.find(key);
            if (it != slots_.end()) return std::static_pointer_cast<const T>(it->second);
        }
        auto value = std::make_shared<const T>(make());
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = slots_.emplace(key, value);
        return std::static_pointer_cast<const T>(it->second);
    }

private:
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<const void>> slots_;
};

struct RingBackend {
    int n = 0;
    int zero = 0;
    int one = 0;
    RingKind kind = RingKind::table;
    std::string label;

    virtual ~RingBackend() = default;
    virtual int add_raw(int a, int b) const = 0;
    virtual int mul_raw(int a, int b) const = 0;
    virtual int neg_raw(int a) const = 0;

    int add(int a, int b) const {
        if (tables_ready.load(std::memory_order_acquire))
            return add_tab[std::size_t(a) * n + b];
        return add_raw(a, b);
    }
    int mul(int a, int b) const {
        if (tables_ready.load(std::memory_order_acquire))
            return mul_tab[std::size_t(a) * n + b];
        return mul_raw(a, b);
    }
    int neg(int a) const {
        if (tables_ready.load(std::memory_order_acquire)) return neg_tab[a];
        return neg_raw(a);
    }

    void ensure_tables(int table_cap) const {
        if (n > table_cap || tables_ready.load(std::memory_order_acquire)) return;
        std::call_once(tables_once, [this] {
            add_tab.resize(std::size_t(n) * n);
            mul_tab.resize(std::size_t(n) * n);
            neg_tab.resize(n);
            for (int a = 0; a < n; ++a) {
                neg_tab[a] = neg_raw(a);
                for (int b = 0; b < n; ++b) {
                    add_tab[std::size_t(a) * n + b] = neg_raw(a) >= 0 ? add_raw(a, b) : 0;
                    add_tab[std::size_t(a) * n + b] = add_raw(a, b);
                    mul_tab[std::size_t(a) * n + b] = mul_raw(a, b);
                }
            }
            tables_ready.store(true, std::memory_order_release);
        });
    }

    CacheBag cache;

private:
    mutable std::once_flag tables_once;
    mutable std::atomic<bool> tables_ready{false};
    mutable std::vector<int32_t> add_tab, mul_tab, neg_tab;
};

inline void check_index(const RingBackend& b, int a, const char* who) {
    if (a < 0 || a >= b.n)
        throw std::out_of_range(std::string(who) + ": element index " + std::to_string(a) +
                                " out of range for ring of size " + std::to_string(b.n));
}

} // namespace detail

class FiniteRing {
public:
    FiniteRing() = default;
    explicit FiniteRing(std::shared_ptr<const detail::RingBackend> b) : b_(std::move(b)) {}

    int size() const { return b_->n; }
    int zero() const { return b_->zero; }
    int one() const { return b_->one; }
    RingKind kind() const { return b_->kind; }
    const std::string& label() const { return b_->label; }

    int add(int a, int b) const { return b_->add(a, b); }
    int mul(int a, int b) const { return b_->mul(a, b); }
    int neg(int a) const { return b_->neg(a); }
    int sub(int a, int b) const { return b_->add(a, b_->neg(b)); }

    // x^e by repeated squaring, e >= 0.
    int pow(int x, long long e) const {
        int r = one(), base = x;
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    void ensure_tables(int table_cap = default_caps().table_cap) const {
        b_->ensure_tables(table_cap);
    }

    bool valid() const { return b_ != nullptr; }
    bool is(const FiniteRing& other) const { return b_ == other.b_; }

    const detail::RingBackend& backend() const { return *b_; }
    const std::shared_ptr<const detail::RingBackend>& backend_ptr() const { return b_; }

private:
    std::shared_ptr<const detail::RingBackend> b_;
};

// An element bound to its ring; convenience wrapper over raw indices.
struct RingElement {
    FiniteRing ring;
    int index = 0;

    RingElement operator+(const RingElement& o) const { return {ring, ring.add(index, o.index)}; }
    RingElement operator*(const RingElement& o) const { return {ring, ring.mul(index, o.index)}; }
    RingElement operator-() const { return {ring, ring.neg(index)}; }
    bool operator==(const RingElement& o) const { return ring.is(o.ring) && index == o.index; }
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace detail {

struct ZmodBackend : RingBackend {
    explicit ZmodBackend(int modulus) {
        n = modulus;
        zero = 0;
        one = modulus == 1 ? 0 : 1;
        kind = RingKind::modular;
        label = "Z/" + std::to_string(modulus);
    }
    int add_raw(int a, int b) const override { return (a + b) % n; }
    int mul_raw(int a, int b) const override {
        return static_cast<int>(static_cast<long long>(a) * b % n);
    }
    int neg_raw(int a) const override { return (n - a) % n; }
};

struct PolyQuotBackend : RingBackend {
    int p;
    int deg;
    fp::Poly modulus;
    std::vector<int> ppow;                    // p^0..p^deg
    std::vector<std::vector<int>> reduction;  // X^(deg+j) mod f, j = 0..deg-2

    PolyQuotBackend(int p_, fp::Poly f) : p(p_), deg(fp::degree(f)), modulus(std::move(f)) {
        ppow.resize(deg + 1);
        ppow[0] = 1;
        for (int i = 1; i <= deg; ++i) ppow[i] = ppow[i - 1] * p;
        n = ppow[deg];
        zero = 0;
        one = n == 1 ? 0 : 1;
        kind = RingKind::poly_quotient;
        label = "GF(" + std::to_string(p) + ")[X]/(" + fp::to_string(modulus) + ")";

        // X^deg = -(low part of f), then multiply by X repeatedly.
        std::vector<int> r(deg, 0);
        for (int i = 0; i < deg; ++i) r[i] = (p - modulus[i] % p) % p;
        for (int j = 0; j + 1 < deg; ++j) {
            reduction.push_back(r);
            std::vector<int> next(deg, 0);
            int top = r[deg - 1];
            for (int i = deg - 1; i > 0; --i) next[i] = r[i - 1];
            next[0] = 0;
            if (top != 0)
                for (int i = 0; i < deg; ++i)
                    next[i] = (next[i] + top * reduction[0][i]) % p;
            r = std::move(next);
        }
        if (deg >= 1 && reduction.empty()) reduction.push_back(std::vector<int>(deg, 0));
    }

    void decode(int x, int* c) const {
        for (int i = 0; i < deg; ++i) {
            c[i] = x % p;
            x /= p;
        }
    }
    int encode(const int* c) const {
        int x = 0;
        for (int i = deg - 1; i >= 0; --i) x = x * p + c[i];
        return x;
    }

    int add_raw(int a, int b) const override {
        int x = 0;
        for (int i = deg - 1; i >= 0; --i) {
            int ca = a / ppow[i] % p, cb = b / ppow[i] % p;
            x = x * p + (ca + cb) % p;
        }
        return x;
    }
    int neg_raw(int a) const override {
        int x = 0;
        for (int i = deg - 1; i >= 0; --i) {
            int ca = a / ppow[i] % p;
            x = x * p + (p - ca) % p;
        }
        return x;
    }
    int mul_raw(int a, int b) const override {
        std::vector<int> ca(deg), cb(deg), prod(2 * deg - 1, 0);
        decode(a, ca.data());
        decode(b, cb.data());
        for (int i = 0; i < deg; ++i) {
            if (ca[i] == 0) continue;
            for (int j = 0; j < deg; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
        }
        for (int j = 2 * deg - 2; j >= deg; --j) {
            int c = prod[j];
            if (c == 0) continue;
            const auto& red = reduction[j - deg];
            for (int i = 0; i < deg; ++i) prod[i] = (prod[i] + c * red[i]) % p;
        }
        prod.resize(deg);
        return encode(prod.data());
    }
};

struct TruncPolyBackend : RingBackend {
    int p, vars, trunc_deg;
    std::vector<std::vector<int>> monomials;  // exponent vectors, (degree, revlex) order
    std::vector<std::vector<int>> mono_product;  // id or -1 when truncated away
    std::vector<int> ppow;

    TruncPolyBackend(int p_, int k, int d, int size_cap) : p(p_), vars(k), trunc_deg(d) {
        std::vector<int> e(k, 0);
        enumerate(e, 0, d - 1);
        std::sort(monomials.begin(), monomials.end(), [](const auto& a, const auto& b) {
            int da = std::accumulate(a.begin(), a.end(), 0);
            int db = std::accumulate(b.begin(), b.end(), 0);
            if (da != db) return da < db;
            return a > b;  // within a degree: X before Y
        });
        const int m = static_cast<int>(monomials.size());
        long long sz = 1;
        for (int i = 0; i < m; ++i) {
            sz *= p;
            if (sz > size_cap)
                throw CapExceeded("truncated_poly(" + std::to_string(p) + "," + std::to_string(k) +
                                  "," + std::to_string(d) + ") exceeds size cap " +
                                  std::to_string(size_cap));
        }
        n = static_cast<int>(sz);
        ppow.resize(m + 1);
        ppow[0] = 1;
        for (int i = 1; i <= m; ++i) ppow[i] = ppow[i - 1] * p;
        zero = 0;
        one = n == 1 ? 0 : 1;  // monomial 0 is the constant 1
        kind = RingKind::truncated_poly;
        label = "trunc(" + std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(d) + ")";

        std::map<std::vector<int>, int> id_of;
        for (int i = 0; i < m; ++i) id_of[monomials[i]] = i;
        mono_product.assign(m, std::vector<int>(m, -1));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                std::vector<int> s(k);
                int total = 0;
                for (int v = 0; v < k; ++v) {
                    s[v] = monomials[i][v] + monomials[j][v];
                    total += s[v];
                }
                if (total < d) mono_product[i][j] = id_of.at(s);
            }
    }

    void enumerate(std::vector<int>& e, int var, int budget) {
        if (var == vars) {
            monomials.push_back(e);
            return;
        }
        for (int t = 0; t <= budget; ++t) {
            e[var] = t;
            enumerate(e, var + 1, budget - t);
        }
        e[var] = 0;
    }

    int add_raw(int a, int b) const override {
        const int m = static_cast<int>(monomials.size());
        int x = 0;
        for (int i = m - 1; i >= 0; --i) {
            int ca = a / ppow[i] % p, cb = b / ppow[i] % p;
            x = x * p + (ca + cb) % p;
        }
        return x;
    }
    int neg_raw(int a) const override {
        const int m = static_cast<int>(monomials.size());
        int x = 0;
        for (int i = m - 1; i >= 0; --i) x = x * p + (p - a / ppow[i] % p) % p;
        return x;
    }
    int mul_raw(int a, int b) const override {
        const int m = static_cast<int>(monomials.size());
        std::vector<int> ca(m), cb(m), acc(m, 0);
        for (int i = 0; i < m; ++i) {
            ca[i] = a / ppow[i] % p;
            cb[i] = b / ppow[i] % p;
        }
        for (int i = 0; i < m; ++i) {
            if (ca[i] == 0) continue;
            for (int j = 0; j < m; ++j) {
                if (cb[j] == 0) continue;
                int id = mono_product[i][j];
                if (id >= 0) acc[id] = (acc[id] + ca[i] * cb[j]) % p;
            }
        }
        int x = 0;
        for (int i = m - 1; i >= 0; --i) x = x * p + acc[i];
        return x;
    }
};

struct ProductBackend : RingBackend {
    std::vector<FiniteRing> factors;
    std::vector<long long> stride;  // first factor is the least significant digit

    ProductBackend(std::vector<FiniteRing> fs, int size_cap) : factors(std::move(fs)) {
        long long sz = 1;
        stride.resize(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            stride[i] = sz;
            sz *= factors[i].size();
            if (sz > size_cap) throw CapExceeded("product exceeds size cap " + std::to_string(size_cap));
        }
        n = static_cast<int>(sz);
        kind = RingKind::product;
        std::string l = "prod(";
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) l += ",";
            l += factors[i].label();
        }
        label = l + ")";
        zero = 0;
        int o = 0;
        for (std::size_t i = factors.size(); i-- > 0;)
            o = o * factors[i].size() + factors[i].one();
        one = o;
    }

    int digit(int x, std::size_t i) const {
        return static_cast<int>(x / stride[i] % factors[i].size());
    }

    template <class Op>
    int zip(int a, int b, Op op) const {
        long long x = 0;
        for (std::size_t i = factors.size(); i-- > 0;)
            x = x * factors[i].size() + op(factors[i], digit(a, i), digit(b, i));
        return static_cast<int>(x);
    }

    int add_raw(int a, int b) const override {
        return zip(a, b, [](const FiniteRing& r, int x, int y) { return r.add(x, y); });
    }
    int mul_raw(int a, int b) const override {
        return zip(a, b, [](const FiniteRing& r, int x, int y) { return r.mul(x, y); });
    }
    int neg_raw(int a) const override {
        long long x = 0;
        for (std::size_t i = factors.size(); i-- > 0;)
            x = x * factors[i].size() + factors[i].neg(digit(a, i));
        return static_cast<int>(x);
    }
};

struct QuotientBackend : RingBackend {
    FiniteRing base;
    std::vector<int> ideal_elems;   // the ideal quotiented out, sorted
    std::vector<int> rep;           // coset id -> minimal representative in base
    std::vector<int> coset_of;      // base element -> coset id
    // localization extras (kind == localization only)
    std::vector<int> loc_maximal;   // the maximal ideal localized at
    std::vector<int> loc_kernel;    // elements killed by some s outside it

    QuotientBackend(FiniteRing base_, std::vector<int> elems, std::string lbl, RingKind k)
        : base(std::move(base_)), ideal_elems(std::move(elems)) {
        const int bn = base.size();
        base.ensure_tables();
        coset_of.assign(bn, -1);
        for (int x = 0; x < bn; ++x) {
            if (coset_of[x] >= 0) continue;
            int id = static_cast<int>(rep.size());
            rep.push_back(x);
            for (int i : ideal_elems) coset_of[base.add(x, i)] = id;
        }
        n = static_cast<int>(rep.size());
        zero = coset_of[base.zero()];
        one = coset_of[base.one()];
        kind = k;
        label = std::move(lbl);
    }

    int add_raw(int a, int b) const override { return coset_of[base.add(rep[a], rep[b])]; }
    int mul_raw(int a, int b) const override { return coset_of[base.mul(rep[a], rep[b])]; }
    int neg_raw(int a) const override { return coset_of[base.neg(rep[a])]; }
};

struct DuplicationBackend : RingBackend {
    FiniteRing base;
    std::vector<int> ideal_elems;  // sorted values of I in the base ring
    std::vector<int> pos_of_val;   // base value -> position in ideal_elems, or -1

    DuplicationBackend(FiniteRing base_, std::vector<int> elems, std::string lbl, int size_cap)
        : base(std::move(base_)), ideal_elems(std::move(elems)) {
        long long sz = static_cast<long long>(base.size()) * ideal_elems.size();
        if (sz > size_cap)
            throw CapExceeded("duplication exceeds size cap " + std::to_string(size_cap));
        base.ensure_tables();
        n = static_cast<int>(sz);
        pos_of_val.assign(base.size(), -1);
        for (std::size_t i = 0; i < ideal_elems.size(); ++i) pos_of_val[ideal_elems[i]] = static_cast<int>(i);
        const int m = static_cast<int>(ideal_elems.size());
        zero = base.zero() * m + pos_of_val[base.zero()];
        one = base.one() * m + pos_of_val[base.zero()];
        kind = RingKind::duplication;
        label = std::move(lbl);
    }

    int isize() const { return static_cast<int>(ideal_elems.size()); }
    int r_of(int x) const { return x / isize(); }
    int i_of(int x) const { return ideal_elems[x % isize()]; }
    int encode(int r, int ival) const { return r * isize() + pos_of_val[ival]; }

    int add_raw(int a, int b) const override {
        return encode(base.add(r_of(a), r_of(b)), base.add(i_of(a), i_of(b)));
    }
    int mul_raw(int a, int b) const override {
        int r1 = r_of(a), r2 = r_of(b), i1 = i_of(a), i2 = i_of(b);
        int cross = base.add(base.add(base.mul(r1, i2), base.mul(r2, i1)), base.mul(i1, i2));
        return encode(base.mul(r1, r2), cross);
    }
    int neg_raw(int a) const override {
        return encode(base.neg(r_of(a)), base.neg(i_of(a)));
    }
};

struct TableBackend : RingBackend {
    std::vector<int> add_t, mul_t, neg_t;

    TableBackend(int size, int zero_, int one_, std::vector<int> add_, std::vector<int> mul_,
                 std::string lbl) : add_t(std::move(add_)), mul_t(std::move(mul_)) {
        n = size;
        zero = zero_;
        one = one_;
        kind = RingKind::table;
        label = std::move(lbl);
        neg_t.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (add_t[std::size_t(a) * n + b] == zero) {
                    neg_t[a] = b;
                    break;
                }
            }
            if (neg_t[a] < 0)
                throw AxiomError("additive-inverse", a, -1, -1,
                                 "element " + std::to_string(a) + " has no additive inverse");
        }
    }

    int add_raw(int a, int b) const override { return add_t[std::size_t(a) * n + b]; }
    int mul_raw(int a, int b) const override { return mul_t[std::size_t(a) * n + b]; }
    int neg_raw(int a) const override { return neg_t[a]; }
};

inline void require_ideal_set(const FiniteRing& R, const std::vector<int>& elems, const char* who) {
    if (elems.empty() || !std::is_sorted(elems.begin(), elems.end()))
        throw std::invalid_argument(std::string(who) + ": ideal element set must be sorted and nonempty");
    std::vector<char> in(R.size(), 0);
    for (int e : elems) {
        check_index(R.backend(), e, who);
        in[e] = 1;
    }
    if (!in[R.zero()])
        throw std::invalid_argument(std::string(who) + ": set does not contain zero, not an ideal");
    for (int a : elems)
        for (int b : elems)
            if (!in[R.add(a, b)])
                throw std::invalid_argument(std::string(who) + ": set not closed under addition at (" +
                                            std::to_string(a) + "," + std::to_string(b) + ")");
    for (int r = 0; r < R.size(); ++r)
        for (int a : elems)
            if (!in[R.mul(r, a)])
                throw std::invalid_argument(std::string(who) + ": set not closed under multiplication at (" +
                                            std::to_string(r) + "," + std::to_string(a) + ")");
}

} // namespace detail

inline FiniteRing zmod(int modulus, const Caps& caps = default_caps()) {
    if (modulus == 0) throw std::invalid_argument("zmod(0) is the infinite ring Z");
    if (modulus < 0) throw std::invalid_argument("zmod: modulus must be positive");
    if (modulus > caps.size_cap)
        throw CapExceeded("zmod(" + std::to_string(modulus) + ") exceeds size cap " +
                          std::to_string(caps.size_cap));
    return FiniteRing(std::make_shared<detail::ZmodBackend>(modulus));
}

inline FiniteRing poly_quot(int p, fp::Poly f, const Caps& caps = default_caps()) {
    if (!fp::is_prime(p)) throw std::invalid_argument("poly_quot: p = " + std::to_string(p) + " is not prime");
    f = fp::normalized(std::move(f), p);
    if (fp::degree(f) < 1) throw std::invalid_argument("poly_quot: modulus must have degree >= 1");
    if (!fp::is_monic(f, p)) throw std::invalid_argument("poly_quot: modulus must be monic");
    long long sz = 1;
    for (int i = 0; i < fp::degree(f); ++i) {
        sz *= p;
        if (sz > caps.size_cap)
            throw CapExceeded("poly_quot size p^deg exceeds size cap " + std::to_string(caps.size_cap));
    }
    return FiniteRing(std::make_shared<detail::PolyQuotBackend>(p, std::move(f)));
}

inline FiniteRing truncated_poly(int p, int vars, int deg, const Caps& caps = default_caps()) {
    if (!fp::is_prime(p)) throw std::invalid_argument("truncated_poly: p must be prime");
    if (vars < 1 || deg < 1) throw std::invalid_argument("truncated_poly: need vars >= 1 and degree >= 1");
    return FiniteRing(std::make_shared<detail::TruncPolyBackend>(p, vars, deg, caps.size_cap));
}

inline FiniteRing product(std::vector<FiniteRing> factors, const Caps& caps = default_caps()) {
    if (factors.empty()) throw std::invalid_argument("product: factor list must be nonempty");
    return FiniteRing(std::make_shared<detail::ProductBackend>(std::move(factors), caps.size_cap));
}

// Quotient by a validated ideal element set. The Ideal-typed wrapper lives in
// ideal.hpp; this is the raw constructor.
inline FiniteRing quotient_by_set(const FiniteRing& R, std::vector<int> ideal_elems,
                                  std::string label = "") {
    std::sort(ideal_elems.begin(), ideal_elems.end());
    detail::require_ideal_set(R, ideal_elems, "quotient");
    if (label.empty()) {
        label = "quot(" + R.label() + ",{";
        for (std::size_t i = 0; i < ideal_elems.size(); ++i)
            label += (i ? "," : "") + std::to_string(ideal_elems[i]);
        label += "})";
    }
    return FiniteRing(std::make_shared<detail::QuotientBackend>(R, std::move(ideal_elems),
                                                                std::move(label), RingKind::quotient));
}

inline FiniteRing duplication_by_set(const FiniteRing& R, std::vector<int> ideal_elems,
                                     std::string label = "", const Caps& caps = default_caps()) {
    std::sort(ideal_elems.begin(), ideal_elems.end());
    detail::require_ideal_set(R, ideal_elems, "duplication");
    if (label.empty()) {
        label = "dup(" + R.label() + ",{";
        for (std::size_t i = 0; i < ideal_elems.size(); ++i)
            label += (i ? "," : "") + std::to_string(ideal_elems[i]);
        label += "})";
    }
    return FiniteRing(std::make_shared<detail::DuplicationBackend>(R, std::move(ideal_elems),
                                                                   std::move(label), caps.size_cap));
}

// ---------------------------------------------------------------------------
// Provenance accessors
// ---------------------------------------------------------------------------

inline const FiniteRing& base_of(const FiniteRing& R) {
    if (auto* q = dynamic_cast<const detail::QuotientBackend*>(&R.backend())) return q->base;
    if (auto* d = dynamic_cast<const detail::DuplicationBackend*>(&R.backend())) return d->base;
    throw std::invalid_argument("base_of: ring " + R.label() + " has no base ring");
}

// Elements of the ideal used to build a quotient/localization/duplication.
inline const std::vector<int>& construction_ideal(const FiniteRing& R) {
    if (auto* q = dynamic_cast<const detail::QuotientBackend*>(&R.backend())) return q->ideal_elems;
    if (auto* d = dynamic_cast<const detail::DuplicationBackend*>(&R.backend())) return d->ideal_elems;
    throw std::invalid_argument("construction_ideal: ring " + R.label() + " was not built from an ideal");
}

inline const std::vector<FiniteRing>& factors_of(const FiniteRing& R) {
    if (auto* p = dynamic_cast<const detail::ProductBackend*>(&R.backend())) return p->factors;
    throw std::invalid_argument("factors_of: ring " + R.label() + " is not a product");
}

// For quotient-style rings: image of a base element, and coset representatives.
inline int quotient_project(const FiniteRing& Q, int base_elem) {
    auto* q = dynamic_cast<const detail::QuotientBackend*>(&Q.backend());
    if (!q) throw std::invalid_argument("quotient_project: not a quotient ring");
    detail::check_index(q->base.backend(), base_elem, "quotient_project");
    return q->coset_of[base_elem];
}

inline int quotient_rep(const FiniteRing& Q, int coset) {
    auto* q = dynamic_cast<const detail::QuotientBackend*>(&Q.backend());
    if (!q) throw std::invalid_argument("quotient_rep: not a quotient ring");
    detail::check_index(Q.backend(), coset, "quotient_rep");
    return q->rep[coset];
}

// For localization rings built by localize_at_maximal.
inline const std::vector<int>& localization_kernel(const FiniteRing& L) {
    auto* q = dynamic_cast<const detail::QuotientBackend*>(&L.backend());
    if (!q || L.kind() != RingKind::localization)
        throw std::invalid_argument("localization_kernel: not a localization ring");
    return q->loc_kernel;
}

inline const std::vector<int>& localized_at(const FiniteRing& L) {
    auto* q = dynamic_cast<const detail::QuotientBackend*>(&L.backend());
    if (!q || L.kind() != RingKind::localization)
        throw std::invalid_argument("localized_at: not a localization ring");
    return q->loc_maximal;
}

// The unital embedding r -> (r, r) and retraction (r, r+i) -> r of a
// duplication ring; their composite is the identity on the base.
struct DupMaps {
    FiniteRing dup;
    FiniteRing base;

    int embed(int r) const {
        auto* d = static_cast<const detail::DuplicationBackend*>(&dup.backend());
        return d->encode(r, d->base.zero());
    }
    int retract(int x) const {
        auto* d = static_cast<const detail::DuplicationBackend*>(&dup.backend());
        return d->r_of(x);
    }
};

inline DupMaps dup_retract(const FiniteRing& D) {
    auto* d = dynamic_cast<const detail::DuplicationBackend*>(&D.backend());
    if (!d) throw std::invalid_argument("dup_retract: ring " + D.label() + " is not a duplication");
    return DupMaps{D, d->base};
}

// ---------------------------------------------------------------------------
// Element census
// ---------------------------------------------------------------------------

struct ElementCensus {
    std::vector<int> units;
    std::vector<int> zero_divisors;
    std::vector<int> idempotents;
    std::vector<int> nilpotents;
    bool is_reduced = true;
};

inline bool census_contains(const std::vector<int>& sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

namespace detail {

inline ElementCensus compute_census(const FiniteRing& R) {
    R.ensure_tables();
    const int n = R.size();
    ElementCensus c;
    // x is nilpotent iff x^(2^ceil(log2 n)) = 0: powers that ever hit zero do
    // so within n steps and stay there.
    long long e = 1;
    while (e < n) e <<= 1;
    for (int x = 0; x < n; ++x) {
        bool unit = false, zd = false;
        for (int y = 0; y < n; ++y) {
            int xy = R.mul(x, y);
            if (xy == R.one()) unit = true;
            if (xy == R.zero() && y != R.zero()) zd = true;
            if (unit && zd) break;
        }
        if (x == R.zero() && n > 1) zd = true;
        if (unit) c.units.push_back(x);
        if (zd) c.zero_divisors.push_back(x);
        if (R.mul(x, x) == x) c.idempotents.push_back(x);
        if (R.pow(x, e) == R.zero()) c.nilpotents.push_back(x);
    }
    c.is_reduced = c.nilpotents.size() == 1 && c.nilpotents[0] == R.zero();
    return c;
}

} // namespace detail

inline const ElementCensus& element_census(const FiniteRing& R) {
    auto ptr = R.backend().cache.get_or_compute<ElementCensus>(
        "census", [&] { return detail::compute_census(R); });
    // The backend keeps the shared_ptr alive for the ring's lifetime.
    return *ptr;
}

inline bool is_domain(const FiniteRing& R) {
    const auto& c = element_census(R);
    return R.size() == 1 || c.zero_divisors.size() == 1;  // only 0 divides zero
}

inline bool is_local(const FiniteRing& R) {
    // Finite commutative: local iff the non-units form an ideal, which
    // happens iff non-units are closed under addition. Cheaper and
    // independent of lattice enumeration.
    const auto& c = element_census(R);
    std::vector<char> unit(R.size(), 0);
    for (int u : c.units) unit[u] = 1;
    for (int a = 0; a < R.size(); ++a) {
        if (unit[a]) continue;
        for (int b = 0; b <= a; ++b) {
            if (unit[b]) continue;
            if (unit[R.add(a, b)]) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Axiom validation
// ---------------------------------------------------------------------------

struct AxiomPolicy {
    // Pairwise axioms are always checked exhaustively. Triple axioms
    // (associativity, distributivity) are exhaustive up to this size and
    // sampled above it.
    int triple_full_max = 64;
    int triple_samples = 100000;
    bool force_full = false;
    std::uint64_t seed = 0x5eedf00d;
};

namespace detail {

template <class Fn>
void for_each_triple(int n, const AxiomPolicy& policy, Fn fn) {
    if (policy.force_full || n <= policy.triple_full_max) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) fn(a, b, c);
    } else {
        std::mt19937_64 rng(policy.seed);
        for (int t = 0; t < policy.triple_samples; ++t) {
            int a = static_cast<int>(rng() % n);
            int b = static_cast<int>(rng() % n);
            int c = static_cast<int>(rng() % n);
            fn(a, b, c);
        }
    }
}

} // namespace detail

// Returns the first violated axiom, or nullopt if all checks pass.
inline std::optional<AxiomError> check_ring_axioms(const FiniteRing& R,
                                                   const AxiomPolicy& policy = {}) {
    const int n = R.size();
    R.ensure_tables();
    try {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                int s = R.add(a, b), p = R.mul(a, b);
                if (s < 0 || s >= n) throw AxiomError("add-closure", a, b, -1, "add out of range");
                if (p < 0 || p >= n) throw AxiomError("mul-closure", a, b, -1, "mul out of range");
                if (s != R.add(b, a)) throw AxiomError("add-commutativity", a, b, -1, "a+b != b+a");
                if (p != R.mul(b, a)) throw AxiomError("mul-commutativity", a, b, -1, "a*b != b*a");
            }
        for (int a = 0; a < n; ++a) {
            if (R.add(a, R.zero()) != a) throw AxiomError("additive-identity", a, -1, -1, "a+0 != a");
            if (R.mul(a, R.one()) != a) throw AxiomError("multiplicative-identity", a, -1, -1, "a*1 != a");
            int na = R.neg(a);
            if (na < 0 || na >= n) throw AxiomError("neg-closure", a, -1, -1, "neg out of range");
            if (R.add(a, na) != R.zero()) throw AxiomError("additive-inverse", a, -1, -1, "a+(-a) != 0");
        }
        if (n > 1 && R.zero() == R.one())
            throw AxiomError("zero-ne-one", -1, -1, -1, "zero equals one in a ring of size > 1");
        detail::for_each_triple(n, policy, [&](int a, int b, int c) {
            if (R.add(R.add(a, b), c) != R.add(a, R.add(b, c)))
                throw AxiomError("add-associativity", a, b, c, "(a+b)+c != a+(b+c)");
            if (R.mul(R.mul(a, b), c) != R.mul(a, R.mul(b, c)))
                throw AxiomError("mul-associativity", a, b, c, "(a*b)*c != a*(b*c)");
            if (R.mul(a, R.add(b, c)) != R.add(R.mul(a, b), R.mul(a, c)))
                throw AxiomError("distributivity", a, b, c, "a*(b+c) != a*b+a*c");
        });
    } catch (const AxiomError& e) {
        return e;
    }
    return std::nullopt;
}

inline void validate_ring_axioms(const FiniteRing& R, const AxiomPolicy& policy = {}) {
    if (auto err = check_ring_axioms(R, policy)) throw *err;
}

// Raw table ring constructor; validates the tables before returning.
inline FiniteRing table_ring(int size, int zero, int one, std::vector<int> add,
                             std::vector<int> mul, std::string label = "table",
                             const AxiomPolicy& policy = {}, const Caps& caps = default_caps()) {
    if (size <= 0) throw std::invalid_argument("table_ring: size must be positive");
    if (size > caps.size_cap)
        throw CapExceeded("table ring exceeds size cap " + std::to_string(caps.size_cap));
    if (static_cast<long long>(add.size()) != static_cast<long long>(size) * size ||
        static_cast<long long>(mul.size()) != static_cast<long long>(size) * size)
        throw std::invalid_argument("table_ring: tables must be size x size");
    for (int v : add)
        if (v < 0 || v >= size) throw AxiomError("add-closure", -1, -1, -1, "add table entry out of range");
    for (int v : mul)
        if (v < 0 || v >= size) throw AxiomError("mul-closure", -1, -1, -1, "mul table entry out of range");
    if (zero < 0 || zero >= size || one < 0 || one >= size)
        throw std::invalid_argument("table_ring: zero/one out of range");
    FiniteRing R(std::make_shared<detail::TableBackend>(size, zero, one, std::move(add),
                                                        std::move(mul), std::move(label)));
    validate_ring_axioms(R, policy);
    return R;
}

} // namespace pflab
