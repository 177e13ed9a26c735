#pragma once

#include "kext/error.hpp"
#include "kext/numeric.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace kext {

constexpr std::size_t kMaxVars = 8;

enum class MonomialOrder { Lex, DegLex, DegRevLex };

inline const char* order_name(MonomialOrder o)
{
    switch (o) {
    case MonomialOrder::Lex: return "lex";
    case MonomialOrder::DegLex: return "deglex";
    case MonomialOrder::DegRevLex: return "degrevlex";
    }
    return "degrevlex";
}

struct Monomial {
    std::array<std::uint16_t, kMaxVars> e{};

    unsigned degree() const
    {
        unsigned d = 0;
        for (auto v : e) d += v;
        return d;
    }

    bool is_one() const { return degree() == 0; }

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Positive when a > b in the given order.
inline int compare(const Monomial& a, const Monomial& b, MonomialOrder order)
{
    if (order != MonomialOrder::Lex) {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da > db ? 1 : -1;
    }
    if (order == MonomialOrder::DegRevLex) {
        for (std::size_t i = kMaxVars; i-- > 0;)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
        return 0;
    }
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
    return 0;
}

inline bool divides(const Monomial& a, const Monomial& b)
{
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b)
{
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(a.e[i]) + b.e[i];
        if (s > 65535) fail(ErrorCode::InvalidArgument, "poly", "exponent overflow");
        r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
}

inline Monomial mono_div(const Monomial& a, const Monomial& b)
{
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
    return r;
}

inline Monomial mono_lcm(const Monomial& a, const Monomial& b)
{
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
}

inline bool coprime(const Monomial& a, const Monomial& b)
{
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (a.e[i] && b.e[i]) return false;
    return true;
}

template <class C>
struct Term {
    Monomial mono;
    C coef;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial; terms strictly descending in the owning ring's order,
/// no zero coefficients.
template <class C>
struct Poly {
    std::vector<Term<C>> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const Poly&, const Poly&) = default;
};

/// Coefficients in F_p, stored as residues in [0, p).
struct FpCoef {
    using value_type = std::int64_t;
    std::int64_t p = 2;

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p; }
    bool is_zero(value_type a) const { return a == 0; }
    value_type add(value_type a, value_type b) const { return num::addmod(a, b, p); }
    value_type sub(value_type a, value_type b) const { return num::submod(a, b, p); }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const { return num::mulmod(a, b, p); }
    value_type inv(value_type a) const { return *num::inverse_mod(a, p); }
    value_type from_int(const BigInt& v) const { return num::mod(v, p); }
    bool is_negative(value_type) const { return false; }

    value_type from_rat(const BigRat& v) const
    {
        std::int64_t n = num::mod(BigInt(boost::multiprecision::numerator(v)), p);
        std::int64_t d = num::mod(BigInt(boost::multiprecision::denominator(v)), p);
        if (d == 0) fail(ErrorCode::InvalidArgument, "ring", "denominator vanishes modulo " + std::to_string(p));
        return mul(n, inv(d));
    }

    BigRat to_rat(value_type a) const { return BigRat(a); }
    std::string str(value_type a) const { return std::to_string(a); }
};

struct QCoef {
    using value_type = BigRat;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const { return 1 / a; }
    value_type from_int(const BigInt& v) const { return BigRat(v); }
    value_type from_rat(const BigRat& v) const { return v; }
    bool is_negative(const value_type& a) const { return a < 0; }
    BigRat to_rat(const value_type& a) const { return a; }
    std::string str(const value_type& a) const { return num::to_string(a); }
};

using PolyFp = Poly<std::int64_t>;
using PolyQ = Poly<BigRat>;

/// Arithmetic in F[x_1..x_n] for a fixed coefficient field and order.
template <class F>
class PolyOps {
public:
    using C = typename F::value_type;
    using P = Poly<C>;

    PolyOps(F field, MonomialOrder order) : field_(std::move(field)), order_(order) {}

    const F& field() const { return field_; }
    MonomialOrder order() const { return order_; }

    int cmp(const Monomial& a, const Monomial& b) const { return compare(a, b, order_); }

    P constant(const C& c) const
    {
        P r;
        if (!field_.is_zero(c)) r.terms.push_back({Monomial{}, c});
        return r;
    }

    P monomial(const Monomial& m, const C& c) const
    {
        P r;
        if (!field_.is_zero(c)) r.terms.push_back({m, c});
        return r;
    }

    P add(const P& a, const P& b) const { return combine(a, b, false); }
    P sub(const P& a, const P& b) const { return combine(a, b, true); }

    P neg(const P& a) const
    {
        P r = a;
        for (auto& t : r.terms) t.coef = field_.neg(t.coef);
        return r;
    }

    P scale(const P& a, const C& c, const Monomial& m) const
    {
        P r;
        if (field_.is_zero(c)) return r;
        r.terms.reserve(a.terms.size());
        for (const auto& t : a.terms) {
            C v = field_.mul(t.coef, c);
            if (!field_.is_zero(v)) r.terms.push_back({mono_mul(t.mono, m), v});
        }
        return r;
    }

    P mul(const P& a, const P& b) const
    {
        if (a.is_zero() || b.is_zero()) return P{};
        if (a.terms.size() == 1) return scale(b, a.terms[0].coef, a.terms[0].mono);
        if (b.terms.size() == 1) return scale(a, b.terms[0].coef, b.terms[0].mono);
        std::vector<Term<C>> raw;
        raw.reserve(a.terms.size() * b.terms.size());
        for (const auto& x : a.terms)
            for (const auto& y : b.terms) raw.push_back({mono_mul(x.mono, y.mono), field_.mul(x.coef, y.coef)});
        return normalize(std::move(raw));
    }

    /// Collects like terms of an unordered term list.
    P normalize(std::vector<Term<C>> raw) const
    {
        std::sort(raw.begin(), raw.end(), [&](const Term<C>& x, const Term<C>& y) { return cmp(x.mono, y.mono) > 0; });
        P r;
        for (auto& t : raw) {
            if (!r.terms.empty() && r.terms.back().mono == t.mono) {
                r.terms.back().coef = field_.add(r.terms.back().coef, t.coef);
                if (field_.is_zero(r.terms.back().coef)) r.terms.pop_back();
            } else if (!field_.is_zero(t.coef)) {
                r.terms.push_back(std::move(t));
            }
        }
        return r;
    }

    P monic(const P& a) const
    {
        if (a.is_zero()) return a;
        C inv = field_.inv(a.terms[0].coef);
        return scale(a, inv, Monomial{});
    }

    /// a - c*m*b, merging sorted term lists.
    P sub_scaled(const P& a, const C& c, const Monomial& m, const P& b) const
    {
        P r;
        r.terms.reserve(a.terms.size() + b.terms.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms.size() || j < b.terms.size()) {
            if (j == b.terms.size()) {
                r.terms.push_back(a.terms[i++]);
                continue;
            }
            Monomial bm = mono_mul(b.terms[j].mono, m);
            if (i == a.terms.size()) {
                C v = field_.neg(field_.mul(c, b.terms[j].coef));
                if (!field_.is_zero(v)) r.terms.push_back({bm, v});
                ++j;
                continue;
            }
            int s = cmp(a.terms[i].mono, bm);
            if (s > 0) {
                r.terms.push_back(a.terms[i++]);
            } else if (s < 0) {
                C v = field_.neg(field_.mul(c, b.terms[j].coef));
                if (!field_.is_zero(v)) r.terms.push_back({bm, v});
                ++j;
            } else {
                C v = field_.sub(a.terms[i].coef, field_.mul(c, b.terms[j].coef));
                if (!field_.is_zero(v)) r.terms.push_back({bm, v});
                ++i;
                ++j;
            }
        }
        return r;
    }

    /// Full normal form with respect to a list of polynomials (any order).
    P reduce(P f, const std::vector<P>& basis) const
    {
        P rem;
        while (!f.is_zero()) {
            const Term<C>& lt = f.terms[0];
            bool reduced = false;
            for (const auto& g : basis) {
                if (g.is_zero()) continue;
                const Term<C>& lg = g.terms[0];
                if (divides(lg.mono, lt.mono)) {
                    C c = field_.mul(lt.coef, field_.inv(lg.coef));
                    f = sub_scaled(f, c, mono_div(lt.mono, lg.mono), g);
                    reduced = true;
                    break;
                }
            }
            if (!reduced) {
                rem.terms.push_back(lt);
                f.terms.erase(f.terms.begin());
            }
        }
        return rem;
    }

    P pow(const P& a, unsigned e) const
    {
        P r = constant(field_.one());
        P b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return r;
    }

    /// Reduced Groebner basis by plain Buchberger. `budget` bounds the number
    /// of S-pairs examined.
    std::vector<P> groebner(const std::vector<P>& gens, std::size_t budget) const
    {
        std::vector<P> g;
        for (const auto& f : gens)
            if (!f.is_zero()) g.push_back(monic(f));
        std::deque<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t j = 0; j < g.size(); ++j)
            for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
        std::size_t steps = 0;
        while (!pairs.empty()) {
            auto [i, j] = pairs.front();
            pairs.pop_front();
            if (++steps > budget)
                fail(ErrorCode::GroebnerBudgetExceeded, "ring",
                     "Buchberger exceeded the budget of " + std::to_string(budget) + " S-pairs");
            const Monomial& mi = g[i].terms[0].mono;
            const Monomial& mj = g[j].terms[0].mono;
            if (coprime(mi, mj)) continue;
            Monomial l = mono_lcm(mi, mj);
            P s = sub_scaled(scale(g[i], field_.one(), mono_div(l, mi)), field_.one(), mono_div(l, mj), g[j]);
            P r = reduce(std::move(s), g);
            if (r.is_zero()) continue;
            g.push_back(monic(r));
            for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.emplace_back(k, g.size() - 1);
        }
        // minimalize
        std::vector<P> minimal;
        for (std::size_t i = 0; i < g.size(); ++i) {
            bool redundant = false;
            for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
                if (i == j) continue;
                const Monomial& mi = g[i].terms[0].mono;
                const Monomial& mj = g[j].terms[0].mono;
                if (divides(mj, mi) && (mj != mi || j < i)) redundant = true;
            }
            if (!redundant) minimal.push_back(g[i]);
        }
        // interreduce tails
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            std::vector<P> others;
            for (std::size_t j = 0; j < minimal.size(); ++j)
                if (j != i) others.push_back(minimal[j]);
            P head;
            head.terms.push_back(minimal[i].terms[0]);
            P tail = minimal[i];
            tail.terms.erase(tail.terms.begin());
            minimal[i] = monic(add(head, reduce(tail, others)));
        }
        std::sort(minimal.begin(), minimal.end(),
                  [&](const P& a, const P& b) { return cmp(a.terms[0].mono, b.terms[0].mono) < 0; });
        return minimal;
    }

    // Univariate helpers (variable 0), used for Euclidean arithmetic in F_p[x].

    int degree(const P& a) const { return a.is_zero() ? -1 : int(a.terms[0].mono.e[0]); }

    std::pair<P, P> divmod(const P& a, const P& b) const
    {
        P q, r = a;
        const Term<C>& lb = b.terms[0];
        C inv = field_.inv(lb.coef);
        while (!r.is_zero() && r.terms[0].mono.e[0] >= lb.mono.e[0]) {
            Monomial m;
            m.e[0] = static_cast<std::uint16_t>(r.terms[0].mono.e[0] - lb.mono.e[0]);
            C c = field_.mul(r.terms[0].coef, inv);
            q = add(q, monomial(m, c));
            r = sub_scaled(r, c, m, b);
        }
        return {q, r};
    }

private:
    P combine(const P& a, const P& b, bool subtract) const
    {
        P r;
        r.terms.reserve(a.terms.size() + b.terms.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms.size() || j < b.terms.size()) {
            if (j == b.terms.size()) {
                r.terms.push_back(a.terms[i++]);
            } else if (i == a.terms.size()) {
                r.terms.push_back({b.terms[j].mono, subtract ? field_.neg(b.terms[j].coef) : b.terms[j].coef});
                ++j;
            } else {
                int s = cmp(a.terms[i].mono, b.terms[j].mono);
                if (s > 0) {
                    r.terms.push_back(a.terms[i++]);
                } else if (s < 0) {
                    r.terms.push_back({b.terms[j].mono, subtract ? field_.neg(b.terms[j].coef) : b.terms[j].coef});
                    ++j;
                } else {
                    C v = subtract ? field_.sub(a.terms[i].coef, b.terms[j].coef)
                                   : field_.add(a.terms[i].coef, b.terms[j].coef);
                    if (!field_.is_zero(v)) r.terms.push_back({a.terms[i].mono, v});
                    ++i;
                    ++j;
                }
            }
        }
        return r;
    }

    F field_;
    MonomialOrder order_;
};

} // namespace kext
