#pragma once

#include "kext/error.hpp"
#include "kext/numeric.hpp"
#include "kext/parse.hpp"
#include "kext/poly.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace kext {

enum class RingKind { Integers, Rationals, IntegersModN, PrimeField, PolyQuotient };

struct Capabilities {
    bool eq = true;
    bool linear_solve = false;
    bool local = false;
    std::optional<int> nilpotency_bound;
};

/// Canonical element representation. Z/n and F_p use residues in [0, n),
/// Z uses BigInt, Q uses reduced BigRat, polynomial quotients use normal forms.
using Elem = std::variant<std::int64_t, BigInt, BigRat, PolyFp, PolyQ>;

struct RingSpec {
    RingKind kind = RingKind::Integers;
    std::int64_t modulus = 0;            // n, p, or the coefficient prime (0 = Q coefficients)
    std::vector<std::string> vars;
    std::vector<std::string> relations;  // element-grammar text of the ideal generators
    MonomialOrder order = MonomialOrder::DegRevLex;
    std::size_t groebner_budget = 100000;
    int nilpotency_search = 64;
};

class RingImpl;
using Ring = std::shared_ptr<const RingImpl>;

class RingImpl {
public:
    virtual ~RingImpl() = default;

    RingKind kind() const { return kind_; }
    const Capabilities& caps() const { return caps_; }
    const std::string& descriptor() const { return descriptor_; }
    const RingSpec& spec() const { return spec_; }

    virtual Elem zero() const = 0;
    virtual Elem one() const = 0;
    virtual Elem from_int(const BigInt& v) const = 0;
    virtual Elem from_rat(const BigRat& v) const = 0;
    virtual Elem add(const Elem& a, const Elem& b) const = 0;
    virtual Elem sub(const Elem& a, const Elem& b) const = 0;
    virtual Elem neg(const Elem& a) const = 0;
    virtual Elem mul(const Elem& a, const Elem& b) const = 0;
    virtual bool is_zero(const Elem& a) const = 0;
    virtual bool is_unit(const Elem& a) const = 0;
    virtual std::optional<Elem> inverse(const Elem& a) const = 0;
    virtual std::string print(const Elem& a) const = 0;
    virtual Elem from_raw(const RawPoly& raw) const = 0;
    virtual BigInt characteristic() const = 0;

    bool equal(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(long long v) const { return from_int(BigInt(v)); }
    Elem parse(std::string_view text) const { return from_raw(parse_raw(text)); }

    Elem pow(Elem a, unsigned long long e) const
    {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }

    /// Membership in the maximal ideal of a certified local ring.
    bool in_maximal_ideal(const Elem& a) const
    {
        if (!caps_.local) fail(ErrorCode::NotLocal, "ring", descriptor_ + " is not certified local");
        return !is_unit(a);
    }

    // Polynomial structure (empty for base rings).
    virtual const std::vector<std::string>& variables() const
    {
        static const std::vector<std::string> none;
        return none;
    }
    virtual Elem variable(std::size_t) const { fail(ErrorCode::UnknownVariable, "ring", "ring has no variables"); }

    /// Number of elements for finite rings.
    virtual std::optional<BigInt> cardinality() const { return std::nullopt; }

    // Euclidean structure (Z and univariate F_p[x]).
    virtual bool is_euclidean() const { return false; }
    /// (q, r) with a = q*b + r and r "smaller" than b; for Z, 0 <= r < |b|.
    virtual std::pair<Elem, Elem> divmod(const Elem&, const Elem&) const
    {
        fail(ErrorCode::CapabilityMissing, "ring", descriptor_ + " is not Euclidean");
    }
    /// Unit u with u*a in canonical associate form (|a| for Z, monic for F_p[x]).
    virtual Elem normalizing_unit(const Elem&) const { return one(); }
    virtual long euclid_size(const Elem&) const { return 0; }

    // Restriction of scalars for rings that are finite-dimensional algebras
    // over their coefficient field (F_p, Q, Z/p^k is excluded).
    virtual std::optional<std::size_t> algebra_dimension() const { return std::nullopt; }
    virtual Ring coefficient_field() const { return nullptr; }
    virtual std::vector<Elem> coords(const Elem&) const { return {}; }
    virtual Elem from_coords(const std::vector<Elem>&) const { return zero(); }
    /// Matrix (row-major, dim x dim, over the coefficient field) of multiplication by a.
    virtual std::vector<Elem> mult_matrix(const Elem&) const { return {}; }

protected:
    RingKind kind_ = RingKind::Integers;
    Capabilities caps_;
    std::string descriptor_;
    RingSpec spec_;
};

inline bool same_ring(const Ring& a, const Ring& b)
{
    return a == b || (a && b && a->descriptor() == b->descriptor());
}

inline void require_same_ring(const Ring& a, const Ring& b, const std::string& subsystem)
{
    if (!same_ring(a, b))
        fail(ErrorCode::MixedRings, subsystem,
             "operands live in different rings (" + a->descriptor() + " vs " + b->descriptor() + ")");
}

namespace detail {

inline void require_constant(const RawPoly& raw, const std::string& what)
{
    for (const auto& t : raw)
        if (!t.powers.empty()) fail(ErrorCode::UnknownVariable, "ring", "unknown variable " + t.powers[0].first + " in " + what);
}

inline BigRat raw_constant(const RawPoly& raw)
{
    BigRat s = 0;
    for (const auto& t : raw) s += t.coef;
    return s;
}

class IntegerRing final : public RingImpl {
public:
    IntegerRing()
    {
        kind_ = RingKind::Integers;
        caps_.linear_solve = true;
        descriptor_ = "Z";
        spec_.kind = kind_;
    }

    Elem zero() const override { return BigInt(0); }
    Elem one() const override { return BigInt(1); }
    Elem from_int(const BigInt& v) const override { return v; }

    Elem from_rat(const BigRat& v) const override
    {
        if (boost::multiprecision::denominator(v) != 1)
            fail(ErrorCode::InvalidArgument, "ring", num::to_string(v) + " is not an integer");
        return BigInt(boost::multiprecision::numerator(v));
    }

    Elem add(const Elem& a, const Elem& b) const override { return BigInt(get(a) + get(b)); }
    Elem sub(const Elem& a, const Elem& b) const override { return BigInt(get(a) - get(b)); }
    Elem neg(const Elem& a) const override { return BigInt(-get(a)); }
    Elem mul(const Elem& a, const Elem& b) const override { return BigInt(get(a) * get(b)); }
    bool is_zero(const Elem& a) const override { return get(a) == 0; }
    bool is_unit(const Elem& a) const override { return get(a) == 1 || get(a) == -1; }

    std::optional<Elem> inverse(const Elem& a) const override
    {
        if (!is_unit(a)) return std::nullopt;
        return a;
    }

    std::string print(const Elem& a) const override { return get(a).str(); }

    Elem from_raw(const RawPoly& raw) const override
    {
        require_constant(raw, "Z");
        return from_rat(raw_constant(raw));
    }

    BigInt characteristic() const override { return 0; }

    bool is_euclidean() const override { return true; }

    std::pair<Elem, Elem> divmod(const Elem& a, const Elem& b) const override
    {
        const BigInt& x = get(a);
        const BigInt& y = get(b);
        if (y == 0) fail(ErrorCode::InvalidArgument, "ring", "division by zero");
        BigInt q = x / y;
        BigInt r = x - q * y;
        if (r < 0) {
            if (y > 0) {
                q -= 1;
                r += y;
            } else {
                q += 1;
                r -= y;
            }
        }
        return {Elem(q), Elem(r)};
    }

    Elem normalizing_unit(const Elem& a) const override { return BigInt(get(a) < 0 ? -1 : 1); }

    long euclid_size(const Elem& a) const override
    {
        BigInt v = abs(get(a));
        if (v == 0) return -1;
        return static_cast<long>(msb(v)) + 1;
    }

    static const BigInt& get(const Elem& a) { return std::get<BigInt>(a); }
};

class RationalRing final : public RingImpl {
public:
    RationalRing()
    {
        kind_ = RingKind::Rationals;
        caps_.linear_solve = true;
        caps_.local = true;
        caps_.nilpotency_bound = 1;
        descriptor_ = "Q";
        spec_.kind = kind_;
    }

    Elem zero() const override { return BigRat(0); }
    Elem one() const override { return BigRat(1); }
    Elem from_int(const BigInt& v) const override { return BigRat(v); }
    Elem from_rat(const BigRat& v) const override { return v; }
    Elem add(const Elem& a, const Elem& b) const override { return BigRat(get(a) + get(b)); }
    Elem sub(const Elem& a, const Elem& b) const override { return BigRat(get(a) - get(b)); }
    Elem neg(const Elem& a) const override { return BigRat(-get(a)); }
    Elem mul(const Elem& a, const Elem& b) const override { return BigRat(get(a) * get(b)); }
    bool is_zero(const Elem& a) const override { return get(a) == 0; }
    bool is_unit(const Elem& a) const override { return get(a) != 0; }

    std::optional<Elem> inverse(const Elem& a) const override
    {
        if (get(a) == 0) return std::nullopt;
        return BigRat(1 / get(a));
    }

    std::string print(const Elem& a) const override { return num::to_string(get(a)); }

    Elem from_raw(const RawPoly& raw) const override
    {
        require_constant(raw, "Q");
        return raw_constant(raw);
    }

    BigInt characteristic() const override { return 0; }

    static const BigRat& get(const Elem& a) { return std::get<BigRat>(a); }
};

/// Z/n for n >= 2; with `prime` set it is the field F_p.
class ModRing final : public RingImpl {
public:
    ModRing(std::int64_t n, bool prime) : n_(n)
    {
        kind_ = prime ? RingKind::PrimeField : RingKind::IntegersModN;
        caps_.linear_solve = true;
        if (prime) {
            caps_.local = true;
            caps_.nilpotency_bound = 1;
            descriptor_ = "F" + std::to_string(n);
        } else {
            if (auto pk = num::prime_power(n)) {
                caps_.local = true;
                caps_.nilpotency_bound = pk->second;
            }
            descriptor_ = "Z/" + std::to_string(n);
        }
        spec_.kind = kind_;
        spec_.modulus = n;
    }

    std::int64_t modulus() const { return n_; }

    Elem zero() const override { return std::int64_t{0}; }
    Elem one() const override { return std::int64_t{1 % n_}; }
    Elem from_int(const BigInt& v) const override { return num::mod(v, n_); }

    Elem from_rat(const BigRat& v) const override
    {
        std::int64_t a = num::mod(BigInt(boost::multiprecision::numerator(v)), n_);
        std::int64_t d = num::mod(BigInt(boost::multiprecision::denominator(v)), n_);
        auto inv = num::inverse_mod(d, n_);
        if (!inv)
            fail(ErrorCode::InvalidArgument, "ring",
                 "denominator of " + num::to_string(v) + " is not invertible in " + descriptor_);
        return num::mulmod(a, *inv, n_);
    }

    Elem add(const Elem& a, const Elem& b) const override { return num::addmod(get(a), get(b), n_); }
    Elem sub(const Elem& a, const Elem& b) const override { return num::submod(get(a), get(b), n_); }
    Elem neg(const Elem& a) const override { return get(a) == 0 ? std::int64_t{0} : n_ - get(a); }
    Elem mul(const Elem& a, const Elem& b) const override { return num::mulmod(get(a), get(b), n_); }
    bool is_zero(const Elem& a) const override { return get(a) == 0; }
    bool is_unit(const Elem& a) const override { return std::gcd(get(a), n_) == 1; }

    std::optional<Elem> inverse(const Elem& a) const override
    {
        auto inv = num::inverse_mod(get(a), n_);
        if (!inv) return std::nullopt;
        return Elem(*inv);
    }

    std::string print(const Elem& a) const override { return std::to_string(get(a)); }

    Elem from_raw(const RawPoly& raw) const override
    {
        require_constant(raw, descriptor_);
        return from_rat(raw_constant(raw));
    }

    BigInt characteristic() const override { return n_; }
    std::optional<BigInt> cardinality() const override { return BigInt(n_); }

    static std::int64_t get(const Elem& a) { return std::get<std::int64_t>(a); }

private:
    std::int64_t n_;
};

inline bool valid_var_name(const std::string& v)
{
    if (v.empty() || !std::islower(static_cast<unsigned char>(v[0]))) return false;
    for (char c : v)
        if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)))) return false;
    return true;
}

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return a.e < b.e; }
};

template <class F>
class PolyRing final : public RingImpl {
public:
    using C = typename F::value_type;
    using P = Poly<C>;

    PolyRing(const RingSpec& spec, F field, Ring coefficients)
        : ops_(std::move(field), spec.order), coefficients_(std::move(coefficients))
    {
        spec_ = spec;
        kind_ = RingKind::PolyQuotient;
        if (spec.vars.empty()) fail(ErrorCode::EmptyVariableList, "ring", "polynomial ring needs at least one variable");
        if (spec.vars.size() > kMaxVars)
            fail(ErrorCode::InvalidArgument, "ring", "at most " + std::to_string(kMaxVars) + " variables are supported");
        for (std::size_t i = 0; i < spec.vars.size(); ++i) {
            if (!valid_var_name(spec.vars[i]))
                fail(ErrorCode::InvalidArgument, "ring", "invalid variable name '" + spec.vars[i] + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (spec.vars[i] == spec.vars[j])
                    fail(ErrorCode::InvalidArgument, "ring", "duplicate variable '" + spec.vars[i] + "'");
        }
        std::vector<P> gens;
        for (const auto& text : spec.relations) gens.push_back(to_poly(parse_raw(text)));
        basis_ = ops_.groebner(gens, spec.groebner_budget);

        std::string desc = coefficients_->descriptor() + "[";
        for (std::size_t i = 0; i < spec.vars.size(); ++i) desc += (i ? "," : "") + spec.vars[i];
        desc += "]";
        std::vector<std::string> printed;
        for (const auto& g : gens)
            if (!g.is_zero()) printed.push_back(print_poly(g));
        spec_.relations = printed;
        if (!printed.empty()) {
            desc += "/(";
            for (std::size_t i = 0; i < printed.size(); ++i) desc += (i ? ", " : "") + printed[i];
            desc += ")";
        }
        if (spec.order != MonomialOrder::DegRevLex) desc += std::string(" order=") + order_name(spec.order);
        descriptor_ = desc;

        compute_standard_monomials();
        compute_capabilities(spec.nilpotency_search);
    }

    const PolyOps<F>& ops() const { return ops_; }
    const std::vector<P>& groebner_basis() const { return basis_; }
    const std::vector<Monomial>& standard_monomials() const { return standard_; }

    P normal_form(const P& p) const { return ops_.reduce(p, basis_); }

    Elem zero() const override { return P{}; }
    Elem one() const override { return normal_form(ops_.constant(ops_.field().one())); }
    Elem from_int(const BigInt& v) const override { return normal_form(ops_.constant(ops_.field().from_int(v))); }
    Elem from_rat(const BigRat& v) const override { return normal_form(ops_.constant(ops_.field().from_rat(v))); }
    Elem add(const Elem& a, const Elem& b) const override { return ops_.add(get(a), get(b)); }
    Elem sub(const Elem& a, const Elem& b) const override { return ops_.sub(get(a), get(b)); }
    Elem neg(const Elem& a) const override { return ops_.neg(get(a)); }
    Elem mul(const Elem& a, const Elem& b) const override { return normal_form(ops_.mul(get(a), get(b))); }
    bool is_zero(const Elem& a) const override { return get(a).is_zero(); }

    bool is_unit(const Elem& a) const override
    {
        const P& p = get(a);
        if (p.is_zero()) return false;
        if (p.terms.size() == 1 && p.terms[0].mono.is_one()) return true;
        if (caps_.local) return !constant_term_zero(p);
        if (dim_) return inverse(a).has_value();
        if (basis_.empty()) return false;
        fail(ErrorCode::CapabilityMissing, "ring", "unit test unavailable in " + descriptor_);
    }

    std::optional<Elem> inverse(const Elem& a) const override
    {
        const P& p = get(a);
        if (p.is_zero()) return std::nullopt;
        if (p.terms.size() == 1 && p.terms[0].mono.is_one())
            return Elem(ops_.constant(ops_.field().inv(p.terms[0].coef)));
        if (!dim_) {
            if (basis_.empty()) return std::nullopt;
            fail(ErrorCode::CapabilityMissing, "ring", "inverse unavailable in " + descriptor_);
        }
        // solve mult(a) * x = e_1 over the coefficient field by Gauss-Jordan
        std::size_t d = *dim_;
        std::vector<std::vector<C>> m(d, std::vector<C>(d + 1, ops_.field().zero()));
        std::vector<Elem> mm = mult_matrix(a);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) m[i][j] = std::get<C>(mm[i * d + j]);
            m[i][d] = i == 0 ? ops_.field().one() : ops_.field().zero();
        }
        const F& f = ops_.field();
        std::size_t row = 0;
        for (std::size_t col = 0; col < d && row < d; ++col) {
            std::size_t piv = row;
            while (piv < d && f.is_zero(m[piv][col])) ++piv;
            if (piv == d) return std::nullopt;
            std::swap(m[piv], m[row]);
            C inv = f.inv(m[row][col]);
            for (auto& v : m[row]) v = f.mul(v, inv);
            for (std::size_t i = 0; i < d; ++i) {
                if (i == row || f.is_zero(m[i][col])) continue;
                C c = m[i][col];
                for (std::size_t j = 0; j <= d; ++j) m[i][j] = f.sub(m[i][j], f.mul(c, m[row][j]));
            }
            ++row;
        }
        std::vector<Elem> x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = m[i][d];
        return from_coords(x);
    }

    std::string print(const Elem& a) const override { return print_poly(get(a)); }

    Elem from_raw(const RawPoly& raw) const override { return normal_form(to_poly(raw)); }

    BigInt characteristic() const override { return coefficients_->characteristic(); }

    const std::vector<std::string>& variables() const override { return spec_.vars; }

    Elem variable(std::size_t i) const override
    {
        if (i >= spec_.vars.size()) fail(ErrorCode::UnknownVariable, "ring", "variable index out of range");
        Monomial m;
        m.e[i] = 1;
        return normal_form(ops_.monomial(m, ops_.field().one()));
    }

    std::optional<BigInt> cardinality() const override
    {
        if (!dim_ || coefficients_->characteristic() == 0) return std::nullopt;
        BigInt c = 1;
        for (std::size_t i = 0; i < *dim_; ++i) c *= coefficients_->characteristic();
        return c;
    }

    bool is_euclidean() const override { return univariate_free_ && coefficients_->kind() == RingKind::PrimeField; }

    std::pair<Elem, Elem> divmod(const Elem& a, const Elem& b) const override
    {
        if (!is_euclidean()) return RingImpl::divmod(a, b);
        if (get(b).is_zero()) fail(ErrorCode::InvalidArgument, "ring", "division by zero");
        auto [q, r] = ops_.divmod(get(a), get(b));
        return {Elem(q), Elem(r)};
    }

    Elem normalizing_unit(const Elem& a) const override
    {
        const P& p = get(a);
        if (p.is_zero()) return one();
        return Elem(ops_.constant(ops_.field().inv(p.terms[0].coef)));
    }

    long euclid_size(const Elem& a) const override { return ops_.degree(get(a)); }

    std::optional<std::size_t> algebra_dimension() const override { return dim_; }
    Ring coefficient_field() const override { return coefficients_; }

    std::vector<Elem> coords(const Elem& a) const override
    {
        std::vector<Elem> out(standard_.size(), Elem(ops_.field().zero()));
        for (const auto& t : get(a).terms) out[index_.at(t.mono)] = t.coef;
        return out;
    }

    Elem from_coords(const std::vector<Elem>& c) const override
    {
        std::vector<Term<C>> raw;
        for (std::size_t i = 0; i < standard_.size(); ++i) {
            const C& v = std::get<C>(c[i]);
            if (!ops_.field().is_zero(v)) raw.push_back({standard_[i], v});
        }
        return ops_.normalize(std::move(raw));
    }

    std::vector<Elem> mult_matrix(const Elem& a) const override
    {
        std::size_t d = standard_.size();
        const F& f = ops_.field();
        std::vector<C> m(d * d, f.zero());
        for (const auto& t : get(a).terms) {
            std::size_t i = index_.at(t.mono);
            for (std::size_t j = 0; j < d; ++j)
                for (const auto& [k, c] : table_[i * d + j]) m[k * d + j] = f.add(m[k * d + j], f.mul(t.coef, c));
        }
        return std::vector<Elem>(m.begin(), m.end());
    }

    std::string print_poly(const P& p) const
    {
        if (p.is_zero()) return "0";
        const F& f = ops_.field();
        std::string out;
        bool first = true;
        for (const auto& t : p.terms) {
            C c = t.coef;
            bool negative = f.is_negative(c);
            if (negative) c = f.neg(c);
            if (first) out += negative ? "-" : "";
            else out += negative ? " - " : " + ";
            first = false;
            std::string mono = print_mono(t.mono);
            bool unit = c == f.one();
            if (mono.empty()) out += f.str(c);
            else if (unit) out += mono;
            else out += f.str(c) + "*" + mono;
        }
        return out;
    }

    P to_poly(const RawPoly& raw) const
    {
        const F& f = ops_.field();
        std::vector<Term<C>> terms;
        for (const auto& t : raw) {
            Monomial m;
            for (const auto& [name, e] : t.powers) {
                std::size_t idx = var_index(name);
                unsigned total = unsigned(m.e[idx]) + e;
                if (total > 65535) fail(ErrorCode::InvalidArgument, "ring", "exponent overflow");
                m.e[idx] = static_cast<std::uint16_t>(total);
            }
            terms.push_back({m, f.from_rat(t.coef)});
        }
        return ops_.normalize(std::move(terms));
    }

    static const P& get(const Elem& a) { return std::get<P>(a); }

private:
    std::size_t var_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < spec_.vars.size(); ++i)
            if (spec_.vars[i] == name) return i;
        fail(ErrorCode::UnknownVariable, "ring", "unknown variable '" + name + "'");
    }

    std::string print_mono(const Monomial& m) const
    {
        std::string out;
        for (std::size_t i = 0; i < spec_.vars.size(); ++i) {
            if (!m.e[i]) continue;
            if (!out.empty()) out += "*";
            out += spec_.vars[i];
            if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
        }
        return out;
    }

    bool constant_term_zero(const P& p) const { return p.is_zero() || !p.terms.back().mono.is_one(); }

    void compute_standard_monomials()
    {
        std::size_t nv = spec_.vars.size();
        univariate_free_ = nv == 1 && basis_.empty();
        for (std::size_t i = 0; i < nv; ++i) {
            bool bounded = false;
            for (const auto& g : basis_) {
                const Monomial& lm = g.terms[0].mono;
                bool pure = lm.e[i] > 0;
                for (std::size_t j = 0; j < nv && pure; ++j)
                    if (j != i && lm.e[j]) pure = false;
                if (pure || lm.is_one()) bounded = true;
            }
            if (!bounded) return;
        }
        // zero-dimensional: enumerate standard monomials by breadth-first growth
        std::vector<Monomial> frontier{Monomial{}};
        std::map<Monomial, std::size_t, MonoLess> seen;
        auto standard = [&](const Monomial& m) {
            for (const auto& g : basis_)
                if (divides(g.terms[0].mono, m)) return false;
            return true;
        };
        std::vector<Monomial> all;
        if (standard(Monomial{})) {
            seen[Monomial{}] = 0;
            all.push_back(Monomial{});
        } else {
            frontier.clear();
        }
        while (!frontier.empty()) {
            std::vector<Monomial> next;
            for (const auto& m : frontier)
                for (std::size_t i = 0; i < nv; ++i) {
                    Monomial x = m;
                    ++x.e[i];
                    if (seen.count(x) || !standard(x)) continue;
                    seen[x] = 0;
                    all.push_back(x);
                    next.push_back(x);
                }
            frontier = std::move(next);
        }
        std::sort(all.begin(), all.end(), [&](const Monomial& a, const Monomial& b) { return ops_.cmp(a, b) < 0; });
        standard_ = all;
        for (std::size_t i = 0; i < all.size(); ++i) index_[all[i]] = i;
        dim_ = all.size();
        std::size_t d = all.size();
        table_.assign(d * d, {});
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                P prod = normal_form(ops_.monomial(mono_mul(all[i], all[j]), ops_.field().one()));
                for (const auto& t : prod.terms) table_[i * d + j].emplace_back(index_.at(t.mono), t.coef);
            }
    }

    void compute_capabilities(int search)
    {
        caps_.linear_solve = dim_.has_value() || (univariate_free_ && coefficients_->kind() == RingKind::PrimeField);
        // every variable nilpotent certifies locality with residue field = coefficients
        int witness = 1;
        bool all_nilpotent = true;
        for (std::size_t i = 0; i < spec_.vars.size() && all_nilpotent; ++i) {
            Monomial m;
            m.e[i] = 1;
            P x = normal_form(ops_.monomial(m, ops_.field().one()));
            P power = x;
            int k = 1;
            while (!power.is_zero() && k < search) {
                power = normal_form(ops_.mul(power, x));
                ++k;
            }
            if (!power.is_zero()) all_nilpotent = false;
            else witness = std::max(witness, k);
        }
        if (all_nilpotent) {
            caps_.local = true;
            caps_.nilpotency_bound = witness;
        }
    }

    PolyOps<F> ops_;
    Ring coefficients_;
    std::vector<P> basis_;
    std::vector<Monomial> standard_;
    std::map<Monomial, std::size_t, MonoLess> index_;
    std::vector<std::vector<std::pair<std::size_t, C>>> table_;
    std::optional<std::size_t> dim_;
    bool univariate_free_ = false;
};

inline std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::int64_t parse_modulus(const std::string& digits, const std::string& text)
{
    if (digits.empty() || digits.size() > 18)
        fail(ErrorCode::FormatError, "ring", "bad modulus in ring description '" + text + "'");
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            fail(ErrorCode::FormatError, "ring", "bad modulus in ring description '" + text + "'");
    return std::stoll(digits);
}

} // namespace detail

/// Parses "Z", "Q", "Z/n", "Fp", "Fp[x,y]/(g1, g2)", "Q[x]" with an optional
/// trailing " order=lex|deglex|degrevlex".
inline RingSpec parse_ring_spec(std::string_view text_in)
{
    std::string text = detail::trim(text_in);
    RingSpec spec;
    auto order_at = text.find("order=");
    if (order_at != std::string::npos) {
        std::string name = detail::trim(std::string_view(text).substr(order_at + 6));
        if (name == "lex") spec.order = MonomialOrder::Lex;
        else if (name == "deglex") spec.order = MonomialOrder::DegLex;
        else if (name == "degrevlex") spec.order = MonomialOrder::DegRevLex;
        else fail(ErrorCode::FormatError, "ring", "unknown monomial order '" + name + "'");
        text = detail::trim(std::string_view(text).substr(0, order_at));
    }
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    auto bracket = compact.find('[');
    std::string head = compact.substr(0, bracket);
    if (bracket == std::string::npos) {
        if (head == "Z") spec.kind = RingKind::Integers;
        else if (head == "Q") spec.kind = RingKind::Rationals;
        else if (head.rfind("Z/", 0) == 0) {
            spec.kind = RingKind::IntegersModN;
            spec.modulus = detail::parse_modulus(head.substr(2), text);
        } else if (head.rfind("F", 0) == 0) {
            spec.kind = RingKind::PrimeField;
            spec.modulus = detail::parse_modulus(head.substr(1), text);
        } else {
            fail(ErrorCode::FormatError, "ring", "unrecognized ring description '" + text + "'");
        }
        return spec;
    }
    spec.kind = RingKind::PolyQuotient;
    if (head == "Q") spec.modulus = 0;
    else if (head.rfind("F", 0) == 0) spec.modulus = detail::parse_modulus(head.substr(1), text);
    else fail(ErrorCode::FormatError, "ring", "coefficients must be Q or Fp in '" + text + "'");
    auto close = compact.find(']', bracket);
    if (close == std::string::npos) fail(ErrorCode::FormatError, "ring", "missing ']' in '" + text + "'");
    std::string vars = compact.substr(bracket + 1, close - bracket - 1);
    std::size_t start = 0;
    while (start <= vars.size() && !vars.empty()) {
        auto comma = vars.find(',', start);
        std::string v = vars.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (v.empty()) fail(ErrorCode::FormatError, "ring", "empty variable name in '" + text + "'");
        spec.vars.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    std::string rest = compact.substr(close + 1);
    if (!rest.empty()) {
        if (rest.size() < 3 || rest.rfind("/(", 0) != 0 || rest.back() != ')')
            fail(ErrorCode::FormatError, "ring", "expected '/(generators)' in '" + text + "'");
        std::string gens = rest.substr(2, rest.size() - 3);
        std::size_t s = 0;
        for (;;) {
            auto comma = gens.find(',', s);
            std::string g = gens.substr(s, comma == std::string::npos ? std::string::npos : comma - s);
            if (!g.empty()) spec.relations.push_back(g);
            if (comma == std::string::npos) break;
            s = comma + 1;
        }
    }
    return spec;
}

inline Ring make_ring(const RingSpec& spec)
{
    switch (spec.kind) {
    case RingKind::Integers: return std::make_shared<detail::IntegerRing>();
    case RingKind::Rationals: return std::make_shared<detail::RationalRing>();
    case RingKind::IntegersModN:
        if (spec.modulus < 2) fail(ErrorCode::InvalidArgument, "ring", "modulus must be at least 2");
        return std::make_shared<detail::ModRing>(spec.modulus, false);
    case RingKind::PrimeField:
        if (!num::is_prime(spec.modulus))
            fail(ErrorCode::NonPrimeModulus, "ring", std::to_string(spec.modulus) + " is not prime");
        return std::make_shared<detail::ModRing>(spec.modulus, true);
    case RingKind::PolyQuotient:
        if (spec.vars.empty()) fail(ErrorCode::EmptyVariableList, "ring", "polynomial ring needs at least one variable");
        if (spec.modulus == 0)
            return std::make_shared<detail::PolyRing<QCoef>>(spec, QCoef{}, std::make_shared<detail::RationalRing>());
        if (!num::is_prime(spec.modulus))
            fail(ErrorCode::NonPrimeModulus, "ring", std::to_string(spec.modulus) + " is not prime");
        return std::make_shared<detail::PolyRing<FpCoef>>(spec, FpCoef{spec.modulus},
                                                          std::make_shared<detail::ModRing>(spec.modulus, true));
    }
    fail(ErrorCode::InvalidArgument, "ring", "unknown ring kind");
}

inline Ring make_ring(std::string_view text) { return make_ring(parse_ring_spec(text)); }

inline Ring integers() { return make_ring(RingSpec{RingKind::Integers}); }
inline Ring rationals() { return make_ring(RingSpec{RingKind::Rationals}); }

inline Ring integers_mod(std::int64_t n)
{
    RingSpec s;
    s.kind = RingKind::IntegersModN;
    s.modulus = n;
    return make_ring(s);
}

inline Ring prime_field(std::int64_t p)
{
    RingSpec s;
    s.kind = RingKind::PrimeField;
    s.modulus = p;
    return make_ring(s);
}

/// Normal form of a raw polynomial in the ring.
inline Elem normal_form(const Ring& r, const RawPoly& raw) { return r->from_raw(raw); }

inline Elem parse_element(const Ring& r, std::string_view text) { return r->parse(text); }

/// Finite ring whose elements can be enumerated.
inline bool is_finite_ring(const Ring& r) { return r->cardinality().has_value(); }

/// Residue field of a certified local ring.
inline Ring residue_field(const Ring& r)
{
    if (!r->caps().local) fail(ErrorCode::NotLocal, "ring", r->descriptor() + " is not certified local");
    switch (r->kind()) {
    case RingKind::Rationals:
    case RingKind::PrimeField: return r;
    case RingKind::IntegersModN: return prime_field(num::prime_power(r->spec().modulus)->first);
    case RingKind::PolyQuotient: return r->coefficient_field();
    default: break;
    }
    fail(ErrorCode::NotLocal, "ring", r->descriptor() + " has no residue field");
}

} // namespace kext
