#pragma once

#include "kext/complexes.hpp"
#include "kext/koszul.hpp"
#include "kext/presented.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace kext::testing {

using Rng = std::mt19937_64;

inline long long uniform(Rng& g, long long lo, long long hi)
{
    return std::uniform_int_distribution<long long>(lo, hi)(g);
}

inline Elem random_elem(const Ring& r, Rng& g)
{
    switch (r->kind()) {
    case RingKind::IntegersModN:
    case RingKind::PrimeField: return r->from_int(uniform(g, 0, r->spec().modulus - 1));
    case RingKind::Integers: return r->from_int(uniform(g, -6, 6));
    case RingKind::Rationals:
        return r->from_rat(BigRat(BigInt(uniform(g, -6, 6)), BigInt(uniform(g, 1, 5))));
    case RingKind::PolyQuotient: break;
    }
    if (auto dim = r->algebra_dimension()) {
        std::vector<Elem> c;
        for (std::size_t i = 0; i < *dim; ++i) c.push_back(random_elem(r->coefficient_field(), g));
        return r->from_coords(c);
    }
    Elem out = r->zero();
    Elem power = r->one();
    Ring base = make_ring(r->spec().modulus ? "F" + std::to_string(r->spec().modulus) : "Q");
    for (int k = 0; k < 3; ++k) {
        out = r->add(out, r->mul(r->from_int(uniform(g, 0, r->spec().modulus ? r->spec().modulus - 1 : 4)), power));
        power = r->mul(power, r->variable(0));
    }
    return out;
}

inline Elem random_unit(const Ring& r, Rng& g)
{
    for (;;) {
        Elem x = random_elem(r, g);
        if (r->is_unit(x)) return x;
    }
}

/// Element of the maximal ideal of a local ring (0 over fields).
inline Elem random_nonunit(const Ring& r, Rng& g)
{
    for (int tries = 0; tries < 200; ++tries) {
        Elem x = random_elem(r, g);
        if (!r->is_unit(x)) return x;
    }
    return r->zero();
}

inline Matrix random_matrix(const Ring& r, std::size_t m, std::size_t n, Rng& g)
{
    Matrix a(r, m, n);
    for (auto& x : a.data) x = random_elem(r, g);
    return a;
}

/// Product of random elementary matrices together with its inverse.
inline std::pair<Matrix, Matrix> random_invertible(const Ring& r, std::size_t n, Rng& g)
{
    Matrix a = mat_identity(r, n), a_inv = mat_identity(r, n);
    for (std::size_t step = 0; step < 3 * n; ++step) {
        Matrix e = mat_identity(r, n), e_inv = mat_identity(r, n);
        std::size_t i = static_cast<std::size_t>(uniform(g, 0, static_cast<long long>(n) - 1));
        std::size_t j = static_cast<std::size_t>(uniform(g, 0, static_cast<long long>(n) - 1));
        if (i == j) {
            Elem u = random_unit(r, g);
            e.at(i, i) = u;
            e_inv.at(i, i) = *r->inverse(u);
        } else {
            Elem c = random_elem(r, g);
            e.at(i, j) = c;
            e_inv.at(i, j) = r->neg(c);
        }
        a = mat_mul(e, a);
        a_inv = mat_mul(a_inv, e_inv);
    }
    return {a, a_inv};
}

/// Direct sum of pieces R (one degree) and R --a--> R (two adjacent degrees),
/// conjugated degreewise by random invertible matrices. With `minimal` every
/// a lies in the maximal ideal, so the result is a minimal complex.
inline ChainComplex random_complex(const Ring& r, Rng& g, int lo, int len, std::size_t pieces, bool minimal = false)
{
    struct Piece {
        int top;
        bool arrow;
        Elem a;
    };
    std::vector<std::size_t> ranks(static_cast<std::size_t>(len), 0);
    std::vector<Piece> list;
    for (std::size_t k = 0; k < pieces; ++k) {
        int top = static_cast<int>(uniform(g, 0, len - 1));
        bool arrow = top > 0 && uniform(g, 0, 2) > 0;
        Elem a = minimal ? random_nonunit(r, g) : random_elem(r, g);
        list.push_back(Piece{top, arrow, a});
    }
    std::vector<std::vector<std::size_t>> slot(list.size());
    for (std::size_t k = 0; k < list.size(); ++k) {
        slot[k].push_back(ranks[static_cast<std::size_t>(list[k].top)]++);
        if (list[k].arrow) slot[k].push_back(ranks[static_cast<std::size_t>(list[k].top - 1)]++);
    }
    std::vector<Matrix> diffs;
    for (int i = 1; i < len; ++i) diffs.emplace_back(r, ranks[static_cast<std::size_t>(i - 1)], ranks[static_cast<std::size_t>(i)]);
    for (std::size_t k = 0; k < list.size(); ++k)
        if (list[k].arrow) diffs[static_cast<std::size_t>(list[k].top - 1)].at(slot[k][1], slot[k][0]) = list[k].a;
    std::vector<std::pair<Matrix, Matrix>> conj;
    for (int i = 0; i < len; ++i) conj.push_back(random_invertible(r, ranks[static_cast<std::size_t>(i)], g));
    for (int i = 1; i < len; ++i) {
        Matrix& d = diffs[static_cast<std::size_t>(i - 1)];
        d = mat_mul(conj[static_cast<std::size_t>(i - 1)].first, mat_mul(d, conj[static_cast<std::size_t>(i)].second));
    }
    return make_complex(r, lo, ranks, diffs);
}

inline std::vector<Elem> random_sequence(const Ring& r, int e, Rng& g, bool in_maximal_ideal = false)
{
    std::vector<Elem> a;
    for (int i = 0; i < e; ++i) a.push_back(in_maximal_ideal ? random_nonunit(r, g) : random_elem(r, g));
    return a;
}

/// Random module presentation with entries in the maximal ideal.
inline ModulePresentation random_module(const Ring& r, Rng& g, std::size_t max_gens, std::size_t max_rels)
{
    std::size_t gens = static_cast<std::size_t>(uniform(g, 1, static_cast<long long>(max_gens)));
    std::size_t rels = static_cast<std::size_t>(uniform(g, 0, static_cast<long long>(max_rels)));
    Matrix rel(r, gens, rels);
    for (auto& x : rel.data) x = random_nonunit(r, g);
    return presentation(rel);
}

/// Cardinality of a finite homology module, -1 when infinite.
inline BigInt homology_size(const ModuleSummary& s)
{
    if (s.cardinality) return *s.cardinality;
    return BigInt(-1);
}

template <class F>
std::optional<ErrorCode> error_code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace kext::testing
