#pragma once

#include "kext/dg_module.hpp"
#include "kext/homomorphism.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kext {

struct SysVar {
    char family = 'X';
    int n = 0;
    int i = 1;
    int j = 1;

    std::string name() const
    {
        return std::string(1, family) + "_" + std::to_string(n) + "_" + std::to_string(i) + "_" + std::to_string(j);
    }
};

/// coef * product of the variables with the listed ids (sorted, repeats allowed).
struct SysTerm {
    Elem coef;
    std::vector<std::uint32_t> vars;
};

using SysPoly = std::vector<SysTerm>;  // sorted by vars, nonzero coefficients

struct SymMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SysPoly> data;

    SymMatrix() = default;
    SymMatrix(std::size_t m, std::size_t n) : rows(m), cols(n), data(m * n) {}

    SysPoly& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const SysPoly& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

namespace sym {

inline SysPoly normalize(const Ring& r, std::map<std::vector<std::uint32_t>, Elem>& acc)
{
    SysPoly out;
    for (auto& [vars, c] : acc)
        if (!r->is_zero(c)) out.push_back(SysTerm{c, vars});
    return out;
}

inline void accumulate(const Ring& r, std::map<std::vector<std::uint32_t>, Elem>& acc, const SysTerm& t)
{
    auto it = acc.find(t.vars);
    if (it == acc.end()) acc.emplace(t.vars, t.coef);
    else it->second = r->add(it->second, t.coef);
}

inline SymMatrix constant(const Matrix& a)
{
    SymMatrix s(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (!a.ring->is_zero(a.data[i])) s.data[i].push_back(SysTerm{a.data[i], {}});
    return s;
}

inline SymMatrix variables(const Ring& r, std::uint32_t base, std::size_t rows, std::size_t cols)
{
    SymMatrix s(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) s.data[i].push_back(SysTerm{r->one(), {base + static_cast<std::uint32_t>(i)}});
    return s;
}

inline SymMatrix mul(const Ring& r, const SymMatrix& a, const SymMatrix& b)
{
    if (a.cols != b.rows) fail(ErrorCode::ShapeMismatch, "descent", "symbolic product shape mismatch");
    SymMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            std::map<std::vector<std::uint32_t>, Elem> acc;
            for (std::size_t k = 0; k < a.cols; ++k) {
                const SysPoly& x = a.at(i, k);
                const SysPoly& y = b.at(k, j);
                if (x.empty() || y.empty()) continue;
                for (const auto& s : x)
                    for (const auto& t : y) {
                        SysTerm p{r->mul(s.coef, t.coef), s.vars};
                        p.vars.insert(p.vars.end(), t.vars.begin(), t.vars.end());
                        std::sort(p.vars.begin(), p.vars.end());
                        accumulate(r, acc, p);
                    }
            }
            out.at(i, j) = normalize(r, acc);
        }
    return out;
}

inline SymMatrix add(const Ring& r, const SymMatrix& a, const SymMatrix& b, bool subtract = false)
{
    if (a.rows != b.rows || a.cols != b.cols) fail(ErrorCode::ShapeMismatch, "descent", "symbolic sum shape mismatch");
    SymMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        std::map<std::vector<std::uint32_t>, Elem> acc;
        for (const auto& t : a.data[i]) accumulate(r, acc, t);
        for (const auto& t : b.data[i]) accumulate(r, acc, subtract ? SysTerm{r->neg(t.coef), t.vars} : t);
        out.data[i] = normalize(r, acc);
    }
    return out;
}

inline SymMatrix neg(const Ring& r, const SymMatrix& a)
{
    SymMatrix out = a;
    for (auto& p : out.data)
        for (auto& t : p) t.coef = r->neg(t.coef);
    return out;
}

inline void place(SymMatrix& a, const SymMatrix& b, std::size_t r0, std::size_t c0)
{
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) a.at(r0 + i, c0 + j) = b.at(i, j);
}

/// kron(I_k, a)
inline SymMatrix kron_identity_left(const SymMatrix& a, std::size_t k)
{
    SymMatrix out(k * a.rows, k * a.cols);
    for (std::size_t t = 0; t < k; ++t) place(out, a, t * a.rows, t * a.cols);
    return out;
}

inline Elem eval(const Ring& target, const RingHom& f, const SysPoly& p, const std::vector<Elem>& values)
{
    Elem acc = target->zero();
    for (const auto& t : p) {
        Elem v = f(t.coef);
        for (auto id : t.vars) v = target->mul(v, values[id]);
        acc = target->add(acc, v);
    }
    return acc;
}

inline Matrix eval(const Ring& target, const RingHom& f, const SymMatrix& a, const std::vector<Elem>& values)
{
    Matrix out(target, a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = eval(target, f, a.data[i], values);
    return out;
}

} // namespace sym

struct Equation {
    int subsystem = 1;  // 1..4
    int h = 0;          // basis element (1-based) for S3, else 0
    int n = 0;
    int row = 1;
    int col = 1;
    SysPoly poly;       // the equation reads poly = 0

    std::string position() const
    {
        std::string out = "S" + std::to_string(subsystem);
        if (subsystem == 3) out += " h=" + std::to_string(h);
        return out + " n=" + std::to_string(n) + " row=" + std::to_string(row) + " col=" + std::to_string(col);
    }
};

/// Variable layout and shape of a descent system.
struct SystemShape {
    int m = 0;
    int e = 0;
    std::vector<std::size_t> s;  // s_0 .. s_m
    std::vector<std::size_t> r;  // r_0 .. r_{m+e}

    std::size_t s_at(int n) const { return n < 0 || n > m ? 0 : s[static_cast<std::size_t>(n)]; }
    std::size_t r_at(int n) const { return n < 0 || n > m + e ? 0 : r[static_cast<std::size_t>(n)]; }
};

inline std::size_t binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    std::size_t b = 1;
    for (int i = 1; i <= k; ++i) b = b * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return b;
}

inline SystemShape make_shape(int e, const std::vector<std::size_t>& s)
{
    SystemShape sh;
    sh.m = s.empty() ? 0 : static_cast<int>(s.size()) - 1;
    sh.e = e;
    sh.s = s.empty() ? std::vector<std::size_t>{0} : s;
    for (int n = 0; n <= sh.m + e; ++n) {
        std::size_t rn = 0;
        for (int p = 0; p <= sh.m; ++p) rn += binomial(e, n - p) * sh.s_at(p);
        sh.r.push_back(rn);
    }
    return sh;
}

struct PolynomialSystem {
    Ring ring;
    SystemShape shape;
    std::vector<SysVar> vars;
    std::vector<std::uint32_t> x_base, y_base, z_base;  // first id of each matrix block
    std::vector<Equation> equations;

    std::size_t count(char family) const
    {
        return static_cast<std::size_t>(std::count_if(vars.begin(), vars.end(), [&](const SysVar& v) { return v.family == family; }));
    }

    std::size_t count_equations(int subsystem) const
    {
        return static_cast<std::size_t>(
            std::count_if(equations.begin(), equations.end(), [&](const Equation& q) { return q.subsystem == subsystem; }));
    }

    std::optional<std::uint32_t> find(const std::string& name) const
    {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name() == name) return static_cast<std::uint32_t>(i);
        return std::nullopt;
    }
};

/// Allocates the X, Y and Z variables in canonical order.
inline void layout_variables(PolynomialSystem& sys)
{
    const SystemShape& sh = sys.shape;
    sys.vars.clear();
    auto block = [&](char fam, int n, std::size_t rows, std::size_t cols) {
        auto base = static_cast<std::uint32_t>(sys.vars.size());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                sys.vars.push_back(SysVar{fam, n, static_cast<int>(i + 1), static_cast<int>(j + 1)});
        return base;
    };
    sys.x_base.assign(static_cast<std::size_t>(sh.m) + 1, 0);
    for (int n = 1; n <= sh.m; ++n) sys.x_base[static_cast<std::size_t>(n)] = block('X', n, sh.s_at(n - 1), sh.s_at(n));
    sys.y_base.clear();
    for (int n = 0; n <= sh.m + sh.e; ++n) sys.y_base.push_back(block('Y', n, sh.r_at(n), sh.r_at(n)));
    sys.z_base.clear();
    for (int n = 0; n <= sh.m + sh.e; ++n)
        sys.z_base.push_back(block('Z', n, sh.r_at(n + 1) + sh.r_at(n), sh.r_at(n) + sh.r_at(n - 1)));
}

namespace detail {

inline SymMatrix sym_x(const PolynomialSystem& sys, int n)
{
    const SystemShape& sh = sys.shape;
    if (n < 1 || n > sh.m) return SymMatrix(sh.s_at(n - 1), sh.s_at(n));
    return sym::variables(sys.ring, sys.x_base[static_cast<std::size_t>(n)], sh.s_at(n - 1), sh.s_at(n));
}

inline SymMatrix sym_y(const PolynomialSystem& sys, int n)
{
    const SystemShape& sh = sys.shape;
    if (n < 0 || n > sh.m + sh.e) return SymMatrix(sh.r_at(n), sh.r_at(n));
    return sym::variables(sys.ring, sys.y_base[static_cast<std::size_t>(n)], sh.r_at(n), sh.r_at(n));
}

inline SymMatrix sym_z(const PolynomialSystem& sys, int n)
{
    const SystemShape& sh = sys.shape;
    std::size_t rows = sh.r_at(n + 1) + sh.r_at(n), cols = sh.r_at(n) + sh.r_at(n - 1);
    if (n < 0 || n > sh.m + sh.e) return SymMatrix(rows, cols);
    return sym::variables(sys.ring, sys.z_base[static_cast<std::size_t>(n)], rows, cols);
}

} // namespace detail

/// Block matrix B_n: Koszul blocks d_{n-p} (x) 1 on the diagonal, (-1)^{n-p} 1 (x) X_p above it.
inline SymMatrix build_b_blocks(const KoszulAlgebra& k, const PolynomialSystem& sys, int n)
{
    const SystemShape& sh = sys.shape;
    const Ring& r = k.ring;
    if (k.e() != sh.e) fail(ErrorCode::ShapeMismatch, "descent", "Koszul length does not match the system shape");
    std::vector<std::size_t> src{0}, dst{0};
    for (int p = 0; p <= sh.m; ++p) {
        src.push_back(src.back() + k.rank(n - p) * sh.s_at(p));
        dst.push_back(dst.back() + k.rank(n - 1 - p) * sh.s_at(p));
    }
    if (src.back() != sh.r_at(n) || dst.back() != sh.r_at(n - 1))
        fail(ErrorCode::ShapeMismatch, "descent", "ranks do not match the tensor layout");
    SymMatrix b(dst.back(), src.back());
    for (int p = 0; p <= sh.m; ++p) {
        auto ip = static_cast<std::size_t>(p);
        std::size_t a = k.rank(n - p), sp = sh.s_at(p);
        if (!a || !sp) continue;
        if (k.rank(n - 1 - p)) sym::place(b, sym::constant(kron(k.diff(n - p), mat_identity(r, sp))), dst[ip], src[ip]);
        if (p >= 1 && sh.s_at(p - 1)) {
            SymMatrix x = sym::kron_identity_left(detail::sym_x(sys, p), a);
            if ((n - p) % 2) x = sym::neg(r, x);
            sym::place(b, x, dst[ip - 1], src[ip]);
        }
    }
    return b;
}

/// Concrete B_n for a given complex P: equals the differential of K (x) P.
inline Matrix b_matrix(const KoszulAlgebra& k, const ChainComplex& p, int n);

namespace detail {

/// Values vector for the variables of a system from matrices X_n, Y_n, Z_n.
inline void set_block(std::vector<Elem>& values, std::uint32_t base, const Matrix& m)
{
    for (std::size_t i = 0; i < m.data.size(); ++i) values[base + i] = m.data[i];
}

inline std::vector<std::size_t> shape_ranks(const ChainComplex& p, int m)
{
    std::vector<std::size_t> s;
    for (int n = 0; n <= m; ++n) s.push_back(p.rank(n));
    return s;
}

inline int top_degree(const ChainComplex& p) { return p.is_zero() ? 0 : std::max(0, p.hi()); }

inline void emit(PolynomialSystem& sys, int subsystem, int h, int n, const SymMatrix& a)
{
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            sys.equations.push_back(Equation{subsystem, h, n, static_cast<int>(i + 1), static_cast<int>(j + 1), a.at(i, j)});
}

/// Symbolic cone differential [[B_n, Y_{n-1}], [0, -u_{n-1}]].
inline SymMatrix sym_cone_diff(const KoszulAlgebra& k, const PolynomialSystem& sys, const DGModule& f, int n)
{
    const SystemShape& sh = sys.shape;
    std::size_t rows = sh.r_at(n - 1) + sh.r_at(n - 2), cols = sh.r_at(n) + sh.r_at(n - 1);
    SymMatrix d(rows, cols);
    sym::place(d, build_b_blocks(k, sys, n), 0, 0);
    sym::place(d, sym_y(sys, n - 1), 0, sh.r_at(n));
    sym::place(d, sym::constant(mat_neg(f.underlying.diff(n - 1))), sh.r_at(n - 1), sh.r_at(n));
    return d;
}

} // namespace detail

inline Matrix b_matrix(const KoszulAlgebra& k, const ChainComplex& p, int n)
{
    PolynomialSystem sys;
    sys.ring = k.ring;
    int m = detail::top_degree(p);
    sys.shape = make_shape(k.e(), detail::shape_ranks(p, m));
    layout_variables(sys);
    std::vector<Elem> values(sys.vars.size(), k.ring->zero());
    for (int q = 1; q <= m; ++q) detail::set_block(values, sys.x_base[static_cast<std::size_t>(q)], p.diff(q));
    return sym::eval(k.ring, identity_hom(k.ring), build_b_blocks(k, sys, n), values);
}

/// The descent system S1..S4 for a minimal complex P on degrees 0..m and a
/// DG module F with differential u and action v^h.
inline PolynomialSystem generate_system(const KoszulAlgebra& k, const ChainComplex& p, const DGModule& f)
{
    const Ring& r = k.ring;
    require_same_ring(r, p.ring, "descent");
    require_same_ring(r, f.underlying.ring, "descent");
    if (!p.is_zero() && p.lo < 0) fail(ErrorCode::ShapeMismatch, "descent", "P must be supported in degrees >= 0");
    if (!is_minimal(p)) fail(ErrorCode::NotMinimal, "descent", "P is not minimal");
    PolynomialSystem sys;
    sys.ring = r;
    int m = detail::top_degree(p);
    sys.shape = make_shape(k.e(), detail::shape_ranks(p, m));
    const SystemShape& sh = sys.shape;
    for (int n = -1; n <= m + k.e() + 1; ++n)
        if (f.underlying.rank(n) != sh.r_at(n))
            fail(ErrorCode::RankMismatch, "descent",
                 "rank F_" + std::to_string(n) + " = " + std::to_string(f.underlying.rank(n)) + ", expected " +
                     std::to_string(sh.r_at(n)));
    if (f.algebra.size() != k.size()) fail(ErrorCode::UnverifiedF, "descent", "F is not a module over the given algebra");
    if (!verify_dg_module(f).all_pass()) fail(ErrorCode::UnverifiedF, "descent", "F fails the DG module axioms");
    layout_variables(sys);

    // S1: X_n X_{n+1} = 0
    for (int n = 1; n <= m - 1; ++n)
        detail::emit(sys, 1, 0, n, sym::mul(r, detail::sym_x(sys, n), detail::sym_x(sys, n + 1)));
    // S2: Y_{n-1} u_n - B_n Y_n = 0
    for (int n = 1; n <= m + k.e(); ++n) {
        SymMatrix lhs = sym::mul(r, detail::sym_y(sys, n - 1), sym::constant(f.underlying.diff(n)));
        SymMatrix rhs = sym::mul(r, build_b_blocks(k, sys, n), detail::sym_y(sys, n));
        detail::emit(sys, 2, 0, n, sym::add(r, lhs, rhs, true));
    }
    // S3: Y_{n+|h|} v^h_n - w^h_n Y_n = 0
    ChainComplex kc = k.complex();
    std::vector<Matrix> zero_diffs;
    for (int n = 1; n <= m; ++n) zero_diffs.push_back(Matrix(r, sh.s_at(n - 1), sh.s_at(n)));
    ChainComplex shape_p = detail::assemble(r, 0, sh.s, zero_diffs, false);
    for (std::size_t h = 0; h < k.size(); ++h) {
        int dh = k.deg(h);
        for (int n = 0; n <= m + k.e() - dh; ++n) {
            Matrix w = extension_action(k, kc, shape_p, h, n);
            SymMatrix lhs = sym::mul(r, detail::sym_y(sys, n + dh), sym::constant(f.act(h, n)));
            SymMatrix rhs = sym::mul(r, sym::constant(w), detail::sym_y(sys, n));
            detail::emit(sys, 3, static_cast<int>(h) + 1, n, sym::add(r, lhs, rhs, true));
        }
    }
    // S4: Z_{n-1} D_n + D_{n+1} Z_n - 1 = 0
    for (int n = 0; n <= m + k.e() + 1; ++n) {
        SymMatrix a = sym::mul(r, detail::sym_z(sys, n - 1), detail::sym_cone_diff(k, sys, f, n));
        SymMatrix b = sym::mul(r, detail::sym_cone_diff(k, sys, f, n + 1), detail::sym_z(sys, n));
        SymMatrix eq = sym::add(r, a, b);
        eq = sym::add(r, eq, sym::constant(mat_identity(r, eq.rows)), true);
        detail::emit(sys, 4, 0, n, eq);
    }
    return sys;
}

/// Values of the system variables in a target ring.
struct Assignment {
    Ring ring;
    std::map<std::string, Elem> values;

    friend bool operator==(const Assignment& a, const Assignment& b)
    {
        return same_ring(a.ring, b.ring) && a.values == b.values;
    }
};

inline std::vector<Elem> assignment_values(const PolynomialSystem& sys, const Assignment& a)
{
    std::vector<Elem> values;
    values.reserve(sys.vars.size());
    for (const auto& v : sys.vars) {
        auto it = a.values.find(v.name());
        if (it == a.values.end()) fail(ErrorCode::IncompleteAssignment, "descent", "no value for " + v.name());
        values.push_back(it->second);
    }
    return values;
}

inline Assignment assignment_from_values(const PolynomialSystem& sys, const Ring& target, const std::vector<Elem>& values)
{
    Assignment a;
    a.ring = target;
    for (std::size_t i = 0; i < sys.vars.size(); ++i) a.values[sys.vars[i].name()] = values[i];
    return a;
}

/// Matrix of a variable block under an assignment.
inline Matrix block_value(const PolynomialSystem& sys, const std::vector<Elem>& values, const Ring& target, char family, int n)
{
    const SystemShape& sh = sys.shape;
    std::size_t rows = 0, cols = 0;
    std::uint32_t base = 0;
    bool present = false;
    if (family == 'X') {
        rows = sh.s_at(n - 1);
        cols = sh.s_at(n);
        present = n >= 1 && n <= sh.m;
        if (present) base = sys.x_base[static_cast<std::size_t>(n)];
    }
    else if (family == 'Y') {
        rows = cols = sh.r_at(n);
        present = n >= 0 && n <= sh.m + sh.e;
        if (present) base = sys.y_base[static_cast<std::size_t>(n)];
    }
    else {
        rows = sh.r_at(n + 1) + sh.r_at(n);
        cols = sh.r_at(n) + sh.r_at(n - 1);
        present = n >= 0 && n <= sh.m + sh.e;
        if (present) base = sys.z_base[static_cast<std::size_t>(n)];
    }
    Matrix out(target, rows, cols);
    if (present)
        for (std::size_t i = 0; i < rows * cols; ++i) out.data[i] = values[base + i];
    return out;
}

/// Canonical harness F = extend(K, P): X = d^P, Y = 1, Z = lower-left identity.
inline Assignment canonical_solution(const KoszulAlgebra& k, const ChainComplex& p)
{
    const Ring& r = k.ring;
    PolynomialSystem sys;
    sys.ring = r;
    int m = detail::top_degree(p);
    sys.shape = make_shape(k.e(), detail::shape_ranks(p, m));
    layout_variables(sys);
    const SystemShape& sh = sys.shape;
    std::vector<Elem> values(sys.vars.size(), r->zero());
    for (int n = 1; n <= m; ++n) detail::set_block(values, sys.x_base[static_cast<std::size_t>(n)], p.diff(n));
    for (int n = 0; n <= m + k.e(); ++n) {
        detail::set_block(values, sys.y_base[static_cast<std::size_t>(n)], mat_identity(r, sh.r_at(n)));
        Matrix z(r, sh.r_at(n + 1) + sh.r_at(n), sh.r_at(n) + sh.r_at(n - 1));
        place(z, mat_identity(r, sh.r_at(n)), sh.r_at(n + 1), 0);
        detail::set_block(values, sys.z_base[static_cast<std::size_t>(n)], z);
    }
    return assignment_from_values(sys, r, values);
}

/// Canonical solution after checking that F is the canonical extension of P.
inline Assignment canonical_solution(const KoszulAlgebra& k, const ChainComplex& p, const DGModule& f)
{
    DGModule canon = extend(k, p);
    if (!(canon.underlying == f.underlying) || canon.action != f.action)
        fail(ErrorCode::NonCanonicalF, "descent", "F is not extend(K, P)");
    return canonical_solution(k, p);
}

struct SubsystemResult {
    int subsystem = 1;
    bool pass = true;
    std::optional<Equation> first_failure;
};

struct SystemReport {
    std::vector<SubsystemResult> results;  // S1..S4

    bool all_pass() const
    {
        return std::all_of(results.begin(), results.end(), [](const SubsystemResult& r) { return r.pass; });
    }

    std::string str() const
    {
        std::string out;
        for (const auto& r : results) {
            if (!out.empty()) out += " ";
            if (r.pass) out += "S" + std::to_string(r.subsystem) + " ok";
            else out += r.first_failure->position().insert(2, " FAIL");
        }
        return out;
    }
};

inline SystemReport verify_assignment(const PolynomialSystem& sys, const Assignment& a, const RingHom& f)
{
    require_same_ring(f.source(), sys.ring, "descent");
    require_same_ring(f.target(), a.ring, "descent");
    std::vector<Elem> values = assignment_values(sys, a);
    SystemReport rep;
    for (int k = 1; k <= 4; ++k) rep.results.push_back(SubsystemResult{k, true, std::nullopt});
    for (const auto& q : sys.equations) {
        auto& res = rep.results[static_cast<std::size_t>(q.subsystem - 1)];
        if (!res.pass) continue;
        if (!a.ring->is_zero(sym::eval(a.ring, f, q.poly, values))) {
            res.pass = false;
            res.first_failure = q;
        }
    }
    return rep;
}

inline SystemReport verify_assignment(const PolynomialSystem& sys, const Assignment& a)
{
    return verify_assignment(sys, a, identity_hom(sys.ring));
}

struct DescentCertificate {
    ChainComplex a;          // reconstructed complex
    DGModule f;              // F over the target ring
    DGModule extended;       // K (x) A
    ChainMap phi;            // F -> K (x) A
    Homotopy sigma;          // contraction of Cone(phi)
    SystemReport report;
    bool complex_ok = false;
    bool chain_map_ok = false;
    bool k_linear_ok = false;
    bool contraction_ok = false;
};

/// Builds A, phi and sigma from a verified assignment and re-checks them independently.
inline DescentCertificate reconstruct(const KoszulAlgebra& k, const DGModule& f, const PolynomialSystem& sys,
                                      const Assignment& asg, const RingHom& hom)
{
    DescentCertificate cert;
    cert.report = verify_assignment(sys, asg, hom);
    if (!cert.report.all_pass())
        fail(ErrorCode::VerificationFailed, "descent", "assignment does not solve the system: " + cert.report.str());
    const Ring& t = asg.ring;
    const SystemShape& sh = sys.shape;
    std::vector<Elem> values = assignment_values(sys, asg);

    KoszulAlgebra kt = koszul_base_change(hom, k);
    std::vector<std::size_t> ranks = sh.s;
    std::vector<Matrix> diffs;
    for (int n = 1; n <= sh.m; ++n) diffs.push_back(block_value(sys, values, t, 'X', n));
    cert.a = detail::assemble(t, 0, ranks, diffs, false);
    cert.complex_ok = !first_d2_violation(cert.a).has_value();

    cert.f.algebra = kt;
    cert.f.underlying = base_change(hom, f.underlying);
    cert.f.action.resize(f.action.size());
    for (std::size_t h = 0; h < f.action.size(); ++h)
        for (const auto& [n, mtx] : f.action[h]) cert.f.action[h][n] = hom(mtx);
    cert.extended = extend(kt, cert.a);

    cert.phi = ChainMap{cert.f.underlying, cert.extended.underlying, {}};
    for (int n = 0; n <= sh.m + sh.e; ++n) cert.phi.comps[n] = block_value(sys, values, t, 'Y', n);
    for (int n = 0; n <= sh.m + sh.e; ++n) cert.sigma.comps[n] = block_value(sys, values, t, 'Z', n);

    cert.chain_map_ok = cert.complex_ok && is_chain_map(cert.phi);
    cert.k_linear_ok = cert.complex_ok && is_k_linear(cert.phi, cert.f, cert.extended);
    if (cert.complex_ok) {
        ChainComplex c = cone(cert.phi);
        cert.contraction_ok = is_contraction(cert.sigma, c);
    }
    if (!cert.complex_ok || !cert.chain_map_ok || !cert.k_linear_ok || !cert.contraction_ok)
        fail(ErrorCode::VerificationFailed, "descent", "independent re-check disagrees with the system verification");
    return cert;
}

inline DescentCertificate reconstruct(const KoszulAlgebra& k, const DGModule& f, const PolynomialSystem& sys,
                                      const Assignment& asg)
{
    return reconstruct(k, f, sys, asg, identity_hom(sys.ring));
}

/// Transports a solution along invertible g_n : A_n -> A_n (X_n -> g_{n-1}^{-1} X_n g_n,
/// Y_n -> (1 (x) g_n)^{-1} Y_n, Z unchanged up to the cone change of basis).
inline Assignment conjugate_solution(const KoszulAlgebra& k, const PolynomialSystem& sys, const Assignment& asg,
                                     const std::vector<Matrix>& g, const std::vector<Matrix>& g_inv)
{
    const Ring& r = asg.ring;
    const SystemShape& sh = sys.shape;
    std::vector<Elem> values = assignment_values(sys, asg);
    auto gi = [&](int n) { return n < 0 || n > sh.m ? Matrix(r, 0, 0) : g_inv[static_cast<std::size_t>(n)]; };
    auto gg = [&](int n) { return n < 0 || n > sh.m ? Matrix(r, 0, 0) : g[static_cast<std::size_t>(n)]; };
    // block-diagonal change of basis on (K (x) A)_n
    auto lift = [&](int n, bool inverse) {
        Matrix out(r, sh.r_at(n), sh.r_at(n));
        std::size_t off = 0;
        for (int p = 0; p <= sh.m; ++p) {
            std::size_t a = k.rank(n - p);
            if (!a || !sh.s_at(p)) continue;
            place(out, kron(mat_identity(r, a), inverse ? gi(p) : gg(p)), off, off);
            off += a * sh.s_at(p);
        }
        return out;
    };
    std::vector<Elem> out = values;
    for (int n = 1; n <= sh.m; ++n)
        detail::set_block(out, sys.x_base[static_cast<std::size_t>(n)],
                          mat_mul(gi(n - 1), mat_mul(block_value(sys, values, r, 'X', n), gg(n))));
    for (int n = 0; n <= sh.m + sh.e; ++n)
        detail::set_block(out, sys.y_base[static_cast<std::size_t>(n)], mat_mul(lift(n, true), block_value(sys, values, r, 'Y', n)));
    for (int n = 0; n <= sh.m + sh.e; ++n) {
        // cone change of basis c_n = diag(lift_n^{-1}, 1) on T_n (+) S_{n-1}; sigma -> c_{n+1} sigma c_n^{-1}
        Matrix c_up = mat_block({{lift(n + 1, true), Matrix(r, sh.r_at(n + 1), sh.r_at(n))},
                                 {Matrix(r, sh.r_at(n), sh.r_at(n + 1)), mat_identity(r, sh.r_at(n))}});
        Matrix c_inv = mat_block({{lift(n, false), Matrix(r, sh.r_at(n), sh.r_at(n - 1))},
                                  {Matrix(r, sh.r_at(n - 1), sh.r_at(n)), mat_identity(r, sh.r_at(n - 1))}});
        detail::set_block(out, sys.z_base[static_cast<std::size_t>(n)],
                          mat_mul(c_up, mat_mul(block_value(sys, values, r, 'Z', n), c_inv)));
    }
    return assignment_from_values(sys, r, out);
}

struct TruncateExtendResult {
    ChainComplex m;
    int window_lo = 0;       // H_i(M) verified zero for window_lo <= i <= window_hi
    int window_hi = 0;
    int tensor_checked_hi = 0;  // H_i(K (x) M) verified zero for s + 2e < i <= this
    bool terminated = true;
};

/// Augments A (degrees 0..m) by a resolution of ker d_m and verifies the
/// vanishing window s+e < i < m for M and K (x) M.
inline TruncateExtendResult truncate_extend(const KoszulAlgebra& k, const ChainComplex& a, int s, int m, int depth_budget)
{
    const Ring& r = k.ring;
    require_linear_solve(r);
    require_same_ring(r, a.ring, "descent");
    int e = k.e();
    if (m < s + 2 * e + 1)
        fail(ErrorCode::InvalidArgument, "descent", "m must be at least s + 2e + 1 = " + std::to_string(s + 2 * e + 1));
    if (!a.is_zero() && (a.lo < 0 || a.hi() > m))
        fail(ErrorCode::InvalidArgument, "descent", "A must be supported in degrees 0.." + std::to_string(m));
    AugmentResult aug = augment_by_resolution(a, m, depth_budget);
    TruncateExtendResult out;
    out.m = aug.complex;
    out.terminated = aug.terminated;
    out.window_lo = s + e + 1;
    out.window_hi = m - 1;
    for (int i = out.window_lo; i <= out.window_hi; ++i)
        if (!homology(out.m, i).is_zero())
            fail(ErrorCode::WindowViolated, "descent", "H_" + std::to_string(i) + "(M) is nonzero inside the window");
    ChainComplex km = tensor(k.complex(), out.m);
    for (int i = out.window_lo; i <= out.window_hi; ++i)
        if (!homology(km, i).is_zero())
            fail(ErrorCode::WindowViolated, "descent", "H_" + std::to_string(i) + "(K (x) M) is nonzero inside the window");
    // degrees of K (x) M whose homology agrees with the unbounded resolution
    int valid_hi = aug.terminated ? aug.top + e : aug.top - 1;
    out.tensor_checked_hi = std::max(valid_hi, s + 2 * e);
    for (int i = s + 2 * e + 1; i <= valid_hi; ++i)
        if (!homology(km, i).is_zero())
            fail(ErrorCode::WindowViolated, "descent", "H_" + std::to_string(i) + "(K (x) M) is nonzero above s + 2e");
    return out;
}

} // namespace kext
