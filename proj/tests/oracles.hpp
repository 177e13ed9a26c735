#pragma once

#include "support.hpp"

#include <set>

namespace kext::testing {

using Vec = std::vector<std::int64_t>;

inline std::vector<Vec> all_vectors(std::int64_t n, std::size_t len)
{
    std::vector<Vec> out{Vec{}};
    for (std::size_t k = 0; k < len; ++k) {
        std::vector<Vec> next;
        for (const auto& v : out)
            for (std::int64_t x = 0; x < n; ++x) {
                Vec w = v;
                w.push_back(x);
                next.push_back(w);
            }
        out = next;
    }
    return out;
}

inline std::int64_t residue(const Elem& e) { return std::get<std::int64_t>(e); }

inline std::set<Vec> brute_kernel(const Matrix& a, std::int64_t n)
{
    std::set<Vec> out;
    for (const auto& v : all_vectors(n, a.cols)) {
        bool zero = true;
        for (std::size_t i = 0; i < a.rows && zero; ++i) {
            std::int64_t s = 0;
            for (std::size_t j = 0; j < a.cols; ++j) s = (s + residue(a.at(i, j)) * v[j]) % n;
            zero = s == 0;
        }
        if (zero) out.insert(v);
    }
    return out;
}

inline std::set<Vec> column_span(const Matrix& k, std::int64_t n)
{
    std::set<Vec> span{Vec(k.rows, 0)};
    for (std::size_t c = 0; c < k.cols; ++c) {
        std::set<Vec> next;
        for (const auto& s : span)
            for (std::int64_t t = 0; t < n; ++t) {
                Vec w = s;
                for (std::size_t i = 0; i < k.rows; ++i) w[i] = (w[i] + t * residue(k.at(i, c))) % n;
                next.insert(w);
            }
        span = next;
    }
    return span;
}

inline BigInt det(const std::vector<std::vector<BigInt>>& m)
{
    std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt out = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<BigInt>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<BigInt> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(row);
        }
        BigInt term = m[0][c] * det(minor);
        out += c % 2 ? -term : term;
    }
    return out;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

/// gcd of all k x k minors.
inline BigInt determinantal_divisor(const std::vector<std::vector<BigInt>>& a, std::size_t k)
{
    std::vector<std::vector<std::size_t>> rows, cols;
    std::vector<std::size_t> cur;
    subsets(a.size(), k, 0, cur, rows);
    subsets(a.empty() ? 0 : a[0].size(), k, 0, cur, cols);
    BigInt g = 0;
    for (const auto& rs : rows)
        for (const auto& cs : cols) {
            std::vector<std::vector<BigInt>> m;
            for (auto i : rs) {
                std::vector<BigInt> row;
                for (auto j : cs) row.push_back(a[i][j]);
                m.push_back(row);
            }
            BigInt d = abs(det(m));
            g = boost::multiprecision::gcd(g, d);
        }
    return g;
}

struct Counts {
    std::size_t x = 0, y = 0, z = 0;
    std::size_t eq[5] = {0, 0, 0, 0, 0};
};

/// Closed-form sizes of the index ranges, computed from s and e alone.
inline Counts closed_form(int e, const std::vector<std::size_t>& s)
{
    int m = static_cast<int>(s.size()) - 1;
    auto sa = [&](int n) { return n < 0 || n > m ? std::size_t{0} : s[static_cast<std::size_t>(n)]; };
    auto choose = [](int n, int k) {
        if (k < 0 || k > n) return std::size_t{0};
        std::size_t b = 1;
        for (int i = 0; i < k; ++i) b = b * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
        return b;
    };
    auto ra = [&](int n) {
        std::size_t t = 0;
        for (int p = 0; p <= m; ++p) t += choose(e, n - p) * sa(p);
        return n < 0 || n > m + e ? std::size_t{0} : t;
    };
    Counts c;
    for (int n = 1; n <= m; ++n) c.x += sa(n - 1) * sa(n);
    for (int n = 0; n <= m + e; ++n) c.y += ra(n) * ra(n);
    for (int n = 0; n <= m + e; ++n) c.z += (ra(n + 1) + ra(n)) * (ra(n) + ra(n - 1));
    for (int n = 1; n <= m - 1; ++n) c.eq[1] += sa(n - 1) * sa(n + 1);
    for (int n = 1; n <= m + e; ++n) c.eq[2] += ra(n - 1) * ra(n);
    for (int d = 0; d <= e; ++d)
        for (int n = 0; n <= m + e - d; ++n) c.eq[3] += choose(e, d) * ra(n + d) * ra(n);
    for (int n = 0; n <= m + e + 1; ++n) c.eq[4] += (ra(n) + ra(n - 1)) * (ra(n) + ra(n - 1));
    return c;
}

inline std::vector<std::size_t> support_ranks(const ChainComplex& p)
{
    std::vector<std::size_t> s;
    int m = p.is_zero() ? 0 : std::max(0, p.hi());
    for (int n = 0; n <= m; ++n) s.push_back(p.rank(n));
    return s;
}

inline std::vector<BigInt> homology_sizes(const ChainComplex& c, int lo, int hi)
{
    std::vector<BigInt> out;
    for (int n = lo; n <= hi; ++n) out.push_back(homology_size(homology(c, n)));
    return out;
}

} // namespace kext::testing
