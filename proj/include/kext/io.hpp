#pragma once

// Line-oriented text formats and their JSON mirrors. Every text file starts
// with a "ring <descriptor>" line; '#' starts a comment; blank lines are ignored.
// Matrix rows are comma-separated elements in the ring element grammar.

#include "kext/descent.hpp"
#include "kext/duality.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kext::io {

using json = nlohmann::json;

struct Line {
    std::size_t number = 0;
    std::string text;
};

[[noreturn]] inline void format_error(const Line& l, const std::string& msg)
{
    fail(ErrorCode::FormatError, "io", "line " + std::to_string(l.number) + ": " + msg);
}

inline std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        }
        else cur += c;
    }
    out.push_back(trim(cur));
    return out;
}

inline std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

/// Splits text into non-empty, comment-stripped lines.
inline std::vector<Line> lines_of(const std::string& text)
{
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string t = trim(raw);
        if (!t.empty()) out.push_back(Line{n, t});
    }
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::FormatError, "io", "cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::FormatError, "io", "cannot write " + path);
    out << text;
}

inline long long to_int(const Line& l, const std::string& w)
{
    try {
        std::size_t used = 0;
        long long v = std::stoll(w, &used);
        if (used != w.size()) format_error(l, "expected an integer, got '" + w + "'");
        return v;
    }
    catch (const std::logic_error&) {
        format_error(l, "expected an integer, got '" + w + "'");
    }
}

inline std::size_t to_size(const Line& l, const std::string& w)
{
    long long v = to_int(l, w);
    if (v < 0) format_error(l, "expected a nonnegative integer, got '" + w + "'");
    return static_cast<std::size_t>(v);
}

inline Elem parse_elem(const Ring& r, const Line& l, const std::string& text)
{
    try {
        return r->parse(text);
    }
    catch (const Error& e) {
        format_error(l, "bad element '" + text + "': " + e.what());
    }
}

/// Cursor over the lines of one file.
class Reader {
public:
    explicit Reader(const std::string& text) : lines_(lines_of(text)) {}

    bool done() const { return pos_ >= lines_.size(); }
    const Line& peek() const
    {
        if (done()) fail(ErrorCode::FormatError, "io", "unexpected end of file");
        return lines_[pos_];
    }
    const Line& next()
    {
        const Line& l = peek();
        ++pos_;
        return l;
    }

    /// Consumes "keyword rest" and returns rest.
    std::string expect(const std::string& keyword)
    {
        const Line& l = next();
        if (l.text != keyword && l.text.rfind(keyword + " ", 0) != 0) format_error(l, "expected '" + keyword + "'");
        return trim(l.text.substr(keyword.size()));
    }

    bool at(const std::string& keyword) const
    {
        if (done()) return false;
        const std::string& t = lines_[pos_].text;
        return t == keyword || t.rfind(keyword + " ", 0) == 0;
    }

    Ring ring()
    {
        const Line& l = peek();
        std::string spec = expect("ring");
        try {
            return make_ring(spec);
        }
        catch (const Error& e) {
            format_error(l, std::string("bad ring: ") + e.what());
        }
    }

    Matrix matrix(const Ring& r, std::size_t rows, std::size_t cols)
    {
        Matrix m(r, rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const Line& l = next();
            auto cells = split(l.text, ',');
            if (cells.size() != cols)
                format_error(l, "expected " + std::to_string(cols) + " entries, got " + std::to_string(cells.size()));
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = parse_elem(r, l, cells[j]);
        }
        return m;
    }

private:
    std::vector<Line> lines_;
    std::size_t pos_ = 0;
};

inline std::string ring_line(const Ring& r) { return "ring " + r->descriptor() + "\n"; }

inline std::string matrix_rows(const Matrix& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) out += (j ? ", " : "") + m.ring->print(m.at(i, j));
        out += "\n";
    }
    return out;
}

inline std::string join_sizes(const std::vector<std::size_t>& v, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
    return out;
}

// ---- complexes -------------------------------------------------------------

inline std::string complex_body(const ChainComplex& c)
{
    std::string out = "lo " + std::to_string(c.is_zero() ? 0 : c.lo) + "\n";
    out += "ranks" + std::string(c.ranks.empty() ? "" : " ") + join_sizes(c.ranks, " ") + "\n";
    for (int n = c.lo + 1; n <= c.hi() && !c.is_zero(); ++n) {
        if (!c.rank(n) || !c.rank(n - 1)) continue;
        out += "d " + std::to_string(n) + "\n" + matrix_rows(c.diff(n));
    }
    return out;
}

inline std::string save_complex(const ChainComplex& c) { return ring_line(c.ring) + complex_body(c); }

inline ChainComplex read_complex_body(Reader& in, const Ring& r)
{
    const Line& lol = in.peek();
    int lo = static_cast<int>(to_int(lol, in.expect("lo")));
    const Line& rl = in.peek();
    std::vector<std::size_t> ranks;
    for (const auto& w : words(in.expect("ranks"))) ranks.push_back(to_size(rl, w));
    std::vector<Matrix> diffs;
    for (std::size_t k = 0; k < ranks.size(); ++k)
        diffs.push_back(Matrix(r, k ? ranks[k - 1] : 0, ranks[k]));
    while (in.at("d")) {
        const Line& l = in.peek();
        int n = static_cast<int>(to_int(l, in.expect("d")));
        int idx = n - lo;
        if (idx < 1 || idx >= static_cast<int>(ranks.size())) format_error(l, "differential degree out of range");
        auto k = static_cast<std::size_t>(idx);
        diffs[k] = in.matrix(r, ranks[k - 1], ranks[k]);
    }
    return make_complex(r, lo, ranks, diffs);
}

inline ChainComplex load_complex(const std::string& text)
{
    Reader in(text);
    Ring r = in.ring();
    ChainComplex c = read_complex_body(in, r);
    if (!in.done()) format_error(in.peek(), "unexpected content");
    return c;
}

// ---- Koszul algebras -------------------------------------------------------

inline std::string koszul_line(const KoszulAlgebra& k)
{
    std::string out = "koszul";
    for (std::size_t i = 0; i < k.seq.size(); ++i) out += (i ? ", " : " ") + k.ring->print(k.seq[i]);
    return out + "\n";
}

inline std::string save_koszul(const KoszulAlgebra& k) { return ring_line(k.ring) + koszul_line(k); }

inline KoszulAlgebra read_koszul_line(Reader& in, const Ring& r)
{
    const Line& l = in.peek();
    std::string rest = in.expect("koszul");
    std::vector<Elem> seq;
    if (!rest.empty())
        for (const auto& cell : split(rest, ',')) seq.push_back(parse_elem(r, l, cell));
    return koszul(r, seq);
}

inline KoszulAlgebra load_koszul(const std::string& text)
{
    Reader in(text);
    Ring r = in.ring();
    KoszulAlgebra k = read_koszul_line(in, r);
    if (!in.done()) format_error(in.peek(), "unexpected content");
    return k;
}

// ---- DG modules ------------------------------------------------------------

inline std::string save_dg_module(const DGModule& d)
{
    std::string out = ring_line(d.underlying.ring) + koszul_line(d.algebra) + complex_body(d.underlying);
    for (std::size_t h = 0; h < d.action.size(); ++h)
        for (const auto& [n, m] : d.action[h]) {
            if (!m.rows || !m.cols) continue;
            out += "act " + std::to_string(h + 1) + " " + std::to_string(n) + "\n" + matrix_rows(m);
        }
    return out;
}

inline DGModule load_dg_module(const std::string& text)
{
    Reader in(text);
    Ring r = in.ring();
    DGModule d;
    d.algebra = read_koszul_line(in, r);
    d.underlying = read_complex_body(in, r);
    d.action.resize(d.algebra.size());
    while (in.at("act")) {
        const Line& l = in.peek();
        auto w = words(in.expect("act"));
        if (w.size() != 2) format_error(l, "expected 'act <h> <n>'");
        std::size_t h = to_size(l, w[0]);
        int n = static_cast<int>(to_int(l, w[1]));
        if (h < 1 || h > d.algebra.size()) format_error(l, "basis index out of range");
        std::size_t rows = d.underlying.rank(n + d.algebra.deg(h - 1)), cols = d.underlying.rank(n);
        d.action[h - 1][n] = in.matrix(r, rows, cols);
    }
    if (!in.done()) format_error(in.peek(), "unexpected content");
    AxiomReport rep = verify_dg_module(d);
    if (!rep.all_pass()) fail(ErrorCode::VerificationFailed, "io", "DG module fails:\n" + rep.str());
    return d;
}

// ---- chain maps ------------------------------------------------------------

inline std::string save_chain_map(const ChainMap& f)
{
    std::string out = ring_line(f.source.ring) + "map\n";
    for (const auto& [n, m] : f.comps)
        if (m.rows && m.cols) out += "c " + std::to_string(n) + "\n" + matrix_rows(m);
    return out;
}

/// Components are read against the given source and target complexes.
inline ChainMap load_chain_map(const std::string& text, const ChainComplex& source, const ChainComplex& target)
{
    Reader in(text);
    Ring r = in.ring();
    require_same_ring(r, source.ring, "io");
    in.expect("map");
    ChainMap f{source, target, {}};
    while (in.at("c")) {
        const Line& l = in.peek();
        int n = static_cast<int>(to_int(l, in.expect("c")));
        if (f.comps.count(n)) format_error(l, "duplicate component");
        f.comps[n] = in.matrix(r, target.rank(n), source.rank(n));
    }
    if (!in.done()) format_error(in.peek(), "unexpected content");
    return f;
}

// ---- module presentations --------------------------------------------------

inline std::string save_module(const ModulePresentation& m)
{
    return ring_line(m.ring) + "generators " + std::to_string(m.relations.rows) + "\nrelations " +
           std::to_string(m.relations.cols) + "\n" + (m.relations.cols ? matrix_rows(m.relations) : "");
}

inline ModulePresentation load_module(const std::string& text)
{
    Reader in(text);
    Ring r = in.ring();
    const Line& gl = in.peek();
    std::size_t g = to_size(gl, in.expect("generators"));
    const Line& rl = in.peek();
    std::size_t q = to_size(rl, in.expect("relations"));
    Matrix rel = q ? in.matrix(r, g, q) : Matrix(r, g, 0);
    if (!in.done()) format_error(in.peek(), "unexpected content");
    return ModulePresentation{r, rel};
}

// ---- polynomial systems ----------------------------------------------------

inline std::string print_sys_poly(const PolynomialSystem& sys, const SysPoly& p)
{
    const Ring& r = sys.ring;
    std::string out;
    for (const auto& t : p) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < t.vars.size();) {
            std::size_t j = i;
            while (j < t.vars.size() && t.vars[j] == t.vars[i]) ++j;
            std::string nm = sys.vars[t.vars[i]].name();
            if (j - i > 1) nm += "^" + std::to_string(j - i);
            names.push_back(nm);
            i = j;
        }
        for (const auto& raw : parse_raw(r->print(t.coef))) {
            BigRat q = raw.coef;
            if (q == 0) continue;
            bool neg = q < 0;
            if (neg) q = -q;
            std::vector<std::string> factors;
            for (const auto& [v, e] : raw.powers) factors.push_back(e > 1 ? v + "^" + std::to_string(e) : v);
            factors.insert(factors.end(), names.begin(), names.end());
            std::string body;
            std::string qs = num::to_string(q);
            if (qs != "1" || factors.empty()) body = qs;
            for (const auto& f : factors) body += (body.empty() ? "" : "*") + f;
            if (out.empty()) out = neg ? "-" + body : body;
            else out += (neg ? " - " : " + ") + body;
        }
    }
    return out.empty() ? "0" : out;
}

inline SysPoly parse_sys_poly(const PolynomialSystem& sys, const Line& l, const std::string& text,
                              const std::map<std::string, std::uint32_t>& index)
{
    const Ring& r = sys.ring;
    RawPoly raw;
    try {
        raw = parse_raw(text);
    }
    catch (const Error& e) {
        format_error(l, std::string("bad polynomial: ") + e.what());
    }
    std::map<std::vector<std::uint32_t>, Elem> acc;
    for (const auto& t : raw) {
        RawTerm ring_part;
        ring_part.coef = t.coef;
        std::vector<std::uint32_t> vars;
        for (const auto& [name, e] : t.powers) {
            auto it = index.find(name);
            if (it != index.end()) vars.insert(vars.end(), e, it->second);
            else if (!name.empty() && (name[0] == 'X' || name[0] == 'Y' || name[0] == 'Z') && name.size() > 1 && name[1] == '_')
                format_error(l, "unknown system variable " + name);
            else ring_part.powers.emplace_back(name, e);
        }
        std::sort(vars.begin(), vars.end());
        Elem c;
        try {
            c = r->from_raw(RawPoly{ring_part});
        }
        catch (const Error& e) {
            format_error(l, std::string("bad coefficient: ") + e.what());
        }
        sym::accumulate(r, acc, SysTerm{c, vars});
    }
    return sym::normalize(r, acc);
}

inline std::string shape_line(const SystemShape& sh)
{
    return "m=" + std::to_string(sh.m) + " e=" + std::to_string(sh.e) + " s=" + join_sizes(sh.s, ",") +
           " r=" + join_sizes(sh.r, ",") + "\n";
}

inline std::string equation_line(const PolynomialSystem& sys, const Equation& q)
{
    std::string out = "S" + std::to_string(q.subsystem);
    if (q.subsystem == 3) out += " h=" + std::to_string(q.h);
    out += " " + std::to_string(q.n) + " " + std::to_string(q.row) + " " + std::to_string(q.col) + " : ";
    return out + print_sys_poly(sys, q.poly) + "\n";
}

inline std::string save_system(const PolynomialSystem& sys)
{
    std::string out = ring_line(sys.ring) + shape_line(sys.shape);
    for (const auto& q : sys.equations) out += equation_line(sys, q);
    return out;
}

inline PolynomialSystem load_system(const std::string& text)
{
    Reader in(text);
    PolynomialSystem sys;
    sys.ring = in.ring();
    const Line& hl = in.next();
    int m = -1, e = -1;
    std::vector<std::size_t> s, rr;
    for (const auto& w : words(hl.text)) {
        auto eq = w.find('=');
        if (eq == std::string::npos) format_error(hl, "expected key=value in the shape header");
        std::string key = w.substr(0, eq), val = w.substr(eq + 1);
        if (key == "m") m = static_cast<int>(to_int(hl, val));
        else if (key == "e") e = static_cast<int>(to_int(hl, val));
        else if (key == "s" || key == "r") {
            auto& dst = key == "s" ? s : rr;
            for (const auto& cell : split(val, ',')) dst.push_back(to_size(hl, cell));
        }
        else format_error(hl, "unknown header key '" + key + "'");
    }
    if (m < 0 || e < 0 || s.empty()) format_error(hl, "shape header needs m, e and s");
    sys.shape = make_shape(e, s);
    if (sys.shape.m != m) format_error(hl, "m does not match the length of s");
    if (!rr.empty() && rr != sys.shape.r) format_error(hl, "r does not match the ranks implied by e and s");
    layout_variables(sys);
    std::map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < sys.vars.size(); ++i) index[sys.vars[i].name()] = static_cast<std::uint32_t>(i);
    std::set<std::string> seen;
    while (!in.done()) {
        const Line& l = in.next();
        auto colon = l.text.find(':');
        if (colon == std::string::npos) format_error(l, "expected 'Sk n row col : poly'");
        auto w = words(l.text.substr(0, colon));
        if (w.empty() || w[0].size() != 2 || w[0][0] != 'S' || w[0][1] < '1' || w[0][1] > '4')
            format_error(l, "expected a subsystem tag S1..S4");
        Equation q;
        q.subsystem = w[0][1] - '0';
        std::size_t at = 1;
        if (q.subsystem == 3) {
            if (w.size() < 2 || w[1].rfind("h=", 0) != 0) format_error(l, "S3 equations need h=<index>");
            q.h = static_cast<int>(to_int(l, w[1].substr(2)));
            at = 2;
        }
        if (w.size() != at + 3) format_error(l, "expected n row col");
        q.n = static_cast<int>(to_int(l, w[at]));
        q.row = static_cast<int>(to_int(l, w[at + 1]));
        q.col = static_cast<int>(to_int(l, w[at + 2]));
        if (q.row < 1 || q.col < 1) format_error(l, "row and col are 1-based");
        if (!seen.insert(q.position()).second) format_error(l, "duplicate equation " + q.position());
        q.poly = parse_sys_poly(sys, l, l.text.substr(colon + 1), index);
        sys.equations.push_back(q);
    }
    return sys;
}

// ---- assignments -----------------------------------------------------------

inline bool var_name_less(const std::string& a, const std::string& b)
{
    auto key = [](const std::string& s) {
        auto parts = split(s, '_');
        std::vector<long long> k{static_cast<long long>(s[0])};
        for (std::size_t i = 1; i < parts.size(); ++i) k.push_back(std::stoll(parts[i]));
        return k;
    };
    return key(a) < key(b);
}

inline bool valid_var_name(const std::string& s)
{
    if (s.size() < 7 || (s[0] != 'X' && s[0] != 'Y' && s[0] != 'Z') || s[1] != '_') return false;
    auto parts = split(s, '_');
    if (parts.size() != 4) return false;
    for (std::size_t i = 1; i < 4; ++i)
        if (parts[i].empty() || !std::all_of(parts[i].begin(), parts[i].end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return false;
    return true;
}

inline std::string save_assignment(const Assignment& a)
{
    std::vector<std::string> names;
    for (const auto& [k, v] : a.values) names.push_back(k);
    std::sort(names.begin(), names.end(), var_name_less);
    std::string out = ring_line(a.ring);
    for (const auto& n : names) out += n + " = " + a.ring->print(a.values.at(n)) + "\n";
    return out;
}

inline Assignment load_assignment(const std::string& text)
{
    Reader in(text);
    Assignment a;
    a.ring = in.ring();
    while (!in.done()) {
        const Line& l = in.next();
        auto eq = l.text.find('=');
        if (eq == std::string::npos) format_error(l, "expected 'name = element'");
        std::string name = trim(l.text.substr(0, eq));
        if (!valid_var_name(name)) format_error(l, "bad variable name '" + name + "'");
        if (a.values.count(name)) format_error(l, "duplicate variable " + name);
        a.values[name] = parse_elem(a.ring, l, trim(l.text.substr(eq + 1)));
    }
    return a;
}

// ---- JSON ------------------------------------------------------------------

inline json matrix_json(const Matrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.ring->print(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const Ring& r, const json& j, std::size_t rows, std::size_t cols)
{
    if (!j.is_array() || j.size() != rows) fail(ErrorCode::FormatError, "io", "matrix has the wrong number of rows");
    Matrix m(r, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) fail(ErrorCode::FormatError, "io", "matrix row has the wrong length");
        for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = r->parse(j[i][c].get<std::string>());
    }
    return m;
}

inline Ring ring_from_json(const json& j) { return make_ring(j.at("ring").get<std::string>()); }

inline json complex_fields(const ChainComplex& c)
{
    json j;
    j["lo"] = c.is_zero() ? 0 : c.lo;
    j["ranks"] = c.ranks;
    json d = json::object();
    for (int n = c.lo + 1; n <= c.hi() && !c.is_zero(); ++n)
        if (c.rank(n) && c.rank(n - 1)) d[std::to_string(n)] = matrix_json(c.diff(n));
    j["d"] = d;
    return j;
}

inline json to_json(const ChainComplex& c)
{
    json j = complex_fields(c);
    j["type"] = "complex";
    j["ring"] = c.ring->descriptor();
    return j;
}

inline ChainComplex complex_from_fields(const Ring& r, const json& j)
{
    int lo = j.at("lo").get<int>();
    auto ranks = j.at("ranks").get<std::vector<std::size_t>>();
    std::vector<Matrix> diffs;
    for (std::size_t k = 0; k < ranks.size(); ++k) diffs.push_back(Matrix(r, k ? ranks[k - 1] : 0, ranks[k]));
    for (const auto& [key, val] : j.at("d").items()) {
        int idx = std::stoi(key) - lo;
        if (idx < 1 || idx >= static_cast<int>(ranks.size())) fail(ErrorCode::FormatError, "io", "differential degree out of range");
        auto k = static_cast<std::size_t>(idx);
        diffs[k] = matrix_from_json(r, val, ranks[k - 1], ranks[k]);
    }
    return make_complex(r, lo, ranks, diffs);
}

inline ChainComplex complex_from_json_unchecked(const json& j) { return complex_from_fields(ring_from_json(j), j); }

inline json to_json(const KoszulAlgebra& k)
{
    json seq = json::array();
    for (const auto& a : k.seq) seq.push_back(k.ring->print(a));
    return json{{"type", "koszul"}, {"ring", k.ring->descriptor()}, {"sequence", seq}};
}

inline KoszulAlgebra koszul_from_json_unchecked(const json& j)
{
    Ring r = ring_from_json(j);
    std::vector<Elem> seq;
    for (const auto& s : j.at("sequence")) seq.push_back(r->parse(s.get<std::string>()));
    return koszul(r, seq);
}

inline json to_json(const DGModule& d)
{
    json j = complex_fields(d.underlying);
    j["type"] = "dg_module";
    j["ring"] = d.underlying.ring->descriptor();
    j["sequence"] = to_json(d.algebra)["sequence"];
    json act = json::array();
    for (std::size_t h = 0; h < d.action.size(); ++h)
        for (const auto& [n, m] : d.action[h])
            if (m.rows && m.cols) act.push_back(json{{"h", h + 1}, {"n", n}, {"matrix", matrix_json(m)}});
    j["action"] = act;
    return j;
}

inline DGModule dg_module_from_json_unchecked(const json& j)
{
    Ring r = ring_from_json(j);
    DGModule d;
    d.algebra = koszul_from_json_unchecked(j);
    d.underlying = complex_from_fields(r, j);
    d.action.resize(d.algebra.size());
    for (const auto& a : j.at("action")) {
        std::size_t h = a.at("h").get<std::size_t>();
        int n = a.at("n").get<int>();
        if (h < 1 || h > d.algebra.size()) fail(ErrorCode::FormatError, "io", "basis index out of range");
        d.action[h - 1][n] =
            matrix_from_json(r, a.at("matrix"), d.underlying.rank(n + d.algebra.deg(h - 1)), d.underlying.rank(n));
    }
    AxiomReport rep = verify_dg_module(d);
    if (!rep.all_pass()) fail(ErrorCode::VerificationFailed, "io", "DG module fails:\n" + rep.str());
    return d;
}

inline json to_json(const ModulePresentation& m)
{
    return json{{"type", "module"},
                {"ring", m.ring->descriptor()},
                {"generators", m.relations.rows},
                {"relations", matrix_json(m.relations)}};
}

inline ModulePresentation module_from_json_unchecked(const json& j)
{
    Ring r = ring_from_json(j);
    std::size_t g = j.at("generators").get<std::size_t>();
    const json& rel = j.at("relations");
    std::size_t q = g && !rel.empty() ? rel[0].size() : 0;
    return ModulePresentation{r, g ? matrix_from_json(r, rel, g, q) : Matrix(r, 0, 0)};
}

inline json to_json(const PolynomialSystem& sys)
{
    json eqs = json::array();
    for (const auto& q : sys.equations) {
        json e{{"subsystem", q.subsystem}, {"n", q.n}, {"row", q.row}, {"col", q.col}, {"poly", print_sys_poly(sys, q.poly)}};
        if (q.subsystem == 3) e["h"] = q.h;
        eqs.push_back(e);
    }
    return json{{"type", "system"},
                {"ring", sys.ring->descriptor()},
                {"m", sys.shape.m},
                {"e", sys.shape.e},
                {"s", sys.shape.s},
                {"r", sys.shape.r},
                {"equations", eqs}};
}

inline PolynomialSystem system_from_json_unchecked(const json& j)
{
    std::string text = "ring " + j.at("ring").get<std::string>() + "\n";
    text += "m=" + std::to_string(j.at("m").get<int>()) + " e=" + std::to_string(j.at("e").get<int>()) +
            " s=" + join_sizes(j.at("s").get<std::vector<std::size_t>>(), ",") +
            " r=" + join_sizes(j.at("r").get<std::vector<std::size_t>>(), ",") + "\n";
    for (const auto& q : j.at("equations")) {
        int k = q.at("subsystem").get<int>();
        text += "S" + std::to_string(k);
        if (k == 3) text += " h=" + std::to_string(q.at("h").get<int>());
        text += " " + std::to_string(q.at("n").get<int>()) + " " + std::to_string(q.at("row").get<int>()) + " " +
                std::to_string(q.at("col").get<int>()) + " : " + q.at("poly").get<std::string>() + "\n";
    }
    return load_system(text);
}

inline json to_json(const Assignment& a)
{
    json vals = json::object();
    for (const auto& [k, v] : a.values) vals[k] = a.ring->print(v);
    return json{{"type", "assignment"}, {"ring", a.ring->descriptor()}, {"values", vals}};
}

inline Assignment assignment_from_json_unchecked(const json& j)
{
    Assignment a;
    a.ring = ring_from_json(j);
    for (const auto& [k, v] : j.at("values").items()) {
        if (!valid_var_name(k)) fail(ErrorCode::FormatError, "io", "bad variable name '" + k + "'");
        a.values[k] = a.ring->parse(v.get<std::string>());
    }
    return a;
}

template <class F>
auto json_guard(F&& f) -> decltype(f())
{
    try {
        return f();
    }
    catch (const json::exception& e) {
        fail(ErrorCode::FormatError, "io", std::string("bad JSON document: ") + e.what());
    }
}

inline ChainComplex complex_from_json(const json& j) { return json_guard([&] { return complex_from_json_unchecked(j); }); }
inline KoszulAlgebra koszul_from_json(const json& j) { return json_guard([&] { return koszul_from_json_unchecked(j); }); }
inline DGModule dg_module_from_json(const json& j) { return json_guard([&] { return dg_module_from_json_unchecked(j); }); }
inline ModulePresentation module_from_json(const json& j) { return json_guard([&] { return module_from_json_unchecked(j); }); }
inline PolynomialSystem system_from_json(const json& j) { return json_guard([&] { return system_from_json_unchecked(j); }); }
inline Assignment assignment_from_json(const json& j) { return json_guard([&] { return assignment_from_json_unchecked(j); }); }

/// Structural equality of polynomial systems (shape and equations).
inline bool same_system(const PolynomialSystem& a, const PolynomialSystem& b)
{
    if (!same_ring(a.ring, b.ring) || a.shape.m != b.shape.m || a.shape.e != b.shape.e || a.shape.s != b.shape.s ||
        a.equations.size() != b.equations.size())
        return false;
    for (std::size_t i = 0; i < a.equations.size(); ++i) {
        const Equation &p = a.equations[i], &q = b.equations[i];
        if (p.position() != q.position() || p.poly.size() != q.poly.size()) return false;
        for (std::size_t t = 0; t < p.poly.size(); ++t)
            if (p.poly[t].vars != q.poly[t].vars || !(p.poly[t].coef == q.poly[t].coef)) return false;
    }
    return true;
}

} // namespace kext::io
