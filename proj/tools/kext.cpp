#include "kext/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace kext;

namespace {

struct Options {
    std::string output;
    bool json = false;
};

bool looks_like_json(const std::string& text)
{
    auto p = text.find_first_not_of(" \t\r\n");
    return p != std::string::npos && text[p] == '{';
}

io::json parse_json(const std::string& text)
{
    try {
        return io::json::parse(text);
    }
    catch (const io::json::exception& e) {
        fail(ErrorCode::FormatError, "io", std::string("bad JSON: ") + e.what());
    }
}

ChainComplex read_complex(const std::string& path)
{
    std::string t = io::read_file(path);
    return looks_like_json(t) ? io::complex_from_json(parse_json(t)) : io::load_complex(t);
}

KoszulAlgebra read_koszul(const std::string& path)
{
    std::string t = io::read_file(path);
    return looks_like_json(t) ? io::koszul_from_json(parse_json(t)) : io::load_koszul(t);
}

DGModule read_dg(const std::string& path)
{
    std::string t = io::read_file(path);
    return looks_like_json(t) ? io::dg_module_from_json(parse_json(t)) : io::load_dg_module(t);
}

ModulePresentation read_module(const std::string& path)
{
    std::string t = io::read_file(path);
    return looks_like_json(t) ? io::module_from_json(parse_json(t)) : io::load_module(t);
}

PolynomialSystem read_system(const std::string& path)
{
    std::string t = io::read_file(path);
    return looks_like_json(t) ? io::system_from_json(parse_json(t)) : io::load_system(t);
}

Assignment read_assignment(const std::string& path)
{
    std::string t = io::read_file(path);
    return looks_like_json(t) ? io::assignment_from_json(parse_json(t)) : io::load_assignment(t);
}

void emit(const Options& o, const std::string& text)
{
    if (o.output.empty()) std::cout << text;
    else io::write_file(o.output, text);
}

template <class T>
void emit_object(const Options& o, const T& x, std::string (*save)(const T&))
{
    emit(o, o.json ? io::to_json(x).dump(2) + "\n" : save(x));
}

std::vector<Elem> parse_sequence(const Ring& r, const std::string& text)
{
    std::vector<Elem> out;
    if (io::trim(text).empty()) return out;
    for (const auto& cell : io::split(text, ',')) out.push_back(r->parse(cell));
    return out;
}

/// "n: a, b; c, d" -> (n, matrix with rows "a, b" and "c, d").
std::pair<int, std::vector<std::vector<std::string>>> parse_block(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos) fail(ErrorCode::FormatError, "cli", "differential must read 'n: row; row'");
    int n = std::stoi(text.substr(0, colon));
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : io::split(text.substr(colon + 1), ';')) rows.push_back(io::split(row, ','));
    return {n, rows};
}

std::string homology_line(const ChainComplex& c)
{
    if (c.is_zero()) return "0\n";
    std::string out;
    for (int n = c.lo; n <= c.hi(); ++n) out += (n == c.lo ? "" : ", ") + ("H" + std::to_string(n) + ": ") + homology(c, n).describe();
    return out + "\n";
}

RingHom quotient_hom(const Ring& source, const Ring& target, const std::string& images)
{
    std::vector<Elem> im;
    if (!images.empty()) {
        im = parse_sequence(target, images);
        if (im.size() != source->variables().size())
            fail(ErrorCode::InvalidArgument, "cli", "--images needs one element per variable of the source ring");
        return RingHom(source, target, im);
    }
    const auto& tv = target->variables();
    for (const auto& v : source->variables()) {
        auto it = std::find(tv.begin(), tv.end(), v);
        im.push_back(it == tv.end() ? target->zero() : target->variable(static_cast<std::size_t>(it - tv.begin())));
    }
    return RingHom(source, target, im);
}

int exit_code_for(ErrorCode c)
{
    switch (c) {
    case ErrorCode::NotAComplex:
    case ErrorCode::NotAHomomorphism:
    case ErrorCode::NotLocal:
    case ErrorCode::NotMinimal:
    case ErrorCode::RankMismatch:
    case ErrorCode::UnverifiedF:
    case ErrorCode::NonCanonicalF:
    case ErrorCode::VerificationFailed:
    case ErrorCode::WindowViolated:
    case ErrorCode::NotRegular:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::GroebnerBudgetExceeded:
    case ErrorCode::CapabilityMissing: return 1;
    default: return 2;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"kext: Koszul extension and descent toolkit"};
    app.require_subcommand(1);
    Options opt;
    int result = 0;

    auto add_out = [&](CLI::App* c) {
        c->add_option("-o,--output", opt.output, "output file (default: standard output)");
        c->add_flag("--json", opt.json, "write the JSON interchange form");
    };

    // ring
    auto* ring_cmd = app.add_subcommand("ring", "rings");
    ring_cmd->require_subcommand(1);
    std::string ring_spec;
    auto* ring_new = ring_cmd->add_subcommand("new", "normalize a ring description and show its capabilities");
    ring_new->add_option("spec", ring_spec, "ring description, e.g. Z/4 or F2[x,y]/(x^2,x*y,y^2)")->required();
    add_out(ring_new);
    ring_new->callback([&] {
        Ring r = make_ring(ring_spec);
        std::string out = io::ring_line(r);
        out += std::string("linear_solve ") + (r->caps().linear_solve ? "yes" : "no") + "\n";
        out += std::string("local ") + (r->caps().local ? "yes" : "no") + "\n";
        if (r->caps().nilpotency_bound) out += "nilpotency_bound " + std::to_string(*r->caps().nilpotency_bound) + "\n";
        emit(opt, out);
    });

    // complex
    auto* cx = app.add_subcommand("complex", "chain complexes of free modules");
    cx->require_subcommand(1);
    std::string cx_ring, cx_ranks, file_a, file_b;
    int cx_lo = 0, by = 0;
    std::vector<std::string> cx_diffs;
    auto* cx_new = cx->add_subcommand("new", "build a complex from ranks and differentials");
    cx_new->add_option("--ring", cx_ring, "ring description")->required();
    cx_new->add_option("--lo", cx_lo, "lowest degree");
    cx_new->add_option("--ranks", cx_ranks, "ranks from the lowest degree, space separated")->required();
    cx_new->add_option("--d", cx_diffs, "differential 'n: a, b; c, d' (rows separated by ';')");
    add_out(cx_new);
    cx_new->callback([&] {
        Ring r = make_ring(cx_ring);
        std::vector<std::size_t> ranks;
        for (const auto& w : io::words(cx_ranks)) ranks.push_back(std::stoul(w));
        std::vector<Matrix> diffs;
        for (std::size_t k = 0; k < ranks.size(); ++k) diffs.push_back(Matrix(r, k ? ranks[k - 1] : 0, ranks[k]));
        for (const auto& d : cx_diffs) {
            auto [n, rows] = parse_block(d);
            int idx = n - cx_lo;
            if (idx < 1 || idx >= static_cast<int>(ranks.size())) fail(ErrorCode::InvalidArgument, "cli", "differential degree out of range");
            auto k = static_cast<std::size_t>(idx);
            Matrix m(r, ranks[k - 1], ranks[k]);
            if (rows.size() != m.rows) fail(ErrorCode::ShapeMismatch, "cli", "wrong number of rows for d" + std::to_string(n));
            for (std::size_t i = 0; i < m.rows; ++i) {
                if (rows[i].size() != m.cols) fail(ErrorCode::ShapeMismatch, "cli", "wrong row length for d" + std::to_string(n));
                for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = r->parse(rows[i][j]);
            }
            diffs[k] = m;
        }
        emit_object(opt, make_complex(r, cx_lo, ranks, diffs), io::save_complex);
    });
    auto* cx_check = cx->add_subcommand("check", "validate a complex file (d^2 = 0)");
    cx_check->add_option("file", file_a)->required();
    cx_check->callback([&] {
        ChainComplex c = read_complex(file_a);
        std::cout << "ok " << (c.is_zero() ? std::string("zero complex") : "degrees " + std::to_string(c.lo) + ".." + std::to_string(c.hi())) << "\n";
    });
    auto* cx_hom = cx->add_subcommand("homology", "homology in every degree");
    cx_hom->add_option("file", file_a)->required();
    cx_hom->callback([&] { std::cout << homology_line(read_complex(file_a)); });
    auto* cx_tensor = cx->add_subcommand("tensor", "tensor product A (x) B");
    cx_tensor->add_option("a", file_a)->required();
    cx_tensor->add_option("b", file_b)->required();
    add_out(cx_tensor);
    cx_tensor->callback([&] { emit_object(opt, tensor(read_complex(file_a), read_complex(file_b)), io::save_complex); });
    auto* cx_shift = cx->add_subcommand("shift", "suspension by k");
    cx_shift->add_option("file", file_a)->required();
    cx_shift->add_option("--by", by, "shift amount")->required();
    add_out(cx_shift);
    cx_shift->callback([&] { emit_object(opt, shift(read_complex(file_a), by), io::save_complex); });
    auto* cx_trunc = cx->add_subcommand("trunc", "hard truncation");
    std::optional<int> above, below;
    cx_trunc->add_option("file", file_a)->required();
    auto* oa = cx_trunc->add_option("--above", above, "keep degrees >= m");
    auto* ob = cx_trunc->add_option("--below", below, "keep degrees <= m");
    oa->excludes(ob);
    add_out(cx_trunc);
    cx_trunc->callback([&] {
        if (!above && !below) fail(ErrorCode::InvalidArgument, "cli", "give --above or --below");
        ChainComplex c = read_complex(file_a);
        emit_object(opt, above ? truncate_above(c, *above) : truncate_below(c, *below), io::save_complex);
    });

    // koszul
    auto* kz = app.add_subcommand("koszul", "Koszul complexes as DG algebras");
    kz->require_subcommand(1);
    std::string kz_ring, kz_seq;
    auto* kz_build = kz->add_subcommand("build", "construct and verify K(a)");
    kz_build->add_option("--ring", kz_ring, "ring description")->required();
    kz_build->add_option("--seq", kz_seq, "comma-separated sequence a_1, ..., a_e")->required();
    add_out(kz_build);
    kz_build->callback([&] {
        Ring r = make_ring(kz_ring);
        emit_object(opt, koszul(r, parse_sequence(r, kz_seq)), io::save_koszul);
    });
    auto* kz_verify = kz->add_subcommand("verify", "check every DG algebra axiom");
    kz_verify->add_option("file", file_a)->required();
    kz_verify->callback([&] {
        AxiomReport rep = verify_dga(read_koszul(file_a));
        std::cout << rep.str();
        if (!rep.all_pass()) result = 1;
    });

    // dg
    auto* dg = app.add_subcommand("dg", "DG modules over Koszul complexes");
    dg->require_subcommand(1);
    std::string kfile, cfile, dfile;
    auto* dg_ext = dg->add_subcommand("extend", "K (x) P as a DG module");
    dg_ext->add_option("--koszul", kfile)->required();
    dg_ext->add_option("--complex", cfile)->required();
    add_out(dg_ext);
    dg_ext->callback([&] { emit_object(opt, extend(read_koszul(kfile), read_complex(cfile)), io::save_dg_module); });
    auto* dg_verify = dg->add_subcommand("verify", "check the DG module axioms");
    dg_verify->add_option("file", file_a)->required();
    dg_verify->callback([&] {
        AxiomReport rep;
        try {
            rep = verify_dg_module(read_dg(file_a));
        }
        catch (const Error& e) {
            if (e.code() != ErrorCode::VerificationFailed) throw;
            std::cout << e.what() << "\n";
            result = 1;
            return;
        }
        std::cout << rep.str();
    });
    std::string mapfile;
    auto* dg_kl = dg->add_subcommand("klinear", "is a chain map between DG modules K-linear");
    dg_kl->add_option("source", file_a)->required();
    dg_kl->add_option("target", file_b)->required();
    dg_kl->add_option("map", mapfile)->required();
    dg_kl->callback([&] {
        DGModule s = read_dg(file_a), t = read_dg(file_b);
        ChainMap f = io::load_chain_map(io::read_file(mapfile), s.underlying, t.underlying);
        bool chain = is_chain_map(f);
        bool lin = is_k_linear(f, s, t);
        std::cout << "chain_map " << (chain ? "ok" : "FAIL") << "\nk_linear " << (lin ? "ok" : "FAIL") << "\n";
        if (!chain || !lin) result = 1;
    });

    // system
    auto* sys = app.add_subcommand("system", "polynomial descent systems");
    sys->require_subcommand(1);
    auto dg_for = [&](const KoszulAlgebra& k, const ChainComplex& p) { return dfile.empty() ? extend(k, p) : read_dg(dfile); };
    auto* sys_gen = sys->add_subcommand("gen", "generate the system for (K, P, F)");
    sys_gen->add_option("--koszul", kfile)->required();
    sys_gen->add_option("--complex", cfile)->required();
    sys_gen->add_option("--dg", dfile, "F (default: K (x) P)");
    add_out(sys_gen);
    sys_gen->callback([&] {
        KoszulAlgebra k = read_koszul(kfile);
        ChainComplex p = read_complex(cfile);
        emit_object(opt, generate_system(k, p, dg_for(k, p)), io::save_system);
    });
    auto* sys_can = sys->add_subcommand("canonical", "the canonical solution for F = K (x) P");
    sys_can->add_option("--koszul", kfile)->required();
    sys_can->add_option("--complex", cfile)->required();
    sys_can->add_option("--dg", dfile, "F (must equal K (x) P)");
    add_out(sys_can);
    sys_can->callback([&] {
        KoszulAlgebra k = read_koszul(kfile);
        ChainComplex p = read_complex(cfile);
        emit_object(opt, dfile.empty() ? canonical_solution(k, p) : canonical_solution(k, p, read_dg(dfile)), io::save_assignment);
    });
    auto* sys_verify = sys->add_subcommand("verify", "evaluate every equation at an assignment");
    sys_verify->add_option("system", file_a)->required();
    sys_verify->add_option("assignment", file_b)->required();
    sys_verify->callback([&] {
        SystemReport rep = verify_assignment(read_system(file_a), read_assignment(file_b));
        std::cout << rep.str() << "\n";
        if (!rep.all_pass()) result = 1;
    });
    auto* sys_rec = sys->add_subcommand("reconstruct", "rebuild (A, phi, sigma) from a solution and certify it");
    sys_rec->add_option("--koszul", kfile)->required();
    sys_rec->add_option("--complex", cfile, "P (used for F = K (x) P when --dg is absent)");
    sys_rec->add_option("--dg", dfile, "F");
    sys_rec->add_option("system", file_a)->required();
    sys_rec->add_option("assignment", file_b)->required();
    add_out(sys_rec);
    sys_rec->callback([&] {
        KoszulAlgebra k = read_koszul(kfile);
        if (cfile.empty() && dfile.empty()) fail(ErrorCode::InvalidArgument, "cli", "give --complex or --dg");
        DGModule f = dfile.empty() ? extend(k, read_complex(cfile)) : read_dg(dfile);
        DescentCertificate cert = reconstruct(k, f, read_system(file_a), read_assignment(file_b));
        std::string out = std::string("# complex ") + (cert.complex_ok ? "ok" : "FAIL") + "\n# chain_map " +
                          (cert.chain_map_ok ? "ok" : "FAIL") + "\n# k_linear " + (cert.k_linear_ok ? "ok" : "FAIL") +
                          "\n# contraction " + (cert.contraction_ok ? "ok" : "FAIL") + "\n";
        emit(opt, opt.json ? io::to_json(cert.a).dump(2) + "\n" : out + io::save_complex(cert.a));
    });

    // extend-trunc
    int s_val = 0, m_val = 0, budget = 64;
    auto* et = app.add_subcommand("extend-trunc", "truncate and extend by a resolution, checking the vanishing window");
    et->add_option("--koszul", kfile)->required();
    et->add_option("--complex", cfile)->required();
    et->add_option("--s", s_val, "sup of the complex being approximated")->required();
    et->add_option("--m", m_val, "truncation degree (at least s + 2e + 1)")->required();
    et->add_option("--budget", budget, "resolution depth budget");
    add_out(et);
    et->callback([&] {
        KoszulAlgebra k = read_koszul(kfile);
        TruncateExtendResult r = truncate_extend(k, read_complex(cfile), s_val, m_val, budget);
        std::string out = "# H_i(M) = 0 for " + std::to_string(r.window_lo) + " <= i <= " + std::to_string(r.window_hi) + "\n";
        out += "# H_i(K (x) M) = 0 checked through " + std::to_string(r.tensor_checked_hi) + "\n";
        out += std::string("# resolution ") + (r.terminated ? "terminated" : "reached the budget") + "\n";
        emit(opt, opt.json ? io::to_json(r.m).dump(2) + "\n" : out + io::save_complex(r.m));
    });

    // sdc
    int window = kDefaultWindow;
    std::size_t rank_budget = 100000;
    auto* sdc = app.add_subcommand("sdc", "semidualizing checks");
    sdc->require_subcommand(1);
    auto* sdc_check = sdc->add_subcommand("check", "homothety check on a window");
    sdc_check->add_option("module", file_a)->required();
    sdc_check->add_option("--window", window, "window D");
    sdc_check->add_option("--koszul", kfile, "also run the DG-level check over this Koszul complex");
    sdc_check->add_option("--budget", rank_budget, "resolution rank budget");
    sdc_check->callback([&] {
        ModulePresentation c = read_module(file_a);
        SdcVerdict v = homothety_check(c, window, rank_budget);
        std::cout << v.str() << "\n";
        for (std::size_t i = 0; i < v.ext.size(); ++i) std::cout << "Ext^" << i << ": " << v.ext[i].describe() << "\n";
        if (!kfile.empty()) {
            SdcTransfer t = koszul_sdc_transfer(read_koszul(kfile), c, window);
            std::cout << "K: " << t.dg_level.str() << "\nagree: " << (t.verdicts_agree ? "yes" : "no") << "\n";
        }
        if (v.kind == SdcKind::NotSemidualizing) result = 1;
    });

    // ext
    auto* ext = app.add_subcommand("ext", "Ext modules");
    ext->require_subcommand(1);
    auto* ext_tab = ext->add_subcommand("table", "Ext^i(M, N) for 0 <= i <= D");
    ext_tab->add_option("m", file_a)->required();
    ext_tab->add_option("n", file_b)->required();
    ext_tab->add_option("--window", window, "window D");
    ext_tab->add_option("--budget", rank_budget, "resolution rank budget");
    ext_tab->callback([&] {
        ExtTable t = ext_table(read_module(file_a), read_module(file_b), window, rank_budget);
        for (std::size_t i = 0; i < t.ext.size(); ++i) std::cout << "Ext^" << i << ": " << t.ext[i].describe() << "\n";
    });

    // lift
    std::string seq, images;
    auto* lift = app.add_subcommand("lift", "liftings along a regular sequence");
    lift->require_subcommand(1);
    auto* lift_verify = lift->add_subcommand("verify", "does M over R lift N over S = R/(x)");
    lift_verify->add_option("m", file_a, "module over R")->required();
    lift_verify->add_option("n", file_b, "module over S")->required();
    lift_verify->add_option("--seq", seq, "regular sequence x in R")->required();
    lift_verify->add_option("--images", images, "images of the variables of R in S (default: same name or 0)");
    lift_verify->callback([&] {
        ModulePresentation m = read_module(file_a), n = read_module(file_b);
        RingHom h = quotient_hom(m.ring, n.ring, images);
        LiftingReport rep = lifting_verify(h, parse_sequence(m.ring, seq), m, n);
        std::cout << rep.str() << "\n";
        if (!rep.is_lifting) result = 1;
    });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    catch (const NotAComplexError& e) {
        std::cerr << e.subsystem() << ": NotAComplex: " << e.what() << "\n";
        return 1;
    }
    catch (const Error& e) {
        std::cerr << e.subsystem() << ": " << error_code_name(e.code()) << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return result;
}
