#include "oracles.hpp"

#include "kext/descent.hpp"
#include "kext/duality.hpp"
#include "kext/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace kext;
using namespace kext::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string samples_dir = KEXT_SAMPLES_DIR;

std::string sample_text(const std::string& name) { return io::read_file(samples_dir + "/" + name); }

struct Instance {
    KoszulAlgebra k;
    ChainComplex p;
    DGModule f;
    PolynomialSystem sys;
    Assignment canonical;
};

/// Random minimal P with m <= 3, ranks <= 2, e <= 2.
Instance random_instance(const Ring& r, Rng& g)
{
    int m = static_cast<int>(uniform(g, 0, 3));
    ChainComplex p = random_complex(r, g, 0, m + 1, static_cast<std::size_t>(uniform(g, 1, 2)), true);
    KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 0, 2)), g, true));
    DGModule f = extend(k, p);
    PolynomialSystem sys = generate_system(k, p, f);
    return Instance{k, p, f, sys, canonical_solution(k, p, f)};
}

std::vector<Instance> round_trip_instances()
{
    std::vector<Instance> out;
    Rng g(4004);
    for (const char* d : {"Z/4", "F2[x]/(x^2)"}) {
        Ring r = make_ring(d);
        for (int t = 0; t < 25; ++t) out.push_back(random_instance(r, g));
    }
    return out;
}

int top_degree(const ChainComplex& c) { return c.is_zero() ? 0 : c.hi(); }

/// d_{n+1} s_n + s_{n-1} d_n = 1 in every degree, evaluated directly on the matrices.
bool contracts(const ChainComplex& c, const Homotopy& s)
{
    if (c.is_zero()) return true;
    const Ring& r = c.ring;
    auto comp = [&](int n) {
        auto it = s.comps.find(n);
        return it != s.comps.end() ? it->second : Matrix(r, c.rank(n + 1), c.rank(n));
    };
    for (int n = c.lo; n <= c.hi(); ++n) {
        Matrix lhs = mat_add(mat_mul(c.diff(n + 1), comp(n)), mat_mul(comp(n - 1), c.diff(n)));
        if (!(lhs == mat_identity(r, c.rank(n)))) return false;
    }
    return true;
}

Outcome criterion_1()
{
    int failures = 0, total = 0;
    Rng g(1001);
    for (const char* d : {"Z/8", "F7", "F2[x,y]/(x^2,x*y,y^2)"}) {
        Ring r = make_ring(d);
        for (int t = 0; t < 100; ++t, ++total) {
            KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 0, 4)), g));
            if (!verify_dga(k).all_pass()) ++failures;
        }
    }
    return {failures == 0, std::to_string(total) + " algebras, " + std::to_string(failures) + " axiom failures"};
}

Outcome criterion_2()
{
    int violations = 0, total = 0, acyclic = 0;
    Rng g(1002);
    for (const char* d : {"F5", "Z/9"}) {
        Ring r = make_ring(d);
        for (int t = 0; t < 100; ++t, ++total) {
            ChainComplex m = random_complex(r, g, static_cast<int>(uniform(g, -2, 2)), 4, 3);
            int e = static_cast<int>(uniform(g, 0, 3));
            ChainComplex kc = koszul(r, random_sequence(r, e, g, true)).complex();
            HomologyBounds hm = sup_inf(m), hk = sup_inf(tensor(kc, m));
            if (hm.acyclic || hk.acyclic) {
                ++acyclic;
                if (hm.acyclic != hk.acyclic) ++violations;
                continue;
            }
            if (hk.inf != hm.inf || hk.sup < hm.sup || hk.sup > hm.sup + e) ++violations;
        }
    }
    return {violations == 0, std::to_string(total) + " complexes (" + std::to_string(acyclic) + " acyclic), " +
                                 std::to_string(violations) + " violations"};
}

Outcome criterion_3()
{
    int mismatches = 0, total = 0;
    Rng g(1003);
    for (const char* d : {"Z/4", "F3", "F2[x]/(x^2)", "Z/9", "F3[x]/(x^3)"}) {
        Ring r = make_ring(d);
        for (int t = 0; t < 10; ++t, ++total) {
            ChainComplex m = random_complex(r, g, 0, 2, 2), n = random_complex(r, g, 0, 2, 2);
            ChainComplex kc = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 1, 2)), g, true)).complex();
            if (homology_sizes(tensor(kc, hom_complex(m, n)), -4, 6) != homology_sizes(hom_complex(m, tensor(kc, n)), -4, 6))
                ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(total) + " pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome criterion_4(const std::vector<Instance>& instances)
{
    int count_errors = 0, verify_errors = 0, cert_errors = 0, homology_errors = 0;
    for (const auto& in : instances) {
        Counts c = closed_form(in.k.e(), support_ranks(in.p));
        bool counts = in.sys.count('X') == c.x && in.sys.count('Y') == c.y && in.sys.count('Z') == c.z;
        for (int s = 1; s <= 4; ++s) counts = counts && in.sys.count_equations(s) == c.eq[s];
        if (!counts) ++count_errors;
        if (!verify_assignment(in.sys, in.canonical).all_pass()) {
            ++verify_errors;
            continue;
        }
        DescentCertificate cert = reconstruct(in.k, in.f, in.sys, in.canonical);
        bool ok = !first_d2_violation(cert.a).has_value() && is_chain_map(cert.phi) &&
                  is_k_linear(cert.phi, cert.f, cert.extended) && contracts(cone(cert.phi), cert.sigma);
        if (!ok) ++cert_errors;
        int hi = top_degree(in.p) + in.k.e() + 1;
        if (homology_sizes(tensor(in.k.complex(), cert.a), -1, hi) != homology_sizes(tensor(in.k.complex(), in.p), -1, hi))
            ++homology_errors;
    }
    bool pass = count_errors + verify_errors + cert_errors + homology_errors == 0;
    return {pass, std::to_string(instances.size()) + " instances; count errors " + std::to_string(count_errors) +
                      ", verification errors " + std::to_string(verify_errors) + ", certificate errors " +
                      std::to_string(cert_errors) + ", homology errors " + std::to_string(homology_errors)};
}

Outcome criterion_5(const std::vector<Instance>& instances)
{
    Rng g(1005);
    int total = 0, undetected = 0, genuine = 0;
    for (const auto& in : instances) {
        if (in.canonical.values.empty()) continue;
        std::vector<std::string> names;
        for (const auto& [name, v] : in.canonical.values) names.push_back(name);
        const Ring& r = in.canonical.ring;
        for (int t = 0; t < 5; ++t, ++total) {
            Assignment a = in.canonical;
            const std::string& name = names[static_cast<std::size_t>(uniform(g, 0, static_cast<long long>(names.size()) - 1))];
            a.values[name] = r->add(a.values[name], random_unit(r, g));
            if (verify_assignment(in.sys, a).all_pass()) {
                ++undetected;
                DescentCertificate cert = reconstruct(in.k, in.f, in.sys, a);
                if (cert.contraction_ok && contracts(cone(cert.phi), cert.sigma)) ++genuine;
            }
        }
    }
    std::string detail = std::to_string(total - undetected) + "/" + std::to_string(total) + " perturbations detected";
    if (undetected)
        detail += "; " + std::to_string(genuine) + " of the " + std::to_string(undetected) +
                  " undetected ones are genuine solutions (a different contraction)";
    return {undetected == 0, detail};
}

Outcome criterion_6(const std::vector<Instance>& instances)
{
    Rng g(1006);
    int failures = 0;
    for (const auto& in : instances) {
        const Ring& r = in.p.ring;
        std::vector<Matrix> gs, gi;
        for (std::size_t s : in.sys.shape.s) {
            auto [a, b] = random_invertible(r, s, g);
            gs.push_back(a);
            gi.push_back(b);
        }
        Assignment c = conjugate_solution(in.k, in.sys, in.canonical, gs, gi);
        if (!verify_assignment(in.sys, c).all_pass()) {
            ++failures;
            continue;
        }
        DescentCertificate cert = reconstruct(in.k, in.f, in.sys, c);
        int hi = top_degree(in.p) + 1;
        if (homology_sizes(cert.a, -1, hi) != homology_sizes(in.p, -1, hi)) ++failures;
    }
    return {failures == 0, std::to_string(instances.size()) + " conjugated solutions, " + std::to_string(failures) + " failures"};
}

Outcome criterion_7()
{
    Rng g(1007);
    int failures = 0, total = 0;
    for (const char* d : {"Z/4", "F2[x]/(x^2)", "F3[x]/(x^3)", "Z/9"}) {
        Ring r = make_ring(d);
        for (int t = 0; t < 5; ++t, ++total) {
            int e = static_cast<int>(uniform(g, 1, 2)), s = 0, m = s + 2 * e + 1;
            KoszulAlgebra k = koszul(r, random_sequence(r, e, g, true));
            Resolution res = free_resolution(random_module(r, g, 2, 2), m + 2);
            TruncateExtendResult out = truncate_extend(k, truncate_below(res.complex, m), s, m, 8);
            bool ok = true;
            for (int i = s + e + 1; i < m; ++i) ok = ok && homology(out.m, i).is_zero();
            if (!ok) ++failures;
        }
    }
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    bool rejected = error_code_of([&] { truncate_extend(k, module_complex(z4, 1, 2), 0, 3, 8); }) == ErrorCode::WindowViolated;
    return {failures == 0 && rejected, std::to_string(total) + " instances, " + std::to_string(failures) +
                                           " window failures; planted cycle " + (rejected ? "rejected" : "ACCEPTED")};
}

Outcome criterion_8()
{
    Ring z12 = make_ring("Z/12");
    Rng g(1008);
    int kernel_errors = 0, smith_errors = 0;
    for (int t = 0; t < 500; ++t) {
        Matrix a = random_matrix(z12, static_cast<std::size_t>(uniform(g, 1, 3)), static_cast<std::size_t>(uniform(g, 1, 3)), g);
        Matrix k = kernel_basis(a);
        if (!mat_is_zero(mat_mul(a, k)) || column_span(k, 12) != brute_kernel(a, 12)) ++kernel_errors;
    }
    Ring z = integers();
    for (int t = 0; t < 200; ++t) {
        std::size_t m = static_cast<std::size_t>(uniform(g, 1, 3)), n = static_cast<std::size_t>(uniform(g, 1, 3));
        Matrix a = random_matrix(z, m, n, g);
        NormalFormResult nf = matrix_normal_form(a);
        bool ok = nf.form == FormTag::Smith && verify_normal_form(a, nf);
        std::vector<std::vector<BigInt>> ai(m, std::vector<BigInt>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) ai[i][j] = std::get<BigInt>(a.at(i, j));
        BigInt prod = 1;
        for (std::size_t i = 0; i < std::min(m, n) && ok; ++i) {
            BigInt di = std::get<BigInt>(nf.transformed.at(i, i));
            if (i + 1 < std::min(m, n)) {
                BigInt next = std::get<BigInt>(nf.transformed.at(i + 1, i + 1));
                ok = di == 0 ? next == 0 : next % di == 0;
            }
            prod *= di;
            ok = ok && prod == determinantal_divisor(ai, i + 1);
        }
        if (!ok) ++smith_errors;
    }
    return {kernel_errors + smith_errors == 0, "500 Z/12 kernels (" + std::to_string(kernel_errors) + " errors), 200 Smith forms (" +
                                                   std::to_string(smith_errors) + " errors)"};
}

Outcome criterion_9()
{
    std::vector<std::string> failed;
    for (const char* d : {"Z", "Q", "F5", "Z/4", "Z/9", "F2[t]", "F2[x]/(x^2)", "F3[x]/(x^3)", "F2[x,y]/(x^2,x*y,y^2)"})
        if (homothety_check(free_module(make_ring(d), 1)).kind != SdcKind::Semidualizing) failed.push_back(d);
    SdcVerdict omega = homothety_check(io::load_module(sample_text("omega.mod")), 6);
    Ring r = make_ring("F2[x,y]/(x^2,x*y,y^2)");
    SdcVerdict k = homothety_check(residue_module(r), 6);
    ExtTable ext = ext_table(residue_module(r), residue_module(r), 1);
    bool k_ok = k.kind == SdcKind::NotSemidualizing && k.ext_witness == 1 && !ext.ext[1].is_zero() && ext.ext[1].rank == 2;
    bool pass = failed.empty() && omega.kind == SdcKind::Semidualizing && omega.window == 6 && k_ok;
    std::string detail = "R fails on " + std::to_string(failed.size()) + " rings; omega " + omega.str() + "; k " + k.str();
    return {pass, detail};
}

Outcome criterion_10()
{
    Ring r = make_ring("F3[x]/(x^3)");
    KoszulAlgebra k = koszul(r, std::vector<std::string>{"x"});
    Rng g(1010);
    int disagreements = 0, semidualizing = 0;
    for (int t = 0; t < 50; ++t) {
        SdcTransfer s = koszul_sdc_transfer(k, random_module(r, g, 2, 2), 4);
        if (!s.verdicts_agree || !s.witness_sandwich) ++disagreements;
        if (s.r_level.kind == SdcKind::Semidualizing) ++semidualizing;
    }
    return {disagreements == 0, "50 candidates (" + std::to_string(semidualizing) + " semidualizing), " +
                                    std::to_string(disagreements) + " disagreements"};
}

Outcome criterion_11()
{
    Rng g(1011);
    int disagreements = 0, total = 0;
    for (const char* d : {"Z/4", "F2[x]/(x^2)"}) {
        Ring r = make_ring(d);
        for (int t = 0; t < 15; ++t, ++total) {
            KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 1, 2)), g, true));
            ExtSupComparison c = ext_sup_via_koszul(random_module(r, g, 2, 2), random_module(r, g, 2, 2), k, 6);
            if (!c.agree()) ++disagreements;
        }
    }
    return {disagreements == 0, std::to_string(total) + " instances at window 6, " + std::to_string(disagreements) + " disagreements"};
}

Outcome criterion_12()
{
    Ring r = make_ring("F2[x]/(x^2)");
    ExtTable t = ext_table(residue_module(r), residue_module(r), 10);
    // the periodic resolution ... -x-> R -x-> R -> k, checked exact, then Hom(-, k) over F2
    std::vector<std::size_t> ranks(11, 1);
    std::vector<Matrix> diffs;
    Matrix x(r, 1, 1);
    x.at(0, 0) = r->variable(0);
    for (int i = 1; i <= 10; ++i) diffs.push_back(x);
    ChainComplex periodic = make_complex(r, 0, ranks, diffs);
    bool resolution = homology(periodic, 0).cardinality == BigInt(2);
    for (int i = 1; i < 10; ++i) resolution = resolution && homology(periodic, i).is_zero();
    Ring f2 = make_ring("F2");
    RingHom to_k(r, f2, {f2->zero()});
    int mismatches = 0;
    for (int i = 0; i <= 10; ++i) {
        // Hom(F_i, k) = k and the coboundaries are the reductions of x
        bool in = i > 0 && !f2->is_zero(to_k(x.at(0, 0))), out = i < 10 && !f2->is_zero(to_k(x.at(0, 0)));
        int dim = 1 - (in ? 1 : 0) - (out ? 1 : 0);
        const ModuleSummary& e = t.ext[static_cast<std::size_t>(i)];
        if (static_cast<int>(e.rank) != dim || e.cardinality != BigInt(2)) ++mismatches;
    }
    return {resolution && mismatches == 0, "Ext^0..10 cardinality 2: " + std::to_string(11 - mismatches) + "/11 agree with the periodic oracle"};
}

Outcome criterion_13()
{
    Ring z = integers(), f5 = make_ring("F5");
    RingHom h(z, f5, {});
    std::vector<Elem> x{z->from_int(5)};
    LiftingReport free = lifting_verify(h, x, io::load_module(sample_text("z3.mod")), io::load_module(sample_text("f5_3.mod")));
    LiftingReport tor = lifting_verify(h, x, io::load_module(sample_text("z_tor.mod")), free_module(f5, 2));
    bool pass = free.is_lifting && !tor.is_lifting && !tor.tor.empty() && tor.tor[0].describe() == "Z/5";
    return {pass, std::string("free module ") + (free.is_lifting ? "lifts" : "REJECTED") + "; Z+Z/5 " +
                      (tor.is_lifting ? "ACCEPTED" : "rejected with Tor_1 = " + tor.tor[0].describe())};
}

Outcome criterion_14()
{
    namespace fs = std::filesystem;
    int reloaded = 0, unstable = 0;
    for (const auto& entry : fs::directory_iterator(samples_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string(), text = io::read_file(entry.path().string()), once, twice;
        if (ext == ".cx") once = io::save_complex(io::load_complex(text)), twice = io::save_complex(io::load_complex(once));
        else if (ext == ".kz") once = io::save_koszul(io::load_koszul(text)), twice = io::save_koszul(io::load_koszul(once));
        else if (ext == ".dgm") once = io::save_dg_module(io::load_dg_module(text)), twice = io::save_dg_module(io::load_dg_module(once));
        else if (ext == ".mod") once = io::save_module(io::load_module(text)), twice = io::save_module(io::load_module(once));
        else if (ext == ".sys") once = io::save_system(io::load_system(text)), twice = io::save_system(io::load_system(once));
        else if (ext == ".asg") once = io::save_assignment(io::load_assignment(text)), twice = io::save_assignment(io::load_assignment(once));
        else continue;
        ++reloaded;
        if (once != twice) ++unstable;
    }
    KoszulAlgebra k = io::load_koszul(sample_text("K.kz"));
    ChainComplex p = io::load_complex(sample_text("P.cx")), k4 = io::load_complex(sample_text("K4_on_2.cx"));
    DGModule f = io::load_dg_module(sample_text("F.dgm"));
    PolynomialSystem sys = generate_system(k, p, f);
    Assignment can = canonical_solution(k, p);
    std::string ext_lines;
    ExtTable et = ext_table(io::load_module(sample_text("z_mod_2.mod")), io::load_module(sample_text("z.mod")), 3);
    for (std::size_t i = 0; i < et.ext.size(); ++i) ext_lines += "Ext^" + std::to_string(i) + ": " + et.ext[i].describe() + "\n";
    std::vector<std::pair<std::string, std::string>> reports = {
        {"system_gen.txt", io::save_system(sys)},
        {"system_canonical.txt", io::save_assignment(can)},
        {"system_verify.txt", verify_assignment(sys, can).str() + "\n"},
        {"dg_extend.txt", io::save_dg_module(extend(k, p))},
        {"complex_tensor.txt", io::save_complex(tensor(k4, p))},
        {"complex_tensor_json.txt", io::to_json(tensor(k4, p)).dump(2) + "\n"},
        {"koszul_verify.txt", verify_dga(io::load_koszul(sample_text("K_xy.kz"))).str()},
        {"ext_table_z.txt", ext_lines},
    };
    int golden_diffs = 0;
    for (const auto& [name, text] : reports)
        if (sample_text("golden/" + name) != text) ++golden_diffs;
    bool sys_matches = sample_text("S.sys") == io::save_system(sys) && sample_text("canonical.asg") == io::save_assignment(can);
    bool pass = reloaded > 0 && unstable == 0 && golden_diffs == 0 && sys_matches;
    return {pass, std::to_string(reloaded) + " samples reloaded (" + std::to_string(unstable) + " unstable), " +
                      std::to_string(reports.size()) + " reports regenerated (" + std::to_string(golden_diffs) + " differ)"};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::vector<int> expected;
    app.add_option("--expected-failures", expected, "criteria documented as failing; the exit code is 0 when exactly these fail");
    app.add_option("--samples", samples_dir, "samples directory");
    CLI11_PARSE(app, argc, argv);

    std::vector<Instance> instances;
    double instance_seconds = 0;
    {
        auto t0 = std::chrono::steady_clock::now();
        instances = round_trip_instances();
        instance_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> run;
        double time_limit;  // seconds, 0 for none
    };
    std::vector<Criterion> criteria = {
        {1, "Koszul DG axioms", criterion_1, 5.0},
        {2, "inf equality and sup sandwich", criterion_2, 0},
        {3, "tensor evaluation", criterion_3, 0},
        {4, "system round trip", [&] { return criterion_4(instances); }, 30.0},
        {5, "single-entry sensitivity", [&] { return criterion_5(instances); }, 0},
        {6, "conjugation robustness", [&] { return criterion_6(instances); }, 0},
        {7, "truncate-extend window", criterion_7, 0},
        {8, "linear engine oracle", criterion_8, 0},
        {9, "semidualizing examples", criterion_9, 0},
        {10, "R-level and DG-level transfer", criterion_10, 0},
        {11, "Ext sup window invariance", criterion_11, 0},
        {12, "Ext periodicity", criterion_12, 0},
        {13, "lifting checker", criterion_13, 0},
        {14, "format round trips and golden reports", criterion_14, 0},
    };
    std::set<int> failed;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        }
        catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.id == 4) secs += instance_seconds;
        if (c.time_limit > 0 && secs >= c.time_limit) {
            o.pass = false;
            o.detail += "; over the " + std::to_string(static_cast<int>(c.time_limit)) + " s limit";
        }
        if (!o.pass) failed.insert(c.id);
        std::ostringstream line;
        line.precision(2);
        line << std::fixed << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << secs << " s): " << o.detail;
        std::cout << line.str() << std::endl;
    }
    std::set<int> want(expected.begin(), expected.end());
    std::cout << failed.size() << " of " << criteria.size() << " criteria failed";
    if (!want.empty()) std::cout << (failed == want ? " (as documented)" : " (differs from the documented set)");
    std::cout << "\n";
    return failed == want ? 0 : 1;
}
