#include <CLI11.hpp>
#include <json.hpp>

#include "ncdr/deform.hpp"
#include "ncdr/gm.hpp"
#include "ncdr/homology.hpp"
#include "ncdr/identity_suite.hpp"
#include "ncdr/parse.hpp"
#include "ncdr/rep.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace ncdr;

namespace {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& ex) {
        throw SpecError(path + ": " + ex.what());
    }
}

Rat parse_rat(const std::string& s) {
    try {
        Rat q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw SpecError("bad rational literal: " + s);
    }
}

GeneratorSet gens_from_json(const json& j) {
    GeneratorSet g;
    for (const auto& e : j.at("generators")) {
        g.names.push_back(e.at("name").get<std::string>());
        g.weights.push_back(e.value("weight", 1));
        if (g.weights.back() <= 0) throw SpecError("generator weights must be positive");
    }
    return g;
}

AlgebraPresentation pres_from_json(const json& j) {
    AlgebraPresentation p;
    p.gens = gens_from_json(j);
    for (const auto& r : j.value("relations", json::array()))
        p.relations.push_back(parse_poly(r.get<std::string>(), p.gens));
    p.degree_cap = j.value("degree_cap", 4);
    if (p.degree_cap <= 0) throw SpecError("degree_cap must be positive");
    return p;
}

FinDimAlgebra algebra_from_spec(const json& j) {
    if (j.contains("basis")) {
        std::vector<std::string> names;
        for (const auto& n : j.at("basis")) names.push_back(n.get<std::string>());
        std::vector<std::tuple<int, int, int, Rat>> entries;
        for (const auto& e : j.at("structure_constants"))
            entries.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                                 parse_rat(e.at(3).get<std::string>()));
        return algebra_from_structure_constants(names, entries);
    }
    AlgebraPresentation p = pres_from_json(j);
    return build_findim(p, p.degree_cap);
}

std::pair<int, int> parse_window(const std::string& s) {
    auto sep = s.find("..");
    if (sep == std::string::npos) throw SpecError("window must look like a..b");
    try {
        int lo = std::stoi(s.substr(0, sep));
        int hi = std::stoi(s.substr(sep + 2));
        if (lo >= hi) throw SpecError("window must be increasing");
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw SpecError("window must look like a..b");
    }
}

json rats_to_json(const RatVec& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back(rat_str(c));
    return out;
}

int emit(const json& rep, const std::string& out_path, bool pass) {
    std::string text = rep.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw SpecError("cannot write report to " + out_path);
        out << text;
    }
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------- commands

int cmd_hh(const std::string& spec_path, int n_max, int weight, const std::string& out) {
    json spec = load_json(spec_path);
    FinDimAlgebra A = algebra_from_spec(spec);
    FormOps ops(A);
    HochschildReport r = hochschild(A, n_max, weight);
    json degrees = json::array();
    bool kernel_agrees = true;
    std::vector<int> kernel_dims;
    for (int n = 0; n <= n_max; ++n) {
        const DegreeHomology& h = r.degrees[static_cast<std::size_t>(n)];
        FormSpace sp = form_space(A, n, weight);
        json reps = json::array();
        for (const auto& v : h.reps) reps.push_back(ops.form_str(sp.form(v)));
        degrees.push_back({{"degree", h.degree},
                           {"dim", h.dim},
                           {"stable", !r.truncation_risk},
                           {"representatives", reps}});
        KernelIotaReport k = hh_kernel_iota(A, n, weight);
        kernel_dims.push_back(k.dim);
        if (!k.ok()) kernel_agrees = false;
    }
    bool pass = r.oracle_agrees && kernel_agrees;
    json rep = {{"command", "hh"},
                {"config", {{"spec", spec_path}, {"n_max", n_max}, {"weight", weight}}},
                {"degrees", degrees},
                {"kernel_dims", kernel_dims},
                {"oracle_agrees", r.oracle_agrees},
                {"kernel_agrees", kernel_agrees},
                {"truncation_risk", r.truncation_risk},
                {"agree", pass}};
    return emit(rep, out, pass);
}

int cmd_hp(const std::string& spec_path, const std::string& window, int cap, int weight,
           const std::string& out) {
    json spec = load_json(spec_path);
    FinDimAlgebra A = algebra_from_spec(spec);
    auto [lo, hi] = parse_window(window);
    PeriodicReport r = periodic_homology(A, lo, hi, cap, weight);
    json rep = {{"command", "hp"},
                {"config",
                 {{"spec", spec_path}, {"window", window}, {"cap", cap}, {"weight", weight}}},
                {"degrees", r.degrees},
                {"dims", r.dims_contraction},
                {"dims_b_variant", r.dims_b_conn},
                {"variants_agree", r.variants_agree},
                {"stable", r.stable},
                {"intertwiner_ok", r.intertwiner_ok}};
    // instability is data, not an error
    return emit(rep, out, r.variants_agree && r.intertwiner_ok);
}

int cmd_hc(const std::string& spec_path, const std::string& window, int cap, int weight,
           const std::string& out) {
    json spec = load_json(spec_path);
    FinDimAlgebra A = algebra_from_spec(spec);
    auto [lo, hi] = parse_window(window);
    CyclicReport r = cyclic_and_negative(A, lo, hi, cap, weight);
    json rep = {{"command", "hc"},
                {"config",
                 {{"spec", spec_path}, {"window", window}, {"cap", cap}, {"weight", weight}}},
                {"degrees", r.degrees},
                {"hc", r.hc},
                {"hc_minus", r.hc_minus},
                {"heart_hc", r.heart_hc},
                {"heart_hc_minus", r.heart_hc_minus},
                {"p_comparison", r.p_comparison},
                {"p_perp_hc_vanishes", r.p_perp_hc_vanishes},
                {"hc_minus_stable", r.hc_minus_stable}};
    return emit(rep, out, r.p_comparison && r.p_perp_hc_vanishes);
}

int cmd_verify_identities(const std::string& spec_path, int n_max, const std::string& out) {
    json spec = load_json(spec_path);
    FinDimAlgebra A = algebra_from_spec(spec);
    IdentitySweepResult r = sweep_form_identities(A, n_max);
    json rep = {{"command", "verify identities"},
                {"config", {{"spec", spec_path}, {"n_max", n_max}}},
                {"checked", r.per_identity},
                {"elements", r.checked},
                {"witness", r.witness},
                {"pass", r.ok}};
    return emit(rep, out, r.ok);
}

int cmd_verify_harmonic(const std::string& spec_path, int n_max, const std::string& out) {
    json spec = load_json(spec_path);
    FinDimAlgebra A = algebra_from_spec(spec);
    json slices = json::array();
    bool pass = true;
    std::map<std::string, int> totals;
    auto run = [&](int w) {
        HarmonicSuiteReport r = verify_harmonic_suite(A, n_max, w);
        for (const auto& [k, v] : r.checked) totals[k] += v;
        slices.push_back({{"weight", w}, {"witness", r.witness}, {"pass", r.ok()}});
        if (!r.ok()) pass = false;
    };
    if (A.graded)
        for (int w = 1; w <= A.max_weight(); ++w) run(w);
    else
        run(-1);
    json rep = {{"command", "verify harmonic"},
                {"config", {{"spec", spec_path}, {"n_max", n_max}}},
                {"checked", totals},
                {"slices", slices},
                {"pass", pass}};
    return emit(rep, out, pass);
}

int cmd_verify_deform_dg(const std::string& spec_path, unsigned seed, int tuples,
                         const std::string& out) {
    json spec = load_json(spec_path);
    FinDimAlgebra A = algebra_from_spec(spec);
    DgReport r = verify_dg_suite(A, seed, tuples);
    json rep = {{"command", "verify deform-dg"},
                {"config", {{"spec", spec_path}, {"seed", seed}, {"tuples", tuples}}},
                {"checked", r.checked},
                {"witness", r.witness},
                {"pass", r.ok()}};
    return emit(rep, out, r.ok());
}

int cmd_verify_rep(const std::string& spec_path, int dim_v, const std::string& out) {
    json spec = load_json(spec_path);
    int cap = spec.value("degree_cap", 3);
    RepThmReport r = verify_rep_thm(dim_v, cap);
    json rep = {{"command", "verify rep"},
                {"config", {{"spec", spec_path}, {"dim", dim_v}, {"cap", cap}}},
                {"morphism_pairs", r.morphism_pairs},
                {"commutator_samples", r.commutator_samples},
                {"equivariant_samples", r.equivariant_samples},
                {"homology_samples", r.homology_samples},
                {"witness", r.witness},
                {"pass", r.ok()}};
    return emit(rep, out, r.ok());
}

RelativeFamily family_from_spec(const json& spec) {
    AlgebraPresentation p;
    p.gens = gens_from_json(spec);
    for (const auto& r : spec.at("relations")) p.relations.push_back(parse_poly(r.get<std::string>(), p.gens));
    int cap = spec.contains("caps") ? spec.at("caps").value("degree_cap", 6)
                                    : spec.value("degree_cap", 6);
    p.degree_cap = cap;
    int c = p.gens.index_of(spec.at("base").get<std::string>());
    if (c < 0) throw SpecError("base variable is not a generator");
    return RelativeFamily(p, c, cap);
}

std::vector<std::pair<int, int>> default_slices(const RelativeFamily& fam) {
    std::vector<std::pair<int, int>> slices;
    for (int w = 1; w <= fam.cap() - fam.c_weight(); ++w)
        for (int n = 0; n <= 2; ++n) slices.emplace_back(w, n);
    return slices;
}

int cmd_gm(const std::string& spec_path, unsigned seed, bool values, const std::string& out) {
    json spec = load_json(spec_path);
    RelativeFamily fam = family_from_spec(spec);
    json certs = json::array();
    bool cert_ok = true;
    for (int w = 1; w <= fam.cap() - fam.c_weight(); ++w) {
        RelCertificate c = certify_relative(fam, 2, w);
        certs.push_back({{"weight", w},
                         {"free", c.free_ok},
                         {"section", c.section_ok},
                         {"ideal_killed", c.ideal_killed},
                         {"kernel_stable", c.kernel_stable},
                         {"square_zero", c.square_zero},
                         {"witness", c.witness}});
        if (!c.ok()) cert_ok = false;
    }
    GmReport r = gm_flatness(fam, default_slices(fam), seed);
    json rep = {{"command", "gm"},
                {"config", {{"spec", spec_path}, {"seed", seed}}},
                {"certificates", certs},
                {"classes", r.classes},
                {"lift_independent", r.lift_independent},
                {"leibniz_ok", r.leibniz_ok},
                {"witness", r.witness},
                {"pass", cert_ok && r.ok()}};
    if (values) {
        json vals = json::array();
        for (const auto& [w, n] : default_slices(fam))
            for (const auto& x : per_homology_reps(fam, w, n)) {
                ConnectionValue v = gm_connect(fam, x);
                json comps = json::array(), klass = json::array();
                for (const auto& [i, f] : x.comp)
                    klass.push_back({{"t_power", i}, {"form", fam.str(f)}});
                for (const auto& [i, f] : v.value.comp)
                    comps.push_back({{"t_power", i}, {"form", fam.str(f)}});
                vals.push_back({{"weight", w},
                                {"degree", n},
                                {"class", klass},
                                {"residue_ok", v.residue_ok},
                                {"connection", comps}});
            }
        rep["connection_values"] = vals;
    }
    return emit(rep, out, cert_ok && r.ok());
}

// Extract the order-m structure maps of a presentation-level deformation by
// splitting products of base normal words at the parameter letter. Exact
// when the datum is homogeneous for the parameter weight, since then both
// truncations agree weight by weight.
std::vector<Cochain> extract_betas(const FinDimAlgebra& A, const FinDimAlgebra& E, int t_letter,
                                   int order, bool* product_consistent) {
    const int d = A.dim();
    std::vector<Cochain> betas;
    for (int m = 1; m <= order; ++m) betas.emplace_back(A, 2, m + 1);
    *product_consistent = true;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Word w = A.basis_words[static_cast<std::size_t>(i)] +
                     A.basis_words[static_cast<std::size_t>(j)];
            SparseVec prod = E.coords(NCPoly::word(w));
            SparseVec order0;
            for (const auto& [idx, c] : prod) {
                const Word& ew = E.basis_words[static_cast<std::size_t>(idx)];
                std::vector<int> segs;
                Word cur;
                int m = 0;
                bool drop = false;
                auto flush = [&]() {
                    int a = A.index_of_word(cur);
                    if (a < 0) drop = true; // segment beyond the base cap
                    segs.push_back(a);
                    cur.clear();
                };
                for (char ch : ew) {
                    if (static_cast<unsigned char>(ch) == static_cast<unsigned>(t_letter)) {
                        flush();
                        ++m;
                    } else {
                        cur += ch;
                    }
                }
                flush();
                if (drop || m > order) continue;
                if (m == 0) {
                    sv_add(order0, sv_unit(segs[0], c));
                    continue;
                }
                int row = 0;
                for (int s : segs) row = row * d + s;
                betas[static_cast<std::size_t>(m) - 1].m.at(row, i * d + j) += c;
            }
            SparseVec base = A.mul(i, j);
            if (!(order0 == base)) *product_consistent = false;
        }
    return betas;
}

int cmd_deform_mc(const std::string& spec_path, int order, const std::string& out) {
    json spec = load_json(spec_path);
    DeformationDatum datum;
    datum.base = pres_from_json(spec);
    datum.t_order = order > 0 ? order : spec.value("t_order", 3);
    GeneratorSet ext = extended_gens(datum);
    datum.phi.assign(datum.base.relations.size(), NCPoly());
    std::vector<bool> seen(datum.base.relations.size(), false);
    for (const auto& pair : spec.value("phi", json::array())) {
        NCPoly rel = parse_poly(pair.at(0).get<std::string>(), datum.base.gens);
        bool found = false;
        for (std::size_t i = 0; i < datum.base.relations.size(); ++i)
            if (datum.base.relations[i] == rel) {
                if (seen[i]) throw SpecError("phi lists a relation twice");
                seen[i] = true;
                datum.phi[i] = parse_poly(pair.at(1).get<std::string>(), ext);
                found = true;
            }
        if (!found) throw SpecError("phi entry does not match a relation: " +
                                    pair.at(0).get<std::string>());
    }

    const int cap = datum.base.degree_cap;
    FinDimAlgebra A = build_findim(datum.base, cap);
    FinDimAlgebra E = build_A_phi(datum, cap);
    FlatnessReport fr = flatness_check(datum, cap);
    bool product_consistent = true;
    std::vector<Cochain> betas =
        extract_betas(A, E, static_cast<int>(ext.names.size()) - 1, datum.t_order,
                      &product_consistent);
    McReport mc = mc_check(A, betas);
    json mismatches = json::array();
    for (const auto& [m, w] : fr.mismatches) mismatches.push_back({m, w});
    bool pass = mc.pass() && product_consistent;
    json rep = {{"command", "deform mc"},
                {"config", {{"spec", spec_path}, {"order", datum.t_order}, {"cap", cap}}},
                {"order_exact", E.graded},
                {"product_consistent", product_consistent},
                {"mc_pass", mc.pass()},
                {"mc_first_fail", mc.first_fail},
                {"obstructions_are_cocycles", mc.obstructions_are_cocycles},
                {"flat", fr.flat()},
                {"flatness_mismatches", mismatches},
                {"pass", pass}};
    return emit(rep, out, pass);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact noncommutative-forms homology and deformation toolkit"};
    app.require_subcommand(1);

    std::string spec, out, window = "-2..4", format = "json";
    int n_max = 3, cap = 4, weight = -1, dim_v = 1, order = 0, tuples = 50;
    unsigned seed = 1;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", out, "report path (default: stdout)");
        c->add_option("--format", format, "report format (json)");
    };

    auto* hh = app.add_subcommand("hh", "Hochschild homology with the bar oracle");
    hh->add_option("spec", spec, "algebra spec file")->required();
    hh->add_option("--n-max", n_max, "top homological degree");
    hh->add_option("--weight", weight, "restrict to one weight");
    add_common(hh);

    auto* hp = app.add_subcommand("hp", "periodic cyclic homology window");
    hp->add_option("spec", spec)->required();
    hp->add_option("--window", window, "degree window a..b");
    hp->add_option("--cap", cap, "form-degree cutoff");
    hp->add_option("--weight", weight);
    add_common(hp);

    auto* hc = app.add_subcommand("hc", "cyclic and negative cyclic windows");
    hc->add_option("spec", spec)->required();
    hc->add_option("--window", window);
    hc->add_option("--cap", cap);
    hc->add_option("--weight", weight);
    add_common(hc);

    auto* verify = app.add_subcommand("verify", "invariant suites");
    verify->require_subcommand(1);
    auto* vid = verify->add_subcommand("identities", "operator identity sweep");
    vid->add_option("spec", spec)->required();
    vid->add_option("--n-max", n_max);
    add_common(vid);
    auto* vha = verify->add_subcommand("harmonic", "harmonic decomposition suite");
    vha->add_option("spec", spec)->required();
    vha->add_option("--n-max", n_max);
    add_common(vha);
    auto* vdg = verify->add_subcommand("deform-dg", "cochain DG-algebra identities");
    vdg->add_option("spec", spec)->required();
    vdg->add_option("--seed", seed);
    vdg->add_option("--tuples", tuples);
    add_common(vdg);
    auto* vre = verify->add_subcommand("rep", "matrix-evaluation equivariance grid");
    vre->add_option("spec", spec)->required();
    vre->add_option("--dim", dim_v, "matrix size");
    add_common(vre);
    auto* vgm = verify->add_subcommand("gm", "relative-family connection axioms");
    vgm->add_option("spec", spec)->required();
    vgm->add_option("--seed", seed);
    add_common(vgm);

    auto* deform = app.add_subcommand("deform", "presentation-level deformations");
    deform->require_subcommand(1);
    auto* dmc = deform->add_subcommand("mc", "Maurer-Cartan and flatness verdicts");
    dmc->add_option("spec", spec)->required();
    dmc->add_option("--order", order, "parameter order (default: spec t_order)");
    add_common(dmc);

    auto* gm = app.add_subcommand("gm", "Gauss-Manin connection on a family");
    gm->add_option("spec", spec)->required();
    gm->add_option("--seed", seed);
    add_common(gm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (format != "json") throw SpecError("unsupported format: " + format);
        if (hh->parsed()) return cmd_hh(spec, n_max, weight, out);
        if (hp->parsed()) return cmd_hp(spec, window, cap, weight, out);
        if (hc->parsed()) return cmd_hc(spec, window, cap, weight, out);
        if (vid->parsed()) return cmd_verify_identities(spec, n_max, out);
        if (vha->parsed()) return cmd_verify_harmonic(spec, n_max, out);
        if (vdg->parsed()) return cmd_verify_deform_dg(spec, seed, tuples, out);
        if (vre->parsed()) return cmd_verify_rep(spec, dim_v, out);
        if (vgm->parsed()) return cmd_gm(spec, seed, false, out);
        if (dmc->parsed()) return cmd_deform_mc(spec, order, out);
        if (gm->parsed()) return cmd_gm(spec, seed, true, out);
        return 2;
    } catch (const SpecError& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return 2;
    } catch (const ParseError& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return 2;
    } catch (const json::exception& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return 2;
    } catch (const RewriteError& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 3;
    }
}
