// norma: exact norm-functor computations from the command line.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "norma/document.hpp"

using namespace norma;

namespace {

uint64_t env_seed() {
    if (const char* env = std::getenv("NORMA_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

ScalarDomain base_domain(long p) {
    return p > 0 ? ScalarDomain::prime_field(p) : ScalarDomain::rationals();
}

FiniteAlgebra extension_from_poly(const ScalarDomain& dom, const std::string& poly) {
    auto coeffs = parse_poly(poly);
    std::vector<Scalar> f;
    for (const auto& c : coeffs) f.push_back(Scalar::from_rational(dom, c));
    return FiniteAlgebra::poly_quotient(dom, f);
}

std::vector<size_t> parse_sizes(const std::string& text) {
    std::vector<size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoul(item));
    }
    if (out.empty()) throw parse_error("expected a comma-separated size list");
    return out;
}

int emit(const json& payload, bool ok) {
    std::cout << payload.dump(2) << "\n";
    return ok ? 0 : 1;
}

int run_subcommand(const std::string& path, uint64_t seed, size_t samples) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read document: " << path << "\n";
        return 2;
    }
    json raw;
    try {
        in >> raw;
    } catch (const json::exception& e) {
        std::cerr << "json parse error: " << e.what() << "\n";
        return 2;
    }
    Document doc;
    try {
        doc = parse_document(raw);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 4;
    }
    auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    try {
        report = run_document(doc, seed, samples);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << report.to_json().dump(2) << "\n";
    for (const auto& t : report.tasks)
        std::cerr << t.name << " [" << t.op << "]: " << t.status
                  << (t.error_kind.empty() ? "" : " (" + t.error_kind + ")") << "\n";
    std::cerr << report.tasks.size() << " task(s) in " << elapsed << "s, seed " << seed << "\n";
    return report.all_passed ? 0 : (report.exit_code ? report.exit_code : 1);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact norm-functor computations for finite free ring extensions"};
    app.require_subcommand(1);
    uint64_t seed = env_seed();
    size_t samples = 100;
    app.add_option("--seed", seed, "seed for the deterministic sampler");
    app.add_option("--samples", samples, "sample count for probabilistic checks");

    std::string doc_path;
    auto* cmd_run = app.add_subcommand("run", "run the tasks in a JSON document");
    cmd_run->add_option("document", doc_path, "path to the input document")->required();

    std::string ext_poly = "x^2-2";
    long ext_p = 0;
    size_t module_rank = 1;
    auto* cmd_norm = app.add_subcommand("norm", "dimension and checks for N(R'^n)");
    cmd_norm->add_option("--extension", ext_poly, "monic polynomial presenting R' = R[x]/(f)");
    cmd_norm->add_option("--p", ext_p, "prime characteristic of the base (default: rationals)");
    cmd_norm->add_option("--rank", module_rank, "rank of the free module over R'");

    size_t gb_n = 2, gb_d = 2;
    auto* cmd_gamma = app.add_subcommand("gamma-basis", "list the multiset basis of Gamma^d");
    cmd_gamma->add_option("--n", gb_n, "source rank");
    cmd_gamma->add_option("--d", gb_d, "divided-power degree");

    std::string perm_text = "(1 2)";
    size_t seg_r = 2, seg_d = 2;
    long seg_p = 0;
    auto* cmd_segre = app.add_subcommand("segre", "permutation action on the tensor basis");
    cmd_segre->add_option("--perm", perm_text, "permutation in cycle notation, e.g. \"(1 2)\"");
    cmd_segre->add_option("--r", seg_r, "factor size");
    cmd_segre->add_option("--d", seg_d, "number of factors");
    cmd_segre->add_option("--p", seg_p, "prime characteristic (default: rationals)");

    std::string sizes_text = "1,1";
    long qp_mod = 0;
    auto* cmd_quad = app.add_subcommand("quadpair-split", "the integral split quadratic triple");
    cmd_quad->add_option("--sizes", sizes_text, "comma-separated half-sizes n_1,...,n_d");
    cmd_quad->add_option("--mod", qp_mod, "also reduce modulo this prime");

    std::string a1d2_ext = "x^2-2";
    std::string quat_text = "-1,-1";
    auto* cmd_a1d2 = app.add_subcommand("a1d2", "norm quadratic triple of a quaternion algebra");
    cmd_a1d2->add_option("--etale", a1d2_ext, "quadratic etale extension of QQ, as a monic polynomial");
    cmd_a1d2->add_option("--quaternion", quat_text, "structure constants a,b of the quaternion algebra");

    std::string which = "all";
    auto* cmd_verify = app.add_subcommand("verify-suite", "run the acceptance criteria");
    cmd_verify->add_option("criteria", which, "'all' or a criterion number");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) return run_subcommand(doc_path, seed, samples);

        if (cmd_norm->parsed()) {
            auto dom = base_domain(ext_p);
            FiniteAlgebra ext = extension_from_poly(dom, ext_poly);
            NormModule nm(ext, ExtModule::free_module(ext, module_rank));
            json out;
            out["extension"] = ext_poly;
            out["base"] = dom.str();
            out["module_rank"] = module_rank;
            out["dimension"] = nm.dim();
            out["etale"] = nm.etale();
            return emit(out, true);
        }

        if (cmd_gamma->parsed()) {
            GammaSpace gs(base_domain(0), gb_n, gb_d);
            json out;
            out["n"] = gb_n;
            out["d"] = gb_d;
            out["dimension"] = gs.dim();
            json basis = json::array();
            for (const auto& e : gs.basis()) basis.push_back(e);
            out["basis"] = basis;
            return emit(out, true);
        }

        if (cmd_segre->parsed()) {
            auto dom = base_domain(seg_p);
            Perm p = doc_detail::parse_cycles(perm_text, seg_d);
            Matrix m = perm_matrix(p, seg_r, seg_d, dom);
            json out;
            out["r"] = seg_r;
            out["d"] = seg_d;
            out["perm"] = perm_text;
            out["det"] = det(m).str();
            out["matrix_size"] = m.rows();
            return emit(out, true);
        }

        if (cmd_quad->parsed()) {
            auto sizes = parse_sizes(sizes_text);
            IntegralSplitTriple t = split_triple_Z(sizes);
            json out;
            out["sizes"] = sizes;
            out["matrix_size"] = t.size;
            out["gram_det"] = det(t.gram).str();
            out["sym_dim"] = t.sym_basis.size();
            out["f_integral"] = true;   // enforced during construction
            out["sigma_is_tensor"] = true;
            if (qp_mod > 0) {
                QuadraticTriple red = reduce_split_triple(t, qp_mod);
                out["reduction_mod"] = qp_mod;
                out["reduction_sym_dim"] = red.sym_dim();
            }
            return emit(out, true);
        }

        if (cmd_a1d2->parsed()) {
            auto dom = base_domain(0);
            FiniteAlgebra ext = extension_from_poly(dom, a1d2_ext);
            auto kd = promote_to_domain(ext);
            auto comma = quat_text.find(',');
            if (comma == std::string::npos) throw parse_error("--quaternion expects \"a,b\"");
            Scalar a = parse_scalar(kd, quat_text.substr(0, comma));
            Scalar b = parse_scalar(kd, quat_text.substr(comma + 1));
            auto quat = quaternion(a, b);
            NormTriple nt = a1d2_norm(ext, restrict_scalars(quat.alg),
                                      restrict_linear_map(quat.alg, quat.conjugation.m));
            json out;
            out["extension"] = a1d2_ext;
            out["quaternion"] = quat_text;
            out["rank"] = nt.na.algebra().rank();
            out["sym_dim"] = nt.triple.sym_dim();
            out["azumaya"] = is_azumaya(nt.na.algebra());
            out["f_of_unit"] = nt.triple.f(nt.na.algebra().unit()).str();
            return emit(out, true);
        }

        if (cmd_verify->parsed()) {
            auto results = run_acceptance(seed, samples);
            bool all = true;
            for (const auto& r : results) {
                if (which != "all" && std::to_string(r.id) != which) continue;
                std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name
                          << (r.detail.empty() ? "" : " -- " + r.detail) << "\n";
                all = all && r.passed;
            }
            return all ? 0 : 1;
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
