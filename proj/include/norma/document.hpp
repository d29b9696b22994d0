#ifndef NORMA_DOCUMENT_HPP
#define NORMA_DOCUMENT_HPP

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "norma/parse.hpp"
#include "norma/verify.hpp"

namespace norma {

using json = nlohmann::json;

// A named algebra in a document: commutative extensions, quaternions, or
// matrix algebras.
struct AlgebraEntry {
    json spec;  // canonical spec for round-tripping
    std::optional<FiniteAlgebra> commutative;
    std::optional<QuaternionAlgebra> quat;
    std::optional<AssocAlgebra> matrix;
};

struct ModuleEntry {
    json spec;
    std::string over;
    long rank = -1;                   // free module
    std::vector<size_t> factors;      // product module over a split extension
    std::vector<json> action;         // optional: explicit action matrices
    long action_rank = -1;            // R-rank when action data is supplied
};

struct Document {
    ScalarDomain domain;
    json domain_spec;
    std::map<std::string, AlgebraEntry> algebras;
    std::map<std::string, ModuleEntry> modules;
    std::vector<json> tasks;  // kept in document order
};

namespace doc_detail {

inline std::string need_string(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string())
        throw parse_error(ctx + ": missing string field '" + key + "'");
    return j[key].get<std::string>();
}

inline long need_int(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw parse_error(ctx + ": missing integer field '" + key + "'");
    return j[key].get<long>();
}

inline ScalarDomain parse_domain(const json& j) {
    if (!j.is_object()) throw parse_error("domain: expected an object");
    std::string kind = need_string(j, "kind", "domain");
    if (kind == "rationals") return ScalarDomain::rationals();
    if (kind == "integers") return ScalarDomain::integers();
    if (kind == "prime_field") return ScalarDomain::prime_field(need_int(j, "p", "domain"));
    if (kind == "extension")
        return ScalarDomain::simple_extension(parse_poly(need_string(j, "minpoly", "domain")));
    throw parse_error("domain: unknown kind '" + kind + "'");
}

inline std::vector<Scalar> parse_scalar_list(const ScalarDomain& dom, const json& j,
                                             const std::string& ctx) {
    if (!j.is_array()) throw parse_error(ctx + ": expected an array of scalar strings");
    std::vector<Scalar> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw parse_error(ctx + ": scalars are encoded as strings");
        out.push_back(parse_scalar(dom, e.get<std::string>()));
    }
    return out;
}

inline AlgebraEntry parse_algebra(const ScalarDomain& dom, const std::string& name, const json& j) {
    std::string ctx = "algebra '" + name + "'";
    std::string kind = need_string(j, "kind", ctx);
    AlgebraEntry entry;
    entry.spec = j;
    if (kind == "split") {
        entry.commutative = FiniteAlgebra::split(dom, static_cast<size_t>(need_int(j, "copies", ctx)));
    } else if (kind == "quadratic") {
        entry.commutative = FiniteAlgebra::quadratic(dom, parse_scalar(dom, need_string(j, "c", ctx)));
    } else if (kind == "poly_quotient") {
        auto coeffs = parse_poly(need_string(j, "poly", ctx));
        std::vector<Scalar> f;
        for (const auto& c : coeffs) f.push_back(Scalar::from_rational(dom, c));
        entry.commutative = FiniteAlgebra::poly_quotient(dom, f);
    } else if (kind == "quaternion") {
        entry.quat = quaternion(parse_scalar(dom, need_string(j, "a", ctx)),
                                parse_scalar(dom, need_string(j, "b", ctx)));
    } else if (kind == "matrix") {
        entry.matrix = AssocAlgebra::matrix_algebra(dom, static_cast<size_t>(need_int(j, "size", ctx)));
    } else if (kind == "custom") {
        size_t rank = static_cast<size_t>(need_int(j, "rank", ctx));
        if (!j.contains("table")) throw parse_error(ctx + ": custom algebras need a 'table'");
        auto table = parse_scalar_list(dom, j["table"], ctx + " table");
        auto unit = parse_scalar_list(dom, j.contains("unit") ? j["unit"] : json::array(), ctx + " unit");
        entry.commutative = FiniteAlgebra(dom, rank, std::move(table), std::move(unit));
    } else {
        throw parse_error(ctx + ": unknown kind '" + kind + "'");
    }
    return entry;
}

} // namespace doc_detail

inline Document parse_document(const json& j) {
    using namespace doc_detail;
    if (!j.is_object()) throw parse_error("document root must be an object");
    Document doc;
    if (!j.contains("domain")) throw parse_error("document needs a 'domain'");
    doc.domain_spec = j["domain"];
    doc.domain = parse_domain(j["domain"]);
    if (j.contains("algebras")) {
        if (!j["algebras"].is_object()) throw parse_error("'algebras' must be an object");
        for (const auto& [name, spec] : j["algebras"].items())
            doc.algebras.emplace(name, parse_algebra(doc.domain, name, spec));
    }
    if (j.contains("modules")) {
        if (!j["modules"].is_object()) throw parse_error("'modules' must be an object");
        for (const auto& [name, spec] : j["modules"].items()) {
            ModuleEntry m;
            m.spec = spec;
            m.over = need_string(spec, "over", "module '" + name + "'");
            if (!doc.algebras.count(m.over) || !doc.algebras.at(m.over).commutative)
                throw validation_error("module '" + name + "': unresolved extension '" + m.over + "'");
            if (spec.contains("action")) {
                // explicit action matrices, one per extension basis element
                m.action_rank = need_int(spec, "rank_r", "module '" + name + "'");
                for (const auto& a : spec["action"]) m.action.push_back(a);
                const FiniteAlgebra& ext = doc.algebras.at(m.over).commutative.value();
                std::vector<Matrix> mats;
                for (const auto& a : m.action) {
                    auto flat = parse_scalar_list(ext.base(), a, "module '" + name + "' action");
                    size_t r = static_cast<size_t>(m.action_rank);
                    if (flat.size() != r * r)
                        throw validation_error("module '" + name + "': action matrix shape");
                    Matrix mat(r, r, ext.base());
                    for (size_t i = 0; i < r; ++i)
                        for (size_t j = 0; j < r; ++j) mat.at(i, j) = flat[i * r + j];
                    mats.push_back(std::move(mat));
                }
                ExtModule check(ext, static_cast<size_t>(m.action_rank), std::move(mats));
                (void)check;  // validation happens in the constructor
            } else if (spec.contains("rank")) {
                m.rank = need_int(spec, "rank", "module '" + name + "'");
                if (m.rank < 1) throw validation_error("module '" + name + "': rank must be >= 1");
            } else if (spec.contains("factors")) {
                for (const auto& f : spec["factors"]) m.factors.push_back(f.get<size_t>());
            } else {
                throw parse_error("module '" + name + "': needs 'rank', 'factors', or 'action'");
            }
            doc.modules.emplace(name, std::move(m));
        }
    }
    if (j.contains("tasks")) {
        if (!j["tasks"].is_array()) throw parse_error("'tasks' must be an array");
        for (const auto& t : j["tasks"]) {
            need_string(t, "name", "task");
            need_string(t, "op", "task");
            doc.tasks.push_back(t);
        }
    }
    return doc;
}

inline json document_to_json(const Document& doc) {
    json out;
    out["domain"] = doc.domain_spec;
    out["algebras"] = json::object();
    for (const auto& [name, a] : doc.algebras) out["algebras"][name] = a.spec;
    out["modules"] = json::object();
    for (const auto& [name, m] : doc.modules) out["modules"][name] = m.spec;
    out["tasks"] = doc.tasks;
    return out;
}

struct TaskResult {
    std::string name;
    std::string op;
    std::string status;  // pass | fail | error
    std::string error_kind;
    json data = json::object();
};

struct RunReport {
    std::vector<TaskResult> tasks;
    bool all_passed = true;
    int exit_code = 0;

    json to_json() const {
        json out;
        out["passed"] = all_passed;
        out["tasks"] = json::array();
        for (const auto& t : tasks) {
            json jt;
            jt["name"] = t.name;
            jt["op"] = t.op;
            jt["status"] = t.status;
            if (!t.error_kind.empty()) jt["error"] = t.error_kind;
            jt["data"] = t.data;
            out["tasks"].push_back(jt);
        }
        return out;
    }
};

namespace doc_detail {

inline const FiniteAlgebra& resolve_commutative(const Document& doc, const std::string& name,
                                                const std::string& ctx) {
    auto it = doc.algebras.find(name);
    if (it == doc.algebras.end() || !it->second.commutative)
        throw validation_error(ctx + ": unresolved commutative algebra '" + name + "'");
    return *it->second.commutative;
}

inline ExtModule resolve_module(const Document& doc, const std::string& name,
                                const std::string& ctx) {
    auto it = doc.modules.find(name);
    if (it == doc.modules.end()) throw validation_error(ctx + ": unresolved module '" + name + "'");
    const ModuleEntry& m = it->second;
    const FiniteAlgebra& ext = resolve_commutative(doc, m.over, ctx);
    if (!m.action.empty()) {
        size_t r = static_cast<size_t>(m.action_rank);
        std::vector<Matrix> mats;
        for (const auto& a : m.action) {
            auto flat = parse_scalar_list(ext.base(), a, ctx + " action");
            Matrix mat(r, r, ext.base());
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < r; ++j) mat.at(i, j) = flat[i * r + j];
            mats.push_back(std::move(mat));
        }
        return ExtModule(ext, r, std::move(mats));
    }
    if (m.rank >= 1) return ExtModule::free_module(ext, static_cast<size_t>(m.rank));
    return ExtModule::product_module(ext, m.factors);
}

inline Perm parse_cycles(const std::string& text, size_t d) {
    Perm p = identity_perm(d);
    if (text == "id" || text == "()" || text.empty()) return p;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        if (text[i] != '(') throw parse_error("permutation: expected '(' in " + text);
        ++i;
        std::vector<size_t> cycle;
        while (i < text.size() && text[i] != ')') {
            while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
                ++i;
            if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                size_t v = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    v = v * 10 + static_cast<size_t>(text[i++] - '0');
                if (v < 1 || v > d) throw parse_error("permutation entry out of range in " + text);
                cycle.push_back(v - 1);
            } else if (i < text.size() && text[i] != ')') {
                throw parse_error("permutation: bad character in " + text);
            }
        }
        if (i == text.size()) throw parse_error("permutation: missing ')' in " + text);
        ++i;
        for (size_t k = 0; k + 1 < cycle.size(); ++k) p[cycle[k]] = cycle[k + 1];
        if (cycle.size() > 1) p[cycle.back()] = cycle.front();
    }
    return p;
}

} // namespace doc_detail

// Runs one task; throws only for malformed task objects (parse errors).
inline TaskResult run_task(const Document& doc, const json& t, uint64_t seed, size_t samples) {
    using namespace doc_detail;
    TaskResult res;
    res.name = t["name"].get<std::string>();
    res.op = t["op"].get<std::string>();
    std::string ctx = "task '" + res.name + "'";
    auto finish_pass = [&](bool ok) { res.status = ok ? "pass" : "fail"; };
    try {
        if (res.op == "norm_module") {
            const FiniteAlgebra& ext = resolve_commutative(doc, need_string(t, "extension", ctx), ctx);
            ExtModule mod = resolve_module(doc, need_string(t, "module", ctx), ctx);
            NormModule nm(ext, mod);
            res.data["dimension"] = nm.dim();
            res.data["etale"] = nm.etale();
            bool ok = true;
            if (t.contains("expect_dimension")) ok = nm.dim() == t["expect_dimension"].get<size_t>();
            finish_pass(ok);
        } else if (res.op == "gamma_basis") {
            size_t n = static_cast<size_t>(need_int(t, "n", ctx));
            size_t d = static_cast<size_t>(need_int(t, "d", ctx));
            GammaSpace gs(doc.domain, n, d);
            res.data["dimension"] = gs.dim();
            json basis = json::array();
            for (const auto& e : gs.basis()) basis.push_back(e);
            res.data["basis"] = basis;
            bool ok = true;
            if (t.contains("expect_dimension")) ok = gs.dim() == t["expect_dimension"].get<size_t>();
            finish_pass(ok);
        } else if (res.op == "gamma_relations") {
            size_t n = static_cast<size_t>(need_int(t, "n", ctx));
            size_t d = static_cast<size_t>(need_int(t, "d", ctx));
            Sampler rng(seed);
            auto rep = check_gamma_relations(GammaSpace(doc.domain, n, d), rng, samples);
            res.data["trials"] = rep.trials;
            finish_pass(rep.passed);
        } else if (res.op == "etale") {
            const FiniteAlgebra& a = resolve_commutative(doc, need_string(t, "algebra", ctx), ctx);
            bool e = a.is_etale();
            res.data["etale"] = e;
            bool ok = true;
            if (t.contains("expect")) ok = e == t["expect"].get<bool>();
            finish_pass(ok);
        } else if (res.op == "norm_check") {
            const FiniteAlgebra& ext = resolve_commutative(doc, need_string(t, "extension", ctx), ctx);
            ExtModule mod = ExtModule::free_module(ext, 1);
            NormModule nm(ext, mod);
            bool ok = nm.dim() == 1;
            auto nu1 = nm.nu(mod.flatten({ext.unit()}));
            Sampler rng(seed);
            for (size_t i = 0; i < samples && ok; ++i) {
                auto rp = rng.vector(ext.base(), ext.rank());
                ok = nm.nu(mod.flatten({rp}))[0] == ext.norm_element(rp) * nu1[0];
            }
            res.data["dimension"] = nm.dim();
            finish_pass(ok);
        } else if (res.op == "nu_spans") {
            const FiniteAlgebra& ext = resolve_commutative(doc, need_string(t, "extension", ctx), ctx);
            ExtModule mod = resolve_module(doc, need_string(t, "module", ctx), ctx);
            NormModule nm(ext, mod);
            Sampler rng(seed);
            auto rep = nu_image_spans(nm, rng);
            res.data["dimension"] = rep.dim;
            res.data["polarization_spans"] = rep.polarization_spans;
            res.data["sampled"] = rep.sampled;
            if (rep.sampled) res.data["random_rank"] = rep.random_rank;
            finish_pass(rep.polarization_spans && (!rep.sampled || rep.random_rank == rep.dim));
        } else if (res.op == "split_oracle") {
            std::vector<size_t> sizes;
            for (const auto& f : t.at("factors")) sizes.push_back(f.get<size_t>());
            auto ext = FiniteAlgebra::split(doc.domain, sizes.size());
            NormModule nm(ext, ExtModule::product_module(ext, sizes));
            SplitOracle oracle = split_oracle(nm);
            res.data["dimension"] = nm.dim();
            res.data["tensor_factors"] = oracle.sizes;
            finish_pass(true);
        } else if (res.op == "segre_parity") {
            size_t r = static_cast<size_t>(need_int(t, "r", ctx));
            size_t d = static_cast<size_t>(need_int(t, "d", ctx));
            Perm p = parse_cycles(need_string(t, "perm", ctx), d);
            Matrix pm = perm_matrix(p, r, d, doc.domain);
            Scalar dv = det(pm);
            res.data["det"] = dv.str();
            res.data["matrix"] = pm.str();
            bool ok = true;
            if (t.contains("expect_det")) ok = dv.str() == t["expect_det"].get<std::string>();
            finish_pass(ok);
        } else if (res.op == "split_triple") {
            std::vector<size_t> sizes;
            for (const auto& f : t.at("sizes")) sizes.push_back(f.get<size_t>());
            IntegralSplitTriple tr = split_triple_Z(sizes);
            res.data["size"] = tr.size;
            res.data["sym_dim"] = tr.sym_basis.size();
            QuadraticTriple mod2 = reduce_split_triple(tr, 2);
            res.data["mod2_sym_dim"] = mod2.sym_dim();
            finish_pass(true);
        } else if (res.op == "a1d2") {
            const FiniteAlgebra& ext = resolve_commutative(doc, need_string(t, "extension", ctx), ctx);
            auto kd = promote_to_domain(ext);
            auto b = quaternion(parse_scalar(kd, need_string(t, "a", ctx)),
                                parse_scalar(kd, need_string(t, "b", ctx)));
            NormTriple nt = a1d2_norm(ext, restrict_scalars(b.alg),
                                      restrict_linear_map(b.alg, b.conjugation.m));
            res.data["rank"] = nt.na.algebra().rank();
            res.data["sym_dim"] = nt.triple.sym_dim();
            res.data["azumaya"] = true;  // checked during construction
            bool ok = true;
            if (t.contains("expect_sym_dim")) ok = nt.triple.sym_dim() == t["expect_sym_dim"].get<size_t>();
            finish_pass(ok);
        } else if (res.op == "theta_coherence") {
            const FiniteAlgebra& ext = resolve_commutative(doc, need_string(t, "extension", ctx), ctx);
            ExtModule mod = resolve_module(doc, need_string(t, "module", ctx), ctx);
            NormModule nm(ext, mod);
            auto dom_of = [&](const std::string& s) {
                return s == "rationals" ? ScalarDomain::rationals()
                                        : ScalarDomain::simple_extension(parse_poly(s));
            };
            auto rep = check_theta_coherence(nm, dom_of(need_string(t, "q", ctx)),
                                             dom_of(need_string(t, "w", ctx)));
            res.data["triangle"] = rep.triangle;
            res.data["pentagon"] = rep.pentagon;
            finish_pass(rep.triangle && rep.pentagon);
        } else if (res.op == "brauer_shadow") {
            auto b = quaternion(parse_scalar(doc.domain, need_string(t, "a", ctx)),
                                parse_scalar(doc.domain, need_string(t, "b", ctx)));
            BrauerShadow bs = brauer_shadow_split(b);
            res.data["dimension"] = bs.na.algebra().rank();
            finish_pass(true);
        } else if (res.op == "verify_suite") {
            auto results = run_acceptance(seed, samples);
            bool ok = true;
            json arr = json::array();
            for (const auto& r : results) {
                json jr;
                jr["id"] = r.id;
                jr["name"] = r.name;
                jr["passed"] = r.passed;
                if (!r.detail.empty()) jr["detail"] = r.detail;
                arr.push_back(jr);
                ok = ok && r.passed;
            }
            res.data["criteria"] = arr;
            finish_pass(ok);
        } else {
            throw parse_error(ctx + ": unknown op '" + res.op + "'");
        }
    } catch (const parse_error&) {
        throw;  // malformed documents abort the whole run
    } catch (const validation_error& e) {
        res.status = "error";
        res.error_kind = "validation";
        res.data["message"] = e.what();
    } catch (const precondition_error& e) {
        res.status = "error";
        res.error_kind = "precondition";
        res.data["message"] = e.what();
    }
    return res;
}

inline RunReport run_document(const Document& doc, uint64_t seed = 0, size_t samples = 100) {
    RunReport report;
    for (const auto& t : doc.tasks) {
        TaskResult res = run_task(doc, t, seed, samples);
        if (res.status != "pass") {
            report.all_passed = false;
            if (res.error_kind == "validation") report.exit_code = std::max(report.exit_code, 3);
            else if (res.error_kind == "precondition") report.exit_code = std::max(report.exit_code, 4);
            else report.exit_code = std::max(report.exit_code, 1);
        }
        report.tasks.push_back(std::move(res));
    }
    return report;
}

} // namespace norma

#endif
