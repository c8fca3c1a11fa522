#include "alvc/problem.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <utility>

namespace alvc {

using nlohmann::json;

namespace {

Expr zero_expr() { return parse("0"); }

Expr expr_field(const json& j, const std::string& what) {
    if (!j.is_string()) throw SchemaError(what + ": expected an expression string");
    try {
        return parse(j.get<std::string>());
    } catch (const ParseError& e) {
        throw SchemaError(what + ": " + e.what());
    }
}

int int_field(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw SchemaError(what + ": expected an integer");
    return j.get<int>();
}

double num_field(const json& j, const std::string& what) {
    if (!j.is_number()) throw SchemaError(what + ": expected a number");
    return j.get<double>();
}

AlgebroidStructure load_algebroid(const json& j);

AlgebroidStructure load_custom(const json& j) {
    if (!j.contains("m") || !j.contains("r"))
        throw SchemaError("algebroid: custom structure needs 'm' and 'r'");
    const int m = int_field(j["m"], "algebroid.m");
    const int r = int_field(j["r"], "algebroid.r");
    if (m < 0 || r < 1) throw SchemaError("algebroid: need m >= 0 and r >= 1");

    std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(m),
                                       std::vector<Expr>(static_cast<std::size_t>(r)));
    if (m > 0) {
        if (!j.contains("rho") || !j["rho"].is_array() ||
            static_cast<int>(j["rho"].size()) != m)
            throw SchemaError("algebroid.rho: expected an array of m rows");
        for (int a = 0; a < m; ++a) {
            const auto& row = j["rho"][static_cast<std::size_t>(a)];
            if (!row.is_array() || static_cast<int>(row.size()) != r)
                throw SchemaError("algebroid.rho: each row needs r expressions");
            for (int i = 0; i < r; ++i)
                rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = expr_field(
                    row[static_cast<std::size_t>(i)],
                    "algebroid.rho[" + std::to_string(a) + "][" + std::to_string(i) + "]");
        }
    }

    std::vector<std::vector<std::vector<Expr>>> c(
        static_cast<std::size_t>(r),
        std::vector<std::vector<Expr>>(static_cast<std::size_t>(r),
                                       std::vector<Expr>(static_cast<std::size_t>(r))));
    if (j.contains("c")) {
        if (!j["c"].is_array() || static_cast<int>(j["c"].size()) != r)
            throw SchemaError("algebroid.c: expected r slabs");
        for (int k = 0; k < r; ++k) {
            const auto& slab = j["c"][static_cast<std::size_t>(k)];
            if (!slab.is_array() || static_cast<int>(slab.size()) != r)
                throw SchemaError("algebroid.c: each slab needs r rows");
            for (int i = 0; i < r; ++i) {
                const auto& row = slab[static_cast<std::size_t>(i)];
                if (!row.is_array() || static_cast<int>(row.size()) != r)
                    throw SchemaError("algebroid.c: each row needs r expressions");
                for (int jj = 0; jj < r; ++jj)
                    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
                     [static_cast<std::size_t>(jj)] =
                        expr_field(row[static_cast<std::size_t>(jj)],
                                   "algebroid.c[" + std::to_string(k) + "][" +
                                       std::to_string(i) + "][" + std::to_string(jj) + "]");
            }
        }
    } else {
        for (auto& slab : c)
            for (auto& row : slab)
                for (auto& e : row) e = zero_expr();
    }

    try {
        return make_algebroid(m, r, std::move(rho), std::move(c),
                              j.value("label", std::string("custom")));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("algebroid: ") + e.what());
    }
}

AlgebroidStructure load_algebroid(const json& j) {
    if (!j.is_object()) throw SchemaError("algebroid: expected an object");
    const std::string preset = j.value("preset", std::string("custom"));
    if (preset == "tangent") {
        const int n = j.contains("n") ? int_field(j["n"], "algebroid.n")
                                      : (j.contains("m") ? int_field(j["m"], "algebroid.m") : 0);
        if (n < 1) throw SchemaError("algebroid: tangent preset needs 'n' >= 1");
        return preset_tangent(n);
    }
    if (preset == "lie") {
        const std::string name = j.value("name", std::string());
        if (name == "so3") return preset_lie_so3();
        if (name == "heis3") return preset_lie_heis3();
        throw SchemaError("algebroid: unknown lie preset '" + name + "' (so3, heis3)");
    }
    if (preset == "product") {
        if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].size() < 2)
            throw SchemaError("algebroid: product preset needs >= 2 'factors'");
        std::vector<AlgebroidStructure> factors;
        factors.reserve(j["factors"].size());
        for (const auto& f : j["factors"]) factors.push_back(load_algebroid(f));
        return preset_product(factors);
    }
    if (preset == "custom") return load_custom(j);
    throw SchemaError("algebroid: unknown preset '" + preset +
                      "' (tangent, lie, product, custom)");
}

} // namespace

AlgebroidStructure preset_tangent(int n) {
    if (n < 1) throw SchemaError("tangent preset: n >= 1 required");
    std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(n),
                                       std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] =
                parse(a == i ? "1" : "0");
    std::vector<std::vector<std::vector<Expr>>> c(
        static_cast<std::size_t>(n),
        std::vector<std::vector<Expr>>(static_cast<std::size_t>(n),
                                       std::vector<Expr>(static_cast<std::size_t>(n))));
    for (auto& slab : c)
        for (auto& row : slab)
            for (auto& e : row) e = zero_expr();
    return make_algebroid(n, n, std::move(rho), std::move(c),
                          "tangent(" + std::to_string(n) + ")");
}

AlgebroidStructure preset_lie_so3() {
    std::vector<std::vector<std::vector<Expr>>> c(
        3, std::vector<std::vector<Expr>>(3, std::vector<Expr>(3)));
    for (auto& slab : c)
        for (auto& row : slab)
            for (auto& e : row) e = zero_expr();
    // c[k][i][j] is the alternating symbol on (i, j, k), 0-based.
    c[2][0][1] = parse("1");
    c[2][1][0] = parse("-1");
    c[0][1][2] = parse("1");
    c[0][2][1] = parse("-1");
    c[1][2][0] = parse("1");
    c[1][0][2] = parse("-1");
    return make_algebroid(0, 3, {}, std::move(c), "so3");
}

AlgebroidStructure preset_lie_heis3() {
    std::vector<std::vector<std::vector<Expr>>> c(
        3, std::vector<std::vector<Expr>>(3, std::vector<Expr>(3)));
    for (auto& slab : c)
        for (auto& row : slab)
            for (auto& e : row) e = zero_expr();
    c[2][0][1] = parse("1");
    c[2][1][0] = parse("-1");
    return make_algebroid(0, 3, {}, std::move(c), "heis3");
}

AlgebroidStructure preset_product(const std::vector<AlgebroidStructure>& factors) {
    if (factors.size() < 2) throw SchemaError("product preset: need >= 2 factors");
    int m = 0, r = 0;
    for (const auto& f : factors) {
        m += f.m;
        r += f.r;
    }
    std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(m),
                                       std::vector<Expr>(static_cast<std::size_t>(r)));
    for (auto& row : rho)
        for (auto& e : row) e = zero_expr();
    std::vector<std::vector<std::vector<Expr>>> c(
        static_cast<std::size_t>(r),
        std::vector<std::vector<Expr>>(static_cast<std::size_t>(r),
                                       std::vector<Expr>(static_cast<std::size_t>(r))));
    for (auto& slab : c)
        for (auto& row : slab)
            for (auto& e : row) e = zero_expr();

    int ma = 0, ri = 0;
    std::string label = "product(";
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& F = factors[f];
        std::map<std::string, std::string> remap;
        for (int a = 0; a < F.m; ++a)
            remap.emplace(F.base_name(a), "x" + std::to_string(ma + a + 1));
        for (int a = 0; a < F.m; ++a)
            for (int i = 0; i < F.r; ++i)
                rho[static_cast<std::size_t>(ma + a)][static_cast<std::size_t>(ri + i)] =
                    rename_vars(F.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)],
                                remap);
        for (int k = 0; k < F.r; ++k)
            for (int i = 0; i < F.r; ++i)
                for (int jj = 0; jj < F.r; ++jj)
                    c[static_cast<std::size_t>(ri + k)][static_cast<std::size_t>(ri + i)]
                     [static_cast<std::size_t>(ri + jj)] =
                        rename_vars(F.c_raw[static_cast<std::size_t>(k)]
                                           [static_cast<std::size_t>(i)]
                                           [static_cast<std::size_t>(jj)],
                                    remap);
        ma += F.m;
        ri += F.r;
        label += (f == 0 ? "" : ",") + (F.label.empty() ? "?" : F.label);
    }
    label += ")";
    return make_algebroid(m, r, std::move(rho), std::move(c), std::move(label));
}

CollocationProblem Problem::collocation() const {
    if (!has_lagrangian) throw SchemaError("problem: 'lagrangian' and 'order' required");
    if (!has_path) throw SchemaError("problem: 'path' with 'x0' required");
    CollocationProblem cp;
    cp.A = A;
    cp.L = L;
    cp.x0 = path.x0;
    cp.t0 = path.t0;
    cp.t1 = path.t1;
    cp.degree = degree;
    cp.nodes = nodes;
    cp.boundary = entries;
    if (has_external_force) cp.external_force = external_force;
    cp.flow_steps = flow_steps;
    cp.penalty = penalty;
    cp.lambda0 = lambda0;
    cp.max_iter = max_iter;
    cp.force_tol = force_tol;
    cp.boundary_tol = boundary_tol;
    return cp;
}

Problem load_problem(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("top level must be a JSON object");
    if (!j.contains("algebroid")) throw SchemaError("missing 'algebroid' section");

    Problem p;
    p.A = load_algebroid(j["algebroid"]);

    int order = 1;
    if (j.contains("order")) {
        order = int_field(j["order"], "order");
        if (order < 1 || 2 * order > kMaxJetOrder)
            throw SchemaError("order: out of the supported range");
    }

    if (j.contains("lagrangian")) {
        p.has_lagrangian = true;
        p.L.k = order;
        p.L.expr = expr_field(j["lagrangian"], "lagrangian");
        try {
            validate_lagrangian(p.A, p.L);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("lagrangian: ") + e.what());
        }
    }

    if (j.contains("interval")) {
        const auto& iv = j["interval"];
        if (!iv.is_array() || iv.size() != 2)
            throw SchemaError("interval: expected [t0, t1]");
        p.path.t0 = num_field(iv[0], "interval[0]");
        p.path.t1 = num_field(iv[1], "interval[1]");
        if (!(p.path.t1 > p.path.t0)) throw SchemaError("interval: need t1 > t0");
    }

    if (j.contains("path")) {
        const auto& jp = j["path"];
        if (!jp.is_object()) throw SchemaError("path: expected an object");
        p.has_path = true;
        if (jp.contains("y")) {
            if (!jp["y"].is_array() || static_cast<int>(jp["y"].size()) != p.A.r)
                throw SchemaError("path.y: expected r generator expressions");
            for (std::size_t i = 0; i < jp["y"].size(); ++i) {
                Expr e = expr_field(jp["y"][i], "path.y[" + std::to_string(i) + "]");
                for (const auto& v : free_vars(e))
                    if (v != "t")
                        throw SchemaError("path.y[" + std::to_string(i) +
                                          "]: only 't' may appear free, found '" + v + "'");
                p.path.y.push_back(std::move(e));
            }
        }
        if (p.A.m > 0) {
            if (!jp.contains("x0") || !jp["x0"].is_array() ||
                static_cast<int>(jp["x0"].size()) != p.A.m)
                throw SchemaError("path.x0: expected m numbers");
            for (std::size_t a = 0; a < jp["x0"].size(); ++a)
                p.path.x0.push_back(num_field(jp["x0"][a], "path.x0[" + std::to_string(a) + "]"));
        }
        if (jp.contains("steps")) {
            p.path.steps = int_field(jp["steps"], "path.steps");
            if (p.path.steps < 1) throw SchemaError("path.steps: must be >= 1");
        }
    }

    if (j.contains("samples")) {
        p.samples = int_field(j["samples"], "samples");
        if (p.samples < 1) throw SchemaError("samples: must be >= 1");
    }

    if (j.contains("boundary")) {
        const auto& jb = j["boundary"];
        if (!jb.is_object()) throw SchemaError("boundary: expected an object");
        const std::string kind = jb.value("kind", std::string("fixed"));
        if (kind == "fixed")
            p.bc.kind = BoundaryCondition::Kind::Fixed;
        else if (kind == "free")
            p.bc.kind = BoundaryCondition::Kind::Free;
        else if (kind == "spanned")
            p.bc.kind = BoundaryCondition::Kind::Spanned;
        else
            throw SchemaError("boundary.kind: expected fixed, free or spanned");
        if (p.bc.kind == BoundaryCondition::Kind::Spanned) {
            if (!jb.contains("span") || !jb["span"].is_array() || jb["span"].empty())
                throw SchemaError("boundary.span: spanned kind needs generator pairs");
            auto load_side = [&](const json& side) {
                std::vector<Expr> b;
                if (!side.is_array() || static_cast<int>(side.size()) != p.A.r)
                    throw SchemaError("boundary.span: generators need r components");
                for (const auto& e : side) b.push_back(expr_field(e, "boundary.span"));
                return b;
            };
            for (const auto& pair : jb["span"]) {
                if (!pair.is_object() || !pair.contains("b0") || !pair.contains("b1"))
                    throw SchemaError("boundary.span: each pair needs 'b0' and 'b1'");
                p.bc.span.emplace_back(load_side(pair["b0"]), load_side(pair["b1"]));
            }
        }
        if (jb.contains("entries")) {
            if (!jb["entries"].is_array()) throw SchemaError("boundary.entries: expected an array");
            for (const auto& je : jb["entries"]) {
                if (!je.is_object()) throw SchemaError("boundary.entries: expected objects");
                BoundaryEntry e;
                const std::string ek = je.value("kind", std::string("fiber"));
                if (ek == "fiber")
                    e.kind = BoundaryEntry::Kind::Fiber;
                else if (ek == "base")
                    e.kind = BoundaryEntry::Kind::Base;
                else if (ek == "momentum")
                    e.kind = BoundaryEntry::Kind::FreeMomentum;
                else
                    throw SchemaError("boundary.entries.kind: expected fiber, base or momentum");
                if (!je.contains("index")) throw SchemaError("boundary.entries: missing 'index'");
                e.index = int_field(je["index"], "boundary.entries.index") - 1; // 1-based in files
                e.order = je.contains("order") ? int_field(je["order"], "boundary.entries.order") : 0;
                const int end = je.contains("end") ? int_field(je["end"], "boundary.entries.end") : 1;
                if (end != 0 && end != 1) throw SchemaError("boundary.entries.end: expected 0 or 1");
                e.at_end = end == 1;
                e.value = je.contains("value") ? num_field(je["value"], "boundary.entries.value") : 0.0;
                p.entries.push_back(e);
            }
        }
    }

    if (j.contains("solver")) {
        const auto& js = j["solver"];
        if (!js.is_object()) throw SchemaError("solver: expected an object");
        if (js.contains("degree")) p.degree = int_field(js["degree"], "solver.degree");
        if (js.contains("nodes")) p.nodes = int_field(js["nodes"], "solver.nodes");
        if (js.contains("penalty")) p.penalty = num_field(js["penalty"], "solver.penalty");
        if (js.contains("max_iter")) p.max_iter = int_field(js["max_iter"], "solver.max_iter");
        if (js.contains("lambda0")) p.lambda0 = num_field(js["lambda0"], "solver.lambda0");
        if (js.contains("force_tol")) p.force_tol = num_field(js["force_tol"], "solver.force_tol");
        if (js.contains("boundary_tol"))
            p.boundary_tol = num_field(js["boundary_tol"], "solver.boundary_tol");
        if (js.contains("flow_steps")) p.flow_steps = int_field(js["flow_steps"], "solver.flow_steps");
        if (js.contains("external_force")) {
            const auto& jf = js["external_force"];
            if (!jf.is_array() || static_cast<int>(jf.size()) != p.A.r)
                throw SchemaError("solver.external_force: expected r expressions");
            p.has_external_force = true;
            for (const auto& e : jf) {
                Expr f = expr_field(e, "solver.external_force");
                for (const auto& v : free_vars(f))
                    if (v != "t")
                        throw SchemaError("solver.external_force: only 't' may appear free");
                p.external_force.push_back(std::move(f));
            }
        }
    }

    return p;
}

Problem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_problem(ss.str());
}

} // namespace alvc
