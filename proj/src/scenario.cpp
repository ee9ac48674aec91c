#include "geoduel/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geoduel/rng.hpp"

namespace geoduel {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& field, const std::string& reason) {
    fail(ErrorKind::SchemaError, field + ": " + reason);
}

const json& need(const json& obj, const char* field) {
    if (!obj.contains(field)) schema_error(field, "missing required field");
    return obj.at(field);
}

std::string need_string(const json& obj, const char* field) {
    const json& v = need(obj, field);
    if (!v.is_string()) schema_error(field, "expected a string");
    return v.get<std::string>();
}

Expr parse_field_expr(const std::string& text, const Scenario& sc, const char* field) {
    try {
        return parse_expr(text, sc.coordinates, sc.param_names);
    } catch (const Error& e) {
        schema_error(field, std::string("'") + text + "' failed to parse: " + e.what());
    }
}

std::vector<double> read_point(const json& v, int n, const char* field) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        schema_error(field, "expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> p;
    for (const auto& x : v) {
        if (!x.is_number()) schema_error(field, "expected numbers");
        p.push_back(x.get<double>());
    }
    return p;
}

Scenario::Expectation read_expectation(const json& v, const char* field) {
    const std::string s = v.get<std::string>();
    if (s == "report") return Scenario::Expectation::Report;
    if (s == "zero") return Scenario::Expectation::Zero;
    if (s == "nonzero") return Scenario::Expectation::Nonzero;
    schema_error(field, "expected one of report/zero/nonzero");
}

VectorFieldSpec read_vector_field(const json& v, const Scenario& sc, const char* field) {
    if (!v.is_array() || static_cast<int>(v.size()) != sc.dimension)
        schema_error(field, "expected " + std::to_string(sc.dimension) + " component expressions");
    VectorFieldSpec spec;
    for (const auto& comp : v) spec.components.push_back(parse_field_expr(comp.get<std::string>(), sc, field));
    return spec;
}

std::vector<Expr> read_rank3_grid(const json& v, const Scenario& sc, const char* field) {
    const int n = sc.dimension;
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        schema_error(field, "expected an n x n x n grid of expressions");
    std::vector<Expr> flat;
    flat.reserve(static_cast<size_t>(n) * n * n);
    for (const auto& plane : v) {
        if (!plane.is_array() || static_cast<int>(plane.size()) != n)
            schema_error(field, "expected an n x n x n grid of expressions");
        for (const auto& row : plane) {
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                schema_error(field, "expected an n x n x n grid of expressions");
            for (const auto& cell : row)
                flat.push_back(parse_field_expr(cell.get<std::string>(), sc, field));
        }
    }
    return flat;
}

ConnectionField read_connection(const json& v, const Scenario& sc, const std::string& name) {
    const std::string field = "connections." + name;
    const std::string kind = need_string(v, "kind");
    const int n = sc.dimension;
    if (kind == "levi_civita") return ConnectionField::levi_civita(n);
    if (kind == "explicit") return ConnectionField::explicit_gamma(n, read_rank3_grid(need(v, "gamma"), sc, field.c_str()));
    if (kind == "lc_plus_distortion")
        return ConnectionField::lc_plus_distortion(n, read_rank3_grid(need(v, "distortion"), sc, field.c_str()));
    if (kind == "three_form") {
        if (v.contains("f")) {
            if (n != 3) schema_error(field, "the generator form needs dimension 3");
            return ConnectionField::three_form_generator(
                parse_field_expr(v.at("f").get<std::string>(), sc, field.c_str()));
        }
        std::vector<ConnectionField::ThreeFormComponent> comps;
        for (const auto& comp : need(v, "components")) {
            ConnectionField::ThreeFormComponent c;
            const auto& idx = need(comp, "indices");
            if (!idx.is_array() || idx.size() != 3) schema_error(field, "component indices must be a triple");
            c.i = idx[0].get<int>();
            c.j = idx[1].get<int>();
            c.k = idx[2].get<int>();
            c.expr = parse_field_expr(need_string(comp, "expr"), sc, field.c_str());
            comps.push_back(std::move(c));
        }
        return ConnectionField::three_form_components(n, std::move(comps));
    }
    schema_error(field, "unknown connection kind '" + kind + "'");
}

infogeo::ParametricFamily read_family(const json& v, const Scenario& sc, const std::string& name) {
    const std::string field = "families." + name;
    if (v.contains("builtin")) {
        const std::string b = v.at("builtin").get<std::string>();
        if (b != "gaussian") schema_error(field, "unknown builtin family '" + b + "'");
        return infogeo::ParametricFamily::gaussian();
    }
    infogeo::ParametricFamily fam;
    for (const auto& p : need(v, "parameters")) fam.param_names.push_back(p.get<std::string>());
    fam.m = static_cast<int>(fam.param_names.size());
    if (fam.m < 1) schema_error(field, "a family needs at least one parameter");

    std::vector<std::string> coords = fam.param_names;
    coords.push_back("x");
    try {
        fam.log_density = parse_expr(need_string(v, "log_density"), coords, sc.param_names);
    } catch (const Error& e) {
        schema_error(field + ".log_density", e.what());
    }
    fam.bound_params = sc.param_values;

    const json& dom = need(v, "domain");
    const std::string dk = need_string(dom, "kind");
    if (dk == "real_line") {
        fam.domain.kind = infogeo::Domain::Kind::RealLine;
    } else if (dk == "interval") {
        fam.domain.kind = infogeo::Domain::Kind::Interval;
        fam.domain.a = need(dom, "a").get<double>();
        fam.domain.b = need(dom, "b").get<double>();
    } else {
        schema_error(field + ".domain", "expected real_line or interval");
    }

    if (v.contains("quadrature")) {
        const json& q = v.at("quadrature");
        const std::string qk = need_string(q, "kind");
        if (qk == "hermite") {
            fam.quad.kind = infogeo::QuadratureSpec::Kind::Hermite;
            if (q.contains("nodes")) fam.quad.order = q.at("nodes").get<int>();
            auto read_hint = [&](const char* key) -> std::optional<Expr> {
                if (!q.contains(key)) return std::nullopt;
                try {
                    return parse_expr(q.at(key).get<std::string>(), fam.param_names, sc.param_names);
                } catch (const Error& e) {
                    schema_error(field + ".quadrature", e.what());
                }
            };
            fam.quad.center = read_hint("center");
            fam.quad.scale = read_hint("scale");
        } else if (qk == "composite") {
            fam.quad.kind = infogeo::QuadratureSpec::Kind::Composite;
            if (q.contains("panels")) fam.quad.panels = q.at("panels").get<int>();
        } else {
            schema_error(field + ".quadrature", "expected hermite or composite");
        }
    } else {
        fam.quad.kind = fam.domain.kind == infogeo::Domain::Kind::RealLine
                            ? infogeo::QuadratureSpec::Kind::Hermite
                            : infogeo::QuadratureSpec::Kind::Composite;
    }
    return fam;
}

const std::vector<std::string> kKnownSuites = {
    "metricity",       "post_riemannian", "torsion_dual",     "nonmetric_dual",
    "alpha_family",    "generalized_dual", "theorem1",         "lemma",
    "theorem2",        "theorem3",        "both_senses",      "mutual_tensors",
    "mutual_curvature", "flinearity",      "curvature_dual",   "transport",
    "fisher_gaussian", "fisher_custom",   "combination_curvature"};

} // namespace

std::vector<std::vector<double>> Scenario::resolve_points() const {
    std::vector<std::vector<double>> pts = explicit_points;
    if (sampler.has_value()) {
        SplitMix64 rng(sampler->seed);
        for (int i = 0; i < sampler->count; ++i) pts.push_back(rng.point_in_box(sampler->box));
    }
    return pts;
}

const ConnectionField* Scenario::find_connection(const std::string& name) const {
    for (const auto& [n, f] : connections)
        if (n == name) return &f;
    return nullptr;
}

std::vector<std::string> Scenario::connection_names() const {
    std::vector<std::string> names;
    names.reserve(connections.size());
    for (const auto& [n, f] : connections) names.push_back(n);
    return names;
}

Scenario parse_scenario_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const std::exception& e) {
        schema_error("(document)", e.what());
    }
    if (!root.is_object()) schema_error("(document)", "top level must be an object");
    if (!root.contains("schema") || root.at("schema").get<int>() != 1)
        schema_error("schema", "expected \"schema\": 1");

    Scenario sc;
    if (root.contains("name")) sc.name = root.at("name").get<std::string>();
    sc.dimension = need(root, "dimension").get<int>();
    if (sc.dimension < 1 || sc.dimension > 6) schema_error("dimension", "must be in [1, 6]");
    for (const auto& c : need(root, "coordinates")) sc.coordinates.push_back(c.get<std::string>());
    if (static_cast<int>(sc.coordinates.size()) != sc.dimension)
        schema_error("coordinates", "must list exactly `dimension` names");

    if (root.contains("parameters")) {
        // json objects iterate in sorted key order, so the binding order is
        // deterministic.
        for (const auto& [k, v] : root.at("parameters").items()) {
            sc.param_names.push_back(k);
            sc.param_values.push_back(v.get<double>());
        }
    }

    const json& metric = need(root, "metric");
    if (!metric.is_array() || static_cast<int>(metric.size()) != sc.dimension)
        schema_error("metric", "expected an n x n grid of expressions");
    std::vector<std::vector<Expr>> grid;
    for (int i = 0; i < sc.dimension; ++i) {
        const json& row = metric.at(static_cast<size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != sc.dimension)
            schema_error("metric", "expected an n x n grid of expressions");
        std::vector<Expr> erow;
        for (int j = 0; j < sc.dimension; ++j) {
            const std::string cell = row.at(static_cast<size_t>(j)).get<std::string>();
            const std::string mirror = metric.at(static_cast<size_t>(j)).at(static_cast<size_t>(i)).get<std::string>();
            if (cell != mirror)
                schema_error("metric", "grid must be textually symmetric (g[" + std::to_string(i) +
                                           "][" + std::to_string(j) + "] differs from its mirror)");
            erow.push_back(parse_field_expr(cell, sc, "metric"));
        }
        grid.push_back(std::move(erow));
    }
    sc.metric = MetricField::from_grid(std::move(grid));

    if (root.contains("connections")) {
        for (const auto& [name, v] : root.at("connections").items())
            sc.connections.emplace_back(name, read_connection(v, sc, name));
        std::sort(sc.connections.begin(), sc.connections.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    if (root.contains("points"))
        for (const auto& p : root.at("points"))
            sc.explicit_points.push_back(read_point(p, sc.dimension, "points"));
    if (root.contains("sampler")) {
        const json& s = root.at("sampler");
        Scenario::Sampler sampler;
        sampler.count = need(s, "count").get<int>();
        sampler.seed = need(s, "seed").get<uint64_t>();
        const json& box = need(s, "box");
        if (!box.is_array() || static_cast<int>(box.size()) != sc.dimension)
            schema_error("sampler.box", "expected one [lo, hi] pair per dimension");
        for (const auto& b : box)
            sampler.box.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
        sc.sampler = sampler;
    }
    if (sc.explicit_points.empty() && !sc.sampler.has_value())
        schema_error("points", "a scenario needs explicit points or a sampler");

    for (const auto& s : need(root, "suites")) {
        const std::string name = s.get<std::string>();
        if (std::find(kKnownSuites.begin(), kKnownSuites.end(), name) == kKnownSuites.end())
            schema_error("suites", "unknown suite '" + name + "'");
        sc.suites.push_back(name);
    }

    if (root.contains("tolerances")) {
        const json& t = root.at("tolerances");
        if (t.contains("exact")) sc.tolerances.exact = t.at("exact").get<double>();
        if (t.contains("differential")) sc.tolerances.differential = t.at("differential").get<double>();
        if (t.contains("quadrature")) sc.tolerances.quadrature = t.at("quadrature").get<double>();
    }

    if (root.contains("suite_config")) {
        const json& c = root.at("suite_config");
        auto read_list = [&](const char* key, std::vector<double>& out) {
            if (!c.contains(key)) return;
            out.clear();
            for (const auto& v : c.at(key)) out.push_back(v.get<double>());
        };
        read_list("combination_t", sc.combination_t);
        read_list("generalized_t", sc.generalized_t);
        read_list("alpha", sc.alphas);
        if (c.contains("expect_involution_gap_above"))
            sc.expect_involution_gap_above = c.at("expect_involution_gap_above").get<double>();
        if (c.contains("both_senses_expect"))
            sc.both_senses_expect = read_expectation(c.at("both_senses_expect"), "both_senses_expect");
        if (c.contains("curvature_dual_expect"))
            sc.curvature_dual_expect =
                read_expectation(c.at("curvature_dual_expect"), "curvature_dual_expect");
        if (c.contains("fields")) {
            const json& f = c.at("fields");
            if (f.contains("f"))
                sc.fields.f = parse_field_expr(f.at("f").get<std::string>(), sc, "suite_config.fields.f");
            if (f.contains("X")) sc.fields.X = read_vector_field(f.at("X"), sc, "suite_config.fields.X");
            if (f.contains("Y")) sc.fields.Y = read_vector_field(f.at("Y"), sc, "suite_config.fields.Y");
            if (f.contains("Z")) sc.fields.Z = read_vector_field(f.at("Z"), sc, "suite_config.fields.Z");
        }
        if (c.contains("pairs")) {
            for (const auto& p : c.at("pairs")) {
                if (!p.is_array() || p.size() != 2) schema_error("suite_config.pairs", "expected [a, b] pairs");
                sc.pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
            }
        }
    }

    if (root.contains("transports")) {
        for (const auto& t : root.at("transports")) {
            Scenario::TransportEntry e;
            e.point = read_point(need(t, "point"), sc.dimension, "transports.point");
            e.u = read_point(need(t, "u"), sc.dimension, "transports.u");
            e.u_tilde = read_point(need(t, "u_tilde"), sc.dimension, "transports.u_tilde");
            e.delta_lambda = need(t, "delta_lambda").get<double>();
            if (!(e.delta_lambda > 0.0)) schema_error("transports.delta_lambda", "must be positive");
            e.conn_a = need_string(t, "conn_a");
            e.conn_b = need_string(t, "conn_b");
            if (t.contains("expect")) e.expect = read_expectation(t.at("expect"), "transports.expect");
            sc.transports.push_back(std::move(e));
        }
    }

    if (root.contains("families")) {
        for (const auto& [name, v] : root.at("families").items()) {
            Scenario::FamilyEntry entry;
            entry.family = read_family(v, sc, name);
            entry.builtin_gaussian = v.contains("builtin");
            for (const auto& p : need(v, "at"))
                entry.at.push_back(read_point(p, entry.family.m, ("families." + name + ".at").c_str()));
            sc.families.emplace_back(name, std::move(entry));
        }
        std::sort(sc.families.begin(), sc.families.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::SchemaError, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

} // namespace geoduel
