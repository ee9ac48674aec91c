#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoduel/connection.hpp"
#include "geoduel/infogeo.hpp"
#include "geoduel/metric.hpp"

namespace geoduel {

// Declarative verification input. Serialized as UTF-8 JSON with a top-level
// "schema": 1; see the README for the full field reference. Identical
// scenario bytes and seed produce byte-identical reports.
struct Scenario {
    struct Sampler {
        int count = 0;
        uint64_t seed = 0;
        std::vector<std::pair<double, double>> box;
    };

    struct Tolerances {
        double exact = 1e-12;
        double differential = 1e-9;
        double quadrature = 1e-8;
    };

    struct Fields {
        std::optional<Expr> f;
        std::optional<VectorFieldSpec> X, Y, Z;
    };

    enum class Expectation { Report, Zero, Nonzero };

    struct TransportEntry {
        std::vector<double> point;
        std::vector<double> u;
        std::vector<double> u_tilde;
        double delta_lambda = 1.0;
        std::string conn_a;
        std::string conn_b;
        Expectation expect = Expectation::Report;
    };

    struct FamilyEntry {
        infogeo::ParametricFamily family;
        bool builtin_gaussian = false;
        std::vector<std::vector<double>> at; // parameter points
    };

    std::string name;
    int dimension = 0;
    std::vector<std::string> coordinates;
    std::vector<std::string> param_names; // sorted scenario constants
    std::vector<double> param_values;
    MetricField metric;
    std::vector<std::pair<std::string, ConnectionField>> connections; // sorted by name
    std::vector<std::vector<double>> explicit_points;
    std::optional<Sampler> sampler;
    std::vector<std::string> suites;
    Tolerances tolerances;

    // suite configuration
    std::vector<double> combination_t{0.3, 0.5};
    std::vector<double> generalized_t{0.25, 0.5};
    std::vector<double> alphas{0.3, 1.0, 2.5};
    std::optional<double> expect_involution_gap_above;
    Expectation both_senses_expect = Expectation::Report;
    Expectation curvature_dual_expect = Expectation::Report;
    Fields fields;
    std::vector<std::pair<std::string, std::string>> pairs; // connection pairs
    std::vector<TransportEntry> transports;
    std::vector<std::pair<std::string, FamilyEntry>> families;

    // Resolved points (explicit + sampled), in order.
    std::vector<std::vector<double>> resolve_points() const;

    const ConnectionField* find_connection(const std::string& name) const;
    std::vector<std::string> connection_names() const;
};

// Parses and validates a scenario file; throws SchemaError with the field
// and reason on malformed input.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_json(const std::string& text);

} // namespace geoduel
