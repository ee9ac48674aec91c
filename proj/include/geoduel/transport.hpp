#pragma once

#include "geoduel/connection.hpp"

namespace geoduel::transport {

// First-order parallel transport: v'^i = v^i - Gamma^i_jk v^j dir^k, with
// the step length absorbed into `direction`.
std::vector<double> first_order_transport(const ConnectionJets& cj, std::span<const double> v,
                                          std::span<const double> direction);

// Pentagon deviation of the two-connection parallelogram: transports each
// tangent vector along the other (u with conn_a, u_tilde with conn_b) and
// returns the gap V^i * delta_lambda with
//   V^i = (Gamma^(a)i_jk - Gamma^(b)i_kj) utilde^j u^k.
// For conn_a = conn_b this contracts the torsion: V^i = T^i_kj utilde^j u^k.
std::vector<double> parallelogram_gap(const ConnectionJets& conn_a, const ConnectionJets& conn_b,
                                      std::span<const double> u, std::span<const double> u_tilde,
                                      double delta_lambda);

} // namespace geoduel::transport
