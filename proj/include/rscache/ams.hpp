#pragma once

#include <cstdint>
#include <vector>

#include "rscache/graph.hpp"
#include "rscache/rational.hpp"

namespace rscache {

/// Default ceiling on generated vertex counts: C^n grows fast and the edge
/// kernel is quadratic in it.
inline constexpr std::uint64_t kDefaultVertexBudget = 5000;

/// Parameters of the distance-threshold construction on [0,C)^n. Strict
/// mode requires C >= 2, n even and n >= 2C; `relaxed` records that the
/// caller waived those constraints.
struct AmsParams {
    std::uint32_t alphabet = 2;  // C
    std::uint32_t dimension = 2; // n
    bool relaxed = false;

    /// Validates and builds. With relax = false the structural constraints
    /// above are enforced; with relax = true only C >= 1, n >= 1 are, and
    /// the result carries relaxed = true.
    static AmsParams make(std::uint32_t alphabet, std::uint32_t dimension, bool relax = false);

    /// K = C^n, computed exactly; throws std::overflow_error past 2^64.
    std::uint64_t vertex_count() const;

    /// Mean squared distance of two uniform tuples: n (C^2 - 1) / 6.
    Rational mu() const;
};

/// Closed form n (C^2 - 1) / 6 for the expected squared distance between
/// two uniform tuples of [0,C)^n.
Rational mu_expected_sq_distance(std::uint32_t alphabet, std::uint32_t dimension);

/// Graph on K = C^n vertices; vertex index is the mixed-radix encoding of
/// the tuple (most-significant coordinate first) and {u,v} is an edge iff
/// |6 d2(u,v) - n (C^2 - 1)| < 6n, decided in exact integer arithmetic.
/// OpenMP-parallel over vertex rows; output equals the serial reference.
Graph ams_graph(const AmsParams& params, std::uint64_t vertex_budget = kDefaultVertexBudget);

namespace reference {
/// Naive double-loop construction kept as the comparison oracle for the
/// parallel kernel.
Graph ams_graph_serial(const AmsParams& params, std::uint64_t vertex_budget = kDefaultVertexBudget);
} // namespace reference

/// Hoeffding lower bound on every vertex degree: K (1 - 2 K^{-1/(2 C^4 ln C)}).
/// Negative at desk scale; callers clamp at 0 when asserting.
double ams_min_degree_bound(const AmsParams& params);

/// Companion upper bound on per-vertex non-neighbor count (self pair
/// included): 2 K^{1 - 1/(2 C^4 ln C)} = 2 K exp(-n / (2 C^4)). Vacuous
/// whenever it exceeds K.
double ams_non_neighbor_bound(const AmsParams& params);

/// Asymptotic exponents of the construction with the vanishing terms
/// dropped: t <= K^f induced matchings and <= K^g missing edges, where
/// f = 1 + 2 ln(10.5) / ln(C) and g = 2 - 1 / (2 C^4 ln C).
struct AmsExponents {
    double matching_exponent;     // f
    double missing_edge_exponent; // g
};
AmsExponents ams_exponents(std::uint32_t alphabet);

/// Feasible-parameter plan for a target rate exponent delta (R = K^delta):
/// alphabet C = ceil(10.5^(2/delta)), minimum even dimension n = 2C, and
/// the cache-ratio exponent epsilon = 1 / (2 C^4 ln C), so that
/// M/N >= 2 K^{-epsilon} suffices. K itself overflows anything fixed-width
/// for interesting delta, so the plan reports ln K.
struct PlannerResult {
    double delta = 0;
    std::uint64_t alphabet = 0;    // C
    std::uint64_t min_dimension = 0; // n_min, always even
    double ln_k = 0;               // n_min * ln C
    double epsilon = 0;            // > 0
    double mn_lower_bound_ln = 0;  // ln 2 - epsilon * ln K
};

/// epsilon(delta) also factors as c1 * delta * exp(-c2 / delta) with
/// c1 = 1 / (4 ln 10.5) and c2 = 8 ln 10.5, obtained by substituting
/// ln C = 2 ln(10.5) / delta into 1 / (2 C^4 ln C). Agreement with the
/// direct formula is approximate only because C is rounded up.
inline constexpr double kEpsilonScaleC1 = 0.10632075813436143;
inline constexpr double kEpsilonDecayC2 = 18.81100205730782;

/// Accepts delta in (0, 1]; delta = 1 stands for the boundary value.
/// Throws std::invalid_argument outside that range and std::overflow_error
/// when C exceeds 64 bits (delta below roughly 0.107).
PlannerResult plan_parameters(double delta);

/// Tuple <-> index helpers for the mixed-radix vertex encoding.
std::vector<std::uint16_t> decode_tuple(std::uint64_t index, std::uint32_t alphabet,
                                        std::uint32_t dimension);
std::uint64_t encode_tuple(const std::vector<std::uint16_t>& tuple, std::uint32_t alphabet);

} // namespace rscache
