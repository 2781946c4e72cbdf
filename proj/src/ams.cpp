#include "rscache/ams.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rscache {

AmsParams AmsParams::make(std::uint32_t alphabet, std::uint32_t dimension, bool relax) {
    if (alphabet < 1) throw std::invalid_argument("ams: alphabet size must be >= 1");
    if (dimension < 1) throw std::invalid_argument("ams: dimension must be >= 1");
    if (dimension > 100000) throw std::invalid_argument("ams: dimension too large");
    if (!relax) {
        if (alphabet < 2)
            throw std::invalid_argument("ams: alphabet size must be >= 2 (pass relax to override)");
        if (dimension % 2 != 0)
            throw std::invalid_argument("ams: dimension must be even (pass relax to override)");
        if (dimension < 2 * alphabet)
            throw std::invalid_argument("ams: dimension must be >= 2*alphabet (pass relax to override)");
    }
    return AmsParams{alphabet, dimension, relax};
}

std::uint64_t AmsParams::vertex_count() const {
    std::uint64_t k = 1;
    for (std::uint32_t i = 0; i < dimension; ++i) {
        if (alphabet != 0 && k > std::numeric_limits<std::uint64_t>::max() / alphabet)
            throw std::overflow_error("ams: C^n exceeds 64 bits");
        k *= alphabet;
    }
    return k;
}

Rational AmsParams::mu() const { return mu_expected_sq_distance(alphabet, dimension); }

Rational mu_expected_sq_distance(std::uint32_t alphabet, std::uint32_t dimension) {
    if (alphabet < 1 || dimension < 1)
        throw std::invalid_argument("mu: alphabet and dimension must be >= 1");
    const std::int64_t c = alphabet;
    return Rational(static_cast<std::int64_t>(dimension) * (c * c - 1), 6);
}

namespace {

struct AmsKernel {
    std::uint32_t alphabet;
    std::uint32_t dimension;
    std::uint32_t vertex_count;
    std::vector<std::uint16_t> coords; // vertex-major, dimension entries each
    std::int64_t center;               // n (C^2 - 1), i.e. 6 mu
    std::int64_t window;               // 6 n

    AmsKernel(const AmsParams& params, std::uint64_t vertex_budget) {
        std::uint64_t k = params.vertex_count();
        if (k > vertex_budget || k > std::numeric_limits<std::uint32_t>::max())
            throw std::length_error("ams: K = " + std::to_string(k) +
                                    " exceeds the vertex budget of " + std::to_string(vertex_budget));
        alphabet = params.alphabet;
        dimension = params.dimension;
        vertex_count = static_cast<std::uint32_t>(k);
        coords.resize(static_cast<std::size_t>(k) * dimension);
        for (std::uint64_t v = 0; v < k; ++v) {
            auto tuple = decode_tuple(v, alphabet, dimension);
            std::copy(tuple.begin(), tuple.end(), coords.begin() + static_cast<std::ptrdiff_t>(v * dimension));
        }
        const std::int64_t c = alphabet;
        center = static_cast<std::int64_t>(dimension) * (c * c - 1);
        window = 6 * static_cast<std::int64_t>(dimension);
    }

    bool edge(std::uint32_t u, std::uint32_t v) const {
        const std::uint16_t* a = coords.data() + static_cast<std::size_t>(u) * dimension;
        const std::uint16_t* b = coords.data() + static_cast<std::size_t>(v) * dimension;
        std::int64_t d2 = 0;
        for (std::uint32_t i = 0; i < dimension; ++i) {
            std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
            d2 += d * d;
        }
        std::int64_t gap = 6 * d2 - center;
        if (gap < 0) gap = -gap;
        return gap < window;
    }
};

} // namespace

Graph ams_graph(const AmsParams& params, std::uint64_t vertex_budget) {
    AmsKernel kernel(params, vertex_budget);
    const std::uint32_t k = kernel.vertex_count;

    // Two passes keep the result identical to the serial loop regardless of
    // thread count: count each row, prefix-sum, then fill disjoint ranges.
    std::vector<std::size_t> row_count(k, 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(k); ++u) {
        std::size_t count = 0;
        for (std::uint32_t v = static_cast<std::uint32_t>(u) + 1; v < k; ++v)
            if (kernel.edge(static_cast<std::uint32_t>(u), v)) ++count;
        row_count[static_cast<std::size_t>(u)] = count;
    }
    std::vector<std::size_t> offsets(static_cast<std::size_t>(k) + 1, 0);
    for (std::uint32_t u = 0; u < k; ++u) offsets[u + 1] = offsets[u] + row_count[u];

    std::vector<Edge> edges(offsets[k]);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(k); ++u) {
        std::size_t at = offsets[static_cast<std::size_t>(u)];
        for (std::uint32_t v = static_cast<std::uint32_t>(u) + 1; v < k; ++v)
            if (kernel.edge(static_cast<std::uint32_t>(u), v))
                edges[at++] = Edge(static_cast<VertexId>(u), v);
    }

    GraphBuilder builder(k);
    builder.reserve(edges.size());
    for (const Edge& e : edges) builder.add_edge(e.u, e.v);
    return std::move(builder).freeze();
}

namespace reference {

Graph ams_graph_serial(const AmsParams& params, std::uint64_t vertex_budget) {
    AmsKernel kernel(params, vertex_budget);
    GraphBuilder builder(kernel.vertex_count);
    for (std::uint32_t u = 0; u < kernel.vertex_count; ++u)
        for (std::uint32_t v = u + 1; v < kernel.vertex_count; ++v)
            if (kernel.edge(u, v)) builder.add_edge(u, v);
    return std::move(builder).freeze();
}

} // namespace reference

double ams_min_degree_bound(const AmsParams& params) {
    if (params.alphabet < 2)
        throw std::invalid_argument("ams_min_degree_bound: alphabet must be >= 2");
    const double k = std::pow(static_cast<double>(params.alphabet), params.dimension);
    const double c = params.alphabet;
    const double exponent = 1.0 / (2.0 * c * c * c * c * std::log(c));
    return k * (1.0 - 2.0 * std::pow(k, -exponent));
}

double ams_non_neighbor_bound(const AmsParams& params) {
    if (params.alphabet < 2)
        throw std::invalid_argument("ams_non_neighbor_bound: alphabet must be >= 2");
    const double k = std::pow(static_cast<double>(params.alphabet), params.dimension);
    const double c = params.alphabet;
    return 2.0 * k * std::exp(-static_cast<double>(params.dimension) / (2.0 * c * c * c * c));
}

AmsExponents ams_exponents(std::uint32_t alphabet) {
    if (alphabet < 2) throw std::invalid_argument("ams_exponents: alphabet must be >= 2");
    const double c = alphabet;
    const double ln_c = std::log(c);
    return {1.0 + 2.0 * std::log(10.5) / ln_c, 2.0 - 1.0 / (2.0 * c * c * c * c * ln_c)};
}

PlannerResult plan_parameters(double delta) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("plan_parameters: delta must lie in (0, 1]");
    const long double target = std::pow(10.5L, 2.0L / static_cast<long double>(delta));
    if (target > static_cast<long double>(std::numeric_limits<std::uint64_t>::max()) / 2)
        throw std::overflow_error("plan_parameters: alphabet exceeds 64-bit range at this delta");
    const std::uint64_t c = static_cast<std::uint64_t>(std::ceil(target));

    PlannerResult result;
    result.delta = delta;
    result.alphabet = c;
    result.min_dimension = 2 * c; // smallest even integer >= 2C
    const long double ln_c = std::log(static_cast<long double>(c));
    const long double c4 = static_cast<long double>(c) * c * c * c;
    result.ln_k = static_cast<double>(static_cast<long double>(result.min_dimension) * ln_c);
    result.epsilon = static_cast<double>(1.0L / (2.0L * c4 * ln_c));
    result.mn_lower_bound_ln = static_cast<double>(std::log(2.0L) - static_cast<long double>(result.epsilon) *
                                                                        static_cast<long double>(result.ln_k));
    return result;
}

std::vector<std::uint16_t> decode_tuple(std::uint64_t index, std::uint32_t alphabet,
                                        std::uint32_t dimension) {
    std::vector<std::uint16_t> tuple(dimension, 0);
    for (std::uint32_t i = dimension; i-- > 0;) {
        tuple[i] = static_cast<std::uint16_t>(index % alphabet);
        index /= alphabet;
    }
    return tuple;
}

std::uint64_t encode_tuple(const std::vector<std::uint16_t>& tuple, std::uint32_t alphabet) {
    std::uint64_t index = 0;
    for (std::uint16_t digit : tuple) index = index * alphabet + digit;
    return index;
}

} // namespace rscache
