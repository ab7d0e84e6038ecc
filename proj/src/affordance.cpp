#include "acbr/affordance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acbr/error.hpp"

namespace acbr {

affordance_vector::affordance_vector(std::vector<double> values) : m_values(std::move(values))
{
    for (double v : m_values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("affordance values must be finite and non-negative");
        }
    }
}

double affordance_vector::norm() const
{
    double sum = 0.0;
    for (double v : m_values) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

bool affordance_vector::is_zero() const
{
    return std::all_of(m_values.begin(), m_values.end(), [](double v) { return v == 0.0; });
}

affordance_vector compute_block_affordance(std::span<std::string const> tokens, lexicon const& lex)
{
    auto counts = lex.match_counts(tokens);
    return affordance_vector(std::vector<double>(counts.begin(), counts.end()));
}

affordance_vector compute_doc_affordance(std::span<affordance_vector const> block_avs, std::size_t m)
{
    std::vector<double> sum(m, 0.0);
    for (auto const& av : block_avs) {
        if (av.size() != m) {
            throw dimension_error("block affordance has dimension " + std::to_string(av.size())
                                  + ", expected " + std::to_string(m));
        }
        for (std::size_t i = 0; i < m; ++i) {
            sum[i] += av[i];
        }
    }
    return affordance_vector(std::move(sum));
}

affordance_vector compute_query_affordance(std::span<std::string const> tokens, lexicon const& lex)
{
    return compute_block_affordance(tokens, lex);
}

affordance_vector normalize_av(affordance_vector const& av)
{
    double len = av.norm();
    if (len == 0.0) {
        return av;
    }
    std::vector<double> out(av.values());
    for (double& v : out) {
        v /= len;
    }
    return affordance_vector(std::move(out));
}

double cosine_sim(affordance_vector const& a, affordance_vector const& b)
{
    if (a.size() != b.size()) {
        throw dimension_error("cosine of vectors with dimensions " + std::to_string(a.size())
                              + " and " + std::to_string(b.size()));
    }
    auto na = normalize_av(a);
    auto nb = normalize_av(b);
    double dot = 0.0;
    for (std::size_t i = 0; i < na.size(); ++i) {
        dot += na[i] * nb[i];
    }
    return std::clamp(dot, 0.0, 1.0);
}

}  // namespace acbr
