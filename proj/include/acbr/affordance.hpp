#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "acbr/lexicon.hpp"

namespace acbr {

/// Non-negative topic scores, element i aligned with lexicon topic i.
class affordance_vector {
  public:
    affordance_vector() = default;
    /// Zero vector of dimension m.
    explicit affordance_vector(std::size_t m) : m_values(m, 0.0) {}
    /// Throws std::invalid_argument on negative or non-finite values.
    explicit affordance_vector(std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return m_values.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return m_values[i]; }
    [[nodiscard]] std::vector<double> const& values() const { return m_values; }
    [[nodiscard]] double norm() const;
    [[nodiscard]] bool is_zero() const;

    bool operator==(affordance_vector const&) const = default;

  private:
    std::vector<double> m_values;
};

[[nodiscard]] affordance_vector
compute_block_affordance(std::span<std::string const> tokens, lexicon const& lex);

/// Element-wise sum; all inputs must have dimension m (dimension_error otherwise).
[[nodiscard]] affordance_vector
compute_doc_affordance(std::span<affordance_vector const> block_avs, std::size_t m);

/// Same counting rule as blocks, applied to query tokens.
[[nodiscard]] affordance_vector
compute_query_affordance(std::span<std::string const> tokens, lexicon const& lex);

/// L2 normalization. The zero vector maps to itself.
[[nodiscard]] affordance_vector normalize_av(affordance_vector const& av);

/// Dot product of the normalized vectors, in [0, 1]; 0 if either is zero.
[[nodiscard]] double cosine_sim(affordance_vector const& a, affordance_vector const& b);

}  // namespace acbr
