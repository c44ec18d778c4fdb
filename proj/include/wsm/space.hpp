#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wsm/multi_index.hpp"
#include "wsm/scalar.hpp"

namespace wsm {

enum class SpaceKind { drury_arveson, hardy_ball, bergman_ball, polydisk_hardy, custom };

std::string to_string(SpaceKind kind);
// Accepts the canonical names plus "da" for drury-arveson.
SpaceKind parse_space_kind(const std::string& name);

using WeightFunction = std::function<Rational(const MultiIndex&)>;

// Weighted shift Hilbert module on C[z_1..z_m]: monomials are orthogonal and
// omega(alpha) = ||z^alpha||^2 > 0 determines everything. Copies share one
// immutable model and its weight cache.
class WeightedShiftSpace {
 public:
  class Model;

  explicit WeightedShiftSpace(std::shared_ptr<const Model> model) : model_(std::move(model)) {}

  [[nodiscard]] std::size_t arity() const noexcept;
  [[nodiscard]] SpaceKind kind() const noexcept;
  [[nodiscard]] const std::string& name() const noexcept;
  [[nodiscard]] const std::map<std::string, std::string>& params() const noexcept;

  // ||z^alpha||^2; memoized, throws nonpositive_weight if the model yields <= 0.
  [[nodiscard]] Rational weight(const MultiIndex& alpha) const;
  // omega(alpha + e_i) / omega(alpha) = ||z_i z^alpha||^2 / ||z^alpha||^2 (i is 0-based).
  [[nodiscard]] Rational shift_ratio(const MultiIndex& alpha, std::size_t i) const;
  // 1 - sum_i shift_ratio(alpha, i); closed form for the built-in models.
  [[nodiscard]] Rational defect_diagonal(const MultiIndex& alpha) const;

 private:
  std::shared_ptr<const Model> model_;
};

// params: polydisk-hardy takes "c2" (squared scale of the tuple, default 1).
WeightedShiftSpace builtin_space(SpaceKind kind, std::size_t m,
                                 const std::map<std::string, std::string>& params = {});

// Custom module from a closed-form weight; positivity is checked lazily per index.
WeightedShiftSpace custom_space(std::size_t m, WeightFunction weight, std::string name = "custom",
                                std::map<std::string, std::string> params = {});

// Custom module from a finite table; indices outside the table are a window error.
WeightedShiftSpace custom_space(std::size_t m, const std::map<MultiIndex, Rational>& table,
                                std::string name = "custom");

// Eigenvalue of I - sum_i M_{z_i}^* M_{z_i} at z^alpha: 1 - sum_i shift_ratio(alpha, i).
Rational spherical_defect_diagonal(const WeightedShiftSpace& space, const MultiIndex& alpha);

// The piece H^n(alpha) as a module in its own right: weight beta -> omega(alpha + n (.) beta).
WeightedShiftSpace weighted_piece(const WeightedShiftSpace& space, const WeightVector& n,
                                  const MultiIndex& residue);

struct PartitionReport {
  std::vector<std::pair<MultiIndex, std::uint64_t>> class_sizes;
  std::uint64_t total = 0;
  std::uint64_t expected_total = 0;
  bool balanced = false;
};

// Counts monomials of degree <= max_degree per residue class mod n.
PartitionReport piece_partition_check(const WeightedShiftSpace& space, const WeightVector& n,
                                      std::uint32_t max_degree);

}  // namespace wsm
