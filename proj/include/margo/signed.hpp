#pragma once

// The unrestricted marginal problem: a family of prescribed marginals has a
// signed joint measure iff any two members agree on their shared coordinates.

#include "margo/error.hpp"
#include "margo/measure.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace margo {

struct Member {
  CoordSet coords;
  Measure measure;
};

/// Prescribed marginals nu_T for T in a family of coordinate subsets of an index set.
class MarginalFamily {
 public:
  MarginalFamily(ProductSpace index_set, std::vector<Member> members);

  /// The joint space over all coordinates.
  const ProductSpace& index_set() const { return index_set_; }
  const std::vector<Member>& members() const { return members_; }
  const Member& member(std::size_t i) const { return members_.at(i); }
  std::size_t size() const { return members_.size(); }
  std::vector<CoordSet> coord_sets() const;

 private:
  ProductSpace index_set_;
  std::vector<Member> members_;
};

struct Violation {
  std::size_t first = 0;
  std::size_t second = 0;
  CoordSet overlap;
  /// First atom of the overlap space where the two marginals differ.
  std::size_t atom = 0;
  std::string atom_label;
  Rational first_mass;
  Rational second_mass;
};

class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, std::vector<Violation> violations)
      : Error(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// One entry per inconsistent pair; empty means pairwise consistent.
std::vector<Violation> check_pairwise_consistency(const MarginalFamily& family);

/// nu_{cap S} for a nonempty selection S of member indices.
/// Throws ConsistencyError if the family is not pairwise consistent.
Measure common_marginal(const MarginalFamily& family, std::span<const std::size_t> selection);

struct SignedOptions {
  /// Strictly positive probability measure per coordinate; uniform when absent.
  std::map<Coord, Measure> references;
  /// Families larger than this are rejected (the sum has 2^|family| - 1 terms).
  std::size_t max_members = 16;
};

/// Signed joint measure with every prescribed marginal, built by
/// inclusion-exclusion over the nonempty subfamilies.
Measure solve_signed(const MarginalFamily& family, const SignedOptions& options = {});

}  // namespace margo
