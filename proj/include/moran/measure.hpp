#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moran/construction.hpp"
#include "moran/dimension.hpp"

namespace moran {

/// Per-level probability vectors on the digit sets, stored exactly and
/// extended periodically with the construction. Entries are aligned with
/// the (sorted) digits of each stored level.
class ProbAssignment {
 public:
  ProbAssignment(const Construction& c, std::vector<std::vector<Rational>> per_level);

  /// p_k(w) = 1/r_k on every level.
  static ProbAssignment uniform(const Construction& c);

  /// Probabilities for level k (1-indexed, periodically extended).
  std::span<const Rational> at(const Construction& c, int k) const;
  std::span<const Rational> stored(int index) const;
  int stored_count() const { return static_cast<int>(probs_.size()); }

  friend bool operator==(const ProbAssignment&, const ProbAssignment&) = default;

 private:
  std::vector<std::vector<Rational>> probs_;
};

/// Row marginal q(j) and column marginal qhat(i) of one level's vector.
struct Marginals {
  std::map<int, Rational> q;
  std::map<int, Rational> qhat;
};

Marginals marginals(std::span<const Rational> probs, const Level& level);

/// Constraint tuple of one depth-k approximate square: the first l column
/// digits and the first k row digits, with l = l(k).
struct ApproxSquare {
  int k = 0;
  int l = 0;
  std::vector<int> i_prefix;
  std::vector<int> j_prefix;

  friend auto operator<=>(const ApproxSquare&, const ApproxSquare&) = default;
};

/// Product of p_h(word[h]) over the word's levels.
Rational cylinder_mass(const Construction& c, const ProbAssignment& p,
                       std::span<const Digit> word);

/// Mass of an approximate square from the per-level vectors and marginals.
Rational approx_square_mass(const Construction& c, const ProbAssignment& p,
                            const ApproxSquare& sq);

/// Every depth-k approximate square with its mass, in lexicographic order of
/// the constraint tuple. Refuses when the count exceeds `guard`.
std::vector<std::pair<ApproxSquare, Rational>> enumerate_squares(
    const Construction& c, const ProbAssignment& p, int k, std::uint64_t guard = 10'000'000);

struct EntropyRecord {
  int k = 0;
  double entropy = 0.0;  // nats, nonnegative
  double ratio = 0.0;    // entropy / log(m_1...m_k)
};

/// Shannon entropy of the depth-k approximate-square masses, computed per level.
EntropyRecord entropy_k(const Construction& c, const ProbAssignment& p, int k);

/// Entropy ratio sequence for k = 1..window under the shared tail protocol.
TailEstimate entropy_dimensions(const Construction& c, const ProbAssignment& p, int window);

struct FscResult {
  bool holds = false;
  Rational frequency;  // fraction of centred levels over one period
};

struct BscResult {
  bool holds = false;
  Rational left, right, bottom, top;
};

struct MscResult {
  bool holds = false;
  Rational max_boundary_marginal;
};

FscResult check_fsc(const Construction& c);
BscResult check_bsc(const Construction& c);
MscResult check_msc(const Construction& c, const ProbAssignment& p);

struct MeasureDimensions {
  double hausdorff = 0.0;
  double packing = 0.0;
  TailEstimate entropy;
  FscResult fsc;
  BscResult bsc;
  MscResult msc;
  /// True when FSC, BSC or MSC holds, so the liminf/limsup formulas are
  /// theorems rather than formula values with unmet hypotheses.
  bool unconditional = false;
  /// p is the uniform fiber measure of a construction with constant row
  /// counts and n >= m everywhere; then the values are the set's dimensions.
  bool set_dimension_path = false;
};

MeasureDimensions hausdorff_packing_dims(const Construction& c, const ProbAssignment& p,
                                         int window);

/// p_k(w) = 1/r_k when every occupied row of every level has the same count
/// and n_k >= m_k.
ProbAssignment uniform_fiber_measure(const Construction& c);

/// Exact limit of H_k / log(m_1...m_k) for the periodic tail.
double entropy_limit(const Construction& c, const ProbAssignment& p);

}  // namespace moran
