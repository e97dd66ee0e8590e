#ifndef MORSE_ALGEBRA_HPP
#define MORSE_ALGEBRA_HPP

// Exact integer model of Morse functions up to the data that classifies
// them in the (oriented) cobordism groups of Morse functions.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace morse {

using Count = std::int64_t;

/// Raised when an operation is called outside its domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (C_0(f), ..., C_m(f)): number of critical points of each index.
struct IndexCountVector {
  int dimension = 0;
  std::vector<Count> counts;

  static IndexCountVector zeros(int m);

  bool is_empty() const;
  Count total() const;
  Count operator[](int j) const { return counts.at(static_cast<std::size_t>(j)); }

  friend bool operator==(const IndexCountVector&, const IndexCountVector&) = default;
};

/// A formal combination of generator labels standing for a cobordism class
/// [M] in N_m or Omega_m. No relations beyond Z (oriented) or Z/2
/// (unoriented) coefficients are assumed.
///
/// Labels of product classes are '*'-joined sorted factor lists, so the
/// formal product is commutative and associative.
class CobordismToken {
 public:
  using Terms = std::map<std::string, Count>;

  CobordismToken() = default;
  /// Stores `terms` verbatim (zero coefficients dropped).
  explicit CobordismToken(Terms terms);
  static CobordismToken generator(const std::string& label, Count coeff = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Count coefficient(const std::string& label) const;

  /// Reduce coefficients mod 2 (into {0,1}) when `oriented` is false.
  CobordismToken reduced(bool oriented) const;

  CobordismToken plus(const CobordismToken& other, bool oriented) const;
  CobordismToken negated(bool oriented) const;
  CobordismToken times(const CobordismToken& other, bool oriented) const;

  friend bool operator==(const CobordismToken&, const CobordismToken&) = default;

 private:
  Terms terms_;
};

/// Canonical label of the product of two monomial labels.
std::string multiply_labels(const std::string& a, const std::string& b);

struct ManifoldClass {
  int dimension = 0;
  bool oriented = false;
  CobordismToken token;
  /// Rational Betti numbers b_0..b_m; sigma(M) is derived from these.
  std::optional<std::vector<Count>> betti;

  friend bool operator==(const ManifoldClass&, const ManifoldClass&) = default;
};

/// An abstract Morse function: a source manifold plus its critical data.
struct MorseDescriptor {
  ManifoldClass manifold;
  IndexCountVector counts;

  int dimension() const { return counts.dimension; }
  bool oriented() const { return manifold.oriented; }
  /// Empty manifold: all counts zero and zero token.
  bool is_empty() const;

  static MorseDescriptor empty(int m, bool oriented);
  /// Convenience constructor; `counts.size()` fixes the dimension.
  static MorseDescriptor make(std::vector<Count> counts, bool oriented = false,
                              CobordismToken token = {},
                              std::optional<std::vector<Count>> betti = std::nullopt);

  friend bool operator==(const MorseDescriptor&, const MorseDescriptor&) = default;
};

/// Classifying tuple: class token, phi_j for j in [floor((m+3)/2), m], and the
/// Z/2 component for oriented m = 4k+1.
struct CobordismInvariant {
  int dimension = 0;
  bool oriented = false;
  CobordismToken token;
  std::vector<Count> phis;
  std::optional<int> z2;

  /// First index recorded in `phis`.
  static int phi_range_begin(int m) { return (m + 3) / 2; }
  static bool has_z2(int m, bool oriented) { return oriented && m % 4 == 1; }

  /// phi_j for a recorded j; throws PreconditionError outside the range.
  Count phi(int j) const;

  friend bool operator==(const CobordismInvariant&, const CobordismInvariant&) = default;
};

enum class ExtraMiddlePair { Auto, On, Off };

/// Every violated invariant, with a human-readable reason. Empty iff `d`
/// is admissible input to the other operations.
std::vector<std::string> validate(const MorseDescriptor& d);

Count euler_characteristic(const MorseDescriptor& d);

/// C_j - C_{m-j}.
Count phi(const MorseDescriptor& d, int j);

MorseDescriptor disjoint_union(const MorseDescriptor& a, const MorseDescriptor& b);

/// Models f -> -f: index j becomes m - j.
MorseDescriptor negate(const MorseDescriptor& d);

/// Critical data of the diagonal Morse function on M1 x M2: indices add, so
/// counts are the integer convolution. Betti numbers follow Kunneth over Q.
MorseDescriptor diagonal_product(const MorseDescriptor& a, const MorseDescriptor& b);

/// Closed-form phi_{m1+m2-j} of the diagonal product, for m1 <= m2 and
/// 0 <= j < m1:
///   sum_{i<=j} C_{m1-j+i}(f1) C_{m2-i}(f2) - sum_{i<=j} C_i(f1) C_{j-i}(f2).
Count theorem3_phi(const MorseDescriptor& a, const MorseDescriptor& b, int j);

/// sigma(M) = b_0 + ... + b_{2k} for m = 4k+1. Requires betti.
Count sigma(const ManifoldClass& manifold);

CobordismInvariant cobordism_invariant(const MorseDescriptor& d);

bool is_cobordant(const MorseDescriptor& a, const MorseDescriptor& b);

/// Attach k cancelling (j, j+1)-handle pairs for each 0 <= j < m, plus one
/// middle pair (floor(m/2), floor(m/2)+1) when `mode` asks for it (Auto:
/// only when m = 1 mod 4 and k >= 1). The manifold is unchanged.
MorseDescriptor stabilize(const MorseDescriptor& d, Count k,
                          ExtraMiddlePair mode = ExtraMiddlePair::Auto);

/// Whether `stabilize(d, k, mode)` adds the middle pair.
bool middle_pair_fires(int m, Count k, ExtraMiddlePair mode);

}  // namespace morse

#endif  // MORSE_ALGEBRA_HPP
