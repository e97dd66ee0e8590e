#ifndef MORSE_OBSTRUCTION_HPP
#define MORSE_OBSTRUCTION_HPP

// The diagonal product does not descend to cobordism classes: stabilizing
// f' by cancelling handle pairs keeps its class fixed, yet the top phi of
// the diagonal product with f moves by phi_m(f) per step.

#include <string>
#include <vector>

#include "morse/algebra.hpp"

namespace morse::obstruction {

struct ObstructionRow {
  Count k = 0;
  IndexCountVector family_counts;        // critical data of f_k
  CobordismInvariant family_invariant;   // class of f_k
  Count product_phi_top = 0;             // phi_{m+m'} of the diagonal product f'_k
  CobordismInvariant product_invariant;  // class of f'_k
};

/// [stabilize(d_prime, k, mode) for k = 0..K].
std::vector<MorseDescriptor> build_family(const MorseDescriptor& d_prime, Count K,
                                          ExtraMiddlePair mode = ExtraMiddlePair::Auto);

/// C_m(f) C_{m'}(f_k) - C_0(f) C_0(f_k).
Count top_phi_closed_form(const MorseDescriptor& f, const MorseDescriptor& f_k);

/// One row per family member. The top phi is computed from the closed form
/// and from the full convolution; a disagreement throws std::logic_error.
std::vector<ObstructionRow> obstruction_table(const MorseDescriptor& d,
                                              const MorseDescriptor& d_prime, Count K,
                                              ExtraMiddlePair mode = ExtraMiddlePair::Auto);

struct Check {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::string detail;
  /// Offending k values (pairs are listed consecutively) on failure.
  std::vector<Count> counterexample_ks;
};

/// Per-row verdicts, aligned with Theorem4Report::rows.
struct RowFlags {
  bool family_match = true;      // same family invariant as row 0
  bool product_distinct = true;  // product invariant differs from every other row
  bool step_ok = true;           // step from the previous row obeys the law (row 0: true)
};

struct Theorem4Report {
  std::vector<ObstructionRow> rows;
  std::vector<RowFlags> row_flags;
  Count phi_top_of_f = 0;  // phi_m(f), the per-step increment
  /// Increment e of the k=0 -> 1 step: that step moves by phi_m(f) (1 + e).
  int first_step_extra = 0;
  Count first_step = 0;          // product_phi_top(1) - product_phi_top(0)
  std::vector<Count> later_steps;  // product_phi_top(k+1) - product_phi_top(k), k >= 1
  Check family_constant;
  Check products_distinct;   // applicable when phi_m(f) != 0
  Check top_column_constant; // applicable when phi_m(f) == 0
  Check row_difference_law;
  /// Informational: the whole product-invariant column is constant.
  bool product_column_constant = false;

  bool passed() const;
  std::vector<const Check*> checks() const;
};

/// Builds the table and checks that the family has one class while the
/// diagonal products separate (or, when phi_m(f) = 0, stay put). K >= 1.
Theorem4Report verify_theorem4(const MorseDescriptor& d, const MorseDescriptor& d_prime, Count K,
                               ExtraMiddlePair mode = ExtraMiddlePair::Auto);

}  // namespace morse::obstruction

#endif  // MORSE_OBSTRUCTION_HPP
