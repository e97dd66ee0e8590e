#include "morse/obstruction.hpp"

#include <stdexcept>

namespace morse::obstruction {

namespace {

void require_usable(const MorseDescriptor& d, const char* what) {
  auto problems = validate(d);
  if (!problems.empty())
    throw PreconditionError(std::string(what) + " is invalid: " + problems.front());
  if (d.counts.is_empty()) throw PreconditionError(std::string(what) + " must be nonempty");
  if (d.dimension() < 1) throw PreconditionError(std::string(what) + " must have dimension >= 1");
}

}  // namespace

std::vector<MorseDescriptor> build_family(const MorseDescriptor& d_prime, Count K,
                                          ExtraMiddlePair mode) {
  if (K < 0) throw PreconditionError("build_family: K must be non-negative");
  std::vector<MorseDescriptor> family;
  family.reserve(static_cast<std::size_t>(K) + 1);
  for (Count k = 0; k <= K; ++k) family.push_back(stabilize(d_prime, k, mode));
  return family;
}

Count top_phi_closed_form(const MorseDescriptor& f, const MorseDescriptor& f_k) {
  return f.counts[f.dimension()] * f_k.counts[f_k.dimension()] - f.counts[0] * f_k.counts[0];
}

std::vector<ObstructionRow> obstruction_table(const MorseDescriptor& d,
                                              const MorseDescriptor& d_prime, Count K,
                                              ExtraMiddlePair mode) {
  require_usable(d, "obstruction_table: f");
  require_usable(d_prime, "obstruction_table: f'");
  if (d.oriented() != d_prime.oriented())
    throw PreconditionError("obstruction_table: orientation mismatch between f and f'");

  const int top = d.dimension() + d_prime.dimension();
  std::vector<ObstructionRow> rows;
  Count k = 0;
  for (const auto& member : build_family(d_prime, K, mode)) {
    ObstructionRow row;
    row.k = k++;
    row.family_counts = member.counts;
    row.family_invariant = cobordism_invariant(member);

    const MorseDescriptor product = diagonal_product(d, member);
    const Count closed = top_phi_closed_form(d, member);
    const Count convolved = phi(product, top);
    if (closed != convolved)
      throw std::logic_error("obstruction_table: closed-form top phi " + std::to_string(closed) +
                             " disagrees with convolution " + std::to_string(convolved) +
                             " at k = " + std::to_string(row.k));
    row.product_phi_top = closed;
    row.product_invariant = cobordism_invariant(product);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool Theorem4Report::passed() const {
  for (const Check* c : checks())
    if (c->applicable && !c->passed) return false;
  return true;
}

std::vector<const Check*> Theorem4Report::checks() const {
  return {&family_constant, &products_distinct, &top_column_constant, &row_difference_law};
}

Theorem4Report verify_theorem4(const MorseDescriptor& d, const MorseDescriptor& d_prime, Count K,
                               ExtraMiddlePair mode) {
  if (K < 1) throw PreconditionError("verify_theorem4: K must be at least 1");
  Theorem4Report report;
  report.rows = obstruction_table(d, d_prime, K, mode);
  const auto& rows = report.rows;
  report.phi_top_of_f = phi(d, d.dimension());
  report.row_flags.resize(rows.size());

  report.family_constant.name = "family_constant";
  for (const auto& row : rows)
    if (!(row.family_invariant == rows.front().family_invariant)) {
      report.row_flags[static_cast<std::size_t>(row.k)].family_match = false;
      report.family_constant.passed = false;
      report.family_constant.counterexample_ks.insert(report.family_constant.counterexample_ks.end(),
                                                      {rows.front().k, row.k});
    }
  report.family_constant.detail = report.family_constant.passed
                                      ? "all family members share one cobordism invariant"
                                      : "family invariant changes along the family";

  report.products_distinct.name = "products_distinct";
  report.products_distinct.applicable = report.phi_top_of_f != 0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      if (rows[a].product_invariant == rows[b].product_invariant) {
        report.row_flags[a].product_distinct = false;
        report.row_flags[b].product_distinct = false;
        report.products_distinct.passed = false;
        report.products_distinct.counterexample_ks.insert(
            report.products_distinct.counterexample_ks.end(), {rows[a].k, rows[b].k});
      }
  report.products_distinct.detail = report.products_distinct.passed
                                        ? "diagonal products lie in pairwise distinct classes"
                                        : "some diagonal products share a class";

  report.top_column_constant.name = "top_column_constant";
  report.top_column_constant.applicable = report.phi_top_of_f == 0;
  for (const auto& row : rows)
    if (row.product_phi_top != rows.front().product_phi_top) {
      report.top_column_constant.passed = false;
      report.top_column_constant.counterexample_ks.insert(
          report.top_column_constant.counterexample_ks.end(), {rows.front().k, row.k});
    }
  report.top_column_constant.detail = report.top_column_constant.passed
                                          ? "top phi of the diagonal product is constant"
                                          : "top phi of the diagonal product varies";

  report.product_column_constant = true;
  for (const auto& row : rows)
    if (!(row.product_invariant == rows.front().product_invariant))
      report.product_column_constant = false;

  // The middle pair of an m' = 1 family sits at indices 0 and 1, so it moves
  // C_0 and C_{m'} together on the step where it first appears.
  const int mp = d_prime.dimension();
  const bool first_step_gains_pair =
      middle_pair_fires(mp, 1, mode) && !middle_pair_fires(mp, 0, mode);
  report.first_step_extra = (first_step_gains_pair && mp == 1) ? 1 : 0;

  report.row_difference_law.name = "row_difference_law";
  report.first_step = rows[1].product_phi_top - rows[0].product_phi_top;
  if (report.first_step != report.phi_top_of_f * (1 + report.first_step_extra)) {
    report.row_flags[1].step_ok = false;
    report.row_difference_law.passed = false;
    report.row_difference_law.counterexample_ks.insert(
        report.row_difference_law.counterexample_ks.end(), {0, 1});
  }
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const Count step = rows[i + 1].product_phi_top - rows[i].product_phi_top;
    report.later_steps.push_back(step);
    if (step != report.phi_top_of_f) {
      report.row_flags[i + 1].step_ok = false;
      report.row_difference_law.passed = false;
      report.row_difference_law.counterexample_ks.insert(
          report.row_difference_law.counterexample_ks.end(), {rows[i].k, rows[i + 1].k});
    }
  }
  report.row_difference_law.detail =
      "step 0->1 = " + std::to_string(report.first_step) + " (expected phi_m(f)*(1+" +
      std::to_string(report.first_step_extra) + ") = " +
      std::to_string(report.phi_top_of_f * (1 + report.first_step_extra)) +
      "); later steps expected " + std::to_string(report.phi_top_of_f);
  return report;
}

}  // namespace morse::obstruction
