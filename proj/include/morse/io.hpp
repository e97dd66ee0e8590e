#ifndef MORSE_IO_HPP
#define MORSE_IO_HPP

// Descriptor files and report rendering (JSON, CSV, plain text).

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

#include "morse/algebra.hpp"
#include "morse/lab.hpp"
#include "morse/obstruction.hpp"

namespace morse::io {

/// Malformed input file or document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dimension", "oriented", "counts", "manifold": {"class", "betti"?}}.
/// Unoriented token coefficients are reduced mod 2; other invariants are
/// left for `validate`.
MorseDescriptor descriptor_from_json(const nlohmann::json& doc);
nlohmann::json descriptor_to_json(const MorseDescriptor& d);

MorseDescriptor read_descriptor_file(const std::string& path);

/// "0" for the zero token, otherwise "label:coeff" terms joined by spaces.
std::string format_token(const CobordismToken& token);
std::string format_counts(const std::vector<Count>& counts);

nlohmann::json token_to_json(const CobordismToken& token);
nlohmann::json invariant_to_json(const CobordismInvariant& inv);
/// Multi-line: "token: ...", "phis: [...]", and "z2: ..." when defined.
std::string invariant_to_text(const CobordismInvariant& inv);
/// One-line form used inside CSV cells.
std::string invariant_to_cell(const CobordismInvariant& inv);

nlohmann::json obstruction_to_json(const obstruction::Theorem4Report& report);
/// Columns: k, family_invariant, product_phi_top, product_invariant_phis,
/// family_match, product_distinct, step_ok.
std::string obstruction_to_csv(const obstruction::Theorem4Report& report);
std::string obstruction_to_text(const obstruction::Theorem4Report& report);

nlohmann::json lemma1_to_json(const lab::Lemma1Report& report);
std::string lemma1_to_text(const lab::Lemma1Report& report);

}  // namespace morse::io

#endif  // MORSE_IO_HPP
