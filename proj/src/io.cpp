#include "morse/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace morse::io {

using nlohmann::json;

namespace {

Count as_count(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw FormatError(where + " must be an integer");
  return v.get<Count>();
}

std::vector<Count> as_counts(const json& v, const std::string& where) {
  if (!v.is_array()) throw FormatError(where + " must be an array of integers");
  std::vector<Count> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_count(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

std::string fixed(double v, int digits = 6) {
  std::ostringstream out;
  out << std::setprecision(digits) << v;
  return out.str();
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fixed(xs[i], 8);
  return out + ")";
}

json check_to_json(const obstruction::Check& c) {
  return {{"name", c.name},
          {"applicable", c.applicable},
          {"passed", c.passed},
          {"detail", c.detail},
          {"counterexample_ks", c.counterexample_ks}};
}

json critical_point_to_json(const lab::CriticalPoint& p) {
  return {{"chart", p.chart_id},
          {"coordinates", p.coordinates},
          {"canonical", p.canonical},
          {"value", p.value},
          {"gradient_norm", p.gradient_norm},
          {"hessian_eigenvalues", p.hessian_eigenvalues},
          {"index", p.index}};
}

}  // namespace

MorseDescriptor descriptor_from_json(const json& doc) {
  const std::string where = "descriptor";
  if (!doc.is_object()) throw FormatError(where + " must be a JSON object");

  const json& dim = field(doc, "dimension", where);
  if (!dim.is_number_integer()) throw FormatError(where + ": \"dimension\" must be an integer");
  const json& oriented = field(doc, "oriented", where);
  if (!oriented.is_boolean()) throw FormatError(where + ": \"oriented\" must be a boolean");

  MorseDescriptor d;
  d.counts.dimension = dim.get<int>();
  d.counts.counts = as_counts(field(doc, "counts", where), "counts");
  d.manifold.dimension = d.counts.dimension;
  d.manifold.oriented = oriented.get<bool>();

  const json& mf = field(doc, "manifold", where);
  if (!mf.is_object()) throw FormatError(where + ": \"manifold\" must be an object");
  const json& cls = field(mf, "class", "manifold");
  if (!cls.is_array()) throw FormatError("manifold.class must be an array of [label, coeff] pairs");
  CobordismToken::Terms terms;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const json& term = cls[i];
    const std::string at = "manifold.class[" + std::to_string(i) + "]";
    if (!term.is_array() || term.size() != 2 || !term[0].is_string())
      throw FormatError(at + " must be a [label, coeff] pair");
    const std::string label = term[0].get<std::string>();
    if (label.empty()) throw FormatError(at + ": label must be nonempty");
    terms[label] += as_count(term[1], at + " coefficient");
  }
  d.manifold.token = CobordismToken(std::move(terms)).reduced(d.manifold.oriented);

  if (auto it = mf.find("betti"); it != mf.end() && !it->is_null())
    d.manifold.betti = as_counts(*it, "manifold.betti");
  return d;
}

json descriptor_to_json(const MorseDescriptor& d) {
  json mf = {{"class", token_to_json(d.manifold.token)}};
  if (d.manifold.betti) mf["betti"] = *d.manifold.betti;
  json out;
  out["dimension"] = d.dimension();
  out["oriented"] = d.oriented();
  out["counts"] = d.counts.counts;
  out["manifold"] = std::move(mf);
  return out;
}

MorseDescriptor read_descriptor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open descriptor file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return descriptor_from_json(doc);
  } catch (const FormatError& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

std::string format_token(const CobordismToken& token) {
  if (token.is_zero()) return "0";
  std::string out;
  for (const auto& [label, coeff] : token.terms()) {
    if (!out.empty()) out += ' ';
    out += label + ":" + std::to_string(coeff);
  }
  return out;
}

std::string format_counts(const std::vector<Count>& counts) {
  std::string out = "[";
  for (std::size_t i = 0; i < counts.size(); ++i) out += (i ? ", " : "") + std::to_string(counts[i]);
  return out + "]";
}

json token_to_json(const CobordismToken& token) {
  json out = json::array();
  for (const auto& [label, coeff] : token.terms()) out.push_back(json::array({label, coeff}));
  return out;
}

json invariant_to_json(const CobordismInvariant& inv) {
  json out;
  out["dimension"] = inv.dimension;
  out["oriented"] = inv.oriented;
  out["class"] = token_to_json(inv.token);
  out["phi_range_begin"] = CobordismInvariant::phi_range_begin(inv.dimension);
  out["phis"] = inv.phis;
  out["z2"] = inv.z2 ? json(*inv.z2) : json(nullptr);
  return out;
}

std::string invariant_to_text(const CobordismInvariant& inv) {
  std::string out = "token: " + format_token(inv.token) + "\n";
  out += "phis: " + format_counts(inv.phis) + "\n";
  if (inv.z2) out += "z2: " + std::to_string(*inv.z2) + "\n";
  return out;
}

std::string invariant_to_cell(const CobordismInvariant& inv) {
  std::string phis = "[";
  for (std::size_t i = 0; i < inv.phis.size(); ++i)
    phis += (i ? " " : "") + std::to_string(inv.phis[i]);
  phis += "]";
  std::string out = format_token(inv.token) + " | " + phis;
  if (inv.z2) out += " | z2=" + std::to_string(*inv.z2);
  return out;
}

json obstruction_to_json(const obstruction::Theorem4Report& report) {
  json rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const auto& flags = report.row_flags[i];
    rows.push_back({{"k", row.k},
                    {"family_counts", row.family_counts.counts},
                    {"family_invariant", invariant_to_json(row.family_invariant)},
                    {"product_phi_top", row.product_phi_top},
                    {"product_invariant", invariant_to_json(row.product_invariant)},
                    {"family_match", flags.family_match},
                    {"product_distinct", flags.product_distinct},
                    {"step_ok", flags.step_ok}});
  }
  json checks = json::array();
  for (const auto* c : report.checks()) checks.push_back(check_to_json(*c));
  return {{"rows", rows},
          {"phi_top_of_f", report.phi_top_of_f},
          {"first_step", report.first_step},
          {"first_step_extra", report.first_step_extra},
          {"later_steps", report.later_steps},
          {"product_column_constant", report.product_column_constant},
          {"checks", checks},
          {"passed", report.passed()}};
}

std::string obstruction_to_csv(const obstruction::Theorem4Report& report) {
  std::ostringstream out;
  out << "k,family_invariant,product_phi_top,product_invariant_phis,family_match,"
         "product_distinct,step_ok\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const auto& flags = report.row_flags[i];
    std::string phis;
    for (std::size_t j = 0; j < row.product_invariant.phis.size(); ++j)
      phis += (j ? " " : "") + std::to_string(row.product_invariant.phis[j]);
    out << row.k << ",\"" << invariant_to_cell(row.family_invariant) << "\","
        << row.product_phi_top << ",\"" << phis << "\"," << (flags.family_match ? 1 : 0) << ","
        << (flags.product_distinct ? 1 : 0) << "," << (flags.step_ok ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string obstruction_to_text(const obstruction::Theorem4Report& report) {
  std::ostringstream out;
  out << "phi_m(f) = " << report.phi_top_of_f << "\n";
  out << std::left << std::setw(4) << "k" << std::setw(24) << "family counts" << std::setw(14)
      << "top phi" << "product phis\n";
  for (const auto& row : report.rows) {
    std::string phis;
    for (std::size_t j = 0; j < row.product_invariant.phis.size(); ++j)
      phis += (j ? " " : "") + std::to_string(row.product_invariant.phis[j]);
    out << std::setw(4) << row.k << std::setw(24) << format_counts(row.family_counts.counts)
        << std::setw(14) << row.product_phi_top << "[" << phis << "]\n";
  }
  out << "step 0->1: " << report.first_step << " (extra middle pair: " << report.first_step_extra
      << ")\n";
  for (const auto* c : report.checks())
    out << c->name << ": " << (c->applicable ? (c->passed ? "pass" : "FAIL") : "n/a") << " ("
        << c->detail << ")\n";
  out << "verdict: " << (report.passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

json lemma1_to_json(const lab::Lemma1Report& report) {
  auto points = [](const std::vector<lab::CriticalPoint>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back(critical_point_to_json(p));
    return arr;
  };
  auto hist = [](const std::optional<IndexCountVector>& h) {
    return h ? json(h->counts) : json(nullptr);
  };
  json matches = json::array();
  for (const auto& m : report.matches)
    matches.push_back({{"product_point", m.product_point},
                       {"first_point", m.first_point},
                       {"second_point", m.second_point},
                       {"distance", m.distance},
                       {"index", m.index},
                       {"first_index", m.first_index},
                       {"second_index", m.second_index},
                       {"index_additive", m.index_additive},
                       {"off_block_relative", m.off_block_relative}});
  json convergence = json::array();
  for (const auto& c : report.convergence)
    convergence.push_back({{"product_point", c.product_point},
                           {"coarse_change", c.coarse_change},
                           {"fine_change", c.fine_change},
                           {"noise_floor", c.noise_floor},
                           {"passed", c.passed}});
  json unused = json::array();
  for (const auto& [i, j] : report.unused_pairs) unused.push_back(json::array({i, j}));
  return {{"f1", report.f1_name},
          {"f2", report.f2_name},
          {"weights", json::array({report.weight_first, report.weight_second})},
          {"f1_points", points(report.first_points)},
          {"f2_points", points(report.second_points)},
          {"product_points", points(report.product_points)},
          {"matches", matches},
          {"unmatched_product_points", report.unmatched_product_points},
          {"unused_pairs", unused},
          {"convergence", convergence},
          {"histograms",
           {{"f1", hist(report.first_histogram)},
            {"f2", hist(report.second_histogram)},
            {"product", hist(report.product_histogram)},
            {"convolution", hist(report.convolution_histogram)}}},
          {"checks",
           {{"bijective", report.bijective},
            {"indices_additive", report.indices_additive},
            {"count_identity", report.count_identity},
            {"histogram_identity", report.histogram_identity},
            {"gradients_small", report.gradients_small},
            {"block_structure", report.block_structure},
            {"fd_consistent", report.fd_consistent}}},
          {"failures", report.failures},
          {"verdict", report.passed() ? "pass" : "fail"}};
}

std::string lemma1_to_text(const lab::Lemma1Report& report) {
  std::ostringstream out;
  out << "diagonal of " << report.f1_name << " x " << report.f2_name << " with weights ("
      << report.weight_first << ", " << report.weight_second << ")\n";
  out << std::left << std::setw(7) << "point" << std::setw(22) << "chart" << std::setw(7)
      << "index" << std::setw(24) << "matched pair" << "coordinates\n";
  for (const auto& m : report.matches) {
    const auto& p = report.product_points[m.product_point];
    std::ostringstream pair;
    pair << "(" << m.first_point << ", " << m.second_point << ") indices " << m.first_index << "+"
         << m.second_index;
    out << std::setw(7) << m.product_point << std::setw(22) << p.chart_id << std::setw(7)
        << p.index << std::setw(24) << pair.str() << join_doubles(p.coordinates) << "\n";
  }
  for (std::size_t k : report.unmatched_product_points) {
    const auto& p = report.product_points[k];
    out << std::setw(7) << k << std::setw(22) << p.chart_id << std::setw(7) << p.index
        << std::setw(24) << "UNMATCHED" << join_doubles(p.coordinates) << "\n";
  }
  if (report.product_histogram)
    out << "product histogram: " << format_counts(report.product_histogram->counts)
        << ", convolution: " << format_counts(report.convolution_histogram->counts) << "\n";
  out << "bijective: " << yes_no(report.bijective)
      << ", indices additive: " << yes_no(report.indices_additive)
      << ", count identity: " << yes_no(report.count_identity)
      << ", block structure: " << yes_no(report.block_structure)
      << ", fd consistent: " << yes_no(report.fd_consistent) << "\n";
  for (const auto& f : report.failures) out << "failure: " << f << "\n";
  out << "verdict: " << (report.passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace morse::io
