#include "morse/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "morse/algebra.hpp"
#include "morse/io.hpp"
#include "morse/lab.hpp"
#include "morse/obstruction.hpp"

namespace morse::cli {

namespace {

using nlohmann::json;

enum class Format { Text, Json, Csv };

const std::map<std::string, Format> kFormats{
    {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};
const std::map<std::string, ExtraMiddlePair> kModes{
    {"auto", ExtraMiddlePair::Auto}, {"on", ExtraMiddlePair::On}, {"off", ExtraMiddlePair::Off}};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "text";
  std::vector<std::string> files;
  int j = 0;
  Count k = 0;
  Count K = 5;
  std::string mode = "auto";
  std::string f1;
  std::string f2;
  std::string weights = "0.7071067811865476,0.7071067811865476";
  std::string report_path;
};

Format format_of(const Options& o, std::initializer_list<Format> allowed, const char* cmd) {
  const Format f = kFormats.at(o.format);
  for (Format a : allowed)
    if (a == f) return f;
  throw UsageError(std::string(cmd) + " does not support --format " + o.format);
}

void print_json(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

void print_descriptor(std::ostream& out, const MorseDescriptor& d, Format f) {
  if (f == Format::Json) return print_json(out, io::descriptor_to_json(d));
  out << "dimension: " << d.dimension() << "\n";
  out << "oriented: " << (d.oriented() ? "true" : "false") << "\n";
  out << "counts: " << io::format_counts(d.counts.counts) << "\n";
  out << "token: " << io::format_token(d.manifold.token) << "\n";
  if (d.manifold.betti) out << "betti: " << io::format_counts(*d.manifold.betti) << "\n";
}

MorseDescriptor load_valid(const std::string& path) {
  MorseDescriptor d = io::read_descriptor_file(path);
  auto problems = validate(d);
  if (!problems.empty()) throw PreconditionError("'" + path + "' is invalid: " + problems.front());
  return d;
}

std::pair<double, double> parse_weights(const std::string& text) {
  std::istringstream in(text);
  std::string a, b, extra;
  if (!std::getline(in, a, ',') || !std::getline(in, b, ',') || std::getline(in, extra, ','))
    throw UsageError("--weights expects two comma-separated numbers, got '" + text + "'");
  try {
    std::size_t ua = 0, ub = 0;
    const double wa = std::stod(a, &ua);
    const double wb = std::stod(b, &ub);
    if (ua != a.size() || ub != b.size()) throw std::invalid_argument("trailing characters");
    return {wa, wb};
  } catch (const std::exception&) {
    throw UsageError("--weights expects two comma-separated numbers, got '" + text + "'");
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "validate");
  const MorseDescriptor d = io::read_descriptor_file(o.files.at(0));
  const auto problems = validate(d);
  if (f == Format::Json) {
    print_json(out, {{"valid", problems.empty()}, {"violations", problems}});
  } else if (problems.empty()) {
    out << "valid\n";
  } else {
    out << problems.size() << " violation(s):\n";
    for (const auto& p : problems) out << "  - " << p << "\n";
  }
  return problems.empty() ? kSuccess : kInputError;
}

int cmd_invariant(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "invariant");
  const auto inv = cobordism_invariant(load_valid(o.files.at(0)));
  if (f == Format::Json)
    print_json(out, io::invariant_to_json(inv));
  else
    out << io::invariant_to_text(inv);
  return kSuccess;
}

int cmd_phi(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "phi");
  const Count v = phi(load_valid(o.files.at(0)), o.j);
  if (f == Format::Json)
    print_json(out, {{"j", o.j}, {"phi", v}});
  else
    out << "phi_" << o.j << " = " << v << "\n";
  return kSuccess;
}

int cmd_product(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "product");
  print_descriptor(out, diagonal_product(load_valid(o.files.at(0)), load_valid(o.files.at(1))), f);
  return kSuccess;
}

int cmd_theorem3(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "theorem3");
  const MorseDescriptor a = load_valid(o.files.at(0));
  const MorseDescriptor b = load_valid(o.files.at(1));
  const Count v = theorem3_phi(a, b, o.j);
  const int index = a.dimension() + b.dimension() - o.j;
  if (f == Format::Json)
    print_json(out, {{"j", o.j}, {"index", index}, {"phi", v}});
  else
    out << "phi_" << index << " = " << v << "\n";
  return kSuccess;
}

int cmd_stabilize(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "stabilize");
  print_descriptor(out, stabilize(load_valid(o.files.at(0)), o.k, kModes.at(o.mode)), f);
  return kSuccess;
}

int cmd_cobordant(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "cobordant");
  const bool same = is_cobordant(load_valid(o.files.at(0)), load_valid(o.files.at(1)));
  if (f == Format::Json)
    print_json(out, {{"cobordant", same}});
  else
    out << "cobordant: " << (same ? "true" : "false") << "\n";
  return same ? kSuccess : kVerdictFailure;
}

int cmd_obstruct(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json, Format::Csv}, "obstruct");
  const auto report = obstruction::verify_theorem4(load_valid(o.files.at(0)),
                                                   load_valid(o.files.at(1)), o.K,
                                                   kModes.at(o.mode));
  if (f == Format::Json)
    print_json(out, io::obstruction_to_json(report));
  else if (f == Format::Csv)
    out << io::obstruction_to_csv(report);
  else
    out << io::obstruction_to_text(report);
  return report.passed() ? kSuccess : kVerdictFailure;
}

int cmd_verify_lemma1(const Options& o, std::ostream& out) {
  const Format f = format_of(o, {Format::Text, Format::Json}, "verify-lemma1");
  const auto [a, b] = parse_weights(o.weights);
  const auto report =
      lab::verify_lemma1(lab::catalog_from_spec(o.f1), lab::catalog_from_spec(o.f2), a, b);
  const json doc = io::lemma1_to_json(report);
  if (!o.report_path.empty()) {
    std::ofstream file(o.report_path);
    if (!file) throw UsageError("cannot write report to '" + o.report_path + "'");
    file << doc.dump(2) << "\n";
  }
  if (f == Format::Json)
    print_json(out, doc);
  else
    out << io::lemma1_to_text(report);
  return report.passed() ? kSuccess : kVerdictFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cobordism invariants and diagonal products of Morse functions", "morse"};
  app.require_subcommand(1);
  Options o;
  using Handler = std::function<int(const Options&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto add = [&](const char* name, const char* help, int n_files, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    if (n_files > 0)
      sub->add_option("files", o.files, "Descriptor file(s)")->required()->expected(n_files);
    commands.emplace_back(sub, std::move(h));
    return sub;
  };

  add("validate", "List every violated descriptor invariant", 1, cmd_validate);
  add("invariant", "Cobordism invariant of a descriptor", 1, cmd_invariant);
  add("phi", "phi_j = C_j - C_{m-j}", 1, cmd_phi)->add_option("--j", o.j)->required();
  add("product", "Diagonal product of two descriptors", 2, cmd_product);
  add("theorem3", "Closed-form top-range phi of a diagonal product (lower dimension first)", 2,
      cmd_theorem3)
      ->add_option("--j", o.j)
      ->required();
  auto* stab = add("stabilize", "Attach cancelling handle pairs", 1, cmd_stabilize);
  stab->add_option("--k", o.k, "Pairs per index")->required()->check(CLI::NonNegativeNumber);
  stab->add_option("--extra-middle-pair", o.mode)->check(CLI::IsMember({"auto", "on", "off"}));
  add("cobordant", "Compare cobordism invariants", 2, cmd_cobordant);
  auto* obs = add("obstruct", "Family table showing the product is not well defined on classes",
                  2, cmd_obstruct);
  obs->add_option("--K", o.K, "Largest stabilization level")->check(CLI::NonNegativeNumber);
  obs->add_option("--extra-middle-pair", o.mode)->check(CLI::IsMember({"auto", "on", "off"}));
  auto* lem = add("verify-lemma1", "Numerical index-additivity check on catalog functions", 0,
                  cmd_verify_lemma1);
  lem->add_option("--f1", o.f1, "e.g. circle_cos:3")->required();
  lem->add_option("--f2", o.f2, "e.g. sphere_height")->required();
  lem->add_option("--weights", o.weights, "a,b with a, b > 0");
  lem->add_option("--report", o.report_path, "Also write the JSON report to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    try {
      return handler(o, out);
    } catch (const io::FormatError& e) {
      err << "error: malformed input: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
      err << "error: precondition violated: " << e.what() << "\n";
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
    } catch (const std::logic_error& e) {
      err << "internal error: " << e.what() << "\n";
      return kVerdictFailure;
    }
    return kInputError;
  }
  return kInputError;
}

}  // namespace morse::cli
