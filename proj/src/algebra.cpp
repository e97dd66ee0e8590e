#include "morse/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace morse {

namespace {

std::string str(Count v) { return std::to_string(v); }

Count mod2(Count v) { return ((v % 2) + 2) % 2; }

Count alternating_sum(const std::vector<Count>& v) {
  Count s = 0;
  for (std::size_t j = 0; j < v.size(); ++j) s += (j % 2 == 0) ? v[j] : -v[j];
  return s;
}

std::vector<Count> convolve(const std::vector<Count>& a, const std::vector<Count>& b) {
  std::vector<Count> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

// An empty descriptor without recorded Betti numbers is the empty manifold,
// whose Betti numbers are all zero.
std::optional<std::vector<Count>> effective_betti(const MorseDescriptor& d) {
  if (d.manifold.betti) return d.manifold.betti;
  if (d.is_empty()) return std::vector<Count>(static_cast<std::size_t>(d.dimension()) + 1, 0);
  return std::nullopt;
}

void require_shape(const MorseDescriptor& d, const char* op) {
  if (d.counts.dimension < 0 ||
      d.counts.counts.size() != static_cast<std::size_t>(d.counts.dimension) + 1)
    throw PreconditionError(std::string(op) + ": counts length must be dimension + 1");
  if (d.manifold.dimension != d.counts.dimension)
    throw PreconditionError(std::string(op) + ": manifold and counts dimensions differ");
}

void require_valid(const MorseDescriptor& d, const char* op) {
  auto problems = validate(d);
  if (!problems.empty())
    throw PreconditionError(std::string(op) + ": invalid descriptor: " + problems.front());
}

void require_compatible(const MorseDescriptor& a, const MorseDescriptor& b, const char* op,
                        bool same_dimension) {
  if (same_dimension && a.dimension() != b.dimension())
    throw PreconditionError(std::string(op) + ": dimension mismatch (" + str(a.dimension()) +
                            " vs " + str(b.dimension()) + ")");
  if (a.oriented() != b.oriented())
    throw PreconditionError(std::string(op) + ": orientation mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// IndexCountVector

IndexCountVector IndexCountVector::zeros(int m) {
  return {m, std::vector<Count>(static_cast<std::size_t>(std::max(m, 0)) + 1, 0)};
}

bool IndexCountVector::is_empty() const {
  return std::all_of(counts.begin(), counts.end(), [](Count c) { return c == 0; });
}

Count IndexCountVector::total() const {
  Count s = 0;
  for (Count c : counts) s += c;
  return s;
}

// ---------------------------------------------------------------------------
// CobordismToken

CobordismToken::CobordismToken(Terms terms) {
  for (auto& [label, coeff] : terms)
    if (coeff != 0) terms_.emplace(label, coeff);
}

CobordismToken CobordismToken::generator(const std::string& label, Count coeff) {
  return CobordismToken(Terms{{label, coeff}});
}

Count CobordismToken::coefficient(const std::string& label) const {
  auto it = terms_.find(label);
  return it == terms_.end() ? 0 : it->second;
}

CobordismToken CobordismToken::reduced(bool oriented) const {
  if (oriented) return *this;
  Terms out;
  for (const auto& [label, coeff] : terms_) out[label] = mod2(coeff);
  return CobordismToken(std::move(out));
}

CobordismToken CobordismToken::plus(const CobordismToken& other, bool oriented) const {
  Terms out = terms_;
  for (const auto& [label, coeff] : other.terms_) out[label] += coeff;
  return CobordismToken(std::move(out)).reduced(oriented);
}

CobordismToken CobordismToken::negated(bool oriented) const {
  if (!oriented) return reduced(false);
  Terms out;
  for (const auto& [label, coeff] : terms_) out[label] = -coeff;
  return CobordismToken(std::move(out));
}

CobordismToken CobordismToken::times(const CobordismToken& other, bool oriented) const {
  Terms out;
  for (const auto& [la, ca] : terms_)
    for (const auto& [lb, cb] : other.terms_) out[multiply_labels(la, lb)] += ca * cb;
  return CobordismToken(std::move(out)).reduced(oriented);
}

std::string multiply_labels(const std::string& a, const std::string& b) {
  std::vector<std::string> factors;
  for (const std::string* s : {&a, &b}) {
    std::istringstream in(*s);
    std::string f;
    while (std::getline(in, f, '*'))
      if (!f.empty()) factors.push_back(f);
  }
  std::sort(factors.begin(), factors.end());
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += '*';
    out += factors[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// MorseDescriptor

bool MorseDescriptor::is_empty() const { return counts.is_empty() && manifold.token.is_zero(); }

MorseDescriptor MorseDescriptor::empty(int m, bool oriented) {
  MorseDescriptor d;
  d.manifold.dimension = m;
  d.manifold.oriented = oriented;
  d.counts = IndexCountVector::zeros(m);
  return d;
}

MorseDescriptor MorseDescriptor::make(std::vector<Count> counts, bool oriented,
                                      CobordismToken token,
                                      std::optional<std::vector<Count>> betti) {
  MorseDescriptor d;
  const int m = static_cast<int>(counts.size()) - 1;
  d.counts = {m, std::move(counts)};
  d.manifold = {m, oriented, token.reduced(oriented), std::move(betti)};
  return d;
}

Count CobordismInvariant::phi(int j) const {
  const int begin = phi_range_begin(dimension);
  if (j < begin || j > dimension)
    throw PreconditionError("phi_" + str(j) + " is not recorded in the invariant (range " +
                            str(begin) + ".." + str(dimension) + ")");
  return phis[static_cast<std::size_t>(j - begin)];
}

// ---------------------------------------------------------------------------
// Operations

std::vector<std::string> validate(const MorseDescriptor& d) {
  std::vector<std::string> out;
  const IndexCountVector& c = d.counts;
  const ManifoldClass& mf = d.manifold;
  const int m = c.dimension;

  if (m < 0) out.push_back("dimension " + str(m) + " is negative");
  if (mf.dimension != m)
    out.push_back("manifold dimension " + str(mf.dimension) + " differs from counts dimension " +
                  str(m));
  const bool shape_ok = m >= 0 && c.counts.size() == static_cast<std::size_t>(m) + 1;
  if (!shape_ok)
    out.push_back("counts has length " + str(static_cast<Count>(c.counts.size())) +
                  ", expected dimension + 1 = " + str(m + 1));

  for (std::size_t j = 0; j < c.counts.size(); ++j)
    if (c.counts[j] < 0) out.push_back("C_" + str(static_cast<Count>(j)) + " is negative");

  if (shape_ok && !c.is_empty()) {
    if (c.counts.front() < 1) out.push_back("nonempty manifold needs a minimum: C_0 >= 1");
    if (c.counts.back() < 1) out.push_back("nonempty manifold needs a maximum: C_m >= 1");
    if (m % 2 == 1) {
      const Count chi = alternating_sum(c.counts);
      if (chi != 0)
        out.push_back("odd dimension " + str(m) + " requires Euler characteristic 0, got " +
                      str(chi));
    }
  }

  if (!mf.oriented)
    for (const auto& [label, coeff] : mf.token.terms())
      if (coeff != 0 && coeff != 1)
        out.push_back("unoriented token coefficient of '" + label + "' is " + str(coeff) +
                      ", expected 0 or 1");

  if (mf.betti) {
    const auto& b = *mf.betti;
    if (b.size() != static_cast<std::size_t>(std::max(m, 0)) + 1) {
      out.push_back("betti has length " + str(static_cast<Count>(b.size())) +
                    ", expected dimension + 1 = " + str(m + 1));
    } else {
      for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] < 0) out.push_back("b_" + str(static_cast<Count>(j)) + " is negative");
      if (m % 2 == 1 && alternating_sum(b) != 0)
        out.push_back("odd dimension requires alternating Betti sum 0, got " +
                      str(alternating_sum(b)));
      if (mf.oriented)
        for (int j = 0; j <= m / 2; ++j)
          if (b[static_cast<std::size_t>(j)] != b[static_cast<std::size_t>(m - j)])
            out.push_back("Poincare duality fails: b_" + str(j) + " = " +
                          str(b[static_cast<std::size_t>(j)]) + " but b_" + str(m - j) + " = " +
                          str(b[static_cast<std::size_t>(m - j)]));
      if (shape_ok) {
        for (int j = 0; j <= m; ++j)
          if (c.counts[static_cast<std::size_t>(j)] < b[static_cast<std::size_t>(j)])
            out.push_back("weak Morse inequality fails: C_" + str(j) + " = " +
                          str(c.counts[static_cast<std::size_t>(j)]) + " < b_" + str(j) + " = " +
                          str(b[static_cast<std::size_t>(j)]));
        if (alternating_sum(c.counts) != alternating_sum(b))
          out.push_back("Euler characteristic of counts (" + str(alternating_sum(c.counts)) +
                        ") differs from that of Betti numbers (" + str(alternating_sum(b)) + ")");
      }
    }
  }
  return out;
}

Count euler_characteristic(const MorseDescriptor& d) { return alternating_sum(d.counts.counts); }

Count phi(const MorseDescriptor& d, int j) {
  require_shape(d, "phi");
  const int m = d.dimension();
  if (j < 0 || j > m)
    throw PreconditionError("phi: index " + str(j) + " outside 0.." + str(m));
  return d.counts[j] - d.counts[m - j];
}

MorseDescriptor disjoint_union(const MorseDescriptor& a, const MorseDescriptor& b) {
  require_shape(a, "disjoint_union");
  require_shape(b, "disjoint_union");
  require_compatible(a, b, "disjoint_union", true);
  const bool oriented = a.oriented();

  MorseDescriptor out = a;
  for (std::size_t j = 0; j < out.counts.counts.size(); ++j)
    out.counts.counts[j] += b.counts.counts[j];
  out.manifold.token = a.manifold.token.plus(b.manifold.token, oriented);

  if (a.manifold.betti || b.manifold.betti) {
    auto ba = effective_betti(a);
    auto bb = effective_betti(b);
    if (ba && bb) {
      for (std::size_t j = 0; j < ba->size(); ++j) (*ba)[j] += (*bb)[j];
      out.manifold.betti = std::move(ba);
    } else {
      out.manifold.betti.reset();
    }
  }
  return out;
}

MorseDescriptor negate(const MorseDescriptor& d) {
  MorseDescriptor out = d;
  std::reverse(out.counts.counts.begin(), out.counts.counts.end());
  out.manifold.token = d.manifold.token.negated(d.oriented());
  return out;
}

MorseDescriptor diagonal_product(const MorseDescriptor& a, const MorseDescriptor& b) {
  require_valid(a, "diagonal_product");
  require_valid(b, "diagonal_product");
  require_compatible(a, b, "diagonal_product", false);
  const bool oriented = a.oriented();
  const int m = a.dimension() + b.dimension();

  MorseDescriptor out;
  out.counts = {m, convolve(a.counts.counts, b.counts.counts)};
  out.manifold.dimension = m;
  out.manifold.oriented = oriented;
  out.manifold.token = a.manifold.token.times(b.manifold.token, oriented);

  auto ba = effective_betti(a);
  auto bb = effective_betti(b);
  if (a.manifold.betti || b.manifold.betti) {
    if (ba && bb) out.manifold.betti = convolve(*ba, *bb);
  }
  return out;
}

Count theorem3_phi(const MorseDescriptor& a, const MorseDescriptor& b, int j) {
  require_shape(a, "theorem3_phi");
  require_shape(b, "theorem3_phi");
  const int m1 = a.dimension();
  const int m2 = b.dimension();
  if (m1 > m2)
    throw PreconditionError("theorem3_phi: requires m1 <= m2 (got " + str(m1) + " > " + str(m2) +
                            "); pass the lower-dimensional descriptor first");
  if (j < 0 || j >= m1)
    throw PreconditionError("theorem3_phi: requires 0 <= j < m1 = " + str(m1) + ", got " + str(j));
  Count top = 0;
  Count bottom = 0;
  for (int i = 0; i <= j; ++i) {
    top += a.counts[m1 - j + i] * b.counts[m2 - i];
    bottom += a.counts[i] * b.counts[j - i];
  }
  return top - bottom;
}

Count sigma(const ManifoldClass& manifold) {
  if (!manifold.betti)
    throw PreconditionError(
        "sigma(M) needs Betti numbers: the oriented invariant in dimension 4k+1 "
        "requires manifold.betti");
  if (manifold.dimension % 4 != 1)
    throw PreconditionError("sigma(M) is defined for dimension 4k+1 only");
  const int top = 2 * (manifold.dimension / 4);
  Count s = 0;
  for (int j = 0; j <= top; ++j) s += manifold.betti->at(static_cast<std::size_t>(j));
  return s;
}

CobordismInvariant cobordism_invariant(const MorseDescriptor& d) {
  require_valid(d, "cobordism_invariant");
  const int m = d.dimension();
  CobordismInvariant inv;
  inv.dimension = m;
  inv.oriented = d.oriented();
  inv.token = d.manifold.token.reduced(d.oriented());
  for (int j = CobordismInvariant::phi_range_begin(m); j <= m; ++j) inv.phis.push_back(phi(d, j));
  if (CobordismInvariant::has_z2(m, d.oriented())) {
    ManifoldClass mf = d.manifold;
    if (!mf.betti) mf.betti = effective_betti(d);
    if (!mf.betti)
      throw PreconditionError(
          "cobordism_invariant: oriented dimension " + str(m) +
          " = 4k+1 needs sigma(M) = b_0 + ... + b_2k, but manifold.betti is missing");
    Count s = sigma(mf);
    for (int j = 0; j <= 2 * (m / 4); ++j) s -= phi(d, j);
    inv.z2 = static_cast<int>(mod2(s));
  }
  return inv;
}

bool is_cobordant(const MorseDescriptor& a, const MorseDescriptor& b) {
  require_compatible(a, b, "is_cobordant", true);
  return cobordism_invariant(a) == cobordism_invariant(b);
}

bool middle_pair_fires(int m, Count k, ExtraMiddlePair mode) {
  switch (mode) {
    case ExtraMiddlePair::On: return true;
    case ExtraMiddlePair::Off: return false;
    case ExtraMiddlePair::Auto: return m % 4 == 1 && k >= 1;
  }
  return false;
}

MorseDescriptor stabilize(const MorseDescriptor& d, Count k, ExtraMiddlePair mode) {
  require_valid(d, "stabilize");
  if (d.counts.is_empty())
    throw PreconditionError("stabilize: empty descriptor has no manifold to attach handles to");
  if (k < 0) throw PreconditionError("stabilize: k must be non-negative");
  const int m = d.dimension();
  const bool middle = middle_pair_fires(m, k, mode);
  if (middle && m < 1)
    throw PreconditionError("stabilize: a middle handle pair needs dimension >= 1");

  MorseDescriptor out = d;
  auto& c = out.counts.counts;
  for (int j = 0; j < m; ++j) {
    c[static_cast<std::size_t>(j)] += k;
    c[static_cast<std::size_t>(j) + 1] += k;
  }
  if (middle) {
    c[static_cast<std::size_t>(m / 2)] += 1;
    c[static_cast<std::size_t>(m / 2) + 1] += 1;
  }
  return out;
}

}  // namespace morse
