#include "nlocch/cosine_polynomial.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nlocch/field_io.hpp"

namespace nlocch {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

CosinePolynomial::Term parse_term(const std::string& raw) {
  const std::string t = trim(raw);
  CosinePolynomial::Term term;
  const auto cos_pos = t.find("cos(");
  if (cos_pos == std::string::npos) {
    term.coefficient = parse_double(t);
    return term;
  }
  const std::string prefix = trim(t.substr(0, cos_pos));
  if (!prefix.empty()) {
    if (prefix.back() != '*') throw std::invalid_argument("cosine term: expected '*' before cos in '" + t + "'");
    term.coefficient = parse_double(trim(prefix.substr(0, prefix.size() - 1)));
  }
  const auto close = t.find(')', cos_pos);
  if (close == std::string::npos || !trim(t.substr(close + 1)).empty()) {
    throw std::invalid_argument("cosine term: malformed '" + t + "'");
  }
  std::istringstream args(t.substr(cos_pos + 4, close - cos_pos - 4));
  std::string k;
  int axis = 0;
  while (std::getline(args, k, ',')) {
    if (axis >= 3) throw std::invalid_argument("cosine term: at most three wavenumbers");
    const std::string v = trim(k);
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument("cosine term: bad wavenumber '" + v + "'");
    term.wavenumbers[static_cast<std::size_t>(axis++)] = n;
  }
  if (axis == 0) throw std::invalid_argument("cosine term: missing wavenumbers");
  return term;
}

double mode_value(const CosinePolynomial::Term& t, const std::array<double, 3>& x,
                  const std::array<double, 3>& extents) {
  double v = t.coefficient;
  for (std::size_t i = 0; i < 3; ++i) {
    if (t.wavenumbers[i] != 0) v *= std::cos(std::numbers::pi * t.wavenumbers[i] * x[i] / extents[i]);
  }
  return v;
}

double mode_eigenvalue(const CosinePolynomial::Term& t, const std::array<double, 3>& extents) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double q = std::numbers::pi * t.wavenumbers[i] / extents[i];
    s += q * q;
  }
  return s;
}

}  // namespace

CosinePolynomial::CosinePolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    for (int k : t.wavenumbers) {
      if (k < 0) throw std::invalid_argument("cosine polynomial: wavenumbers must be non-negative");
    }
  }
}

CosinePolynomial CosinePolynomial::constant(double value) { return CosinePolynomial({Term{value, {0, 0, 0}}}); }

CosinePolynomial CosinePolynomial::parse(const std::string& text) {
  std::vector<Term> terms;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '+' && depth == 0 && !trim(cur).empty() && trim(cur).back() != 'e' && trim(cur).back() != 'E' &&
        trim(cur).back() != '*') {
      terms.push_back(parse_term(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (trim(cur).empty()) throw std::invalid_argument("cosine polynomial: empty expression");
  terms.push_back(parse_term(cur));
  return CosinePolynomial(std::move(terms));
}

std::string CosinePolynomial::to_string() const {
  std::ostringstream os;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& term = terms_[t];
    if (t) os << " + ";
    const bool is_constant = term.wavenumbers == std::array<int, 3>{0, 0, 0};
    if (is_constant) {
      os << format_double(term.coefficient);
      continue;
    }
    if (term.coefficient != 1.0) os << format_double(term.coefficient) << '*';
    int last = 0;
    for (int i = 0; i < 3; ++i) {
      if (term.wavenumbers[static_cast<std::size_t>(i)] != 0) last = i;
    }
    os << "cos(";
    for (int i = 0; i <= std::max(last, 1); ++i) os << (i ? "," : "") << term.wavenumbers[static_cast<std::size_t>(i)];
    os << ')';
  }
  return os.str();
}

double CosinePolynomial::value(const std::array<double, 3>& x, const std::array<double, 3>& extents) const {
  double v = 0.0;
  for (const auto& t : terms_) v += mode_value(t, x, extents);
  return v;
}

double CosinePolynomial::laplacian(const std::array<double, 3>& x, const std::array<double, 3>& extents) const {
  double v = 0.0;
  for (const auto& t : terms_) v -= mode_eigenvalue(t, extents) * mode_value(t, x, extents);
  return v;
}

Field CosinePolynomial::sample(const Grid& grid) const {
  for (const auto& t : terms_) {
    for (int i = grid.dim(); i < 3; ++i) {
      if (t.wavenumbers[static_cast<std::size_t>(i)] != 0) {
        throw std::invalid_argument("cosine polynomial: wavenumber on an axis the grid does not have");
      }
    }
  }
  const auto ext = grid.extents();
  return Field::sample(grid, [&](const std::array<double, 3>& x) { return value(x, ext); });
}

Field CosinePolynomial::sample_laplacian(const Grid& grid) const {
  sample(grid);  // validates axes
  const auto ext = grid.extents();
  return Field::sample(grid, [&](const std::array<double, 3>& x) { return laplacian(x, ext); });
}

double CosinePolynomial::gradient_norm_squared(const Grid& grid) const {
  // Merge duplicate modes, then use orthogonality of the cosine/sine factors.
  std::map<std::array<int, 3>, double> modes;
  for (const auto& t : terms_) modes[t.wavenumbers] += t.coefficient;
  const auto ext = grid.extents();
  double total = 0.0;
  for (const auto& [k, a] : modes) {
    for (int j = 0; j < grid.dim(); ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (k[uj] == 0) continue;
      const double q = std::numbers::pi * k[uj] / ext[uj];
      double w = q * q * ext[uj] / 2.0;
      for (int i = 0; i < grid.dim(); ++i) {
        if (i == j) continue;
        const auto ui = static_cast<std::size_t>(i);
        w *= k[ui] == 0 ? ext[ui] : ext[ui] / 2.0;
      }
      total += a * a * w;
    }
  }
  return total;
}

}  // namespace nlocch
