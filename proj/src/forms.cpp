#include "oppenheim/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace oppenheim {

namespace {

void require_rank(int n) {
  if (n != 3 && n != 4) throw ConfigurationError("rank must be 3 or 4");
}

template <class T>
void require_nondegenerate(const SquareMatrix<T>& gram) {
  if (!gram.is_symmetric()) throw ConfigurationError("gram matrix must be symmetric");
  if (determinant(gram) == T(0)) throw ConfigurationError("quadratic form is degenerate");
}

}  // namespace

PlaceForm PlaceForm::real(RealMatrix gram) {
  require_rank(gram.size());
  require_nondegenerate(gram);
  PlaceForm f(Place::infinite(), gram.size());
  f.real_ = std::move(gram);
  return f;
}

PlaceForm PlaceForm::padic(std::uint32_t p, RationalMatrix gram) {
  require_rank(gram.size());
  require_nondegenerate(gram);
  PlaceForm f(Place::finite(p), gram.size());
  f.exact_ = std::move(gram);
  return f;
}

const RealMatrix& PlaceForm::real_gram() const {
  if (!place_.is_infinite()) throw std::logic_error("finite-place form has no real gram");
  return real_;
}

const RationalMatrix& PlaceForm::exact_gram() const {
  if (place_.is_infinite()) throw std::logic_error("real-place form has no exact gram");
  return exact_;
}

Real PlaceForm::evaluate_real(std::span<const Real> v) const {
  if (static_cast<int>(v.size()) != rank_) throw std::invalid_argument("dimension mismatch");
  const auto& g = real_gram();
  Real acc = 0;
  for (int i = 0; i < rank_; ++i) {
    Real row = 0;
    for (int j = 0; j < rank_; ++j) row += g(i, j) * v[j];
    acc += v[i] * row;
  }
  return acc;
}

Rational PlaceForm::evaluate_exact(std::span<const Rational> v) const {
  if (static_cast<int>(v.size()) != rank_) throw std::invalid_argument("dimension mismatch");
  const auto& g = exact_gram();
  Rational acc = 0;
  for (int i = 0; i < rank_; ++i) {
    Rational row = 0;
    for (int j = 0; j < rank_; ++j) row += g(i, j) * v[j];
    acc += v[i] * row;
  }
  return acc;
}

PlaceScalar evaluate_place(const PlaceForm& f, std::span<const Rational> v) {
  if (f.place().is_infinite()) {
    if (static_cast<int>(v.size()) != f.rank()) throw std::invalid_argument("dimension mismatch");
    // Exact at the rationals, rounded once at the end.
    const auto& g = f.real_gram();
    std::vector<Real> x;
    for (const auto& c : v) x.push_back(to_real(c));
    Rational exact = 0;
    for (int i = 0; i < f.rank(); ++i)
      for (int j = 0; j < f.rank(); ++j) exact += exact_rational(g(i, j)) * v[i] * v[j];
    return to_real(exact);
  }
  return f.evaluate_exact(v);
}

SQuadraticForm::SQuadraticForm(SSet s, PlaceForm real, std::vector<PlaceForm> finite)
    : s_(std::move(s)), real_(std::move(real)), finite_(std::move(finite)) {
  if (!real_.place().is_infinite()) throw ConfigurationError("first place form must be at infinity");
  if (finite_.size() != s_.finite_count()) throw ConfigurationError("need one form per finite place");
  for (std::size_t i = 0; i < finite_.size(); ++i) {
    if (finite_[i].place().is_infinite() || finite_[i].place().prime() != s_.primes()[i]) {
      throw ConfigurationError("finite place forms must follow the order of S");
    }
    if (finite_[i].rank() != real_.rank()) throw ConfigurationError("all place forms must share one rank");
  }
}

std::vector<PlaceScalar> evaluate_S(const SQuadraticForm& q, const SVector& v, const SSet& s) {
  if (!(q.s() == s)) throw std::invalid_argument("SSet mismatch");
  if (v.dim() != q.rank()) throw std::invalid_argument("dimension mismatch");
  auto x = v.value();
  std::vector<PlaceScalar> out;
  out.push_back(evaluate_place(q.real(), x));
  for (const auto& f : q.finite()) out.push_back(evaluate_place(f, x));
  return out;
}

STransform STransform::identity(int n, const SSet& s) {
  STransform g;
  g.real = RealMatrix::identity(n);
  g.finite.assign(s.finite_count(), RationalMatrix::identity(n));
  return g;
}

STransform operator*(const STransform& g, const STransform& h) {
  if (g.finite.size() != h.finite.size()) throw std::invalid_argument("SSet mismatch");
  STransform out;
  out.real = g.real * h.real;
  for (std::size_t i = 0; i < g.finite.size(); ++i) out.finite.push_back(g.finite[i] * h.finite[i]);
  return out;
}

SQuadraticForm apply_transform(const SQuadraticForm& q, const STransform& g) {
  if (g.real.size() != q.rank() || g.finite.size() != q.finite().size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  RealMatrix moved = congruence(q.real().real_gram(), g.real);
  // Rounding leaves the two triangles a few ulps apart.
  for (int i = 0; i < moved.size(); ++i)
    for (int j = i + 1; j < moved.size(); ++j) {
      moved(i, j) = (moved(i, j) + moved(j, i)) / 2;
      moved(j, i) = moved(i, j);
    }
  PlaceForm real = PlaceForm::real(std::move(moved));
  std::vector<PlaceForm> finite;
  for (std::size_t i = 0; i < g.finite.size(); ++i) {
    if (g.finite[i].size() != q.rank()) throw std::invalid_argument("dimension mismatch");
    finite.push_back(PlaceForm::padic(q.s().primes()[i], congruence(q.finite()[i].exact_gram(), g.finite[i])));
  }
  return SQuadraticForm(q.s(), std::move(real), std::move(finite));
}

std::uint32_t smallest_nonresidue(std::uint32_t p) {
  for (std::uint32_t a = 2; a < p; ++a) {
    bool square = false;
    for (std::uint64_t x = 1; x < p && !square; ++x) square = (x * x) % p == a;
    if (!square) return a;
  }
  throw std::logic_error("no quadratic nonresidue");
}

std::vector<Rational> coefficient_menu(std::uint32_t p, const Rational& u0) {
  std::vector<Rational> base{Rational(1), u0, Rational(p), Rational(p) * u0};
  std::vector<Rational> out;
  for (const auto& b : base) {
    out.push_back(b);
    out.push_back(-b);
  }
  return out;
}

namespace {

template <class T>
SquareMatrix<T> standard_gram(int n, const T& a1, const T& a2) {
  SquareMatrix<T> g(n);
  g(0, n - 1) = T(1);
  g(n - 1, 0) = T(1);
  g(1, 1) = a1;
  if (n == 4) g(2, 2) = a2;
  return g;
}

}  // namespace

SQuadraticForm standard_form(int n, const SSet& s, const StandardFormSpec& spec) {
  require_rank(n);
  auto check_real = [](const Rational& a) {
    if (a != 1 && a != -1) throw ConfigurationError("real standard-form coefficients must be +1 or -1");
  };
  check_real(spec.real.a1);
  if (n == 4) check_real(spec.real.a2);
  PlaceForm real = PlaceForm::real(standard_gram<Real>(n, to_real(spec.real.a1), to_real(spec.real.a2)));

  std::vector<PlaceForm> finite;
  for (auto p : s.primes()) {
    StandardCoefficients c;
    if (auto it = spec.finite.find(p); it != spec.finite.end()) c = it->second;
    Rational u0 = smallest_nonresidue(p);
    if (auto it = spec.u0.find(p); it != spec.u0.end()) u0 = it->second;
    auto menu = coefficient_menu(p, u0);
    auto check = [&](const Rational& a) {
      if (std::find(menu.begin(), menu.end(), a) == menu.end()) {
        throw ConfigurationError("coefficient " + to_string(a) + " is outside the standard menu at p=" +
                                 std::to_string(p));
      }
    };
    check(c.a1);
    if (n == 4) check(c.a2);
    finite.push_back(PlaceForm::padic(p, standard_gram<Rational>(n, c.a1, c.a2)));
  }
  return SQuadraticForm(s, std::move(real), std::move(finite));
}

GenericFormSample random_generic_form(std::uint64_t seed, int n, const SSet& s, int steps,
                                      const StandardFormSpec& base) {
  if (steps < 1) throw ConfigurationError("steps must be at least 1");
  require_rank(n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_row(0, n - 1);
  std::uniform_int_distribution<int> pick_col(0, n - 2);
  std::uniform_real_distribution<double> real_amount(-1.0, 1.0);

  STransform g = STransform::identity(n, s);
  for (int step = 0; step < steps; ++step) {
    int i = pick_row(rng);
    int j = pick_col(rng);
    if (j >= i) ++j;
    // Right multiplication by I + c e_i e_j^T: column j += c * column i.
    const Real c = static_cast<Real>(real_amount(rng));
    for (int r = 0; r < n; ++r) g.real(r, j) += c * g.real(r, i);
    for (std::size_t k = 0; k < s.finite_count(); ++k) {
      const auto p = static_cast<long>(s.primes()[k]);
      std::uniform_int_distribution<long> num_dist(-p * p, p * p);
      std::uniform_int_distribution<long> den_dist(1, p * p);
      long num = num_dist(rng);
      long den = den_dist(rng);
      while (den % p == 0) den = den_dist(rng);
      Rational cp = make_rational(num, den);
      auto& gp = g.finite[k];
      for (int r = 0; r < n; ++r) gp(r, j) += cp * gp(r, i);
    }
  }
  return {apply_transform(standard_form(n, s, base), g), g};
}

namespace {

// Best rational approximation with denominator at most max_den (continued fractions).
Rational best_rational(Real x, long max_den) {
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  Real y = x;
  for (int iter = 0; iter < 64; ++iter) {
    Real a_real = std::floor(y);
    if (std::fabs(a_real) > 1e18L) break;
    Integer a = Integer(static_cast<long>(a_real));
    Integer h2 = a * h1 + h0;
    Integer k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    Real frac = y - a_real;
    if (frac == 0) break;
    y = 1 / frac;
  }
  if (k1 == 0) return Rational(Integer(static_cast<long>(std::floor(x))));
  return make_rational(h1, k1);
}

bool close(Real x, Real y, Real tol) { return std::fabs(x - y) <= tol * std::max<Real>(1, std::fabs(y)); }

}  // namespace

RationalityVerdict rationality_witness(const SQuadraticForm& q, Real tol) {
  RationalityVerdict out;
  out.tolerance = tol;
  const int n = q.rank();
  std::vector<std::pair<int, int>> entries;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) entries.emplace_back(i, j);

  auto fail = [&](const std::string& place, std::pair<int, int> pivot, std::pair<int, int> witness) {
    out.rational = false;
    out.evidence_place = place;
    out.pivot = pivot;
    out.witness = witness;
    return out;
  };

  RationalMatrix common(n);
  std::pair<int, int> pivot{-1, -1};
  if (!q.finite().empty()) {
    const auto& ref = q.finite().front().exact_gram();
    for (auto e : entries) {
      if (ref(e.first, e.second) != 0) {
        pivot = e;
        break;
      }
    }
    const Rational scale = ref(pivot.first, pivot.second);
    for (auto [i, j] : entries) {
      common(i, j) = ref(i, j) / scale;
      common(j, i) = common(i, j);
    }
    for (const auto& f : q.finite()) {
      const auto& g = f.exact_gram();
      const Rational lam = g(pivot.first, pivot.second);
      if (lam == 0) return fail(f.place().name(), pivot, pivot);
      for (auto [i, j] : entries) {
        if (g(i, j) != lam * common(i, j)) return fail(f.place().name(), pivot, {i, j});
      }
      out.lambda_finite.push_back(lam);
    }
    const auto& r = q.real().real_gram();
    const Real lam = r(pivot.first, pivot.second);
    if (std::fabs(lam) <= tol) return fail("inf", pivot, pivot);
    for (auto [i, j] : entries) {
      if (!close(r(i, j) / lam, to_real(common(i, j)), tol)) return fail("inf", pivot, {i, j});
    }
    out.lambda_inf = lam;
  } else {
    const auto& r = q.real().real_gram();
    Real best = 0;
    for (auto e : entries) {
      if (std::fabs(r(e.first, e.second)) > best) {
        best = std::fabs(r(e.first, e.second));
      }
    }
    for (auto e : entries) {
      if (std::fabs(r(e.first, e.second)) > tol * best) {
        pivot = e;
        break;
      }
    }
    const Real lam = r(pivot.first, pivot.second);
    const long max_den = std::max(1L, static_cast<long>(std::cbrt(1 / tol)));
    for (auto [i, j] : entries) {
      const Real ratio = r(i, j) / lam;
      Rational approx = best_rational(ratio, max_den);
      if (!close(ratio, to_real(approx), tol)) return fail("inf", pivot, {i, j});
      common(i, j) = approx;
      common(j, i) = approx;
    }
    out.lambda_inf = lam;
  }
  out.rational = true;
  out.common = std::move(common);
  out.pivot = pivot;
  return out;
}

std::string RationalityVerdict::describe() const {
  std::ostringstream os;
  if (rational) {
    os << "rational (lambda_inf=" << static_cast<double>(lambda_inf);
    for (std::size_t i = 0; i < lambda_finite.size(); ++i) os << ", lambda_" << i << "=" << to_string(lambda_finite[i]);
    os << ")";
  } else {
    os << "irrational evidence at " << evidence_place << ": entry (" << witness.first + 1 << ","
       << witness.second + 1 << ") against pivot (" << pivot.first + 1 << "," << pivot.second + 1
       << ") fails the ratio test at tol=" << static_cast<double>(tolerance);
  }
  return os.str();
}

std::string serialize(const SQuadraticForm& q) {
  std::ostringstream os;
  const int n = q.rank();
  os << "inf:";
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) os << ' ' << to_string(exact_rational(q.real().real_gram()(i, j)));
  os << '\n';
  for (const auto& f : q.finite()) {
    os << f.place().prime() << ':';
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) os << ' ' << to_string(f.exact_gram()(i, j));
    os << '\n';
  }
  return os.str();
}

SQuadraticForm parse_form(const std::string& text, const SSet& s) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::vector<std::string>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ConfigurationError("form line " + std::to_string(lineno) + ": missing ':'");
    std::string key = line.substr(0, colon);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream vals(line.substr(colon + 1));
    std::vector<std::string> tokens;
    for (std::string tok; vals >> tok;) tokens.push_back(tok);
    rows[key] = std::move(tokens);
  }
  auto rank_of = [](std::size_t count) {
    if (count == 6) return 3;
    if (count == 10) return 4;
    throw ConfigurationError("form rows need 6 (rank 3) or 10 (rank 4) upper-triangular entries");
  };
  auto it = rows.find("inf");
  if (it == rows.end()) throw ConfigurationError("form is missing the 'inf' row");
  const int n = rank_of(it->second.size());
  auto fill = [n](const std::vector<std::string>& tokens, auto parse, auto& gram) {
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        gram(i, j) = parse(tokens[k++]);
        gram(j, i) = gram(i, j);
      }
  };
  RealMatrix real(n);
  fill(it->second, [](const std::string& t) { return parse_real(t); }, real);
  std::vector<PlaceForm> finite;
  for (auto p : s.primes()) {
    auto row = rows.find(std::to_string(p));
    if (row == rows.end()) throw ConfigurationError("form is missing the row for p=" + std::to_string(p));
    if (rank_of(row->second.size()) != n) throw ConfigurationError("form rows disagree on rank");
    RationalMatrix gram(n);
    fill(row->second, [](const std::string& t) { return parse_rational(t); }, gram);
    finite.push_back(PlaceForm::padic(p, std::move(gram)));
  }
  if (rows.size() != s.finite_count() + 1) throw ConfigurationError("form has rows for places outside S");
  return SQuadraticForm(s, PlaceForm::real(std::move(real)), std::move(finite));
}

}  // namespace oppenheim
