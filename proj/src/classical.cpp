// Copyright 2026 The estalg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "estalg/classical.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "estalg/error.hpp"

namespace estalg::classical {

namespace {

int total(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

void require_vars(int a, int b, const char* what) {
  if (a != b) throw InputError(std::string(what) + ": number of variables differs");
}

// c!/(c-m)!
mpz_class falling_factorial(int c, int m) {
  mpz_class r = 1;
  for (int i = 0; i < m; ++i) r *= c - i;
  return r;
}

mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

std::string var_name(const char* stem, int n, int i) {
  return n == 1 ? std::string(stem) : std::string(stem) + std::to_string(i + 1);
}

// Renders sum c * factors, largest term first.
template <typename Terms, typename Factors>
std::string render(const Terms& terms, Factors factors) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const Rational& c = it->second;
    const std::string f = factors(it->first);
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    const Rational a = abs(c);
    if (f.empty()) {
      os << a.get_str();
    } else if (a == 1) {
      os << f;
    } else {
      os << a.get_str() << "*" << f;
    }
    first = false;
  }
  return os.str();
}

std::string monomial_factors(const MultiIndex& powers, std::size_t offset, std::size_t count,
                             const char* stem, int n) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    const int p = powers[offset + i];
    if (p == 0) continue;
    if (!out.empty()) out += "*";
    out += var_name(stem, n, static_cast<int>(i));
    if (p > 1) out += "^" + std::to_string(p);
  }
  return out;
}

}  // namespace

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int ta = total(a);
  const int tb = total(b);
  if (ta != tb) return ta < tb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(int n_vars) : n_(n_vars) {
  if (n_vars < 1) throw InputError("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(int n_vars, const Rational& c) {
  Polynomial p(n_vars);
  p.add_term(MultiIndex(static_cast<std::size_t>(n_vars), 0), c);
  return p;
}

Polynomial Polynomial::variable(int n_vars, int i) {
  MultiIndex m(static_cast<std::size_t>(n_vars), 0);
  m.at(static_cast<std::size_t>(i)) = 1;
  return monomial(n_vars, std::move(m), 1);
}

Polynomial Polynomial::monomial(int n_vars, MultiIndex powers, const Rational& c) {
  Polynomial p(n_vars);
  p.add_term(powers, c);
  return p;
}

int Polynomial::degree() const { return terms_.empty() ? -1 : total(terms_.rbegin()->first); }

void Polynomial::add_term(const MultiIndex& powers, const Rational& c) {
  if (static_cast<int>(powers.size()) != n_) throw InputError("monomial has wrong number of powers");
  for (int p : powers) {
    if (p < 0) throw InputError("monomial powers must be non-negative");
  }
  Rational v = c;
  v.canonicalize();
  if (v == 0) return;
  auto [it, inserted] = terms_.try_emplace(powers, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial out(n_);
  for (const auto& [m, c] : terms_) {
    const int p = m.at(static_cast<std::size_t>(i));
    if (p == 0) continue;
    MultiIndex d = m;
    d[static_cast<std::size_t>(i)] -= 1;
    out.add_term(d, c * p);
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_vars(n_, o.n_, "polynomial +");
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_vars(n_, o.n_, "polynomial *");
  Polynomial out(n_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      MultiIndex m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
  Polynomial out(p.n_);
  if (s == 0) return out;
  out.terms_ = p.terms_;
  for (auto& [m, c] : out.terms_) c *= s;
  return out;
}

std::string Polynomial::to_string() const {
  const std::size_t n = static_cast<std::size_t>(n_);
  return render(terms_, [&](const MultiIndex& m) { return monomial_factors(m, 0, n, "x", n_); });
}

// ---------------------------------------------------------------------------
// PolyDiffOp

PolyDiffOp::PolyDiffOp(int n_vars) : n_(n_vars) {
  if (n_vars < 1) throw InputError("differential operator needs at least one variable");
}

PolyDiffOp PolyDiffOp::multiplication(const Polynomial& p) {
  PolyDiffOp out(p.n_vars());
  const MultiIndex zero(static_cast<std::size_t>(p.n_vars()), 0);
  for (const auto& [m, c] : p.terms()) out.add_term(m, zero, c);
  return out;
}

PolyDiffOp PolyDiffOp::partial(int n_vars, int i) {
  PolyDiffOp out(n_vars);
  MultiIndex k(static_cast<std::size_t>(n_vars), 0);
  k.at(static_cast<std::size_t>(i)) = 1;
  out.add_term(MultiIndex(static_cast<std::size_t>(n_vars), 0), k, 1);
  return out;
}

int PolyDiffOp::total_degree() const { return terms_.empty() ? -1 : total(terms_.rbegin()->first); }

Rational PolyDiffOp::coefficient(const MultiIndex& powers, const MultiIndex& orders) const {
  MultiIndex key = powers;
  key.insert(key.end(), orders.begin(), orders.end());
  const auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PolyDiffOp::add_term(const MultiIndex& powers, const MultiIndex& orders, const Rational& c) {
  if (static_cast<int>(powers.size()) != n_ || static_cast<int>(orders.size()) != n_) {
    throw InputError("differential operator term has wrong number of indices");
  }
  MultiIndex key = powers;
  key.insert(key.end(), orders.begin(), orders.end());
  add_key(key, c);
}

void PolyDiffOp::add_key(const MultiIndex& key, const Rational& c) {
  if (static_cast<int>(key.size()) != 2 * n_) throw InputError("differential operator key size");
  Rational v = c;
  v.canonicalize();
  if (v == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) terms_.erase(it);
  }
}

PolyDiffOp PolyDiffOp::operator+(const PolyDiffOp& o) const {
  require_vars(n_, o.n_, "operator +");
  PolyDiffOp out = *this;
  for (const auto& [k, c] : o.terms_) out.add_key(k, c);
  return out;
}

PolyDiffOp PolyDiffOp::operator-(const PolyDiffOp& o) const { return *this + (-o); }

PolyDiffOp PolyDiffOp::operator-() const {
  PolyDiffOp out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

PolyDiffOp operator*(const Rational& s, const PolyDiffOp& p) {
  PolyDiffOp out(p.n_);
  if (s == 0) return out;
  out.terms_ = p.terms_;
  for (auto& [k, c] : out.terms_) c *= s;
  return out;
}

std::string PolyDiffOp::to_string() const {
  const std::size_t n = static_cast<std::size_t>(n_);
  return render(terms_, [&](const MultiIndex& key) {
    const std::string xs = monomial_factors(key, 0, n, "x", n_);
    const std::string ds = monomial_factors(key, n, n, "d", n_);
    if (xs.empty()) return ds;
    if (ds.empty()) return xs;
    return xs + "*" + ds;
  });
}

PolyDiffOp diffop_compose(const PolyDiffOp& p, const PolyDiffOp& q) {
  require_vars(p.n_vars(), q.n_vars(), "diffop_compose");
  const std::size_t n = static_cast<std::size_t>(p.n_vars());
  PolyDiffOp out(p.n_vars());
  MultiIndex m(n, 0);
  MultiIndex key(2 * n, 0);
  for (const auto& [pk, pc] : p.terms()) {
    for (const auto& [qk, qc] : q.terms()) {
      // x^a d^b o x^c d^e = sum_m prod_i C(b_i, m_i) c_i!/(c_i - m_i)! x^{a+c-m} d^{b-m+e}
      std::fill(m.begin(), m.end(), 0);
      for (;;) {
        mpz_class weight = 1;
        for (std::size_t i = 0; i < n; ++i) {
          weight *= binomial(pk[n + i], m[i]) * falling_factorial(qk[i], m[i]);
          key[i] = pk[i] + qk[i] - m[i];
          key[n + i] = pk[n + i] - m[i] + qk[n + i];
        }
        out.add_key(key, pc * qc * Rational(weight));
        // odometer over 0 <= m_i <= min(b_i, c_i)
        std::size_t i = 0;
        for (; i < n; ++i) {
          if (m[i] < std::min(pk[n + i], qk[i])) {
            ++m[i];
            break;
          }
          m[i] = 0;
        }
        if (i == n) break;
      }
    }
  }
  return out;
}

PolyDiffOp diffop_bracket(const PolyDiffOp& p, const PolyDiffOp& q) {
  return diffop_compose(p, q) - diffop_compose(q, p);
}

PolyDiffOp formal_adjoint(const PolyDiffOp& p) {
  const int n = p.n_vars();
  const std::size_t un = static_cast<std::size_t>(n);
  PolyDiffOp out(n);
  for (const auto& [key, c] : p.terms()) {
    const MultiIndex powers(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(un));
    const MultiIndex orders(key.begin() + static_cast<std::ptrdiff_t>(un), key.end());
    PolyDiffOp derivs(n);
    derivs.add_term(MultiIndex(un, 0), orders, total(orders) % 2 == 0 ? c : Rational(-c));
    out = out + diffop_compose(derivs, PolyDiffOp::multiplication(Polynomial::monomial(n, powers, 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering model

ClassicalModel::ClassicalModel(int n_vars, std::vector<Polynomial> drift,
                               std::vector<Polynomial> observation, Rational gamma0)
    : n_(n_vars), v_(std::move(drift)), h_(std::move(observation)), gamma0_(std::move(gamma0)) {
  gamma0_.canonicalize();
  if (n_ < 1) throw InputError("n_vars must be at least 1");
  if (static_cast<int>(v_.size()) != n_) {
    throw InputError("drift v must have n_vars = " + std::to_string(n_) + " components");
  }
  for (const auto& p : v_) require_vars(p.n_vars(), n_, "drift");
  for (const auto& p : h_) require_vars(p.n_vars(), n_, "observation");
  if (!(gamma0_ > 0)) throw InputError("gamma0 must be positive");
}

PolyDiffOp dmz_generator(const ClassicalModel& model) {
  const int n = model.n_vars();
  const Rational half_g2 = Rational(1, 2) * model.gamma0() * model.gamma0();
  PolyDiffOp out(n);
  for (int i = 0; i < n; ++i) {
    const PolyDiffOp d = PolyDiffOp::partial(n, i);
    out = out + half_g2 * diffop_compose(d, d);
    out = out - diffop_compose(d, PolyDiffOp::multiplication(model.drift()[static_cast<std::size_t>(i)]));
  }
  for (const auto& h : model.observation()) {
    out = out - Rational(1, 2) * PolyDiffOp::multiplication(h * h);
  }
  return out;
}

std::vector<std::vector<Polynomial>> gauge_field(const ClassicalModel& model) {
  const int n = model.n_vars();
  std::vector<std::vector<Polynomial>> f(static_cast<std::size_t>(n),
                                         std::vector<Polynomial>(static_cast<std::size_t>(n), Polynomial(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          model.drift()[static_cast<std::size_t>(i)].derivative(j) -
          model.drift()[static_cast<std::size_t>(j)].derivative(i);
    }
  }
  return f;
}

Polynomial potential_phi(const ClassicalModel& model) {
  const int n = model.n_vars();
  const Rational inv_g2 = 1 / (model.gamma0() * model.gamma0());
  Polynomial sum(n);
  for (const auto& h : model.observation()) sum = sum + h * h;
  for (int i = 0; i < n; ++i) {
    const Polynomial& v = model.drift()[static_cast<std::size_t>(i)];
    sum = sum + v.derivative(i) + inv_g2 * (v * v);
  }
  return Rational(1, 2) * sum;
}

PolyDiffOp gauge_derivative(const ClassicalModel& model, int i) {
  const int n = model.n_vars();
  const Rational inv_g2 = 1 / (model.gamma0() * model.gamma0());
  return PolyDiffOp::partial(n, i) -
         inv_g2 * PolyDiffOp::multiplication(model.drift().at(static_cast<std::size_t>(i)));
}

PolyDiffOp completed_square(const ClassicalModel& model) {
  const int n = model.n_vars();
  const Rational half_g2 = Rational(1, 2) * model.gamma0() * model.gamma0();
  PolyDiffOp out(n);
  for (int i = 0; i < n; ++i) {
    const PolyDiffOp d = gauge_derivative(model, i);
    out = out + half_g2 * diffop_compose(d, d);
  }
  return out - PolyDiffOp::multiplication(potential_phi(model));
}

bool is_exact(const ClassicalModel& model) {
  for (const auto& row : gauge_field(model)) {
    for (const auto& f : row) {
      if (!f.is_zero()) return false;
    }
  }
  return true;
}

BenesVerdict benes_class(const ClassicalModel& model) {
  BenesVerdict v;
  if (!is_exact(model)) v.reasons.push_back("not exact: gauge field F is nonzero");
  for (std::size_t k = 0; k < model.observation().size(); ++k) {
    const int deg = model.observation()[k].degree();
    if (deg > 1) {
      v.reasons.push_back("h[" + std::to_string(k) + "] has degree " + std::to_string(deg) + " > 1");
    }
  }
  const int phi_deg = potential_phi(model).degree();
  if (phi_deg > 2) v.reasons.push_back("Phi has degree " + std::to_string(phi_deg) + " > 2");
  v.is_benes = v.reasons.empty();
  return v;
}

namespace {

// Row-echelon span over Q keyed by leading term.
class RationalSpan {
 public:
  /// Reduces `p` modulo the span; the result has no pivot key of the span.
  PolyDiffOp reduce(PolyDiffOp p) const {
    for (;;) {
      const MultiIndex* hit = nullptr;
      std::size_t row = 0;
      for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto found = pivots_.find(it->first);
        if (found != pivots_.end()) {
          hit = &it->first;
          row = found->second;
          break;
        }
      }
      if (hit == nullptr) return p;
      const PolyDiffOp& r = rows_[row];
      const Rational factor = p.terms().at(*hit) / r.terms().at(*hit);
      p = p - factor * r;
    }
  }

  void push(PolyDiffOp reduced) {
    pivots_.emplace(reduced.terms().rbegin()->first, rows_.size());
    rows_.push_back(std::move(reduced));
  }

  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<PolyDiffOp>& rows() const noexcept { return rows_; }

 private:
  std::vector<PolyDiffOp> rows_;
  std::map<MultiIndex, std::size_t, GradedLex> pivots_;
};

}  // namespace

ClassicalClosureReport classical_closure(const ClassicalModel& model, std::size_t cap,
                                         int degree_limit) {
  if (cap < 2) throw InputError("classical_closure: cap must be at least 2");
  ClassicalClosureReport report;
  RationalSpan span;

  auto guard = [&](const PolyDiffOp& p) {
    if (p.total_degree() > degree_limit) throw DegreeGuardError(p.total_degree(), degree_limit);
  };
  auto offer = [&](const PolyDiffOp& p) {
    guard(p);
    PolyDiffOp r = span.reduce(p);
    if (!r.is_zero()) span.push(std::move(r));
  };

  offer(dmz_generator(model));
  for (const auto& h : model.observation()) offer(PolyDiffOp::multiplication(h));
  report.growth_trace.push_back(span.size());

  auto finish = [&](ClosureOutcome outcome) {
    report.outcome = outcome;
    report.dimension = span.size();
    report.basis = span.rows();
    return report;
  };
  if (span.size() > cap) return finish(ClosureOutcome::kCapExceeded);

  std::size_t done = 0;
  for (;;) {
    const std::size_t n = span.size();
    for (std::size_t j = done; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        ++report.bracket_count;
        offer(diffop_bracket(span.rows()[i], span.rows()[j]));
        if (span.size() > cap) {
          report.growth_trace.push_back(span.size());
          return finish(ClosureOutcome::kCapExceeded);
        }
      }
    }
    done = n;
    report.growth_trace.push_back(span.size());
    if (span.size() == n) break;
  }
  return finish(ClosureOutcome::kFinite);
}

}  // namespace estalg::classical
