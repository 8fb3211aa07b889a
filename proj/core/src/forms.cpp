#include "qma/forms.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qma/errors.hpp"

namespace qma {

namespace {

// Sign of e_{mask1} ^ e_{mask2} relative to the canonical ascending order;
// masks must be disjoint.
int wedge_sign(std::uint32_t mask1, std::uint32_t mask2) {
  int sign = 1;
  for (std::uint32_t m2 = mask2; m2;) {
    const int j = std::countr_zero(m2);
    m2 &= m2 - 1;
    const std::uint32_t above = mask1 & ~((std::uint32_t(1) << (j + 1)) - 1);
    if (std::popcount(above) & 1) sign = -sign;
  }
  return sign;
}

}  // namespace

const FrameTables& FrameTables::get(int n) {
  static std::map<int, FrameTables> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  FrameTables t;
  t.n = n;
  t.axes = 4 * n;
  t.nz = 2 * n;
  t.structure = structure_matrices(n);

  const Complex I{0.0, 1.0};
  auto axis = [n](int comp, int r) { return comp * n + r; };

  // interleaved order (zeta^{2r}, zeta^{2r+1}) per quaternionic coordinate,
  // so the flat form sum_r zeta^{2r} ^ zeta^{2r+1} has positively oriented
  // top power
  t.frame.assign(t.axes, std::vector<Complex>(t.axes, 0.0));
  for (int r = 0; r < n; ++r) {
    t.frame[2 * r][axis(0, r)] = 1.0;
    t.frame[2 * r][axis(1, r)] = I;
    t.frame[2 * r + 1][axis(2, r)] = 1.0;
    t.frame[2 * r + 1][axis(3, r)] = I;
  }
  for (int b = 0; b < t.nz; ++b)
    for (int a = 0; a < t.axes; ++a)
      t.frame[t.nz + b][a] = std::conj(t.frame[b][a]);

  // holomorphy check: row . I0 == i row for b < 2n
  for (int b = 0; b < t.nz; ++b)
    for (int a2 = 0; a2 < t.axes; ++a2) {
      Complex v{0.0, 0.0};
      for (int a = 0; a < t.axes; ++a)
        v += t.frame[b][a] * t.structure.I0(a, a2);
      if (std::abs(v - I * t.frame[b][a2]) > 1e-14)
        throw Error("frame covector is not (1,0) for I0");
    }

  t.dx_in_frame.assign(t.axes, {});
  for (int r = 0; r < n; ++r) {
    const int za = 2 * r;
    const int zb = 2 * r + 1;
    t.dx_in_frame[axis(0, r)] = {{za, 0.5}, {t.nz + za, 0.5}};
    t.dx_in_frame[axis(1, r)] = {{za, -0.5 * I}, {t.nz + za, 0.5 * I}};
    t.dx_in_frame[axis(2, r)] = {{zb, 0.5}, {t.nz + zb, 0.5}};
    t.dx_in_frame[axis(3, r)] = {{zb, -0.5 * I}, {t.nz + zb, 0.5 * I}};
  }
  for (int a = 0; a < t.axes; ++a)
    for (int a2 = 0; a2 < t.axes; ++a2) {
      Complex v{0.0, 0.0};
      for (const auto& [b, w] : t.dx_in_frame[a]) v += w * t.frame[b][a2];
      if (std::abs(v - (a == a2 ? 1.0 : 0.0)) > 1e-14)
        throw Error("dx expansion over the frame is inconsistent");
    }

  t.jrow.assign(t.axes, {});
  for (int b = 0; b < t.axes; ++b) {
    std::vector<Complex> v(t.axes, 0.0);
    for (int a2 = 0; a2 < t.axes; ++a2)
      for (int a = 0; a < t.axes; ++a)
        v[a2] += t.frame[b][a] * t.structure.J0(a, a2);
    std::vector<Complex> w(t.axes, 0.0);
    for (int a = 0; a < t.axes; ++a)
      for (const auto& [b2, c] : t.dx_in_frame[a]) w[b2] += v[a] * c;
    for (int b2 = 0; b2 < t.axes; ++b2)
      if (std::abs(w[b2]) > 1e-13) t.jrow[b].push_back({b2, w[b2]});
  }

  auto [ins, ok] = cache.emplace(n, std::move(t));
  return ins->second;
}

PolyForm PolyForm::function(int n, const Poly& u) {
  PolyForm f(n);
  f.add_term(0, u);
  return f;
}

PolyForm PolyForm::frame_covector(int n, int frame_index) {
  PolyForm f(n);
  f.add_term(std::uint32_t(1) << frame_index, Poly::constant(4 * n, 1.0));
  return f;
}

void PolyForm::add_term(std::uint32_t mask, const Poly& coeff) {
  if (coeff.empty()) return;
  auto [it, inserted] = terms_.emplace(mask, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.empty()) terms_.erase(it);
  }
}

PolyForm PolyForm::operator+(const PolyForm& o) const {
  PolyForm r = *this;
  for (const auto& [m, p] : o.terms_) r.add_term(m, p);
  return r;
}

PolyForm PolyForm::operator-(const PolyForm& o) const {
  PolyForm r = *this;
  for (const auto& [m, p] : o.terms_) r.add_term(m, p * Complex(-1.0));
  return r;
}

PolyForm PolyForm::operator*(Complex s) const {
  PolyForm r(n_);
  for (const auto& [m, p] : terms_) r.add_term(m, p * s);
  return r;
}

PolyForm PolyForm::wedge(const PolyForm& o) const {
  PolyForm r(n_);
  for (const auto& [ma, pa] : terms_)
    for (const auto& [mb, pb] : o.terms_) {
      if (ma & mb) continue;
      const int sign = wedge_sign(ma, mb);
      r.add_term(ma | mb, (pa * pb) * Complex(double(sign)));
    }
  return r;
}

PolyForm PolyForm::conj_form() const {
  const FrameTables& t = FrameTables::get(n_);
  PolyForm r(n_);
  for (const auto& [mask, p] : terms_) {
    std::uint32_t acc = 0;
    int sign = 1;
    for (std::uint32_t m = mask; m;) {
      const int b = std::countr_zero(m);
      m &= m - 1;
      const int bc = b < t.nz ? b + t.nz : b - t.nz;
      const std::uint32_t bit = std::uint32_t(1) << bc;
      sign *= wedge_sign(acc, bit);
      acc |= bit;
    }
    r.add_term(acc, p.conj() * Complex(double(sign)));
  }
  return r;
}

double PolyForm::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mask, p] : terms_) m = std::max(m, p.max_abs_coeff());
  return m;
}

PolyForm PolyForm::bidegree(int p, int q) const {
  const FrameTables& t = FrameTables::get(n_);
  const std::uint32_t lo = (std::uint32_t(1) << t.nz) - 1;
  PolyForm r(n_);
  for (const auto& [mask, poly] : terms_) {
    const int np = std::popcount(mask & lo);
    const int nq = std::popcount(mask >> t.nz);
    if (np == p && nq == q) r.add_term(mask, poly);
  }
  return r;
}

std::map<std::uint32_t, Complex> PolyForm::eval_at(
    const std::vector<double>& x) const {
  std::map<std::uint32_t, Complex> out;
  for (const auto& [mask, p] : terms_) {
    const Complex v = p.eval(x);
    if (v != Complex{0.0, 0.0}) out[mask] += v;
  }
  return out;
}

PolyForm wedge_pow(const PolyForm& f, int k) {
  PolyForm r = PolyForm::function(f.n(), Poly::constant(4 * f.n(), 1.0));
  for (int i = 0; i < k; ++i) r = r.wedge(f);
  return r;
}

std::pair<PolyForm, PolyForm> d_split(const PolyForm& f) {
  const FrameTables& t = FrameTables::get(f.n());
  PolyForm del(f.n()), delbar(f.n());
  for (const auto& [mask, poly] : f.terms()) {
    for (int a = 0; a < t.axes; ++a) {
      const Poly da = poly.diff(a);
      if (da.empty()) continue;
      for (const auto& [b, w] : t.dx_in_frame[a]) {
        const std::uint32_t bit = std::uint32_t(1) << b;
        if (mask & bit) continue;
        const int sign = wedge_sign(bit, mask);
        const Poly coeff = da * (w * double(sign));
        if (b < t.nz)
          del.add_term(bit | mask, coeff);
        else
          delbar.add_term(bit | mask, coeff);
      }
    }
  }
  return {del, delbar};
}

PolyForm J_act(const PolyForm& f) {
  const FrameTables& t = FrameTables::get(f.n());
  PolyForm r(f.n());
  for (const auto& [mask, poly] : f.terms()) {
    // expand J(e_{b1}) ^ J(e_{b2}) ^ ... in the original slot order
    std::vector<std::pair<std::uint32_t, Complex>> acc = {{0u, Complex{1.0, 0.0}}};
    for (std::uint32_t m = mask; m;) {
      const int b = std::countr_zero(m);
      m &= m - 1;
      std::vector<std::pair<std::uint32_t, Complex>> next;
      for (const auto& [am, ac] : acc)
        for (const auto& [b2, w] : t.jrow[b]) {
          const std::uint32_t bit = std::uint32_t(1) << b2;
          if (am & bit) continue;
          next.push_back({am | bit, ac * w * double(wedge_sign(am, bit))});
        }
      acc = std::move(next);
    }
    for (const auto& [am, ac] : acc) r.add_term(am, poly * ac);
  }
  return r;
}

PolyForm J_inv_act(const PolyForm& f) {
  PolyForm r(f.n());
  const PolyForm jf = J_act(f);
  for (const auto& [mask, poly] : jf.terms()) {
    const int k = std::popcount(mask);
    r.add_term(mask, (k & 1) ? poly * Complex(-1.0) : poly);
  }
  return r;
}

PolyForm partial_J(const PolyForm& f) {
  return J_inv_act(d_split(J_act(f)).second);
}

PolyForm dd_J(int n, const Poly& u) {
  return d_split(partial_J(PolyForm::function(n, u))).first;
}

Complex top_coeff(const PolyForm& f, const std::vector<double>& x) {
  const FrameTables& t = FrameTables::get(f.n());
  const std::uint32_t top = (std::uint32_t(1) << t.nz) - 1;
  const auto vals = f.eval_at(x);
  const auto it = vals.find(top);
  return it == vals.end() ? Complex{0.0, 0.0} : it->second;
}

HyperhermitianMatrix metric_from_form(const PolyForm& omega,
                                      const std::vector<double>& x) {
  const FrameTables& t = FrameTables::get(omega.n());

  const PolyForm qreal_defect = J_act(omega) - omega.conj_form();
  double defect = 0.0;
  for (const auto& [mask, v] : qreal_defect.eval_at(x))
    defect = std::max(defect, std::abs(v));
  if (defect > 1e-10)
    throw NotQReal("form is not q-real at the evaluation point, defect " +
                   std::to_string(defect));

  // W_ab = Omega(e_a, e_b); then [g] = J0 * Re(W)
  const auto vals = omega.eval_at(x);
  RealMatrix w(t.axes);
  for (const auto& [mask, v] : vals) {
    if (std::popcount(mask) != 2) continue;
    const int b1 = std::countr_zero(mask);
    const int b2 = std::countr_zero(mask & (mask - 1));
    for (int a = 0; a < t.axes; ++a)
      for (int b = 0; b < t.axes; ++b) {
        const Complex e = t.frame[b1][a] * t.frame[b2][b] -
                          t.frame[b1][b] * t.frame[b2][a];
        w(a, b) += (v * e).real();
      }
  }
  RealMatrix g = t.structure.J0 * w;
  g = (g + g.transpose()) * 0.5;
  return HyperhermitianMatrix::unchecked(iota_inverse(p_project(g)));
}

PolyForm hessian_form(const HyperhermitianMatrix& h) {
  const int n = h.n();
  const int axes = 4 * n;
  const RealMatrix s = iota(h.quat()) * 0.25;
  Poly u(axes);
  for (int a = 0; a < axes; ++a)
    for (int b = 0; b < axes; ++b) {
      if (s(a, b) == 0.0) continue;
      const std::uint64_t key = (std::uint64_t(1) << (8 * a)) +
                                (std::uint64_t(1) << (8 * b));
      u.add_term(key, 0.5 * s(a, b));
    }
  return dd_J(n, u);
}

PolyForm matrix_to_form(const HyperhermitianMatrix& g, double kappa) {
  return hessian_form(g * (1.0 / kappa));
}

}  // namespace qma
