#include "forge/exterior.hpp"

#include <bit>
#include <stdexcept>

namespace forge {

Chart::Chart(std::vector<std::string> coordinate_names, SampleDomain d)
    : names(std::move(coordinate_names)), domain(std::move(d)) {
  if (names.empty()) throw std::invalid_argument("chart needs at least one coordinate");
  if (static_cast<int>(names.size()) > kMaxCoordinates)
    throw std::invalid_argument("chart has too many coordinates");
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw std::invalid_argument("duplicate coordinate name " + names[i]);
  if (domain.dimension() != dim()) throw std::invalid_argument("domain dimension differs from chart");
  domain.validate();
}

Chart::Chart(std::vector<std::string> coordinate_names, double lower, double upper)
    : Chart(coordinate_names, SampleDomain::box(static_cast<int>(coordinate_names.size()), lower, upper)) {}

Components Components::basis(int n, int i) {
  Components b(n);
  b[i] = Expr(1);
  return b;
}

Expr VectorField::apply(const Expr& f) const {
  Expr acc;
  for (int a = 0; a < size(); ++a)
    if (!c[a].is_zero()) acc += c[a] * f.diff(a);
  return acc;
}

std::string VectorField::str(const std::vector<std::string>& names) const {
  std::string out;
  for (int a = 0; a < size(); ++a) {
    if (c[a].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c[a].str(names) + ")*d/d" + names[a];
  }
  return out.empty() ? "0" : out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  VectorField r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  VectorField r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

VectorField operator*(const Expr& f, const VectorField& v) {
  VectorField r(v.size());
  for (int i = 0; i < v.size(); ++i) r[i] = f * v[i];
  return r;
}

int popcount(Mask m) { return std::popcount(m); }

std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int j : mask_indices(b)) inversions += std::popcount(a >> (j + 1));
  return inversions % 2 ? -1 : 1;
}

// ---- AlternatingForm -----------------------------------------------------

template <class Tag>
AlternatingForm<Tag> AlternatingForm<Tag>::scalar(int dim, const Expr& f) {
  AlternatingForm r(dim, 0);
  r.add(0, f);
  return r;
}

template <class Tag>
AlternatingForm<Tag> AlternatingForm<Tag>::coframe(int dim, int i) {
  AlternatingForm r(dim, 1);
  r.add(Mask{1} << i, Expr(1));
  return r;
}

template <class Tag>
Expr AlternatingForm<Tag>::get(Mask m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? Expr() : it->second;
}

template <class Tag>
Expr AlternatingForm<Tag>::component(const std::vector<int>& indices) const {
  Mask m = 0;
  int sign = 1;
  for (int i : indices) {
    Mask bit = Mask{1} << i;
    int s = merge_sign(m, bit);
    if (s == 0) return Expr();
    sign *= s;
    m |= bit;
  }
  Expr v = get(m);
  return sign > 0 ? v : -v;
}

template <class Tag>
void AlternatingForm<Tag>::add(Mask m, const Expr& e) {
  if (popcount(m) != degree_) throw std::invalid_argument("form component of wrong degree");
  if (e.is_zero()) return;
  auto it = coeffs_.find(m);
  if (it == coeffs_.end()) {
    coeffs_.emplace(m, e);
  } else {
    it->second = it->second + e;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

template <class Tag>
void AlternatingForm<Tag>::set(Mask m, const Expr& e) {
  coeffs_.erase(m);
  add(m, e);
}

template <class Tag>
AlternatingForm<Tag> AlternatingForm<Tag>::operator+(const AlternatingForm& o) const {
  if (o.degree_ != degree_ || o.dim_ != dim_) throw std::invalid_argument("adding forms of different shape");
  AlternatingForm r = *this;
  for (const auto& [m, e] : o.coeffs_) r.add(m, e);
  return r;
}

template <class Tag>
AlternatingForm<Tag> AlternatingForm<Tag>::operator-() const {
  AlternatingForm r(dim_, degree_);
  for (const auto& [m, e] : coeffs_) r.add(m, -e);
  return r;
}

template <class Tag>
AlternatingForm<Tag> AlternatingForm<Tag>::operator-(const AlternatingForm& o) const {
  return *this + (-o);
}

template <class Tag>
AlternatingForm<Tag> AlternatingForm<Tag>::scaled(const Expr& f) const {
  AlternatingForm r(dim_, degree_);
  for (const auto& [m, e] : coeffs_) r.add(m, f * e);
  return r;
}

template <class Tag>
std::vector<Expr> AlternatingForm<Tag>::coefficient_list() const {
  std::vector<Expr> out;
  for (const auto& [m, e] : coeffs_) out.push_back(e);
  return out;
}

template <class Tag>
std::string AlternatingForm<Tag>::str(const std::vector<std::string>& coframe_names,
                                     const std::vector<std::string>& coordinate_names) const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [m, e] : coeffs_) {
    if (!out.empty()) out += " + ";
    out += "(" + e.str(coordinate_names) + ")";
    bool first = true;
    for (int i : mask_indices(m)) {
      out += first ? "*" : "^";
      first = false;
      out += i < static_cast<int>(coframe_names.size()) ? coframe_names[i] : "e" + std::to_string(i);
    }
  }
  return out;
}

template class AlternatingForm<CoordinateTag>;
template class AlternatingForm<FrameTag>;

template <class Tag>
AlternatingForm<Tag> wedge(const AlternatingForm<Tag>& a, const AlternatingForm<Tag>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge of forms on different spaces");
  AlternatingForm<Tag> r(a.dim(), a.degree() + b.degree());
  if (a.degree() + b.degree() > a.dim()) return r;
  for (const auto& [ma, ea] : a.coefficients())
    for (const auto& [mb, eb] : b.coefficients()) {
      int s = merge_sign(ma, mb);
      if (s == 0) continue;
      Expr t = ea * eb;
      r.add(ma | mb, s > 0 ? t : -t);
    }
  return r;
}

template <class Tag>
AlternatingForm<Tag> interior(const Components& v, const AlternatingForm<Tag>& a) {
  if (a.degree() == 0) throw std::invalid_argument("interior product of a degree-0 form");
  if (v.size() != a.dim()) throw std::invalid_argument("interior product dimension mismatch");
  AlternatingForm<Tag> r(a.dim(), a.degree() - 1);
  for (const auto& [m, e] : a.coefficients()) {
    int position = 0;
    for (int i : mask_indices(m)) {
      if (!v[i].is_zero()) {
        Expr t = v[i] * e;
        r.add(m & ~(Mask{1} << i), position % 2 ? -t : t);
      }
      ++position;
    }
  }
  return r;
}

template <class Tag>
Expr evaluate_on(const AlternatingForm<Tag>& a, const std::vector<Components>& vs) {
  if (static_cast<int>(vs.size()) != a.degree()) throw std::invalid_argument("wrong number of arguments for form");
  AlternatingForm<Tag> cur = a;
  for (const auto& v : vs) cur = interior(v, cur);
  return cur.get(0);
}

template DifferentialForm wedge(const DifferentialForm&, const DifferentialForm&);
template AForm wedge(const AForm&, const AForm&);
template DifferentialForm interior(const Components&, const DifferentialForm&);
template AForm interior(const Components&, const AForm&);
template Expr evaluate_on(const DifferentialForm&, const std::vector<Components>&);
template Expr evaluate_on(const AForm&, const std::vector<Components>&);

DifferentialForm exterior_derivative(const DifferentialForm& a) {
  DifferentialForm r(a.dim(), a.degree() + 1);
  if (a.degree() >= a.dim()) return r;
  for (const auto& [m, e] : a.coefficients())
    for (int b = 0; b < a.dim(); ++b) {
      Mask bit = Mask{1} << b;
      if (m & bit) continue;
      Expr de = e.diff(b);
      if (de.is_zero()) continue;
      int s = merge_sign(bit, m);
      r.add(m | bit, s > 0 ? de : -de);
    }
  return r;
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  if (v.size() != w.size()) throw std::invalid_argument("bracket of fields on different charts");
  VectorField r(v.size());
  for (int a = 0; a < v.size(); ++a) r[a] = v.apply(w[a]) - w.apply(v[a]);
  return r;
}

DifferentialForm lie_derivative(const VectorField& v, const DifferentialForm& a) {
  if (a.degree() == 0) return DifferentialForm::scalar(a.dim(), v.apply(a.get(0)));
  DifferentialForm r = exterior_derivative(interior(v, a));
  if (a.degree() < a.dim()) r = r + interior(v, exterior_derivative(a));
  return r;
}

std::vector<std::string> prefixed(const std::string& prefix, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(prefix + n);
  return out;
}

}  // namespace forge
