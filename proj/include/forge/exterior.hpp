#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forge/expr.hpp"

namespace forge {

struct Chart {
  std::vector<std::string> names;
  SampleDomain domain;

  Chart() = default;
  Chart(std::vector<std::string> coordinate_names, SampleDomain d);
  // Box [lower, upper]^n with default sampling parameters.
  Chart(std::vector<std::string> coordinate_names, double lower = -2.0, double upper = 2.0);

  int dim() const { return static_cast<int>(names.size()); }
  Expr coord(int i) const { return Expr::coordinate(i); }
  Expr parse(const std::string& text) const { return forge::parse(text, names); }
};

// Components of a vector in some frame (coordinate frame for vector fields,
// the bundle frame for sections).
struct Components {
  std::vector<Expr> c;

  Components() = default;
  explicit Components(int n) : c(n) {}
  explicit Components(std::vector<Expr> v) : c(std::move(v)) {}

  int size() const { return static_cast<int>(c.size()); }
  Expr& operator[](int i) { return c[i]; }
  const Expr& operator[](int i) const { return c[i]; }

  static Components basis(int n, int i);
};

struct VectorField : Components {
  using Components::Components;
  explicit VectorField(Components base) : Components(std::move(base)) {}

  // v(f) = v^α ∂_α f
  Expr apply(const Expr& f) const;
  std::string str(const std::vector<std::string>& names) const;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& v);

using Mask = std::uint32_t;

int popcount(Mask m);
std::vector<int> mask_indices(Mask m);
// Sign of the permutation sorting the concatenation (a, b) of two increasing tuples;
// zero when they share an index.
int merge_sign(Mask a, Mask b);

// Alternating multilinear form over an index set {0..dim-1}, stored sparsely
// on increasing index tuples. Tag distinguishes forms on TM from forms on A.
template <class Tag>
class AlternatingForm {
 public:
  AlternatingForm() = default;
  AlternatingForm(int dim, int degree) : dim_(dim), degree_(degree) {}

  static AlternatingForm scalar(int dim, const Expr& f);
  // The coframe element with index i (dx^i or θ^i).
  static AlternatingForm coframe(int dim, int i);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::map<Mask, Expr>& coefficients() const { return coeffs_; }

  Expr get(Mask m) const;
  // Component on an arbitrary index list, with the alternating sign applied.
  Expr component(const std::vector<int>& indices) const;
  void add(Mask m, const Expr& e);
  void set(Mask m, const Expr& e);

  AlternatingForm operator+(const AlternatingForm& o) const;
  AlternatingForm operator-(const AlternatingForm& o) const;
  AlternatingForm operator-() const;
  AlternatingForm scaled(const Expr& f) const;

  std::vector<Expr> coefficient_list() const;
  std::string str(const std::vector<std::string>& coframe_names,
                  const std::vector<std::string>& coordinate_names = {}) const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<Mask, Expr> coeffs_;
};

struct CoordinateTag {};
struct FrameTag {};
using DifferentialForm = AlternatingForm<CoordinateTag>;
using AForm = AlternatingForm<FrameTag>;

extern template class AlternatingForm<CoordinateTag>;
extern template class AlternatingForm<FrameTag>;

template <class Tag>
AlternatingForm<Tag> wedge(const AlternatingForm<Tag>& a, const AlternatingForm<Tag>& b);

// ι_v a, with v given by components in the matching frame.
template <class Tag>
AlternatingForm<Tag> interior(const Components& v, const AlternatingForm<Tag>& a);

// a(v_1, ..., v_p) = ι_{v_p} ... ι_{v_1} a.
template <class Tag>
Expr evaluate_on(const AlternatingForm<Tag>& a, const std::vector<Components>& vs);

DifferentialForm exterior_derivative(const DifferentialForm& a);
VectorField lie_bracket(const VectorField& v, const VectorField& w);
DifferentialForm lie_derivative(const VectorField& v, const DifferentialForm& a);

// prefixed("d", {"x", "y"}) -> {"dx", "dy"}
std::vector<std::string> prefixed(const std::string& prefix, const std::vector<std::string>& names);

}  // namespace forge
