#include "forge/verdict.hpp"

#include <cmath>
#include <cstdio>

namespace forge {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skipped:
      return "skipped";
  }
  return "?";
}

Verdict Verdict::skipped(std::string why) {
  Verdict v;
  v.status = Status::Skipped;
  v.reason = std::move(why);
  return v;
}

Verdict Verdict::failure(Witness w, std::string why) {
  Verdict v;
  v.status = Status::Fail;
  v.strength = ZeroKind::NonZero;
  v.residual_max = std::abs(w.value);
  v.witness = std::move(w);
  v.reason = std::move(why);
  return v;
}

Verdict& Verdict::merge(const Verdict& other) {
  if (other.status == Status::Skipped) return *this;
  if (status == Status::Skipped) return *this = other;
  if (other.status == Status::Fail) {
    if (status != Status::Fail) {
      status = Status::Fail;
      witness = other.witness;
      reason = other.reason;
    }
    strength = ZeroKind::NonZero;
  } else if (status == Status::Pass && other.strength == ZeroKind::NumericallyZero) {
    strength = ZeroKind::NumericallyZero;
  }
  residual_max = std::max(residual_max, other.residual_max);
  return *this;
}

void ResidualSet::add(std::string label, const Expr& e) {
  if (e.is_zero()) {
    items_.emplace_back(std::move(label), Expr());
    return;
  }
  items_.emplace_back(std::move(label), e);
}

void ResidualSet::add_all(const std::string& prefix, const std::vector<Expr>& es) {
  for (std::size_t i = 0; i < es.size(); ++i) add(prefix + "[" + std::to_string(i) + "]", es[i]);
}

Verdict ResidualSet::test(const SampleDomain& d) const {
  Verdict v;
  for (const auto& [label, e] : items_) {
    ZeroVerdict z = is_identically_zero(e, d);
    if (z.kind == ZeroKind::NonZero) {
      v.residual_max = std::max(v.residual_max, std::abs(z.value));
      if (v.status != Status::Fail) {
        v.status = Status::Fail;
        v.witness = Witness{label, z.witness, z.value, {}};
      }
      v.strength = ZeroKind::NonZero;
    } else if (z.kind == ZeroKind::NumericallyZero && v.status == Status::Pass) {
      v.strength = ZeroKind::NumericallyZero;
    }
  }
  return v;
}

std::string format_point(const std::vector<double>& p, const std::vector<std::string>& names) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ", ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", p[i]);
    if (i < names.size()) out += names[i] + "=";
    out += buf;
  }
  return out + ")";
}

}  // namespace forge
