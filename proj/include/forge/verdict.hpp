#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/expr.hpp"

namespace forge {

enum class Status { Pass, Fail, Skipped };

std::string to_string(Status s);

struct Witness {
  std::string label;
  std::vector<double> point;
  double value = 0.0;
  std::string detail;
};

struct Verdict {
  Status status = Status::Pass;
  // Weakest zero certificate among the tested residuals.
  ZeroKind strength = ZeroKind::ExactZero;
  double residual_max = 0.0;
  std::optional<Witness> witness;
  std::string reason;

  bool passed() const { return status == Status::Pass; }
  bool failed() const { return status == Status::Fail; }

  static Verdict skipped(std::string why);
  static Verdict failure(Witness w, std::string why = {});
  // Conjunction: fails if either fails, keeps the first witness.
  Verdict& merge(const Verdict& other);
};

// A labelled list of scalar residuals that must all vanish identically.
class ResidualSet {
 public:
  void add(std::string label, const Expr& e);
  void add_all(const std::string& prefix, const std::vector<Expr>& es);
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const std::vector<std::pair<std::string, Expr>>& items() const { return items_; }

  Verdict test(const SampleDomain& d) const;

 private:
  std::vector<std::pair<std::string, Expr>> items_;
};

std::string format_point(const std::vector<double>& p, const std::vector<std::string>& names);

}  // namespace forge
