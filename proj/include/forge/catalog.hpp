#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "forge/checks.hpp"

namespace forge {

struct CatalogEntry {
  std::string name;
  std::string description;
  AlgebroidModel model;
  // Expected status of every check in check_names().
  std::map<std::string, Status> expected;
};

class CatalogError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

std::vector<std::string> catalog_names();
CatalogEntry catalog_entry(const std::string& name);

struct CatalogRun {
  CatalogEntry entry;
  CheckReport report;
  std::vector<std::string> mismatches;  // "check: expected X, got Y"
  bool matches() const { return mismatches.empty(); }
};

CatalogRun run_catalog_entry(const CatalogEntry& e);
std::vector<CatalogRun> run_catalog(const std::vector<std::string>& names);

std::string catalog_json(const std::vector<CatalogRun>& runs);
std::string catalog_text(const std::vector<CatalogRun>& runs);

}  // namespace forge
