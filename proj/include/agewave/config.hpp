#pragma once

#include <map>
#include <string>
#include <vector>

#include "agewave/model.hpp"

namespace agewave {

/// Parsed key-value configuration. Keys are stored as "section.key"; the
/// raw file bytes are kept so runs can be fingerprinted.
struct Config {
  std::string text;
  std::string dir;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  /// Comma-separated numbers; empty vector when the key is absent.
  std::vector<double> list(const std::string& key) const;
};

/// Parses "[section]" headers and "key = value" lines; '#' starts a
/// comment. Keys outside the documented set, duplicate keys, and keys
/// before the first section header are ValidationErrors.
Config parse_config_text(const std::string& text, const std::string& dir);
Config parse_config(const std::string& path);

/// Builds the model from the [model] section: constant mu and kappa,
/// beta constant or "auto" (normalized so the birth kernel has unit mass),
/// kernel one of gaussian/laplace/compact_bump/tabulated.
ModelSpec model_from_config(const Config& cfg);

}  // namespace agewave
