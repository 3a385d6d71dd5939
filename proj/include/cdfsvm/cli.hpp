#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cdfsvm {

/// Effective settings of one command: config-file entries overridden by flags.
/// Keys are the long flag names without the leading dashes.
class RunConfig {
 public:
  static RunConfig parse(const std::string& text, const std::string& source = "<config>");
  static RunConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback = {}) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// One "key=value" line per entry, sorted by key.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Runs one subcommand. Results go to `out`, diagnostics to `err`.
/// Returns 0 iff all requested work completed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace cdfsvm
