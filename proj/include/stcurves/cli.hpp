#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stcurves/ltrace.hpp"
#include "stcurves/moments.hpp"

namespace stcurves::cli {

enum class Command { count, scan, group, moments_theory, moments_numeric, moments_mc, hist };

inline constexpr std::uint64_t kDefaultSeed = 20240229;
inline constexpr const char* kCacheDirEnv = "STCURVES_CACHE_DIR";

struct RunConfig {
  Command command = Command::count;
  std::uint32_t ell = 5;
  std::uint64_t q = 0;
  bool naive = false;
  std::uint64_t bound = 0;
  std::optional<std::uint32_t> generator;
  std::uint32_t n_max = 8;
  std::uint32_t k_max = 1;
  std::uint64_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint32_t> component;
  CharpolyRoute route = CharpolyRoute::cycle;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> cache;
  std::optional<std::filesystem::path> output;
  bool restrict = false;
  std::size_t bins = 101;
  PrimeFilter filter = PrimeFilter::all;
};

/// Executes one command. Reports go to `out`; on failure a single JSON line
/// {"error": ...} goes to `err` and the return value is nonzero.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to run().
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stcurves::cli
