#pragma once

// a_1 data over ranges of primes: enumeration, caching, moments, histograms.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stcurves/counting.hpp"
#include "stcurves/moments.hpp"

namespace stcurves {

/// Largest accepted prime bound for dataset builds.
inline constexpr std::uint64_t kMaxDatasetBound = std::uint64_t{1} << 26;

/// All primes <= bound except l, ascending.
std::vector<std::uint64_t> good_primes(std::uint32_t ell, std::uint64_t bound);

struct A1Record {
  std::uint64_t p;
  std::uint64_t count;
  double a1;
  CountMethod method;
  bool from_cache = false;
};

struct A1Dataset {
  std::uint32_t ell = 0;
  std::uint64_t bound = 0;
  std::vector<A1Record> records;
  /// Primes whose count needed a pass over F_p in this build.
  std::uint64_t field_computations = 0;
};

/// One cache row: l,p,count.
struct CacheRow {
  std::uint32_t ell;
  std::uint64_t p;
  std::uint64_t count;
  auto operator<=>(const CacheRow&) const = default;
};

class CacheError : public std::runtime_error {
 public:
  CacheError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr const char* kCacheHeader = "l,p,count";

/// Parses a cache file. A missing or empty file yields no rows. Rows come
/// back sorted by (l, p) with exact duplicates removed; a duplicate (l, p)
/// with a different count is a CacheError naming p.
std::vector<CacheRow> cache_load(const std::filesystem::path& path);
std::vector<CacheRow> cache_parse(const std::string& text);

/// Writes header plus rows sorted and deduplicated.
void cache_store(const std::vector<CacheRow>& rows, const std::filesystem::path& path);
void cache_store(const A1Dataset& dataset, const std::filesystem::path& path);
std::string cache_format(std::vector<CacheRow> rows);

/// Appends rows to an existing cache, writing the header if the file is new.
void cache_append(const std::vector<CacheRow>& rows, const std::filesystem::path& path);

struct BuildOptions {
  std::optional<std::filesystem::path> cache;
  unsigned jobs = 1;
  std::uint64_t guard = kMaxDatasetBound;
};

/// Primes p != 1 mod l^2 get count p + 1 without touching F_p; the rest go
/// through count_points, consulting the cache first. Newly computed rows
/// are appended to the cache. Output is independent of `jobs`.
A1Dataset build_dataset(std::uint32_t ell, std::uint64_t bound, const BuildOptions& options = {});

/// Assembles a dataset from explicit (p, count) pairs, checking the Weil bound.
A1Dataset dataset_from_rows(std::uint32_t ell, std::uint64_t bound,
                            const std::vector<CacheRow>& rows);

/// M_n = mean of a1^n, n = 1..n_max. With `restrict` only p = 1 mod l^2 count.
MomentTable numerical_moments(const A1Dataset& dataset, std::uint32_t n_max,
                              bool restrict = false);

enum class PrimeFilter { all, residue_one };

struct HistogramData {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::uint64_t> counts;
  PrimeFilter filter = PrimeFilter::all;

  std::uint64_t total() const;
};

/// Uniform bins over [-2g, 2g]; the right edge belongs to the last bin.
HistogramData histogram(const A1Dataset& dataset, std::size_t bins,
                        PrimeFilter filter = PrimeFilter::all);

std::string histogram_csv(const HistogramData& hist);
std::string histogram_svg(const HistogramData& hist, const std::string& title);

}  // namespace stcurves
