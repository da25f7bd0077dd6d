#include "stcurves/ltrace.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "stcurves/arith.hpp"

namespace stcurves {

std::vector<std::uint64_t> good_primes(std::uint32_t ell, std::uint64_t bound) {
  if (bound > kMaxDatasetBound) {
    throw std::invalid_argument("good_primes: bound exceeds guard " +
                                std::to_string(kMaxDatasetBound));
  }
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i * i <= bound; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (!composite[i] && i != ell) primes.push_back(i);
  }
  return primes;
}

namespace {

std::uint64_t parse_field(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw CacheError("cache: malformed field '" + std::string(field) + "' at line " +
                         std::to_string(line),
                     line);
  }
  return value;
}

std::vector<CacheRow> sorted_unique(std::vector<CacheRow> rows,
                                    const std::vector<std::size_t>* lines = nullptr) {
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(rows[a].ell, rows[a].p) < std::tie(rows[b].ell, rows[b].p);
  });
  std::vector<CacheRow> out;
  std::size_t prev = 0;
  for (std::size_t idx : order) {
    const CacheRow& r = rows[idx];
    if (!out.empty() && out.back().ell == r.ell && out.back().p == r.p) {
      if (out.back().count != r.count) {
        const std::size_t line = lines ? (*lines)[idx] : 0;
        throw CacheError("cache: conflicting counts for l = " + std::to_string(r.ell) +
                             ", p = " + std::to_string(r.p) +
                             (lines ? " (lines " + std::to_string((*lines)[prev]) + " and " +
                                          std::to_string(line) + ")"
                                    : std::string{}),
                         line);
      }
      continue;
    }
    out.push_back(r);
    prev = idx;
  }
  return out;
}

}  // namespace

std::vector<CacheRow> cache_parse(const std::string& text) {
  std::vector<CacheRow> rows;
  std::vector<std::size_t> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCacheHeader) {
        throw CacheError("cache: expected header '" + std::string(kCacheHeader) + "' at line " +
                             std::to_string(number),
                         number);
      }
      header_seen = true;
      continue;
    }
    std::string_view view(line);
    const auto c1 = view.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos) {
      throw CacheError("cache: expected 3 fields at line " + std::to_string(number), number);
    }
    const auto ell = parse_field(view.substr(0, c1), number);
    const auto p = parse_field(view.substr(c1 + 1, c2 - c1 - 1), number);
    const auto count = parse_field(view.substr(c2 + 1), number);
    if (ell > 0xffffffffULL) throw CacheError("cache: l out of range at line " + std::to_string(number), number);
    rows.push_back({static_cast<std::uint32_t>(ell), p, count});
    lines.push_back(number);
  }
  return sorted_unique(std::move(rows), &lines);
}

std::vector<CacheRow> cache_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return cache_parse(buffer.str());
}

std::string cache_format(std::vector<CacheRow> rows) {
  rows = sorted_unique(std::move(rows));
  std::string out = kCacheHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.ell) + ',' + std::to_string(r.p) + ',' + std::to_string(r.count) + '\n';
  }
  return out;
}

void cache_store(const std::vector<CacheRow>& rows, const std::filesystem::path& path) {
  const std::string text = cache_format(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cache: cannot write " + path.string());
  out << text;
}

void cache_store(const A1Dataset& dataset, const std::filesystem::path& path) {
  std::vector<CacheRow> rows;
  rows.reserve(dataset.records.size());
  for (const auto& r : dataset.records) rows.push_back({dataset.ell, r.p, r.count});
  cache_store(rows, path);
}

void cache_append(const std::vector<CacheRow>& rows, const std::filesystem::path& path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cache: cannot append to " + path.string());
  if (fresh) out << kCacheHeader << '\n';
  for (const auto& r : rows) out << r.ell << ',' << r.p << ',' << r.count << '\n';
  out.flush();
}

A1Dataset build_dataset(std::uint32_t ell, std::uint64_t bound, const BuildOptions& options) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("build_dataset: l must be an odd prime");
  if (bound > options.guard) {
    throw std::invalid_argument("build_dataset: bound " + std::to_string(bound) +
                                " exceeds guard " + std::to_string(options.guard));
  }
  const std::uint64_t level = std::uint64_t{ell} * ell;
  const auto primes = good_primes(ell, bound);

  std::map<std::uint64_t, std::uint64_t> cached;
  if (options.cache) {
    for (const auto& row : cache_load(*options.cache)) {
      if (row.ell == ell) cached.emplace(row.p, row.count);
    }
  }

  A1Dataset data;
  data.ell = ell;
  data.bound = bound;
  data.records.reserve(primes.size());
  std::vector<std::size_t> pending;  // record indices that need a field pass
  for (const auto p : primes) {
    A1Record rec{p, p + 1, 0.0, CountMethod::lemma_congruence, false};
    if (p % level == 1) {
      rec.method = CountMethod::jacobi_trace;
      if (auto it = cached.find(p); it != cached.end()) {
        rec.count = it->second;
        rec.from_cache = true;
        if (!satisfies_weil_bound(ell, p, rec.count)) {
          throw std::runtime_error("build_dataset: cached count for p = " + std::to_string(p) +
                                   " violates the Weil bound");
        }
        rec.a1 = normalized_trace(p, rec.count);
      } else {
        pending.push_back(data.records.size());
      }
    }
    data.records.push_back(rec);
  }

  const unsigned jobs = std::max(1u, options.jobs);
  const std::size_t batch = std::max<std::size_t>(32, std::size_t{jobs} * 8);
  for (std::size_t begin = 0; begin < pending.size(); begin += batch) {
    const std::size_t end = std::min(pending.size(), begin + batch);
    std::atomic<std::size_t> next{begin};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < end;) {
        A1Record& rec = data.records[pending[i]];
        rec.count = count_points(ell, rec.p, options.guard).count;
        rec.a1 = normalized_trace(rec.p, rec.count);
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    data.field_computations += end - begin;
    if (options.cache) {
      std::vector<CacheRow> rows;
      for (std::size_t i = begin; i < end; ++i) {
        const auto& rec = data.records[pending[i]];
        rows.push_back({ell, rec.p, rec.count});
      }
      cache_append(rows, *options.cache);
    }
  }
  return data;
}

A1Dataset dataset_from_rows(std::uint32_t ell, std::uint64_t bound,
                            const std::vector<CacheRow>& rows) {
  const std::uint64_t level = std::uint64_t{ell} * ell;
  A1Dataset data;
  data.ell = ell;
  data.bound = bound;
  for (const auto& row : rows) {
    if (row.ell != ell || row.p > bound) continue;
    if (!satisfies_weil_bound(ell, row.p, row.count)) {
      throw std::runtime_error("dataset: count for p = " + std::to_string(row.p) +
                               " violates the Weil bound");
    }
    const auto method =
        row.p % level == 1 ? CountMethod::jacobi_trace : CountMethod::lemma_congruence;
    data.records.push_back({row.p, row.count, normalized_trace(row.p, row.count), method, true});
  }
  std::sort(data.records.begin(), data.records.end(),
            [](const A1Record& a, const A1Record& b) { return a.p < b.p; });
  return data;
}

MomentTable numerical_moments(const A1Dataset& dataset, std::uint32_t n_max, bool restrict) {
  const std::uint64_t level = std::uint64_t{dataset.ell} * dataset.ell;
  std::vector<double> sums(n_max + 1, 0.0);
  std::uint64_t used = 0;
  for (const auto& rec : dataset.records) {
    if (restrict && rec.p % level != 1) continue;
    ++used;
    double p = 1.0;
    for (std::uint32_t n = 0; n <= n_max; ++n) {
      sums[n] += p;
      p *= rec.a1;
    }
  }
  if (used == 0) throw std::invalid_argument("numerical_moments: no records to average");
  MomentTable table;
  table.coefficient = 1;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    table.moments.emplace(n, MomentEstimate{sums[n] / static_cast<double>(used), std::nullopt});
  }
  return table;
}

std::uint64_t HistogramData::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

HistogramData histogram(const A1Dataset& dataset, std::size_t bins, PrimeFilter filter) {
  if (bins == 0) throw std::invalid_argument("histogram: bins must be at least 1");
  const double genus = static_cast<double>(dataset.ell) * (dataset.ell - 1) / 2.0;
  const double lo = -2.0 * genus;
  const double width = 4.0 * genus / static_cast<double>(bins);
  const std::uint64_t level = std::uint64_t{dataset.ell} * dataset.ell;

  HistogramData hist;
  hist.filter = filter;
  hist.counts.assign(bins, 0);
  for (std::size_t i = 0; i <= bins; ++i) hist.edges.push_back(lo + width * static_cast<double>(i));
  for (const auto& rec : dataset.records) {
    if (filter == PrimeFilter::residue_one && rec.p % level != 1) continue;
    auto idx = static_cast<std::int64_t>(std::floor((rec.a1 - lo) / width));
    idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(bins) - 1);
    ++hist.counts[static_cast<std::size_t>(idx)];
  }
  return hist;
}

std::string histogram_csv(const HistogramData& hist) {
  std::ostringstream os;
  os.precision(12);
  os << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    os << hist.edges[i] << ',' << hist.edges[i + 1] << ',' << hist.counts[i] << '\n';
  }
  return os.str();
}

std::string histogram_svg(const HistogramData& hist, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 400, kMargin = 48;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  std::uint64_t peak = 1;
  for (auto c : hist.counts) peak = std::max(peak, c);
  const double bar_w = plot_w / static_cast<double>(hist.counts.size());

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kMargin / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << title
     << "</text>\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    if (hist.counts[i] == 0) continue;
    const double h = plot_h * static_cast<double>(hist.counts[i]) / static_cast<double>(peak);
    os << "<rect x=\"" << kMargin + bar_w * static_cast<double>(i) << "\" y=\""
       << kHeight - kMargin - h << "\" width=\"" << bar_w << "\" height=\"" << h
       << "\" fill=\"steelblue\"/>\n";
  }
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
     << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
     << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << hist.edges.front() << "</text>\n";
  os << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << hist.edges.back() << "</text>\n";
  os << "<text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << peak
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace stcurves
