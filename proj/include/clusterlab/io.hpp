#pragma once

// Sweep artifacts: lambda ranges, CSV rows, SVG plots and the on-disk cache.

#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "clusterlab/geoent.hpp"
#include "json.hpp"

namespace clusterlab {

/// "start:stop:step" (endpoints inclusive within half a step) or a single value.
inline std::vector<double> parse_lambda_range(std::string_view text) {
  auto num = [&](std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
      throw std::invalid_argument("lambda range: bad number '" + std::string(s) + "'");
    return v;
  };
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto c = text.find(':', pos);
    parts.push_back(text.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  if (parts.size() == 1) {
    const double v = num(parts[0]);
    if (v < 0.0) throw std::invalid_argument("lambda range: negative coupling");
    return {v};
  }
  if (parts.size() != 3) throw std::invalid_argument("lambda range: expected start:stop:step");
  const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
  if (!(h > 0.0) || b < a || a < 0.0) throw std::invalid_argument("lambda range: need 0 <= start <= stop, step > 0");
  const auto count = static_cast<long>(std::floor((b - a) / h + 0.5));
  if (count > 100000) throw std::invalid_argument("lambda range: too many points");
  std::vector<double> out;
  for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * h);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{"lambda",         "n_sites", "boundary",         "energy",
                                             "gap",            "string_order", "staggered_corr", "geo_ent",
                                             "geo_ent_per_site", "geo_ent_deriv"};
  return cols;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const std::vector<SweepRecord>& rows) {
  std::string out;
  for (std::size_t i = 0; i < sweep_columns().size(); ++i) out += (i ? "," : "") + sweep_columns()[i];
  out += "\n";
  for (const auto& r : rows) {
    out += format_double(r.lambda) + "," + std::to_string(r.n_sites) + "," + to_string(r.boundary) + "," +
           format_double(r.energy) + "," + format_double(r.gap) + "," + format_double(r.string_order) + "," +
           format_double(r.staggered_corr) + "," + format_double(r.geo_ent) + "," + format_double(r.geo_ent_per_site) +
           "," + (r.geo_ent_deriv ? format_double(*r.geo_ent_deriv) : std::string()) + "\n";
  }
  return out;
}

inline std::vector<SweepRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  std::string header;
  for (std::size_t i = 0; i < sweep_columns().size(); ++i) header += (i ? "," : "") + sweep_columns()[i];
  if (line != header) throw std::invalid_argument("csv: unexpected header");
  std::vector<SweepRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != sweep_columns().size()) throw std::invalid_argument("csv: wrong field count");
    auto d = [](const std::string& s) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("csv: bad number '" + s + "'");
      return v;
    };
    SweepRecord r;
    r.lambda = d(f[0]);
    r.n_sites = std::stoi(f[1]);
    r.boundary = parse_boundary(f[2]);
    r.energy = d(f[3]);
    r.gap = d(f[4]);
    r.string_order = d(f[5]);
    r.staggered_corr = d(f[6]);
    r.geo_ent = d(f[7]);
    r.geo_ent_per_site = d(f[8]);
    if (!f[9].empty()) r.geo_ent_deriv = d(f[9]);
    rows.push_back(r);
  }
  return rows;
}

inline std::optional<double> column_value(const SweepRecord& r, std::string_view col) {
  if (col == "lambda") return r.lambda;
  if (col == "n_sites") return r.n_sites;
  if (col == "energy") return r.energy;
  if (col == "gap") return r.gap;
  if (col == "string_order") return r.string_order;
  if (col == "staggered_corr") return r.staggered_corr;
  if (col == "geo_ent") return r.geo_ent;
  if (col == "geo_ent_per_site") return r.geo_ent_per_site;
  if (col == "geo_ent_deriv") return r.geo_ent_deriv;
  throw std::invalid_argument("unknown column '" + std::string(col) + "'");
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace detail

/// Line plot of column y against column x, one polyline per chain length.
/// The maximum of |y| on each curve gets a marker.
inline std::string emit_svg(const std::vector<SweepRecord>& rows, const std::string& x_col, const std::string& y_col) {
  if (rows.size() < 2) throw std::invalid_argument("emit_svg: need at least two records");
  std::map<int, std::vector<std::pair<double, double>>> series;
  for (const auto& r : rows) {
    const auto x = column_value(r, x_col);
    const auto y = column_value(r, y_col);
    if (x && y && std::isfinite(*x) && std::isfinite(*y)) series[r.n_sites].emplace_back(*x, *y);
  }
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& [n, pts] : series)
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0)) throw std::invalid_argument("emit_svg: no finite points");
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;

  const double w = 640, h = 420, ml = 70, mr = 120, mt = 20, mb = 50;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };
  static const std::array<const char*, 6> colours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " "
    << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<g stroke=\"black\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb << "\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb << "\"/>\n";
  s << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    s << "<line x1=\"" << detail::fixed(px(xv)) << "\" y1=\"" << h - mb << "\" x2=\"" << detail::fixed(px(xv))
      << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << detail::fixed(px(xv)) << "\" y=\"" << h - mb + 18 << "\" text-anchor=\"middle\">"
      << detail::tick_label(xv) << "</text>\n";
    s << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::fixed(py(yv)) << "\" x2=\"" << ml << "\" y2=\""
      << detail::fixed(py(yv)) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << ml - 8 << "\" y=\"" << detail::fixed(py(yv) + 4) << "\" text-anchor=\"end\">"
      << detail::tick_label(yv) << "</text>\n";
  }
  s << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << x_col << "</text>\n";
  s << "<text x=\"15\" y=\"" << (mt + h - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
    << (mt + h - mb) / 2 << ")\">" << y_col << "</text>\n</g>\n";
  std::size_t k = 0;
  for (const auto& [n, pts] : series) {
    const char* c = colours[k % colours.size()];
    s << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      s << (i ? " " : "") << detail::fixed(px(pts[i].first)) << "," << detail::fixed(py(pts[i].second));
    s << "\"/>\n";
    const auto peak = std::max_element(pts.begin(), pts.end(),
                                       [](const auto& a, const auto& b) { return std::abs(a.second) < std::abs(b.second); });
    s << "<circle cx=\"" << detail::fixed(px(peak->first)) << "\" cy=\"" << detail::fixed(py(peak->second))
      << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    s << "<text x=\"" << w - mr + 10 << "\" y=\"" << mt + 15 + 16 * k << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
      << c << "\">N=" << n << "</text>\n";
    ++k;
  }
  s << "</svg>\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// Files and cache

/// Writes to a sibling temporary and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::filesystem::path cache_directory() {
  if (const char* e = std::getenv("CLUSTERLAB_CACHE_DIR"); e && *e) return e;
  return ".clusterlab-cache";
}

inline std::string tool_version() { return CLUSTERLAB_VERSION; }

/// One cached sweep point, keyed by (spec, subcommand, tool version, seed).
class SweepCache {
 public:
  explicit SweepCache(std::filesystem::path dir = cache_directory(), bool enabled = true)
      : dir_(std::move(dir)), enabled_(enabled) {}

  static std::string key(const ChainSpec& spec, std::uint64_t seed) {
    char buf[17];
    const std::string text = "sweep|" + spec.canonical() + "|seed=" + std::to_string(seed) + "|v" + tool_version();
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return buf;
  }

  std::optional<SweepRecord> load(const ChainSpec& spec, std::uint64_t seed) const {
    if (!enabled_) return std::nullopt;
    std::ifstream f(dir_ / (key(spec, seed) + ".json"));
    if (!f) return std::nullopt;
    try {
      const auto j = nlohmann::json::parse(f);
      if (j.at("spec").get<std::string>() != spec.canonical()) return std::nullopt;
      SweepRecord r;
      r.lambda = spec.lambda;
      r.n_sites = spec.n_sites;
      r.boundary = spec.boundary;
      r.energy = j.at("energy");
      r.gap = j.at("gap");
      r.string_order = j.at("string_order");
      r.staggered_corr = j.at("staggered_corr");
      r.geo_ent = j.at("geo_ent");
      r.geo_ent_per_site = j.at("geo_ent_per_site");
      return r;
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }

  void store(const ChainSpec& spec, std::uint64_t seed, const SweepRecord& r) const {
    if (!enabled_) return;
    nlohmann::json j;
    j["spec"] = spec.canonical();
    j["seed"] = seed;
    j["version"] = tool_version();
    j["energy"] = r.energy;
    j["gap"] = r.gap;
    j["string_order"] = r.string_order;
    j["staggered_corr"] = r.staggered_corr;
    j["geo_ent"] = r.geo_ent;
    j["geo_ent_per_site"] = r.geo_ent_per_site;
    write_file_atomic(dir_ / (key(spec, seed) + ".json"), j.dump(1));
  }

  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
  bool enabled_;
};

/// Sweep with a bounded worker pool. Rows come back in grid order and the
/// derivative column is filled afterwards, so the output does not depend on
/// the number of workers.
inline std::vector<SweepRecord> run_sweep(const ChainSpec& spec_template, const std::vector<double>& grid,
                                          const OptimizerOptions& opt, unsigned jobs, const SweepCache* cache,
                                          int* cache_hits = nullptr) {
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("sweep: grid must be strictly increasing");
  std::vector<SweepRecord> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<int> hits{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        const auto spec = spec_template.with_lambda(grid[i]);
        if (cache) {
          if (auto r = cache->load(spec, opt.seed)) {
            rows[i] = *r;
            ++hits;
            continue;
          }
        }
        rows[i] = sweep_point(spec, opt);
        if (cache) cache->store(spec, opt.seed, rows[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  fill_derivatives(rows);
  if (cache_hits) *cache_hits = hits;
  return rows;
}

}  // namespace clusterlab
