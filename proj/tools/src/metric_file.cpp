#include "jetgeo_cli/metric_file.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace jetgeo::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& s, std::size_t line, const char* what) {
  const std::string t = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw MetricFileError(line, std::string("malformed number in ") + what + ": '" + t + "'");
  return v;
}

int parse_int(const std::string& s, std::size_t line, const char* what) {
  const std::string t = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw MetricFileError(line, std::string("malformed integer in ") + what + ": '" + t + "'");
  return v;
}

struct Entry {
  std::size_t line;
  std::string value;
};

struct IndexedEntry {
  std::size_t line;
  std::vector<int> idx;  // 1-based as written
  std::string value;
};

}  // namespace

MetricFile parse_metric_file(std::string_view text) {
  static const std::regex kIndexed(R"(^(g|gamma)((\[\s*[0-9]+\s*\])+)$)");
  static const std::regex kIndex(R"(\[\s*([0-9]+)\s*\])");

  std::map<std::string, Entry> scalars;
  std::vector<IndexedEntry> metric_entries, connection_entries;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw MetricFileError(lineno, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) throw MetricFileError(lineno, "empty value for '" + key + "'");
    std::smatch m;
    if (std::regex_match(key, m, kIndexed)) {
      IndexedEntry e{lineno, {}, value};
      const std::string indices = m[2];
      for (auto it = std::sregex_iterator(indices.begin(), indices.end(), kIndex); it != std::sregex_iterator(); ++it)
        e.idx.push_back(std::stoi((*it)[1]));
      if (m[1] == "g") {
        if (e.idx.size() != 2) throw MetricFileError(lineno, "metric entries take two indices");
        metric_entries.push_back(std::move(e));
      } else {
        if (e.idx.size() != 3) throw MetricFileError(lineno, "connection entries take three indices");
        connection_entries.push_back(std::move(e));
      }
      continue;
    }
    static const char* kKeys[] = {"dimension", "kind", "coordinates", "domain", "base_point", "samples", "rk_step"};
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) { return key == k; }) == std::end(kKeys))
      throw MetricFileError(lineno, "unknown key '" + key + "'");
    if (scalars.count(key)) throw MetricFileError(lineno, "duplicate key '" + key + "'");
    scalars.emplace(key, Entry{lineno, value});
  }

  auto require = [&](const char* key) -> const Entry& {
    auto it = scalars.find(key);
    if (it == scalars.end()) throw MetricFileError(0, std::string("missing required key '") + key + "'");
    return it->second;
  };

  MetricFile f;
  {
    const Entry& e = require("dimension");
    f.dimension = parse_int(e.value, e.line, "dimension");
    if (f.dimension < 1 || f.dimension > 4) throw MetricFileError(e.line, "dimension must be between 1 and 4");
  }
  const int n = f.dimension;
  if (auto it = scalars.find("kind"); it != scalars.end()) {
    if (it->second.value == "riemannian") f.kind = StructureKind::kRiemannian;
    else if (it->second.value == "affine") f.kind = StructureKind::kAffine;
    else throw MetricFileError(it->second.line, "kind must be 'riemannian' or 'affine'");
  }
  if (auto it = scalars.find("coordinates"); it != scalars.end()) {
    f.coordinates = split(it->second.value, ',');
    if (static_cast<int>(f.coordinates.size()) != n)
      throw MetricFileError(it->second.line, "expected " + std::to_string(n) + " coordinate names");
    static const std::regex kName(R"(^[A-Za-z_][A-Za-z0-9_]*$)");
    for (const auto& name : f.coordinates)
      if (!std::regex_match(name, kName)) throw MetricFileError(it->second.line, "bad coordinate name '" + name + "'");
  } else {
    f.coordinates = default_coordinate_names(n);
  }

  auto check_indices = [&](const IndexedEntry& e) {
    for (int i : e.idx)
      if (i < 1 || i > n)
        throw MetricFileError(e.line, "index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
  };
  auto parse_entry = [&](const IndexedEntry& e) {
    try {
      return parse_expr(e.value, f.coordinates);
    } catch (const ParseError& err) {
      throw MetricFileError(e.line, std::string(err.what()) + " at column " + std::to_string(err.offset() + 1));
    }
  };

  if (f.kind == StructureKind::kRiemannian) {
    if (metric_entries.empty()) throw MetricFileError(0, "riemannian files need g[i][j] entries");
    std::vector<std::vector<bool>> given(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    f.metric = ExprMatrix(n, Expr(0.0));
    for (const auto& e : metric_entries) {
      check_indices(e);
      const int i = e.idx[0] - 1, j = e.idx[1] - 1;
      if (given[i][j]) throw MetricFileError(e.line, "duplicate metric entry");
      const Expr v = parse_entry(e);
      f.metric(i, j) = v;
      given[i][j] = true;
      if (!given[j][i]) f.metric(j, i) = v;
    }
    for (int i = 0; i < n; ++i)
      if (!given[i][i]) throw MetricFileError(0, "missing diagonal metric entry g[" + std::to_string(i + 1) + "][" +
                                                     std::to_string(i + 1) + "]");
  } else if (!metric_entries.empty()) {
    throw MetricFileError(metric_entries.front().line, "affine files take no metric entries");
  }

  if (!connection_entries.empty()) {
    ExprTensor3 gamma(n, Expr(0.0));
    std::vector<bool> given(static_cast<std::size_t>(n * n * n));
    auto flat = [n](int i, int j, int k) { return static_cast<std::size_t>((i * n + j) * n + k); };
    for (const auto& e : connection_entries) {
      check_indices(e);
      const int i = e.idx[0] - 1, j = e.idx[1] - 1, k = e.idx[2] - 1;
      if (given[flat(i, j, k)]) throw MetricFileError(e.line, "duplicate connection entry");
      const Expr v = parse_entry(e);
      gamma(i, j, k) = v;
      given[flat(i, j, k)] = true;
      if (!given[flat(i, k, j)]) gamma(i, k, j) = v;
    }
    f.connection = gamma;
  } else if (f.kind == StructureKind::kAffine) {
    throw MetricFileError(0, "affine files need gamma[i][j][k] entries");
  }

  {
    const Entry& e = require("domain");
    const auto parts = split(std::regex_replace(e.value, std::regex(R"(\]\s*x\s*\[)"), "]|["), '|');
    if (static_cast<int>(parts.size()) != n)
      throw MetricFileError(e.line, "domain needs " + std::to_string(n) + " intervals");
    std::vector<double> lo, hi;
    for (const auto& part : parts) {
      if (part.size() < 2 || part.front() != '[' || part.back() != ']')
        throw MetricFileError(e.line, "interval must look like [lo, hi]");
      const auto ends = split(part.substr(1, part.size() - 2), ',');
      if (ends.size() != 2) throw MetricFileError(e.line, "interval must look like [lo, hi]");
      lo.push_back(parse_real(ends[0], e.line, "domain"));
      hi.push_back(parse_real(ends[1], e.line, "domain"));
      if (!(lo.back() < hi.back())) throw MetricFileError(e.line, "degenerate domain interval");
    }
    f.domain = Box(lo, hi);
  }
  {
    const Entry& e = require("base_point");
    const std::string& v = e.value;
    if (v.size() < 2 || v.front() != '(' || v.back() != ')') throw MetricFileError(e.line, "base_point must look like (p1, ...)");
    for (const auto& c : split(v.substr(1, v.size() - 2), ',')) f.base_point.push_back(parse_real(c, e.line, "base_point"));
    if (static_cast<int>(f.base_point.size()) != n)
      throw MetricFileError(e.line, "base_point needs " + std::to_string(n) + " coordinates");
    if (!f.domain.contains(f.base_point)) throw MetricFileError(e.line, "base_point lies outside the domain");
  }
  if (auto it = scalars.find("samples"); it != scalars.end()) {
    f.samples = parse_int(it->second.value, it->second.line, "samples");
    if (f.samples < 5) throw MetricFileError(it->second.line, "samples must be at least 5");
  }
  if (auto it = scalars.find("rk_step"); it != scalars.end()) {
    f.rk_step = parse_real(it->second.value, it->second.line, "rk_step");
    if (!(f.rk_step > 0.0)) throw MetricFileError(it->second.line, "rk_step must be positive");
  }
  return f;
}

MetricFile load_metric_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MetricFileError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric_file(buf.str());
}

GeometricObject build_object(const MetricFile& file) {
  if (file.kind == StructureKind::kAffine)
    return GeometricObject::affine(*file.connection, file.domain, file.base_point);
  return GeometricObject::from_metric(file.metric, file.connection, file.domain, file.base_point);
}

}  // namespace jetgeo::cli
