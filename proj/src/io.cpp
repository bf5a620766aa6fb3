#include "geokrig/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace geokrig {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& text, const char* what, std::size_t line_no) {
  const std::string t = strip(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    std::ostringstream msg;
    msg << "line " << line_no << ": cannot parse " << what << " from '" << text << "'";
    throw ParseError(msg.str());
  }
  return value;
}

long long parse_int(const std::string& text, const char* what, std::size_t line_no) {
  const std::string t = strip(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    std::ostringstream msg;
    msg << "line " << line_no << ": cannot parse " << what << " from '" << text << "'";
    throw ParseError(msg.str());
  }
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

const char* to_string(BeamClass beam) {
  return beam == BeamClass::Power ? "power" : "coverage";
}

const char* to_string(TrackAzimuthClass cls) {
  return cls == TrackAzimuthClass::Nwd ? "nwd" : "swd";
}

BeamClass beam_from_string(const std::string& name) {
  const std::string l = lower(strip(name));
  if (l == "power") return BeamClass::Power;
  if (l == "coverage") return BeamClass::Coverage;
  throw ParseError("unknown beam class: '" + name + "'");
}

TrackAzimuthClass azimuth_class_from_string(const std::string& name) {
  const std::string l = lower(strip(name));
  if (l == "nwd") return TrackAzimuthClass::Nwd;
  if (l == "swd") return TrackAzimuthClass::Swd;
  throw ParseError("unknown azimuth class: '" + name + "'");
}

// ---- point CSV -------------------------------------------------------------

static const char* kPointHeader = "x,y,value,beam,azimuth_class,track_id";

std::vector<Sample> read_point_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("point csv: empty input");
  ++line_no;
  if (lower(strip(line)) != kPointHeader)
    throw ParseError("line 1: point csv header must be '" + std::string(kPointHeader) + "'");

  std::vector<Sample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected 6 fields, found " << fields.size();
      throw ParseError(msg.str());
    }
    Sample s;
    s.position.x = parse_double(fields[0], "x", line_no);
    s.position.y = parse_double(fields[1], "y", line_no);
    s.value = parse_double(fields[2], "value", line_no);
    try {
      s.beam = beam_from_string(fields[3]);
      s.azimuth_class = azimuth_class_from_string(fields[4]);
    } catch (const ParseError& e) {
      std::ostringstream msg;
      msg << "line " << line_no << ": " << e.what();
      throw ParseError(msg.str());
    }
    s.track_id = parse_int(fields[5], "track_id", line_no);
    if (!is_finite(s.position) || !std::isfinite(s.value)) {
      std::ostringstream msg;
      msg << "line " << line_no << ": coordinates and value must be finite";
      throw ParseError(msg.str());
    }
    samples.push_back(s);
  }
  return samples;
}

void write_point_csv(std::ostream& out, std::span<const Sample> samples) {
  out << kPointHeader << "\n";
  for (const Sample& s : samples) {
    out << format_fixed(s.position.x) << ',' << format_fixed(s.position.y) << ','
        << format_fixed(s.value) << ',' << to_string(s.beam) << ',' << to_string(s.azimuth_class)
        << ',' << s.track_id << "\n";
  }
}

// ---- ASCII grid ------------------------------------------------------------

Raster read_ascii_grid(std::istream& in) {
  static const char* kKeys[6] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                                 "nodata_value"};
  double header[6];
  std::string line;
  std::size_t line_no = 0;
  for (int k = 0; k < 6; ++k) {
    if (!std::getline(in, line)) throw ParseError("ascii grid: truncated header");
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (lower(key) != kKeys[k]) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected header key '" << kKeys[k] << "', found '" << key
          << "'";
      throw ParseError(msg.str());
    }
    std::string value;
    ls >> value;
    header[k] = parse_double(value, kKeys[k], line_no);
  }

  const int n_cols = static_cast<int>(header[0]);
  const int n_rows = static_cast<int>(header[1]);
  if (n_cols <= 0 || n_rows <= 0) throw ParseError("ascii grid: dimensions must be positive");

  std::vector<double> values(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols));
  // File rows are top-to-bottom; memory row 0 is the south row.
  for (int file_row = 0; file_row < n_rows; ++file_row) {
    if (!std::getline(in, line)) throw ParseError("ascii grid: truncated value rows");
    ++line_no;
    std::istringstream ls(line);
    const int row = n_rows - 1 - file_row;
    for (int col = 0; col < n_cols; ++col) {
      std::string token;
      if (!(ls >> token)) {
        std::ostringstream msg;
        msg << "line " << line_no << ": expected " << n_cols << " values, found " << col;
        throw ParseError(msg.str());
      }
      values[static_cast<std::size_t>(row) * n_cols + col] =
          parse_double(token, "cell value", line_no);
    }
    std::string extra;
    if (ls >> extra) {
      std::ostringstream msg;
      msg << "line " << line_no << ": more than " << n_cols << " values";
      throw ParseError(msg.str());
    }
  }
  return Raster({header[2], header[3]}, header[4], n_rows, n_cols, std::move(values), header[5]);
}

void write_ascii_grid(std::ostream& out, const Raster& raster) {
  out << "ncols " << raster.n_cols() << "\n";
  out << "nrows " << raster.n_rows() << "\n";
  out << "xllcorner " << format_fixed(raster.origin().x) << "\n";
  out << "yllcorner " << format_fixed(raster.origin().y) << "\n";
  out << "cellsize " << format_fixed(raster.cell_size()) << "\n";
  out << "nodata_value " << format_fixed(raster.nodata()) << "\n";
  for (int row = raster.n_rows() - 1; row >= 0; --row) {
    for (int col = 0; col < raster.n_cols(); ++col) {
      if (col > 0) out << ' ';
      out << format_fixed(raster.at(row, col));
    }
    out << "\n";
  }
}

// ---- semivariogram CSV -----------------------------------------------------

static const char* kSvHeader = "lag_center,semivariance,pair_count";

void write_semivariogram_csv(std::ostream& out, const EmpiricalSemivariogram& sv) {
  out << kSvHeader << "\n";
  for (const LagBin& b : sv.bins) {
    if (b.pair_count == 0) continue;
    out << format_fixed(b.lag_center) << ',' << format_fixed(b.semivariance) << ','
        << b.pair_count << "\n";
  }
}

EmpiricalSemivariogram read_semivariogram_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("semivariogram csv: empty input");
  ++line_no;
  if (lower(strip(line)) != kSvHeader)
    throw ParseError("line 1: semivariogram csv header must be '" + std::string(kSvHeader) + "'");

  struct Row {
    double center, semivariance;
    std::size_t count;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected 3 fields, found " << fields.size();
      throw ParseError(msg.str());
    }
    Row r;
    r.center = parse_double(fields[0], "lag_center", line_no);
    r.semivariance = parse_double(fields[1], "semivariance", line_no);
    const long long count = parse_int(fields[2], "pair_count", line_no);
    if (count <= 0) throw ParseError("line " + std::to_string(line_no) + ": pair_count must be > 0");
    r.count = static_cast<std::size_t>(count);
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError("semivariogram csv: no populated bins");
  if (!std::is_sorted(rows.begin(), rows.end(),
                      [](const Row& a, const Row& b) { return a.center < b.center; }))
    throw ParseError("semivariogram csv: lag centers must be ascending");

  // Reconstruct the uniform bin grid: try candidate widths (the first center
  // doubled plus every distinct center gap, widest first) and keep the first
  // one every row aligns with. The last row may come from a truncated bin
  // (max_lag not a multiple of the width), in which case its center sits in
  // the lower half of its bin.
  const auto aligned = [](double center, double w) {
    const double pos = center / w - 0.5;
    return std::abs(pos - std::round(pos)) <= 1e-6;
  };
  std::vector<double> candidates = {2.0 * rows[0].center};
  for (std::size_t i = 1; i < rows.size(); ++i)
    candidates.push_back(rows[i].center - rows[i - 1].center);
  std::sort(candidates.begin(), candidates.end(), std::greater<>());

  double width = 0.0;
  double max_lag = 0.0;
  for (double w : candidates) {
    if (!(w > 0.0)) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i + 1 < rows.size(); ++i) ok = aligned(rows[i].center, w);
    if (!ok) continue;
    const double last = rows.back().center;
    if (aligned(last, w)) {
      width = w;
      max_lag = last + 0.5 * w;
      break;
    }
    const double lo = std::floor(last / w) * w;
    const double hi = 2.0 * last - lo;
    if (hi > lo && hi <= lo + w + 1e-9 * w) {  // truncated final bin
      width = w;
      max_lag = hi;
      break;
    }
  }
  if (!(width > 0.0))
    throw ParseError("semivariogram csv: lag centers do not lie on a uniform grid");

  EmpiricalSemivariogram sv;
  sv.bin_width = width;
  sv.max_lag = max_lag;
  const std::size_t n_bins = static_cast<std::size_t>(std::ceil(max_lag / width - 1e-9));
  sv.bins.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    LagBin& b = sv.bins[i];
    b.lag_lo = static_cast<double>(i) * width;
    b.lag_hi = std::min(static_cast<double>(i + 1) * width, max_lag);
    b.lag_center = 0.5 * (b.lag_lo + b.lag_hi);
    b.semivariance = std::numeric_limits<double>::quiet_NaN();
  }
  for (const Row& r : rows) {
    const auto idx = static_cast<std::size_t>(r.center / width);
    if (idx >= n_bins || std::abs(r.center - sv.bins[idx].lag_center) > 1e-6 * width)
      throw ParseError("semivariogram csv: lag centers do not lie on a uniform grid");
    LagBin& b = sv.bins[idx];
    b.semivariance = r.semivariance;
    b.pair_count = r.count;
    b.sum = r.semivariance * static_cast<double>(r.count);
  }
  return sv;
}

// ---- fit block ---------------------------------------------------------------

void write_fit_block(std::ostream& out, const FitResult& fit) {
  char buf[64];
  const auto full = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "kind " << to_string(fit.model.kind) << "\n";
  out << "nugget " << full(fit.model.nugget) << "\n";
  out << "sill " << full(fit.model.sill) << "\n";
  out << "range " << full(fit.model.range) << "\n";
  out << "r_squared " << full(fit.r_squared) << "\n";
  out << "bins_used " << fit.bins_used << "\n";
  out << "degenerate " << (fit.degenerate ? "true" : "false") << "\n";
}

FitResult read_fit_block(std::istream& in) {
  FitResult fit;
  bool seen[7] = {};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = strip(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::istringstream ls(stripped);
    std::string key, value;
    ls >> key >> value;
    key = lower(key);
    if (key == "kind") {
      try {
        fit.model.kind = variogram_kind_from_string(value);
      } catch (const ArgumentError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
      seen[0] = true;
    } else if (key == "nugget") {
      fit.model.nugget = parse_double(value, "nugget", line_no);
      seen[1] = true;
    } else if (key == "sill") {
      fit.model.sill = parse_double(value, "sill", line_no);
      seen[2] = true;
    } else if (key == "range") {
      fit.model.range = parse_double(value, "range", line_no);
      seen[3] = true;
    } else if (key == "r_squared") {
      fit.r_squared = parse_double(value, "r_squared", line_no);
      seen[4] = true;
    } else if (key == "bins_used") {
      fit.bins_used = static_cast<std::size_t>(parse_int(value, "bins_used", line_no));
      seen[5] = true;
    } else if (key == "degenerate") {
      const std::string l = lower(value);
      if (l != "true" && l != "false")
        throw ParseError("line " + std::to_string(line_no) + ": degenerate must be true or false");
      fit.degenerate = l == "true";
      seen[6] = true;
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown fit block key '" + key + "'");
    }
  }
  static const char* kNames[7] = {"kind",      "nugget",    "sill",      "range",
                                  "r_squared", "bins_used", "degenerate"};
  for (int k = 0; k < 7; ++k)
    if (!seen[k]) throw ParseError("fit block: missing key '" + std::string(kNames[k]) + "'");
  return fit;
}

// ---- file wrappers -----------------------------------------------------------

std::vector<Sample> read_point_csv_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_point_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_point_csv_file(const std::string& path, std::span<const Sample> samples) {
  auto out = open_output(path);
  write_point_csv(out, samples);
}

Raster read_ascii_grid_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_ascii_grid(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_ascii_grid_file(const std::string& path, const Raster& raster) {
  auto out = open_output(path);
  write_ascii_grid(out, raster);
}

void write_semivariogram_csv_file(const std::string& path, const EmpiricalSemivariogram& sv) {
  auto out = open_output(path);
  write_semivariogram_csv(out, sv);
}

EmpiricalSemivariogram read_semivariogram_csv_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_semivariogram_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_fit_block_file(const std::string& path, const FitResult& fit) {
  auto out = open_output(path);
  write_fit_block(out, fit);
}

FitResult read_fit_block_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_fit_block(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace geokrig
