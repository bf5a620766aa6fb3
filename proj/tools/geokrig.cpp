// geokrig: semivariogram diagnostics, ordinary kriging and residual-kriging
// correction of gridded predictions from sparse point samples.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geokrig/core.hpp"
#include "geokrig/io.hpp"
#include "geokrig/kriging.hpp"
#include "geokrig/residual_kriging.hpp"
#include "geokrig/semivariogram.hpp"
#include "geokrig/synthetic.hpp"
#include "geokrig/threading.hpp"
#include "geokrig/validation.hpp"
#include "geokrig/variogram_fit.hpp"

namespace {

using namespace geokrig;

Aabb parse_extent(const std::string& text) {
  std::istringstream in(text);
  double v[4];
  char sep;
  for (int i = 0; i < 4; ++i) {
    if (i > 0 && !(in >> sep && sep == ','))
      throw ArgumentError("extent must be xmin,ymin,xmax,ymax: '" + text + "'");
    if (!(in >> v[i])) throw ArgumentError("extent must be xmin,ymin,xmax,ymax: '" + text + "'");
  }
  return make_aabb({v[0], v[1]}, {v[2], v[3]});
}

GediPass parse_pass(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ArgumentError("pass must be <nwd|swd>:<cross offset>, e.g. nwd:300");
  GediPass pass;
  pass.azimuth_class = azimuth_class_from_string(text.substr(0, colon));
  pass.cross_offset = std::stod(text.substr(colon + 1));
  return pass;
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> radii;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token == "inf" || token == "Inf" || token == "INF")
      radii.push_back(std::numeric_limits<double>::infinity());
    else
      radii.push_back(std::stod(token));
  }
  if (radii.empty()) throw ArgumentError("radii list is empty");
  return radii;
}

// Shared model-source options (pre-fit block file or inline parameters).
struct ModelOptions {
  std::string model_file;
  std::string kind = "exponential";
  double nugget = std::numeric_limits<double>::quiet_NaN();
  double sill = std::numeric_limits<double>::quiet_NaN();
  double range = std::numeric_limits<double>::quiet_NaN();

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model_file, "Fit block file with the variogram model");
    cmd->add_option("--kind", kind, "Variogram kind (exponential|spherical|gaussian|linear|circular)");
    cmd->add_option("--nugget", nugget, "Model nugget (m^2)");
    cmd->add_option("--sill", sill, "Model total sill (m^2)");
    cmd->add_option("--range", range, "Model practical range (m)");
  }

  bool inline_complete() const {
    return !std::isnan(nugget) && !std::isnan(sill) && !std::isnan(range);
  }

  VariogramModel resolve() const {
    if (!model_file.empty()) return read_fit_block_file(model_file).model;
    if (!inline_complete())
      throw ArgumentError("model required: --model FILE or --kind/--nugget/--sill/--range");
    VariogramModel m{variogram_kind_from_string(kind), nugget, sill, range};
    validate(m);
    return m;
  }
};

struct KrigingOptions {
  std::string neighborhood = "global";
  std::size_t k = 64;
  double radius = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--neighborhood", neighborhood, "global or nearest")
        ->check(CLI::IsMember({"global", "nearest"}));
    cmd->add_option("--k", k, "Nearest neighborhood size");
    cmd->add_option("--radius", radius, "Nearest neighborhood search radius (m)");
  }

  KrigingConfig resolve() const {
    KrigingConfig config;
    if (neighborhood == "nearest") {
      if (!(radius > 0.0)) throw ArgumentError("--neighborhood nearest requires --radius > 0");
      config.neighborhood = NearestNeighborhood{k, radius};
    }
    return config;
  }
};

int run_semivariogram(const std::string& points_file, const std::string& out_file,
                      double bin_width, double max_lag, std::optional<double> azimuth,
                      double tolerance, const std::string& beam, const std::string& az_class,
                      std::size_t subsample_n, std::uint64_t subsample_seed,
                      const std::string& report_file) {
  auto samples = read_point_csv_file(points_file);
  const std::size_t total = samples.size();

  std::optional<BeamClass> beam_filter;
  if (!beam.empty()) beam_filter = beam_from_string(beam);
  std::optional<TrackAzimuthClass> class_filter;
  if (!az_class.empty()) class_filter = azimuth_class_from_string(az_class);
  if (beam_filter || class_filter) samples = filter_samples(samples, beam_filter, class_filter);

  if (subsample_n > 0) samples = subsample(samples, subsample_n, subsample_seed);

  const EmpiricalSemivariogram sv =
      azimuth ? empirical_directional(samples, bin_width, max_lag, *azimuth, tolerance)
              : empirical(samples, bin_width, max_lag);
  write_semivariogram_csv_file(out_file, sv);

  if (!report_file.empty()) {
    std::ofstream report(report_file);
    report << "samples_read " << total << "\n";
    report << "samples_used " << samples.size() << "\n";
    report << "populated_bins " << sv.populated_bins() << "\n";
    report << "coincident_pairs " << sv.coincident_pairs << "\n";
    if (sv.direction) {
      report << "azimuth_deg " << format_fixed(sv.direction->azimuth_deg) << "\n";
      report << "tolerance_deg " << format_fixed(sv.direction->tolerance_deg) << "\n";
    }
  }
  return 0;
}

int run_fit(const std::string& bins_file, const std::string& out_file, const std::string& kind,
            const std::string& weighting) {
  const EmpiricalSemivariogram sv = read_semivariogram_csv_file(bins_file);
  const FitWeighting w = weighting == "uniform" ? FitWeighting::Uniform : FitWeighting::PairCount;
  const FitResult result = fit(sv, variogram_kind_from_string(kind), w);
  write_fit_block_file(out_file, result);
  return 0;
}

GridSpec grid_from_options(const std::string& like_file, double origin_x, double origin_y,
                           double cell_size, int rows, int cols) {
  if (!like_file.empty()) {
    const Raster like = read_ascii_grid_file(like_file);
    return {like.origin(), like.cell_size(), like.n_rows(), like.n_cols()};
  }
  if (!(cell_size > 0.0) || rows <= 0 || cols <= 0)
    throw ArgumentError("grid required: --like FILE or --origin-x/--origin-y/--cell-size/--rows/--cols");
  return {{origin_x, origin_y}, cell_size, rows, cols};
}

int run_krige(const std::string& points_file, const GridSpec& grid, const VariogramModel& model,
              const KrigingConfig& config, const std::string& est_out,
              const std::string& var_out, const std::string& report_file) {
  const auto samples = read_point_csv_file(points_file);
  if (samples.empty()) throw DataError("krige: no samples in input");
  const GridPrediction pred = predict_grid(samples, grid, model, config);
  write_ascii_grid_file(est_out, pred.estimates);
  write_ascii_grid_file(var_out, pred.variances);
  if (!report_file.empty()) {
    auto [merged, n_merged] = merge_duplicates(samples, config.duplicate_policy);
    std::ofstream report(report_file);
    report << "samples " << samples.size() << "\n";
    report << "duplicates_merged " << n_merged << "\n";
    report << "cells " << pred.estimates.cell_count() << "\n";
  }
  return 0;
}

void write_rk_report(std::ostream& out, const RkMultiResult& result) {
  for (const SiteResult& site : result.sites) {
    out << "site " << site.name << "\n";
    out << "status " << (site.output ? "ok" : "failed") << "\n";
    if (!site.output) {
      out << "error " << site.error << "\n\n";
      continue;
    }
    const RkDiagnostics& d = site.output->diagnostics;
    out << "observed_total " << d.observed_total << "\n";
    out << "beam_filtered " << d.beam_filtered << "\n";
    out << "samples_used " << d.samples_used << "\n";
    out << "dropped_outside " << d.dropped_outside << "\n";
    out << "dropped_nodata " << d.dropped_nodata << "\n";
    out << "duplicates_merged " << d.duplicates_merged << "\n";
    out << "fit_degenerate " << (d.fit_degenerate ? "true" : "false") << "\n";
    if (d.neighborhood_switched) out << "neighborhood_switched true\n";
    if (site.output->fit) {
      const FitResult& f = *site.output->fit;
      out << "fit_kind " << to_string(f.model.kind) << "\n";
      out << "fit_nugget " << format_fixed(f.model.nugget) << "\n";
      out << "fit_sill " << format_fixed(f.model.sill) << "\n";
      out << "fit_range " << format_fixed(f.model.range) << "\n";
      out << "fit_r_squared " << format_fixed(f.r_squared) << "\n";
    }
    if (!site.errors_at_samples.empty()) {
      const MetricSet m = metrics_from_errors(site.errors_at_samples);
      out << "bias_at_samples " << format_fixed(m.bias) << "\n";
      out << "rmse_at_samples " << format_fixed(m.rmse) << "\n";
    }
    out << "seconds " << format_fixed(site.seconds) << "\n";
    out << "\n";
  }
  if (result.pooled) {
    out << "pooled_n " << result.pooled->n << "\n";
    out << "pooled_bias " << format_fixed(result.pooled->bias) << "\n";
    out << "pooled_rmse " << format_fixed(result.pooled->rmse) << "\n";
  }
}

int run_rk_command(const std::string& points_file, const std::string& prediction_file,
                   const std::vector<std::string>& site_texts, double buffer,
                   const std::string& beam, const ModelOptions& model_opts,
                   double bin_width, double max_lag, double tolerance,
                   const std::string& weighting, const KrigingOptions& kriging_opts,
                   const std::string& out_prefix, const std::string& report_file) {
  const auto observed = read_point_csv_file(points_file);
  const Raster prediction = read_ascii_grid_file(prediction_file);
  if (site_texts.empty()) throw ArgumentError("rk: at least one --site is required");

  RkConfig config;
  config.buffer_margin = buffer;
  config.beam_filter = beam_from_string(beam);
  config.kriging = kriging_opts.resolve();
  if (!model_opts.model_file.empty() || model_opts.inline_complete()) {
    config.semivariogram_source = model_opts.resolve();
  } else {
    FitAlongTrack fat;
    fat.bin_width = bin_width;
    fat.max_lag = max_lag;
    fat.tolerance_deg = tolerance;
    fat.kind = variogram_kind_from_string(model_opts.kind);
    fat.weighting = weighting == "uniform" ? FitWeighting::Uniform : FitWeighting::PairCount;
    config.semivariogram_source = fat;
  }

  std::vector<SiteInput> sites;
  for (std::size_t i = 0; i < site_texts.size(); ++i)
    sites.push_back({"site" + std::to_string(i), observed, prediction,
                     parse_extent(site_texts[i])});

  const RkMultiResult result = run_rk_multi(sites, config);

  for (const SiteResult& site : result.sites) {
    if (!site.output) {
      std::cerr << "rk: " << site.name << " failed: " << site.error << "\n";
      continue;
    }
    write_ascii_grid_file(out_prefix + site.name + "_corrected.asc", site.output->corrected);
    write_ascii_grid_file(out_prefix + site.name + "_residuals.asc",
                          site.output->kriged_residuals);
    write_ascii_grid_file(out_prefix + site.name + "_variance.asc",
                          site.output->kriging_variance);
  }
  if (!report_file.empty()) {
    std::ofstream report(report_file);
    write_rk_report(report, result);
  }
  if (result.failed > 0) {
    std::cerr << "rk: " << result.failed << " of " << result.sites.size() << " sites failed\n";
    return 2;
  }
  return 0;
}

int run_simulate(std::uint64_t seed, const std::string& extent_text, double cell_size,
                 double track_spacing, double along_spacing, int beams, double azimuth_nwd,
                 double azimuth_swd, const std::vector<std::string>& pass_texts,
                 double coverage_bias, double coverage_noise_sd, double track_offset_sd,
                 const ModelOptions& model_opts, double mean, std::size_t max_grf_points,
                 const std::string& points_out, const std::string& truth_out) {
  GediPatternSpec spec;
  spec.extent = parse_extent(extent_text);
  spec.track_spacing_cross = track_spacing;
  spec.footprint_spacing_along = along_spacing;
  spec.beams_per_pass = beams;
  spec.azimuth_nwd_deg = azimuth_nwd;
  spec.azimuth_swd_deg = azimuth_swd;
  spec.coverage_bias = coverage_bias;
  spec.coverage_noise_sd = coverage_noise_sd;
  spec.per_track_offset_sd = track_offset_sd;
  spec.seed = seed;
  for (const std::string& text : pass_texts) spec.passes.push_back(parse_pass(text));
  if (spec.passes.empty()) spec.passes.push_back({TrackAzimuthClass::Nwd, 0.0});

  const auto pattern = generate_pattern(spec);
  if (pattern.empty()) std::cerr << "simulate: extent too small, no footprints generated\n";

  VariogramModel model{variogram_kind_from_string(model_opts.kind),
                       std::isnan(model_opts.nugget) ? 2.0 : model_opts.nugget,
                       std::isnan(model_opts.sill) ? 20.0 : model_opts.sill,
                       std::isnan(model_opts.range) ? 2500.0 : model_opts.range};
  validate(model);

  // One joint realization over grid centers and footprints keeps the truth
  // raster and the observations consistent.
  const int n_cols = static_cast<int>(std::ceil(spec.extent.width() / cell_size));
  const int n_rows = static_cast<int>(std::ceil(spec.extent.height() / cell_size));
  Raster truth({spec.extent.min.x, spec.extent.min.y}, cell_size, n_rows, n_cols);
  std::vector<Point2D> points;
  points.reserve(truth.cell_count() + pattern.size());
  for (int r = 0; r < n_rows; ++r)
    for (int c = 0; c < n_cols; ++c) points.push_back(truth.cell_center(r, c));
  for (const Sample& s : pattern) points.push_back(s.position);

  GrfSpec grf{model, mean, seed, max_grf_points};
  const auto values = sample_grf_at(points, grf);
  std::size_t k = 0;
  for (int r = 0; r < n_rows; ++r)
    for (int c = 0; c < n_cols; ++c, ++k) truth.at(r, c) = values[k];
  const std::span<const double> truth_at_footprints(values.data() + truth.cell_count(),
                                                    pattern.size());
  const auto observed = observe(pattern, truth_at_footprints, spec);

  write_point_csv_file(points_out, observed);
  write_ascii_grid_file(truth_out, truth);
  return 0;
}

int run_validate(const std::string& predicted_file, const std::string& reference_file,
                 const std::string& points_file, const std::string& radii_text,
                 const std::string& out_file) {
  const Raster predicted = read_ascii_grid_file(predicted_file);
  const Raster reference = read_ascii_grid_file(reference_file);

  std::ofstream out(out_file);
  if (!out) throw ParseError("cannot open '" + out_file + "' for writing");
  out << "radius,n,bias,rmse,rrmse\n";

  auto write_row = [&out](const std::string& radius, const std::optional<MetricSet>& m,
                          std::size_t n) {
    out << radius << ',' << n;
    if (m) {
      out << ',' << format_fixed(m->bias) << ',' << format_fixed(m->rmse) << ',';
      out << (m->rrmse ? format_fixed(*m->rrmse) : "nan");
    } else {
      out << ",nan,nan,nan";
    }
    out << "\n";
  };

  if (points_file.empty()) {
    const MetricSet m = metrics(predicted, reference);
    write_row("inf", m, m.n);
    return 0;
  }
  const auto samples = read_point_csv_file(points_file);
  const auto radii = parse_radii(radii_text);
  const ProximityReport report = proximity_analysis(predicted, reference, samples, radii);
  for (const ProximityRow& row : report.rows) {
    const std::string label =
        std::isinf(row.radius) ? std::string("inf") : format_fixed(row.radius);
    write_row(label, row.metrics, row.n);
  }
  return 0;
}

int run_transect(const std::string& grid_file, const std::string& from_text,
                 const std::string& to_text, double step, const std::string& out_file) {
  const Raster raster = read_ascii_grid_file(grid_file);
  auto parse_point = [](const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ArgumentError("point must be x,y: '" + text + "'");
    return Point2D{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  };
  const auto profile =
      sample_along_segment(raster, parse_point(from_text), parse_point(to_text), step);
  std::ofstream out(out_file);
  if (!out) throw ParseError("cannot open '" + out_file + "' for writing");
  out << "distance,x,y,value\n";
  for (const TransectPoint& p : profile) {
    out << format_fixed(p.distance) << ',' << format_fixed(p.position.x) << ','
        << format_fixed(p.position.y) << ',' << (p.valid ? format_fixed(p.value) : "nan") << "\n";
  }
  return 0;
}

int run_periodicity(const std::string& bins_file, double period, const std::string& out_file) {
  const EmpiricalSemivariogram sv = read_semivariogram_csv_file(bins_file);
  const PeriodicityScore score = periodicity_score(sv, period);
  std::ostringstream text;
  text << "period " << format_fixed(score.period) << "\n";
  text << "score " << format_fixed(score.score) << "\n";
  text << "peaks";
  for (double lag : score.peak_lags) text << ' ' << format_fixed(lag);
  text << "\n";
  std::cout << text.str();
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    out << text.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geostatistics toolkit: semivariograms, ordinary kriging and residual kriging"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: GEOKRIG_THREADS or hardware)");
  // Config mirrors the flags: keys live in a [subcommand] section and
  // command-line flags take precedence. Unknown keys are rejected.
  app.set_config("--config", "", "Key-value config file with [subcommand] sections");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // semivariogram
  auto* sv_cmd = app.add_subcommand("semivariogram", "Empirical semivariogram of point samples");
  std::string sv_points, sv_out, sv_beam, sv_class, sv_report;
  double sv_bin_width = 100.0, sv_max_lag = 10000.0, sv_tolerance = 1.0;
  double sv_azimuth_value = 0.0;
  std::size_t sv_subsample = 0;
  std::uint64_t sv_subsample_seed = 0;
  sv_cmd->add_option("--points", sv_points, "Point CSV input")->required();
  sv_cmd->add_option("--out", sv_out, "Semivariogram CSV output")->required();
  sv_cmd->add_option("--bin-width", sv_bin_width, "Lag bin width (m)");
  sv_cmd->add_option("--max-lag", sv_max_lag, "Maximum lag (m)");
  auto* sv_azimuth =
      sv_cmd->add_option("--azimuth", sv_azimuth_value, "Directional azimuth (deg from north)");
  sv_cmd->add_option("--tolerance", sv_tolerance, "Directional tolerance (deg)");
  sv_cmd->add_option("--beam", sv_beam, "Filter by beam class (power|coverage)");
  sv_cmd->add_option("--azimuth-class", sv_class, "Filter by azimuth class (nwd|swd)");
  sv_cmd->add_option("--subsample", sv_subsample, "Uniform subsample size (0 = all)");
  sv_cmd->add_option("--subsample-seed", sv_subsample_seed, "Subsample seed");
  sv_cmd->add_option("--report", sv_report, "Diagnostics text output");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a variogram model to a semivariogram CSV");
  std::string fit_bins, fit_out, fit_kind = "exponential", fit_weighting = "paircount";
  fit_cmd->add_option("--bins", fit_bins, "Semivariogram CSV input")->required();
  fit_cmd->add_option("--out", fit_out, "Fit block output")->required();
  fit_cmd->add_option("--kind", fit_kind, "Variogram kind");
  fit_cmd->add_option("--weighting", fit_weighting, "paircount or uniform")
      ->check(CLI::IsMember({"paircount", "uniform"}));

  // krige
  auto* krige_cmd = app.add_subcommand("krige", "Ordinary kriging over a grid");
  std::string kr_points, kr_like, kr_est, kr_var, kr_report;
  double kr_ox = 0, kr_oy = 0, kr_cell = 0;
  int kr_rows = 0, kr_cols = 0;
  ModelOptions kr_model;
  KrigingOptions kr_kriging;
  krige_cmd->add_option("--points", kr_points, "Point CSV input")->required();
  krige_cmd->add_option("--like", kr_like, "Take grid geometry from this ASCII grid");
  krige_cmd->add_option("--origin-x", kr_ox, "Grid origin x");
  krige_cmd->add_option("--origin-y", kr_oy, "Grid origin y");
  krige_cmd->add_option("--cell-size", kr_cell, "Grid cell size (m)");
  krige_cmd->add_option("--rows", kr_rows, "Grid rows");
  krige_cmd->add_option("--cols", kr_cols, "Grid cols");
  kr_model.attach(krige_cmd);
  kr_kriging.attach(krige_cmd);
  krige_cmd->add_option("--est-out", kr_est, "Estimates grid output")->required();
  krige_cmd->add_option("--var-out", kr_var, "Variance grid output")->required();
  krige_cmd->add_option("--report", kr_report, "Diagnostics text output");

  // rk
  auto* rk_cmd = app.add_subcommand("rk", "Residual kriging correction of a prediction grid");
  std::string rk_points, rk_prediction, rk_beam = "power";
  std::string rk_weighting = "paircount", rk_prefix = "rk_", rk_report;
  std::vector<std::string> rk_sites;
  double rk_buffer = 3000.0, rk_bin_width = 100.0, rk_max_lag = 10000.0, rk_tolerance = 1.0;
  ModelOptions rk_model;
  KrigingOptions rk_kriging;
  rk_cmd->add_option("--points", rk_points, "Observed point CSV")->required();
  rk_cmd->add_option("--prediction", rk_prediction, "Prediction ASCII grid")->required();
  rk_cmd->add_option("--site", rk_sites, "Site extent xmin,ymin,xmax,ymax (repeatable)")
      ->required();
  rk_cmd->add_option("--buffer", rk_buffer, "Buffer margin around each site (m)");
  rk_cmd->add_option("--beam", rk_beam, "Beam class kept for kriging");
  rk_model.attach(rk_cmd);
  rk_cmd->add_option("--bin-width", rk_bin_width, "Fit-along-track bin width (m)");
  rk_cmd->add_option("--max-lag", rk_max_lag, "Fit-along-track maximum lag (m)");
  rk_cmd->add_option("--tolerance", rk_tolerance, "Fit-along-track tolerance (deg)");
  rk_cmd->add_option("--weighting", rk_weighting, "paircount or uniform")
      ->check(CLI::IsMember({"paircount", "uniform"}));
  rk_kriging.attach(rk_cmd);
  rk_cmd->add_option("--out-prefix", rk_prefix, "Prefix for output grids");
  rk_cmd->add_option("--report", rk_report, "Diagnostics text output");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Synthetic GRF truth and GEDI-style samples");
  std::string sim_extent, sim_points_out, sim_truth_out;
  std::vector<std::string> sim_passes;
  std::uint64_t sim_seed = 0;
  double sim_cell = 50.0, sim_track_spacing = 600.0, sim_along = 60.0;
  double sim_az_nwd = 36.0, sim_az_swd = 144.0;
  double sim_cov_bias = -3.0, sim_cov_noise = 0.0, sim_track_sd = 0.0, sim_mean = 30.0;
  int sim_beams = 8;
  std::size_t sim_cap = 4000;
  ModelOptions sim_model;
  sim_cmd->add_option("--seed", sim_seed, "Realization seed");
  sim_cmd->add_option("--extent", sim_extent, "Extent xmin,ymin,xmax,ymax")->required();
  sim_cmd->add_option("--cell-size", sim_cell, "Truth grid cell size (m)");
  sim_cmd->add_option("--track-spacing", sim_track_spacing, "Cross-track spacing (m)");
  sim_cmd->add_option("--along-spacing", sim_along, "Along-track footprint spacing (m)");
  sim_cmd->add_option("--beams", sim_beams, "Beams per pass");
  sim_cmd->add_option("--azimuth-nwd", sim_az_nwd, "NWD azimuth (deg)");
  sim_cmd->add_option("--azimuth-swd", sim_az_swd, "SWD azimuth (deg)");
  sim_cmd->add_option("--pass", sim_passes, "Pass as <nwd|swd>:<offset> (repeatable)");
  sim_cmd->add_option("--coverage-bias", sim_cov_bias, "Coverage-beam bias (m)");
  sim_cmd->add_option("--coverage-noise-sd", sim_cov_noise, "Coverage-beam noise sd (m)");
  sim_cmd->add_option("--track-offset-sd", sim_track_sd, "Per-track offset sd (m)");
  sim_model.attach(sim_cmd);
  sim_cmd->add_option("--mean", sim_mean, "Field mean (m)");
  sim_cmd->add_option("--max-grf-points", sim_cap, "Dense factorization cap");
  sim_cmd->add_option("--points-out", sim_points_out, "Observed point CSV output")->required();
  sim_cmd->add_option("--truth-out", sim_truth_out, "Truth ASCII grid output")->required();

  // validate
  auto* val_cmd = app.add_subcommand("validate", "Accuracy metrics, optionally by proximity");
  std::string val_pred, val_ref, val_points, val_radii = "0,250,500,1000,inf", val_out;
  val_cmd->add_option("--predicted", val_pred, "Predicted ASCII grid")->required();
  val_cmd->add_option("--reference", val_ref, "Reference ASCII grid")->required();
  val_cmd->add_option("--points", val_points, "Sample CSV for proximity buffers");
  val_cmd->add_option("--radii", val_radii, "Comma list of radii, 'inf' allowed");
  val_cmd->add_option("--out", val_out, "Metrics CSV output")->required();

  // periodicity
  auto* per_cmd = app.add_subcommand("periodicity", "Periodicity score of a semivariogram CSV");
  std::string per_bins, per_out;
  double per_period = 600.0;
  per_cmd->add_option("--bins", per_bins, "Semivariogram CSV input")->required();
  per_cmd->add_option("--period", per_period, "Candidate period (m)");
  per_cmd->add_option("--out", per_out, "Optional output text file");

  // transect
  auto* tr_cmd = app.add_subcommand("transect", "Sample a grid along a segment");
  std::string tr_grid, tr_from, tr_to, tr_out;
  double tr_step = 10.0;
  tr_cmd->add_option("--grid", tr_grid, "ASCII grid input")->required();
  tr_cmd->add_option("--from", tr_from, "Segment start x,y")->required();
  tr_cmd->add_option("--to", tr_to, "Segment end x,y")->required();
  tr_cmd->add_option("--step", tr_step, "Sampling step (m)");
  tr_cmd->add_option("--out", tr_out, "Profile CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (threads > 0) set_thread_count(threads);

  try {
    if (*sv_cmd) {
      std::optional<double> azimuth;
      if (sv_azimuth->count() > 0) azimuth = sv_azimuth_value;
      return run_semivariogram(sv_points, sv_out, sv_bin_width, sv_max_lag, azimuth,
                               sv_tolerance, sv_beam, sv_class, sv_subsample,
                               sv_subsample_seed, sv_report);
    }
    if (*fit_cmd) return run_fit(fit_bins, fit_out, fit_kind, fit_weighting);
    if (*krige_cmd) {
      const GridSpec grid = grid_from_options(kr_like, kr_ox, kr_oy, kr_cell, kr_rows, kr_cols);
      return run_krige(kr_points, grid, kr_model.resolve(), kr_kriging.resolve(), kr_est,
                       kr_var, kr_report);
    }
    if (*rk_cmd)
      return run_rk_command(rk_points, rk_prediction, rk_sites, rk_buffer, rk_beam, rk_model,
                            rk_bin_width, rk_max_lag, rk_tolerance, rk_weighting,
                            rk_kriging, rk_prefix, rk_report);
    if (*sim_cmd)
      return run_simulate(sim_seed, sim_extent, sim_cell, sim_track_spacing, sim_along,
                          sim_beams, sim_az_nwd, sim_az_swd, sim_passes, sim_cov_bias,
                          sim_cov_noise, sim_track_sd, sim_model, sim_mean, sim_cap,
                          sim_points_out, sim_truth_out);
    if (*val_cmd) return run_validate(val_pred, val_ref, val_points, val_radii, val_out);
    if (*per_cmd) return run_periodicity(per_bins, per_period, per_out);
    if (*tr_cmd) return run_transect(tr_grid, tr_from, tr_to, tr_step, tr_out);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
