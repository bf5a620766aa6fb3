#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geokrig/semivariogram.hpp"
#include "geokrig/types.hpp"
#include "geokrig/variogram_fit.hpp"

namespace geokrig {

/// Fixed CSV numeric format: 6 fractional digits, so byte-identity of
/// outputs is well defined.
std::string format_fixed(double value);

// ---- point CSV: x,y,value,beam,azimuth_class,track_id ---------------------

std::vector<Sample> read_point_csv(std::istream& in);
std::vector<Sample> read_point_csv_file(const std::string& path);
void write_point_csv(std::ostream& out, std::span<const Sample> samples);
void write_point_csv_file(const std::string& path, std::span<const Sample> samples);

// ---- ESRI-style ASCII grid -------------------------------------------------
// Header lines ncols, nrows, xllcorner, yllcorner, cellsize, nodata_value in
// that order, then nrows lines of ncols values, top row first.

Raster read_ascii_grid(std::istream& in);
Raster read_ascii_grid_file(const std::string& path);
void write_ascii_grid(std::ostream& out, const Raster& raster);
void write_ascii_grid_file(const std::string& path, const Raster& raster);

// ---- semivariogram bin CSV: lag_center,semivariance,pair_count -------------
// One row per populated bin. The reader reconstructs the uniform bin grid
// from the lag centers.

void write_semivariogram_csv(std::ostream& out, const EmpiricalSemivariogram& sv);
void write_semivariogram_csv_file(const std::string& path, const EmpiricalSemivariogram& sv);
EmpiricalSemivariogram read_semivariogram_csv(std::istream& in);
EmpiricalSemivariogram read_semivariogram_csv_file(const std::string& path);

// ---- fit block: key-value text, full precision ------------------------------

void write_fit_block(std::ostream& out, const FitResult& fit);
void write_fit_block_file(const std::string& path, const FitResult& fit);
FitResult read_fit_block(std::istream& in);
FitResult read_fit_block_file(const std::string& path);

const char* to_string(BeamClass beam);
const char* to_string(TrackAzimuthClass cls);
BeamClass beam_from_string(const std::string& name);
TrackAzimuthClass azimuth_class_from_string(const std::string& name);

}  // namespace geokrig
