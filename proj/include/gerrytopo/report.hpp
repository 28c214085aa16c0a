#pragma once

#include "gerrytopo/compactness.hpp"
#include "gerrytopo/compare.hpp"
#include "gerrytopo/complex.hpp"
#include "gerrytopo/ingest.hpp"
#include "gerrytopo/persistence.hpp"
#include "gerrytopo/raster.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gerrytopo {

struct AnalysisConfig {
    std::string label = "year";
    std::string precinct_geo;
    std::string precinct_votes;
    std::string district_geo;
    std::string district_votes;
    std::string id_property = "id";
    std::size_t width = 1024;
    MarginMode mode = MarginMode::density;
    int levels = 25;
    double max_margin = 1.0;
    IslandParty islands = IslandParty::democratic;
    int dim = 1;  // homology dimension of the headline distance
    double wasserstein_p = 2.0;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    bool write_snapshots = true;
};

// Applies `key = value` lines ('#' starts a comment) on top of `base`.
// Keys: label, geo, votes, district_geo, district_votes, id_property, width,
// mode, levels, max_margin, islands, dim, wasserstein_p, seed, workers,
// snapshots.
AnalysisConfig parse_config(const std::string& text, AnalysisConfig base = {});
void apply_config_value(AnalysisConfig& config, const std::string& key, const std::string& value);

inline constexpr int kReportedDims = 2;  // H0 and H1

struct YearResult {
    std::string label;
    LevelSchedule schedule = uniform_schedule(25, 1.0);
    MarginField precinct_field;
    MarginField district_field;
    Barcode precinct_barcode;
    Barcode district_barcode;
    std::array<double, kReportedDims> bottleneck{};
    std::array<double, kReportedDims> wasserstein{};
    std::array<double, kReportedDims> precinct_total_persistence{};
    std::array<double, kReportedDims> district_total_persistence{};
    JoinReport precinct_join;
    JoinReport district_join;
    std::vector<CompactnessRow> district_compactness;
};

// Runs raster -> complex -> persistence -> compare for already-joined units.
// Both maps share one grid over the union of their bounds.
YearResult run_year(const UnitCollection& precincts, const UnitCollection& districts,
                    const AnalysisConfig& config);

// Loads and joins the configured files first. Failures are rethrown as
// StageError tagged with the failing stage.
YearResult run_year(const AnalysisConfig& config);

// Runs each configuration, up to config.workers at a time (taken from the
// first entry). Results keep input order.
std::vector<YearResult> run_years(const std::vector<AnalysisConfig>& configs);

enum class MapLevel { precinct, district };

// Symmetric matrix of bottleneck distances between years in threshold units.
std::vector<std::vector<double>> cross_year_matrix(const std::vector<YearResult>& results, MapLevel which,
                                                   int dim);

// Horizontal bar per interval on a 0..tau_L axis; infinite bars reach the
// right edge with an arrowhead.
std::string render_barcode_svg(const Barcode& barcode, int dim, const LevelSchedule& schedule);

// 8-bit PGM of the filtration state at `level`: 255 active, 0 not yet
// active, 128 background.
std::string write_levelset_snapshot(const MarginField& field, const LevelSchedule& schedule, int level,
                                    IslandParty islands = IslandParty::democratic);

// Machine-readable summary of a year.
std::string year_result_json(const YearResult& result, const AnalysisConfig& config);

// Writes barcodes/, snapshots/, plots/, distances.csv, compactness.csv and
// report.json under `out_dir`.
void write_year_outputs(const YearResult& result, const AnalysisConfig& config, const std::string& out_dir);

void write_file(const std::string& path, const std::string& contents);

}  // namespace gerrytopo
