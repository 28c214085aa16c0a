#pragma once

#include "gerrytopo/geometry.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gerrytopo {

struct VoteRow {
    std::string unit_id;
    std::uint64_t dem_votes = 0;
    std::uint64_t rep_votes = 0;

    friend bool operator==(const VoteRow&, const VoteRow&) = default;
};

struct JoinReport {
    std::size_t matched = 0;
    std::size_t filled_missing = 0;
    std::vector<std::string> orphan_vote_rows;
};

struct GeoJsonOptions {
    std::string id_property = "id";
    UnitKind kind = UnitKind::precinct;
};

// Votes given to a unit that has no row in the tabulation.
inline constexpr std::uint64_t kMissingFillVotes = 10;

// Parses a FeatureCollection of Polygon / MultiPolygon features. Vote counts
// are zero unless the feature carries integer "dem_votes" / "rep_votes"
// properties (as written by write_geojson).
UnitCollection parse_geojson(std::string_view document, const GeoJsonOptions& options = {});

// Serializes units (geometry, id and vote counts) as a FeatureCollection.
std::string write_geojson(const UnitCollection& units, const std::string& id_property = "id");

// Header `unit_id,dem_votes,rep_votes`. Errors name the 1-based line number.
std::vector<VoteRow> parse_votes_csv(std::string_view document);

std::pair<UnitCollection, JoinReport> join_units(const UnitCollection& geo,
                                                 const std::vector<VoteRow>& votes);

std::string read_text_file(const std::string& path);

}  // namespace gerrytopo
