#include "gerrytopo/ingest.hpp"

#include "gerrytopo/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace gerrytopo {

using nlohmann::json;

namespace {

std::vector<Point2> parse_ring(const json& coords) {
    if (!coords.is_array()) throw IngestError("ring is not an array of positions");
    std::vector<Point2> pts;
    pts.reserve(coords.size());
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
            throw IngestError("invalid position");
        }
        pts.push_back({pos[0].get<double>(), pos[1].get<double>()});
    }
    // GeoJSON repeats the first position to close the ring.
    if (pts.size() >= 2 && pts.front() == pts.back()) pts.pop_back();
    return pts;
}

Polygon parse_polygon(const json& rings) {
    if (!rings.is_array() || rings.empty()) throw IngestError("polygon has no rings");
    Polygon part{Ring(parse_ring(rings[0])), {}};
    for (std::size_t i = 1; i < rings.size(); ++i) part.holes.emplace_back(parse_ring(rings[i]));
    return part;
}

std::uint64_t optional_count(const json& props, const char* key) {
    if (!props.is_object() || !props.contains(key)) return 0;
    const auto& v = props[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw IngestError(std::string(key) + " is not a nonnegative integer");
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::uint64_t parse_count(std::string_view field, std::size_t line_no) {
    const std::string where = "row " + std::to_string(line_no) + ": ";
    if (!field.empty() && field.front() == '-') {
        // Distinguish "-5" (negative) from "-abc" (garbage).
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec == std::errc() && p == field.data() + field.size()) {
            throw IngestError(where + "negative count");
        }
        throw IngestError(where + "non-integer count '" + std::string(field) + "'");
    }
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || p != field.data() + field.size()) {
        throw IngestError(where + "non-integer count '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

UnitCollection parse_geojson(std::string_view document, const GeoJsonOptions& options) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw IngestError(std::string("malformed GeoJSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array()) {
        throw IngestError("document is not a GeoJSON FeatureCollection");
    }

    std::vector<VotingUnit> units;
    std::unordered_set<std::string> seen;
    const auto& features = doc["features"];
    units.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::string where = "feature " + std::to_string(i) + ": ";
        const auto& f = features[i];
        const json props = f.contains("properties") ? f["properties"] : json();
        if (!props.is_object() || !props.contains(options.id_property)) {
            throw IngestError(where + "missing id");
        }
        const auto& id_value = props[options.id_property];
        if (!id_value.is_string()) throw IngestError(where + "id is not a string");

        VotingUnit unit;
        unit.id = id_value.get<std::string>();
        unit.kind = options.kind;
        if (!seen.insert(unit.id).second) {
            throw IngestError(where + "duplicate id '" + unit.id + "'");
        }
        try {
            if (!f.contains("geometry") || !f["geometry"].is_object()) {
                throw IngestError("missing geometry");
            }
            const auto& geom = f["geometry"];
            const std::string type = geom.value("type", "");
            const json& coords = geom.contains("coordinates") ? geom["coordinates"] : json();
            std::vector<Polygon> parts;
            if (type == "Polygon") {
                parts.push_back(parse_polygon(coords));
            } else if (type == "MultiPolygon") {
                if (!coords.is_array() || coords.empty()) throw IngestError("empty MultiPolygon");
                for (const auto& poly : coords) parts.push_back(parse_polygon(poly));
            } else {
                throw IngestError("unsupported geometry type '" + type + "'");
            }
            unit.geometry = PolygonSet(std::move(parts));
            unit.dem_votes = optional_count(props, "dem_votes");
            unit.rep_votes = optional_count(props, "rep_votes");
        } catch (const Error& e) {
            throw IngestError(where + e.what());
        }
        units.push_back(std::move(unit));
    }
    try {
        return UnitCollection(std::move(units));
    } catch (const GeometryError& e) {
        throw IngestError(e.what());
    }
}

std::string write_geojson(const UnitCollection& units, const std::string& id_property) {
    auto ring_json = [](const Ring& ring) {
        json arr = json::array();
        for (const auto& p : ring.vertices()) arr.push_back({p.x, p.y});
        arr.push_back({ring.vertices().front().x, ring.vertices().front().y});
        return arr;
    };
    json features = json::array();
    for (const auto& u : units.units()) {
        json polys = json::array();
        for (const auto& part : u.geometry.parts()) {
            json rings = json::array();
            rings.push_back(ring_json(part.outer));
            for (const auto& h : part.holes) rings.push_back(ring_json(h));
            polys.push_back(std::move(rings));
        }
        json feature = {
            {"type", "Feature"},
            {"properties", {{id_property, u.id}, {"dem_votes", u.dem_votes}, {"rep_votes", u.rep_votes}}},
            {"geometry", {{"type", "MultiPolygon"}, {"coordinates", std::move(polys)}}},
        };
        features.push_back(std::move(feature));
    }
    json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump();
}

std::vector<VoteRow> parse_votes_csv(std::string_view document) {
    std::vector<VoteRow> rows;
    std::unordered_set<std::string> seen;
    bool header_seen = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        auto nl = document.find('\n', pos);
        if (nl == std::string_view::npos) nl = document.size();
        std::string_view line = document.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
        if (trim(line).empty()) continue;

        const auto fields = split_fields(line);
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "unit_id" || fields[1] != "dem_votes" ||
                fields[2] != "rep_votes") {
                throw IngestError("row " + std::to_string(line_no) +
                                  ": expected header unit_id,dem_votes,rep_votes");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw IngestError("row " + std::to_string(line_no) + ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        }
        if (fields[0].empty()) throw IngestError("row " + std::to_string(line_no) + ": empty unit_id");
        VoteRow row{std::string(fields[0]), parse_count(fields[1], line_no),
                    parse_count(fields[2], line_no)};
        if (!seen.insert(row.unit_id).second) {
            throw IngestError("row " + std::to_string(line_no) + ": duplicate unit_id '" +
                              row.unit_id + "'");
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw IngestError("empty votes file: missing header");
    return rows;
}

std::pair<UnitCollection, JoinReport> join_units(const UnitCollection& geo,
                                                 const std::vector<VoteRow>& votes) {
    std::unordered_map<std::string, const VoteRow*> by_id;
    for (const auto& row : votes) by_id.emplace(row.unit_id, &row);

    JoinReport report;
    std::vector<VotingUnit> units = geo.units();
    for (auto& u : units) {
        auto it = by_id.find(u.id);
        if (it != by_id.end()) {
            u.dem_votes = it->second->dem_votes;
            u.rep_votes = it->second->rep_votes;
            ++report.matched;
        } else {
            u.dem_votes = kMissingFillVotes;
            u.rep_votes = kMissingFillVotes;
            ++report.filled_missing;
        }
    }
    std::unordered_set<std::string> geo_ids;
    for (const auto& u : geo.units()) geo_ids.insert(u.id);
    for (const auto& row : votes) {
        if (!geo_ids.count(row.unit_id)) report.orphan_vote_rows.push_back(row.unit_id);
    }
    return {UnitCollection(std::move(units)), std::move(report)};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace gerrytopo
