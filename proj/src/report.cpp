#include "gerrytopo/report.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

namespace gerrytopo {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !in.eof()) throw ParameterError("config: invalid value '" + value + "' for " + key);
    return out;
}

// Runs `fn`, converting library errors into StageError(stage, ...).
template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what());
    }
}

}  // namespace

void apply_config_value(AnalysisConfig& c, const std::string& key, const std::string& value) {
    if (key == "label") c.label = value;
    else if (key == "geo") c.precinct_geo = value;
    else if (key == "votes") c.precinct_votes = value;
    else if (key == "district_geo") c.district_geo = value;
    else if (key == "district_votes") c.district_votes = value;
    else if (key == "id_property") c.id_property = value;
    else if (key == "width") c.width = parse_number<std::size_t>(key, value);
    else if (key == "mode") c.mode = parse_margin_mode(value);
    else if (key == "levels") c.levels = parse_number<int>(key, value);
    else if (key == "max_margin") c.max_margin = parse_number<double>(key, value);
    else if (key == "islands") c.islands = parse_island_party(value);
    else if (key == "dim") c.dim = parse_number<int>(key, value);
    else if (key == "wasserstein_p") c.wasserstein_p = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "workers") c.workers = parse_number<std::size_t>(key, value);
    else if (key == "snapshots") {
        if (value != "true" && value != "false") throw ParameterError("config: snapshots must be true|false");
        c.write_snapshots = value == "true";
    } else {
        throw ParameterError("config: unknown key '" + key + "'");
    }
}

AnalysisConfig parse_config(const std::string& text, AnalysisConfig base) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

YearResult run_year(const UnitCollection& precincts, const UnitCollection& districts,
                    const AnalysisConfig& config) {
    if (config.dim < 0 || config.dim >= kReportedDims) throw ParameterError("dim must be 0 or 1");
    if (config.width < 1) throw ParameterError("width must be positive");
    YearResult result;
    result.label = config.label;
    result.schedule = staged("complex", [&] { return uniform_schedule(config.levels, config.max_margin); });

    const Grid grid = staged("raster", [&] {
        if (precincts.empty() || districts.empty()) throw RasterError("empty unit collection");
        BoundingBox box = precincts.bounds();
        box.expand(districts.bounds());
        return make_grid(box, config.width);
    });
    result.precinct_field = staged("raster", [&] {
        return margin_field(rasterize(precincts, grid), precincts, config.mode);
    });
    result.district_field = staged("raster", [&] {
        return margin_field(rasterize(districts, grid), districts, config.mode);
    });
    result.precinct_barcode = staged("persistence", [&] {
        const auto complex = build_levelset_filtration(result.precinct_field, result.schedule, config.islands);
        return barcode(complex);
    });
    result.district_barcode = staged("persistence", [&] {
        const auto complex = build_levelset_filtration(result.district_field, result.schedule, config.islands);
        return barcode(complex);
    });
    staged("compare", [&] {
        const double max_death = result.schedule.threshold(result.schedule.num_levels());
        for (int d = 0; d < kReportedDims; ++d) {
            const auto du = static_cast<std::size_t>(d);
            const Diagram p = to_diagram(result.precinct_barcode, d, &result.schedule);
            const Diagram q = to_diagram(result.district_barcode, d, &result.schedule);
            result.bottleneck[du] = bottleneck(p, q);
            result.wasserstein[du] = wasserstein(p, q, config.wasserstein_p);
            result.precinct_total_persistence[du] = total_persistence(p, 1.0, max_death);
            result.district_total_persistence[du] = total_persistence(q, 1.0, max_death);
        }
        return 0;
    });
    result.district_compactness = staged("compactness", [&] { return compactness_scores(districts, config.seed); });
    return result;
}

YearResult run_year(const AnalysisConfig& config) {
    auto load = [&](const std::string& geo_path, const std::string& votes_path, UnitKind kind) {
        return staged("ingest", [&] {
            if (geo_path.empty() || votes_path.empty()) {
                throw IngestError(to_string(kind) + " geometry and votes paths are required");
            }
            const auto geo = parse_geojson(read_text_file(geo_path), {config.id_property, kind});
            const auto votes = parse_votes_csv(read_text_file(votes_path));
            return join_units(geo, votes);
        });
    };
    auto [precincts, precinct_join] = load(config.precinct_geo, config.precinct_votes, UnitKind::precinct);
    auto [districts, district_join] = load(config.district_geo, config.district_votes, UnitKind::district);
    YearResult result = run_year(precincts, districts, config);
    result.precinct_join = std::move(precinct_join);
    result.district_join = std::move(district_join);
    return result;
}

std::vector<YearResult> run_years(const std::vector<AnalysisConfig>& configs) {
    const std::size_t workers = std::max<std::size_t>(1, configs.empty() ? 1 : configs.front().workers);
    std::vector<YearResult> results(configs.size());
    for (std::size_t start = 0; start < configs.size(); start += workers) {
        const std::size_t end = std::min(configs.size(), start + workers);
        std::vector<std::future<YearResult>> batch;
        for (std::size_t i = start; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&configs, i] { return run_year(configs[i]); }));
        }
        for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
    }
    return results;
}

std::vector<std::vector<double>> cross_year_matrix(const std::vector<YearResult>& results, MapLevel which,
                                                   int dim) {
    const std::size_t n = results.size();
    std::vector<Diagram> diagrams;
    diagrams.reserve(n);
    for (const auto& r : results) {
        const Barcode& b = which == MapLevel::precinct ? r.precinct_barcode : r.district_barcode;
        diagrams.push_back(to_diagram(b, dim, &r.schedule));
    }
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = bottleneck(diagrams[i], diagrams[j]);
    }
    return m;
}

namespace {

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string render_barcode_svg(const Barcode& barcode, int dim, const LevelSchedule& schedule) {
    constexpr double kLeft = 40.0;
    constexpr double kRight = 20.0;
    constexpr double kTop = 20.0;
    constexpr double kBottom = 40.0;
    constexpr double kPlotWidth = 560.0;
    constexpr double kRowHeight = 12.0;
    const auto bars = barcode.bars(dim);
    const double axis_max = schedule.threshold(schedule.num_levels());
    const double plot_height = std::max(1.0, static_cast<double>(bars.size())) * kRowHeight;
    const double width = kLeft + kPlotWidth + kRight;
    const double height = kTop + plot_height + kBottom;
    const double axis_y = kTop + plot_height;
    auto x_of = [&](double v) { return kLeft + v / axis_max * kPlotWidth; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
        << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\">\n";
    svg << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
           "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#1f4e9c\"/></marker></defs>\n";
    svg << "<text x=\"" << fixed(kLeft) << "\" y=\"14.00\" font-size=\"11\">H" << dim << " barcode</text>\n";
    svg << "<line class=\"axis\" x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(axis_y) << "\" x2=\""
        << fixed(kLeft + kPlotWidth) << "\" y2=\"" << fixed(axis_y) << "\" stroke=\"black\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
        << "\" y2=\"" << fixed(axis_y) << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = axis_max * k / 4.0;
        const double x = x_of(v);
        svg << "<line class=\"tick\" x1=\"" << fixed(x) << "\" y1=\"" << fixed(axis_y) << "\" x2=\"" << fixed(x)
            << "\" y2=\"" << fixed(axis_y + 4.0) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(axis_y + 16.0)
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fixed(v) << "</text>\n";
    }
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& bar = bars[i];
        const double y = kTop + (static_cast<double>(i) + 0.5) * kRowHeight;
        const double x1 = x_of(schedule.threshold(bar.birth));
        svg << "<line class=\"bar\" x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y) << "\" x2=\"";
        if (bar.death) {
            svg << fixed(x_of(schedule.threshold(*bar.death))) << "\" y2=\"" << fixed(y)
                << "\" stroke=\"#1f4e9c\" stroke-width=\"4\"/>\n";
        } else {
            svg << fixed(kLeft + kPlotWidth) << "\" y2=\"" << fixed(y)
                << "\" stroke=\"#1f4e9c\" stroke-width=\"4\" marker-end=\"url(#arrow)\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string write_levelset_snapshot(const MarginField& field, const LevelSchedule& schedule, int level,
                                    IslandParty islands) {
    if (level < 1 || level > schedule.num_levels()) {
        throw ParameterError("snapshot level " + std::to_string(level) + " outside 1.." +
                             std::to_string(schedule.num_levels()));
    }
    const auto levels = pixel_levels(field, schedule, islands);
    std::string out = "P5\n" + std::to_string(field.grid.width) + " " + std::to_string(field.grid.height) + "\n255\n";
    out.reserve(out.size() + levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        unsigned char v = 128;
        if (!field.is_background(i)) v = levels[i] <= level ? 255 : 0;
        out.push_back(static_cast<char>(v));
    }
    return out;
}

namespace {

json real_json(double v) {
    if (v == kInfinity) return "inf";
    return v;
}

json join_json(const JoinReport& r) {
    return {{"matched", r.matched}, {"filled_missing", r.filled_missing}, {"orphan_vote_rows", r.orphan_vote_rows}};
}

}  // namespace

std::string year_result_json(const YearResult& r, const AnalysisConfig& config) {
    json per_dim = json::array();
    for (int d = 0; d < kReportedDims; ++d) {
        const auto du = static_cast<std::size_t>(d);
        per_dim.push_back({{"dim", d},
                           {"bottleneck", real_json(r.bottleneck[du])},
                           {"wasserstein", real_json(r.wasserstein[du])},
                           {"precinct_total_persistence", r.precinct_total_persistence[du]},
                           {"district_total_persistence", r.district_total_persistence[du]}});
    }
    json compact = json::array();
    for (const auto& row : r.district_compactness) {
        compact.push_back({{"district_id", row.district_id}, {"polsby_popper", row.polsby_popper}, {"reock", row.reock}});
    }
    const auto& g = r.precinct_field.grid;
    json doc = {
        {"label", r.label},
        {"grid", {{"width", g.width}, {"height", g.height}, {"origin", {g.origin.x, g.origin.y}},
                  {"pixel_size", g.pixel_size}}},
        {"mode", to_string(config.mode)},
        {"islands", to_string(config.islands)},
        {"normalizers", {{"precinct", r.precinct_field.normalizer}, {"district", r.district_field.normalizer}}},
        {"thresholds", r.schedule.thresholds()},
        {"headline_dim", config.dim},
        {"distances", per_dim},
        {"wasserstein_p", config.wasserstein_p},
        {"precinct_barcode", json::parse(barcode_to_json(r.precinct_barcode, BarcodeUnits::threshold, &r.schedule))},
        {"district_barcode", json::parse(barcode_to_json(r.district_barcode, BarcodeUnits::threshold, &r.schedule))},
        {"precinct_join", join_json(r.precinct_join)},
        {"district_join", join_json(r.district_join)},
        {"district_compactness", compact},
        {"conventions",
         {{"ground_metric", "linf"},
          {"essential_points", "matched among themselves by birth order; count mismatch gives inf"},
          {"total_persistence", "p = 1, infinite deaths capped at tau_L"},
          {"polsby_popper", "4*pi*area/perimeter^2, perimeter excludes holes"},
          {"reock", "area / area of minimum enclosing circle of all vertices"}}},
    };
    return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_year_outputs(const YearResult& r, const AnalysisConfig& config, const std::string& out_dir) {
    const std::filesystem::path root(out_dir);
    auto at = [&](const std::string& rel) { return (root / rel).string(); };
    write_file(at("barcodes/precinct.json"), barcode_to_json(r.precinct_barcode, BarcodeUnits::threshold, &r.schedule));
    write_file(at("barcodes/district.json"), barcode_to_json(r.district_barcode, BarcodeUnits::threshold, &r.schedule));
    for (int d = 0; d < kReportedDims; ++d) {
        write_file(at("plots/precinct_h" + std::to_string(d) + ".svg"), render_barcode_svg(r.precinct_barcode, d, r.schedule));
        write_file(at("plots/district_h" + std::to_string(d) + ".svg"), render_barcode_svg(r.district_barcode, d, r.schedule));
    }
    if (config.write_snapshots) {
        for (int level = 1; level <= r.schedule.num_levels(); ++level) {
            char name[32];
            std::snprintf(name, sizeof name, "level_%03d.pgm", level);
            write_file(at(std::string("snapshots/precinct/") + name),
                       write_levelset_snapshot(r.precinct_field, r.schedule, level, config.islands));
            write_file(at(std::string("snapshots/district/") + name),
                       write_levelset_snapshot(r.district_field, r.schedule, level, config.islands));
        }
    }
    const auto du = static_cast<std::size_t>(config.dim);
    write_file(at("distances.csv"),
               distance_matrix_csv({"precinct", "district"}, {{0.0, r.bottleneck[du]}, {r.bottleneck[du], 0.0}}));
    write_file(at("compactness.csv"), compactness_csv(r.district_compactness));
    write_file(at("report.json"), year_result_json(r, config));
}

}  // namespace gerrytopo
