// gerrytopo: command-line front end for the level-set gerrymandering pipeline.

#include "gerrytopo/compactness.hpp"
#include "gerrytopo/compare.hpp"
#include "gerrytopo/complex.hpp"
#include "gerrytopo/error.hpp"
#include "gerrytopo/ingest.hpp"
#include "gerrytopo/persistence.hpp"
#include "gerrytopo/raster.hpp"
#include "gerrytopo/report.hpp"
#include "gerrytopo/synthetic.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace gt = gerrytopo;

namespace {

// Options shared by every subcommand; values are kept as text and applied
// on top of the --config file so that flags win.
struct CommonFlags {
    std::string config_path;
    std::string out;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        options[key] = app->add_option(flag, values[key], help);
    }

    gt::AnalysisConfig resolve() const {
        gt::AnalysisConfig config;
        if (!config_path.empty()) config = gt::parse_config(gt::read_text_file(config_path));
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) gt::apply_config_value(config, key, values.at(key));
        }
        return config;
    }
};

CommonFlags& add_common(CLI::App* app, std::vector<std::unique_ptr<CommonFlags>>& store) {
    store.push_back(std::make_unique<CommonFlags>());
    CommonFlags& f = *store.back();
    app->add_option("--config", f.config_path, "key = value configuration file");
    app->add_option("--out", f.out, "output path");
    f.add(app, "--geo", "geo", "precinct (or unit) GeoJSON");
    f.add(app, "--votes", "votes", "precinct (or unit) votes CSV");
    f.add(app, "--district-geo", "district_geo", "district GeoJSON");
    f.add(app, "--district-votes", "district_votes", "district votes CSV");
    f.add(app, "--id-property", "id_property", "GeoJSON property holding the unit id (default id)");
    f.add(app, "--width", "width", "raster width in pixels (default 1024)");
    f.add(app, "--levels", "levels", "number of threshold levels (default 25)");
    f.add(app, "--max-margin", "max_margin", "largest threshold (default 1.0)");
    f.add(app, "--mode", "mode", "relative|density (default density)");
    f.add(app, "--islands", "islands", "democratic|republican: party whose strongholds form holes");
    f.add(app, "--dim", "dim", "homology dimension for headline distances (default 1)");
    f.add(app, "--seed", "seed", "seed for randomized algorithms (default 0)");
    f.add(app, "--label", "label", "label for this run");
    f.add(app, "--workers", "workers", "parallel years (default 1)");
    return f;
}

std::pair<gt::UnitCollection, gt::JoinReport> load_units(const std::string& geo, const std::string& votes,
                                                         const gt::AnalysisConfig& config, gt::UnitKind kind) {
    if (geo.empty()) throw gt::ParameterError("--geo is required");
    auto units = gt::parse_geojson(gt::read_text_file(geo), {config.id_property, kind});
    if (votes.empty()) return {std::move(units), gt::JoinReport{units.size(), 0, {}}};
    return gt::join_units(units, gt::parse_votes_csv(gt::read_text_file(votes)));
}

nlohmann::json join_report_json(const gt::JoinReport& r) {
    return {{"matched", r.matched}, {"filled_missing", r.filled_missing}, {"orphan_vote_rows", r.orphan_vote_rows}};
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty()) std::cout << text;
    else gt::write_file(out, text);
}

void warn_orphans(const gt::JoinReport& r) {
    for (const auto& id : r.orphan_vote_rows) std::cerr << "warning: vote row '" << id << "' has no geometry\n";
    if (r.filled_missing > 0) {
        std::cerr << "warning: " << r.filled_missing << " unit(s) without votes filled with "
                  << gt::kMissingFillVotes << "/" << gt::kMissingFillVotes << "\n";
    }
}

void write_synthetic(const std::string& kind, const std::string& out_dir, std::uint64_t seed) {
    gt::UnitCollection precincts;
    gt::UnitCollection districts;
    if (kind == "packed" || kind == "cracked") {
        auto fixture = kind == "packed" ? gt::synthetic::packed_fixture() : gt::synthetic::cracked_fixture();
        precincts = std::move(fixture.precincts);
        districts = std::move(fixture.districts);
    } else if (kind == "voronoi") {
        precincts = gt::synthetic::voronoi_precincts(2716, seed, 100000.0, 60000.0);
        districts = gt::synthetic::voronoi_districts(14, seed, precincts, 100000.0, 60000.0);
    } else {
        throw gt::ParameterError("unknown synthetic kind '" + kind + "' (packed|cracked|voronoi)");
    }
    auto votes_csv = [](const gt::UnitCollection& units) {
        std::ostringstream out;
        out << "unit_id,dem_votes,rep_votes\n";
        for (const auto& u : units.units()) out << u.id << ',' << u.dem_votes << ',' << u.rep_votes << '\n';
        return out.str();
    };
    const std::filesystem::path root(out_dir);
    gt::write_file((root / "precincts.geojson").string(), gt::write_geojson(precincts));
    gt::write_file((root / "precinct_votes.csv").string(), votes_csv(precincts));
    gt::write_file((root / "districts.geojson").string(), gt::write_geojson(districts));
    gt::write_file((root / "district_votes.csv").string(), votes_csv(districts));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistent-homology comparison of precinct and district vote-margin maps"};
    app.require_subcommand(1);
    std::vector<std::unique_ptr<CommonFlags>> store;

    auto* ingest = app.add_subcommand("ingest", "parse and join geometry with votes; writes joined GeoJSON");
    auto& ingest_flags = add_common(ingest, store);

    auto* rasterize = app.add_subcommand("rasterize", "write the margin field as 16-bit PGM plus JSON sidecar");
    auto& raster_flags = add_common(rasterize, store);

    auto* barcode = app.add_subcommand("barcode", "compute the barcode of one map");
    auto& barcode_flags = add_common(barcode, store);
    std::string filtration = "levelset";
    std::string units = "threshold";
    std::string dump_path;
    barcode->add_option("--filtration", filtration, "levelset|queen|rook")->check(CLI::IsMember({"levelset", "queen", "rook"}));
    barcode->add_option("--units", units, "threshold|level")->check(CLI::IsMember({"threshold", "level"}));
    barcode->add_option("--dump-complex", dump_path, "write the filtered complex as text");

    auto* compare = app.add_subcommand("compare", "distances between two barcode JSON files");
    auto& compare_flags = add_common(compare, store);
    std::string barcode_a, barcode_b;
    double order = 2.0;
    std::string metric = "linf";
    compare->add_option("--a", barcode_a, "first barcode JSON")->required();
    compare->add_option("--b", barcode_b, "second barcode JSON")->required();
    compare->add_option("--p", order, "Wasserstein order (default 2)");
    compare->add_option("--metric", metric, "ground metric linf|l2")->check(CLI::IsMember({"linf", "l2"}));

    auto* compactness = app.add_subcommand("compactness", "Polsby-Popper and Reock scores of a district plan");
    auto& compact_flags = add_common(compactness, store);

    auto* ttest = app.add_subcommand("ttest", "paired two-tailed t-test between two score files");
    auto& ttest_flags = add_common(ttest, store);
    std::string scores_a, scores_b, score_metric = "polsby_popper";
    ttest->add_option("--a", scores_a, "first compactness CSV")->required();
    ttest->add_option("--b", scores_b, "second compactness CSV")->required();
    ttest->add_option("--metric", score_metric, "polsby_popper|reock")->check(CLI::IsMember({"polsby_popper", "reock"}));

    auto* run = app.add_subcommand("run", "full precinct vs district analysis for one year");
    auto& run_flags = add_common(run, store);
    bool no_snapshots = false;
    run->add_flag("--no-snapshots", no_snapshots, "skip level-set snapshot images");

    auto* matrix = app.add_subcommand("matrix", "cross-year bottleneck matrices");
    auto& matrix_flags = add_common(matrix, store);
    std::vector<std::string> year_configs;
    matrix->add_option("--year-config", year_configs, "one config file per year (repeat)")->required();

    auto* synth = app.add_subcommand("synth", "write a synthetic map (packed|cracked|voronoi) as GeoJSON + CSV");
    auto& synth_flags = add_common(synth, store);
    std::string synth_kind = "packed";
    synth->add_option("--kind", synth_kind, "packed|cracked|voronoi");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            const auto config = ingest_flags.resolve();
            auto [joined, report] = load_units(config.precinct_geo, config.precinct_votes, config, gt::UnitKind::precinct);
            warn_orphans(report);
            if (!ingest_flags.out.empty()) gt::write_file(ingest_flags.out, gt::write_geojson(joined, config.id_property));
            std::cout << join_report_json(report).dump(2) << "\n";
        } else if (rasterize->parsed()) {
            const auto config = raster_flags.resolve();
            if (config.width < 8) throw gt::ParameterError("--width must be at least 8");
            if (raster_flags.out.empty()) throw gt::ParameterError("--out <dir> is required");
            auto [joined, report] = load_units(config.precinct_geo, config.precinct_votes, config, gt::UnitKind::precinct);
            warn_orphans(report);
            const auto field = gt::margin_field(gt::rasterize(joined, config.width), joined, config.mode);
            const std::filesystem::path root(raster_flags.out);
            gt::write_file((root / "margin.pgm").string(), gt::encode_margin_pgm(field));
            gt::write_file((root / "margin.json").string(), gt::encode_margin_sidecar(field));
        } else if (barcode->parsed()) {
            const auto config = barcode_flags.resolve();
            auto [joined, report] = load_units(config.precinct_geo, config.precinct_votes, config, gt::UnitKind::precinct);
            warn_orphans(report);
            const auto schedule = gt::uniform_schedule(config.levels, config.max_margin);
            gt::FilteredComplex complex;
            if (filtration == "levelset") {
                if (config.width < 8) throw gt::ParameterError("--width must be at least 8");
                const auto field = gt::margin_field(gt::rasterize(joined, config.width), joined, config.mode);
                complex = gt::build_levelset_filtration(field, schedule, config.islands);
            } else {
                complex = gt::build_adjacency_filtration(joined, gt::parse_adjacency_kind(filtration), schedule,
                                                         config.islands);
            }
            if (!dump_path.empty()) gt::write_file(dump_path, complex.dump());
            // Adjacency steps run from strong to weak margins, so threshold
            // units are only meaningful for the level-set filtration.
            const bool level_units = units == "level" || filtration != "levelset";
            emit(barcode_flags.out, gt::barcode_to_json(gt::barcode(complex),
                                                        level_units ? gt::BarcodeUnits::level : gt::BarcodeUnits::threshold,
                                                        &schedule));
        } else if (compare->parsed()) {
            const auto config = compare_flags.resolve();
            const auto a = gt::diagram_from_json(gt::read_text_file(barcode_a), config.dim);
            const auto b = gt::diagram_from_json(gt::read_text_file(barcode_b), config.dim);
            const auto ground = metric == "l2" ? gt::GroundMetric::l2 : gt::GroundMetric::linf;
            auto number = [](double v) { return v == gt::kInfinity ? nlohmann::json("inf") : nlohmann::json(v); };
            nlohmann::json doc = {{"dim", config.dim},
                                  {"bottleneck", number(gt::bottleneck(a, b))},
                                  {"wasserstein", number(gt::wasserstein(a, b, order, ground))},
                                  {"wasserstein_p", order},
                                  {"ground_metric", metric}};
            emit(compare_flags.out, doc.dump(2) + "\n");
        } else if (compactness->parsed()) {
            const auto config = compact_flags.resolve();
            const std::string& geo = config.district_geo.empty() ? config.precinct_geo : config.district_geo;
            const auto units_in = gt::parse_geojson(gt::read_text_file(geo), {config.id_property, gt::UnitKind::district});
            emit(compact_flags.out, gt::compactness_csv(gt::compactness_scores(units_in, config.seed)));
        } else if (ttest->parsed()) {
            (void)ttest_flags.resolve();
            const auto a = gt::parse_compactness_csv(gt::read_text_file(scores_a));
            const auto b = gt::parse_compactness_csv(gt::read_text_file(scores_b));
            std::vector<double> xa, xb;
            for (const auto& r : a) xa.push_back(score_metric == "reock" ? r.reock : r.polsby_popper);
            for (const auto& r : b) xb.push_back(score_metric == "reock" ? r.reock : r.polsby_popper);
            emit(ttest_flags.out, gt::ttest_json(score_metric, gt::paired_t_test(xa, xb)));
        } else if (run->parsed()) {
            auto config = run_flags.resolve();
            if (config.width < 8) throw gt::ParameterError("--width must be at least 8");
            if (run_flags.out.empty()) throw gt::ParameterError("--out <dir> is required");
            if (no_snapshots) config.write_snapshots = false;
            const auto result = gt::run_year(config);
            warn_orphans(result.precinct_join);
            warn_orphans(result.district_join);
            gt::write_year_outputs(result, config, run_flags.out);
            const auto d = static_cast<std::size_t>(config.dim);
            std::cout << "H" << config.dim << " bottleneck(precinct, district) = " << gt::format_real(result.bottleneck[d])
                      << "\n";
        } else if (matrix->parsed()) {
            const auto base = matrix_flags.resolve();
            std::vector<gt::AnalysisConfig> configs;
            std::vector<std::string> labels;
            for (const auto& path : year_configs) {
                auto c = gt::parse_config(gt::read_text_file(path), base);
                if (c.label == "year") c.label = std::filesystem::path(path).stem().string();
                labels.push_back(c.label);
                configs.push_back(std::move(c));
            }
            configs.front().workers = base.workers;
            const auto results = gt::run_years(configs);
            const std::filesystem::path root(matrix_flags.out.empty() ? "." : matrix_flags.out);
            for (auto which : {gt::MapLevel::precinct, gt::MapLevel::district}) {
                const auto m = gt::cross_year_matrix(results, which, base.dim);
                const std::string name = which == gt::MapLevel::precinct ? "precinct" : "district";
                gt::write_file((root / (name + "_matrix.csv")).string(), gt::distance_matrix_csv(labels, m));
            }
        } else if (synth->parsed()) {
            const auto config = synth_flags.resolve();
            if (synth_flags.out.empty()) throw gt::ParameterError("--out <dir> is required");
            write_synthetic(synth_kind, synth_flags.out, config.seed);
        }
    } catch (const gt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
