#include "gerrytopo/complex.hpp"
#include "gerrytopo/error.hpp"
#include "gerrytopo/persistence.hpp"
#include "gerrytopo/synthetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gerrytopo;

namespace {

MarginField square_field(std::size_t n, std::vector<double> values) {
    MarginField f;
    f.grid = {n, n, {0, 0}, 1.0};
    f.values = std::move(values);
    f.background.assign(n * n, 0);
    return f;
}

MarginField island_field(double center) {
    std::vector<double> v(25, -0.3);
    v[12] = center;
    return square_field(5, v);
}

VotingUnit box_unit(const std::string& id, double x0, double y0, double x1, double y1, std::uint64_t d = 0,
                    std::uint64_t r = 100) {
    return {id, make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}), d, r, UnitKind::precinct};
}

struct Rect {
    int x0, y0, x1, y1;
};

void split(std::mt19937_64& rng, Rect r, int depth, std::vector<Rect>& out) {
    std::bernoulli_distribution stop(0.2);
    const bool can_x = r.x1 - r.x0 >= 2, can_y = r.y1 - r.y0 >= 2;
    if (depth == 0 || (!can_x && !can_y) || stop(rng)) {
        out.push_back(r);
        return;
    }
    const bool vertical = can_x && (!can_y || std::bernoulli_distribution(0.5)(rng));
    if (vertical) {
        const int cut = std::uniform_int_distribution<int>(r.x0 + 1, r.x1 - 1)(rng);
        split(rng, {r.x0, r.y0, cut, r.y1}, depth - 1, out);
        split(rng, {cut, r.y0, r.x1, r.y1}, depth - 1, out);
    } else {
        const int cut = std::uniform_int_distribution<int>(r.y0 + 1, r.y1 - 1)(rng);
        split(rng, {r.x0, r.y0, r.x1, cut}, depth - 1, out);
        split(rng, {r.x0, cut, r.x1, r.y1}, depth - 1, out);
    }
}

void expect_closed_and_monotone(const FilteredComplex& k) {
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto b = k.boundary(i);
        if (k.dim(i) == 0) EXPECT_TRUE(b.empty());
        if (k.dim(i) == 1) EXPECT_EQ(b.size(), 2u);
        if (k.dim(i) == 2) EXPECT_TRUE(b.size() == 3 || b.size() == 4);
        for (auto f : b) {
            ASSERT_LT(f, i);
            EXPECT_EQ(k.dim(f), k.dim(i) - 1);
            EXPECT_LE(k.level(f), k.level(i));
        }
        if (i > 0) EXPECT_LE(k.level(i - 1), k.level(i));
    }
    for (int l = 1; l < k.num_levels(); ++l) {
        const auto now = k.count_active(l), next = k.count_active(l + 1);
        for (int d = 0; d < 3; ++d) EXPECT_LE(now[d], next[d]);
    }
}

void expect_euler(const FilteredComplex& k) {
    for (int l = 1; l <= k.num_levels(); ++l) {
        const auto c = k.count_active(l);
        const auto b = oracle::betti(k, l);
        const long euler = static_cast<long>(c[0]) - static_cast<long>(c[1]) + static_cast<long>(c[2]);
        EXPECT_EQ(euler, static_cast<long>(b[0]) - static_cast<long>(b[1]) + static_cast<long>(b[2])) << "level " << l;
    }
}

}  // namespace

TEST(UniformSchedule, TwentyFive) {
    const auto s = uniform_schedule(25, 1.0);
    ASSERT_EQ(s.num_levels(), 25);
    for (int i = 1; i <= 25; ++i) EXPECT_NEAR(s.threshold(i), 0.04 * i, 1e-15);
    EXPECT_EQ(s.threshold(25), 1.0);
    EXPECT_EQ(s.threshold(0), 0.0);
}

TEST(UniformSchedule, Two) { EXPECT_EQ(uniform_schedule(2, 1.0).thresholds(), (std::vector<double>{0.5, 1.0})); }

TEST(UniformSchedule, TwentyAtNinetyFive) {
    const auto s = uniform_schedule(20, 0.95);
    EXPECT_NEAR(s.threshold(1), 0.0475, 1e-15);
    EXPECT_EQ(s.threshold(20), 0.95);
}

TEST(UniformSchedule, Errors) {
    EXPECT_THROW(uniform_schedule(1, 1.0), ParameterError);
    EXPECT_THROW(uniform_schedule(5, 0.0), ParameterError);
    EXPECT_THROW(uniform_schedule(5, 1.5), ParameterError);
    EXPECT_THROW(LevelSchedule({0.5, 0.5}), ParameterError);
    EXPECT_THROW(LevelSchedule({0.5}), ParameterError);
}

TEST(LevelSchedule, EntryLevels) {
    const auto s = uniform_schedule(25, 1.0);
    EXPECT_EQ(s.entry_level(-0.7), 1);
    EXPECT_EQ(s.entry_level(0.0), 1);
    EXPECT_EQ(s.entry_level(0.01), 1);
    EXPECT_EQ(s.entry_level(0.5), 13);
    EXPECT_EQ(s.entry_level(0.97), 25);
    EXPECT_EQ(s.entry_level(1.0), 26);
}

TEST(LevelsetFiltration, AllRepublicanBlock) {
    const auto k = build_levelset_filtration(square_field(4, std::vector<double>(16, -0.4)), uniform_schedule(25, 1.0));
    EXPECT_EQ(k.count_active(1), (std::vector<std::size_t>{16, 24, 9}));
    for (std::size_t i = 0; i < k.size(); ++i) EXPECT_EQ(k.level(i), 1);
    const auto bc = barcode(k);
    ASSERT_EQ(bc.bars(0).size(), 1u);
    EXPECT_EQ(bc.bars(0)[0], (PersistencePair{0, 1, std::nullopt}));
    EXPECT_TRUE(bc.bars(1).empty());
}

TEST(LevelsetFiltration, IslandDiesAtThirteen) {
    const auto k = build_levelset_filtration(island_field(0.5), uniform_schedule(25, 1.0));
    EXPECT_EQ(pixel_levels(island_field(0.5), uniform_schedule(25, 1.0))[12], 13);
    const auto bars = barcode(k).bars(1);
    ASSERT_EQ(bars.size(), 1u);
    EXPECT_EQ(bars[0], (PersistencePair{1, 1, 13}));
}

TEST(LevelsetFiltration, FullMarginIslandPersists) {
    const auto k = build_levelset_filtration(island_field(1.0), uniform_schedule(25, 1.0));
    EXPECT_EQ(k.count_active(25)[0], 24u);
    const auto bars = barcode(k).bars(1);
    ASSERT_EQ(bars.size(), 1u);
    EXPECT_EQ(bars[0], (PersistencePair{1, 1, std::nullopt}));
}

TEST(LevelsetFiltration, RepublicanIslandsFlipSign) {
    auto f = island_field(0.5);
    for (auto& v : f.values) v = -v;
    const auto bars = barcode(build_levelset_filtration(f, uniform_schedule(25, 1.0), IslandParty::republican)).bars(1);
    ASSERT_EQ(bars.size(), 1u);
    EXPECT_EQ(bars[0].death, 13);
}

TEST(LevelsetFiltration, BackgroundNeverEnters) {
    auto f = square_field(3, std::vector<double>(9, -0.1));
    f.background[4] = 1;
    const auto k = build_levelset_filtration(f, uniform_schedule(4, 1.0));
    EXPECT_EQ(k.count_active(4), (std::vector<std::size_t>{8, 8, 0}));
    const auto bars = barcode(k).bars(1);
    ASSERT_EQ(bars.size(), 1u);
    EXPECT_TRUE(bars[0].essential());
}

TEST(LevelsetFiltration, AllBackgroundIsEmpty) {
    auto f = square_field(3, std::vector<double>(9, 0.0));
    f.background.assign(9, 1);
    EXPECT_THROW(build_levelset_filtration(f, uniform_schedule(4, 1.0)), EmptyComplexError);
}

TEST(Adjacency, SharedEdge) {
    const UnitCollection u({box_unit("A", 0, 0, 1, 1), box_unit("B", 1, 0, 2, 1)});
    EXPECT_TRUE(detect_adjacency(u, AdjacencyKind::rook).adjacent(0, 1));
    EXPECT_TRUE(detect_adjacency(u, AdjacencyKind::queen).adjacent(0, 1));
}

TEST(Adjacency, CornerOnly) {
    const UnitCollection u({box_unit("A", 0, 0, 1, 1), box_unit("B", 1, 1, 2, 2)});
    EXPECT_FALSE(detect_adjacency(u, AdjacencyKind::rook).adjacent(0, 1));
    EXPECT_TRUE(detect_adjacency(u, AdjacencyKind::queen).adjacent(1, 0));
}

TEST(Adjacency, Apart) {
    const UnitCollection u({box_unit("A", 0, 0, 1, 1), box_unit("B", 2, 0, 3, 1)});
    EXPECT_EQ(detect_adjacency(u, AdjacencyKind::rook).edge_count(), 0u);
    EXPECT_EQ(detect_adjacency(u, AdjacencyKind::queen).edge_count(), 0u);
}

TEST(Adjacency, PartialEdgeOverlapIsRook) {
    const UnitCollection u({box_unit("A", 0, 0, 2, 1), box_unit("B", 1, 1, 3, 2)});
    EXPECT_TRUE(detect_adjacency(u, AdjacencyKind::rook).adjacent(0, 1));
}

TEST(AdjacencyFiltration, ThreeMutuallyAdjacent) {
    const UnitCollection u({box_unit("A", 0, 0, 2, 1), box_unit("B", 0, 1, 1, 2), box_unit("C", 1, 1, 2, 2)});
    const auto k = build_adjacency_filtration(u, AdjacencyKind::rook, uniform_schedule(25, 1.0));
    EXPECT_EQ(k.count_active(1), (std::vector<std::size_t>{3, 3, 1}));
    for (std::size_t i = 0; i < k.size(); ++i) EXPECT_EQ(k.level(i), 1);
}

TEST(AdjacencyFiltration, SweepStepFromMargin) {
    // 0.93 Republican margin: below 0.95, above 0.9025.
    const UnitCollection u({box_unit("A", 0, 0, 1, 1, 35, 965), box_unit("B", 1, 0, 2, 1, 0, 100)});
    const auto k = build_adjacency_filtration(u, AdjacencyKind::rook, uniform_schedule(20, 0.95));
    EXPECT_EQ(k.count_active(1), (std::vector<std::size_t>{1, 0, 0}));
    EXPECT_EQ(k.count_active(2), (std::vector<std::size_t>{2, 1, 0}));
}

TEST(AdjacencyFiltration, IslandPartyUnitsExcluded) {
    const UnitCollection u({box_unit("D", 0, 0, 1, 1, 90, 10), box_unit("R", 1, 0, 2, 1, 10, 90)});
    const auto k = build_adjacency_filtration(u, AdjacencyKind::queen, uniform_schedule(25, 1.0));
    EXPECT_EQ(k.count_active(25), (std::vector<std::size_t>{1, 0, 0}));
    const auto flipped =
        build_adjacency_filtration(u, AdjacencyKind::queen, uniform_schedule(25, 1.0), IslandParty::republican);
    EXPECT_EQ(flipped.count_active(25), (std::vector<std::size_t>{1, 0, 0}));
}

TEST(AdjacencyFiltration, RingOfRepublicanPrecinctsHasHole) {
    const auto fixture = synthetic::island_precincts();
    const auto k = build_adjacency_filtration(fixture, AdjacencyKind::queen, uniform_schedule(25, 1.0));
    const auto bars = barcode(k).bars(1);
    ASSERT_EQ(bars.size(), 1u);
    EXPECT_TRUE(bars[0].essential());
}

TEST(FilteredComplex, RejectsMalformedCells) {
    EXPECT_THROW(FilteredComplex::from_cells({{0, 2, {}}, {0, 1, {}}, {1, 1, {0, 1}}}, 3), StructureError);
    EXPECT_THROW(FilteredComplex::from_cells({{0, 1, {}}, {1, 1, {0}}}, 3), StructureError);
    EXPECT_THROW(FilteredComplex::from_cells({{0, 1, {}}, {1, 1, {0, 7}}}, 3), StructureError);
    EXPECT_THROW(FilteredComplex::from_cells({{0, 1, {}}, {0, 1, {}}, {2, 1, {0, 1}}}, 3), StructureError);
    EXPECT_THROW(FilteredComplex::from_cells({{0, 5, {}}}, 3), StructureError);
}

TEST(FilteredComplex, SortsByLevelThenDimension) {
    const auto k = FilteredComplex::from_cells({{1, 2, {1, 2}}, {0, 2, {}}, {0, 1, {}}}, 3);
    EXPECT_EQ(k.dump(), "cell 0 dim 0 level 1 boundary\ncell 1 dim 0 level 2 boundary\ncell 2 dim 1 level 2 boundary 0 1\n");
}

TEST(ComplexProperties, LevelsetClosureMonotonicityEuler) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t w = 1 + trial % 9, h = 1 + (trial * 5) % 11;
        const auto f = oracle::random_field(rng, w, h, 0.15);
        const auto schedule = uniform_schedule(2 + trial % 9, 1.0);
        FilteredComplex k;
        try {
            k = build_levelset_filtration(f, schedule);
        } catch (const EmptyComplexError&) {
            continue;
        }
        expect_closed_and_monotone(k);
        expect_euler(k);
    }
}

TEST(ComplexProperties, AdjacencyClosureMonotonicityEuler) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> votes(1, 100);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rect> rects;
        split(rng, {0, 0, 12, 10}, 7, rects);
        std::vector<VotingUnit> units;
        for (std::size_t i = 0; i < rects.size(); ++i) {
            const auto& r = rects[i];
            units.push_back(box_unit("R" + std::to_string(i), r.x0, r.y0, r.x1, r.y1, votes(rng), votes(rng)));
        }
        for (auto kind : {AdjacencyKind::queen, AdjacencyKind::rook}) {
            const auto k = build_adjacency_filtration(UnitCollection(units), kind, uniform_schedule(10, 1.0));
            expect_closed_and_monotone(k);
            expect_euler(k);
        }
    }
}

TEST(ComplexProperties, RookSubsetOfQueenOnTilings) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rect> rects;
        split(rng, {0, 0, 16, 16}, 8, rects);
        std::vector<VotingUnit> units;
        for (std::size_t i = 0; i < rects.size(); ++i) {
            units.push_back(box_unit("R" + std::to_string(i), rects[i].x0, rects[i].y0, rects[i].x1, rects[i].y1));
        }
        const UnitCollection coll(units);
        const auto rook = detect_adjacency(coll, AdjacencyKind::rook);
        const auto queen = detect_adjacency(coll, AdjacencyKind::queen);
        for (std::size_t a = 0; a < rects.size(); ++a) {
            EXPECT_FALSE(queen.adjacent(a, a));
            for (std::size_t b = 0; b < rects.size(); ++b) {
                if (a == b) continue;
                const Rect &p = rects[a], &q = rects[b];
                const int ox = std::min(p.x1, q.x1) - std::max(p.x0, q.x0);
                const int oy = std::min(p.y1, q.y1) - std::max(p.y0, q.y0);
                // Closed rectangles of a tiling touch iff both overlaps are >= 0.
                const bool touch = ox >= 0 && oy >= 0;
                const bool share_edge = touch && (ox > 0 || oy > 0);
                EXPECT_EQ(queen.adjacent(a, b), touch);
                EXPECT_EQ(rook.adjacent(a, b), share_edge);
                if (rook.adjacent(a, b)) EXPECT_TRUE(queen.adjacent(a, b));
                EXPECT_EQ(rook.adjacent(a, b), rook.adjacent(b, a));
            }
        }
    }
}
