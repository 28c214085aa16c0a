#pragma once

#include "gerrytopo/complex.hpp"
#include "gerrytopo/persistence.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gerrytopo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct DiagramPoint {
    double birth = 0.0;
    double death = kInfinity;

    bool essential() const { return death == kInfinity; }
    double persistence() const { return death - birth; }
};

// Points of one homology dimension. Finite points satisfy death > birth.
class Diagram {
public:
    Diagram() = default;
    Diagram(std::vector<DiagramPoint> points);
    Diagram(std::initializer_list<DiagramPoint> points) : Diagram(std::vector<DiagramPoint>(points)) {}

    const std::vector<DiagramPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

private:
    std::vector<DiagramPoint> points_;
};

// Bars of dimension `dim`; levels map to tau_i when a schedule is given,
// otherwise the level index itself is used.
Diagram to_diagram(const Barcode& barcode, int dim, const LevelSchedule* schedule = nullptr);

// Reads the barcode JSON format (either unit system) into one diagram.
Diagram diagram_from_json(const std::string& document, int dim);

// One matched pair; nullopt stands for the diagonal.
struct MatchedPair {
    std::optional<std::size_t> a;
    std::optional<std::size_t> b;
    double cost = 0.0;
};

struct Matching {
    std::vector<MatchedPair> pairs;
};

struct DistanceResult {
    double value = 0.0;
    Matching matching;
};

enum class GroundMetric { linf, l2 };

// L-infinity bottleneck distance. Essential points are matched among
// themselves in birth order; differing essential counts give infinity.
DistanceResult bottleneck_matching(const Diagram& a, const Diagram& b);
double bottleneck(const Diagram& a, const Diagram& b);

// p-Wasserstein distance by optimal assignment on the diagonal-augmented
// cost matrix. Same essential-point convention as bottleneck.
DistanceResult wasserstein_matching(const Diagram& a, const Diagram& b, double p,
                                    GroundMetric metric = GroundMetric::linf);
double wasserstein(const Diagram& a, const Diagram& b, double p, GroundMetric metric = GroundMetric::linf);

// Sum of (death - birth)^p with infinite deaths replaced by max_death.
double total_persistence(const Diagram& a, double p, double max_death);

// Minimum-cost perfect assignment for a square cost matrix (row-major);
// returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n);

// Shortest round-trip decimal text for a distance; infinity prints as "inf".
std::string format_real(double value);

// Header row and column of labels, cells as decimals or "inf".
std::string distance_matrix_csv(const std::vector<std::string>& labels,
                                const std::vector<std::vector<double>>& values);

}  // namespace gerrytopo
