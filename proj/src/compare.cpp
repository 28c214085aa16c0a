#include "gerrytopo/compare.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace gerrytopo {

Diagram::Diagram(std::vector<DiagramPoint> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
        if (!std::isfinite(p.birth)) throw ParameterError("diagram point has a non-finite birth");
        if (!p.essential() && !(p.death > p.birth)) {
            throw ParameterError("diagram point must satisfy death > birth");
        }
    }
}

Diagram to_diagram(const Barcode& barcode, int dim, const LevelSchedule* schedule) {
    auto value = [&](int level) {
        return schedule ? schedule->threshold(level) : static_cast<double>(level);
    };
    std::vector<DiagramPoint> pts;
    for (const auto& p : barcode.pairs) {
        if (p.dim != dim) continue;
        pts.push_back({value(p.birth), p.death ? value(*p.death) : kInfinity});
    }
    return Diagram(std::move(pts));
}

Diagram diagram_from_json(const std::string& document, int dim) {
    using nlohmann::json;
    std::vector<DiagramPoint> pts;
    try {
        const json doc = json::parse(document);
        for (const auto& p : doc.at("pairs")) {
            if (p.at("dim").get<int>() != dim) continue;
            const auto& death = p.at("death");
            pts.push_back({p.at("birth").get<double>(),
                           death.is_string() && death.get<std::string>() == "inf" ? kInfinity
                                                                                   : death.get<double>()});
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("invalid barcode JSON: ") + e.what());
    }
    return Diagram(std::move(pts));
}

namespace {

struct Split {
    std::vector<std::size_t> finite;
    std::vector<std::size_t> essential;  // sorted by birth
};

Split split(const Diagram& d) {
    Split s;
    for (std::size_t i = 0; i < d.size(); ++i) (d.points()[i].essential() ? s.essential : s.finite).push_back(i);
    std::stable_sort(s.essential.begin(), s.essential.end(), [&](std::size_t x, std::size_t y) {
        return d.points()[x].birth < d.points()[y].birth;
    });
    return s;
}

double linf(const DiagramPoint& x, const DiagramPoint& y) {
    return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

double ground(const DiagramPoint& x, const DiagramPoint& y, GroundMetric metric) {
    if (metric == GroundMetric::linf) return linf(x, y);
    return std::hypot(x.birth - y.birth, x.death - y.death);
}

// Distance from a point to its nearest diagonal point.
double to_diagonal(const DiagramPoint& x, GroundMetric metric) {
    const double half = x.persistence() / 2.0;
    return metric == GroundMetric::linf ? half : half * std::sqrt(2.0);
}

// Hopcroft-Karp on a bipartite graph with left/right of equal size n.
class BipartiteMatcher {
public:
    explicit BipartiteMatcher(std::vector<std::vector<std::size_t>> adj)
        : adj_(std::move(adj)), n_(adj_.size()), match_left_(n_, kFree), match_right_(n_, kFree), dist_(n_) {}

    std::size_t run() {
        std::size_t size = 0;
        while (bfs()) {
            for (std::size_t u = 0; u < n_; ++u) {
                if (match_left_[u] == kFree && dfs(u)) ++size;
            }
        }
        return size;
    }

    const std::vector<std::size_t>& match_left() const { return match_left_; }

private:
    static constexpr std::size_t kFree = static_cast<std::size_t>(-1);
    static constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);

    bool bfs() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < n_; ++u) {
            dist_[u] = match_left_[u] == kFree ? 0 : kUnreached;
            if (match_left_[u] == kFree) q.push(u);
        }
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (auto v : adj_[u]) {
                const std::size_t w = match_right_[v];
                if (w == kFree) {
                    found = true;
                } else if (dist_[w] == kUnreached) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (auto v : adj_[u]) {
            const std::size_t w = match_right_[v];
            if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        dist_[u] = kUnreached;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::size_t n_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
};

// Left side: A points then one diagonal copy per B point. Right side: B
// points then one diagonal copy per A point. Returns the cost of edge (u, v)
// or infinity when the edge does not exist.
struct AugmentedCosts {
    const Diagram& a;
    const Diagram& b;
    const std::vector<std::size_t>& fa;
    const std::vector<std::size_t>& fb;

    std::size_t n() const { return fa.size(); }
    std::size_t m() const { return fb.size(); }

    double operator()(std::size_t u, std::size_t v) const {
        const bool u_real = u < n();
        const bool v_real = v < m();
        if (u_real && v_real) return linf(a.points()[fa[u]], b.points()[fb[v]]);
        if (u_real) return v - m() == u ? to_diagonal(a.points()[fa[u]], GroundMetric::linf) : kInfinity;
        if (v_real) return u - n() == v ? to_diagonal(b.points()[fb[v]], GroundMetric::linf) : kInfinity;
        return 0.0;
    }
};

double essential_cost(const Diagram& a, const Diagram& b, const Split& sa, const Split& sb, double p,
                      bool bottleneck_mode, Matching& matching) {
    double total = 0.0;
    for (std::size_t k = 0; k < sa.essential.size(); ++k) {
        const double c = std::abs(a.points()[sa.essential[k]].birth - b.points()[sb.essential[k]].birth);
        matching.pairs.push_back({sa.essential[k], sb.essential[k], c});
        total = bottleneck_mode ? std::max(total, c) : total + std::pow(c, p);
    }
    return total;
}

}  // namespace

DistanceResult bottleneck_matching(const Diagram& a, const Diagram& b) {
    const Split sa = split(a);
    const Split sb = split(b);
    DistanceResult result;
    if (sa.essential.size() != sb.essential.size()) {
        result.value = kInfinity;
        return result;
    }
    const double essential = essential_cost(a, b, sa, sb, 1.0, true, result.matching);

    const AugmentedCosts cost{a, b, sa.finite, sb.finite};
    const std::size_t size = cost.n() + cost.m();
    if (size == 0) {
        result.value = essential;
        return result;
    }
    std::vector<double> candidates{0.0};
    for (std::size_t u = 0; u < size; ++u) {
        for (std::size_t v = 0; v < size; ++v) {
            const double c = cost(u, v);
            if (c != kInfinity && c != 0.0) candidates.push_back(c);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto try_threshold = [&](double t, std::vector<std::size_t>* matched) {
        std::vector<std::vector<std::size_t>> adj(size);
        for (std::size_t u = 0; u < size; ++u) {
            for (std::size_t v = 0; v < size; ++v) {
                if (cost(u, v) <= t) adj[u].push_back(v);
            }
        }
        BipartiteMatcher matcher(std::move(adj));
        const bool perfect = matcher.run() == size;
        if (perfect && matched) *matched = matcher.match_left();
        return perfect;
    };

    // The largest candidate always admits a perfect matching (every point to
    // its own diagonal copy, diagonal copies among themselves).
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (try_threshold(candidates[mid], nullptr)) hi = mid;
        else lo = mid + 1;
    }
    std::vector<std::size_t> match;
    try_threshold(candidates[lo], &match);
    for (std::size_t u = 0; u < size; ++u) {
        const std::size_t v = match[u];
        const bool u_real = u < cost.n();
        const bool v_real = v < cost.m();
        if (!u_real && !v_real) continue;
        result.matching.pairs.push_back({u_real ? std::optional(sa.finite[u]) : std::nullopt,
                                         v_real ? std::optional(sb.finite[v]) : std::nullopt, cost(u, v)});
    }
    result.value = std::max(essential, candidates[lo]);
    return result;
}

double bottleneck(const Diagram& a, const Diagram& b) { return bottleneck_matching(a, b).value; }

std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n) {
    // Shortest augmenting path with potentials (Kuhn-Munkres), 1-based
    // internally; column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInfinity);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInfinity;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
    return assignment;
}

DistanceResult wasserstein_matching(const Diagram& a, const Diagram& b, double p, GroundMetric metric) {
    if (!(p >= 1.0)) throw ParameterError("Wasserstein order p must be >= 1");
    const Split sa = split(a);
    const Split sb = split(b);
    DistanceResult result;
    if (sa.essential.size() != sb.essential.size()) {
        result.value = kInfinity;
        return result;
    }
    double total = essential_cost(a, b, sa, sb, p, false, result.matching);

    const std::size_t n = sa.finite.size();
    const std::size_t m = sb.finite.size();
    const std::size_t size = n + m;
    if (size > 0) {
        // Rows: A points, then diagonal slots. Columns: B points, then
        // diagonal slots. Any A point may use any diagonal slot.
        auto raw = [&](std::size_t r, std::size_t c) -> double {
            if (r < n && c < m) return ground(a.points()[sa.finite[r]], b.points()[sb.finite[c]], metric);
            if (r < n) return to_diagonal(a.points()[sa.finite[r]], metric);
            if (c < m) return to_diagonal(b.points()[sb.finite[c]], metric);
            return 0.0;
        };
        std::vector<double> cost(size * size);
        for (std::size_t r = 0; r < size; ++r) {
            for (std::size_t c = 0; c < size; ++c) cost[r * size + c] = std::pow(raw(r, c), p);
        }
        const auto assignment = solve_assignment(cost, size);
        for (std::size_t r = 0; r < size; ++r) {
            const std::size_t c = assignment[r];
            if (r >= n && c >= m) continue;
            const double d = raw(r, c);
            total += std::pow(d, p);
            result.matching.pairs.push_back({r < n ? std::optional(sa.finite[r]) : std::nullopt,
                                             c < m ? std::optional(sb.finite[c]) : std::nullopt, d});
        }
    }
    result.value = std::pow(total, 1.0 / p);
    return result;
}

double wasserstein(const Diagram& a, const Diagram& b, double p, GroundMetric metric) {
    return wasserstein_matching(a, b, p, metric).value;
}

double total_persistence(const Diagram& a, double p, double max_death) {
    if (!(p >= 1.0)) throw ParameterError("total persistence order p must be >= 1");
    double total = 0.0;
    for (const auto& pt : a.points()) {
        const double death = pt.essential() ? max_death : pt.death;
        if (pt.death != kInfinity && pt.death > max_death) {
            throw ParameterError("max_death is smaller than a finite death");
        }
        if (death < pt.birth) throw ParameterError("max_death is smaller than an essential birth");
        total += std::pow(death - pt.birth, p);
    }
    return total;
}

std::string format_real(double value) {
    if (value == kInfinity) return "inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string distance_matrix_csv(const std::vector<std::string>& labels,
                                const std::vector<std::vector<double>>& values) {
    std::ostringstream out;
    out << "label";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << labels[i];
        for (std::size_t j = 0; j < labels.size(); ++j) out << ',' << format_real(values.at(i).at(j));
        out << '\n';
    }
    return out.str();
}

}  // namespace gerrytopo
