#include "gerrytopo/persistence.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <bit>

#include <json.hpp>

namespace gerrytopo {

BoundaryMatrix::BoundaryMatrix(const std::vector<std::vector<std::uint32_t>>& columns, std::vector<int> dims,
                               std::vector<int> levels)
    : dims_(std::move(dims)), levels_(std::move(levels)) {
    if (dims_.size() != columns.size() || levels_.size() != columns.size()) {
        throw StructureError("boundary matrix: per-column arrays differ in length");
    }
    for (const auto& col : columns) {
        const auto begin = rows_.size();
        rows_.insert(rows_.end(), col.begin(), col.end());
        std::sort(rows_.begin() + static_cast<std::ptrdiff_t>(begin), rows_.end());
        offsets_.push_back(rows_.size());
    }
    validate();
}

BoundaryMatrix BoundaryMatrix::from_complex(const FilteredComplex& complex) {
    BoundaryMatrix m;
    const std::size_t n = complex.size();
    m.dims_.resize(n);
    m.levels_.resize(n);
    m.offsets_.reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        m.dims_[j] = complex.dim(j);
        m.levels_[j] = complex.level(j);
        const auto bd = complex.boundary(j);
        m.rows_.insert(m.rows_.end(), bd.begin(), bd.end());
        m.offsets_.push_back(m.rows_.size());
    }
    m.validate();
    return m;
}

void BoundaryMatrix::validate() const {
    for (std::size_t j = 0; j < size(); ++j) {
        const auto col = column(j);
        for (std::size_t k = 0; k < col.size(); ++k) {
            if (col[k] >= j) {
                throw StructureError("column " + std::to_string(j) + " has row " + std::to_string(col[k]) +
                                     " >= its own index");
            }
            if (k > 0 && col[k - 1] == col[k]) {
                throw StructureError("column " + std::to_string(j) + " repeats row " + std::to_string(col[k]));
            }
        }
    }
}

std::span<const std::uint32_t> Reduction::reduced_column(std::size_t j) const {
    if (low_[j] == kZero) return {};
    return {pool_.data() + start_[j], length_[j]};
}

namespace {

// out = a xor b for sorted index lists.
void symmetric_difference(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                          std::vector<std::uint32_t>& out) {
    out.clear();
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
}

}  // namespace

Reduction reduce(const BoundaryMatrix& matrix, const ReductionOptions& options) {
    const std::size_t n = matrix.size();
    Reduction r;
    r.low_.assign(n, Reduction::kZero);
    r.start_.assign(n, 0);
    r.length_.assign(n, 0);
    constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> pivot_owner(n, kNone);
    std::vector<std::uint8_t> cleared(n, 0);

    std::vector<std::uint32_t> work;
    std::vector<std::uint32_t> scratch;
    auto reduce_column = [&](std::size_t j) {
        const auto col = matrix.column(j);
        work.assign(col.begin(), col.end());
        while (!work.empty()) {
            const std::uint32_t pivot = work.back();
            const std::uint32_t owner = pivot_owner[pivot];
            if (owner == kNone) break;
            symmetric_difference(work, r.reduced_column(owner), scratch);
            work.swap(scratch);
        }
        if (work.empty()) return;
        const std::uint32_t pivot = work.back();
        r.low_[j] = pivot;
        r.start_[j] = r.pool_.size();
        r.length_[j] = static_cast<std::uint32_t>(work.size());
        r.pool_.insert(r.pool_.end(), work.begin(), work.end());
        pivot_owner[pivot] = static_cast<std::uint32_t>(j);
        if (options.clearing) cleared[pivot] = 1;
    };

    if (options.clearing) {
        int max_dim = 0;
        for (std::size_t j = 0; j < n; ++j) max_dim = std::max(max_dim, matrix.dim(j));
        for (int d = max_dim; d >= 1; --d) {
            for (std::size_t j = 0; j < n; ++j) {
                if (matrix.dim(j) == d && !cleared[j]) reduce_column(j);
            }
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) reduce_column(j);
    }

    for (std::size_t j = 0; j < n; ++j) {
        if (r.low_[j] != Reduction::kZero) {
            r.pairs_.emplace_back(static_cast<std::uint32_t>(r.low_[j]), static_cast<std::uint32_t>(j));
        } else if (pivot_owner[j] == kNone) {
            r.essential_.push_back(static_cast<std::uint32_t>(j));
        }
    }
    return r;
}

std::vector<PersistencePair> Barcode::bars(int dim) const {
    std::vector<PersistencePair> out;
    for (const auto& p : pairs) {
        if (p.dim == dim) out.push_back(p);
    }
    return out;
}

std::size_t Barcode::alive(int dim, int level) const {
    std::size_t count = 0;
    for (const auto& p : pairs) {
        if (p.dim == dim && p.birth <= level && (!p.death || level < *p.death)) ++count;
    }
    return count;
}

Barcode barcode(const FilteredComplex& complex, const ReductionOptions& options) {
    const BoundaryMatrix matrix = BoundaryMatrix::from_complex(complex);
    const Reduction red = reduce(matrix, options);
    Barcode out;
    out.num_levels = complex.num_levels();
    for (const auto& [birth, death] : red.pairs()) {
        const int b = complex.level(birth);
        const int d = complex.level(death);
        if (b == d) continue;
        out.pairs.push_back({complex.dim(birth), b, d});
    }
    for (auto j : red.essential()) out.pairs.push_back({complex.dim(j), complex.level(j), std::nullopt});
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

namespace {

// Rank over GF(2) of a set of columns given as bitsets.
std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> columns) {
    std::size_t rank = 0;
    if (columns.empty()) return 0;
    const std::size_t words = columns.front().size();
    // basis[bit] holds a vector whose highest set bit is `bit`.
    std::vector<std::vector<std::uint64_t>> basis(words * 64);
    auto highest = [&](const std::vector<std::uint64_t>& v) -> std::int64_t {
        for (std::size_t w = words; w-- > 0;) {
            if (v[w]) return static_cast<std::int64_t>(w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(v[w])));
        }
        return -1;
    };
    for (auto& col : columns) {
        for (auto top = highest(col); top >= 0; top = highest(col)) {
            auto& b = basis[static_cast<std::size_t>(top)];
            if (b.empty()) {
                b = col;
                ++rank;
                break;
            }
            for (std::size_t w = 0; w < words; ++w) col[w] ^= b[w];
        }
    }
    return rank;
}

}  // namespace

Betti betti_oracle(const FilteredComplex& complex, int level) {
    // Dense row index of each active cell within its dimension.
    std::vector<std::int64_t> local(complex.size(), -1);
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < complex.size(); ++i) {
        if (complex.level(i) <= level) local[i] = static_cast<std::int64_t>(counts[complex.dim(i)]++);
    }
    auto boundary_rank = [&](int d) -> std::size_t {
        if (d < 1 || d > 2 || counts[d] == 0 || counts[d - 1] == 0) return 0;
        const std::size_t words = (counts[d - 1] + 63) / 64;
        std::vector<std::vector<std::uint64_t>> cols;
        cols.reserve(counts[d]);
        for (std::size_t i = 0; i < complex.size(); ++i) {
            if (local[i] < 0 || complex.dim(i) != d) continue;
            std::vector<std::uint64_t> bits(words, 0);
            for (auto f : complex.boundary(i)) {
                const auto row = static_cast<std::size_t>(local[f]);
                bits[row / 64] ^= std::uint64_t{1} << (row % 64);
            }
            cols.push_back(std::move(bits));
        }
        return gf2_rank(std::move(cols));
    };
    const std::size_t r1 = boundary_rank(1);
    const std::size_t r2 = boundary_rank(2);
    return Betti{counts[0] - r1, counts[1] - r1 - r2, counts[2] - r2};
}

std::vector<Betti> betti_profile(const FilteredComplex& complex) {
    std::vector<Betti> out;
    for (int i = 1; i <= complex.num_levels(); ++i) out.push_back(betti_oracle(complex, i));
    return out;
}

std::string barcode_to_json(const Barcode& barcode, BarcodeUnits units, const LevelSchedule* schedule) {
    using nlohmann::json;
    if (units == BarcodeUnits::threshold && schedule == nullptr) {
        throw ParameterError("threshold units need a level schedule");
    }
    auto value = [&](int level) -> json {
        if (units == BarcodeUnits::level) return level;
        return schedule->threshold(level);
    };
    json pairs = json::array();
    for (const auto& p : barcode.pairs) {
        pairs.push_back({{"dim", p.dim},
                         {"birth", value(p.birth)},
                         {"death", p.death ? value(*p.death) : json("inf")}});
    }
    json doc = {{"num_levels", barcode.num_levels},
                {"units", units == BarcodeUnits::level ? "level" : "threshold"},
                {"pairs", std::move(pairs)}};
    return doc.dump(2) + "\n";
}

}  // namespace gerrytopo
