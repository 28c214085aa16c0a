#pragma once

#include "gerrytopo/complex.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gerrytopo {

// Sparse GF(2) boundary matrix, one column per cell in filtration order.
// Row indices of column j are sorted, unique and all < j.
class BoundaryMatrix {
public:
    BoundaryMatrix() = default;
    BoundaryMatrix(const std::vector<std::vector<std::uint32_t>>& columns, std::vector<int> dims,
                   std::vector<int> levels);

    static BoundaryMatrix from_complex(const FilteredComplex& complex);

    std::size_t size() const { return dims_.size(); }
    std::span<const std::uint32_t> column(std::size_t j) const {
        return {rows_.data() + offsets_[j], rows_.data() + offsets_[j + 1]};
    }
    int dim(std::size_t j) const { return dims_[j]; }
    int level(std::size_t j) const { return levels_[j]; }

private:
    void validate() const;

    std::vector<std::uint64_t> offsets_{0};
    std::vector<std::uint32_t> rows_;
    std::vector<int> dims_;
    std::vector<int> levels_;
};

struct ReductionOptions {
    // Zero out columns known to be paired as births before reducing them.
    bool clearing = true;
};

class Reduction {
public:
    static constexpr std::int64_t kZero = -1;

    // Pivot row of reduced column j, or kZero.
    std::int64_t low(std::size_t j) const { return low_[j]; }
    std::span<const std::uint32_t> reduced_column(std::size_t j) const;
    // (birth column, death column) with low(death) == birth.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
    // Zero columns that are never a pivot: classes that never die.
    const std::vector<std::uint32_t>& essential() const { return essential_; }

private:
    friend Reduction reduce(const BoundaryMatrix&, const ReductionOptions&);

    std::vector<std::int64_t> low_;
    std::vector<std::uint64_t> start_;
    std::vector<std::uint32_t> length_;
    std::vector<std::uint32_t> pool_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
    std::vector<std::uint32_t> essential_;
};

// Standard column reduction over GF(2).
Reduction reduce(const BoundaryMatrix& matrix, const ReductionOptions& options = {});

struct PersistencePair {
    int dim = 0;
    int birth = 0;
    std::optional<int> death;  // nullopt = never dies

    bool essential() const { return !death.has_value(); }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
    friend auto operator<=>(const PersistencePair& a, const PersistencePair& b) {
        const int da = a.death.value_or(INT32_MAX);
        const int db = b.death.value_or(INT32_MAX);
        if (auto c = a.dim <=> b.dim; c != 0) return c;
        if (auto c = a.birth <=> b.birth; c != 0) return c;
        return da <=> db;
    }
};

struct Barcode {
    std::vector<PersistencePair> pairs;  // sorted by (dim, birth, death)
    int num_levels = 0;

    std::vector<PersistencePair> bars(int dim) const;
    // Bars of dimension `dim` alive at `level` (birth <= level < death).
    std::size_t alive(int dim, int level) const;
};

// Level-indexed barcode; zero-length pairs are dropped.
Barcode barcode(const FilteredComplex& complex, const ReductionOptions& options = {});

struct Betti {
    std::size_t b0 = 0;
    std::size_t b1 = 0;
    std::size_t b2 = 0;

    std::size_t operator[](int k) const { return k == 0 ? b0 : k == 1 ? b1 : b2; }
    friend bool operator==(const Betti&, const Betti&) = default;
};

// Betti numbers of the subcomplex of cells with level <= `level`, by dense
// Gaussian elimination of each boundary map. Independent of reduce().
Betti betti_oracle(const FilteredComplex& complex, int level);

// betti_oracle at levels 1..L.
std::vector<Betti> betti_profile(const FilteredComplex& complex);

enum class BarcodeUnits { threshold, level };

// {"num_levels": L, "pairs": [{"dim": k, "birth": b, "death": d | "inf"}, ...]}
// Threshold units map level i to tau_i and require a schedule.
std::string barcode_to_json(const Barcode& barcode, BarcodeUnits units, const LevelSchedule* schedule);

}  // namespace gerrytopo
