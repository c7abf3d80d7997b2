#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace codesign {

/// One named discrete dimension. Categorical values (dataflow) are stored as
/// their ordinal.
struct Dimension {
    std::string name;
    std::vector<double> values;
    bool operator==(const Dimension&) const = default;
};

/// Finite Cartesian product of dimensions. A point is an index tuple; flat
/// indices enumerate tuples in lexicographic order (first dimension most
/// significant), so ordering by flat index is ordering by tuple.
class ParamSpace {
public:
    ParamSpace() = default;
    explicit ParamSpace(std::vector<Dimension> dims);

    const std::vector<Dimension>& dimensions() const { return dims_; }
    std::size_t rank() const { return dims_.size(); }
    std::uint64_t size() const { return size_; }

    std::vector<std::size_t> point(std::uint64_t flat) const;
    std::uint64_t flat(const std::vector<std::size_t>& point) const;
    double value(const std::vector<std::size_t>& point, std::size_t dim) const;
    /// Index of the dimension called `name`, or rank() when absent.
    std::size_t find(const std::string& name) const;

    /// Dimensions with more than one value.
    std::vector<std::size_t> active_dimensions() const;
    /// Index position scaled to [0,1] per active dimension.
    std::vector<double> unit(const std::vector<std::size_t>& point) const;

    /// Repeatedly halves the widest dimension (first on ties), keeping both
    /// endpoints, until size() <= limit.
    ParamSpace capped(std::uint64_t limit) const;

    bool operator==(const ParamSpace& o) const { return dims_ == o.dims_; }

private:
    std::vector<Dimension> dims_;
    std::uint64_t size_ = 0;
};

}  // namespace codesign
