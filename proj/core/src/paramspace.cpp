#include "codesign/paramspace.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "codesign/errors.hpp"

namespace codesign {

ParamSpace::ParamSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    std::vector<Issue> issues;
    std::set<std::string> names;
    size_ = dims_.empty() ? 0 : 1;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const auto& d = dims_[i];
        const std::string path = "search.dimensions[" + std::to_string(i) + "]";
        if (d.values.empty()) issues.push_back({path, "dimension '" + d.name + "' has no values"});
        if (!names.insert(d.name).second) issues.push_back({path, "duplicate dimension '" + d.name + "'"});
        std::set<double> seen;
        for (double v : d.values) {
            if (!std::isfinite(v)) issues.push_back({path, "non-finite value"});
            if (!seen.insert(v).second) issues.push_back({path, "duplicate value in '" + d.name + "'"});
        }
        if (!d.values.empty()) {
            if (size_ > std::numeric_limits<std::uint64_t>::max() / d.values.size())
                issues.push_back({path, "space size overflows"});
            else
                size_ *= d.values.size();
        }
    }
    if (dims_.empty()) issues.push_back({"search.dimensions", "at least one dimension required"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::vector<std::size_t> ParamSpace::point(std::uint64_t flat) const {
    if (flat >= size_) throw ModelError("flat index out of range");
    std::vector<std::size_t> p(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
        const auto n = dims_[i].values.size();
        p[i] = static_cast<std::size_t>(flat % n);
        flat /= n;
    }
    return p;
}

std::uint64_t ParamSpace::flat(const std::vector<std::size_t>& p) const {
    if (p.size() != dims_.size()) throw ModelError("point rank mismatch");
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (p[i] >= dims_[i].values.size()) throw ModelError("point index out of range in '" + dims_[i].name + "'");
        f = f * dims_[i].values.size() + p[i];
    }
    return f;
}

double ParamSpace::value(const std::vector<std::size_t>& p, std::size_t dim) const {
    return dims_.at(dim).values.at(p.at(dim));
}

std::size_t ParamSpace::find(const std::string& name) const {
    for (std::size_t i = 0; i < dims_.size(); ++i)
        if (dims_[i].name == name) return i;
    return dims_.size();
}

std::vector<std::size_t> ParamSpace::active_dimensions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dims_.size(); ++i)
        if (dims_[i].values.size() > 1) out.push_back(i);
    return out;
}

std::vector<double> ParamSpace::unit(const std::vector<std::size_t>& p) const {
    std::vector<double> x;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const auto n = dims_[i].values.size();
        if (n > 1) x.push_back(static_cast<double>(p[i]) / static_cast<double>(n - 1));
    }
    return x;
}

ParamSpace ParamSpace::capped(std::uint64_t limit) const {
    if (limit < 1) throw ValidationError("cap", "limit must be >= 1");
    std::vector<Dimension> dims = dims_;
    auto total = [&] {
        std::uint64_t s = 1;
        for (const auto& d : dims) s *= d.values.size();
        return s;
    };
    while (total() > limit) {
        std::size_t widest = 0;
        for (std::size_t i = 1; i < dims.size(); ++i)
            if (dims[i].values.size() > dims[widest].values.size()) widest = i;
        auto& v = dims[widest].values;
        if (v.size() < 2) throw ValidationError("cap", "cannot reduce space below its size");
        const std::size_t keep = (v.size() + 1) / 2;
        std::vector<double> thinned;
        for (std::size_t j = 0; j < keep; ++j) {
            const double pos = keep == 1 ? 0.0 : static_cast<double>(j) * static_cast<double>(v.size() - 1) /
                                                      static_cast<double>(keep - 1);
            thinned.push_back(v[static_cast<std::size_t>(std::lround(pos))]);
        }
        v = std::move(thinned);
    }
    return ParamSpace(std::move(dims));
}

}  // namespace codesign
