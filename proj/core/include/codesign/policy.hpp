#pragma once

#include <cstdint>
#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codesign/uav.hpp"

namespace codesign {

enum class Padding { valid, same };

std::string_view to_string(Padding p);
Padding parse_padding(std::string_view s);

struct Extent2 {
    int h = 1;
    int w = 1;
    auto operator<=>(const Extent2&) const = default;
};

struct InputShape {
    int height = 1;
    int width = 1;
    int channels = 1;
    auto operator<=>(const InputShape&) const = default;
};

/// Hyperparameters of the end-to-end policy template: a stack of identical
/// conv layers followed by dense layers. The last dense width is the action
/// dimension.
struct ModelSpec {
    InputShape input{16, 16, 3};
    int conv_layers = 5;
    int filters_per_layer = 32;
    Extent2 kernel{3, 3};
    Extent2 stride{1, 1};
    Padding padding = Padding::same;
    std::vector<int> fc_layers{64, 25};

    /// Action dimension: last dense width, or the flattened conv output when
    /// the head is empty.
    int outputs() const;

    auto operator<=>(const ModelSpec&) const = default;
};

enum class LayerKind { conv, fc };

/// Tensor geometry of one layer after the shape walk.
struct LayerGeometry {
    LayerKind kind = LayerKind::conv;
    InputShape in;
    InputShape out;
    Extent2 kernel{1, 1};
    std::uint64_t params = 0;
};

/// Output extent of one conv dimension; 0 when the window does not fit.
int conv_output_extent(int in, int kernel, int stride, Padding padding);

/// Walks the template front to back. Throws ValidationError when a spatial
/// dimension collapses below 1 or any count is non-positive.
std::vector<LayerGeometry> layer_walk(const ModelSpec& model);

void validate(const ModelSpec& model);

/// Exact trainable parameter count (weights + biases).
std::uint64_t param_count(const ModelSpec& model);

struct ModelRanges {
    std::vector<int> conv_layers;
    std::vector<int> filters;
    std::vector<std::vector<int>> fc_heads;  ///< empty: keep the template head
};

/// Cartesian product over the ranges applied to `base`, deduplicated, in
/// (conv_layers, filters, fc_head) lexicographic order.
std::vector<ModelSpec> enumerate_models(const ModelRanges& ranges, const ModelSpec& base);

/// Synthetic success-rate stand-in for trained policies.
///
///   s(p, env) = min(s_max(env), floor + (top - floor) * sigmoid(alpha * (ln p - beta(env))))
///   beta(env)  = beta0 + beta_slope * difficulty
///   s_max(env) = smax0 - smax_slope * difficulty
///
/// The curve saturates exactly once it crosses s_max, so larger models tie at
/// the environment's ceiling. Non-decreasing in p, non-increasing in
/// difficulty when beta_slope >= 0 and smax_slope >= 0.
struct SurrogateCalibration {
    double floor = 0.05;
    double top = 0.95;
    double alpha = 4.0;
    double beta0 = 12.0;
    double beta_slope = 0.0;
    double smax0 = 0.91;
    double smax_slope = 0.0;

    double beta(double difficulty) const { return beta0 + beta_slope * difficulty; }
    double s_max(double difficulty) const { return smax0 - smax_slope * difficulty; }
};

void validate(const SurrogateCalibration& calib);

double surrogate_success(double param_count, double difficulty, const SurrogateCalibration& calib);
double surrogate_success(const ModelSpec& model, const EnvironmentClass& env,
                         const SurrogateCalibration& calib);

/// Solves beta0/beta_slope so that `low_anchor` reaches the ceiling exactly at
/// `low_difficulty` and `high_anchor` at `high_difficulty`. Other fields are kept.
SurrogateCalibration anchor_surrogate(SurrogateCalibration calib, double low_anchor_params,
                                      double low_difficulty, double high_anchor_params,
                                      double high_difficulty);

enum class SuccessSource { database, surrogate };
std::string_view to_string(SuccessSource s);

struct PolicyRecord {
    ModelSpec model;
    EnvClass environment = EnvClass::low;
    double success_rate = 0.0;
    SuccessSource source = SuccessSource::database;
};

class PolicyDatabase {
public:
    /// Throws ValidationError on a duplicate key or an out-of-range rate.
    void insert(PolicyRecord record);
    std::optional<double> find(const ModelSpec& model, EnvClass env) const;
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::vector<PolicyRecord> records() const;

private:
    std::map<std::pair<ModelSpec, EnvClass>, double> records_;
};

/// Reads the comma-separated database (header required):
///   conv_layers,filters,fc_widths,env_class,success_rate
/// fc_widths is a ';'-separated list. Fields not in the file come from `base`.
PolicyDatabase ingest_database(const std::filesystem::path& path, const ModelSpec& base);
PolicyDatabase parse_database(std::string_view text, const ModelSpec& base);

/// Database first, surrogate fallback.
PolicyRecord success_of(const PolicyDatabase& db, const ModelSpec& model,
                        const EnvironmentClass& env, const SurrogateCalibration& calib);

}  // namespace codesign
