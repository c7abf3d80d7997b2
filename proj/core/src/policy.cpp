#include "codesign/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "codesign/errors.hpp"

namespace codesign {

std::string_view to_string(Padding p) {
    return p == Padding::valid ? "valid" : "same";
}

Padding parse_padding(std::string_view s) {
    if (s == "valid") return Padding::valid;
    if (s == "same") return Padding::same;
    throw ParseError("unknown padding '" + std::string(s) + "'");
}

std::string_view to_string(SuccessSource s) {
    return s == SuccessSource::database ? "database" : "surrogate";
}

int conv_output_extent(int in, int kernel, int stride, Padding padding) {
    if (in <= 0 || kernel <= 0 || stride <= 0) return 0;
    if (padding == Padding::same) {
        return (in + stride - 1) / stride;
    }
    if (in < kernel) return 0;
    return (in - kernel) / stride + 1;
}

int ModelSpec::outputs() const {
    if (!fc_layers.empty()) return fc_layers.back();
    const auto walk = layer_walk(*this);
    const auto& last = walk.back().out;
    return last.height * last.width * last.channels;
}

std::vector<LayerGeometry> layer_walk(const ModelSpec& m) {
    std::vector<Issue> issues;
    if (m.input.height < 1 || m.input.width < 1 || m.input.channels < 1)
        issues.push_back({"model.input", "all input dimensions must be >= 1"});
    if (m.conv_layers < 1) issues.push_back({"model.conv_layers", "must be >= 1"});
    if (m.filters_per_layer < 1) issues.push_back({"model.filters", "must be >= 1"});
    if (m.kernel.h < 1 || m.kernel.w < 1) issues.push_back({"model.kernel", "must be >= 1"});
    if (m.stride.h < 1 || m.stride.w < 1) issues.push_back({"model.stride", "must be >= 1"});
    for (std::size_t i = 0; i < m.fc_layers.size(); ++i) {
        if (m.fc_layers[i] < 1)
            issues.push_back({"model.fc_layers[" + std::to_string(i) + "]", "width must be >= 1"});
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    std::vector<LayerGeometry> walk;
    walk.reserve(static_cast<std::size_t>(m.conv_layers) + m.fc_layers.size());
    InputShape cur = m.input;
    for (int l = 0; l < m.conv_layers; ++l) {
        LayerGeometry g;
        g.kind = LayerKind::conv;
        g.in = cur;
        g.kernel = m.kernel;
        g.out.height = conv_output_extent(cur.height, m.kernel.h, m.stride.h, m.padding);
        g.out.width = conv_output_extent(cur.width, m.kernel.w, m.stride.w, m.padding);
        g.out.channels = m.filters_per_layer;
        if (g.out.height < 1 || g.out.width < 1) {
            throw ValidationError("model.conv_layers",
                                  "spatial size collapses below 1 at conv layer " + std::to_string(l + 1));
        }
        const std::uint64_t k = std::uint64_t(m.kernel.h) * std::uint64_t(m.kernel.w) * std::uint64_t(cur.channels);
        g.params = k * std::uint64_t(m.filters_per_layer) + std::uint64_t(m.filters_per_layer);
        walk.push_back(g);
        cur = g.out;
    }
    std::uint64_t in = std::uint64_t(cur.height) * std::uint64_t(cur.width) * std::uint64_t(cur.channels);
    for (int width : m.fc_layers) {
        LayerGeometry g;
        g.kind = LayerKind::fc;
        g.in = {1, 1, static_cast<int>(in)};
        g.out = {1, 1, width};
        g.params = in * std::uint64_t(width) + std::uint64_t(width);
        walk.push_back(g);
        in = std::uint64_t(width);
    }
    return walk;
}

void validate(const ModelSpec& model) {
    (void)layer_walk(model);
}

std::uint64_t param_count(const ModelSpec& model) {
    std::uint64_t total = 0;
    for (const auto& g : layer_walk(model)) total += g.params;
    return total;
}

std::vector<ModelSpec> enumerate_models(const ModelRanges& ranges, const ModelSpec& base) {
    if (ranges.conv_layers.empty()) throw ValidationError("ranges.conv_layers", "range is empty");
    if (ranges.filters.empty()) throw ValidationError("ranges.filters", "range is empty");

    std::vector<std::vector<int>> heads = ranges.fc_heads;
    if (heads.empty()) heads.push_back(base.fc_layers);

    std::set<ModelSpec> seen;
    std::vector<ModelSpec> out;
    std::vector<int> layers = ranges.conv_layers;
    std::vector<int> filters = ranges.filters;
    std::sort(layers.begin(), layers.end());
    std::sort(filters.begin(), filters.end());
    std::sort(heads.begin(), heads.end());
    for (int l : layers) {
        for (int f : filters) {
            for (const auto& head : heads) {
                ModelSpec m = base;
                m.conv_layers = l;
                m.filters_per_layer = f;
                m.fc_layers = head;
                validate(m);
                if (seen.insert(m).second) out.push_back(std::move(m));
            }
        }
    }
    return out;
}

void validate(const SurrogateCalibration& c) {
    std::vector<Issue> issues;
    auto finite = [&](double v, const char* name) {
        if (!std::isfinite(v)) issues.push_back({std::string("surrogate.") + name, "must be finite"});
    };
    finite(c.floor, "floor");
    finite(c.top, "top");
    finite(c.alpha, "alpha");
    finite(c.beta0, "beta0");
    finite(c.beta_slope, "beta_slope");
    finite(c.smax0, "smax0");
    finite(c.smax_slope, "smax_slope");
    if (!issues.empty()) throw ValidationError(std::move(issues));
    if (c.floor < 0.0 || c.floor >= c.top || c.top > 1.0)
        issues.push_back({"surrogate", "need 0 <= floor < top <= 1"});
    if (c.alpha <= 0.0) issues.push_back({"surrogate.alpha", "must be > 0"});
    if (c.smax0 > 0.91 + 1e-12) issues.push_back({"surrogate.smax0", "must not exceed 0.91"});
    if (c.smax_slope < 0.0) issues.push_back({"surrogate.smax_slope", "must be >= 0"});
    if (c.beta_slope < 0.0) issues.push_back({"surrogate.beta_slope", "must be >= 0"});
    if (c.s_max(1.0) <= c.floor) issues.push_back({"surrogate", "ceiling falls to the floor within difficulty [0,1]"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

namespace {

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

// ln p at which the unclipped curve meets the ceiling.
double saturation_offset(const SurrogateCalibration& c, double difficulty) {
    const double frac = (c.s_max(difficulty) - c.floor) / (c.top - c.floor);
    return logit(frac) / c.alpha;
}

}  // namespace

double surrogate_success(double params, double difficulty, const SurrogateCalibration& c) {
    if (!(params > 0.0)) return c.floor;
    const double x = c.alpha * (std::log(params) - c.beta(difficulty));
    const double s = c.floor + (c.top - c.floor) * sigmoid(x);
    return std::min(c.s_max(difficulty), s);
}

double surrogate_success(const ModelSpec& model, const EnvironmentClass& env,
                         const SurrogateCalibration& calib) {
    return surrogate_success(static_cast<double>(param_count(model)), env.difficulty, calib);
}

SurrogateCalibration anchor_surrogate(SurrogateCalibration c, double low_params, double low_d,
                                      double high_params, double high_d) {
    if (!(low_params > 0.0 && high_params > 0.0) || low_d == high_d)
        throw ValidationError("surrogate", "anchors need positive sizes and distinct difficulties");
    // beta(d) = ln p_anchor(d) - offset(d), linear in d through both anchors.
    const double b_low = std::log(low_params) - saturation_offset(c, low_d);
    const double b_high = std::log(high_params) - saturation_offset(c, high_d);
    c.beta_slope = (b_high - b_low) / (high_d - low_d);
    c.beta0 = b_low - c.beta_slope * low_d;
    return c;
}

void PolicyDatabase::insert(PolicyRecord r) {
    if (!(r.success_rate >= 0.0 && r.success_rate <= 1.0)) {
        throw ValidationError("policy_db.success_rate",
                              "success rate " + std::to_string(r.success_rate) + " outside [0,1]");
    }
    auto key = std::make_pair(r.model, r.environment);
    if (records_.contains(key)) {
        std::string head;
        for (std::size_t i = 0; i < r.model.fc_layers.size(); ++i)
            head += (i ? ";" : "") + std::to_string(r.model.fc_layers[i]);
        throw ValidationError("policy_db", "duplicate key (conv_layers=" + std::to_string(r.model.conv_layers) +
                                               ", filters=" + std::to_string(r.model.filters_per_layer) +
                                               ", fc_widths=" + head + ", env=" +
                                               std::string(to_string(r.environment)) + ")");
    }
    records_.emplace(std::move(key), r.success_rate);
}

std::optional<double> PolicyDatabase::find(const ModelSpec& model, EnvClass env) const {
    auto it = records_.find({model, env});
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

std::vector<PolicyRecord> PolicyDatabase::records() const {
    std::vector<PolicyRecord> out;
    out.reserve(records_.size());
    for (const auto& [key, rate] : records_) {
        out.push_back({key.first, key.second, rate, SuccessSource::database});
    }
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_int(const std::string& s, std::size_t line, const char* col) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("policy db line " + std::to_string(line) + ": bad integer in " + col + ": '" + s + "'");
    return v;
}

double parse_double(const std::string& s, std::size_t line, const char* col) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("policy db line " + std::to_string(line) + ": bad number in " + col + ": '" + s + "'");
    }
}

}  // namespace

PolicyDatabase parse_database(std::string_view text, const ModelSpec& base) {
    static const std::vector<std::string> kHeader{"conv_layers", "filters", "fc_widths", "env_class",
                                                  "success_rate"};
    PolicyDatabase db;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cols = split(t, ',');
        if (!header_seen) {
            if (cols != kHeader)
                throw ParseError("policy db: header must be conv_layers,filters,fc_widths,env_class,success_rate");
            header_seen = true;
            continue;
        }
        if (cols.size() != kHeader.size())
            throw ParseError("policy db line " + std::to_string(lineno) + ": expected 5 columns, got " +
                             std::to_string(cols.size()));
        ModelSpec m = base;
        m.conv_layers = parse_int(cols[0], lineno, "conv_layers");
        m.filters_per_layer = parse_int(cols[1], lineno, "filters");
        m.fc_layers.clear();
        if (!cols[2].empty()) {
            for (const auto& w : split(cols[2], ';')) m.fc_layers.push_back(parse_int(w, lineno, "fc_widths"));
        }
        EnvClass env;
        try {
            env = parse_env_class(cols[3]);
        } catch (const ParseError&) {
            throw ParseError("policy db line " + std::to_string(lineno) + ": unknown env_class '" + cols[3] + "'");
        }
        validate(m);
        db.insert({m, env, parse_double(cols[4], lineno, "success_rate"), SuccessSource::database});
    }
    if (!header_seen) throw ParseError("policy db: missing header row");
    return db;
}

PolicyDatabase ingest_database(const std::filesystem::path& path, const ModelSpec& base) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open policy database " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_database(ss.str(), base);
}

PolicyRecord success_of(const PolicyDatabase& db, const ModelSpec& model, const EnvironmentClass& env,
                        const SurrogateCalibration& calib) {
    if (auto rate = db.find(model, env.cls)) {
        return {model, env.cls, *rate, SuccessSource::database};
    }
    return {model, env.cls, surrogate_success(model, env, calib), SuccessSource::surrogate};
}

}  // namespace codesign
