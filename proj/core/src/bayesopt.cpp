#include "codesign/bayesopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "codesign/errors.hpp"

namespace codesign {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) { return splitmix(seed ^ splitmix(tag)); }

// Unbiased draw in [0, n) that depends only on the engine's output sequence.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    while (true) {
        const std::uint64_t r = rng();
        if (r < limit) return r % n;
    }
}

}  // namespace

std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t count, std::uint64_t seed) {
    if (count > n) throw ModelError("cannot draw more distinct samples than candidates");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> out;
    out.reserve(count);
    std::unordered_set<std::uint64_t> seen;
    while (out.size() < count) {
        const auto i = uniform_index(rng, n);
        if (seen.insert(i).second) out.push_back(i);
    }
    return out;
}

MoboResult random_search(std::uint64_t candidates, const ObjectiveFn& objective, std::uint64_t budget,
                         std::uint64_t seed) {
    if (candidates == 0) throw ModelError("empty search space");
    MoboResult r;
    r.order = sample_distinct(candidates, std::min(budget, candidates), seed);
    for (auto i : r.order) r.values.push_back(objective(i));
    return r;
}

MoboResult run_mobo(std::uint64_t candidates, const FeatureFn& features, const ObjectiveFn& objective,
                    const MoboOptions& o) {
    if (candidates == 0) throw ModelError("empty search space");
    const std::uint64_t budget = std::min(o.budget, candidates);
    const std::uint64_t init = std::min(o.init_samples, budget);
    MoboResult r = random_search(candidates, objective, init, o.seed);
    if (r.order.size() >= budget) return r;

    const std::size_t m = r.values.front().size();
    const double gamma = o.gamma.value_or(default_gain(m));
    const std::size_t d = features(0).size();
    const Objectives ref(m, 1.1);

    // Feature rows are cached when every candidate is scored each round.
    const bool cache = candidates <= o.subsample_threshold;
    Eigen::MatrixXd all;
    if (cache) {
        all.resize(static_cast<Eigen::Index>(candidates), static_cast<Eigen::Index>(d));
        for (std::uint64_t i = 0; i < candidates; ++i) {
            const auto f = features(i);
            for (std::size_t j = 0; j < d; ++j) all(Eigen::Index(i), Eigen::Index(j)) = f[j];
        }
    }
    auto row = [&](std::uint64_t i, Eigen::MatrixXd& x, Eigen::Index at) {
        if (cache) {
            x.row(at) = all.row(Eigen::Index(i));
        } else {
            const auto f = features(i);
            for (std::size_t j = 0; j < d; ++j) x(at, Eigen::Index(j)) = f[j];
        }
    };

    std::unordered_set<std::uint64_t> done(r.order.begin(), r.order.end());
    std::vector<std::optional<GpModel>> gps(m);
    std::vector<CandidatePosterior> posteriors;
    if (cache) posteriors.assign(m, CandidatePosterior(all));
    std::size_t fitted_at = 0;

    for (std::uint64_t iter = 0; r.order.size() < budget; ++iter) {
        const std::size_t n = r.order.size();
        const Bounds bounds = Bounds::of(r.values);
        std::vector<Objectives> normalized;
        normalized.reserve(n);
        for (const auto& v : r.values) normalized.push_back(bounds.normalize(v));
        std::vector<Objectives> front;
        for (std::size_t i : pareto_filter(normalized)) front.push_back(normalized[i]);

        Eigen::MatrixXd x;
        auto training = [&]() -> const Eigen::MatrixXd& {
            if (x.rows() != Eigen::Index(n)) {
                x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
                for (std::size_t i = 0; i < n; ++i) row(r.order[i], x, Eigen::Index(i));
            }
            return x;
        };

        // Hyperparameters are refit on a geometric schedule; in between, the
        // new observation is folded into the existing factor.
        const bool refit = fitted_at == 0 || static_cast<double>(n) >= o.refit_growth * static_cast<double>(fitted_at);
        for (std::size_t j = 0; j < m; ++j) {
            Eigen::VectorXd y(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) y[Eigen::Index(i)] = r.values[i][j];
            if (refit) {
                const GpHyper* warm = gps[j] ? &gps[j]->hyper() : nullptr;
                gps[j] = GpModel::fit(training(), y, o.gp, mix(o.seed, iter * m + j), warm);
            } else {
                Eigen::MatrixXd last(1, static_cast<Eigen::Index>(d));
                row(r.order.back(), last, 0);
                if (!gps[j]->extend(last.row(0), y)) gps[j] = GpModel::condition(training(), y, gps[j]->hyper());
            }
        }
        if (refit) {
            fitted_at = n;
            ++r.hyper_fits;
        }

        std::vector<std::uint64_t> pool;
        std::vector<Eigen::VectorXd> mean(m), var(m);
        if (cache) {
            pool.reserve(candidates - n);
            for (std::uint64_t i = 0; i < candidates; ++i)
                if (!done.contains(i)) pool.push_back(i);
            for (std::size_t j = 0; j < m; ++j) posteriors[j].predict(*gps[j], mean[j], var[j]);
        } else {
            std::mt19937_64 rng(mix(o.seed, 0x5eed0000ULL + iter));
            std::unordered_set<std::uint64_t> picked;
            const std::uint64_t want = std::min(o.subsample_threshold, candidates - n);
            while (pool.size() < want) {
                const auto i = uniform_index(rng, candidates);
                if (!done.contains(i) && picked.insert(i).second) pool.push_back(i);
            }
            std::sort(pool.begin(), pool.end());
            Eigen::MatrixXd xc(static_cast<Eigen::Index>(pool.size()), static_cast<Eigen::Index>(d));
            for (std::size_t i = 0; i < pool.size(); ++i) row(pool[i], xc, Eigen::Index(i));
            for (std::size_t j = 0; j < m; ++j) gps[j]->predict(xc, mean[j], var[j]);
        }

        std::uint64_t best = pool.front();
        double best_score = -std::numeric_limits<double>::infinity();
        Objectives yhat(m);
        for (std::size_t c = 0; c < pool.size(); ++c) {
            const auto at = Eigen::Index(cache ? pool[c] : c);
            for (std::size_t j = 0; j < m; ++j) {
                const double range = bounds.hi[j] - bounds.lo[j];
                const double lcb = mean[j][at] - gamma * std::sqrt(var[j][at]);
                yhat[j] = range > 0.0 ? (lcb - bounds.lo[j]) / range : lcb - bounds.lo[j];
            }
            const double s = sms_ego_score(yhat, front, ref, o.epsilon);
            if (s > best_score) {
                best_score = s;
                best = pool[c];
            }
        }
        done.insert(best);
        r.order.push_back(best);
        r.values.push_back(objective(best));
    }
    return r;
}

namespace {

MoboOptions options_for(const CoDesignProblem& p) {
    MoboOptions o;
    o.budget = p.search.budget;
    o.init_samples = p.search.effective_init();
    o.seed = p.search.seed;
    o.gamma = p.search.gamma;
    o.epsilon = p.search.epsilon;
    o.refit_growth = p.search.refit_growth;
    o.subsample_threshold = p.search.subsample_threshold;
    o.gp = p.search.gp;
    return o;
}

ExploreResult finish(const Evaluator& ev, const MoboResult& r, std::uint64_t seed) {
    ExploreResult out;
    out.hyper_fits = r.hyper_fits;
    std::vector<Objectives> mins;
    for (std::size_t i = 0; i < r.order.size(); ++i) {
        DesignPoint p = ev.evaluate(r.order[i]);
        p.eval_index = i;
        p.seed = seed;
        mins.push_back(p.objectives.minimize());
        out.points.push_back(std::move(p));
    }
    out.front = pareto_filter(mins);
    std::vector<Objectives> transformed;
    for (const auto& p : out.points) transformed.push_back(search_objectives(p.objectives));
    if (!transformed.empty()) out.hv_trace = hypervolume_trace(transformed, Bounds::of(transformed));
    return out;
}

}  // namespace

ExploreResult run_bayesopt(const CoDesignProblem& problem) {
    validate(problem);
    Evaluator ev(problem);
    const auto& space = problem.search.space;
    auto features = [&](std::uint64_t i) { return space.unit(space.point(i)); };
    auto objective = [&](std::uint64_t i) { return search_objectives(ev.evaluate(i).objectives); };
    return finish(ev, run_mobo(space.size(), features, objective, options_for(problem)), problem.search.seed);
}

ExploreResult run_random(const CoDesignProblem& problem) {
    validate(problem);
    Evaluator ev(problem);
    const auto& space = problem.search.space;
    auto objective = [&](std::uint64_t i) { return search_objectives(ev.evaluate(i).objectives); };
    return finish(ev, random_search(space.size(), objective, problem.search.budget, problem.search.seed),
                  problem.search.seed);
}

ExploreResult run_sweep(const CoDesignProblem& problem) {
    validate(problem);
    const auto& space = problem.search.space;
    if (space.size() > problem.search.sweep_cap)
        throw ModelError("space of " + std::to_string(space.size()) + " points exceeds the sweep cap of " +
                         std::to_string(problem.search.sweep_cap));
    Evaluator ev(problem);
    MoboResult r;
    for (std::uint64_t i = 0; i < space.size(); ++i) r.order.push_back(i);
    return finish(ev, r, problem.search.seed);
}

}  // namespace codesign
