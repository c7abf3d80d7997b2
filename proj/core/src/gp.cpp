#include "codesign/gp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "codesign/errors.hpp"
#include "codesign/optim.hpp"

namespace codesign {

namespace {

constexpr double kJitter[] = {0.0, 1e-10, 1e-8, 1e-6};

Eigen::MatrixXd scaled(const Eigen::MatrixXd& x, const GpHyper& h) {
    Eigen::VectorXd inv(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) inv[j] = std::exp(-h.log_lengthscales[std::size_t(j)]);
    return x * inv.asDiagonal();
}

Eigen::MatrixXd se_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double signal2) {
    const Eigen::VectorXd ra = a.rowwise().squaredNorm();
    const Eigen::VectorXd rb = b.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * a * b.transpose()).colwise() + ra;
    d2.rowwise() += rb.transpose();
    return (signal2 * (-0.5 * d2.cwiseMax(0.0)).array().exp()).matrix();
}

std::uint64_t next_factor_id() {
    static std::atomic<std::uint64_t> id{0};
    return ++id;
}

// Lower Cholesky factor of K + noise^2 I, escalating jitter if needed.
bool factor(const Eigen::MatrixXd& xs, const GpHyper& h, Eigen::MatrixXd& l, double* used_jitter = nullptr) {
    const double s2 = std::exp(2.0 * h.log_signal);
    const double n2 = std::exp(2.0 * h.log_noise);
    Eigen::MatrixXd k = se_kernel(xs, xs, s2);
    for (double jitter : kJitter) {
        Eigen::MatrixXd kk = k;
        kk.diagonal().array() += n2 + jitter * s2;
        Eigen::LLT<Eigen::MatrixXd> llt(kk);
        if (llt.info() == Eigen::Success) {
            l = llt.matrixL();
            if (used_jitter) *used_jitter = jitter;
            return true;
        }
    }
    return false;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GpHyper clamp(GpHyper h, const GpOptions& o) {
    for (auto& v : h.log_lengthscales) v = std::clamp(v, o.log_lengthscale_min, o.log_lengthscale_max);
    h.log_signal = std::clamp(h.log_signal, o.log_signal_min, o.log_signal_max);
    h.log_noise = std::clamp(h.log_noise, o.log_noise_min, o.log_noise_max);
    return h;
}

std::vector<double> pack(const GpHyper& h) {
    std::vector<double> v = h.log_lengthscales;
    v.push_back(h.log_signal);
    v.push_back(h.log_noise);
    return v;
}

GpHyper unpack(const std::vector<double>& v) {
    GpHyper h;
    h.log_lengthscales.assign(v.begin(), v.end() - 2);
    h.log_signal = v[v.size() - 2];
    h.log_noise = v.back();
    return h;
}

}  // namespace

double GpModel::log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyper& h) {
    Eigen::MatrixXd l;
    if (!factor(scaled(x, h), h, l)) return -std::numeric_limits<double>::infinity();
    const auto tri = l.triangularView<Eigen::Lower>();
    const Eigen::VectorXd z = tri.solve(y);
    const double n = static_cast<double>(y.size());
    return -0.5 * z.squaredNorm() - l.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

GpModel GpModel::condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyper& hyper) {
    if (x.rows() < 1 || x.rows() != y.size()) throw ModelError("gp: need matching, nonempty training data");
    if (hyper.log_lengthscales.size() != std::size_t(x.cols())) throw ModelError("gp: lengthscale count mismatch");
    GpModel m;
    m.x_ = x;
    m.hyper_ = hyper;
    m.y_mean_ = y.mean();
    const double sd = std::sqrt((y.array() - m.y_mean_).square().mean());
    if (!(sd > 1e-12 * std::max(1.0, std::abs(m.y_mean_)))) {
        m.degenerate_ = true;
        m.y_scale_ = 1.0;
        return m;
    }
    m.x_scaled_ = scaled(x, hyper);
    m.signal2_ = std::exp(2.0 * hyper.log_signal);
    if (!factor(m.x_scaled_, hyper, m.chol_l_, &m.jitter_))
        throw ModelError("gp: kernel matrix is not positive definite");
    m.factor_id_ = next_factor_id();
    m.restandardize(y);
    return m;
}

void GpModel::restandardize(const Eigen::VectorXd& y) {
    y_mean_ = y.mean();
    y_scale_ = std::sqrt((y.array() - y_mean_).square().mean());
    const Eigen::VectorXd ys = (y.array() - y_mean_) / y_scale_;
    z_ = chol_l_.triangularView<Eigen::Lower>().solve(ys);
    alpha_ = chol_l_.transpose().triangularView<Eigen::Upper>().solve(z_);
    const double n = static_cast<double>(ys.size());
    lml_ = -0.5 * z_.squaredNorm() - chol_l_.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

bool GpModel::extend(const Eigen::RowVectorXd& x_new, const Eigen::VectorXd& y) {
    const Eigen::Index n = x_.rows();
    if (degenerate_ || y.size() != n + 1 || x_new.size() != x_.cols()) return false;
    const double mean = y.mean();
    const double sd = std::sqrt((y.array() - mean).square().mean());
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) return false;

    Eigen::MatrixXd xn(1, x_.cols());
    xn.row(0) = x_new;
    const Eigen::MatrixXd sn = scaled(xn, hyper_);
    const Eigen::VectorXd k = se_kernel(x_scaled_, sn, signal2_).col(0);
    const Eigen::VectorXd l = chol_l_.triangularView<Eigen::Lower>().solve(k);
    const double noise2 = std::exp(2.0 * hyper_.log_noise);
    const double d2 = signal2_ + noise2 + jitter_ * signal2_ - l.squaredNorm();
    if (!(d2 > 0.0)) return false;

    x_.conservativeResize(n + 1, Eigen::NoChange);
    x_.row(n) = x_new;
    x_scaled_.conservativeResize(n + 1, Eigen::NoChange);
    x_scaled_.row(n) = sn.row(0);
    chol_l_.conservativeResize(n + 1, n + 1);
    chol_l_.col(n).setZero();
    chol_l_.row(n).head(n) = l.transpose();
    chol_l_(n, n) = std::sqrt(d2);
    restandardize(y);
    return true;
}

GpModel GpModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpOptions& o, std::uint64_t seed,
                     const GpHyper* warm) {
    if (x.rows() < 2 || x.rows() != y.size()) throw ModelError("gp: need at least 2 matching training points");
    const std::size_t d = std::size_t(x.cols());

    GpHyper start;
    start.log_lengthscales.assign(d, std::log(0.5));
    start.log_signal = 0.0;
    start.log_noise = std::log(1e-3);
    if (warm && warm->log_lengthscales.size() == d) start = *warm;
    start = clamp(start, o);

    const double mean = y.mean();
    const double sd = std::sqrt((y.array() - mean).square().mean());
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) return condition(x, y, start);
    const Eigen::VectorXd ys = (y.array() - mean) / sd;

    auto objective = [&](const std::vector<double>& v) {
        const GpHyper raw = unpack(v);
        const GpHyper h = clamp(raw, o);
        double excess = 0.0;
        const auto a = pack(raw), b = pack(h);
        for (std::size_t i = 0; i < a.size(); ++i) excess += (a[i] - b[i]) * (a[i] - b[i]);
        return -log_marginal_likelihood(x, ys, h) + 1e3 * excess;
    };

    std::mt19937_64 rng(seed);
    GpHyper best = start;
    double best_f = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(1, o.restarts); ++r) {
        GpHyper s0 = start;
        if (r > 0) {
            for (auto& v : s0.log_lengthscales)
                v = o.log_lengthscale_min + uniform01(rng) * (o.log_lengthscale_max - o.log_lengthscale_min);
            s0.log_signal = o.log_signal_min + uniform01(rng) * (o.log_signal_max - o.log_signal_min);
            s0.log_noise = o.log_noise_min + uniform01(rng) * (o.log_noise_max - o.log_noise_min);
        }
        const auto res = nelder_mead(objective, pack(s0), 0.5, o.max_evals_per_start);
        if (res.fx < best_f) {
            best_f = res.fx;
            best = clamp(unpack(res.x), o);
        }
    }
    return condition(x, y, best);
}

void GpModel::predict(const Eigen::MatrixXd& xs, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const {
    const Eigen::Index q = xs.rows();
    if (degenerate_) {
        mean = Eigen::VectorXd::Constant(q, y_mean_);
        variance = Eigen::VectorXd::Zero(q);
        return;
    }
    const Eigen::MatrixXd ks = se_kernel(x_scaled_, scaled(xs, hyper_), signal2_);  // n x q
    mean = (ks.transpose() * alpha_).array() * y_scale_ + y_mean_;
    const Eigen::MatrixXd v = chol_l_.triangularView<Eigen::Lower>().solve(ks);
    variance = ((signal2_ - v.colwise().squaredNorm().transpose().array()).cwiseMax(0.0)) * (y_scale_ * y_scale_);
}

void CandidatePosterior::rebuild(const GpModel& m) {
    scaled_ = scaled(candidates_, m.hyper_);
    const Eigen::MatrixXd ks = se_kernel(m.x_scaled_, scaled_, m.signal2_);
    v_ = m.chol_l_.triangularView<Eigen::Lower>().solve(ks);
    col_norm2_ = v_.colwise().squaredNorm().transpose();
    rows_ = v_.rows();
    factor_id_ = m.factor_id_;
}

void CandidatePosterior::predict(const GpModel& m, Eigen::VectorXd& mean, Eigen::VectorXd& variance) {
    if (m.degenerate_) {
        m.predict(candidates_, mean, variance);
        return;
    }
    const Eigen::Index n = m.x_.rows();
    if (factor_id_ != m.factor_id_ || rows_ > n) {
        rebuild(m);
    } else if (rows_ < n) {
        // New rows of L^-1 K(X, C) by forward substitution against the rows
        // appended to L since the last call.
        v_.conservativeResize(n, Eigen::NoChange);
        const Eigen::MatrixXd knew = se_kernel(m.x_scaled_.bottomRows(n - rows_), scaled_, m.signal2_);
        for (Eigen::Index i = rows_; i < n; ++i) {
            Eigen::RowVectorXd r = knew.row(i - rows_);
            if (i > 0) r.noalias() -= m.chol_l_.row(i).head(i) * v_.topRows(i);
            v_.row(i) = r / m.chol_l_(i, i);
            col_norm2_ += v_.row(i).cwiseAbs2().transpose();
        }
        rows_ = n;
    }
    mean = (v_.transpose() * m.z_).array() * m.y_scale_ + m.y_mean_;
    variance = ((m.signal2_ - col_norm2_.array()).cwiseMax(0.0)) * (m.y_scale_ * m.y_scale_);
}

GpPrediction GpModel::predict(const Eigen::VectorXd& x) const {
    Eigen::VectorXd m, v;
    predict(Eigen::MatrixXd(x.transpose()), m, v);
    return {m[0], v[0]};
}

}  // namespace codesign
