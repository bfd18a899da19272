#include "snrctl/loop.hpp"

#include <cmath>
#include <random>

#include "snrctl/errors.hpp"
#include "snrctl/grid.hpp"
#include "snrctl/norms.hpp"

namespace snrctl {

ClosedLoop closed_loop(const GeneralizedPlant& plant, const RationalTransfer& c,
                       const RationalTransfer& d, const RationalTransfer& h,
                       const YoulaLoopData* youla) {
    ClosedLoop loop;
    loop.h = reduce(h);
    loop.n_z = plant.n_z;
    loop.n_v = plant.n_v;
    const RationalTransfer& gyu = plant.g_yu;

    RationalTransfer k, s, ks, kgyus, gyus, ds, cs;
    loop.z_from_v = RationalMatrix(plant.n_z, plant.n_v);
    loop.z_from_n.resize(plant.n_z);
    loop.t_from_v.resize(plant.n_v);
    if (youla != nullptr) {
        // Cancellation-free assembly through the Bezout identity:
        // S = M (N Qh + V), K S = M (M Qh - U), K Gyu S = N (M Qh - U).
        // Plant blocks are paired with M while degrees are small, so no
        // polynomial ever carries an uncancelled unstable root: monomial
        // coefficients cannot resolve roots at |z| > 1 at high degree.
        const RationalTransfer& m = youla->factors.m;
        const RationalTransfer& n = youla->factors.n;
        const RationalTransfer q = youla->q_hat.to_rational();
        const RationalTransfer mq_u = m * q - youla->factors.u;
        const RationalTransfer nq_v = n * q + youla->factors.v;
        k = mq_u.is_zero() ? constant_tf(0.0) : reduce(mq_u / nq_v);
        s = m * nq_v;
        ks = m * mq_u;
        kgyus = n * mq_u;
        gyus = n * nq_v;
        ds = c.is_zero() ? constant_tf(0.0) : ks / c;
        cs = c * s;

        std::vector<RationalTransfer> mg_zu(plant.n_z), mg_yv(plant.n_v);
        for (int i = 0; i < plant.n_z; ++i) mg_zu[i] = m * plant.g_zu[i];
        for (int j = 0; j < plant.n_v; ++j) mg_yv[j] = m * plant.g_yv[j];
        for (int i = 0; i < plant.n_z; ++i) {
            for (int j = 0; j < plant.n_v; ++j) {
                // G_zv + K Gzu Gyv S = L + A Q + B with A = M^2 Gzu Gyv
                // and B = A V / N.
                const RationalTransfer a_ij = mg_zu[i] * mg_yv[j];
                const RationalTransfer l_ij =
                    plant.g_zv(i, j) - (mg_zu[i] * plant.g_yv[j]) / n;
                loop.z_from_v(i, j) =
                    l_ij + a_ij * q + (a_ij * youla->factors.v) / n;
            }
            loop.z_from_n[i] = c.is_zero() ? constant_tf(0.0)
                                           : ((mg_zu[i] * mq_u) / c) * loop.h;
        }
        for (int j = 0; j < plant.n_v; ++j) {
            loop.t_from_v[j] = (mg_yv[j] * nq_v) * c;
        }
    } else {
        k = d * c;
        const RationalTransfer denom = constant_tf(1.0) - k * gyu;
        if (denom.num.is_zero()) throw DegenerateLoop("1 - D C G_yu is identically zero");
        s = inverse(denom);
        ks = k * s;
        kgyus = k * gyu * s;
        gyus = gyu * s;
        ds = d * s;
        cs = c * s;
        for (int i = 0; i < plant.n_z; ++i) {
            for (int j = 0; j < plant.n_v; ++j) {
                loop.z_from_v(i, j) = plant.g_zv(i, j) + ks * plant.g_zu[i] * plant.g_yv[j];
            }
            loop.z_from_n[i] = ds * loop.h * plant.g_zu[i];
        }
        for (int j = 0; j < plant.n_v; ++j) loop.t_from_v[j] = cs * plant.g_yv[j];
    }
    loop.k = k;
    loop.s = s;

    loop.t_map = RationalMatrix(3, 3);
    loop.t_map(0, 0) = kgyus;
    loop.t_map(0, 1) = gyus;
    loop.t_map(0, 2) = c.is_zero() ? constant_tf(0.0) : reduce(kgyus / c);  // D Gyu S
    loop.t_map(1, 0) = cs;
    loop.t_map(1, 1) = c * gyus;
    loop.t_map(1, 2) = kgyus;
    loop.t_map(2, 0) = ks;
    loop.t_map(2, 1) = kgyus;
    loop.t_map(2, 2) = ds;

    loop.t_from_n = kgyus * loop.h;
    return loop;
}

StabilityReport check_internal_stability(const ClosedLoop& loop) {
    StabilityReport report;
    report.stable = true;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const RationalTransfer& tf = loop.t_map(i, j);
            const bool ok = tf.is_zero() || (is_proper(tf) && is_schur_stable(tf));
            report.entry_stable[i * 3 + j] = ok;
            report.stable = report.stable && ok;
        }
    }
    return report;
}

namespace {

double h2_or_zero(const RationalTransfer& tf) {
    return tf.is_zero() ? 0.0 : h2_norm_sq(tf);
}

double quad_l2_sq(const RationalTransfer& tf, const FrequencyGrid& grid) {
    if (tf.is_zero()) return 0.0;
    return l2_norm_sq_grid(sample_on_grid(tf, grid));
}

}  // namespace

AnalyticCost analytic_cost(const ClosedLoop& loop) {
    const StabilityReport report = check_internal_stability(loop);
    if (!report.stable) throw UnstableLoop("analytic_cost requires an internally stable loop");

    AnalyticCost out;
    for (const RationalTransfer& tf : loop.z_from_v.entries) out.j += h2_or_zero(tf);
    for (const RationalTransfer& tf : loop.z_from_n) out.j += h2_or_zero(tf);
    for (const RationalTransfer& tf : loop.t_from_v) out.channel_power += h2_or_zero(tf);
    out.channel_power += h2_or_zero(loop.t_from_n);

    // Quadrature cross-check of the same sums.
    const FrequencyGrid grid = FrequencyGrid::uniform(4096);
    double jq = 0.0, pq = 0.0;
    for (const RationalTransfer& tf : loop.z_from_v.entries) jq += quad_l2_sq(tf, grid);
    for (const RationalTransfer& tf : loop.z_from_n) jq += quad_l2_sq(tf, grid);
    for (const RationalTransfer& tf : loop.t_from_v) pq += quad_l2_sq(tf, grid);
    pq += quad_l2_sq(loop.t_from_n, grid);
    out.grid_cross_check =
        std::max(std::abs(jq - out.j) / (1.0 + out.j),
                 std::abs(pq - out.channel_power) / (1.0 + out.channel_power));
    if (out.grid_cross_check > 1e-3) {
        throw std::logic_error("analytic cost: gramian and quadrature disagree by " +
                               std::to_string(out.grid_cross_check));
    }
    return out;
}

namespace {

// Direct-form difference equation y[k] = sum b_i u[k-i] - sum a_i y[k-i].
struct DirectForm {
    ColVec b;  // b[0..d], coefficient of u[k-i]
    ColVec a;  // a[1..d] stored from index 1, coefficient of y[k-i]
    ColVec u_hist, y_hist;
    int pos = 0;
    int d = 0;

    explicit DirectForm(const RationalTransfer& tf_in) {
        RationalTransfer tf = reduce(tf_in);
        d = tf.den.degree();
        const int dn = tf.num.degree();
        b = ColVec::Zero(d + 1);
        a = ColVec::Zero(d + 1);
        // den monic after reduce: z^d + a_{d-1} z^{d-1} + ... + a_0
        for (int i = 0; i <= d; ++i) {
            const int p = d - i;  // power of z
            if (p <= dn && p < static_cast<int>(tf.num.coeffs.size())) {
                b[i] = tf.num.coeffs[p];
            }
            if (i >= 1) a[i] = tf.den.coeffs[d - i];
        }
        u_hist = ColVec::Zero(d + 1);
        y_hist = ColVec::Zero(d + 1);
    }

    double step(double u) {
        u_hist[pos] = u;
        double y = 0.0;
        for (int i = 0; i <= d; ++i) {
            const int idx = (pos - i + (d + 1) * 4) % (d + 1);
            y += b[i] * u_hist[idx];
            if (i >= 1) y -= a[i] * y_hist[idx];
        }
        y_hist[pos] = y;
        pos = (pos + 1) % (d + 1);
        return y;
    }
};

double max_pole_radius(const ClosedLoop& loop) {
    double r = 0.0;
    auto scan = [&r](const RationalTransfer& tf) {
        if (!tf.is_zero()) r = std::max(r, spectral_radius(tf));
    };
    for (const auto& tf : loop.z_from_v.entries) scan(tf);
    for (const auto& tf : loop.z_from_n) scan(tf);
    for (const auto& tf : loop.t_from_v) scan(tf);
    scan(loop.t_from_n);
    return r;
}

}  // namespace

SimulationEstimate simulate(const ClosedLoop& loop, long steps, std::uint64_t seed,
                            NoiseKind noise) {
    if (steps < 10000) throw OutsideDomain("simulate needs steps >= 10^4");
    const StabilityReport report = check_internal_stability(loop);
    if (!report.stable) throw UnstableLoop("simulate requires an internally stable loop");

    const int n_z = loop.n_z, n_v = loop.n_v;
    std::vector<DirectForm> f_zv, f_zn, f_tv;
    f_zv.reserve(n_z * n_v);
    for (int i = 0; i < n_z; ++i) {
        for (int j = 0; j < n_v; ++j) f_zv.emplace_back(loop.z_from_v(i, j));
    }
    for (int i = 0; i < n_z; ++i) f_zn.emplace_back(loop.z_from_n[i]);
    for (int j = 0; j < n_v; ++j) f_tv.emplace_back(loop.t_from_v[j]);
    DirectForm f_tn(loop.t_from_n);

    const double rho = max_pole_radius(loop);
    long burn = static_cast<long>(std::ceil(10.0 / std::max(1e-9, 1.0 - rho)));
    burn = std::min(burn, steps / 4);

    std::mt19937_64 rng(seed);
    auto draw = [&rng, noise]() {
        if (noise == NoiseKind::Uniform) {
            // variance-1 uniform on [-sqrt(3), sqrt(3)]
            const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
            return (2.0 * u - 1.0) * std::sqrt(3.0);
        }
        // Box-Muller, one draw per call for reproducibility across platforms
        const double u1 = std::max(std::ldexp(static_cast<double>(rng() >> 11), -53), 1e-300);
        const double u2 = std::ldexp(static_cast<double>(rng() >> 11), -53);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };

    constexpr int kBatches = 30;
    const long kept = steps - burn;
    const long batch_len = kept / kBatches;
    std::vector<double> z_batch(kBatches, 0.0), t_batch(kBatches, 0.0);
    ColVec v(n_v), z(n_z);
    long kept_count = 0;
    for (long step = 0; step < steps; ++step) {
        for (int j = 0; j < n_v; ++j) v[j] = draw();
        const double wn = draw();
        z.setZero();
        double t = 0.0;
        for (int i = 0; i < n_z; ++i) {
            for (int j = 0; j < n_v; ++j) z[i] += f_zv[i * n_v + j].step(v[j]);
            z[i] += f_zn[i].step(wn);
        }
        for (int j = 0; j < n_v; ++j) t += f_tv[j].step(v[j]);
        t += f_tn.step(wn);
        if (step >= burn && kept_count < batch_len * kBatches) {
            const int batch = static_cast<int>(kept_count / batch_len);
            z_batch[batch] += z.squaredNorm();
            t_batch[batch] += t * t;
            ++kept_count;
        }
    }

    SimulationEstimate est;
    est.steps = steps;
    est.seed = seed;
    double zm = 0.0, tm = 0.0;
    for (int i = 0; i < kBatches; ++i) {
        z_batch[i] /= batch_len;
        t_batch[i] /= batch_len;
        zm += z_batch[i];
        tm += t_batch[i];
    }
    zm /= kBatches;
    tm /= kBatches;
    double zs = 0.0, ts = 0.0;
    for (int i = 0; i < kBatches; ++i) {
        zs += (z_batch[i] - zm) * (z_batch[i] - zm);
        ts += (t_batch[i] - tm) * (t_batch[i] - tm);
    }
    zs = std::sqrt(zs / (kBatches - 1));
    ts = std::sqrt(ts / (kBatches - 1));
    est.z_variance = zm;
    est.t_power = tm;
    est.z_halfwidth = 3.0 * zs / std::sqrt(static_cast<double>(kBatches));
    est.t_halfwidth = 3.0 * ts / std::sqrt(static_cast<double>(kBatches));
    return est;
}

}  // namespace snrctl
