#include "kinscape/critana.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "kinscape/error.hpp"
#include "kinscape/parallel.hpp"

namespace kinscape {

namespace {

const double kL1Max = 3.0 / 50.0 * (9.0 + std::sqrt(6.0));

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

// Uniform in [0, 1) with 53 random bits; identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool is_periodic(const Landscape& land, int i) { return land.kinds()[i] == CoordKind::Periodic; }

// Positions of the free coordinates inside the stationary list.
std::vector<int> free_positions(const Landscape& land) {
    std::vector<int> pos;
    const auto& st = land.stationary();
    for (int f : land.free()) pos.push_back(static_cast<int>(std::find(st.begin(), st.end(), f) - st.begin()));
    return pos;
}

// A converged start must also have stopped moving.
constexpr double kStepTol = 1e-7;

struct LmResult {
    Eigen::VectorXd x;
    double grad_norm = std::numeric_limits<double>::infinity();
    double last_step = std::numeric_limits<double>::infinity();
};

// Undamped Newton on the stationarity residual, solved through a rank-revealing
// decomposition of J itself (J^T J would square its condition number and
// stall inside thin valleys).
LmResult newton_polish(const Landscape& land, Eigen::VectorXd x, Landscape::Derivs d, const std::vector<int>& fpos) {
    const Eigen::Index nf = static_cast<Eigen::Index>(fpos.size());
    double cost = d.grad.squaredNorm();
    double last_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100 && cost > 0.0; ++it) {
        Eigen::MatrixXd J(d.grad.size(), nf);
        for (Eigen::Index k = 0; k < nf; ++k) J.col(k) = d.hess.col(fpos[static_cast<std::size_t>(k)]);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-14);
        Eigen::VectorXd step = cod.solve(-d.grad);
        if (!step.allFinite()) break;
        bool accepted = false;
        for (int half = 0; half < 12 && !accepted; ++half, step *= 0.5) {
            Eigen::VectorXd xn = x;
            for (Eigen::Index k = 0; k < nf; ++k) xn(land.free()[static_cast<std::size_t>(k)]) += step(k);
            Landscape::Derivs dn = land.derivatives(xn);
            const double cn = dn.grad.squaredNorm();
            if (cn < cost) {
                x = xn;
                d = std::move(dn);
                cost = cn;
                last_step = step.norm();
                accepted = true;
            }
        }
        if (!accepted) {
            // the full step no longer improves anything: at the rounding floor
            if (step.norm() * 4096.0 < 1e-12) last_step = std::min(last_step, step.norm() * 4096.0);
            break;
        }
        if (last_step < 1e-15) break;
    }
    if (cost == 0.0) last_step = 0.0;
    return {x, std::sqrt(cost), last_step};
}

// Levenberg-Marquardt on the stationarity residual: the gradient over the
// stationary coordinates, with the free coordinates as unknowns.
LmResult minimize_gradient(const Landscape& land, Eigen::VectorXd x, const SearchConfig& cfg,
                           const std::vector<int>& fpos) {
    const Eigen::Index nf = static_cast<Eigen::Index>(fpos.size());
    Landscape::Derivs d = land.derivatives(x);
    double cost = d.grad.squaredNorm();
    double lambda = 1e-3;
    for (int it = 0; it < cfg.max_iterations && cost > 0.0; ++it) {
        Eigen::MatrixXd J(d.grad.size(), nf);
        for (Eigen::Index k = 0; k < nf; ++k) J.col(k) = d.hess.col(fpos[static_cast<std::size_t>(k)]);
        const Eigen::MatrixXd A = J.transpose() * J;
        const Eigen::VectorXd b = -J.transpose() * d.grad;
        const double scale = std::max(A.diagonal().maxCoeff(), 1e-300);

        bool accepted = false;
        Eigen::VectorXd step;
        for (int tries = 0; tries < 30 && !accepted; ++tries) {
            Eigen::MatrixXd M = A;
            M.diagonal().array() += lambda * (A.diagonal().array() + 1e-9 * scale);
            step = M.ldlt().solve(b);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            Eigen::VectorXd xn = x;
            for (Eigen::Index k = 0; k < nf; ++k) xn(land.free()[static_cast<std::size_t>(k)]) += step(k);
            Landscape::Derivs dn = land.derivatives(xn);
            const double cn = dn.grad.squaredNorm();
            if (cn < cost) {
                x = xn;
                d = std::move(dn);
                cost = cn;
                lambda = std::max(lambda * 0.1, 1e-30);
                accepted = true;
            } else {
                lambda *= 8.0;
            }
        }
        if (!accepted || step.norm() < 1e-15) break;
    }
    return newton_polish(land, std::move(x), std::move(d), fpos);
}

// Wrap periodic coordinates; fold negative polar angles through their partners.
// Returns false when the point cannot be brought into the chart domain.
bool normalize_point(const Landscape& land, Eigen::VectorXd& x) {
    const auto& free = land.free();
    auto is_free = [&](int i) { return std::find(free.begin(), free.end(), i) != free.end(); };
    for (int i : free) {
        if (is_periodic(land, i)) continue;
        double b = wrap_angle(x(i));
        if (b < 0.0) {
            for (const FoldPartner& p : land.fold_partners(i))
                if (!is_free(p.index)) return false;
            b = -b;
            for (const FoldPartner& p : land.fold_partners(i)) x(p.index) += p.shift;
        }
        x(i) = b;
    }
    for (int i : free)
        if (is_periodic(land, i)) x(i) = wrap_angle(x(i));
    return true;
}

// Coordinate difference with periodic coordinates wrapped.
Eigen::VectorXd free_delta(const Landscape& land, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const auto& free = land.free();
    Eigen::VectorXd d(static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        const int i = free[k];
        const double v = a(i) - b(i);
        d(static_cast<Eigen::Index>(k)) = is_periodic(land, i) ? wrap_angle(v) : v;
    }
    return d;
}

struct Flat {
    Eigen::MatrixXd projector;  // over free coordinates; zero for isolated points
    std::string description;
};

std::string describe_family(const Landscape& land, const Eigen::MatrixXd& P) {
    const auto& free = land.free();
    const Eigen::Index n = P.rows();
    constexpr double tol = 1e-6;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<std::string> parts;
    for (Eigen::Index i = 0; i < n; ++i)
        if (P(i, i) > 1.0 - tol) {
            parts.push_back(land.names()[free[static_cast<std::size_t>(i)]] + "=*");
            used[static_cast<std::size_t>(i)] = true;
        }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) continue;
            if (std::abs(P(i, i) - 0.5) < tol && std::abs(P(j, j) - 0.5) < tol && std::abs(std::abs(P(i, j)) - 0.5) < tol) {
                const std::string& a = land.names()[free[static_cast<std::size_t>(i)]];
                const std::string& b = land.names()[free[static_cast<std::size_t>(j)]];
                parts.push_back(P(i, j) < 0.0 ? a + "+" + b + "=const" : a + "-" + b + "=const");
                used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
            }
        }
    std::vector<std::string> rest;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!used[static_cast<std::size_t>(i)] && P(i, i) > tol) rest.push_back(land.names()[free[static_cast<std::size_t>(i)]]);
    if (!rest.empty()) {
        std::string s = "flat(";
        for (std::size_t k = 0; k < rest.size(); ++k) s += (k ? "," : "") + rest[k];
        s += ")";
        parts.push_back(s);
    }
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? ";" : "") + parts[k];
    return out;
}

// Null directions of the free-coordinate Hessian along which f stays constant.
Flat flat_directions(const Landscape& land, const Eigen::VectorXd& x, const Eigen::MatrixXd& hess_stat,
                     const std::vector<int>& fpos, double zero_tol) {
    const Eigen::Index nf = static_cast<Eigen::Index>(fpos.size());
    Flat flat;
    flat.projector = Eigen::MatrixXd::Zero(nf, nf);
    if (nf == 0) return flat;
    Eigen::MatrixXd Hf(nf, nf);
    for (Eigen::Index i = 0; i < nf; ++i)
        for (Eigen::Index k = 0; k < nf; ++k) Hf(i, k) = hess_stat(fpos[static_cast<std::size_t>(i)], fpos[static_cast<std::size_t>(k)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hf);
    const double f0 = land.value(x);
    std::vector<Eigen::VectorXd> cols;
    for (Eigen::Index c = 0; c < nf; ++c) {
        if (std::abs(es.eigenvalues()(c)) > zero_tol) continue;
        const Eigen::VectorXd v = es.eigenvectors().col(c);
        bool is_flat = true;
        for (double t : {0.05, -0.05, 0.3, -0.3}) {
            Eigen::VectorXd y = x;
            for (Eigen::Index k = 0; k < nf; ++k) y(land.free()[static_cast<std::size_t>(k)]) += t * v(k);
            if (std::abs(land.value(y) - f0) > 1e-10) is_flat = false;
        }
        if (is_flat) cols.push_back(v);
    }
    for (const auto& v : cols) flat.projector += v * v.transpose();
    if (!cols.empty()) flat.description = describe_family(land, flat.projector);
    return flat;
}

// Distance between two points modulo the flat directions of the first. Linked
// periodic coordinates are also tried one period over.
double family_distance(const Landscape& land, const Eigen::VectorXd& rep, const Eigen::MatrixXd& P,
                       const Eigen::VectorXd& other) {
    const Eigen::VectorXd d0 = free_delta(land, other, rep);
    const Eigen::Index n = d0.size();
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n) - P;
    std::vector<Eigen::Index> linked;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!is_periodic(land, land.free()[static_cast<std::size_t>(i)])) continue;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i && std::abs(P(i, j)) > 1e-6) {
                linked.push_back(i);
                break;
            }
    }
    double best = (Q * d0).norm();
    const int combos = static_cast<int>(std::pow(3, linked.size()));
    for (int c = 1; c < combos; ++c) {
        Eigen::VectorXd d = d0;
        int code = c;
        for (Eigen::Index i : linked) {
            d(i) += 2.0 * kPi * (code % 3 - 1);
            code /= 3;
        }
        best = std::min(best, (Q * d).norm());
    }
    return best;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

struct Analysis {
    CriticalPointRecord rec;
    Eigen::MatrixXd flat_projector;
};

Analysis analyze(const Landscape& land, const Eigen::VectorXd& full, const SearchConfig& cfg,
                 const ClassifyContext& ctx) {
    const Landscape::Derivs d = land.derivatives(full);
    Analysis a;
    CriticalPointRecord& r = a.rec;
    r.chart = land.chart().descriptor();
    r.names = land.names();
    r.coords = full;
    for (int i : land.stationary()) r.stationary.push_back(land.names()[i]);
    r.value = d.value;
    r.grad_norm = d.grad.norm();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (d.hess.size() > 0) {
        es.compute(d.hess);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.hessian_eigs.push_back(es.eigenvalues()(i));
    }

    const Flat flat = flat_directions(land, full, d.hess, free_positions(land), cfg.zero_eig_tol);
    a.flat_projector = flat.projector;
    r.family = flat.description;

    r.classification = classify(r.value, r.hessian_eigs, cfg.zero_eig_tol, ctx);
    if (r.classification == Classification::SecondOrderTrap) {
        std::vector<Eigen::Index> null_idx;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) <= cfg.zero_eig_tol) null_idx.push_back(i);
        Eigen::MatrixXd N(d.hess.rows(), static_cast<Eigen::Index>(null_idx.size()));
        for (std::size_t k = 0; k < null_idx.size(); ++k) N.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(null_idx[k]);
        const ProbeResult pr = null_direction_probe(land, full, N);
        r.probe_status = pr.status;
        r.probe_growth_order = pr.order;
        r.classification = classify(r.value, r.hessian_eigs, cfg.zero_eig_tol, ctx, pr.status);
    }
    return a;
}

ClassifyContext scanned_context(const Chart& chart) {
    // whole landscape, not just the chart slice
    Chart full;
    full.kind = ChartKind::Full;
    full.conv1 = full.conv2 = Convention::ZYZ;
    full.measured = chart.measured;
    full.target = chart.target;
    auto rng = stream_for(0x5ca9ULL, 0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int s = 0; s < 20000; ++s) {
        std::array<double, 6> x{};
        for (int i = 0; i < 6; ++i) x[static_cast<std::size_t>(i)] = (i == 1 || i == 4) ? kPi * unit(rng) : kPi * (2.0 * unit(rng) - 1.0);
        const double v = chart_eval_t(full, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {hi, lo, 1e-9};
}

}  // namespace

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::GlobalMax: return "global_max";
        case Classification::GlobalMin: return "global_min";
        case Classification::LocalMax: return "local_max";
        case Classification::LocalMin: return "local_min";
        case Classification::Saddle: return "saddle";
        case Classification::SecondOrderTrap: return "second_order_trap";
        case Classification::Degenerate: return "degenerate";
    }
    return "?";
}

Classification parse_classification(std::string_view s) {
    for (auto c : {Classification::GlobalMax, Classification::GlobalMin, Classification::LocalMax,
                   Classification::LocalMin, Classification::Saddle, Classification::SecondOrderTrap,
                   Classification::Degenerate})
        if (to_string(c) == s) return c;
    throw InvalidArgument("unknown classification '" + std::string(s) + "'");
}

std::string_view to_string(ProbeStatus s) {
    switch (s) {
        case ProbeStatus::NoIncrease: return "no_increase";
        case ProbeStatus::SlowGrowth: return "slow_growth";
        case ProbeStatus::QuadraticGrowth: return "quadratic_growth";
        case ProbeStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

void SearchConfig::validate() const {
    if (starts <= 0) throw InvalidArgument("starts must be positive");
    if (max_iterations <= 0) throw InvalidArgument("max_iterations must be positive");
    if (!(grad_tol > 0.0) || !(zero_eig_tol > 0.0) || !(dedup_radius > 0.0))
        throw InvalidArgument("tolerances must be positive");
    if (!(start_margin > 0.0) || start_margin >= 0.5 * kPi) throw InvalidArgument("start_margin out of range");
    if (!(boundary_margin >= 0.0)) throw InvalidArgument("boundary_margin must be non-negative");
}

ClassifyContext context_for(const Chart& chart) {
    switch (chart.kind) {
        case ChartKind::L1: return {kL1Max, 0.0, 1e-9};
        case ChartKind::M:
        case ChartKind::MEnvelope: return {0.5, 0.0, 1e-9};
        case ChartKind::Full: break;
    }
    if (chart.target == 3) return {1.0, 0.0, 1e-9};
    if (chart.target == 2) {
        if (chart.measured == 1) return {kL1Max, 0.0, 1e-9};
        if (chart.measured == 2 || chart.measured == 0) return {0.5, 0.0, 1e-9};
    }
    return scanned_context(chart);
}

Classification classify(double value, const std::vector<double>& eigs, double zero_tol, const ClassifyContext& ctx,
                        std::optional<ProbeStatus> probe) {
    bool any_pos = false, any_neg = false, any_zero = false;
    for (double e : eigs) {
        if (e > zero_tol)
            any_pos = true;
        else if (e < -zero_tol)
            any_neg = true;
        else
            any_zero = true;
    }
    const bool at_max = std::abs(value - ctx.global_max) <= ctx.value_tol;
    const bool at_min = std::abs(value - ctx.global_min) <= ctx.value_tol;
    if (at_max && !any_pos) return Classification::GlobalMax;
    if (at_min && !any_neg) return Classification::GlobalMin;
    if (any_pos && any_neg) return Classification::Saddle;
    if (!any_zero && any_neg) return Classification::LocalMax;
    if (!any_zero && any_pos) return Classification::LocalMin;
    if (!any_pos && any_zero && value < ctx.global_max - ctx.value_tol) {
        if (probe && *probe == ProbeStatus::QuadraticGrowth) return Classification::Degenerate;
        return Classification::SecondOrderTrap;
    }
    return Classification::Degenerate;
}

Classification classify(double value, const std::vector<double>& eigs, const SearchConfig& cfg,
                        const ClassifyContext& ctx, std::optional<ProbeStatus> probe) {
    return classify(value, eigs, cfg.zero_eig_tol, ctx, probe);
}

ProbeResult null_direction_probe(const Landscape& land, const Eigen::VectorXd& full, const Eigen::MatrixXd& null_dirs,
                                 const std::vector<double>& eps_ladder) {
    ProbeResult res;
    const double f0 = land.value(full);
    const double noise = 10.0 * std::numeric_limits<double>::epsilon() * (f0 != 0.0 ? std::abs(f0) : 1.0);
    const auto& st = land.stationary();

    std::vector<Eigen::VectorXd> dirs;
    for (Eigen::Index c = 0; c < null_dirs.cols(); ++c)
        if (null_dirs.col(c).norm() > 0.0) dirs.push_back(null_dirs.col(c).normalized());
    if (null_dirs.cols() > 1) {
        auto rng = stream_for(0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(null_dirs.cols()));
        std::normal_distribution<double> gauss;
        for (int k = 0; k < 8; ++k) {
            Eigen::VectorXd w(null_dirs.cols());
            for (Eigen::Index c = 0; c < w.size(); ++c) w(c) = gauss(rng);
            const Eigen::VectorXd v = null_dirs * w;
            if (v.norm() > 0.0) dirs.push_back(v.normalized());
        }
    }
    if (dirs.empty() || eps_ladder.empty()) return res;

    // increases along each signed direction, per eps
    std::vector<std::vector<double>> incr;
    for (const auto& v : dirs)
        for (double sign : {1.0, -1.0}) {
            std::vector<double> row;
            for (double eps : eps_ladder) {
                Eigen::VectorXd y = full;
                for (std::size_t p = 0; p < st.size(); ++p) y(st[p]) += sign * eps * v(static_cast<Eigen::Index>(p));
                row.push_back(land.value(y) - f0);
            }
            incr.push_back(std::move(row));
        }

    std::size_t best = 0;
    for (std::size_t k = 0; k < incr.size(); ++k) {
        for (double d : incr[k]) res.max_increase = std::max(res.max_increase, d);
        if (incr[k][0] > incr[best][0]) best = k;
    }
    if (res.max_increase <= noise) {
        res.status = ProbeStatus::NoIncrease;
        return res;
    }

    std::vector<double> lx, ly;
    for (std::size_t e = 0; e < eps_ladder.size(); ++e)
        if (incr[best][e] > noise) {
            lx.push_back(std::log10(eps_ladder[e]));
            ly.push_back(std::log10(incr[best][e]));
        }
    if (lx.size() < 2) {
        if (lx.empty()) {
            res.status = ProbeStatus::Inconclusive;
            return res;
        }
        // one visible point: lower bound on the exponent from the noise floor
        const double next = eps_ladder.size() > 1 ? std::log10(eps_ladder[1]) : lx[0] - 1.0;
        res.slope = (ly[0] - std::log10(noise)) / (lx[0] - next);
        res.status = res.slope >= 2.5 ? ProbeStatus::SlowGrowth : ProbeStatus::Inconclusive;
        if (res.status == ProbeStatus::SlowGrowth) res.order = static_cast<int>(std::lround(res.slope));
        return res;
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - res.slope * sx) / n;
    for (std::size_t k = 0; k < lx.size(); ++k)
        res.fit_residual = std::max(res.fit_residual, std::abs(ly[k] - (icept + res.slope * lx[k])));
    if (res.fit_residual > 0.5) {
        res.status = ProbeStatus::Inconclusive;
        return res;
    }
    res.order = static_cast<int>(std::lround(res.slope));
    res.status = res.slope >= 2.5 ? ProbeStatus::SlowGrowth : ProbeStatus::QuadraticGrowth;
    return res;
}

CriticalPointRecord analyze_point(const Landscape& land, const Eigen::VectorXd& full, const SearchConfig& cfg,
                                  const ClassifyContext& ctx) {
    return analyze(land, full, cfg, ctx).rec;
}

std::vector<CriticalPointRecord> find_critical_points(const Chart& chart, const SearchConfig& cfg, SearchStats* stats) {
    cfg.validate();
    const Landscape land(chart);
    const std::vector<int> fpos = free_positions(land);
    ClassifyContext ctx = context_for(chart);

    enum class Outcome { Converged, NoConvergence, Boundary };
    struct StartResult {
        Outcome outcome = Outcome::NoConvergence;
        Eigen::VectorXd x;
    };
    std::vector<StartResult> results(static_cast<std::size_t>(cfg.starts));

    parallel_for(results.size(), worker_count(cfg.workers), [&](std::size_t s) {
        auto rng = stream_for(cfg.seed, s);
        Eigen::VectorXd x = land.base();
        for (int i : land.free())
            x(i) = is_periodic(land, i) ? kPi * (2.0 * unit(rng) - 1.0)
                                        : cfg.start_margin + (kPi - 2.0 * cfg.start_margin) * unit(rng);
        LmResult lm = minimize_gradient(land, x, cfg, fpos);
        StartResult& out = results[s];
        if (!(lm.grad_norm <= cfg.grad_tol) || !(lm.last_step <= kStepTol)) return;
        if (!normalize_point(land, lm.x)) {
            out.outcome = Outcome::Boundary;
            return;
        }
        for (int i : land.free())
            if (!is_periodic(land, i) && (lm.x(i) < cfg.boundary_margin || lm.x(i) > kPi - cfg.boundary_margin)) {
                out.outcome = Outcome::Boundary;
                return;
            }
        out.outcome = Outcome::Converged;
        out.x = lm.x;
    });

    SearchStats st;
    std::vector<Eigen::VectorXd> pts;
    for (const auto& r : results) {
        if (r.outcome == Outcome::Converged) {
            ++st.converged;
            pts.push_back(r.x);
        } else if (r.outcome == Outcome::Boundary) {
            ++st.rejected_boundary;
        } else {
            ++st.no_convergence;
        }
    }
    if (stats) *stats = st;
    std::sort(pts.begin(), pts.end(), lex_less);

    std::vector<Analysis> clusters;
    std::vector<double> values;
    for (const auto& x : pts) {
        const double v = land.value(x);
        bool merged = false;
        for (std::size_t c = 0; c < clusters.size() && !merged; ++c) {
            if (std::abs(values[c] - v) > 1e-8) continue;
            if (family_distance(land, clusters[c].rec.coords, clusters[c].flat_projector, x) <= cfg.dedup_radius) {
                ++clusters[c].rec.multiplicity;
                merged = true;
            }
        }
        if (merged) continue;
        clusters.push_back(analyze(land, x, cfg, ctx));
        values.push_back(v);
    }

    std::vector<CriticalPointRecord> out;
    for (auto& c : clusters) out.push_back(std::move(c.rec));

    // a scanned context can only under-estimate the extremes; refine with the found values
    for (const auto& r : out) {
        if (r.value > ctx.global_max) ctx.global_max = r.value;
        if (r.value < ctx.global_min) ctx.global_min = r.value;
    }
    for (auto& r : out) r.classification = classify(r.value, r.hessian_eigs, cfg, ctx, r.probe_status);

    std::stable_sort(out.begin(), out.end(), [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
        if (a.value != b.value) return a.value > b.value;
        return lex_less(a.coords, b.coords);
    });
    return out;
}

}  // namespace kinscape
