#include "olpb/population.hpp"

#include <cmath>
#include <functional>

namespace olpb {

namespace {

constexpr double kQuadTol = 1e-10;

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double flo, double fmid, double fhi, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double fl = f(lmid);
    const double fr = f(rmid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, lo, mid, flo, fl, fmid, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, mid, hi, fmid, fr, fhi, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(hi > lo)) return 0.0;
    const double mid = 0.5 * (lo + hi);
    return adaptive_simpson(f, lo, hi, f(lo), f(mid), f(hi), tol, 48);
}

bool analytic(const Distribution& dist) {
    return dist.kind == DistKind::uniform || dist.kind == DistKind::deterministic;
}

// P{r > x} for the reward law.
double reward_tail(const Distribution& r, double x) { return 1.0 - r.cdf(x); }

// E[(r - x)^+] for the reward law.
double reward_plus_mean(const Distribution& r, double x) {
    if (r.kind == DistKind::deterministic) return std::max(0.0, r.a - x);
    const double lo = r.a, hi = r.b;
    if (lo == hi) return std::max(0.0, lo - x);
    if (x >= hi) return 0.0;
    if (x <= lo) return 0.5 * (lo + hi) - x;
    return (hi - x) * (hi - x) / (2.0 * (hi - lo));
}

// Averages g(a) over the consumption law.
double consumption_mean(const Distribution& law, const std::function<double(double)>& g) {
    if (law.kind == DistKind::deterministic || law.a == law.b) return g(law.support_lo());
    const double lo = law.a, hi = law.b;
    return integrate(g, lo, hi, kQuadTol) / (hi - lo);
}

} // namespace

DualPrice population_dual(const MarketSpec& spec, double d) {
    spec.validate();
    if (spec.m != 1) throw UnsupportedSpecError("population_dual: requires m == 1");
    if (!(d > 0.0)) throw std::invalid_argument("population_dual: d must be positive");
    if (!analytic(spec.reward_law) || !analytic(spec.consumption_law))
        throw UnsupportedSpecError("population_dual: unsupported distribution family: " +
                                   spec.reward_law.describe() + " x " +
                                   spec.consumption_law.describe());

    const Distribution& rl = spec.reward_law;
    const Distribution& al = spec.consumption_law;
    auto demand = [&](double p) { // E[a 1{r > a p}]
        return consumption_mean(al, [&](double a) { return a * reward_tail(rl, a * p); });
    };

    double price = 0.0;
    if (demand(0.0) > d) {
        // Derivative d - demand(p) crosses zero; demand is nonincreasing and
        // vanishes past r_hi/a_lo, so bisect keeping demand(lo) >= d > demand(hi).
        double lo = 0.0;
        double hi = rl.support_hi() / al.support_lo() + 1.0;
        for (int it = 0; it < 100 && hi - lo > 1e-9; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (demand(mid) >= d)
                lo = mid;
            else
                hi = mid;
        }
        price = 0.5 * (lo + hi);
    }

    DualPrice out;
    out.price = {price};
    out.objective =
        d * price +
        consumption_mean(al, [&](double a) { return reward_plus_mean(rl, a * price); });
    return out;
}

} // namespace olpb
