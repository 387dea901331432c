#include "ablab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace ablab {

namespace {

// Legendre polynomial roots by Newton iteration, seeded with the Chebyshev
// angle approximation. Converges to machine precision in a handful of steps
// and avoids a table of hand-typed constants.
template <int N>
GaussRule<N> make_gauss_rule() {
    GaussRule<N> rule{};
    for (int i = 0; i < N; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_N and P_N' by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[N - 1 - i] = x;
        rule.weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

template <int N>
double panel(const GaussRule<N>& rule, const std::function<double(double)>& f,
             double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

struct Adaptive1d {
    const std::function<double(double)>& f;
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    int max_depth;

    // whole = previously computed value over [a,b]
    void refine(double a, double b, double whole, double tol, int depth) {
        const double mid = 0.5 * (a + b);
        const double left = panel(gauss15(), f, a, mid);
        const double right = panel(gauss15(), f, mid, b);
        const double split = left + right;
        if (!std::isfinite(split))
            throw DomainError("integrate_1d: non-finite integrand value in [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
        const double diff = std::fabs(split - whole);
        if (diff <= tol || b - a <= std::fabs(mid) * 1e-15) {
            value += split;
            error += diff;
            panels += 2;
            return;
        }
        if (depth >= max_depth)
            throw ConvergenceError(
                "integrate_1d: depth cap " + std::to_string(max_depth) +
                    " reached without meeting tolerance",
                value + split, error + diff);
        refine(a, mid, left, 0.5 * tol, depth + 1);
        refine(mid, b, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

const GaussRule<15>& gauss15() {
    static const GaussRule<15> rule = make_gauss_rule<15>();
    return rule;
}

const GaussRule<7>& gauss7() {
    static const GaussRule<7> rule = make_gauss_rule<7>();
    return rule;
}

const GaussRule<4>& gauss4() {
    static const GaussRule<4> rule = make_gauss_rule<4>();
    return rule;
}

QuadratureResult integrate_1d(const std::function<double(double)>& f,
                              double lo, double hi, double tol, int max_depth) {
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        throw ValidationError("integrate_1d: non-finite interval");
    if (!(tol > 0.0)) throw ValidationError("integrate_1d: tolerance must be positive");
    if (lo == hi) return {0.0, 0.0, 0};

    Adaptive1d state{f, 0.0, 0.0, 0, max_depth};
    const double whole = panel(gauss15(), f, lo, hi);
    if (!std::isfinite(whole))
        throw DomainError("integrate_1d: non-finite integrand value");
    state.refine(lo, hi, whole, tol, 0);
    return {state.value, state.error, state.panels};
}

namespace {

struct Panel2d {
    double u_lo, u_hi, v_lo, v_hi;
    double value;
    double error;
    long seq;  // insertion order; tie-break for determinism
};

struct PanelOrder {
    bool operator()(const Panel2d& a, const Panel2d& b) const {
        if (a.error != b.error) return a.error < b.error;
        return a.seq > b.seq;
    }
};

Panel2d eval_panel_2d(const std::function<double(double, double)>& f,
                      double u_lo, double u_hi, double v_lo, double v_hi,
                      long seq) {
    const auto& g7 = gauss7();
    const auto& g4 = gauss4();
    const double um = 0.5 * (u_lo + u_hi), uh = 0.5 * (u_hi - u_lo);
    const double vm = 0.5 * (v_lo + v_hi), vh = 0.5 * (v_hi - v_lo);
    double v77 = 0.0;
    for (int i = 0; i < 7; ++i) {
        double row = 0.0;
        for (int j = 0; j < 7; ++j)
            row += g7.weights[j] * f(um + uh * g7.nodes[i], vm + vh * g7.nodes[j]);
        v77 += g7.weights[i] * row;
    }
    double v44 = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j)
            row += g4.weights[j] * f(um + uh * g4.nodes[i], vm + vh * g4.nodes[j]);
        v44 += g4.weights[i] * row;
    }
    const double scale = uh * vh;
    const double value = v77 * scale;
    if (!std::isfinite(value))
        throw DomainError("integrate_2d: non-finite integrand value");
    return {u_lo, u_hi, v_lo, v_hi, value, std::fabs((v77 - v44) * scale), seq};
}

}  // namespace

QuadratureResult integrate_2d(const std::function<double(double, double)>& f,
                              double u_lo, double u_hi, double v_lo, double v_hi,
                              double tol, int max_panels) {
    if (!(tol > 0.0)) throw ValidationError("integrate_2d: tolerance must be positive");
    long seq = 0;
    std::priority_queue<Panel2d, std::vector<Panel2d>, PanelOrder> queue;
    queue.push(eval_panel_2d(f, u_lo, u_hi, v_lo, v_hi, seq++));
    double total_error = queue.top().error;
    int processed = 1;

    while (total_error > tol) {
        if (processed >= max_panels) {
            double value = 0.0;
            std::priority_queue<Panel2d, std::vector<Panel2d>, PanelOrder> rest = queue;
            while (!rest.empty()) {
                value += rest.top().value;
                rest.pop();
            }
            throw ConvergenceError("integrate_2d: panel budget " +
                                       std::to_string(max_panels) +
                                       " exhausted without meeting tolerance",
                                   value, total_error);
        }
        const Panel2d worst = queue.top();
        queue.pop();
        total_error -= worst.error;
        const double um = 0.5 * (worst.u_lo + worst.u_hi);
        const double vm = 0.5 * (worst.v_lo + worst.v_hi);
        for (const auto& [ul, uh, vl, vh] :
             {std::array{worst.u_lo, um, worst.v_lo, vm},
              std::array{um, worst.u_hi, worst.v_lo, vm},
              std::array{worst.u_lo, um, vm, worst.v_hi},
              std::array{um, worst.u_hi, vm, worst.v_hi}}) {
            Panel2d child = eval_panel_2d(f, ul, uh, vl, vh, seq++);
            total_error += child.error;
            queue.push(child);
        }
        processed += 4;
    }

    double value = 0.0;
    while (!queue.empty()) {
        value += queue.top().value;
        queue.pop();
    }
    return {value, total_error, processed};
}

}  // namespace ablab
