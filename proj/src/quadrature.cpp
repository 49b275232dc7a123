#include "peakon/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace peakon::quadrature {

namespace {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

GaussRule build_rule(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [p, dp] = legendre(n, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::map<std::size_t, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

std::vector<double> panel_edges(double a, double b, const std::vector<double>& breakpoints,
                                double max_panel_width) {
    std::vector<double> edges{a, b};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    if (max_panel_width > 0.0) {
        std::vector<double> refined;
        refined.push_back(edges.front());
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            double lo = edges[i], hi = edges[i + 1];
            auto pieces = static_cast<std::size_t>(std::ceil((hi - lo) / max_panel_width));
            pieces = std::max<std::size_t>(pieces, 1);
            for (std::size_t j = 1; j <= pieces; ++j)
                refined.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(pieces));
        }
        edges = std::move(refined);
    }
    return edges;
}

double integrate_with_breakpoints(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breakpoints, std::size_t points_per_panel,
                                  double max_panel_width) {
    if (!(a < b)) return 0.0;
    std::vector<double> edges = panel_edges(a, b, breakpoints, max_panel_width);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        sum += integrate(f, edges[i], edges[i + 1], points_per_panel);
    return sum;
}

} // namespace peakon::quadrature
