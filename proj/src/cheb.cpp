#include "bclab/cheb.hpp"

#include <cmath>

#include "bclab/errors.hpp"

namespace bcl {

ChebGrid build_cheb_grid(int n) {
    if (n < 4) throw invalid_argument_error("build_cheb_grid: need n >= 4");

    ChebGrid g;
    g.n = n;
    g.nodes.resize(n + 1);
    for (int j = 0; j <= n; ++j) g.nodes(j) = std::cos(M_PI * j / n);
    // pin the symmetric entries so the reflection y -> -y is exact
    g.nodes(0) = 1.0;
    g.nodes(n) = -1.0;
    if (n % 2 == 0) g.nodes(n / 2) = 0.0;
    for (int j = 0; j < (n + 1) / 2; ++j) g.nodes(n - j) = -g.nodes(j);

    // differentiation matrix (Trefethen), diagonal by negated row sums
    Eigen::VectorXd c = Eigen::VectorXd::Ones(n + 1);
    c(0) = 2.0;
    c(n) = 2.0;
    for (int j = 0; j <= n; ++j)
        if (j % 2 == 1) c(j) = -c(j);

    g.d1.setZero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const double v = (c(i) / c(j)) / (g.nodes(i) - g.nodes(j));
            g.d1(i, j) = v;
            rowsum += v;
        }
        g.d1(i, i) = -rowsum;
    }
    g.d2 = g.d1 * g.d1;

    // Clenshaw-Curtis weights on the same nodes
    g.weights.setZero(n + 1);
    if (n % 2 == 0) {
        g.weights(0) = 1.0 / (n * n - 1.0);
        g.weights(n) = g.weights(0);
        for (int i = 1; i < n; ++i) {
            double v = 1.0;
            const double th = M_PI * i / n;
            for (int k = 1; k < n / 2; ++k) v -= 2.0 * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
            v -= std::cos(n * th) / (n * n - 1.0);
            g.weights(i) = 2.0 * v / n;
        }
    } else {
        g.weights(0) = 1.0 / (n * n);
        g.weights(n) = g.weights(0);
        for (int i = 1; i < n; ++i) {
            double v = 1.0;
            const double th = M_PI * i / n;
            for (int k = 1; k <= (n - 1) / 2; ++k) v -= 2.0 * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
            g.weights(i) = 2.0 * v / n;
        }
    }
    return g;
}

}  // namespace bcl
