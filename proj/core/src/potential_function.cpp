#include "levelset/potential_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace levelset {

namespace {

void require_positive(const Bundle& q, const char* family) {
    if (!is_strictly_positive(q))
        throw DomainError(std::string(family) + ": reserves must be strictly positive");
}

}  // namespace

PotentialFunction uniswap(int n) {
    if (n < 2) throw SpecError("uniswap requires n >= 2");
    PotentialFunction phi;
    phi.n = n;
    phi.domain = Domain::PositiveOrthant;
    phi.homogeneous = true;
    phi.family = "uniswap";
    phi.value = [n](const Bundle& q) {
        if (static_cast<int>(q.size()) != n) throw DomainError("uniswap: wrong bundle length");
        require_positive(q, "uniswap");
        double s = 0.0;
        for (double qi : q) s += std::log(qi);
        return std::exp(s / n);
    };
    phi.gradient = [n](const Bundle& q) {
        require_positive(q, "uniswap");
        double s = 0.0;
        for (double qi : q) s += std::log(qi);
        double v = std::exp(s / n);
        Bundle g(n);
        for (int i = 0; i < n; ++i) g[i] = v / (n * q[i]);
        return g;
    };
    return phi;
}

PotentialFunction balancer(const std::vector<double>& pi) {
    const int n = static_cast<int>(pi.size());
    if (n < 2) throw SpecError("balancer requires n >= 2 weights");
    double sum = 0.0;
    for (double w : pi) {
        if (w < 0.0) throw SpecError("balancer weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw SpecError("balancer weights must sum to 1");

    PotentialFunction phi;
    phi.n = n;
    phi.domain = Domain::PositiveOrthant;
    phi.homogeneous = true;
    phi.family = "balancer";
    for (int i = 0; i < n; ++i) phi.params["pi" + std::to_string(i + 1)] = pi[i];
    phi.value = [pi, n](const Bundle& q) {
        if (static_cast<int>(q.size()) != n) throw DomainError("balancer: wrong bundle length");
        require_positive(q, "balancer");
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += pi[i] * std::log(q[i]);
        return std::exp(s);
    };
    phi.gradient = [pi, n, value = phi.value](const Bundle& q) {
        double v = value(q);
        Bundle g(n);
        for (int i = 0; i < n; ++i) g[i] = pi[i] * v / q[i];
        return g;
    };
    return phi;
}

PotentialFunction constant_sum(int n) {
    if (n < 2) throw SpecError("constant-sum requires n >= 2");
    PotentialFunction phi;
    phi.n = n;
    phi.domain = Domain::All;
    phi.homogeneous = true;
    phi.family = "constant-sum";
    phi.value = [n](const Bundle& q) {
        if (static_cast<int>(q.size()) != n) throw DomainError("constant-sum: wrong bundle length");
        return std::accumulate(q.begin(), q.end(), 0.0);
    };
    phi.gradient = [n](const Bundle&) { return Bundle(n, 1.0); };
    return phi;
}

PotentialFunction curve(int n) {
    if (n < 2) throw SpecError("curve requires n >= 2");
    PotentialFunction phi;
    phi.n = n;
    phi.domain = Domain::PositiveOrthant;
    phi.homogeneous = false;
    phi.family = "curve";
    phi.value = [n](const Bundle& q) {
        if (static_cast<int>(q.size()) != n) throw DomainError("curve: wrong bundle length");
        require_positive(q, "curve");
        double s = 0.0;
        for (double qi : q) s += qi - 1.0 / qi;
        return s;
    };
    phi.gradient = [n](const Bundle& q) {
        require_positive(q, "curve");
        Bundle g(n);
        for (int i = 0; i < n; ++i) g[i] = 1.0 + 1.0 / (q[i] * q[i]);
        return g;
    };
    return phi;
}

namespace {

struct TailFit {
    bool valid = false;
    double prediction_error = std::numeric_limits<double>::infinity();
    double limit = 0.0;
};

// v_k = limit + c * rho^k with rho = 10^{-s}: three-rung Richardson fit on
// rungs (k-2, k-1, k), validated by predicting rung k+1.
TailFit fit_power(const std::vector<double>& v) {
    TailFit fit;
    const std::size_t m = v.size();
    double d1 = v[m - 4] - v[m - 3];
    double d2 = v[m - 3] - v[m - 2];
    double d3 = v[m - 2] - v[m - 1];
    if (d1 == 0.0 || d2 == 0.0) return fit;
    double ratio = d1 / d2;
    if (!(ratio > 1.02) || !std::isfinite(ratio)) return fit;
    fit.prediction_error = std::abs((v[m - 2] - d2 / ratio) - v[m - 1]);
    double ratio_last = d2 / d3;
    if (!(ratio_last > 1.02) || !std::isfinite(ratio_last)) return fit;
    fit.limit = v[m - 1] - d3 / (ratio_last - 1.0);
    fit.valid = true;
    return fit;
}

// v_k = limit + c / k, the tail shape of boundary approaches like 1/log(1/a).
TailFit fit_reciprocal(const std::vector<double>& v, const std::vector<double>& rung) {
    TailFit fit;
    const std::size_t m = v.size();
    double k1 = rung[m - 3], k2 = rung[m - 2], k3 = rung[m - 1];
    double d2 = v[m - 3] - v[m - 2];
    double c_pred = d2 / (1.0 / k1 - 1.0 / k2);
    fit.prediction_error = std::abs((v[m - 2] + c_pred * (1.0 / k3 - 1.0 / k2)) - v[m - 1]);
    double d3 = v[m - 2] - v[m - 1];
    double c = d3 / (1.0 / k2 - 1.0 / k3);
    if (!std::isfinite(c)) return fit;
    fit.limit = v[m - 1] - c / k3;
    fit.valid = true;
    return fit;
}

}  // namespace

double boundary_limit(const PotentialFunction& phi, const Bundle& q) {
    if (!is_nonnegative(q)) throw DomainError("boundary_limit: q must be on the nonnegative boundary");
    bool on_boundary = false;
    for (double x : q)
        if (x == 0.0) on_boundary = true;
    if (!on_boundary) throw DomainError("boundary_limit: q must have a zero coordinate");

    std::vector<double> rung;   // k with alpha = 10^-k
    std::vector<double> values;
    for (int k = 2; k <= 8; ++k) {
        double alpha = std::pow(10.0, -k);
        Bundle probe = q;
        for (double& x : probe) x += alpha;
        values.push_back(phi(probe));
        rung.push_back(static_cast<double>(k));
    }
    const std::size_t m = values.size();

    // Divergence: successive differences grow instead of shrinking and the
    // ladder has run far from its start.
    {
        double d1 = std::abs(values[m - 3] - values[m - 4]);
        double d2 = std::abs(values[m - 2] - values[m - 3]);
        double d3 = std::abs(values[m - 1] - values[m - 2]);
        bool growing = d3 > d2 && d2 > d1 && d3 > 1.0;
        bool far = std::abs(values[m - 1]) > 100.0 * (1.0 + std::abs(values[0]));
        if ((growing && far) || std::abs(values[m - 1]) > 1e12)
            return std::copysign(std::numeric_limits<double>::infinity(), values[m - 1]);
    }
    for (double v : values)
        if (!std::isfinite(v))
            return v;

    double last = values[m - 1], prev = values[m - 2];
    if (std::abs(last - prev) <= 1e-6 * (1.0 + std::abs(last))) return last;

    TailFit power = fit_power(values);
    TailFit reciprocal = fit_reciprocal(values, rung);
    const TailFit& best =
        (power.valid && power.prediction_error <= reciprocal.prediction_error) ? power : reciprocal;
    if (best.valid) {
        double span = std::abs(values[m - 4] - values[m - 1]);
        bool consistent = best.prediction_error <= std::max(1e-6 * (1.0 + std::abs(last)), 0.05 * span);
        bool sane = std::abs(best.limit - last) <= 2.0 * span + 1e-9;
        if (consistent && sane) return best.limit;
    }

    std::ostringstream os;
    os << "boundary_limit: ladder has not stabilized (last values " << prev << ", " << last << ")";
    throw ToleranceError(os.str());
}

}  // namespace levelset
