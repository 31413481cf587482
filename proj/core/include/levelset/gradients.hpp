#pragma once

#include <cmath>
#include <functional>

#include "levelset/bundle.hpp"

namespace levelset {

/// Central-difference gradient estimate of a vector-to-scalar function.
/// Falls back to a one-sided difference on coordinates where a probe leaves
/// the function's domain (throws DomainError or returns a non-finite value);
/// throws DomainError only when both sides fail.
inline Bundle grad_fd(const std::function<double(const Bundle&)>& f, const Bundle& q,
                      double step = 1e-6) {
    auto probe = [&](const Bundle& x, double& out) -> bool {
        try {
            out = f(x);
        } catch (const DomainError&) {
            return false;
        }
        return std::isfinite(out);
    };

    Bundle g(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        Bundle up = q, dn = q;
        up[i] += step;
        dn[i] -= step;
        double fu = 0.0, fd = 0.0;
        const bool ok_up = probe(up, fu);
        const bool ok_dn = probe(dn, fd);
        if (ok_up && ok_dn) {
            g[i] = (fu - fd) / (2.0 * step);
        } else if (ok_up || ok_dn) {
            double f0 = 0.0;
            if (!probe(q, f0)) throw DomainError("grad_fd: point itself outside domain");
            g[i] = ok_up ? (fu - f0) / step : (f0 - fd) / step;
        } else {
            throw DomainError("grad_fd: both probes leave the domain");
        }
    }
    return g;
}

}  // namespace levelset
