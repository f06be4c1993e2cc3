#include "sqzdisp/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace sqzdisp::quad {

namespace {

// boost stores the non-negative half of a symmetric rule.
template <unsigned N>
Rule expand() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w[i]);
            continue;
        }
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre_20() {
    static const Rule rule = expand<20>();
    return rule;
}

const Rule& gauss_legendre_10() {
    static const Rule rule = expand<10>();
    return rule;
}

}  // namespace sqzdisp::quad
