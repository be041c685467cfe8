#pragma once

#include <stdexcept>
#include <string>

namespace fenelab {

/// Physical constants of the model in the dimensionless normalization
/// (Mach, Deborah, kappa, r, sigma and the ball radius are all 1 and not stored).
struct ModelParams {
    double mu = 1.0;       ///< shear viscosity, mu > 0
    double mu_prime = 0.0; ///< second viscosity, 2*mu + mu_prime > 0
    double gamma = 2.0;    ///< adiabatic exponent of the gamma-law pressure, gamma >= 1
    double a = 1.0;        ///< pressure prefactor, a > 0
    double k = 1.0;        ///< exponent of the confining spring potential, k > 0
    int d = 2;             ///< spatial dimension (2 for nonlinear runs, 2 or 3 for spectral)

    /// Acoustic coefficient of the linearization: h(0) = P'(1)/1 = a*gamma.
    double gamma_eff() const { return a * gamma; }

    void validate() const {
        if (!(mu > 0.0)) throw std::invalid_argument("ModelParams: mu must be > 0");
        if (!(2.0 * mu + mu_prime > 0.0))
            throw std::invalid_argument("ModelParams: 2*mu + mu_prime must be > 0");
        if (!(gamma >= 1.0)) throw std::invalid_argument("ModelParams: gamma must be >= 1");
        if (!(a > 0.0)) throw std::invalid_argument("ModelParams: a must be > 0");
        if (!(k > 0.0)) throw std::invalid_argument("ModelParams: k must be > 0");
        if (d != 2 && d != 3) throw std::invalid_argument("ModelParams: d must be 2 or 3");
    }
};

} // namespace fenelab
