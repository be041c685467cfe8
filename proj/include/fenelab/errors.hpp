#pragma once

#include <stdexcept>
#include <string>

namespace fenelab {

/// Numerical failure (non-convergence, ill-conditioning); carries a diagnostic report.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Time step rejected; `admissible_dt` is the largest step the module accepts.
struct step_rejected : std::runtime_error {
    double admissible_dt;
    step_rejected(const std::string& what, double dt_ok)
        : std::runtime_error(what), admissible_dt(dt_ok) {}
};

/// The nonvacuum condition min(1+rho) > 0 failed; aborts the solver.
struct nonvacuum_error : std::runtime_error {
    explicit nonvacuum_error(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature did not reach the requested tolerance; carries the achieved one.
struct accuracy_error : std::runtime_error {
    double achieved;
    accuracy_error(const std::string& what, double got)
        : std::runtime_error(what), achieved(got) {}
};

/// Picard iteration diverged; carries the offending iterate distances.
struct contraction_failure : std::runtime_error {
    explicit contraction_failure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fenelab
