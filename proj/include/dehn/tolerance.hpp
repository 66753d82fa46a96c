#pragma once

#include "dehn/errors.hpp"

namespace dehn {

/// Numerical thresholds shared by every operation.
struct Tolerance {
    double eq_tol = 1e-9;      // relative Frobenius distance for element equality
    double rank_tol = 1e-7;    // singular value ratio below which a direction counts as null
    double solver_tol = 1e-8;  // residual target for iterative solvers

    void validate() const {
        if (!(eq_tol > 0.0) || !(rank_tol > 0.0) || !(solver_tol > 0.0))
            throw InvalidArgument("tolerances must be strictly positive");
        if (!(eq_tol < 1e-3))
            throw InvalidArgument("eq_tol must be below 1e-3");
    }
};

}  // namespace dehn
