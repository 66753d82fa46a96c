#pragma once

#include <stdexcept>
#include <string>

namespace dehn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different group contexts (family or size differ).
class ContextMismatch : public Error {
public:
    using Error::Error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A representation does not satisfy the surface relation within tolerance.
class DefectTooLarge : public Error {
public:
    DefectTooLarge(double defect, double limit)
        : Error("relation defect " + std::to_string(defect) + " exceeds " + std::to_string(limit)),
          defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/// An iterative solver exhausted its budget; carries the best residual reached.
class SolverFailed : public Error {
public:
    SolverFailed(const std::string& what, double best_residual)
        : Error(what + " (best residual " + std::to_string(best_residual) + ")"),
          best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

}  // namespace dehn
