#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace statage {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Root bracket without a sign change.
class BracketError : public Error {
public:
    BracketError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
        : Error(what), lo_(lo), hi_(hi), f_lo_(f_lo), f_hi_(f_hi) {}

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double f_lo() const noexcept { return f_lo_; }
    double f_hi() const noexcept { return f_hi_; }

private:
    double lo_, hi_, f_lo_, f_hi_;
};

// Exponential moment past the representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Iterative method that exhausted its iteration budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : Error(what), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

// Configuration admits no feasible schedule or policy.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

// TDMA allocation cannot fit the requested sources; carries per-source minimum times.
class InfeasibleAllocation : public Error {
public:
    InfeasibleAllocation(const std::string& what, std::vector<double> min_times)
        : Error(what), min_times_(std::move(min_times)) {}

    const std::vector<double>& min_times() const noexcept { return min_times_; }

private:
    std::vector<double> min_times_;
};

// Invalid configuration file; one diagnostic per offending field.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> diagnostics)
        : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& s : items) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> diagnostics_;
};

}  // namespace statage
