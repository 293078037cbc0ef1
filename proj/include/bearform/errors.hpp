#pragma once

#include <stdexcept>
#include <string>

namespace bearform {

// Base for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad inputs: malformed graphs, inadmissible gains, out-of-range arguments.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Scenario-file problems, with the offending line when known (0 = file-level).
class ParseError : public ValidationError {
public:
    ParseError(std::string msg, int line = 0)
        : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + msg : std::move(msg)),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Two agents coincide and the bearing between them does not exist.
class BearingUndefinedError : public Error {
public:
    BearingUndefinedError(int i, int j, double t = 0.0)
        : Error("bearing undefined between agents " + std::to_string(i) + " and " +
                std::to_string(j) + " at t=" + std::to_string(t)),
          i_(i), j_(j), time_(t) {}
    int i() const { return i_; }
    int j() const { return j_; }
    double time() const { return time_; }

private:
    int i_, j_;
    double time_;
};

// Runtime failures during integration (non-finite states and the like).
class SimulationError : public Error {
public:
    using Error::Error;
};

} // namespace bearform
