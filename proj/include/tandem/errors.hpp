#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tandem {

// Base for every library error. CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Gear ratio product g1*g2 == 0 at configuration load.
class ZeroGearRatio : public ConfigError {
public:
    ZeroGearRatio() : ConfigError("gear ratio product g1*g2 must be nonzero") {}
};

// Arbitration stepped with a non-monotonic cycle index.
class OutOfOrderTick : public Error {
public:
    using Error::Error;
};

// guidance_reference called while no onset latch is set.
class MissingLatch : public Error {
public:
    MissingLatch() : Error("guidance reference requires a populated onset latch") {}
};

class NonFiniteInput : public Error {
public:
    using Error::Error;
};

class NonFiniteTorque : public Error {
public:
    using Error::Error;
};

class DepthOutOfRange : public Error {
public:
    using Error::Error;
};

// Tick appended out of sequence (index != previous + 1).
class NonContiguousTick : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

// Malformed or truncated trace stream; carries the 1-based line number.
class CorruptRecord : public Error {
public:
    CorruptRecord(std::size_t line, const std::string& what_arg)
        : Error("line " + std::to_string(line) + ": " + what_arg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Wheel angle does not fit the signed 32-bit centidegree wire field.
class AngleOverflow : public Error {
public:
    using Error::Error;
};

class NotCompleted : public Error {
public:
    NotCompleted() : Error("trace does not reach the end of the centerline") {}
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class NonPositiveFirst : public Error {
public:
    NonPositiveFirst() : Error("first value must be positive") {}
};

class InsufficientTrials : public Error {
public:
    using Error::Error;
};

class DegenerateAbscissa : public Error {
public:
    DegenerateAbscissa() : Error("all usable trials share the same trial index") {}
};

}  // namespace tandem
