#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nht {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent input (sizes, unknown keys, out-of-range parameters).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (t <= 0, U = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Operation used outside its contract (e.g. the Bloch integral on a disordered lattice).
class ContractError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

// NaN / overflow during integration, degenerate states.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace nht
