#pragma once

#include <stdexcept>
#include <string>

namespace sysid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error {
    using Error::Error;
};
struct DidNotConverge : Error {
    using Error::Error;
};
struct Infeasible : Error {
    using Error::Error;
};
struct Unbounded : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct InvalidParam : Error {
    using Error::Error;
};
struct UnstableSystem : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace sysid
