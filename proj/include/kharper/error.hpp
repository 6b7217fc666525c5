#pragma once

#include <stdexcept>
#include <string>

namespace kharper {

/// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// N_r * N_s does not factor the block dimension.
class PartitionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Eigensolver failure or a result that violates a numerical contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnitarityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class WrongBasisError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InsufficientSupportError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

} // namespace kharper
