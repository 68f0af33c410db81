#pragma once

#include <stdexcept>
#include <string>

namespace hoi {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition.
class InputError : public Error {
public:
    using Error::Error;
};

// A configured size cap was exceeded (subset or lattice enumeration).
class CapError : public Error {
public:
    using Error::Error;
};

// An internal cross-check between two computation routes disagreed.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

#define HOI_DEFINE_ERROR(Name, Base)      \
    class Name : public Base {            \
    public:                               \
        using Base::Base;                 \
    };

HOI_DEFINE_ERROR(DimensionMismatch, InputError)
HOI_DEFINE_ERROR(NotNormalized, InputError)
HOI_DEFINE_ERROR(NegativeMass, InputError)
HOI_DEFINE_ERROR(EmptyIndexSet, InputError)
HOI_DEFINE_ERROR(IndexOutOfRange, InputError)
HOI_DEFINE_ERROR(OverlappingSets, InputError)
HOI_DEFINE_ERROR(NeedAtLeastThreeVariables, InputError)
HOI_DEFINE_ERROR(SizeMismatch, InputError)
HOI_DEFINE_ERROR(NotACoveringEdge, InputError)
HOI_DEFINE_ERROR(NotAPermutation, InputError)
HOI_DEFINE_ERROR(EmptySeries, InputError)
HOI_DEFINE_ERROR(BlockTooLong, InputError)
HOI_DEFINE_ERROR(InvalidArgument, InputError)
HOI_DEFINE_ERROR(ParseError, InputError)

HOI_DEFINE_ERROR(SubsetExplosion, CapError)
HOI_DEFINE_ERROR(TooLarge, CapError)

#undef HOI_DEFINE_ERROR

}  // namespace hoi
