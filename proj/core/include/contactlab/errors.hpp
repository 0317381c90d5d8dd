#pragma once

#include <stdexcept>
#include <string>

namespace contactlab {

// Every library error carries a module-qualified code such as
// "exprlang.SyntaxError"; the CLI prints the code verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message);
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define CONTACTLAB_ERROR(Name, Code)                                      \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& message) : Error(Code, message) {} \
    }

// exprlang
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& message);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};
CONTACTLAB_ERROR(UnknownFunction, "exprlang.UnknownFunction");
CONTACTLAB_ERROR(UnboundVariable, "exprlang.UnboundVariable");
CONTACTLAB_ERROR(DomainError, "exprlang.DomainError");
CONTACTLAB_ERROR(SchemaError, "exprlang.SchemaError");
CONTACTLAB_ERROR(DomainViolation, "exprlang.DomainViolation");
CONTACTLAB_ERROR(OrientationError, "exprlang.NegativeOrientation");

// tensor
CONTACTLAB_ERROR(NotSPD, "tensor.NotSPD");
CONTACTLAB_ERROR(FDStepError, "tensor.FDStepError");
CONTACTLAB_ERROR(DegeneratePlane, "tensor.DegeneratePlane");

// contact
CONTACTLAB_ERROR(NotContactPoint, "contact.NotContactPoint");
CONTACTLAB_ERROR(NotInXi, "contact.NotInXi");

// bounds
CONTACTLAB_ERROR(OutOfRange, "bounds.OutOfRange");
CONTACTLAB_ERROR(RequiresCompatible, "bounds.RequiresCompatible");
CONTACTLAB_ERROR(InsufficientData, "bounds.InsufficientData");
CONTACTLAB_ERROR(InconsistentInput, "bounds.InconsistentWithRicciIdentity");

// geodesic
class LeftDomain : public Error {
public:
    LeftDomain(double t_exit, const std::string& message);
    double t_exit() const noexcept { return t_exit_; }

private:
    double t_exit_;
};
CONTACTLAB_ERROR(NotUnitSpeed, "geodesic.NotUnitSpeed");

// foliation
CONTACTLAB_ERROR(StiffRegion, "foliation.StiffRegion");
CONTACTLAB_ERROR(ArgumentError, "foliation.ArgumentError");

// levi
CONTACTLAB_ERROR(DegenerateKernel, "levi.DegenerateKernel");

// catalog
CONTACTLAB_ERROR(UnknownEntry, "catalog.UnknownEntry");

#undef CONTACTLAB_ERROR

}  // namespace contactlab
