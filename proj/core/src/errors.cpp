#include "contactlab/errors.hpp"

namespace contactlab {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

SyntaxError::SyntaxError(std::size_t offset, const std::string& message)
    : Error("exprlang.SyntaxError", "at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

LeftDomain::LeftDomain(double t_exit, const std::string& message)
    : Error("geodesic.LeftDomain", message), t_exit_(t_exit) {}

}  // namespace contactlab
