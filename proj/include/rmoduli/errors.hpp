#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmoduli {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecError : Error { using Error::Error; };

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

struct OverlappingPairs : Error { using Error::Error; };
struct NoEquivariantStructure : Error { using Error::Error; };
struct NotInvariantEdge : Error { using Error::Error; };
struct InvariantEdge : Error { using Error::Error; };
struct TooFewLabels : Error { using Error::Error; };
struct DegreeOutOfRange : Error { using Error::Error; };
struct RelationsNotClosedUnderBoundary : Error { using Error::Error; };
struct ComplexAxiomViolated : Error { using Error::Error; };
struct ValidationFailed : Error { using Error::Error; };

struct DisconnectedSpace : Error {
    DisconnectedSpace(const std::string& what, std::vector<std::vector<std::string>> comps)
        : Error(what), components(std::move(comps)) {}
    std::vector<std::vector<std::string>> components;
};

}  // namespace rmoduli
