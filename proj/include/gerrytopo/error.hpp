#pragma once

#include <stdexcept>
#include <string>

namespace gerrytopo {

// Base of every error the library throws. Subclasses tag the failing stage.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

class RasterError : public Error {
public:
    using Error::Error;
};

class MarginError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed boundary matrix or complex (face ordering, closure, levels).
class StructureError : public Error {
public:
    using Error::Error;
};

class EmptyComplexError : public Error {
public:
    using Error::Error;
};

class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

// Pipeline failure wrapped with the name of the stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace gerrytopo
