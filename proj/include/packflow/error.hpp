#pragma once

#include <stdexcept>
#include <string>

namespace packflow {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A metric outside the geometric domain of its complex.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

/// Law-of-cosines argument left [-1, 1] beyond roundoff.
class DegenerateTriangle : public DegenerateGeometry {
public:
    DegenerateTriangle(int face, const std::string& what)
        : DegenerateGeometry(what), face_(face) {}
    int face() const noexcept { return face_; }

private:
    int face_;
};

/// Four radii that do not span a Euclidean tetrahedron (Q <= 0).
class DegenerateTetrahedron : public DegenerateGeometry {
public:
    DegenerateTetrahedron(int tet, const std::string& what)
        : DegenerateGeometry(what), tet_(tet) {}
    int tetrahedron() const noexcept { return tet_; }

private:
    int tet_;
};

class NearDegenerate : public DegenerateGeometry {
public:
    using DegenerateGeometry::DegenerateGeometry;
};

class SpectralFailure : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class StepFailure : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class EnumerationTooLarge : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

}  // namespace packflow
