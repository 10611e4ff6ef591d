#ifndef LOEM_ERRORS_HPP
#define LOEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// metric-core
struct AsymmetryError : Error {
    int i, j;
    AsymmetryError(int i_, int j_, const std::string& msg) : Error(msg), i(i_), j(j_) {}
};
struct NegativeDistanceError : Error {
    int i, j;
    NegativeDistanceError(int i_, int j_, const std::string& msg) : Error(msg), i(i_), j(j_) {}
};
struct NonzeroDiagonalError : Error {
    int i;
    NonzeroDiagonalError(int i_, const std::string& msg) : Error(msg), i(i_) {}
};
struct IndistinctPointsError : Error {
    int i, j;
    IndistinctPointsError(int i_, int j_, const std::string& msg) : Error(msg), i(i_), j(j_) {}
};
// d(i,j) > d(i,k) + d(k,j): endpoints i,j through intermediate k
struct TriangleViolation : Error {
    int i, j, k;
    TriangleViolation(int i_, int j_, int k_, const std::string& msg)
        : Error(msg), i(i_), j(j_), k(k_) {}
};
struct AmbiguousClusteringError : Error {
    using Error::Error;
};
struct EmptySubsetError : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& msg) : Error(msg), line(line_) {}
};

// embed-solver
struct DimensionMismatch : Error {
    using Error::Error;
};
struct InvalidDimension : Error {
    using Error::Error;
};

// riemann-lab
struct ModelMismatch : Error {
    using Error::Error;
};
struct AmbiguousGeodesic : Error {
    using Error::Error;
};
struct UnsupportedModel : Error {
    using Error::Error;
};
struct CoincidentPoints : Error {
    using Error::Error;
};
struct DegeneratePair : Error {
    using Error::Error;
};
struct MeshError : Error {
    using Error::Error;
};

}  // namespace loem

#endif
