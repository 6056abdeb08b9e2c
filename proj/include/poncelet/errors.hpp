#pragma once

#include <stdexcept>
#include <string>

namespace poncelet {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateInput : GeometryError {
    using GeometryError::GeometryError;
};
struct NotOnConic : GeometryError {
    using GeometryError::GeometryError;
};
struct SingularConic : GeometryError {
    using GeometryError::GeometryError;
};
struct IdenticalConics : GeometryError {
    using GeometryError::GeometryError;
};
struct PencilSplitFailure : GeometryError {
    using GeometryError::GeometryError;
};
struct CollinearPoints : GeometryError {
    using GeometryError::GeometryError;
};
struct ZeroArea : GeometryError {
    using GeometryError::GeometryError;
};
struct InvalidFlag : GeometryError {
    using GeometryError::GeometryError;
};
struct NotRealNested : GeometryError {
    using GeometryError::GeometryError;
};
struct BracketFailure : GeometryError {
    using GeometryError::GeometryError;
};
struct TooFewPoints : GeometryError {
    using GeometryError::GeometryError;
};
struct EmptyDataset : GeometryError {
    using GeometryError::GeometryError;
};
struct InvalidPairing : GeometryError {
    using GeometryError::GeometryError;
};
struct AllSamplesDegenerate : GeometryError {
    using GeometryError::GeometryError;
};
struct NonConvergent : GeometryError {
    using GeometryError::GeometryError;
};
struct AntipodalDegeneracy : GeometryError {
    using GeometryError::GeometryError;
};
struct SouthernPoint : GeometryError {
    using GeometryError::GeometryError;
};

struct VertexAtInfinity : GeometryError {
    int index;
    explicit VertexAtInfinity(int i)
        : GeometryError("vertex at infinity, index " + std::to_string(i)), index(i) {}
};

struct CountMismatch : GeometryError {
    int found, expected;
    CountMismatch(int f, int e)
        : GeometryError("degenerate polygon count mismatch: found " + std::to_string(f) +
                        ", expected " + std::to_string(e)),
          found(f), expected(e) {}
};

}  // namespace poncelet
