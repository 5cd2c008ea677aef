#ifndef LAPFIT_ERRORS_HPP
#define LAPFIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lapfit {

// Base class for all computation errors raised by the library. The CLI maps
// these to exit code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NotConnected : public Error {
public:
    explicit NotConnected(const std::string& msg = "graph is not connected") : Error(msg) {}
};

class NotAcyclic : public Error {
public:
    explicit NotAcyclic(const std::string& msg = "graph contains a cycle") : Error(msg) {}
};

class NotPositiveDefinite : public Error {
public:
    explicit NotPositiveDefinite(const std::string& msg = "matrix is not positive definite")
        : Error(msg) {}
};

// Closed-form weight would be infinite: zero mean squared difference at alpha = 0.
class DegenerateEdge : public Error {
public:
    explicit DegenerateEdge(const std::string& msg) : Error(msg) {}
};

class DegenerateLoop : public Error {
public:
    explicit DegenerateLoop(const std::string& msg) : Error(msg) {}
};

// The positively weighted edges of an oracle solution fail to span the graph.
class NoPositiveSpanningTree : public Error {
public:
    explicit NoPositiveSpanningTree(const std::string& msg = "positive edges do not span the graph")
        : Error(msg) {}
};

class ImageTooSmall : public Error {
public:
    explicit ImageTooSmall(const std::string& msg = "image too small") : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg = "dimension mismatch") : Error(msg) {}
};

class MalformedHeader : public Error {
public:
    explicit MalformedHeader(const std::string& msg) : Error(msg) {}
};

class TruncatedData : public Error {
public:
    explicit TruncatedData(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace lapfit

#endif
