#pragma once

#include <stdexcept>
#include <string>

namespace lvequiv {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

#define LVEQUIV_ERROR(Name, tag)                                              \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(what) {}               \
        const char* kind() const noexcept override { return tag; }            \
    };

LVEQUIV_ERROR(InvalidGraph, "invalid_graph")
LVEQUIV_ERROR(InvalidVertex, "invalid_vertex")
LVEQUIV_ERROR(InvalidCycle, "invalid_cycle")
LVEQUIV_ERROR(PreconditionError, "precondition")
LVEQUIV_ERROR(SizeError, "size")
LVEQUIV_ERROR(NotAMatroid, "not_a_matroid")
LVEQUIV_ERROR(NotTransversal, "not_transversal")
LVEQUIV_ERROR(Infeasible, "infeasible")
LVEQUIV_ERROR(UnknownEndpoint, "unknown_endpoint")
LVEQUIV_ERROR(DegenerateModel, "degenerate_model")

#undef LVEQUIV_ERROR

// Malformed graph or matrix files; line and column are 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(format(what, line, column)), line_(line), column_(column) {}
    const char* kind() const noexcept override { return "parse"; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        if (line <= 0) return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }
    int line_;
    int column_;
};

}  // namespace lvequiv
