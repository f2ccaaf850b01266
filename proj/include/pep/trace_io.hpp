#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pep/harness.hpp"

namespace pep {

class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line format, one record per line, fields separated by '|':
//   #trace|seed|intervention;intervention;...
//   #dictionary|path
//   #agent|A|sk|pk
//   #peer|A|B|RATING|key or -
//   #secret|session|sender|recipient|0 or 1|term
//   #knowledge|term
//   index|session|eventName|arg|...
// Terms use the canonical rendering, so equal traces give equal bytes.

void writeTrace(std::ostream& out, const Trace& t, const std::filesystem::path& dictionary = {});
std::string traceToString(const Trace& t, const std::filesystem::path& dictionary = {});

struct LoadedTrace {
    Trace trace;
    std::filesystem::path dictionary;  // empty if none recorded
};

/// Throws TraceFormatError with the offending line number.
LoadedTrace readTrace(std::istream& in);
LoadedTrace readTrace(const std::filesystem::path& path);

/// A trace set: traces separated by `#branch|n` lines, as written by explore.
/// A plain single-trace file reads as a set of one.
void writeBranch(std::ostream& out, std::size_t branch, const Trace& t,
                 const std::filesystem::path& dictionary = {});
std::vector<LoadedTrace> readTraceSet(std::istream& in);
std::vector<LoadedTrace> readTraceSet(const std::filesystem::path& path);

}  // namespace pep
