#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ccn {

#ifdef CCN_SINGLE_PRECISION
using real_t = float;
#else
using real_t = double;
#endif

using index_t = std::int64_t;

/// Error type thrown on any precondition or format violation.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline void append_all(std::ostringstream&) {}
template <class T, class... Rest>
void append_all(std::ostringstream& os, const T& v, const Rest&... rest) {
    os << v;
    append_all(os, rest...);
}
} // namespace detail

template <class... Args>
std::string concat(const Args&... args) {
    std::ostringstream os;
    detail::append_all(os, args...);
    return os.str();
}

template <class... Args>
[[noreturn]] void fail(const Args&... args) {
    throw error(concat(args...));
}

template <class... Args>
void require(bool cond, const Args&... args) {
    if (!cond) fail(args...);
}

} // namespace ccn
