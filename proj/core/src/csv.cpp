#include "uamcap/csv.hpp"

#include <charconv>

namespace uam {

void append_double(std::string& out, double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

}  // namespace uam
