#include "codesign/uav.hpp"

#include <string>

#include "codesign/errors.hpp"

namespace codesign {

std::string_view to_string(SizeClass c) {
    switch (c) {
        case SizeClass::nano: return "nano";
        case SizeClass::micro: return "micro";
        case SizeClass::mini: return "mini";
    }
    return "?";
}

std::string_view to_string(EnvClass c) {
    switch (c) {
        case EnvClass::low: return "low";
        case EnvClass::medium: return "medium";
        case EnvClass::dense: return "dense";
    }
    return "?";
}

SizeClass parse_size_class(std::string_view s) {
    if (s == "nano") return SizeClass::nano;
    if (s == "micro") return SizeClass::micro;
    if (s == "mini") return SizeClass::mini;
    throw ParseError("unknown size class '" + std::string(s) + "'");
}

EnvClass parse_env_class(std::string_view s) {
    if (s == "low") return EnvClass::low;
    if (s == "medium") return EnvClass::medium;
    if (s == "dense") return EnvClass::dense;
    throw ParseError("unknown environment class '" + std::string(s) + "'");
}

}  // namespace codesign
