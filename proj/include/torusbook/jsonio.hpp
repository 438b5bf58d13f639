#pragma once

#include "torusbook/zlinalg.hpp"

#include "json.hpp"

namespace torusbook {

// Big integers serialize as JSON numbers while they fit in int64,
// as decimal strings beyond that.
inline nlohmann::json json_int(const Int& v) {
    static const Int lo = std::numeric_limits<std::int64_t>::min();
    static const Int hi = std::numeric_limits<std::int64_t>::max();
    if (v >= lo && v <= hi) return nlohmann::json(static_cast<std::int64_t>(v));
    return nlohmann::json(v.str());
}

inline Int int_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected integer or decimal string");
}

}  // namespace torusbook
